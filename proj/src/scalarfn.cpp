#include "orlicz/scalarfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "orlicz/common.hpp"

namespace orlicz {

namespace {

constexpr double kLeftQuotientStep = 1e-7;

// Log-spaced grid on [lo, hi] with n points, both endpoints included.
std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) {
    g[static_cast<std::size_t>(i)] =
        (i == n - 1) ? hi : std::exp(a + (b - a) * i / (n - 1));
  }
  g.front() = lo;
  return g;
}

// Grid for refinement round r: density 2^r per axis, log-range scaled by
// (1 + r) around 1.
std::vector<double> round_grid(double lo, double hi, int base_points, int round) {
  const double widen = 1.0 + round;
  const double rlo = std::exp(std::log(lo) * widen);
  const double rhi = hi > 1.0 ? std::exp(std::log(hi) * widen) : hi;
  return log_grid(rlo, rhi, base_points << round);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

// Runs the refinement protocol on a per-round supremum.
template <typename RoundSup>
SupEstimate refine(const SamplingPlan& plan, RoundSup&& round_sup) {
  SupEstimate est;
  for (int r = 0; r <= plan.refinement_rounds; ++r) {
    est.round_sups.push_back(round_sup(r));
  }
  est.grid_sup = est.round_sups.back();
  if (!std::isfinite(est.grid_sup)) {
    est.bounded = false;
    return est;
  }
  if (plan.refinement_rounds > 0) {
    bool grew_every_round = true;
    for (std::size_t r = 1; r < est.round_sups.size(); ++r) {
      if (!(est.round_sups[r] > (1.0 + plan.growth_threshold) * est.round_sups[r - 1])) {
        grew_every_round = false;
      }
    }
    est.bounded = !grew_every_round;
  }
  return est;
}

void require_plan(const SamplingPlan& plan) {
  if (plan.points_per_axis < 2 || plan.refinement_rounds < 0 ||
      !(plan.global_lo > 0.0) || !(plan.global_hi > plan.global_lo) ||
      !(plan.zero_lo > 0.0 && plan.zero_lo < 1.0)) {
    throw SchemaError("invalid sampling plan");
  }
}

}  // namespace

OrliczFn OrliczFn::power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw SchemaError("power exponent must be a finite p > 1, got " + std::to_string(p));
  }
  OrliczFn f;
  f.kind_ = Kind::kPower;
  f.exponent_ = p;
  f.value_at_1_ = 1.0;
  return f;
}

OrliczFn OrliczFn::power_log(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw SchemaError("power_log exponent must be a finite p > 1, got " + std::to_string(p));
  }
  OrliczFn f;
  f.kind_ = Kind::kPowerLog;
  f.exponent_ = p;
  f.value_at_1_ = 1.0 + std::log(2.0);
  return f;
}

OrliczFn OrliczFn::extension(const OrliczFn& base, double q) {
  if (!(q > 1.0) || !std::isfinite(q)) {
    throw SchemaError("extension exponent must be a finite q > 1");
  }
  const double slope_ratio = base.left_derivative_at_1() / base.value_at_1();
  if (q < slope_ratio * (1.0 - 1e-12)) {
    throw SchemaError("extension exponent q = " + std::to_string(q) +
                      " breaks convexity at 1; need q >= " + std::to_string(slope_ratio));
  }
  OrliczFn f;
  f.kind_ = Kind::kExtension;
  f.exponent_ = q;
  f.base_ = std::make_shared<const OrliczFn>(base);
  f.value_at_1_ = base.value_at_1();
  return f;
}

OrliczFn OrliczFn::table(std::vector<double> knots, std::vector<double> values) {
  if (knots.size() != values.size() || knots.size() < 2) {
    throw SchemaError("table needs matching knot and value lists with at least 2 entries");
  }
  if (knots.front() != 0.0 || values.front() != 0.0) {
    throw SchemaError("table must start at (0, 0)");
  }
  double prev_slope = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1]) || !std::isfinite(knots[i])) {
      throw SchemaError("table knots must be strictly increasing");
    }
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw SchemaError("table values must be positive away from 0");
    }
    if (values[i] < values[i - 1]) throw SchemaError("table values must be nondecreasing");
    const double slope = (values[i] - values[i - 1]) / (knots[i] - knots[i - 1]);
    if (slope < prev_slope * (1.0 - 1e-12)) throw SchemaError("table must be convex");
    prev_slope = slope;
  }
  OrliczFn f;
  f.kind_ = Kind::kTable;
  f.knots_ = std::move(knots);
  f.values_ = std::move(values);
  f.value_at_1_ = f.eval_nonneg(1.0);
  return f;
}

double OrliczFn::eval_nonneg(double t) const {
  switch (kind_) {
    case Kind::kPower:
      return std::pow(t, exponent_);
    case Kind::kPowerLog:
      return std::pow(t, exponent_) * (1.0 + std::log1p(t));
    case Kind::kExtension:
      return t <= 1.0 ? (*base_)(t) : value_at_1_ * std::pow(t, exponent_);
    case Kind::kTable: {
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
      std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
      if (hi >= knots_.size()) hi = knots_.size() - 1;
      const std::size_t lo = hi - 1;
      const double slope = (values_[hi] - values_[lo]) / (knots_[hi] - knots_[lo]);
      return values_[lo] + slope * (t - knots_[lo]);
    }
  }
  return 0.0;
}

double OrliczFn::operator()(double x) const {
  const double t = std::abs(x);
  if (t == 0.0) return 0.0;
  return eval_nonneg(t);
}

std::optional<double> OrliczFn::closed_form_left_derivative_at_1() const {
  switch (kind_) {
    case Kind::kPower:
      return exponent_;
    case Kind::kPowerLog:
      return exponent_ * (1.0 + std::log(2.0)) + 0.5;
    case Kind::kExtension:
      return base_->closed_form_left_derivative_at_1();
    case Kind::kTable:
      return std::nullopt;
  }
  return std::nullopt;
}

double OrliczFn::left_derivative_at_1() const {
  if (auto d = closed_form_left_derivative_at_1()) return *d;
  return (eval_nonneg(1.0) - eval_nonneg(1.0 - kLeftQuotientStep)) / kLeftQuotientStep;
}

SupEstimate estimate_type_constant(const OrliczFn& f, double p, const SamplingPlan& plan) {
  if (!(p > 1.0)) throw SchemaError("type exponent must satisfy p > 1");
  require_plan(plan);
  SupEstimate est = refine(plan, [&](int r) {
    const auto lambdas = round_grid(plan.global_lo, 1.0, plan.points_per_axis, r);
    const auto ss = round_grid(plan.global_lo, plan.global_hi, plan.points_per_axis, r);
    std::vector<double> fs(ss.size());
    for (std::size_t j = 0; j < ss.size(); ++j) fs[j] = f(ss[j]);
    double sup = 0.0;
    for (double lam : lambdas) {
      const double lp = std::pow(lam, p);
      for (std::size_t j = 0; j < ss.size(); ++j) {
        const double den = lp * fs[j];
        if (!finite_positive(den)) continue;
        const double num = f(lam * ss[j]);
        if (!std::isfinite(num)) continue;
        sup = std::max(sup, num / den);
      }
    }
    return sup;
  });
  const bool power_like = f.kind() == OrliczFn::Kind::kPower ||
                          f.kind() == OrliczFn::Kind::kPowerLog;
  if (power_like && p <= f.exponent()) est.closed_form = 1.0;
  return est;
}

double log_weight_sup(double p, const SamplingPlan& plan) {
  if (!(p > 1.0)) throw SchemaError("log weight needs p > 1");
  if (plan.closed_form_M_prime) {
    // lambda^{p-1} |log lambda|^p at lambda = exp(-p/(p-1)).
    const double u = p / (p - 1.0);
    return std::exp(-(p - 1.0) * u) * std::pow(u, p);
  }
  // With u = -log(lambda): log g(u) = p log u - (p-1) u is concave, so a
  // coarse bracket followed by golden-section search finds the maximum.
  const auto log_g = [p](double u) { return p * std::log(u) - (p - 1.0) * u; };
  const double u_max = 700.0;
  const int n = 4096;
  double best_u = u_max / n;
  double best = log_g(best_u);
  for (int i = 2; i <= n; ++i) {
    const double u = u_max * i / n;
    if (log_g(u) > best) {
      best = log_g(u);
      best_u = u;
    }
  }
  double a = std::max(best_u - u_max / n, 1e-300);
  double b = std::min(best_u + u_max / n, u_max);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
    if (log_g(c) > log_g(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - inv_phi * (b - a);
    d = a + inv_phi * (b - a);
  }
  return std::exp(log_g(0.5 * (a + b)));
}

double derive_M_prime(double M, double p, const SamplingPlan& plan) {
  if (!std::isfinite(M)) throw SchemaError("M must be finite");
  return M * log_weight_sup(p, plan);
}

SupEstimate delta2_constant(const OrliczFn& f, Delta2Domain domain, const SamplingPlan& plan) {
  require_plan(plan);
  const bool at_zero = domain == Delta2Domain::kAtZero;
  SupEstimate est = refine(plan, [&](int r) {
    const auto xs = at_zero ? round_grid(plan.zero_lo, 1.0, plan.points_per_axis, r)
                            : round_grid(plan.global_lo, plan.global_hi, plan.points_per_axis, r);
    double sup = 0.0;
    for (double x : xs) {
      const double den = f(x);
      const double num = f(2.0 * x);
      if (!finite_positive(den) || !std::isfinite(num)) continue;
      sup = std::max(sup, num / den);
    }
    return sup;
  });
  if (f.kind() == OrliczFn::Kind::kPower) est.closed_form = std::pow(2.0, f.exponent());
  return est;
}

SupEstimate subadditivity_constant(const OrliczFn& f, const SamplingPlan& plan) {
  require_plan(plan);
  const auto xs = log_grid(plan.global_lo, plan.global_hi, plan.points_per_axis);
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);
  double sup = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i; j < xs.size(); ++j) {
      const double den = fs[i] + fs[j];
      const double num = f(xs[i] + xs[j]);
      if (!finite_positive(den) || !std::isfinite(num)) continue;
      sup = std::max(sup, num / den);
    }
  }
  SupEstimate est;
  est.grid_sup = sup;
  est.round_sups = {sup};
  if (f.kind() == OrliczFn::Kind::kPower) est.closed_form = std::pow(2.0, f.exponent() - 1.0);
  return est;
}

SupEstimate scale_constant(const OrliczFn& f, double B, const SamplingPlan& plan) {
  if (!(B > 0.0)) throw SchemaError("scale constant needs B > 0");
  require_plan(plan);
  SupEstimate est = refine(plan, [&](int r) {
    const auto xs = round_grid(plan.global_lo, plan.global_hi, plan.points_per_axis, r);
    double sup = 0.0;
    for (double x : xs) {
      const double den = f(x);
      const double num = f(B * x);
      if (!finite_positive(den) || !std::isfinite(num)) continue;
      sup = std::max(sup, num / den);
    }
    return sup;
  });
  if (B <= 1.0) {
    est.closed_form = 1.0;
  } else if (f.kind() == OrliczFn::Kind::kPower) {
    est.closed_form = std::pow(B, f.exponent());
  }
  return est;
}

Indices estimate_indices(const OrliczFn& f, const SamplingPlan& plan) {
  require_plan(plan);
  const auto grid = log_grid(plan.zero_lo, 1.0, plan.index_points);
  // For each (lambda, t): log phi(lambda t) - log phi(lambda), and log t.
  std::vector<double> log_ratio;
  std::vector<double> log_t;
  log_ratio.reserve(grid.size() * grid.size());
  log_t.reserve(grid.size() * grid.size());
  for (double lam : grid) {
    const double fl = f(lam);
    for (double t : grid) {
      const double ft = f(lam * t);
      if (!finite_positive(fl) || !finite_positive(ft)) continue;
      log_ratio.push_back(std::log(ft) - std::log(fl));
      log_t.push_back(std::log(t));
    }
  }
  const double log_cap = std::log(plan.index_cap);
  const double log_floor = std::log(plan.index_floor);
  const int steps = static_cast<int>(std::floor(plan.index_q_max / plan.index_step + 0.5));
  Indices out;
  out.beta_upper = std::numeric_limits<double>::infinity();
  bool beta_found = false;
  for (int k = 0; k <= steps; ++k) {
    const double q = k * plan.index_step;
    double sup = -std::numeric_limits<double>::infinity();
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < log_ratio.size(); ++i) {
      const double v = log_ratio[i] - q * log_t[i];
      sup = std::max(sup, v);
      inf = std::min(inf, v);
    }
    if (sup <= log_cap) out.alpha_lower = q;
    if (!beta_found && inf >= log_floor) {
      out.beta_upper = q;
      beta_found = true;
    }
  }
  if (out.alpha_lower > out.beta_upper) out.alpha_lower = out.beta_upper;
  return out;
}

OrliczFn extend(const OrliczFn& f, double p, const SamplingPlan& plan) {
  if (!(p > 1.0)) throw SchemaError("extend needs p > 1, got " + std::to_string(p));
  const SupEstimate d0 = delta2_constant(f, Delta2Domain::kAtZero, plan);
  if (!d0.bounded) {
    throw UnboundedConstant("function fails the Delta_2 condition at zero on the sampling grid");
  }
  const double q = std::max(f.left_derivative_at_1() / f.value_at_1(), p);
  return OrliczFn::extension(f, q);
}

double ScalarConstants::c_b(double B) const {
  if (B <= 1.0) return 1.0;
  const auto it = C_B.find(B);
  if (it == C_B.end()) {
    throw SchemaError("C_B was not certified for B = " + std::to_string(B));
  }
  return it->second;
}

CertifiedOrlicz certify(const OrliczFn& f, double p, const std::vector<double>& scales,
                        const SamplingPlan& plan) {
  if (!(p > 1.0)) throw SchemaError("type exponent must satisfy p > 1");
  ScalarConstants c;
  c.p = p;
  c.M = estimate_type_constant(f, p, plan);
  if (!c.M.bounded) {
    throw UnboundedConstant("type constant for p = " + std::to_string(p) +
                            " is unbounded on the sampling grid");
  }
  c.delta2 = delta2_constant(f, Delta2Domain::kGlobal, plan);
  if (!c.delta2.bounded) {
    throw UnboundedConstant("Delta_2 constant is unbounded on the sampling grid");
  }
  c.delta2_at_zero = delta2_constant(f, Delta2Domain::kAtZero, plan);
  c.C = subadditivity_constant(f, plan);
  for (double B : scales) {
    const SupEstimate cb = scale_constant(f, B, plan);
    if (!cb.bounded) throw UnboundedConstant("C_B is unbounded on the sampling grid");
    c.C_B[B] = cb.value();
  }
  c.S = log_weight_sup(p, plan);
  c.M_prime = c.M.value() * c.S;
  c.indices = estimate_indices(f, plan);
  return CertifiedOrlicz{f, std::move(c)};
}

}  // namespace orlicz
