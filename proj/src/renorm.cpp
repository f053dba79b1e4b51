#include "orlicz/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "orlicz/parallel.hpp"
#include "orlicz/rng.hpp"

namespace orlicz {

namespace {

constexpr int kAngularPoints = 720;
constexpr double kAlphaTol = 1e-9;

void require_supported_dim(int n) {
  if (n != 1 && n != 2) throw SchemaError("renorming supports n = 1 and n = 2 only");
}

// Unit directions sampling the sphere: +-1 for n = 1, an angular grid for n = 2.
std::vector<Point> sphere_directions(int n) {
  if (n == 1) return {Point{1.0, 0.0, 0.0}, Point{-1.0, 0.0, 0.0}};
  std::vector<Point> out;
  out.reserve(kAngularPoints);
  for (int k = 0; k < kAngularPoints; ++k) {
    const double a = 2.0 * std::numbers::pi * k / kAngularPoints;
    out.push_back({std::cos(a), std::sin(a), 0.0});
  }
  return out;
}

// <grad base(x), x>. Differencing the full gradient near 0 would straddle the
// origin, so inside the 1e-4 ball the directional quotient along x is used.
double radial_slope(const YoungMap& base, const Point& x) {
  constexpr double h = 1e-6;
  const int n = base.dim();
  if (base.has_analytic_gradient() || norm2(x, n) >= 1e-4) {
    const Point g = base.gradient(x, h);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += g[i] * x[i];
    return s;
  }
  return (base(scale(x, 1.0 + h)) - base(scale(x, 1.0 - h))) / (2.0 * h);
}

Point random_direction(TrialRng& rng, int n) {
  if (n == 1) return {rng.sign(), 0.0, 0.0};
  const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return {std::cos(a), std::sin(a), 0.0};
}

Point random_vector(TrialRng& rng, int n, double lo, double hi) {
  Point x{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) x[i] = rng.sign() * rng.log_uniform(lo, hi);
  return x;
}

}  // namespace

double minkowski_gauge(const YoungMap& base, double alpha, const Point& x) {
  if (is_zero(x)) return 0.0;
  if (!(alpha > 0.0)) throw SchemaError("gauge level alpha must be positive");
  const double r = norm2(x, base.dim());
  const double start = 1.0 / r;
  const double kLimit = std::ldexp(1.0, 64);
  auto level = [&](double lambda) { return base(scale(x, lambda)); };
  double lo = start;
  double hi = start;
  if (level(start) >= alpha) {
    while (level(lo) >= alpha) {
      hi = lo;
      lo *= 0.5;
      if (lo < start / kLimit) throw NumericFailure("gauge bracket underflow below 2^-64");
    }
  } else {
    while (level(hi) < alpha) {
      lo = hi;
      hi *= 2.0;
      if (hi > start * kLimit) throw NumericFailure("base never reaches alpha along the ray");
    }
  }
  // level(lo) < alpha <= level(hi); bisect to adjacent doubles.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (level(mid) < alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 2.0 / (lo + hi);
}

double level_constant(const YoungMap& base, double alpha) {
  require_supported_dim(base.dim());
  double m = -std::numeric_limits<double>::infinity();
  for (const Point& u : sphere_directions(base.dim())) {
    const Point x = scale(u, 1.0 / minkowski_gauge(base, alpha, u));
    m = std::max(m, radial_slope(base, x));
  }
  return m;
}

GaugeSpec::GaugeSpec(YoungMap base, double alpha) : base_(std::move(base)), alpha_(alpha) {
  require_supported_dim(base_.dim());
  if (!(alpha_ > 0.0)) throw SchemaError("gauge level alpha must be positive");
  M_ = level_constant(base_, alpha_);
  if (base_.dim() == 1) {
    pos_ = minkowski_gauge(base_, alpha_, Point{1.0, 0.0, 0.0});
    neg_ = minkowski_gauge(base_, alpha_, Point{-1.0, 0.0, 0.0});
  }
}

double GaugeSpec::operator()(const Point& x) const {
  if (base_.dim() == 1) {
    if (x[0] > 0.0) return x[0] * pos_;
    if (x[0] < 0.0) return -x[0] * neg_;
    return 0.0;
  }
  return minkowski_gauge(base_, alpha_, x);
}

double tau(const YoungMap& base, const Point& y) {
  const double r = norm2(y, base.dim());
  if (r == 0.0) throw SchemaError("tau needs y != 0");
  const double cap = 1.0 / r;
  auto h = [&](double s) {
    const double t = std::exp(s);
    return (1.0 + base(scale(y, t))) / t;
  };
  constexpr double kInvPhi = 0.6180339887498949;
  double a = std::log(cap) - 40.0;
  double b = std::log(cap);
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double hc = h(c);
  double hd = h(d);
  while (b - a > 1e-12) {
    if (hc <= hd) {
      b = d;
      d = c;
      hd = hc;
      c = b - kInvPhi * (b - a);
      hc = h(c);
    } else {
      a = c;
      c = d;
      hc = hd;
      d = a + kInvPhi * (b - a);
      hd = h(d);
    }
  }
  return std::min(std::exp(0.5 * (a + b)), cap);
}

AlphaSelection select_alpha(const YoungMap& base) {
  require_supported_dim(base.dim());
  if (base(Point{0.0, 0.0, 0.0}) != 0.0) throw SchemaError("base must vanish at 0");
  double tau_inf = std::numeric_limits<double>::infinity();
  for (const Point& u : sphere_directions(base.dim())) {
    const Point y = scale(u, 0.5);
    tau_inf = std::min(tau_inf, base(scale(y, tau(base, y))));
  }
  for (int j = 0; j <= 60; ++j) {
    const double alpha = std::ldexp(1.0, -j);
    if (alpha > tau_inf) continue;
    if (level_constant(base, alpha) <= 1.0 + kAlphaTol) {
      return AlphaSelection{GaugeSpec(base, alpha), j, tau_inf};
    }
  }
  throw NumericFailure("no admissible alpha after 60 halvings");
}

double PhiTilde::eval(const Point& x, double gauge_x) const {
  if (gauge_x <= 1.0) return gauge.base()(x);
  return gauge.alpha() + gauge.M() * (gauge_x - 1.0);
}

PhiTilde build_phitilde(const GaugeSpec& g, const PhiTildeOptions& opts) {
  const int n = g.dim();
  auto shared = std::make_shared<const GaugeSpec>(g);
  YoungMap map(
      n,
      [shared](const Point& x) {
        const double gx = (*shared)(x);
        if (gx <= 1.0) return shared->base()(x);
        return shared->alpha() + shared->M() * (gx - 1.0);
      },
      {true, true}, std::nullopt, "phitilde");
  PhiTilde out{g, std::move(map)};

  for (const Point& u : sphere_directions(n)) {
    const Point x = scale(u, 1.0 / g(u));
    out.continuity_gap = std::max(out.continuity_gap, std::abs(g.base()(x) - g.alpha()));
  }
  out.continuous = out.continuity_gap <= 1e-9 * std::max(1.0, g.alpha());

  const auto segs = static_cast<std::size_t>(std::max(0, opts.convexity_segments));
  std::vector<double> conv(chunk_count(segs), 0.0);
  parallel_chunks(segs, [&](std::size_t begin, std::size_t end, std::size_t w) {
    double worst = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      TrialRng rng(opts.seed, i);
      const Point a = random_vector(rng, n, 1e-2, 1e2);
      const Point b = random_vector(rng, n, 1e-2, 1e2);
      const double fa = out.map(a);
      const double fb = out.map(b);
      for (double t : {0.25, 0.5, 0.75}) {
        const double rhs = t * fa + (1.0 - t) * fb;
        const double lhs = out.map(combine(t, a, 1.0 - t, b));
        worst = std::max(worst, (lhs - rhs) / std::max(1.0, rhs));
      }
    }
    conv[w] = worst;
  });
  out.convexity_violation = *std::max_element(conv.begin(), conv.end());
  out.convex = out.convexity_violation <= 1e-9;

  const auto rays = static_cast<std::size_t>(std::max(0, opts.decreasing_rays));
  const int grid = std::max(2, opts.decreasing_grid);
  std::vector<double> dec(chunk_count(rays), 0.0);
  parallel_chunks(rays, [&](std::size_t begin, std::size_t end, std::size_t w) {
    double worst = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      TrialRng rng(opts.seed + 1, i);
      const Point x = scale(random_direction(rng, n), rng.log_uniform(1e-2, 1e2));
      const double gx = g(x);
      double prev = 0.0;
      for (int k = 0; k < grid; ++k) {
        const double t = std::pow(10.0, -3.0 + 6.0 * k / (grid - 1));
        const double h = (1.0 + out.eval(scale(x, t), t * gx)) / t;
        if (k > 0) worst = std::max(worst, (h - prev) / prev);
        prev = h;
      }
    }
    dec[w] = worst;
  });
  out.decreasing_violation = *std::max_element(dec.begin(), dec.end());
  out.decreasing = out.decreasing_violation <= 1e-10;
  return out;
}

StarNorm::StarNorm(PhiTilde phitilde) : phitilde_(std::move(phitilde)) {
  if (!phitilde_.decreasing) {
    throw CertificateFailure("phitilde failed the decreasing-ray certificate");
  }
}

double StarNorm::operator()(double x0, const Point& x) const {
  const double a = std::abs(x0);
  if (is_zero(x)) return a;
  const GaugeSpec& g = phitilde_.gauge;
  const double gx = g(x);
  if (a == 0.0) return g.M() * gx;
  if (gx <= a) return a + a * g.base()(scale(x, 1.0 / a));
  return a + a * g.alpha() + g.M() * (gx - a);
}

double StarNorm::limit_crosscheck(const Point& x) const {
  constexpr double t = 1e-8;
  const double limit = (*this)(0.0, x);
  const double near = t * (1.0 + phitilde_.map(scale(x, 1.0 / t)));
  return std::abs(near - limit) / limit;
}

BlockSeq BlockSeq::scaled(double s) const {
  BlockSeq out{n, {}};
  out.blocks.reserve(blocks.size());
  for (const auto& b : blocks) out.blocks.push_back(scale(b, s));
  return out;
}

BlockSeq BlockSeq::concat(const BlockSeq& tail) const {
  if (tail.n != n) throw SchemaError("block sizes differ");
  BlockSeq out = *this;
  out.blocks.insert(out.blocks.end(), tail.blocks.begin(), tail.blocks.end());
  return out;
}

void BlockSeq::validate() const {
  require_supported_dim(n);
  for (const auto& b : blocks) {
    for (int i = 0; i < kMaxDim; ++i) {
      if (!std::isfinite(b[i])) throw SchemaError("block entries must be finite");
      if (i >= n && b[i] != 0.0) throw SchemaError("block has more than n entries");
    }
  }
}

std::vector<double> star_iterate(const StarNorm& N, const BlockSeq& xi) {
  xi.validate();
  if (xi.n != N.dim()) throw SchemaError("block size does not match the norm's dimension");
  std::vector<double> values;
  values.reserve(xi.blocks.size());
  double v = 0.0;
  for (const auto& b : xi.blocks) {
    v = N(v, b);
    values.push_back(v);
  }
  return values;
}

double lambda_norm(const StarNorm& N, const BlockSeq& xi) {
  const auto values = star_iterate(N, xi);
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

SuffReport suff_criterion_check(const StarNorm& N, const YoungMap& phi, const BlockSeq& xi,
                                double tol) {
  if (phi.dim() != xi.n) throw SchemaError("Phi dimension does not match the blocks");
  SuffReport out;
  out.values = star_iterate(N, xi);
  double prod = 1.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < xi.blocks.size(); ++k) {
    const double step = 1.0 + phi(xi.blocks[k]);
    prod *= step;
    out.products.push_back(prod);
    if (prev > 0.0 && prev <= 1.0) {
      ++out.steps_checked;
      out.max_violation = std::max(out.max_violation, prev * step - out.values[k]);
    }
    prev = out.values[k];
  }
  out.holds = out.max_violation <= tol;
  return out;
}

PrefixReport prefix_substitution_check(const StarNorm& N, const BlockSeq& u, const BlockSeq& v,
                                       const BlockSeq& tail, double tol) {
  PrefixReport out;
  const auto vu = star_iterate(N, u);
  const auto vv = star_iterate(N, v);
  auto norm_of = [](const std::vector<double>& xs) {
    return xs.empty() ? 0.0 : *std::max_element(xs.begin(), xs.end());
  };
  out.norm_u = norm_of(vu);
  out.norm_v = norm_of(vv);
  const double scale_ref = std::max({1.0, out.norm_u, out.norm_v});
  const double final_u = vu.empty() ? 0.0 : vu.back();
  const double final_v = vv.empty() ? 0.0 : vv.back();
  if (std::abs(out.norm_u - out.norm_v) > 1e-12 * scale_ref) {
    out.precondition_message = "prefix norms differ";
  } else if (std::abs(final_u - out.norm_u) > 1e-12 * scale_ref) {
    out.precondition_message = "u attains its norm before its last block";
  } else if (std::abs(final_v - out.norm_v) > 1e-12 * scale_ref) {
    out.precondition_message = "v attains its norm before its last block";
  } else {
    out.precondition_ok = true;
  }
  out.with_tail_u = lambda_norm(N, u.concat(tail));
  out.with_tail_v = lambda_norm(N, v.concat(tail));
  out.difference = std::abs(out.with_tail_u - out.with_tail_v);
  out.holds = out.precondition_ok && out.difference <= tol;
  return out;
}

BlockSeq match_lambda_norm(const StarNorm& N, const BlockSeq& shape, double target) {
  if (!(target >= 0.0) || !std::isfinite(target)) throw SchemaError("target must be >= 0");
  if (target == 0.0) return shape.scaled(0.0);
  if (lambda_norm(N, shape) == 0.0) throw SchemaError("cannot rescale a zero block sequence");
  auto value = [&](double s) { return lambda_norm(N, shape.scaled(s)); };
  double lo = 0.0;
  double hi = 1.0;
  while (value(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > std::ldexp(1.0, 64)) throw NumericFailure("rescaling bracket overflow");
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (value(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double s = std::abs(value(lo) - target) < std::abs(value(hi) - target) ? lo : hi;
  return shape.scaled(s);
}

ViolationReport triangle_check(const StarNorm& N, std::uint64_t samples, std::uint64_t seed) {
  const int n = N.dim();
  std::vector<ViolationReport> partial(chunk_count(samples));
  parallel_chunks(samples, [&](std::size_t begin, std::size_t end, std::size_t w) {
    ViolationReport best;
    best.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = begin; i < end; ++i) {
      TrialRng rng(seed, i);
      double a0 = rng.sign() * rng.log_uniform(1e-3, 1e3);
      double b0 = rng.sign() * rng.log_uniform(1e-3, 1e3);
      const Point a = random_vector(rng, n, 1e-3, 1e3);
      const Point b = random_vector(rng, n, 1e-3, 1e3);
      switch (i % 8) {
        case 1: a0 = 0.0; break;
        case 2: b0 = 0.0; break;
        case 3: b0 = -a0; break;
        default: break;
      }
      const double na = N(a0, a);
      const double nb = N(b0, b);
      const double r = (N(a0 + b0, add(a, b)) - na - nb) / (na + nb);
      if (r > best.max_violation) {
        best.max_violation = r;
        best.witness = {a0, a[0], a[1], b0, b[0], b[1]};
      }
    }
    partial[w] = std::move(best);
  });
  ViolationReport out;
  out.samples = samples;
  out.max_violation = -std::numeric_limits<double>::infinity();
  for (auto& p : partial) {
    if (p.max_violation > out.max_violation) {
      out.max_violation = p.max_violation;
      out.witness = std::move(p.witness);
    }
  }
  return out;
}

ViolationReport monotonicity_check(const StarNorm& N, std::uint64_t samples,
                                   std::uint64_t seed) {
  const int n = N.dim();
  std::vector<ViolationReport> partial(chunk_count(samples));
  parallel_chunks(samples, [&](std::size_t begin, std::size_t end, std::size_t w) {
    ViolationReport best;
    best.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = begin; i < end; ++i) {
      TrialRng rng(seed, i);
      double s = rng.log_uniform(1e-3, 1e3);
      double t = rng.log_uniform(1e-3, 1e3);
      if (s > t) std::swap(s, t);
      if (i % 8 == 1) s = 0.0;
      const Point x = random_vector(rng, n, 1e-3, 1e3);
      const double upper = N(t, x);
      const double r = (N(s, x) - upper) / upper;
      if (r > best.max_violation) {
        best.max_violation = r;
        best.witness = {s, t, x[0], x[1]};
      }
    }
    partial[w] = std::move(best);
  });
  ViolationReport out;
  out.samples = samples;
  out.max_violation = -std::numeric_limits<double>::infinity();
  for (auto& p : partial) {
    if (p.max_violation > out.max_violation) {
      out.max_violation = p.max_violation;
      out.witness = std::move(p.witness);
    }
  }
  return out;
}

BlockSeq random_blocks(TrialRng& rng, int n, int max_len) {
  require_supported_dim(n);
  BlockSeq xi{n, {}};
  const auto len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, max_len))));
  for (int k = 0; k < len; ++k) {
    Point b{0.0, 0.0, 0.0};
    if (rng.below(4) != 0) {
      for (int i = 0; i < n; ++i) {
        if (n == 1 || rng.below(4) != 0) b[i] = rng.sign() * rng.log_uniform(1e-2, 1e2);
      }
    }
    xi.blocks.push_back(b);
  }
  return xi;
}

SuffCertificate suff_certificate(const StarNorm& N, std::uint64_t trials, std::uint64_t seed,
                                 double tol) {
  std::vector<SuffCertificate> partial(chunk_count(trials));
  parallel_chunks(trials, [&](std::size_t begin, std::size_t end, std::size_t w) {
    SuffCertificate acc;
    for (std::size_t i = begin; i < end; ++i) {
      TrialRng rng(seed, i);
      BlockSeq xi = random_blocks(rng, N.dim());
      const double norm = lambda_norm(N, xi);
      if (norm == 0.0) continue;
      xi = xi.scaled(rng.uniform(0.05, 1.0) / norm);
      const SuffReport r = suff_criterion_check(N, N.phitilde().map, xi, tol);
      acc.steps_checked += static_cast<std::uint64_t>(r.steps_checked);
      acc.max_violation = std::max(acc.max_violation, r.max_violation);
      if (!r.holds) ++acc.failures;
    }
    partial[w] = acc;
  });
  SuffCertificate out;
  out.trials = trials;
  for (const auto& p : partial) {
    out.steps_checked += p.steps_checked;
    out.failures += p.failures;
    out.max_violation = std::max(out.max_violation, p.max_violation);
  }
  out.holds = out.failures == 0;
  return out;
}

SubstitutionCertificate property_m_certificate(const StarNorm& N, std::uint64_t trials,
                                               std::uint64_t seed, double tol) {
  const int n = N.dim();
  auto nonzero_blocks = [&](TrialRng& rng, int max_len) {
    BlockSeq xi = random_blocks(rng, n, max_len);
    if (is_zero(xi.blocks.front())) xi.blocks.front()[0] = rng.sign() * rng.log_uniform(1e-2, 1e2);
    return xi;
  };
  std::vector<SubstitutionCertificate> partial(chunk_count(trials));
  parallel_chunks(trials, [&](std::size_t begin, std::size_t end, std::size_t w) {
    SubstitutionCertificate acc;
    for (std::size_t i = begin; i < end; ++i) {
      TrialRng rng(seed, i);
      BlockSeq u = nonzero_blocks(rng, 6);
      u = match_lambda_norm(N, u, rng.uniform(0.5, 2.0));
      const BlockSeq v = i % 4 == 0 ? u : match_lambda_norm(N, nonzero_blocks(rng, 4),
                                                           lambda_norm(N, u));
      const BlockSeq tail = random_blocks(rng, n, 8);
      const PrefixReport r = prefix_substitution_check(N, u, v, tail, tol);
      if (!r.precondition_ok) ++acc.precondition_failures;
      if (!r.holds) ++acc.failures;
      acc.max_difference = std::max(acc.max_difference, r.difference);
    }
    partial[w] = acc;
  });
  SubstitutionCertificate out;
  out.trials = trials;
  for (const auto& p : partial) {
    out.failures += p.failures;
    out.precondition_failures += p.precondition_failures;
    out.max_difference = std::max(out.max_difference, p.max_difference);
  }
  out.holds = out.failures == 0;
  return out;
}

Pipeline build_pipeline(const YoungMap& base, const PhiTildeOptions& opts) {
  AlphaSelection sel = select_alpha(base);
  PhiTilde pt = build_phitilde(sel.gauge, opts);
  StarNorm N(pt);
  return Pipeline{std::move(sel), std::move(pt), std::move(N)};
}

Pipeline t2_pipeline(int n, const PhiTildeOptions& opts) {
  require_supported_dim(n);
  return build_pipeline(YoungMap::squared_norm(n), opts);
}

}  // namespace orlicz
