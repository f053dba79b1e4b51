#include "orlicz/youngmap.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "orlicz/parallel.hpp"
#include "orlicz/rng.hpp"

namespace orlicz {

YoungMap::YoungMap(int dim, Eval eval, Traits traits, std::optional<Gradient> gradient,
                   std::string name)
    : dim_(dim),
      eval_(std::move(eval)),
      traits_(traits),
      gradient_(std::move(gradient)),
      name_(std::move(name)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw SchemaError("map dimension must be 1, 2 or 3");
  if (!eval_) throw SchemaError("map needs an evaluator");
  if (eval_(Point{}) != 0.0) throw SchemaError("map must vanish at the origin");
}

YoungMap YoungMap::from_orlicz(const OrliczFn& f) {
  return YoungMap(
      1, [f](const Point& x) { return f(x[0]); }, Traits{true, true}, std::nullopt, "orlicz");
}

YoungMap YoungMap::radial_power(int dim, double p) {
  if (!(p >= 1.0)) throw SchemaError("radial power needs p >= 1");
  auto eval = [dim, p](const Point& x) {
    const double r = norm2(x, dim);
    return p == 2.0 ? r * r : std::pow(r, p);
  };
  auto grad = [dim, p](const Point& x) {
    const double r = norm2(x, dim);
    if (r == 0.0) return Point{};
    const double c = p == 2.0 ? 2.0 : p * std::pow(r, p - 2.0);
    Point g{};
    for (int i = 0; i < dim; ++i) g[i] = c * x[i];
    return g;
  };
  return YoungMap(dim, eval, Traits{true, true}, grad,
                  "radial_power(" + std::to_string(dim) + "," + std::to_string(p) + ")");
}

Point YoungMap::gradient(const Point& x, double h) const {
  if (gradient_) return (*gradient_)(x);
  Point g{};
  for (int i = 0; i < dim_; ++i) {
    Point xp = x;
    Point xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (eval_(xp) - eval_(xm)) / (2.0 * h);
  }
  return g;
}

YoungMap YoungMap::scaled(double s) const {
  auto eval = [e = eval_, s](const Point& x) { return s * e(x); };
  std::optional<Gradient> grad;
  if (gradient_) grad = [g = *gradient_, s](const Point& x) { return scale(g(x), s); };
  Traits t = traits_;
  if (s <= 0.0) t = Traits{};
  return YoungMap(dim_, eval, t, grad, name_);
}

LipschitzTheta LipschitzTheta::soft_clip(double b) {
  if (!(b > 0.0)) throw SchemaError("soft_clip needs b > 0");
  return LipschitzTheta(Kind::kSoftClip, b);
}

YoungMap kalton_peck_map(const CertifiedOrlicz& cf, const LipschitzTheta& theta) {
  if (!cf.constants.M.bounded || !std::isfinite(cf.constants.M.value())) {
    throw SchemaError("kalton_peck_map needs a certified type constant");
  }
  auto eval = [f = cf.f, theta](const Point& v) {
    const double x = v[0];
    const double y = v[1];
    if (y == 0.0) return f(x);
    return f(y) + f(x - y * theta(std::log(1.0 / std::abs(y))));
  };
  return YoungMap(2, eval, YoungMap::Traits{false, false}, std::nullopt, "kalton_peck");
}

double kalton_peck_bound(const ScalarConstants& c, const LipschitzTheta& theta) {
  const double C = c.C.value();
  const double C_K = c.c_b(theta.lipschitz_constant());
  return std::max(1.0 + C * C_K + C * C * C * C_K * c.M_prime, C * C);
}

namespace {

struct Sample {
  Point t1{};
  Point t2{};
  double lambda = 0.0;
};

Sample draw(TrialRng& rng, int dim, std::uint64_t trial) {
  Sample s;
  if (trial == 0) {
    for (int i = 0; i < dim; ++i) s.t1[i] = 1.0;
    s.t2 = s.t1;
    s.lambda = 0.5;
    return s;
  }
  s.lambda = rng.uniform();
  switch (trial % 4) {
    case 0:
      for (int i = 0; i < dim; ++i) {
        s.t1[i] = rng.uniform(-2.0, 2.0);
        s.t2[i] = rng.uniform(-2.0, 2.0);
      }
      break;
    case 1: {
      const double r1 = rng.log_uniform(1e-3, 1e3);
      const double r2 = rng.log_uniform(1e-3, 1e3);
      for (int i = 0; i < dim; ++i) {
        s.t1[i] = r1 * rng.uniform(-1.0, 1.0);
        s.t2[i] = r2 * rng.uniform(-1.0, 1.0);
      }
      break;
    }
    default: {
      const int last = dim - 1;
      for (int i = 0; i < last; ++i) {
        s.t1[i] = rng.uniform(-2.0, 2.0);
        s.t2[i] = (trial % 4 == 3) ? s.t1[i] : rng.uniform(-2.0, 2.0);
      }
      const double sgn = rng.sign();
      s.t1[last] = sgn * rng.log_uniform(1e-6, 1.0);
      s.t2[last] = -sgn * rng.log_uniform(1e-6, 1.0);
      if (dim == 1) s.t2[0] = (trial % 4 == 3) ? 0.0 : s.t2[0];
      break;
    }
  }
  return s;
}

}  // namespace

QuasiConvexityEstimate quasiconvexity_constant(const YoungMap& m, std::uint64_t trials,
                                               std::uint64_t seed) {
  if (trials < 1) throw SchemaError("quasiconvexity_constant needs trials >= 1");
  const std::size_t chunks = chunk_count(trials);
  std::vector<QuasiConvexityEstimate> partial(chunks);
  parallel_chunks(trials, [&](std::size_t begin, std::size_t end, std::size_t w) {
    QuasiConvexityEstimate best;
    for (std::size_t i = begin; i < end; ++i) {
      TrialRng rng(seed, i);
      const Sample s = draw(rng, m.dim(), i);
      const double den = s.lambda * m(s.t1) + (1.0 - s.lambda) * m(s.t2);
      if (!(den >= 1e-300) || !std::isfinite(den)) {
        ++best.skipped;
        continue;
      }
      const double r = m(combine(s.lambda, s.t1, 1.0 - s.lambda, s.t2)) / den;
      if (r > best.L_hat) {
        best.L_hat = r;
        best.witness = {s.t1, s.t2, s.lambda};
      }
    }
    partial[w] = best;
  });
  QuasiConvexityEstimate out;
  out.trials = trials;
  for (const auto& p : partial) {
    out.skipped += p.skipped;
    if (p.L_hat > out.L_hat) {
      out.L_hat = p.L_hat;
      out.witness = p.witness;
    }
  }
  return out;
}

}  // namespace orlicz
