#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "orlicz/common.hpp"
#include "orlicz/scalarfn.hpp"

namespace orlicz {

/// An even nonnegative map on R^n, n in {1, 2, 3}, vanishing at 0.
///
/// `radially_monotone` promises that t -> m(t x) is nondecreasing on
/// [0, inf); Luxemburg norms are only defined for such maps. `convex` marks
/// maps that are convex by construction (Young's functions). Both are
/// declarations checked by the property tests, not at every evaluation.
class YoungMap {
 public:
  using Eval = std::function<double(const Point&)>;
  using Gradient = std::function<Point(const Point&)>;

  struct Traits {
    bool radially_monotone = false;
    bool convex = false;
  };

  YoungMap(int dim, Eval eval, Traits traits, std::optional<Gradient> gradient = std::nullopt,
           std::string name = {});

  static YoungMap from_orlicz(const OrliczFn& f);
  // ||x||_2^p on R^dim (p >= 1), with its analytic gradient.
  static YoungMap radial_power(int dim, double p);
  static YoungMap squared_norm(int dim) { return radial_power(dim, 2.0); }

  int dim() const { return dim_; }
  double operator()(const Point& x) const { return eval_(x); }
  bool radially_monotone() const { return traits_.radially_monotone; }
  bool convex() const { return traits_.convex; }
  const Traits& traits() const { return traits_; }
  const std::string& name() const { return name_; }
  bool has_analytic_gradient() const { return gradient_.has_value(); }

  // Analytic gradient when registered, else central differences with step h.
  Point gradient(const Point& x, double h = 1e-6) const;

  // s * m, with the same traits for s > 0.
  YoungMap scaled(double s) const;

 private:
  int dim_;
  Eval eval_;
  Traits traits_;
  std::optional<Gradient> gradient_;
  std::string name_;
};

/// Lipschitz map theta with theta(0) = 0.
class LipschitzTheta {
 public:
  enum class Kind { kIdentity, kScale, kSoftClip };

  static LipschitzTheta identity() { return LipschitzTheta(Kind::kIdentity, 1.0); }
  static LipschitzTheta scale(double a) { return LipschitzTheta(Kind::kScale, a); }
  // b * tanh(t / b), b > 0.
  static LipschitzTheta soft_clip(double b);

  double operator()(double t) const {
    switch (kind_) {
      case Kind::kIdentity:
        return t;
      case Kind::kScale:
        return param_ * t;
      case Kind::kSoftClip:
        return param_ * std::tanh(t / param_);
    }
    return t;
  }

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  double lipschitz_constant() const { return kind_ == Kind::kScale ? std::abs(param_) : 1.0; }

 private:
  LipschitzTheta(Kind kind, double param) : kind_(kind), param_(param) {}
  Kind kind_;
  double param_;
};

/// Phi(x, y) = phi(y) + phi(x - y theta(log(1/|y|))) for y != 0, phi(x) for
/// y = 0. Quasi-convex but in general not convex.
YoungMap kalton_peck_map(const CertifiedOrlicz& f, const LipschitzTheta& theta);

/// max(1 + C C_K + C^3 C_K M', C^2): the quasi-convexity constant guaranteed
/// for kalton_peck_map(f, theta).
double kalton_peck_bound(const ScalarConstants& c, const LipschitzTheta& theta);

struct QuasiConvexityWitness {
  Point t1{};
  Point t2{};
  double lambda = 0.0;
};

struct QuasiConvexityEstimate {
  double L_hat = 0.0;
  QuasiConvexityWitness witness;
  std::uint64_t trials = 0;
  std::uint64_t skipped = 0;
};

/// Sample max of m(l t1 + (1-l) t2) / (l m(t1) + (1-l) m(t2)).
///
/// Trial 0 is the identity pair t1 = t2. Remaining trials rotate through
/// uniform pairs in [-2, 2]^n, pairs at log-uniform scales in [1e-3, 1e3],
/// and directed pairs whose last coordinates have opposite signs and
/// log-uniform magnitudes in [1e-6, 1] (with and without a shared first
/// coordinate), where the twist of kalton_peck_map is strongest.
QuasiConvexityEstimate quasiconvexity_constant(const YoungMap& m, std::uint64_t trials,
                                               std::uint64_t seed);

}  // namespace orlicz
