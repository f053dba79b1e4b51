#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace orlicz {

/// An Orlicz function on R: even, convex, nondecreasing on [0, inf), zero
/// exactly at 0. Values are immutable after construction.
///
/// Kinds:
///   power(p)          |t|^p
///   power_log(p)      |t|^p (1 + log(1 + |t|))
///   extension(b, q)   b(t) for |t| <= 1, b(1)|t|^q beyond
///   table(t, v)       piecewise linear through the knots, last slope beyond
class OrliczFn {
 public:
  enum class Kind { kPower, kPowerLog, kExtension, kTable };

  static OrliczFn power(double p);
  static OrliczFn power_log(double p);
  // Builds the piecewise extension with an explicit exponent. Use extend()
  // to get the exponent chosen from the left derivative at 1.
  static OrliczFn extension(const OrliczFn& base, double q);
  static OrliczFn table(std::vector<double> knots, std::vector<double> values);

  double operator()(double x) const;

  Kind kind() const { return kind_; }
  // Exponent of power / power_log; exponent q of an extension.
  double exponent() const { return exponent_; }
  const OrliczFn* base() const { return base_.get(); }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& knot_values() const { return values_; }

  double value_at_1() const { return value_at_1_; }
  // Left derivative at 1 when a closed form is known for this kind.
  std::optional<double> closed_form_left_derivative_at_1() const;
  // Closed form when registered, else the left difference quotient, h = 1e-7.
  double left_derivative_at_1() const;

 private:
  OrliczFn() = default;
  double eval_nonneg(double t) const;

  Kind kind_ = Kind::kPower;
  double exponent_ = 2.0;
  std::shared_ptr<const OrliczFn> base_;
  std::vector<double> knots_;
  std::vector<double> values_;
  double value_at_1_ = 1.0;
};

/// Sampling policy for grid-certified constants. A supremum is estimated on a
/// base grid and then on `refinement_rounds` further grids, each with twice
/// the density per axis and a log-range widened by one more copy of the base
/// range. It is declared unbounded when it grows by more than
/// `growth_threshold` in every refinement round.
struct SamplingPlan {
  int points_per_axis = 512;
  double global_lo = 1e-9;
  double global_hi = 1e9;
  double zero_lo = 1e-12;
  int refinement_rounds = 3;
  double growth_threshold = 0.10;
  // Index estimation.
  int index_points = 160;
  double index_step = 0.05;
  double index_q_max = 20.0;
  double index_cap = 2.0;
  double index_floor = 0.5;
  // derive_M_prime uses the closed-form maximizer unless this is false.
  bool closed_form_M_prime = true;
};

/// A grid supremum together with its refinement history and, when the
/// function kind admits one, the exact value. value() prefers the closed form.
struct SupEstimate {
  double grid_sup = 0.0;
  std::optional<double> closed_form;
  bool bounded = true;
  std::vector<double> round_sups;

  double value() const { return closed_form.value_or(grid_sup); }
};

enum class Delta2Domain { kAtZero, kGlobal };

/// Sample sup of phi(lambda s) / (lambda^p phi(s)), lambda in (0,1], s > 0.
SupEstimate estimate_type_constant(const OrliczFn& f, double p,
                                   const SamplingPlan& plan = {});

/// M * sup_{lambda in (0,1]} lambda^{p-1} |log lambda|^p.
double derive_M_prime(double M, double p, const SamplingPlan& plan = {});

/// sup_{lambda in (0,1]} lambda^{p-1} |log lambda|^p; attained at
/// lambda = exp(-p / (p - 1)).
double log_weight_sup(double p, const SamplingPlan& plan = {});

/// Sample sup of phi(2x) / phi(x).
SupEstimate delta2_constant(const OrliczFn& f, Delta2Domain domain,
                            const SamplingPlan& plan = {});

/// Sample sup of phi(x + y) / (phi(x) + phi(y)) over x, y > 0.
SupEstimate subadditivity_constant(const OrliczFn& f,
                                   const SamplingPlan& plan = {});

/// Sample sup of phi(B x) / phi(x) over x > 0. Equal to 1 for B <= 1.
SupEstimate scale_constant(const OrliczFn& f, double B,
                           const SamplingPlan& plan = {});

struct Indices {
  double alpha_lower = 0.0;
  double beta_upper = 0.0;
};

/// Grid estimates of the lower and upper Matuszewska-Orlicz indices.
Indices estimate_indices(const OrliczFn& f, const SamplingPlan& plan = {});

/// Replaces f beyond 1 by phi(1) x^q, q = max(phi'(1-) / phi(1), p).
/// Throws SchemaError for p <= 1 and UnboundedConstant when f fails the
/// Delta_2 condition at zero on the plan's grid.
OrliczFn extend(const OrliczFn& f, double p, const SamplingPlan& plan = {});

/// All scalar constants used by the quasi-convexity estimates, certified on
/// the sampling plan for a claimed type exponent p.
struct ScalarConstants {
  double p = 2.0;
  SupEstimate C;               // phi(x+y) <= C (phi(x) + phi(y))
  std::map<double, double> C_B;  // phi(Bx) <= C_B phi(x)
  SupEstimate M;               // type constant
  double S = 0.0;              // sup lambda^{p-1} |log lambda|^p
  double M_prime = 0.0;        // M * S
  SupEstimate delta2;
  SupEstimate delta2_at_zero;
  Indices indices;

  double c_b(double B) const;
};

/// An Orlicz function paired with constants certified for exponent p.
struct CertifiedOrlicz {
  OrliczFn f;
  ScalarConstants constants;
};

/// Certifies f for type exponent p. `scales` lists the B values whose C_B is
/// needed downstream (the Lipschitz constant of theta, typically).
/// Throws UnboundedConstant if the type constant or the global Delta_2
/// constant is unbounded on the grid.
CertifiedOrlicz certify(const OrliczFn& f, double p,
                        const std::vector<double>& scales = {1.0},
                        const SamplingPlan& plan = {});

}  // namespace orlicz
