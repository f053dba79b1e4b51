#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orlicz/common.hpp"
#include "orlicz/rng.hpp"
#include "orlicz/youngmap.hpp"

namespace orlicz {

/// Minkowski gauge of {base <= alpha}: |x| = 1 / lambda where base(lambda x) = alpha.
/// Bisection on lambda from a [2^-64, 2^64] bracket; gauge(0) = 0.
/// Throws NumericFailure if base never reaches alpha along the ray.
double minkowski_gauge(const YoungMap& base, double alpha, const Point& x);

/// sup over the unit gauge sphere of <grad base(x), x>: the two points +-1/|+-1|
/// for n = 1, a 720-point angular grid for n = 2.
double level_constant(const YoungMap& base, double alpha);

/// The gauge of a selected level set together with its level constant M.
class GaugeSpec {
 public:
  GaugeSpec(YoungMap base, double alpha);

  const YoungMap& base() const { return base_; }
  int dim() const { return base_.dim(); }
  double alpha() const { return alpha_; }
  double M() const { return M_; }
  // For n = 1 the gauge of +-1 is solved once and scaled.
  double operator()(const Point& x) const;

 private:
  YoungMap base_;
  double alpha_;
  double M_;
  double pos_ = 0.0;
  double neg_ = 0.0;
};

/// The cap min(argmin_t (1 + base(t y)) / t, 1 / ||y||_2), by golden-section
/// in log t.
double tau(const YoungMap& base, const Point& y);

struct AlphaSelection {
  GaugeSpec gauge;
  int halvings = 0;
  double tau_inf = 0.0;  // sampled inf of base(tau(y) y) over ||y||_2 = 1/2
};

/// First alpha in 1, 1/2, 1/4, ... with level_constant <= 1 (up to 1e-9) and
/// alpha <= tau_inf. Throws NumericFailure after 60 halvings.
/// Only n = 1 and n = 2 are supported.
AlphaSelection select_alpha(const YoungMap& base);

struct PhiTilde {
  GaugeSpec gauge;
  YoungMap map;
  double continuity_gap = 0.0;        // max |base - alpha| on the level set
  double convexity_violation = 0.0;   // max midpoint excess on sampled segments
  double decreasing_violation = 0.0;  // max relative step increase of (1 + f(tx)) / t
  bool continuous = false;
  bool convex = false;
  bool decreasing = false;

  // Evaluation when the gauge of x is already known.
  double eval(const Point& x, double gauge_x) const;
};

struct PhiTildeOptions {
  int convexity_segments = 10000;
  int decreasing_rays = 1000;
  int decreasing_grid = 1000;
  std::uint64_t seed = 1;
};

/// x -> base(x) if gauge(x) <= 1, else alpha + M (gauge(x) - 1), with its
/// continuity, convexity and decreasing-ray certificates.
PhiTilde build_phitilde(const GaugeSpec& g, const PhiTildeOptions& opts = {});

/// N(x0, x) = |x0| (1 + phitilde(x / |x0|)), and M gauge(x) at x0 = 0.
class StarNorm {
 public:
  // Throws CertificateFailure if the decreasing certificate failed.
  explicit StarNorm(PhiTilde phitilde);

  int dim() const { return phitilde_.gauge.dim(); }
  const PhiTilde& phitilde() const { return phitilde_; }
  const GaugeSpec& gauge() const { return phitilde_.gauge; }
  double operator()(double x0, const Point& x) const;
  // Relative gap between the x0 = 0 branch and t (1 + phitilde(x / t)) at t = 1e-8.
  double limit_crosscheck(const Point& x) const;

 private:
  PhiTilde phitilde_;
};

/// A finite sequence of R^n blocks; block k occupies coordinates
/// (k-1)n+1 .. kn.
struct BlockSeq {
  int n = 1;
  std::vector<Point> blocks;

  BlockSeq scaled(double s) const;
  BlockSeq concat(const BlockSeq& tail) const;
  void validate() const;
};

/// value[0] = N(0, b_1), value[k] = N(value[k-1], b_{k+1}).
std::vector<double> star_iterate(const StarNorm& N, const BlockSeq& xi);

/// max of star_iterate, 0 for the empty sequence.
double lambda_norm(const StarNorm& N, const BlockSeq& xi);

struct SuffReport {
  std::vector<double> values;
  std::vector<double> products;  // running prod (1 + Phi(b_k))
  int steps_checked = 0;
  double max_violation = 0.0;    // max(0, value[k-1] (1 + Phi(b_k)) - value[k])
  bool holds = true;
};

/// Checks value[k] >= value[k-1] (1 + Phi(b_k)) - tol wherever value[k-1] is in (0, 1].
SuffReport suff_criterion_check(const StarNorm& N, const YoungMap& phi, const BlockSeq& xi,
                                double tol = 1e-9);

struct PrefixReport {
  double norm_u = 0.0;
  double norm_v = 0.0;
  double with_tail_u = 0.0;
  double with_tail_v = 0.0;
  double difference = 0.0;
  bool precondition_ok = false;
  std::string precondition_message;
  bool holds = false;
};

/// With Lambda(u) = Lambda(v) and each prefix ending at its maximum, checks
/// |Lambda(u ++ tail) - Lambda(v ++ tail)| <= tol. A failed precondition is
/// reported (holds = false), never passed.
PrefixReport prefix_substitution_check(const StarNorm& N, const BlockSeq& u, const BlockSeq& v,
                                       const BlockSeq& tail, double tol = 1e-9);

/// shape scaled by s, with s found by bisection so that Lambda equals target.
BlockSeq match_lambda_norm(const StarNorm& N, const BlockSeq& shape, double target);

struct ViolationReport {
  double max_violation = 0.0;
  std::uint64_t samples = 0;
  std::vector<double> witness;  // flattened sample that attained the max
};

/// Relative triangle excess (N(a+b) - N(a) - N(b)) / (N(a) + N(b)) over random
/// triples with log-uniform magnitudes in [1e-3, 1e3] and uniform signs;
/// one in eight samples sets a first coordinate to zero.
ViolationReport triangle_check(const StarNorm& N, std::uint64_t samples, std::uint64_t seed);

/// max of N(x0, x) - N(x0', x) over sampled 0 <= x0 <= x0', relative to N(x0', x).
ViolationReport monotonicity_check(const StarNorm& N, std::uint64_t samples,
                                   std::uint64_t seed);

/// Random block sequence: length uniform in 1..max_len, each block zero with
/// probability 1/4, otherwise components sign * log-uniform[1e-2, 1e2]
/// (a component of an n = 2 block is zero with probability 1/4).
BlockSeq random_blocks(TrialRng& rng, int n, int max_len = 8);

struct SuffCertificate {
  std::uint64_t trials = 0;
  std::uint64_t steps_checked = 0;
  std::uint64_t failures = 0;
  double max_violation = 0.0;
  bool holds = true;
};

/// Random block sequences rescaled to Lambda-norm uniform in (0.05, 1], each
/// run through suff_criterion_check with Phi = phitilde.
SuffCertificate suff_certificate(const StarNorm& N, std::uint64_t trials, std::uint64_t seed,
                                 double tol = 1e-9);

struct SubstitutionCertificate {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::uint64_t precondition_failures = 0;
  double max_difference = 0.0;
  bool holds = true;
};

/// Triples (u, v, tail): u random with Lambda(u) uniform in [0.5, 2], v a
/// random shape matched to Lambda(u) by match_lambda_norm (v = u for one
/// trial in four), tail random.
SubstitutionCertificate property_m_certificate(const StarNorm& N, std::uint64_t trials,
                                               std::uint64_t seed, double tol = 1e-9);

struct Pipeline {
  AlphaSelection selection;
  PhiTilde phitilde;
  StarNorm N;
};

/// select_alpha, build_phitilde, build the star norm.
Pipeline build_pipeline(const YoungMap& base, const PhiTildeOptions& opts = {});

/// base = t^2 on R^n (n = 1 or 2).
Pipeline t2_pipeline(int n = 1, const PhiTildeOptions& opts = {});

}  // namespace orlicz
