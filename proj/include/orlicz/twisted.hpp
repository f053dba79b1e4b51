#pragma once

#include <cstdint>
#include <string>

#include "orlicz/envelope.hpp"
#include "orlicz/rng.hpp"
#include "orlicz/scalarfn.hpp"
#include "orlicz/seqspace.hpp"
#include "orlicz/youngmap.hpp"

namespace orlicz {

/// An element (x_n, y_n)_n of the twisted sum; x and y are scalar sequences.
struct PairSeq {
  VecSeq x{1};
  VecSeq y{1};

  PairSeq() = default;
  PairSeq(VecSeq x_, VecSeq y_);
  bool empty() const { return x.empty() && y.empty(); }
  PairSeq scaled(double s) const { return PairSeq(x.scaled(s), y.scaled(s)); }
  friend PairSeq operator+(const PairSeq& a, const PairSeq& b) {
    return PairSeq(a.x + b.x, a.y + b.y);
  }
  // The dim-2 sequence of vectors (x_k, y_k) over the union of supports.
  VecSeq interleaved() const;
  static PairSeq from_interleaved(const VecSeq& s);
};

/// ell_phi twisted with itself by F(y)_n = y_n theta(log(||y|| / |y_n|)),
/// with Phi its quasi-convex functional on R^2 and Psi = co(Phi) on a grid.
struct TwistedSpace {
  CertifiedOrlicz f;
  LipschitzTheta theta;
  YoungMap phi_kp;
  EnvelopeBackedMap psi;
  std::string preset;

  static TwistedSpace make(const OrliczFn& f, double p, const LipschitzTheta& theta,
                           double psi_halfwidth = 2.0, int psi_resolution = 41,
                           const SamplingPlan& plan = {});
  // phi = t^2, theta = identity.
  static TwistedSpace z2(double psi_halfwidth = 2.0, int psi_resolution = 41);
  // phi = t^p, theta = identity.
  static TwistedSpace zp(double p, double psi_halfwidth = 2.0, int psi_resolution = 41);
  // phi = t^p, theta = b tanh(t / b).
  static TwistedSpace kp_softclip(double p, double b, double psi_halfwidth = 2.0,
                                  int psi_resolution = 41);
};

/// F(y)_n = y_n theta(log(||y||_phi / |y_n|)), zero where y_n = 0.
VecSeq kp_F(const TwistedSpace& space, const VecSeq& y);

/// ||y||_phi + ||x - F(y)||_phi.
double twisted_norm(const TwistedSpace& space, const PairSeq& p);

/// S(k) = sum phi(y_j) + sum phi(x_j - y_j theta(log(k / |y_j|))).
double s_functional(const TwistedSpace& space, const PairSeq& p, double k);

struct EquiCheck {
  double twisted = 0.0;
  double s_at_y_norm = 0.0;  // S(||y||_phi)
  double s_at_one = 0.0;     // S(1)
  double phi_max = 0.0;      // max_i Phi(x_i, y_i)
  double phi_bound = 0.0;    // 1 + C + M' C C_K
  bool applicable = false;   // twisted <= 1 and y != 0
  bool holds = true;
};

/// On the unit ball of the twisted norm, S(||y||_phi) <= twisted_norm <= 1
/// and each Phi(x_i, y_i) <= S(1) <= 1 + C + M' C C_K. Checked within `slack`.
EquiCheck equi_direction_check(const TwistedSpace& space, const PairSeq& p,
                               double slack = 1e-9);

/// Random finitely supported scalar sequence: support size uniform in
/// [0, min(8, dim_max)], indices a uniform subset of 1..dim_max, magnitudes
/// log-uniform in [1e-4, 1e2], uniform signs.
VecSeq random_sequence(TrialRng& rng, std::int64_t dim_max, int max_support = 8);
PairSeq random_pair(TrialRng& rng, std::int64_t dim_max);

struct QuasiLinearityEstimate {
  double c_hat = 0.0;
  VecSeq witness_x{1};
  VecSeq witness_y{1};
  std::uint64_t trials = 0;
  std::int64_t dim_max = 0;
};

/// Sample sup of ||F(x+y) - F(x) - F(y)||_phi / (||x||_phi + ||y||_phi).
QuasiLinearityEstimate quasi_linearity_constant(const TwistedSpace& space,
                                                std::uint64_t trials, std::int64_t dim_max,
                                                std::uint64_t seed);

/// Sample sup of ||p + q|| / (||p|| + ||q||) for the twisted quasi-norm.
double quasi_triangle_constant(const TwistedSpace& space, std::uint64_t trials,
                               std::int64_t dim_max, std::uint64_t seed);

struct EquivalenceCertificate {
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  // Extremes over the doubled run; the first `trials` samples are shared.
  double ratio_min_doubled = 0.0;
  double ratio_max_doubled = 0.0;
  double change_min = 0.0;
  double change_max = 0.0;
  bool finite_positive = false;
  bool stable = false;
  std::uint64_t trials = 0;
  std::uint64_t skipped = 0;
  double psi_halfwidth = 0.0;
};

/// Extremes of twisted_norm / ||(x_k, y_k)||_Psi over random pairs, at
/// `trials` and 2 * `trials` samples. Stable when both extremes move by less
/// than `stability_tol` (relative). `space.psi` may be enlarged.
EquivalenceCertificate equivalence_certificate(TwistedSpace& space, std::uint64_t trials,
                                               std::int64_t dim_max, std::uint64_t seed,
                                               double stability_tol = 0.05);

}  // namespace orlicz
