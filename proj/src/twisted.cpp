#include "orlicz/twisted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace orlicz {

PairSeq::PairSeq(VecSeq x_, VecSeq y_) : x(std::move(x_)), y(std::move(y_)) {
  if (x.dim() != 1 || y.dim() != 1) throw SchemaError("pair components must be scalar sequences");
}

VecSeq PairSeq::interleaved() const {
  std::vector<VecSeq::Entry> out;
  auto ix = x.entries().begin();
  auto iy = y.entries().begin();
  while (ix != x.entries().end() || iy != y.entries().end()) {
    if (iy == y.entries().end() || (ix != x.entries().end() && ix->index < iy->index)) {
      out.push_back({ix->index, Point{ix->value[0], 0.0, 0.0}});
      ++ix;
    } else if (ix == x.entries().end() || iy->index < ix->index) {
      out.push_back({iy->index, Point{0.0, iy->value[0], 0.0}});
      ++iy;
    } else {
      out.push_back({ix->index, Point{ix->value[0], iy->value[0], 0.0}});
      ++ix;
      ++iy;
    }
  }
  return VecSeq(2, std::move(out));
}

PairSeq PairSeq::from_interleaved(const VecSeq& s) {
  if (s.dim() != 2) throw SchemaError("pair sequences are dim-2 sequences");
  std::vector<std::pair<std::int64_t, double>> xs;
  std::vector<std::pair<std::int64_t, double>> ys;
  for (const auto& e : s.entries()) {
    xs.emplace_back(e.index, e.value[0]);
    ys.emplace_back(e.index, e.value[1]);
  }
  return PairSeq(VecSeq::scalar(std::move(xs)), VecSeq::scalar(std::move(ys)));
}

TwistedSpace TwistedSpace::make(const OrliczFn& f, double p, const LipschitzTheta& theta,
                                double psi_halfwidth, int psi_resolution,
                                const SamplingPlan& plan) {
  CertifiedOrlicz cf = certify(f, p, {theta.lipschitz_constant()}, plan);
  YoungMap phi = kalton_peck_map(cf, theta);
  EnvelopeBackedMap psi(phi, BoxSpec::symmetric(2, psi_halfwidth), psi_resolution);
  return TwistedSpace{std::move(cf), theta, std::move(phi), std::move(psi), "custom"};
}

TwistedSpace TwistedSpace::z2(double psi_halfwidth, int psi_resolution) {
  TwistedSpace s = make(OrliczFn::power(2.0), 2.0, LipschitzTheta::identity(), psi_halfwidth,
                        psi_resolution);
  s.preset = "z2";
  return s;
}

TwistedSpace TwistedSpace::zp(double p, double psi_halfwidth, int psi_resolution) {
  TwistedSpace s = make(OrliczFn::power(p), p, LipschitzTheta::identity(), psi_halfwidth,
                        psi_resolution);
  s.preset = "zp:" + std::to_string(p);
  return s;
}

TwistedSpace TwistedSpace::kp_softclip(double p, double b, double psi_halfwidth,
                                       int psi_resolution) {
  TwistedSpace s = make(OrliczFn::power(p), p, LipschitzTheta::soft_clip(b), psi_halfwidth,
                        psi_resolution);
  s.preset = "kp-softclip:" + std::to_string(p) + "," + std::to_string(b);
  return s;
}

VecSeq kp_F(const TwistedSpace& space, const VecSeq& y) {
  if (y.empty()) return VecSeq(1);
  const double norm = luxemburg_norm(space.f.f, y);
  std::vector<VecSeq::Entry> out;
  out.reserve(y.size());
  for (const auto& e : y.entries()) {
    const double v = e.value[0];
    out.push_back({e.index, Point{v * space.theta(std::log(norm / std::abs(v))), 0.0, 0.0}});
  }
  return VecSeq(1, std::move(out));
}

double twisted_norm(const TwistedSpace& space, const PairSeq& p) {
  const OrliczFn& f = space.f.f;
  return luxemburg_norm(f, p.y) + luxemburg_norm(f, p.x - kp_F(space, p.y));
}

double s_functional(const TwistedSpace& space, const PairSeq& p, double k) {
  if (!(k > 0.0)) throw SchemaError("S(k) needs k > 0");
  const OrliczFn& f = space.f.f;
  double sum = 0.0;
  for (const auto& e : p.y.entries()) sum += f(e.value[0]);
  const VecSeq joint = p.interleaved();
  for (const auto& e : joint.entries()) {
    const double x = e.value[0];
    const double y = e.value[1];
    const double twist = y == 0.0 ? 0.0 : y * space.theta(std::log(k / std::abs(y)));
    sum += f(x - twist);
  }
  return sum;
}

EquiCheck equi_direction_check(const TwistedSpace& space, const PairSeq& p, double slack) {
  EquiCheck out;
  out.twisted = twisted_norm(space, p);
  const ScalarConstants& k = space.f.constants;
  const double c = k.C.value();
  out.phi_bound = 1.0 + c + k.M_prime * c * k.c_b(space.theta.lipschitz_constant());
  const double y_norm = luxemburg_norm(space.f.f, p.y);
  out.applicable = out.twisted <= 1.0 && y_norm > 0.0;
  if (!out.applicable) return out;
  out.s_at_y_norm = s_functional(space, p, y_norm);
  out.s_at_one = s_functional(space, p, 1.0);
  const VecSeq joint = p.interleaved();
  for (const auto& e : joint.entries()) {
    out.phi_max = std::max(out.phi_max, space.phi_kp(e.value));
  }
  out.holds = out.s_at_y_norm <= out.twisted + slack && out.phi_max <= out.s_at_one + slack &&
              out.s_at_one <= out.phi_bound + slack;
  return out;
}

VecSeq random_sequence(TrialRng& rng, std::int64_t dim_max, int max_support) {
  const std::int64_t cap = std::min<std::int64_t>(max_support, dim_max);
  const auto size = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cap) + 1));
  // Floyd's algorithm for a uniform size-subset of 1..dim_max.
  std::vector<std::int64_t> chosen;
  for (std::int64_t j = dim_max - size + 1; j <= dim_max; ++j) {
    const auto t = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j)));
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
      chosen.push_back(t);
    } else {
      chosen.push_back(j);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<std::pair<std::int64_t, double>> entries;
  entries.reserve(chosen.size());
  for (auto k : chosen) entries.emplace_back(k, rng.sign() * rng.log_uniform(1e-4, 1e2));
  return VecSeq::scalar(std::move(entries));
}

PairSeq random_pair(TrialRng& rng, std::int64_t dim_max) {
  VecSeq x = random_sequence(rng, dim_max);
  VecSeq y = random_sequence(rng, dim_max);
  return PairSeq(std::move(x), std::move(y));
}

QuasiLinearityEstimate quasi_linearity_constant(const TwistedSpace& space,
                                                std::uint64_t trials, std::int64_t dim_max,
                                                std::uint64_t seed) {
  if (trials < 1) throw SchemaError("quasi_linearity_constant needs trials >= 1");
  if (dim_max < 1) throw SchemaError("dim_max must be positive");
  const OrliczFn& f = space.f.f;
  QuasiLinearityEstimate out;
  out.trials = trials;
  out.dim_max = dim_max;
  for (std::uint64_t i = 0; i < trials; ++i) {
    TrialRng rng(seed, i);
    const VecSeq x = random_sequence(rng, dim_max);
    const VecSeq y = random_sequence(rng, dim_max);
    const double den = luxemburg_norm(f, x) + luxemburg_norm(f, y);
    if (den == 0.0) continue;
    const VecSeq defect = kp_F(space, x + y) - kp_F(space, x) - kp_F(space, y);
    const double r = luxemburg_norm(f, defect) / den;
    if (r > out.c_hat) {
      out.c_hat = r;
      out.witness_x = x;
      out.witness_y = y;
    }
  }
  return out;
}

double quasi_triangle_constant(const TwistedSpace& space, std::uint64_t trials,
                               std::int64_t dim_max, std::uint64_t seed) {
  double q = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    TrialRng rng(seed, i);
    const PairSeq a = random_pair(rng, dim_max);
    const PairSeq b = random_pair(rng, dim_max);
    const double den = twisted_norm(space, a) + twisted_norm(space, b);
    if (den == 0.0) continue;
    q = std::max(q, twisted_norm(space, a + b) / den);
  }
  return q;
}

EquivalenceCertificate equivalence_certificate(TwistedSpace& space, std::uint64_t trials,
                                               std::int64_t dim_max, std::uint64_t seed,
                                               double stability_tol) {
  if (trials < 1) throw SchemaError("equivalence_certificate needs trials >= 1");
  EquivalenceCertificate cert;
  cert.trials = trials;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::uint64_t i = 0; i < 2 * trials; ++i) {
    TrialRng rng(seed, i);
    const PairSeq p = random_pair(rng, dim_max);
    if (p.empty()) {
      ++cert.skipped;
    } else {
      const double tw = twisted_norm(space, p);
      const double ps = luxemburg(space.psi, p.interleaved()).norm;
      const double r = tw / ps;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (i + 1 == trials) {
      cert.ratio_min = lo;
      cert.ratio_max = hi;
    }
  }
  cert.ratio_min_doubled = lo;
  cert.ratio_max_doubled = hi;
  auto fin = [](double v) { return std::isfinite(v) && v > 0.0; };
  cert.finite_positive = fin(cert.ratio_min) && fin(cert.ratio_max) && fin(lo) && fin(hi);
  if (cert.finite_positive) {
    cert.change_min = std::abs(lo - cert.ratio_min) / cert.ratio_min;
    cert.change_max = std::abs(hi - cert.ratio_max) / cert.ratio_max;
    cert.stable = cert.change_min < stability_tol && cert.change_max < stability_tol;
  }
  cert.psi_halfwidth = space.psi.grid().box.hi[0];
  return cert;
}

}  // namespace orlicz
