#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "orlicz/common.hpp"
#include "orlicz/envelope.hpp"
#include "orlicz/scalarfn.hpp"
#include "orlicz/youngmap.hpp"

namespace orlicz {

/// A finitely supported sequence of R^dim vectors. Indices are positive and
/// strictly increasing; zero vectors are never stored, so the empty list is 0.
class VecSeq {
 public:
  struct Entry {
    std::int64_t index;
    Point value;
  };

  explicit VecSeq(int dim = 1) : dim_(dim) {}
  // Validates ordering; zero vectors are dropped.
  VecSeq(int dim, std::vector<Entry> entries);
  static VecSeq scalar(std::vector<std::pair<std::int64_t, double>> entries);
  // Consecutive indices 1..n.
  static VecSeq scalar_dense(std::span<const double> values);

  int dim() const { return dim_; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  // Component 0 at `index`, or 0.
  double at(std::int64_t index) const;

  VecSeq scaled(double s) const;
  friend VecSeq operator+(const VecSeq& a, const VecSeq& b);
  friend VecSeq operator-(const VecSeq& a, const VecSeq& b);

 private:
  int dim_;
  std::vector<Entry> entries_;
};

/// sum_k m(s_k / rho). Throws SchemaError for rho <= 0 or mismatched dims.
double modular(const YoungMap& m, const VecSeq& s, double rho);
double modular(const OrliczFn& f, const VecSeq& s, double rho);

struct NormResult {
  double norm = 0.0;
  // Modular at the returned norm (<= 1, and within 1e-9 of 1 when the
  // modular is continuous).
  double modular = 0.0;
};

/// inf{rho > 0 : modular(s, rho) <= 1}, by bracket doubling or halving from
/// rho = 1 (up to 2^64 or down to 2^-64) then bisection to relative width
/// 1e-12. Zero for s = 0.
NormResult luxemburg(const OrliczFn& f, const VecSeq& s);
NormResult luxemburg(const YoungMap& m, const VecSeq& s);

double luxemburg_norm(const OrliczFn& f, const VecSeq& s);
double luxemburg_norm(const YoungMap& m, const VecSeq& s);

/// Luxemburg norm for a grid-backed envelope. If some s_k / norm leaves the
/// grid box, `psi` is replaced by an enlarged grid (doubling the box, same
/// resolution) and the norm is recomputed, up to `max_enlargements` times.
NormResult luxemburg(EnvelopeBackedMap& psi, const VecSeq& s, int max_enlargements = 8);

/// (rho, modular(s, rho)) for each rho.
std::vector<std::pair<double, double>> membership_margin(const YoungMap& m, const VecSeq& s,
                                                         std::span<const double> rhos);
std::vector<std::pair<double, double>> membership_margin(const OrliczFn& f, const VecSeq& s,
                                                         std::span<const double> rhos);

}  // namespace orlicz
