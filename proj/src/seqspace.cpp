#include "orlicz/seqspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace orlicz {

VecSeq::VecSeq(int dim, std::vector<Entry> entries) : dim_(dim) {
  if (dim_ < 1 || dim_ > kMaxDim) throw SchemaError("sequence dimension must be 1, 2 or 3");
  entries_.reserve(entries.size());
  std::int64_t last = 0;
  for (auto& e : entries) {
    if (e.index <= last) {
      throw SchemaError("sequence indices must be positive and strictly increasing");
    }
    last = e.index;
    for (int i = dim_; i < kMaxDim; ++i) {
      if (e.value[i] != 0.0) throw SchemaError("entry has more components than the sequence dim");
    }
    for (int i = 0; i < dim_; ++i) {
      if (!std::isfinite(e.value[i])) throw SchemaError("sequence entries must be finite");
    }
    if (!is_zero(e.value)) entries_.push_back(e);
  }
}

VecSeq VecSeq::scalar(std::vector<std::pair<std::int64_t, double>> entries) {
  std::vector<Entry> es;
  es.reserve(entries.size());
  for (const auto& [k, v] : entries) es.push_back({k, Point{v, 0.0, 0.0}});
  return VecSeq(1, std::move(es));
}

VecSeq VecSeq::scalar_dense(std::span<const double> values) {
  std::vector<Entry> es;
  es.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    es.push_back({static_cast<std::int64_t>(i) + 1, Point{values[i], 0.0, 0.0}});
  }
  return VecSeq(1, std::move(es));
}

double VecSeq::at(std::int64_t index) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                                   [](const Entry& e, std::int64_t k) { return e.index < k; });
  return (it != entries_.end() && it->index == index) ? it->value[0] : 0.0;
}

VecSeq VecSeq::scaled(double s) const {
  std::vector<Entry> es;
  es.reserve(entries_.size());
  for (const auto& e : entries_) es.push_back({e.index, orlicz::scale(e.value, s)});
  return VecSeq(dim_, std::move(es));
}

namespace {

VecSeq merge(const VecSeq& a, const VecSeq& b, double sign) {
  if (a.dim() != b.dim()) throw SchemaError("sequence dimensions differ");
  std::vector<VecSeq::Entry> out;
  out.reserve(a.size() + b.size());
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() || ib != b.entries().end()) {
    if (ib == b.entries().end() || (ia != a.entries().end() && ia->index < ib->index)) {
      out.push_back(*ia++);
    } else if (ia == a.entries().end() || ib->index < ia->index) {
      out.push_back({ib->index, scale(ib->value, sign)});
      ++ib;
    } else {
      out.push_back({ia->index, combine(1.0, ia->value, sign, ib->value)});
      ++ia;
      ++ib;
    }
  }
  return VecSeq(a.dim(), std::move(out));
}

template <typename Eval>
double modular_impl(const Eval& m, const VecSeq& s, double rho) {
  if (!(rho > 0.0)) throw SchemaError("modular needs rho > 0");
  const double inv = 1.0 / rho;
  double sum = 0.0;
  for (const auto& e : s.entries()) sum += m(scale(e.value, inv));
  return sum;
}

template <typename Eval>
NormResult luxemburg_impl(const Eval& m, const VecSeq& s) {
  if (s.empty()) return {0.0, 0.0};
  auto mod = [&](double rho) { return modular_impl(m, s, rho); };
  const double kLimit = std::ldexp(1.0, 64);
  double lo;
  double hi;
  if (mod(1.0) > 1.0) {
    lo = 1.0;
    hi = 2.0;
    while (mod(hi) > 1.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > kLimit) throw NumericFailure("Luxemburg bracket overflow beyond 2^64");
    }
  } else {
    hi = 1.0;
    lo = 0.5;
    while (!(mod(lo) > 1.0)) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1.0 / kLimit) throw NumericFailure("Luxemburg bracket underflow below 2^-64");
    }
  }
  // Invariant: mod(lo) > 1 >= mod(hi).
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mod(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {hi, mod(hi)};
}

void require_dim(const YoungMap& m, const VecSeq& s) {
  if (m.dim() != s.dim()) {
    throw SchemaError("map dimension " + std::to_string(m.dim()) +
                      " does not match sequence dimension " + std::to_string(s.dim()));
  }
}

void require_scalar(const VecSeq& s) {
  if (s.dim() != 1) throw SchemaError("scalar Orlicz functions act on dim-1 sequences");
}

}  // namespace

VecSeq operator+(const VecSeq& a, const VecSeq& b) { return merge(a, b, 1.0); }
VecSeq operator-(const VecSeq& a, const VecSeq& b) { return merge(a, b, -1.0); }

double modular(const YoungMap& m, const VecSeq& s, double rho) {
  require_dim(m, s);
  return modular_impl(m, s, rho);
}

double modular(const OrliczFn& f, const VecSeq& s, double rho) {
  require_scalar(s);
  return modular_impl([&f](const Point& x) { return f(x[0]); }, s, rho);
}

NormResult luxemburg(const OrliczFn& f, const VecSeq& s) {
  require_scalar(s);
  return luxemburg_impl([&f](const Point& x) { return f(x[0]); }, s);
}

NormResult luxemburg(const YoungMap& m, const VecSeq& s) {
  require_dim(m, s);
  if (!m.radially_monotone()) {
    throw SchemaError("Luxemburg norm needs a radially monotone map");
  }
  return luxemburg_impl(m, s);
}

double luxemburg_norm(const OrliczFn& f, const VecSeq& s) { return luxemburg(f, s).norm; }
double luxemburg_norm(const YoungMap& m, const VecSeq& s) { return luxemburg(m, s).norm; }

NormResult luxemburg(EnvelopeBackedMap& psi, const VecSeq& s, int max_enlargements) {
  for (int round = 0;; ++round) {
    const NormResult r = luxemburg(psi.map(), s);
    bool inside = true;
    if (r.norm > 0.0) {
      for (const auto& e : s.entries()) {
        if (!psi.contains(scale(e.value, 1.0 / r.norm))) {
          inside = false;
          break;
        }
      }
    }
    if (inside) return r;
    if (round >= max_enlargements) {
      throw NumericFailure("envelope box still too small after repeated enlargement");
    }
    psi = psi.enlarged(2.0);
  }
}

std::vector<std::pair<double, double>> membership_margin(const YoungMap& m, const VecSeq& s,
                                                         std::span<const double> rhos) {
  std::vector<std::pair<double, double>> out;
  out.reserve(rhos.size());
  for (double rho : rhos) out.emplace_back(rho, modular(m, s, rho));
  return out;
}

std::vector<std::pair<double, double>> membership_margin(const OrliczFn& f, const VecSeq& s,
                                                         std::span<const double> rhos) {
  std::vector<std::pair<double, double>> out;
  out.reserve(rhos.size());
  for (double rho : rhos) out.emplace_back(rho, modular(f, s, rho));
  return out;
}

}  // namespace orlicz
