#include "orlicz/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "orlicz/parallel.hpp"
#include "orlicz/simplex.hpp"

namespace orlicz {

BoxSpec BoxSpec::symmetric(int dim, double halfwidth) {
  if (dim < 1 || dim > kMaxDim) throw SchemaError("box dimension must be 1, 2 or 3");
  if (!(halfwidth > 0.0) || !std::isfinite(halfwidth)) {
    throw SchemaError("box halfwidth must be positive");
  }
  BoxSpec b;
  b.dim = dim;
  for (int i = 0; i < dim; ++i) {
    b.lo[i] = -halfwidth;
    b.hi[i] = halfwidth;
  }
  return b;
}

bool BoxSpec::centered() const {
  for (int i = 0; i < dim; ++i) {
    if (!(hi[i] > 0.0) || lo[i] != -hi[i]) return false;
  }
  return true;
}

BoxSpec BoxSpec::scaled(double factor) const {
  BoxSpec b = *this;
  for (int i = 0; i < dim; ++i) {
    b.lo[i] *= factor;
    b.hi[i] *= factor;
  }
  return b;
}

void validate_grid(const BoxSpec& box, int resolution) {
  if (box.dim < 1 || box.dim > kMaxDim) throw SchemaError("grid dimension must be 1, 2 or 3");
  if (resolution < 9 || resolution % 2 == 0) {
    throw SchemaError("grid resolution must be odd and at least 9, got " +
                      std::to_string(resolution));
  }
  if (!box.centered()) throw SchemaError("grid box must be centered at the origin");
}

GridFunction::GridFunction(BoxSpec box, int resolution, std::vector<double> values)
    : box_(box), resolution_(resolution), values_(std::move(values)) {
  std::size_t expected = 1;
  for (int i = 0; i < box_.dim; ++i) expected *= static_cast<std::size_t>(resolution_);
  if (resolution_ < 2 || values_.size() != expected) {
    throw SchemaError("grid values do not match the grid shape");
  }
}

double GridFunction::spacing(int axis) const {
  return (box_.hi[axis] - box_.lo[axis]) / (resolution_ - 1);
}

std::array<int, kMaxDim> GridFunction::multi_index(std::size_t flat) const {
  std::array<int, kMaxDim> idx{};
  for (int a = box_.dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(resolution_));
    flat /= static_cast<std::size_t>(resolution_);
  }
  return idx;
}

std::size_t GridFunction::flat_index(const std::array<int, kMaxDim>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < box_.dim; ++a) {
    flat = flat * static_cast<std::size_t>(resolution_) + static_cast<std::size_t>(idx[a]);
  }
  return flat;
}

Point GridFunction::node(std::size_t flat) const {
  const auto idx = multi_index(flat);
  Point p{};
  const int mid2 = resolution_ - 1;
  for (int a = 0; a < box_.dim; ++a) {
    // Symmetric formula so that mirrored nodes are exact negatives.
    if (box_.lo[a] == -box_.hi[a]) {
      p[a] = box_.hi[a] * static_cast<double>(2 * idx[a] - mid2) / mid2;
    } else {
      p[a] = box_.lo[a] + idx[a] * spacing(a);
    }
  }
  return p;
}

std::size_t GridFunction::origin_index() const {
  std::array<int, kMaxDim> idx{};
  for (int a = 0; a < box_.dim; ++a) idx[a] = (resolution_ - 1) / 2;
  return flat_index(idx);
}

bool GridFunction::contains(const Point& x) const {
  for (int a = 0; a < box_.dim; ++a) {
    if (x[a] < box_.lo[a] || x[a] > box_.hi[a]) return false;
  }
  return true;
}

double GridFunction::interpolate(const Point& x) const {
  std::array<int, kMaxDim> base{};
  std::array<double, kMaxDim> frac{};
  for (int a = 0; a < box_.dim; ++a) {
    const double u = (x[a] - box_.lo[a]) / spacing(a);
    int i = static_cast<int>(std::floor(u));
    i = std::clamp(i, 0, resolution_ - 2);
    base[a] = i;
    frac[a] = std::clamp(u - i, 0.0, 1.0);
  }
  double acc = 0.0;
  const int corners = 1 << box_.dim;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::array<int, kMaxDim> idx = base;
    for (int a = 0; a < box_.dim; ++a) {
      if (c & (1 << a)) {
        idx[a] += 1;
        w *= frac[a];
      } else {
        w *= 1.0 - frac[a];
      }
    }
    if (w != 0.0) acc += w * values_[flat_index(idx)];
  }
  return acc;
}

double GridFunction::operator()(const Point& x) const {
  if (contains(x)) return interpolate(x);
  double t = 0.0;
  for (int a = 0; a < box_.dim; ++a) {
    const double bound = x[a] >= 0.0 ? box_.hi[a] : -box_.lo[a];
    t = std::max(t, std::abs(x[a]) / bound);
  }
  return t * interpolate(scale(x, 1.0 / t));
}

YoungMap GridFunction::as_map(YoungMap::Traits traits) const {
  return YoungMap(
      box_.dim, [g = *this](const Point& x) { return g(x); }, traits, std::nullopt, "grid");
}

double EnvelopeGrid::caratheodory_bound(double L_hat) const {
  return std::pow(L_hat, box.dim);
}

YoungMap EnvelopeGrid::envelope_map() const {
  return envelope_function().as_map(YoungMap::Traits{true, true});
}

namespace {

EnvelopeGrid envelope_of(const GridFunction& f) {
  const int dim = f.dim();
  const std::size_t n = f.size();
  std::vector<Point> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = f.node(i);
  const auto values = f.values();

  EnvelopeGrid out;
  out.box = f.box();
  out.resolution = f.resolution();
  out.values.assign(values.begin(), values.end());
  out.envelope.assign(n, 0.0);
  out.supports.assign(n, CaratheodorySupport{});

  parallel_chunks(n, [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<std::size_t> basis(static_cast<std::size_t>(dim) + 1);
    for (std::size_t i = begin; i < end; ++i) {
      const auto idx = f.multi_index(i);
      basis[0] = i;
      for (int a = 0; a < dim; ++a) {
        auto nb = idx;
        nb[a] += (idx[a] + 1 < f.resolution()) ? 1 : -1;
        basis[static_cast<std::size_t>(a) + 1] = f.flat_index(nb);
      }
      const ConvexCombination cc = min_convex_combination(dim, nodes, values, nodes[i], basis);
      // The node itself is a feasible combination.
      out.envelope[i] = std::min(cc.value, values[i]);
      CaratheodorySupport& s = out.supports[i];
      s.count = static_cast<int>(cc.support.size());
      for (int k = 0; k < s.count; ++k) {
        s.nodes[k] = cc.support[k];
        s.weights[k] = cc.weights[k];
      }
    }
  });

  out.ratio_max = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.envelope[i] > 1e-12) out.ratio_max = std::max(out.ratio_max, values[i] / out.envelope[i]);
  }
  return out;
}

}  // namespace

EnvelopeGrid convex_envelope(const YoungMap& m, const BoxSpec& box, int resolution) {
  validate_grid(box, resolution);
  if (box.dim != m.dim()) throw SchemaError("box and map dimensions differ");
  std::size_t n = 1;
  for (int a = 0; a < box.dim; ++a) n *= static_cast<std::size_t>(resolution);
  GridFunction geometry(box, resolution, std::vector<double>(n, 0.0));
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = m(geometry.node(i));
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw NumericFailure("map is not finite and nonnegative on the grid");
    }
  }
  return envelope_of(GridFunction(box, resolution, std::move(values)));
}

EnvelopeGrid convex_envelope(const GridFunction& f) {
  validate_grid(f.box(), f.resolution());
  return envelope_of(f);
}

Equivalence equivalence_constant(std::span<const double> a, std::span<const double> b,
                                 std::size_t origin) {
  if (a.size() != b.size()) throw SchemaError("equivalence_constant: size mismatch");
  constexpr double kFloor = 1e-12;
  Equivalence e;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool za = a[i] <= kFloor;
    const bool zb = b[i] <= kFloor;
    if (za && zb) continue;
    if (za != zb) {
      if (i == origin) continue;
      e.finite = false;
      e.M = std::numeric_limits<double>::infinity();
      return e;
    }
    e.M = std::max({e.M, a[i] / b[i], b[i] / a[i]});
  }
  return e;
}

Equivalence equivalence_constant(const YoungMap& a, const YoungMap& b, const BoxSpec& box,
                                 int resolution) {
  validate_grid(box, resolution);
  if (a.dim() != box.dim || b.dim() != box.dim) throw SchemaError("dimension mismatch");
  std::size_t n = 1;
  for (int k = 0; k < box.dim; ++k) n *= static_cast<std::size_t>(resolution);
  GridFunction geometry(box, resolution, std::vector<double>(n, 0.0));
  std::vector<double> va(n);
  std::vector<double> vb(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point x = geometry.node(i);
    va[i] = a(x);
    vb[i] = b(x);
  }
  return equivalence_constant(va, vb, geometry.origin_index());
}

Equivalence equivalence_constant(const EnvelopeGrid& g) {
  return equivalence_constant(g.values, g.envelope, g.value_function().origin_index());
}

MollifyResult mollify(const YoungMap& m, double c, const BoxSpec& box, int resolution) {
  validate_grid(box, resolution);
  if (!(c >= 0.0 && c < 1.0)) throw SchemaError("mollify radius fraction must lie in [0, 1)");
  if (box.dim != m.dim()) throw SchemaError("box and map dimensions differ");
  std::size_t n = 1;
  for (int k = 0; k < box.dim; ++k) n *= static_cast<std::size_t>(resolution);
  GridFunction geometry(box, resolution, std::vector<double>(n, 0.0));
  double annulus_radius = std::numeric_limits<double>::infinity();
  for (int a = 0; a < box.dim; ++a) annulus_radius = std::min(annulus_radius, box.hi[a]);

  std::vector<double> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = m(geometry.node(i));

  struct Attempt {
    std::vector<double> values;
    bool ok = true;
    double lo = 1.0;
    double hi = 1.0;
  };
  auto attempt = [&](double radius_fraction) {
    Attempt at;
    at.values = base;
    if (radius_fraction == 0.0) return at;
    for (std::size_t i = 0; i < n; ++i) {
      const Point x = geometry.node(i);
      const double r = norm2(x, box.dim);
      if (r == 0.0) {
        at.values[i] = 0.0;
        continue;
      }
      at.values[i] = ball_mean(m, x, radius_fraction * r);
      if (r <= annulus_radius * (1.0 + 1e-12) && base[i] > 0.0) {
        const double ratio = at.values[i] / base[i];
        at.lo = std::min(at.lo, ratio);
        at.hi = std::max(at.hi, ratio);
        if (ratio < 0.5 || ratio > 2.0) at.ok = false;
      }
    }
    return at;
  };

  constexpr int kMaxHalvings = 60;
  double cur = c;
  Attempt at = attempt(cur);
  MollifyResult out{GridFunction(box, resolution, base), c, 0.0, at.ok, 0, 1.0, 1.0};
  while (!at.ok && out.halvings < kMaxHalvings) {
    cur *= 0.5;
    ++out.halvings;
    at = attempt(cur);
  }
  if (!at.ok) {
    cur = 0.0;
    at = attempt(0.0);
  }
  out.certified_c = cur;
  out.min_ratio = at.lo;
  out.max_ratio = at.hi;
  out.mollified = GridFunction(box, resolution, std::move(at.values));
  return out;
}

EnvelopeBackedMap::EnvelopeBackedMap(YoungMap generator, BoxSpec box, int resolution)
    : generator_(std::move(generator)),
      grid_(std::make_shared<const EnvelopeGrid>(convex_envelope(generator_, box, resolution))),
      map_(grid_->envelope_map()) {}

bool EnvelopeBackedMap::contains(const Point& x) const {
  for (int a = 0; a < grid_->box.dim; ++a) {
    if (x[a] < grid_->box.lo[a] || x[a] > grid_->box.hi[a]) return false;
  }
  return true;
}

EnvelopeBackedMap EnvelopeBackedMap::enlarged(double factor) const {
  if (!(factor > 1.0)) throw SchemaError("enlargement factor must exceed 1");
  return EnvelopeBackedMap(generator_, grid_->box.scaled(factor), grid_->resolution);
}

SandwichCheck sandwich_check(const EnvelopeGrid& g, double L_hat, double slack) {
  SandwichCheck out;
  out.lower_excess = -std::numeric_limits<double>::infinity();
  const double bound = g.caratheodory_bound(L_hat);
  bool upper = true;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    const double v = g.values[k];
    const double e = g.envelope[k];
    out.lower_excess = std::max(out.lower_excess, e - v);
    if (v > bound * e * (1.0 + slack)) upper = false;
    if (e > 0.0) out.upper_ratio = std::max(out.upper_ratio, v / (bound * e));
  }
  out.lower_ok = out.lower_excess <= 1e-9;
  out.upper_ok = upper;
  return out;
}

}  // namespace orlicz
