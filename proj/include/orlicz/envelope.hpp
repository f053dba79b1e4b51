#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "orlicz/common.hpp"
#include "orlicz/youngmap.hpp"

namespace orlicz {

/// Axis-aligned box [lo, hi] in R^dim.
struct BoxSpec {
  int dim = 1;
  Point lo{};
  Point hi{};

  static BoxSpec symmetric(int dim, double halfwidth);
  bool centered() const;
  BoxSpec scaled(double factor) const;
};

/// Values sampled on the nodes of a uniform box grid with `resolution`
/// points per axis (axis 0 varies slowest in the flat layout).
///
/// Off-node evaluation is multilinear inside the box. Outside the box it is
/// the degree-1 homogeneous extension of the boundary values,
/// f(x) = t f(x / t) with t the box-gauge of x, which keeps radially
/// monotone data radially monotone.
class GridFunction {
 public:
  GridFunction(BoxSpec box, int resolution, std::vector<double> values);

  const BoxSpec& box() const { return box_; }
  int dim() const { return box_.dim; }
  int resolution() const { return resolution_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double spacing(int axis) const;
  Point node(std::size_t flat) const;
  std::size_t flat_index(const std::array<int, kMaxDim>& idx) const;
  std::array<int, kMaxDim> multi_index(std::size_t flat) const;
  // Flat index of the node at the origin (requires an odd-resolution centered box).
  std::size_t origin_index() const;
  bool contains(const Point& x) const;

  double operator()(const Point& x) const;
  YoungMap as_map(YoungMap::Traits traits) const;

 private:
  double interpolate(const Point& x) const;

  BoxSpec box_;
  int resolution_;
  std::vector<double> values_;
};

/// One node's optimal convex combination: at most dim + 1 grid nodes.
struct CaratheodorySupport {
  std::array<std::size_t, kMaxDim + 1> nodes{};
  std::array<double, kMaxDim + 1> weights{};
  int count = 0;
};

/// Sampled values of a map and of its numerical convex envelope on a box grid.
///
/// The envelope at a node is the least value of sum a_i m(g_i) over convex
/// combinations of grid nodes g_i reproducing the node, so it bounds the
/// true envelope from above.
struct EnvelopeGrid {
  BoxSpec box;
  int resolution = 0;
  std::vector<double> values;
  std::vector<double> envelope;
  std::vector<CaratheodorySupport> supports;
  // max values / envelope over nodes where the envelope exceeds 1e-12.
  double ratio_max = 1.0;

  // L_{n+1} <= L^n: the Caratheodory-step constant implied by a
  // two-point quasi-convexity constant L.
  double caratheodory_bound(double L_hat) const;

  GridFunction value_function() const { return GridFunction(box, resolution, values); }
  GridFunction envelope_function() const { return GridFunction(box, resolution, envelope); }
  // Grid-backed convex envelope as a radially monotone convex map.
  YoungMap envelope_map() const;
};

/// Rejects even or too small resolutions (< 9) and boxes not centered at 0.
void validate_grid(const BoxSpec& box, int resolution);

EnvelopeGrid convex_envelope(const YoungMap& m, const BoxSpec& box, int resolution);
/// Envelope of already sampled values (used for idempotence and scaling checks).
EnvelopeGrid convex_envelope(const GridFunction& f);

struct SandwichCheck {
  double lower_excess = 0.0;  // max envelope - value
  double upper_ratio = 0.0;   // max value / (L^dim envelope)
  bool lower_ok = false;      // envelope <= value + 1e-9
  bool upper_ok = false;      // value <= L^dim envelope (1 + slack)
  bool ok() const { return lower_ok && upper_ok; }
};

/// Nodewise co(m) <= m <= L^dim (1 + slack) co(m), with L a quasi-convexity constant.
SandwichCheck sandwich_check(const EnvelopeGrid& g, double L_hat, double slack = 0.05);

struct Equivalence {
  double M = 1.0;
  bool finite = true;
};

/// Smallest M with a <= M b and b <= M a on the nodes where both exceed
/// 1e-12. Infinite when one side vanishes (<= 1e-12) at a node other than
/// `origin` where the other does not.
Equivalence equivalence_constant(std::span<const double> a, std::span<const double> b,
                                 std::size_t origin);
Equivalence equivalence_constant(const YoungMap& a, const YoungMap& b, const BoxSpec& box,
                                 int resolution);
/// Values against envelope of one grid.
Equivalence equivalence_constant(const EnvelopeGrid& g);

struct MollifyResult {
  GridFunction mollified;
  double requested_c = 0.0;
  double certified_c = 0.0;
  bool sandwich_at_requested = false;
  int halvings = 0;
  // Extremes of mollified / m over the annulus nodes at certified_c.
  double min_ratio = 1.0;
  double max_ratio = 1.0;
};

/// Mean of m over the ball B(x, r), by a product Gauss-Legendre rule in
/// polar coordinates (n = 2, 3) or on the segment (n = 1).
double ball_mean(const YoungMap& m, const Point& center, double radius);

/// Replaces m at every node x != 0 by its mean over B(x, c ||x||_2) and checks
/// m/2 <= mean <= 2m on the annulus nodes 0 < ||x||_2 <= box halfwidth.
/// When the sandwich fails at c, c is halved until it holds.
MollifyResult mollify(const YoungMap& m, double c, const BoxSpec& box, int resolution);

/// co(m) backed by an envelope grid. The grid can be rebuilt on a larger box
/// at the same resolution when a query leaves the current one.
class EnvelopeBackedMap {
 public:
  EnvelopeBackedMap(YoungMap generator, BoxSpec box, int resolution);

  const EnvelopeGrid& grid() const { return *grid_; }
  const YoungMap& generator() const { return generator_; }
  const YoungMap& map() const { return map_; }
  bool contains(const Point& x) const;
  EnvelopeBackedMap enlarged(double factor = 2.0) const;

 private:
  YoungMap generator_;
  std::shared_ptr<const EnvelopeGrid> grid_;
  YoungMap map_;
};

}  // namespace orlicz
