#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "orlicz/common.hpp"

namespace orlicz {

/// Result of min_convex_combination. `support` lists at most dim + 1 point
/// indices carrying positive weight (a basic optimal solution).
struct ConvexCombination {
  double value = 0.0;
  std::vector<std::size_t> support;
  std::vector<double> weights;
  int pivots = 0;
};

/// Solves  min sum_i a_i values[i]  s.t.  sum_i a_i points[i] = target,
/// sum_i a_i = 1, a >= 0  by the revised simplex method.
///
/// `initial_basis` holds dim + 1 affinely independent point indices whose
/// barycentric coordinates of `target` are nonnegative (typically the target
/// node itself and one neighbour per axis). Dantzig pricing is used until a
/// run of degenerate pivots, then Bland's rule to rule out cycling.
ConvexCombination min_convex_combination(int dim, std::span<const Point> points,
                                         std::span<const double> values, const Point& target,
                                         std::span<const std::size_t> initial_basis);

}  // namespace orlicz
