#include "orlicz/simplex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace orlicz {

namespace {

constexpr int kMaxRows = kMaxDim + 1;
using Matrix = std::array<std::array<double, kMaxRows>, kMaxRows>;

// Column [p; 1] of the constraint matrix.
std::array<double, kMaxRows> column(const Point& p, int dim) {
  std::array<double, kMaxRows> a{};
  for (int i = 0; i < dim; ++i) a[i] = p[i];
  a[dim] = 1.0;
  return a;
}

// Gauss-Jordan inverse with partial pivoting; false if singular.
bool invert(Matrix a, int m, Matrix& inv) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) inv[i][j] = (i == j) ? 1.0 : 0.0;
  }
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-300) return false;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const double d = a[c][c];
    for (int j = 0; j < m; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (int r = 0; r < m; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      const double f = a[r][c];
      for (int j = 0; j < m; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return true;
}

}  // namespace

ConvexCombination min_convex_combination(int dim, std::span<const Point> points,
                                         std::span<const double> values, const Point& target,
                                         std::span<const std::size_t> initial_basis) {
  const int m = dim + 1;
  if (dim < 1 || dim > kMaxDim || static_cast<int>(initial_basis.size()) != m ||
      points.size() != values.size()) {
    throw SchemaError("min_convex_combination: inconsistent problem dimensions");
  }
  const auto b = column(target, dim);
  std::vector<std::size_t> basis(initial_basis.begin(), initial_basis.end());
  std::vector<char> in_basis(points.size(), 0);
  for (auto j : basis) in_basis[j] = 1;

  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  const double rc_tol = 1e-12 * (1.0 + vmax);
  constexpr double kPivotTol = 1e-12;
  constexpr int kMaxPivots = 100000;
  constexpr int kDegenerateRunBeforeBland = 50;

  Matrix inv{};
  std::array<double, kMaxRows> x{};
  ConvexCombination out;
  int degenerate_run = 0;

  for (;;) {
    Matrix B{};
    for (int c = 0; c < m; ++c) {
      const auto a = column(points[basis[c]], dim);
      for (int r = 0; r < m; ++r) B[r][c] = a[r];
    }
    if (!invert(B, m, inv)) throw NumericFailure("simplex basis became singular");
    for (int r = 0; r < m; ++r) {
      x[r] = 0.0;
      for (int c = 0; c < m; ++c) x[r] += inv[r][c] * b[c];
      if (out.pivots == 0 && x[r] < -1e-9) throw SchemaError("initial basis is not feasible for the target");
      x[r] = std::max(x[r], 0.0);
    }
    // Duals y^T = c_B^T B^{-1}.
    std::array<double, kMaxRows> y{};
    for (int c = 0; c < m; ++c) {
      for (int r = 0; r < m; ++r) y[c] += values[basis[r]] * inv[r][c];
    }

    const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
    std::size_t entering = points.size();
    double best = -rc_tol;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (in_basis[j]) continue;
      double ya = y[dim];
      for (int i = 0; i < dim; ++i) ya += y[i] * points[j][i];
      const double d = values[j] - ya;
      if (d < best) {
        best = d;
        entering = j;
        if (bland) break;
      }
    }
    if (entering == points.size()) break;

    const auto a = column(points[entering], dim);
    std::array<double, kMaxRows> w{};
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) w[r] += inv[r][c] * a[c];
    }
    int leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      if (w[r] <= kPivotTol) continue;
      const double t = x[r] / w[r];
      if (t < ratio || (t == ratio && leave >= 0 && basis[r] < basis[leave])) {
        ratio = t;
        leave = r;
      }
    }
    if (leave < 0) throw NumericFailure("simplex: unbounded direction in a bounded problem");
    degenerate_run = (ratio == 0.0) ? degenerate_run + 1 : 0;
    in_basis[basis[leave]] = 0;
    basis[leave] = entering;
    in_basis[entering] = 1;
    if (++out.pivots > kMaxPivots) throw NumericFailure("simplex did not converge");
  }

  out.value = 0.0;
  for (int r = 0; r < m; ++r) {
    out.value += values[basis[r]] * x[r];
    if (x[r] > 0.0) {
      out.support.push_back(basis[r]);
      out.weights.push_back(x[r]);
    }
  }
  return out;
}

}  // namespace orlicz
