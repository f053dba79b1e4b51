#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace orlicz {

inline constexpr int kMaxDim = 3;

// Points of R^n for n <= kMaxDim. Coordinates beyond the owning map's
// dimension are kept at zero.
using Point = std::array<double, kMaxDim>;

inline double norm2(const Point& x, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

inline double norm_inf(const Point& x, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s = std::max(s, std::abs(x[i]));
  return s;
}

inline Point scale(const Point& x, double s) {
  return {x[0] * s, x[1] * s, x[2] * s};
}

inline Point add(const Point& a, const Point& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Point combine(double la, const Point& a, double lb, const Point& b) {
  return {la * a[0] + lb * b[0], la * a[1] + lb * b[1], la * a[2] + lb * b[2]};
}

inline bool is_zero(const Point& x) {
  return x[0] == 0.0 && x[1] == 0.0 && x[2] == 0.0;
}

/// Malformed input: bad file schema, unknown preset, violated precondition
/// on user-supplied parameters.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric procedure could not produce a trustworthy value: a sampled
/// supremum kept growing, a bracket ran past 2^64, a ray never reached a level.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A built object failed one of its own certificates (for example a sampled
/// monotonicity check), so downstream constructions must not use it.
class CertificateFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundedConstant : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

}  // namespace orlicz
