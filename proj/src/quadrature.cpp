#include "orlicz/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "orlicz/common.hpp"
#include "orlicz/envelope.hpp"

namespace orlicz {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw SchemaError("quadrature needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double ball_mean(const YoungMap& m, const Point& center, double radius) {
  if (radius == 0.0) return m(center);
  static const QuadratureRule segment = gauss_legendre(16);
  static const QuadratureRule radial = gauss_legendre(8);
  static const QuadratureRule polar = gauss_legendre(8);
  constexpr int kAngles = 32;
  constexpr int kAzimuths = 16;

  double acc = 0.0;
  double wsum = 0.0;
  auto at = [&](double w, double dx, double dy, double dz) {
    Point p = center;
    p[0] += dx;
    p[1] += dy;
    p[2] += dz;
    acc += w * m(p);
    wsum += w;
  };
  switch (m.dim()) {
    case 1:
      for (std::size_t i = 0; i < segment.nodes.size(); ++i) {
        at(segment.weights[i], radius * segment.nodes[i], 0.0, 0.0);
      }
      break;
    case 2:
      for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double rho = 0.5 * radius * (radial.nodes[i] + 1.0);
        for (int k = 0; k < kAngles; ++k) {
          const double th = 2.0 * std::numbers::pi * (k + 0.5) / kAngles;
          at(radial.weights[i] * rho, rho * std::cos(th), rho * std::sin(th), 0.0);
        }
      }
      break;
    default:
      for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double rho = 0.5 * radius * (radial.nodes[i] + 1.0);
        for (std::size_t j = 0; j < polar.nodes.size(); ++j) {
          const double ct = polar.nodes[j];
          const double st = std::sqrt(1.0 - ct * ct);
          for (int k = 0; k < kAzimuths; ++k) {
            const double ph = 2.0 * std::numbers::pi * (k + 0.5) / kAzimuths;
            at(radial.weights[i] * polar.weights[j] * rho * rho, rho * st * std::cos(ph),
               rho * st * std::sin(ph), rho * ct);
          }
        }
      }
      break;
  }
  return acc / wsum;
}

}  // namespace orlicz
