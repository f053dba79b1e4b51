#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "orlicz/envelope.hpp"
#include "orlicz/quadrature.hpp"
#include "orlicz/rng.hpp"
#include "orlicz/scalarfn.hpp"
#include "orlicz/simplex.hpp"
#include "orlicz/youngmap.hpp"

namespace orlicz {
namespace {

YoungMap double_well() {
  return YoungMap(
      1,
      [](const Point& x) {
        const double a = std::abs(x[0]);
        return std::min(a * a, (a - 2.0) * (a - 2.0) + 1.0);
      },
      {});
}

// Lower convex hull of 1-D samples by brute force over bracketing pairs.
std::vector<double> hull_1d(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> out(ys);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    for (std::size_t i = 0; i <= k; ++i) {
      for (std::size_t j = k; j < xs.size(); ++j) {
        if (i == j) continue;
        const double w = (xs[j] - xs[k]) / (xs[j] - xs[i]);
        out[k] = std::min(out[k], w * ys[i] + (1 - w) * ys[j]);
      }
    }
  }
  return out;
}

TEST(Simplex, FindsCheapestCombination) {
  const std::vector<Point> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.5, 0}};
  const std::vector<double> vals{0.0, 1.0, 1.0, 0.0, 5.0};
  const std::vector<std::size_t> basis{4, 1, 3};
  const ConvexCombination cc =
      min_convex_combination(2, pts, vals, Point{0.5, 0.5, 0}, basis);
  EXPECT_NEAR(cc.value, 0.0, 1e-12);
  EXPECT_LE(cc.support.size(), 3u);
  double w = 0.0;
  for (double a : cc.weights) w += a;
  EXPECT_NEAR(w, 1.0, 1e-12);
}

TEST(Quadrature, IntegratesPolynomialsExactly) {
  for (int n : {1, 3, 8, 20}) {
    const QuadratureRule r = gauss_legendre(n);
    for (int deg = 0; deg < 2 * n; ++deg) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      ASSERT_NEAR(s, exact, 1e-13) << n << " " << deg;
    }
  }
  EXPECT_THROW(gauss_legendre(0), SchemaError);
}

TEST(BallMean, SquaredNormClosedForms) {
  const Point x{0.7, -0.4, 0.2};
  const double r = 0.3;
  const double n2 = 0.7 * 0.7 + 0.4 * 0.4;
  EXPECT_NEAR(ball_mean(YoungMap::squared_norm(1), x, r), 0.49 + r * r / 3, 1e-12);
  EXPECT_NEAR(ball_mean(YoungMap::squared_norm(2), x, r), n2 + r * r / 2, 1e-12);
  EXPECT_NEAR(ball_mean(YoungMap::squared_norm(3), x, r), n2 + 0.04 + 3 * r * r / 5, 1e-12);
}

TEST(Grid, RejectsEvenResolutionAndUncenteredBox) {
  EXPECT_THROW(validate_grid(BoxSpec::symmetric(2, 1.0), 20), SchemaError);
  EXPECT_THROW(validate_grid(BoxSpec::symmetric(2, 1.0), 7), SchemaError);
  BoxSpec shifted = BoxSpec::symmetric(1, 1.0);
  shifted.hi[0] = 2.0;
  EXPECT_THROW(validate_grid(shifted, 21), SchemaError);
  EXPECT_NO_THROW(validate_grid(BoxSpec::symmetric(3, 1.0), 9));
}

TEST(Grid, OutsideBoxIsHomogeneousExtension) {
  const EnvelopeGrid g = convex_envelope(YoungMap::squared_norm(1), BoxSpec::symmetric(1, 1.0), 21);
  const GridFunction f = g.value_function();
  EXPECT_DOUBLE_EQ(f(Point{1.0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(f(Point{3.0, 0, 0}), 3.0);
  EXPECT_DOUBLE_EQ(f(Point{-2.0, 0, 0}), 2.0);
}

TEST(ConvexEnvelope, IdentityOnConvexMap) {
  const EnvelopeGrid g = convex_envelope(YoungMap::squared_norm(2), BoxSpec::symmetric(2, 1.0), 21);
  ASSERT_EQ(g.values.size(), 441u);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    ASSERT_NEAR(g.envelope[i], g.values[i], 1e-12);
  }
  EXPECT_NEAR(g.ratio_max, 1.0, 1e-9);
  EXPECT_TRUE(equivalence_constant(g).finite);
}

TEST(ConvexEnvelope, DoubleWellMatchesBruteForceHull) {
  const BoxSpec box = BoxSpec::symmetric(1, 3.0);
  const EnvelopeGrid g = convex_envelope(double_well(), box, 25);
  const GridFunction f = g.value_function();
  std::vector<double> xs(g.values.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = f.node(i)[0];
  const std::vector<double> hull = hull_1d(xs, g.values);
  for (std::size_t i = 0; i < xs.size(); ++i) ASSERT_NEAR(g.envelope[i], hull[i], 1e-12) << xs[i];
  // x = 1 lies under the chord to the second well.
  EXPECT_LT(g.envelope[16], 1.0);
  EXPECT_DOUBLE_EQ(xs[16], 1.0);
  EXPECT_GT(g.ratio_max, 1.0);
}

TEST(ConvexEnvelope, SupportsAreCaratheodoryAndReproduceNodes) {
  const CertifiedOrlicz f = certify(OrliczFn::power(2.0), 2.0);
  const YoungMap phi = kalton_peck_map(f, LipschitzTheta::identity());
  const EnvelopeGrid g = convex_envelope(phi, BoxSpec::symmetric(2, 2.0), 21);
  const GridFunction grid = g.value_function();
  for (std::size_t i = 0; i < g.supports.size(); ++i) {
    const CaratheodorySupport& s = g.supports[i];
    ASSERT_GE(s.count, 1);
    ASSERT_LE(s.count, 3);
    Point p{};
    double w = 0.0;
    double v = 0.0;
    for (int k = 0; k < s.count; ++k) {
      ASSERT_GE(s.weights[k], -1e-12);
      p = add(p, scale(grid.node(s.nodes[k]), s.weights[k]));
      w += s.weights[k];
      v += s.weights[k] * g.values[s.nodes[k]];
    }
    ASSERT_NEAR(w, 1.0, 1e-9);
    const Point target = grid.node(i);
    ASSERT_NEAR(p[0], target[0], 1e-9);
    ASSERT_NEAR(p[1], target[1], 1e-9);
    ASSERT_NEAR(std::min(v, g.values[i]), g.envelope[i], 1e-9);
  }
}

TEST(ConvexEnvelope, BelowValuesAndConvexAlongGridLines) {
  const CertifiedOrlicz f = certify(OrliczFn::power(2.0), 2.0);
  const YoungMap phi = kalton_peck_map(f, LipschitzTheta::identity());
  const EnvelopeGrid g = convex_envelope(phi, BoxSpec::symmetric(2, 2.0), 21);
  const GridFunction env = g.envelope_function();
  for (std::size_t i = 0; i < g.values.size(); ++i) ASSERT_LE(g.envelope[i], g.values[i] + 1e-12);
  // Discrete second differences along both axes are nonnegative.
  for (int a = 0; a < 2; ++a) {
    for (int u = 0; u < 21; ++u) {
      for (int v = 1; v + 1 < 21; ++v) {
        std::array<int, kMaxDim> m{};
        m[a] = v;
        m[1 - a] = u;
        auto lo = m;
        auto hi = m;
        lo[a] -= 1;
        hi[a] += 1;
        const double d2 = g.envelope[env.flat_index(lo)] + g.envelope[env.flat_index(hi)] -
                          2 * g.envelope[env.flat_index(m)];
        ASSERT_GE(d2, -1e-9);
      }
    }
  }
}

TEST(ConvexEnvelope, Idempotent) {
  const EnvelopeGrid g = convex_envelope(double_well(), BoxSpec::symmetric(1, 3.0), 25);
  const EnvelopeGrid again = convex_envelope(g.envelope_function());
  for (std::size_t i = 0; i < g.envelope.size(); ++i) {
    ASSERT_NEAR(again.envelope[i], g.envelope[i], 1e-12);
  }
}

TEST(ConvexEnvelope, CommutesWithPositiveScaling) {
  const EnvelopeGrid g = convex_envelope(double_well(), BoxSpec::symmetric(1, 3.0), 25);
  for (double s : {2.0, 10.0}) {
    const EnvelopeGrid h = convex_envelope(double_well().scaled(s), BoxSpec::symmetric(1, 3.0), 25);
    for (std::size_t i = 0; i < g.envelope.size(); ++i) {
      ASSERT_NEAR(h.envelope[i], s * g.envelope[i], 1e-11 * s);
    }
  }
}

TEST(Equivalence, Examples) {
  const BoxSpec box = BoxSpec::symmetric(2, 1.0);
  const YoungMap m = YoungMap::squared_norm(2);
  EXPECT_NEAR(equivalence_constant(m, m, box, 21).M, 1.0, 1e-15);
  EXPECT_NEAR(equivalence_constant(m.scaled(2.0), m, box, 21).M, 2.0, 1e-12);
  const YoungMap zero(2, [](const Point&) { return 0.0; }, {});
  EXPECT_FALSE(equivalence_constant(m, zero, box, 21).finite);

  const CertifiedOrlicz f = certify(OrliczFn::power(2.0), 2.0);
  const YoungMap phi = kalton_peck_map(f, LipschitzTheta::identity());
  const EnvelopeGrid g = convex_envelope(phi, BoxSpec::symmetric(2, 2.0), 41);
  const Equivalence e = equivalence_constant(g);
  const double bound = kalton_peck_bound(f.constants, LipschitzTheta::identity());
  EXPECT_TRUE(e.finite);
  EXPECT_GE(e.M, 1.0);
  EXPECT_LE(e.M, bound * bound);
}

TEST(Sandwich, HoldsForZ2WithSampledConstant) {
  const CertifiedOrlicz f = certify(OrliczFn::power(2.0), 2.0);
  const YoungMap phi = kalton_peck_map(f, LipschitzTheta::identity());
  const EnvelopeGrid g = convex_envelope(phi, BoxSpec::symmetric(2, 2.0), 21);
  const QuasiConvexityEstimate q = quasiconvexity_constant(phi, 50000, 1);
  const SandwichCheck s = sandwich_check(g, q.L_hat);
  EXPECT_TRUE(s.lower_ok);
  EXPECT_TRUE(s.upper_ok);
  // With L = 1 the upper side fails since the map is not convex.
  EXPECT_FALSE(sandwich_check(g, 1.0, 0.0).upper_ok);
}

TEST(Mollify, SquaredNormAtTenPercent) {
  const BoxSpec box = BoxSpec::symmetric(2, 1.0);
  const MollifyResult r = mollify(YoungMap::squared_norm(2), 0.1, box, 21);
  EXPECT_TRUE(r.sandwich_at_requested);
  EXPECT_EQ(r.certified_c, 0.1);
  EXPECT_EQ(r.halvings, 0);
  EXPECT_NEAR(r.max_ratio, 1.005, 1e-9);
  EXPECT_NEAR(r.min_ratio, 1.0, 1e-12);
  const GridFunction& f = r.mollified;
  const Point x = f.node(f.origin_index() + 7);
  EXPECT_NEAR(f(x), norm2(x, 2) * norm2(x, 2) * 1.005, 1e-12);
}

TEST(Mollify, ZeroRadiusIsIdentityAndBadFractionsRejected) {
  const BoxSpec box = BoxSpec::symmetric(1, 2.0);
  const YoungMap m = double_well();
  const MollifyResult r = mollify(m, 0.0, box, 21);
  for (std::size_t i = 0; i < r.mollified.size(); ++i) {
    ASSERT_EQ(r.mollified.values()[i], m(r.mollified.node(i)));
  }
  EXPECT_THROW(mollify(m, 1.0, box, 21), SchemaError);
  EXPECT_THROW(mollify(m, -0.1, box, 21), SchemaError);
}

TEST(Mollify, Z2EnvelopeKeepsPositiveRadius) {
  const CertifiedOrlicz f = certify(OrliczFn::power(2.0), 2.0);
  const YoungMap phi = kalton_peck_map(f, LipschitzTheta::identity());
  const EnvelopeGrid g = convex_envelope(phi, BoxSpec::symmetric(2, 2.0), 21);
  const MollifyResult r = mollify(g.envelope_map(), 0.5, BoxSpec::symmetric(2, 1.0), 21);
  EXPECT_GT(r.certified_c, 0.0);
  EXPECT_GE(r.min_ratio, 0.5);
  EXPECT_LE(r.max_ratio, 2.0);
}

TEST(EnvelopeBackedMap, EnlargementKeepsResolution) {
  const EnvelopeBackedMap psi(YoungMap::squared_norm(2), BoxSpec::symmetric(2, 1.0), 21);
  EXPECT_TRUE(psi.contains(Point{1.0, -1.0, 0}));
  EXPECT_FALSE(psi.contains(Point{1.5, 0.0, 0}));
  const EnvelopeBackedMap big = psi.enlarged();
  EXPECT_TRUE(big.contains(Point{1.5, 0.0, 0}));
  EXPECT_EQ(big.grid().resolution, 21);
  EXPECT_DOUBLE_EQ(big.grid().box.hi[0], 2.0);
  EXPECT_THROW(psi.enlarged(1.0), SchemaError);
}

}  // namespace
}  // namespace orlicz
