#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "orlicz/renorm.hpp"
#include "orlicz/rng.hpp"

namespace orlicz {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

const Pipeline& t2() {
  static const Pipeline p = t2_pipeline(1);
  return p;
}

BlockSeq scalar_blocks(std::initializer_list<double> v) {
  BlockSeq b;
  b.n = 1;
  for (double x : v) b.blocks.push_back(Point{x, 0.0, 0.0});
  return b;
}

Point at(double x) { return Point{x, 0.0, 0.0}; }

TEST(Gauge, SquaredNormAtHalf) {
  const YoungMap t2 = YoungMap::squared_norm(1);
  EXPECT_NEAR(minkowski_gauge(t2, 0.5, at(1.0)), kSqrt2, 1e-14);
  EXPECT_EQ(minkowski_gauge(t2, 0.5, at(0.0)), 0.0);
  EXPECT_THROW(minkowski_gauge(t2, 0.0, at(1.0)), SchemaError);
  const YoungMap flat(1, [](const Point& x) { return std::min(std::abs(x[0]), 0.1); }, {true, false});
  EXPECT_THROW(minkowski_gauge(flat, 0.5, at(1.0)), NumericFailure);
}

TEST(Gauge, PositivelyHomogeneous) {
  const YoungMap m = YoungMap::radial_power(2, 3.0);
  for (std::uint64_t i = 0; i < 300; ++i) {
    TrialRng rng(53, i);
    const Point x{rng.uniform(-5, 5), rng.uniform(-5, 5), 0.0};
    const double s = rng.log_uniform(1e-3, 1e3);
    const double g = minkowski_gauge(m, 0.25, x);
    ASSERT_NEAR(minkowski_gauge(m, 0.25, scale(x, s)), s * g, 1e-13 * s * g);
  }
}

TEST(LevelConstant, PowerExamples) {
  EXPECT_NEAR(level_constant(YoungMap::squared_norm(1), 0.5), 1.0, 1e-9);
  EXPECT_NEAR(level_constant(YoungMap::squared_norm(1), 0.125), 0.25, 1e-9);
  EXPECT_NEAR(level_constant(YoungMap::radial_power(1, 4.0), 0.25), 1.0, 1e-9);
  EXPECT_NEAR(level_constant(YoungMap::radial_power(1, 4.0), 0.1), 0.4, 1e-9);
  EXPECT_NEAR(level_constant(YoungMap::squared_norm(2), 0.5), 1.0, 1e-9);
}

TEST(SelectAlpha, FirstAdmissibleHalving) {
  EXPECT_DOUBLE_EQ(select_alpha(YoungMap::squared_norm(1)).gauge.alpha(), 0.5);
  EXPECT_EQ(select_alpha(YoungMap::squared_norm(1)).halvings, 1);
  EXPECT_DOUBLE_EQ(select_alpha(YoungMap::radial_power(1, 4.0)).gauge.alpha(), 0.25);
  EXPECT_DOUBLE_EQ(select_alpha(YoungMap::squared_norm(2)).gauge.alpha(), 0.5);
  const AlphaSelection s = select_alpha(YoungMap::squared_norm(1));
  EXPECT_LE(s.gauge.M(), 1.0 + 1e-9);
  EXPECT_LE(s.gauge.alpha(), s.tau_inf);
}

TEST(SelectAlpha, RejectsUnsupportedDimension) {
  EXPECT_THROW(select_alpha(YoungMap::squared_norm(3)), SchemaError);
}

TEST(PhiTilde, SquaredNormExamples) {
  const PhiTilde& f = t2().phitilde;
  EXPECT_TRUE(f.continuous);
  EXPECT_TRUE(f.convex);
  EXPECT_TRUE(f.decreasing);
  EXPECT_NEAR(f.map(at(1.0)), kSqrt2 - 0.5, 1e-12);
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0 / kSqrt2;
    ASSERT_NEAR(f.map(at(x)), x * x, 1e-12);
    ASSERT_NEAR(f.map(at(-x)), x * x, 1e-12);
  }
  // Affine in the gauge beyond the level set.
  EXPECT_NEAR(f.map(at(3.0)), 0.5 + (3 * kSqrt2 - 1), 1e-12);
}

TEST(StarNorm, Examples) {
  const StarNorm& N = t2().N;
  EXPECT_NEAR(N(1.0, at(1.0)), kSqrt2 + 0.5, 1e-12);
  EXPECT_NEAR(N(0.0, at(1.0)), kSqrt2, 1e-12);
  EXPECT_NEAR(N(0.0, at(-1.0)), kSqrt2, 1e-12);
  EXPECT_DOUBLE_EQ(N(1.0, at(0.0)), 1.0);
  EXPECT_DOUBLE_EQ(N(0.0, at(0.0)), 0.0);
  // Homogeneous of degree one.
  EXPECT_NEAR(N(3.0, at(2.0)), 3.0 * N(1.0, at(2.0 / 3.0)), 1e-12);
}

TEST(StarNorm, RejectsFailedDecreasingCertificate) {
  PhiTilde f = t2().phitilde;
  f.decreasing = false;
  EXPECT_THROW(StarNorm{f}, CertificateFailure);
}

TEST(StarIterate, ExamplesAndPadding) {
  const StarNorm& N = t2().N;
  const auto v = star_iterate(N, scalar_blocks({1.0, 0.0}));
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(v[0], kSqrt2, 1e-12);
  EXPECT_NEAR(v[1], kSqrt2, 1e-12);
  // N(sqrt 2, 1) = sqrt 2 (1 + (1 / sqrt 2)^2).
  EXPECT_NEAR(lambda_norm(N, scalar_blocks({1.0, 1.0})), 1.5 * kSqrt2, 1e-12);
  EXPECT_EQ(lambda_norm(N, BlockSeq{}), 0.0);
  for (std::uint64_t i = 0; i < 200; ++i) {
    TrialRng rng(59, i);
    const BlockSeq xi = random_blocks(rng, 1);
    const double a = lambda_norm(N, xi);
    ASSERT_EQ(lambda_norm(N, xi.concat(scalar_blocks({0.0, 0.0, 0.0}))), a);
    ASSERT_EQ(lambda_norm(N, scalar_blocks({0.0}).concat(xi)), a);
    const auto it = star_iterate(N, xi);
    for (std::size_t k = 1; k < it.size(); ++k) ASSERT_GE(it[k], it[k - 1]);
  }
}

TEST(StarIterate, RejectsMismatchedBlocks) {
  BlockSeq b;
  b.n = 2;
  b.blocks.push_back(Point{1.0, 1.0, 0.0});
  EXPECT_THROW(star_iterate(t2().N, b), SchemaError);
  BlockSeq bad = scalar_blocks({1.0});
  bad.blocks[0][1] = 1.0;
  EXPECT_THROW(bad.validate(), SchemaError);
}

TEST(LambdaNorm, HomogeneousAndTriangleOnSequences) {
  const StarNorm& N = t2().N;
  for (std::uint64_t i = 0; i < 300; ++i) {
    TrialRng rng(61, i);
    BlockSeq a = random_blocks(rng, 1);
    BlockSeq b = random_blocks(rng, 1);
    const double na = lambda_norm(N, a);
    ASSERT_NEAR(lambda_norm(N, a.scaled(-2.5)), 2.5 * na, 1e-12 * (1 + na));
    while (a.blocks.size() < b.blocks.size()) a.blocks.push_back(Point{});
    while (b.blocks.size() < a.blocks.size()) b.blocks.push_back(Point{});
    BlockSeq sum = a;
    for (std::size_t k = 0; k < sum.blocks.size(); ++k) sum.blocks[k] = add(a.blocks[k], b.blocks[k]);
    const double rhs = lambda_norm(N, a) + lambda_norm(N, b);
    ASSERT_LE(lambda_norm(N, sum), rhs * (1 + 1e-12) + 1e-300);
  }
}

TEST(SuffCriterion, HoldsOnUnitBallSequences) {
  const StarNorm& N = t2().N;
  const SuffCertificate c = suff_certificate(N, 300, 7);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.failures, 0u);
  EXPECT_GT(c.steps_checked, 300u);
  const SuffReport r = suff_criterion_check(N, t2().phitilde.map, scalar_blocks({0.3, 0.2, 0.1}));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.steps_checked, 2);
  EXPECT_GE(r.max_violation, 0.0);
}

TEST(PrefixSubstitution, EqualNormsGiveEqualExtensions) {
  const StarNorm& N = t2().N;
  const BlockSeq u = scalar_blocks({1.0, 0.5});
  const BlockSeq v = match_lambda_norm(N, scalar_blocks({0.2, 0.7}), lambda_norm(N, u));
  const PrefixReport r = prefix_substitution_check(N, u, v, scalar_blocks({0.4, -2.0}));
  EXPECT_TRUE(r.precondition_ok) << r.precondition_message;
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.difference, 1e-9);

  const PrefixReport bad = prefix_substitution_check(N, u, u.scaled(2.0), scalar_blocks({1.0}));
  EXPECT_FALSE(bad.precondition_ok);
  EXPECT_FALSE(bad.holds);
  EXPECT_FALSE(bad.precondition_message.empty());

  const SubstitutionCertificate c = property_m_certificate(N, 300, 11);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.failures, 0u);
  EXPECT_EQ(c.precondition_failures, 0u);
}

TEST(MatchLambdaNorm, HitsTarget) {
  const StarNorm& N = t2().N;
  const BlockSeq shape = scalar_blocks({0.3, -1.0, 2.0});
  for (double target : {0.01, 0.5, 1.0, 40.0}) {
    EXPECT_NEAR(lambda_norm(N, match_lambda_norm(N, shape, target)), target, 1e-12 * target);
  }
  EXPECT_THROW(match_lambda_norm(N, scalar_blocks({0.0}), 1.0), SchemaError);
  EXPECT_THROW(match_lambda_norm(N, shape, -1.0), SchemaError);
}

TEST(StarNorm, MonotoneInFirstArgumentAndLimitConsistent) {
  const StarNorm& N = t2().N;
  const ViolationReport m = monotonicity_check(N, 100000, 13);
  EXPECT_EQ(m.samples, 100000u);
  EXPECT_LE(m.max_violation, 1e-12);
  for (double x : {1e-2, 0.5, 1.0, 7.0, -30.0}) EXPECT_LE(N.limit_crosscheck(at(x)), 1e-6) << x;
}

TEST(StarNorm, LimitGapMatchesAffineTail) {
  // Beyond the level set the near-limit value is t (1 + alpha - M) + M |x|, so the
  // relative gap at t = 1e-8 is 1e-8 (1 + alpha - M) / (M |x|).
  const StarNorm& N = t2().N;
  for (double x : {1e-4, 1e-3, 0.3, 20.0}) {
    const double expect = 1e-8 * 0.5 / (kSqrt2 * x);
    EXPECT_NEAR(N.limit_crosscheck(at(x)), expect, 1e-4 * expect) << x;
  }
}

TEST(StarNorm, TriangleOnPlaneSamples) {
  for (int n : {1, 2}) {
    const Pipeline p = t2_pipeline(n);
    const ViolationReport r = triangle_check(p.N, 20000, 17);
    EXPECT_LE(r.max_violation, 1e-12) << n;
    EXPECT_EQ(r.samples, 20000u);
  }
}

}  // namespace
}  // namespace orlicz
