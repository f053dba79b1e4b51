#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "orlicz/envelope.hpp"
#include "orlicz/rng.hpp"
#include "orlicz/scalarfn.hpp"
#include "orlicz/seqspace.hpp"
#include "orlicz/youngmap.hpp"

namespace orlicz {
namespace {

double lp_norm(const VecSeq& s, double p) {
  double sum = 0.0;
  for (const auto& e : s.entries()) sum += std::pow(std::abs(e.value[0]), p);
  return std::pow(sum, 1.0 / p);
}

VecSeq random_scalar(TrialRng& rng) {
  const int n = 1 + static_cast<int>(rng.below(8));
  std::vector<std::pair<std::int64_t, double>> entries;
  std::int64_t idx = 0;
  for (int k = 0; k < n; ++k) {
    idx += 1 + static_cast<std::int64_t>(rng.below(5));
    entries.emplace_back(idx, rng.sign() * rng.log_uniform(1e-3, 1e3));
  }
  return VecSeq::scalar(std::move(entries));
}

TEST(VecSeq, ValidatesIndicesAndDropsZeros) {
  EXPECT_THROW(VecSeq::scalar({{2, 1.0}, {1, 1.0}}), SchemaError);
  EXPECT_THROW(VecSeq::scalar({{0, 1.0}}), SchemaError);
  EXPECT_THROW(VecSeq::scalar({{1, 1.0}, {1, 2.0}}), SchemaError);
  EXPECT_THROW(VecSeq::scalar({{1, NAN}}), SchemaError);
  EXPECT_THROW(VecSeq(1, {{1, Point{1.0, 2.0, 0.0}}}), SchemaError);
  const VecSeq s = VecSeq::scalar({{1, 0.0}, {4, 2.0}});
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.at(4), 2.0);
  EXPECT_EQ(s.at(3), 0.0);
  EXPECT_TRUE((s - s).empty());
}

TEST(Modular, Examples) {
  const OrliczFn t2 = OrliczFn::power(2.0);
  const std::vector<double> ones{1.0, 1.0};
  EXPECT_DOUBLE_EQ(modular(t2, VecSeq::scalar_dense(ones), 1.0), 2.0);
  const std::vector<double> v34{3.0, 4.0};
  EXPECT_DOUBLE_EQ(modular(t2, VecSeq::scalar_dense(v34), 5.0), 1.0);
  EXPECT_EQ(modular(t2, VecSeq(1), 1.0), 0.0);
  EXPECT_THROW(modular(t2, VecSeq::scalar_dense(ones), 0.0), SchemaError);
  EXPECT_THROW(modular(t2, VecSeq::scalar_dense(ones), -1.0), SchemaError);
  EXPECT_THROW(modular(YoungMap::squared_norm(2), VecSeq::scalar_dense(ones), 1.0), SchemaError);
}

TEST(Luxemburg, Examples) {
  const std::vector<double> v34{3.0, 4.0};
  const NormResult r = luxemburg(OrliczFn::power(2.0), VecSeq::scalar_dense(v34));
  EXPECT_NEAR(r.norm, 5.0, 5e-11);
  EXPECT_LE(r.modular, 1.0);
  EXPECT_NEAR(r.modular, 1.0, 1e-9);
  const std::vector<double> ones{1.0, 1.0};
  EXPECT_NEAR(luxemburg_norm(OrliczFn::power(4.0), VecSeq::scalar_dense(ones)),
              std::pow(2.0, 0.25), 1e-11);
  EXPECT_EQ(luxemburg_norm(OrliczFn::power(2.0), VecSeq(1)), 0.0);
}

TEST(Luxemburg, PowerFunctionGivesLpNorm) {
  for (double p : {1.5, 2.0, 3.0, 6.0}) {
    const OrliczFn f = OrliczFn::power(p);
    for (std::uint64_t i = 0; i < 300; ++i) {
      TrialRng rng(17, i);
      const VecSeq s = random_scalar(rng);
      const double oracle = lp_norm(s, p);
      ASSERT_NEAR(luxemburg_norm(f, s), oracle, 1e-10 * oracle) << p;
    }
  }
}

TEST(Luxemburg, MapAndScalarRoutesAgree) {
  const OrliczFn f = OrliczFn::power_log(2.0);
  const YoungMap m = YoungMap::from_orlicz(f);
  for (std::uint64_t i = 0; i < 200; ++i) {
    TrialRng rng(19, i);
    const VecSeq s = random_scalar(rng);
    ASSERT_EQ(luxemburg_norm(f, s), luxemburg_norm(m, s));
  }
}

TEST(Luxemburg, NormAxiomsOnSamples) {
  const OrliczFn f = OrliczFn::extension(OrliczFn::power_log(2.0), 4.0);
  for (std::uint64_t i = 0; i < 500; ++i) {
    TrialRng rng(23, i);
    const VecSeq a = random_scalar(rng);
    const VecSeq b = random_scalar(rng);
    const double na = luxemburg_norm(f, a);
    const double nb = luxemburg_norm(f, b);
    ASSERT_GT(na, 0.0);
    for (double lam : {-2.0, 0.5, 3.0}) {
      ASSERT_NEAR(luxemburg_norm(f, a.scaled(lam)), std::abs(lam) * na, 1e-10 * std::abs(lam) * na);
    }
    ASSERT_LE(luxemburg_norm(f, a + b), (na + nb) * (1 + 1e-10));
  }
}

TEST(Modular, NonincreasingInRho) {
  const OrliczFn f = OrliczFn::power(3.0);
  for (std::uint64_t i = 0; i < 200; ++i) {
    TrialRng rng(29, i);
    const VecSeq s = random_scalar(rng);
    const double r1 = rng.log_uniform(1e-2, 1e2);
    const double r2 = r1 * (1 + rng.uniform());
    ASSERT_GE(modular(f, s, r1), modular(f, s, r2));
  }
}

TEST(MembershipMargin, ReportsModularPerRho) {
  const std::vector<double> ones{1.0, 1.0};
  const std::vector<double> rhos{1.0, 2.0};
  const auto m = membership_margin(OrliczFn::power(2.0), VecSeq::scalar_dense(ones), rhos);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], std::make_pair(1.0, 2.0));
  EXPECT_EQ(m[1], std::make_pair(2.0, 0.5));
}

TEST(Luxemburg, RejectsNonRadiallyMonotoneMap) {
  const YoungMap bumpy(1, [](const Point& x) { return std::abs(std::sin(x[0])); }, {});
  const std::vector<double> ones{1.0};
  EXPECT_THROW(luxemburg_norm(bumpy, VecSeq::scalar_dense(ones)), SchemaError);
}

TEST(Luxemburg, EnvelopeBackedMapEnlargesUntilInside) {
  EnvelopeBackedMap psi(YoungMap::squared_norm(2), BoxSpec::symmetric(2, 0.25), 21);
  const VecSeq s(2, {{1, Point{3.0, 4.0, 0.0}}});
  const NormResult r = luxemburg(psi, s);
  // Single entry: the norm solves psi(s_1 / rho) = 1, so s_1 / rho lies on the unit circle.
  EXPECT_NEAR(r.norm, 5.0, 1e-9);
  EXPECT_LE(r.modular, 1.0 + 1e-6);
  EXPECT_GE(psi.grid().box.hi[0], 1.0);
  EnvelopeBackedMap tiny(YoungMap::squared_norm(2), BoxSpec::symmetric(2, 0.25), 21);
  EXPECT_THROW(luxemburg(tiny, s, 1), NumericFailure);
}

}  // namespace
}  // namespace orlicz
