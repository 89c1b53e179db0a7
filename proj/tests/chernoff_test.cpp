#include <gtest/gtest.h>

#include <cmath>

#include "byzfusion/chernoff.hpp"
#include "random_inputs.hpp"

namespace byzfusion {
namespace {

TEST(ChernoffObjective, Endpoints) {
  const FusedMarginals m(0.2, 0.8);
  EXPECT_NEAR(chernoff_objective(0.0, m), 1.0, 1e-15);
  EXPECT_NEAR(chernoff_objective(1.0, m), 1.0, 1e-15);
}

TEST(ChernoffObjective, Midpoint) {
  // 2 sqrt(0.2 * 0.8)
  EXPECT_NEAR(chernoff_objective(0.5, FusedMarginals(0.2, 0.8)), 0.8, 1e-15);
}

TEST(ChernoffObjective, DomainErrors) {
  EXPECT_THROW(chernoff_objective(0.5, FusedMarginals(0.0, 0.8)), DomainError);
  EXPECT_THROW(chernoff_objective(0.5, FusedMarginals(0.2, 1.0)), DomainError);
  EXPECT_THROW(chernoff_objective(1.5, FusedMarginals(0.2, 0.8)), DomainError);
}

TEST(ChernoffObjective, NoUnderflowNearBoundary) {
  const double v = chernoff_objective(0.5, FusedMarginals(1e-300, 1.0 - 1e-16));
  EXPECT_GT(v, 0.0);
  EXPECT_LE(v, 1.0);
}

TEST(ChernoffObjectiveProperty, ConvexSecondDifference) {
  testing::InputGenerator gen(21);
  for (int i = 0; i < 3000; ++i) {
    const FusedMarginals m = gen.ordered_marginals(1e-3);
    const double t = gen.uniform(0.01, 0.99);
    const double h = 1e-3;
    const double second = chernoff_objective(t - h, m) - 2 * chernoff_objective(t, m) + chernoff_objective(t + h, m);
    ASSERT_GE(second, -1e-15);
  }
}

TEST(ClosedFormTStar, SymmetricMarginals) {
  EXPECT_NEAR(closed_form_t_star(FusedMarginals(0.2, 0.8)), 0.5, 1e-15);
  EXPECT_NEAR(closed_form_t_star(FusedMarginals(0.48, 0.52)), 0.5, 1e-14);
}

TEST(ClosedFormTStar, AsymmetricAgainstHighPrecisionRoot) {
  // root of f'(t) at 50 digits
  EXPECT_NEAR(closed_form_t_star(FusedMarginals(0.3, 0.65)), 0.49669447423760533, 1e-14);
  EXPECT_NEAR(closed_form_t_star(FusedMarginals(0.05, 0.9)), 0.47593653222678216, 1e-14);
}

TEST(ClosedFormTStar, MatchesNumericOracle) {
  const FusedMarginals m(0.3, 0.65);
  EXPECT_NEAR(closed_form_t_star(m), numeric_t_star(m, 1e-12), 1e-9);
}

TEST(ClosedFormTStar, MatchesTextbookFormulaAwayFromDegeneracy) {
  testing::InputGenerator gen(22);
  for (int i = 0; i < 2000; ++i) {
    const FusedMarginals m = gen.ordered_marginals(0.05);
    const double a = m.pi10();
    const double b = m.pi11();
    const double g = std::log(b / a) / std::log((1 - a) / (1 - b));
    const double textbook = std::log(g * b / (1 - b)) / std::log(((1 / a) - 1) / ((1 / b) - 1));
    ASSERT_NEAR(closed_form_t_star(m), textbook, 1e-12) << a << " " << b;
  }
}

TEST(ClosedFormTStar, Errors) {
  EXPECT_THROW(closed_form_t_star(FusedMarginals(0.6, 0.4)), OrderingError);
  EXPECT_THROW(closed_form_t_star(FusedMarginals(0.5, 0.5 + 1e-13)), NearDegenerateError);
  EXPECT_THROW(closed_form_t_star(FusedMarginals(0.5, 0.5)), NearDegenerateError);
  EXPECT_THROW(closed_form_t_star(FusedMarginals(0.0, 0.5)), DomainError);
}

TEST(ClosedFormTStar, StableForCloseMarginals) {
  // t* -> 1/2 + O(d) as the marginals merge around 1/2.
  for (double d : {1e-4, 1e-6, 1e-8, 1e-10}) {
    const FusedMarginals m(0.5 - d / 2, 0.5 + d / 2);
    EXPECT_NEAR(closed_form_t_star(m), 0.5, 1e-6) << d;
    EXPECT_LT(stationarity_residual(closed_form_t_star(m), m), 1e-10) << d;
  }
}

TEST(NumericTStar, SymmetricCases) {
  EXPECT_NEAR(numeric_t_star(FusedMarginals(0.2, 0.8), 1e-12), 0.5, 1e-12);
  EXPECT_NEAR(numeric_t_star(FusedMarginals(0.4, 0.6), 1e-12), 0.5, 1e-12);
}

TEST(NumericTStar, ReversedOrderingStillMinimizes) {
  EXPECT_NEAR(numeric_t_star(FusedMarginals(0.6, 0.3), 1e-12), 0.50552736088184881, 1e-11);
}

TEST(NumericTStar, Errors) {
  EXPECT_THROW(numeric_t_star(FusedMarginals(0.2, 0.8), 0.0), DomainError);
  EXPECT_THROW(numeric_t_star(FusedMarginals(0.0, 0.8), 1e-6), DomainError);
  EXPECT_THROW(numeric_t_star(FusedMarginals(0.2, 0.8), 1e-300), NumericError);
}

TEST(ChernoffInformation, KnownValues) {
  EXPECT_NEAR(chernoff_information(FusedMarginals(0.2, 0.8)).c, 0.22314355131420979, 1e-15);
  EXPECT_NEAR(chernoff_information(FusedMarginals(0.48, 0.52)).c, 8.0064068348691807e-4, 1e-17);
  EXPECT_NEAR(chernoff_information(FusedMarginals(0.3, 0.65)).c, 0.065541639353940907, 1e-15);
}

TEST(ChernoffInformation, IdenticalDistributionsConvention) {
  const ChernoffResult r = chernoff_information(FusedMarginals(0.5, 0.5));
  EXPECT_EQ(r.c, 0.0);
  EXPECT_EQ(r.t_star, 0.5);
  EXPECT_FALSE(r.bracket_lo.has_value());
}

TEST(ChernoffInformation, ReversedOrderingUsesNumericPath) {
  const ChernoffResult r = chernoff_information(FusedMarginals(0.6, 0.3));
  EXPECT_NEAR(r.c, 0.047711628913917141, 1e-14);
  EXPECT_FALSE(r.bracket_lo.has_value());
}

TEST(ChernoffInformation, BracketPopulatedWithSensor) {
  const SensorOperatingPoint s(0.65, 0.3);
  const ChernoffResult r = chernoff_information(FusedMarginals(0.3, 0.65), s);
  ASSERT_TRUE(r.bracket_lo && r.bracket_hi);
  EXPECT_LT(*r.bracket_lo, r.t_star);
  EXPECT_LT(r.t_star, *r.bracket_hi);
}

TEST(TStarBounds, AttackFreeSymmetricSensor) {
  // Oracle: G, Y evaluated at 50 digits give A = 0.4, B = 0.6.
  const TStarBracket b = t_star_bounds(FusedMarginals(0.4, 0.6), SensorOperatingPoint(0.6, 0.4));
  EXPECT_NEAR(b.lo, 0.4, 1e-13);
  EXPECT_NEAR(b.hi, 0.6, 1e-13);
  EXPECT_LT(b.lo, 0.5);
  EXPECT_GT(b.hi, 0.5);
}

TEST(TStarBounds, AsymmetricSensor) {
  const TStarBracket b = t_star_bounds(FusedMarginals(0.3, 0.65), SensorOperatingPoint(0.65, 0.3));
  EXPECT_NEAR(b.lo, 0.32148016399110719, 1e-13);
  EXPECT_NEAR(b.hi, 0.67246589256293538, 1e-13);
}

TEST(TStarBounds, NearDegenerateRejected) {
  const SensorOperatingPoint s(0.6, 0.4);
  EXPECT_THROW(t_star_bounds(FusedMarginals(0.5, 0.5), s), NearDegenerateError);
  EXPECT_THROW(t_star_bounds(FusedMarginals(0.5, 0.5 + 1e-13), s), NearDegenerateError);
  // pi11 (G+1) - 1 ~ d / (2 pi) stays above the floor once the gap check passes
  EXPECT_NO_THROW(t_star_bounds(FusedMarginals(0.5, 0.5 + 1e-8), s));
  EXPECT_THROW(t_star_bounds(FusedMarginals(0.6, 0.4), s), OrderingError);
}

TEST(ChernoffProperty, RangeStationarityAndOracleAgreement) {
  testing::InputGenerator gen(23);
  for (int i = 0; i < 2000; ++i) {
    const FusedMarginals m = gen.ordered_marginals();
    const double t = closed_form_t_star(m);
    ASSERT_GE(t, 0.0);
    ASSERT_LE(t, 1.0);
    ASSERT_GT(t, 0.0);
    ASSERT_LT(t, 1.0);
    ASSERT_LT(stationarity_residual(t, m), 1e-10);
    ASSERT_NEAR(t, numeric_t_star(m, 1e-12), 1e-9) << m.pi10() << " " << m.pi11();
    // derivative of the Chernoff sum vanishes at t*
    ASSERT_LE(std::abs(chernoff_objective_derivative(t, m)), 1e-10);
  }
}

TEST(ChernoffProperty, InvariantUnderHypothesisSwap) {
  testing::InputGenerator gen(24);
  for (int i = 0; i < 3000; ++i) {
    const FusedMarginals m = gen.ordered_marginals(1e-6);
    const FusedMarginals swapped(1.0 - m.pi11(), 1.0 - m.pi10());
    ASSERT_NEAR(chernoff_information(m).c, chernoff_information(swapped).c, 1e-12);
  }
}

TEST(ChernoffProperty, InformationVanishesOnlyForIdenticalMarginals) {
  testing::InputGenerator gen(25);
  for (int i = 0; i < 2000; ++i) {
    const FusedMarginals m = gen.ordered_marginals(1e-4);
    ASSERT_GT(chernoff_information(m).c, 0.0);
    const double p = gen.uniform(1e-6, 1 - 1e-6);
    ASSERT_EQ(chernoff_information(FusedMarginals(p, p)).c, 0.0);
  }
}

TEST(ChernoffProperty, BracketContainsTStar) {
  testing::InputGenerator gen(26);
  int checked = 0;
  for (int i = 0; i < 3000; ++i) {
    const SensorOperatingPoint s = gen.sensor();
    const double alpha = gen.uniform(0.0, 0.49);
    const FusedMarginals m = marginalize(alpha, gen.attack(), s);
    TStarBracket b{};
    try {
      b = t_star_bounds(m, s);
    } catch (const NearDegenerateError&) {
      continue;
    }
    const double t = closed_form_t_star(m);
    ASSERT_LT(b.lo, t);
    ASSERT_LT(t, b.hi);
    ++checked;
  }
  EXPECT_GT(checked, 2900);
}

}  // namespace
}  // namespace byzfusion
