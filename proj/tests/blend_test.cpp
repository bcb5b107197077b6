#include "cpercept/blend.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cpercept/errors.hpp"
#include "oracles.hpp"

namespace cpercept {
namespace {

TEST(Forward, FullOpacityShowsTheForeground) { EXPECT_EQ(forward(0.3, 0.9, 1.0), 0.3); }

TEST(Forward, ZeroOpacityShowsTheIllumination) { EXPECT_EQ(forward(0.3, 0.9, 0.0), 0.9); }

TEST(Forward, EqualInputsAreFixed) {
  for (double y : {0.0, 0.1, 0.37, 0.8, 1.0}) EXPECT_EQ(forward(0.5, 0.5, y), 0.5);
}

TEST(Forward, AffineOpacityAtHalfSize) {
  const double y = opacity(default_affine_model(), 0.5);
  EXPECT_NEAR(forward(0.2, 0.8, y), 0.32, 1e-15);
  // Expanded affine form: (0.4 - 0.4 s) on one input, (0.6 + 0.4 s) on the other.
  EXPECT_NEAR(forward(0.2, 0.8, 1.0 - y), (0.4 - 0.4 * 0.5) * 0.2 + (0.6 + 0.4 * 0.5) * 0.8, 1e-15);
}

TEST(Forward, RejectsOutOfRangeInputs) {
  EXPECT_THROW(forward(1.1, 0.5, 0.5), DomainError);
  EXPECT_THROW(forward(0.5, -0.1, 0.5), DomainError);
  EXPECT_THROW(forward(0.5, 0.5, 1.0001), DomainError);
}

TEST(ForwardProperties, StaysBetweenItsInputs) {
  auto gen = oracle::rng(20);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = u(gen), b = u(gen), y = u(gen);
    const double v = forward(a, b, y);
    ASSERT_GE(v, std::min(a, b));
    ASSERT_LE(v, std::max(a, b));
  }
}

TEST(ForwardProperties, MonotoneInEachArgument) {
  auto gen = oracle::rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = u(gen), b = u(gen), y = u(gen);
    double prev_lp = -1.0, prev_ia = -1.0;
    for (int i = 0; i <= 100; ++i) {
      const double t = i / 100.0;
      const double by_lp = forward(t, b, y);
      const double by_ia = forward(a, t, y);
      ASSERT_GE(by_lp, prev_lp);
      ASSERT_GE(by_ia, prev_ia);
      prev_lp = by_lp;
      prev_ia = by_ia;
    }
    const double hi = std::max(a, b), lo = std::min(a, b);
    if (hi - lo < 1e-6) continue;
    double prev_y = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double v = forward(hi, lo, i / 1000.0);
      ASSERT_GE(v, prev_y);
      prev_y = v;
    }
  }
}

TEST(Invert, RoundTrip) { EXPECT_NEAR(invert(forward(0.37, 0.62, 0.8), 0.62, 0.8), 0.37, 1e-12); }

TEST(Invert, MatchingIlluminationIsFixed) {
  for (double y : {1e-4, 0.3, 1.0}) EXPECT_NEAR(invert(0.44, 0.44, y), 0.44, 1e-12);
}

TEST(Invert, GuardsSmallOpacity) {
  EXPECT_THROW(invert(0.5, 0.5, 0.001, 0.01), SingularityError);
  EXPECT_THROW(invert(0.5, 0.5, 0.5, 0.0), DomainError);
  EXPECT_THROW(invert(0.5, 0.5, 1.5), DomainError);
  try {
    invert(0.5, 0.5, 0.001, 0.01);
  } catch (const SingularityError& e) {
    EXPECT_EQ(e.opacity(), 0.001);
    EXPECT_EQ(e.epsilon(), 0.01);
  }
}

TEST(Invert, ResultIsNotClamped) {
  // Dark observation over bright surroundings at low opacity needs a negative L_P.
  EXPECT_LT(invert(0.1, 0.9, 0.2), 0.0);
}

TEST(InvertProperties, RoundTripUnderThePowerModel) {
  auto gen = oracle::rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> size(0.05, 1.0);
  const auto model = default_power_model();
  for (int i = 0; i < 10000; ++i) {
    const double l_p = u(gen), i_a = u(gen);
    const double y = opacity(model, size(gen));
    ASSERT_NEAR(invert(forward(l_p, i_a, y), i_a, y), l_p, 1e-9);
  }
}

TEST(InvertProperties, PowerModelDivergesUntilTheGuardFires) {
  const auto model = default_power_model();
  const double l_o = 0.2, i_a = 0.8;
  double previous_magnitude = 0.0;
  bool fired = false;
  for (int k = 1; k <= 40 && !fired; ++k) {
    const double s = std::pow(10.0, -k);
    const double y = opacity(model, s);
    try {
      const double l_p = invert(l_o, i_a, y);
      ASSERT_GE(y, kDefaultInverseEpsilon);
      ASSERT_GT(std::abs(l_p), previous_magnitude) << "k = " << k;
      previous_magnitude = std::abs(l_p);
    } catch (const SingularityError&) {
      ASSERT_LT(y, kDefaultInverseEpsilon);
      fired = true;
    }
  }
  EXPECT_TRUE(fired);
  EXPECT_GT(previous_magnitude, 1e3);
}

TEST(InverseRangeBound, AffineFamily) {
  // Grid supremum of 1/y.
  double sup = 0.0;
  for (int i = 0; i <= 10000; ++i) sup = std::max(sup, 1.0 / oracle::affine_opacity(0.6, 1.0, i / 10000.0));
  EXPECT_NEAR(inverse_range_bound({0.6, 1.0}), sup, 1e-12);
  EXPECT_NEAR(inverse_range_bound({0.6, 1.0}), 1.0 / 0.6, 1e-15);
  EXPECT_EQ(inverse_range_bound({1.0, 1.0}), 1.0);
  EXPECT_EQ(inverse_range_bound({0.5, 0.5}), 2.0);
}

TEST(InverseRangeBound, RejectsNonPositiveCoefficients) {
  EXPECT_THROW(inverse_range_bound({0.0, 1.0}), DomainError);
  EXPECT_THROW(inverse_range_bound({0.5, -1.0}), DomainError);
}

TEST(Observe, CarriesInputs) {
  const auto sample = observe(0.2, 0.8, 0.5);
  EXPECT_EQ(sample.l_p, 0.2);
  EXPECT_EQ(sample.i_a, 0.8);
  EXPECT_NEAR(sample.l_o, 0.5, 1e-15);
}

}  // namespace
}  // namespace cpercept
