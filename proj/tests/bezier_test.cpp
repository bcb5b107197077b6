#include "cpercept/bezier.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cpercept/errors.hpp"
#include "oracles.hpp"

namespace cpercept {
namespace {

const BezierPolynomial kQuadratic{0.20, 0.25, 1.00};

std::vector<double> grid(int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[std::size_t(i)] = double(i) / double(points - 1);
  return g;
}

TEST(BezierEval, InterpolatesEndpointsExactly) {
  EXPECT_EQ(eval(kQuadratic, 0.0), 0.20);
  EXPECT_EQ(eval(kQuadratic, 1.0), 1.00);
}

TEST(BezierEval, MidpointMatchesBernsteinSum) {
  // 0.2 * 0.25 + 0.25 * 2 * 0.25 + 1.0 * 0.25
  EXPECT_NEAR(eval(kQuadratic, 0.5), 0.425, 1e-15);
  EXPECT_NEAR(eval(kQuadratic, 0.5), oracle::bernstein_sum({0.20, 0.25, 1.00}, 0.5), 1e-15);
  EXPECT_NEAR(eval(kQuadratic, 0.5), to_monomial(kQuadratic)(0.5), 1e-15);
}

TEST(BezierEval, RejectsOutOfDomain) {
  EXPECT_THROW(eval(kQuadratic, -0.01), DomainError);
  EXPECT_THROW(eval(kQuadratic, 1.01), DomainError);
  EXPECT_THROW(eval(kQuadratic, std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST(BezierPolynomial, NeedsACoefficient) { EXPECT_THROW(BezierPolynomial(std::vector<double>{}), DomainError); }

TEST(BezierToMonomial, QuadraticExpansion) {
  const auto c = to_monomial(kQuadratic).coefficients;
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c[0], 0.2, 1e-12);
  EXPECT_NEAR(c[1], 0.1, 1e-12);
  EXPECT_NEAR(c[2], 0.7, 1e-12);
}

TEST(BezierToMonomial, LowDegrees) {
  EXPECT_EQ(to_monomial(BezierPolynomial{0.37}).coefficients, std::vector<double>{0.37});
  const auto linear = to_monomial(BezierPolynomial{0.2, 1.0}).coefficients;
  ASSERT_EQ(linear.size(), 2u);
  EXPECT_NEAR(linear[0], 0.2, 1e-12);
  EXPECT_NEAR(linear[1], 0.8, 1e-12);
}

TEST(BezierElevate, LinearToQuadratic) {
  const auto up = elevate_degree(BezierPolynomial{0.2, 1.0});
  ASSERT_EQ(up.degree(), 2u);
  EXPECT_EQ(up[0], 0.2);
  EXPECT_NEAR(up[1], 0.6, 1e-15);
  EXPECT_EQ(up[2], 1.0);
  for (double s : grid(101)) EXPECT_NEAR(eval(up, s), eval(BezierPolynomial{0.2, 1.0}, s), 1e-12);
}

TEST(BezierElevate, ConstantStaysConstant) {
  EXPECT_EQ(elevate_degree(BezierPolynomial{0.25}), (BezierPolynomial{0.25, 0.25}));
}

TEST(BezierElevate, QuadraticToCubicIsPointwiseEqual) {
  const BezierPolynomial quad{0.2, 0.6, 1.0};
  const auto cubic = elevate_degree(quad);
  ASSERT_EQ(cubic.degree(), 3u);
  for (double s : grid(101)) EXPECT_NEAR(eval(cubic, s), eval(quad, s), 1e-12);
}

// Randomized invariants over degrees 0..6.
class BezierProperties : public ::testing::Test {
 protected:
  std::vector<BezierPolynomial> polys() {
    auto gen = oracle::rng(1);
    std::uniform_int_distribution<int> degree(0, 6);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    std::vector<BezierPolynomial> out;
    for (int i = 0; i < 100; ++i) {
      std::vector<double> b(std::size_t(degree(gen) + 1));
      for (double& c : b) c = coef(gen);
      out.emplace_back(std::move(b));
    }
    return out;
  }
};

TEST_F(BezierProperties, EndpointInterpolation) {
  for (const auto& p : polys()) {
    EXPECT_EQ(eval(p, 0.0), p.coefficients().front());
    EXPECT_EQ(eval(p, 1.0), p.coefficients().back());
  }
}

TEST_F(BezierProperties, PartitionOfUnity) {
  for (const auto& p : polys()) {
    const BezierPolynomial flat(std::vector<double>(p.degree() + 1, p[0]));
    for (double s : grid(1001)) ASSERT_NEAR(eval(flat, s), p[0], 1e-12);
  }
}

TEST_F(BezierProperties, ConvexHull) {
  for (const auto& p : polys()) {
    const auto [lo, hi] = std::minmax_element(p.coefficients().begin(), p.coefficients().end());
    for (double s : grid(1001)) {
      const double v = eval(p, s);
      ASSERT_GE(v, *lo - 1e-15);
      ASSERT_LE(v, *hi + 1e-15);
    }
  }
}

TEST_F(BezierProperties, MonomialAgreesWithBernsteinUpToCubic) {
  for (const auto& p : polys()) {
    if (p.degree() > 3) continue;
    const auto mono = to_monomial(p);
    const std::vector<double> b(p.coefficients().begin(), p.coefficients().end());
    for (double s : grid(1001)) {
      ASSERT_NEAR(eval(p, s), mono(s), 1e-10);
      ASSERT_NEAR(eval(p, s), oracle::bernstein_sum(b, s), 1e-10);
    }
  }
}

TEST_F(BezierProperties, ElevationIsPointwiseIdentity) {
  for (const auto& p : polys()) {
    const auto up = elevate_degree(p);
    ASSERT_EQ(up.degree(), p.degree() + 1);
    for (double s : grid(1001)) ASSERT_NEAR(eval(up, s), eval(p, s), 1e-12);
  }
}

TEST(BezierPositivity, PositiveCoefficientsGivePositiveCurve) {
  auto gen = oracle::rng(2);
  for (int i = 0; i < 200; ++i) {
    const BezierPolynomial p(oracle::random_positive_bezier(gen, 5));
    ASSERT_TRUE(all_coefficients_positive(p));
    ASSERT_GT(min_on_unit_interval(p), 0.0);
  }
  EXPECT_FALSE(all_coefficients_positive(BezierPolynomial{0.2, -0.1, 1.0}));
}

TEST(BezierJson, ArrayForm) {
  const nlohmann::json j = kQuadratic;
  EXPECT_EQ(j.dump(), "[0.2,0.25,1.0]");
  EXPECT_EQ(j.get<BezierPolynomial>(), kQuadratic);
}

TEST(BezierJson, RoundTripIsBitExact) {
  auto gen = oracle::rng(3);
  std::uniform_real_distribution<double> coef(-1e3, 1e3);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> b(std::size_t(1 + i % 5));
    for (double& c : b) c = coef(gen);
    const BezierPolynomial p(b);
    const auto back = nlohmann::json::parse(nlohmann::json(p).dump()).get<BezierPolynomial>();
    ASSERT_EQ(back, p);
  }
}

TEST(BezierJson, RejectsMalformed) {
  EXPECT_THROW(nlohmann::json::parse("[]").get<BezierPolynomial>(), ValidationError);
  EXPECT_THROW(nlohmann::json::parse("[0.2, \"x\"]").get<BezierPolynomial>(), ValidationError);
  EXPECT_THROW(nlohmann::json::parse("{\"b\": 1}").get<BezierPolynomial>(), ValidationError);
}

}  // namespace
}  // namespace cpercept
