#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>

#include "vpatch/core.hpp"
#include "vpatch/trig_curve.hpp"

using namespace vpatch;

TEST(Core, ErrorCarriesCode) {
  try {
    require(false, ErrorCode::SingularArgument, "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularArgument);
    EXPECT_NE(std::string(e.what()).find("SingularArgument"), std::string::npos);
  }
  EXPECT_NO_THROW(require(true, ErrorCode::InvalidShape, "never"));
}

TEST(Core, CrossAndDot) {
  EXPECT_DOUBLE_EQ(cross({1, 0}, {0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(cross({0, 1}, {1, 0}), -1.0);
  EXPECT_DOUBLE_EQ(dot({1, 2}, {3, -4}), -5.0);
}

TEST(Core, GaussLegendreIntegratesPolynomials) {
  for (int order : {1, 2, 5, 8, 16}) {
    const GaussRule g = gaussLegendreUnit(order);
    ASSERT_EQ(g.nodes.size(), static_cast<std::size_t>(order));
    for (int deg = 0; deg < 2 * order; ++deg) {
      Real acc = 0.0;
      for (int i = 0; i < order; ++i) acc += g.weights[i] * std::pow(g.nodes[i], deg);
      EXPECT_NEAR(acc, 1.0 / (deg + 1), 1e-14) << "order " << order << " degree " << deg;
    }
  }
  EXPECT_THROW(gaussLegendreUnit(0), Error);
}

TEST(Core, PairwiseSumMatchesNaive) {
  std::vector<Real> v(1001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + i);
  Real naive = 0.0;
  for (Real x : v) naive += x;
  EXPECT_NEAR(pairwiseSum(v), naive, 1e-13);
  EXPECT_EQ(pairwiseSum(std::vector<Real>{}), 0.0);
}

TEST(Core, ParallelForVisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(257);
  parallelFor(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Core, ThreadCapFromEnvironment) {
  setenv("VPATCH_THREADS", "1", 1);
  EXPECT_EQ(workerCount(), 1u);
  unsetenv("VPATCH_THREADS");
  EXPECT_GE(workerCount(), 1u);
}

TEST(TrigCurve, InterpolatesSamplesExactly) {
  std::vector<Complex> s(32);
  for (std::size_t j = 0; j < s.size(); ++j) {
    const Real t = kTwoPi * j / 32.0;
    s[j] = Complex(0.3 * std::cos(t) + 0.01 * std::cos(5 * t), 0.2 * std::sin(t) - 0.02 * std::sin(16 * t));
  }
  const TrigCurve c = TrigCurve::interpolate(s);
  for (std::size_t j = 0; j < s.size(); ++j) EXPECT_LT(std::abs(c(kTwoPi * j / 32.0) - s[j]), 1e-15);
}

TEST(TrigCurve, DerivativesOfCircle) {
  const TrigCurve c({0.0, 0.0, 0.5}, 1);  // 0.5 e^{it}
  Complex z, zt, ztt;
  c.evaluate(0.7, z, zt, ztt);
  EXPECT_LT(std::abs(z - std::polar(0.5, 0.7)), 1e-15);
  EXPECT_LT(std::abs(zt - Complex(0, 1) * z), 1e-15);
  EXPECT_LT(std::abs(ztt + z), 1e-15);
}

TEST(TrigCurve, RejectsBadInput) {
  EXPECT_THROW(TrigCurve({1.0, 2.0}, 1), Error);
  EXPECT_THROW(TrigCurve::interpolate(std::vector<Complex>(7)), Error);
}
