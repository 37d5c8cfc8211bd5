#include <gtest/gtest.h>

#include "vpatch/functionals.hpp"
#include "vpatch/vstate.hpp"

using namespace vpatch;

namespace {

void expectCode(const std::function<void()>& f, ErrorCode code) {
  try {
    f();
    ADD_FAILURE() << "no throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

const VStateSolution& threeFold() {
  static const VStateSolution s = solveVState(3, 0.5, 0.05);
  return s;
}

}  // namespace

TEST(VState, BifurcationFormula) {
  EXPECT_DOUBLE_EQ(bifurcationOmega(2, 0.5), (1 + std::pow(0.5, 4)) / 4);
  EXPECT_DOUBLE_EQ(bifurcationOmega(3, 0.5), 0.3359375);
  EXPECT_NEAR(bifurcationOmega(3, 0.3), (2 + std::pow(0.3, 6)) / 6, 1e-16);
  expectCode([] { bifurcationOmega(0, 0.5); }, ErrorCode::InvalidArgument);
  expectCode([] { bifurcationOmega(2, 1.0); }, ErrorCode::InvalidArgument);
}

TEST(VState, DiscsAreVStatesForEveryOmega) {
  for (Real om : {-2.0, 0.0, 0.3, 3.0}) EXPECT_LT(boundaryResidual(disc(0.5), om).residualMax, 1e-13);
  // a flower is not
  EXPECT_GT(boundaryResidual(flower(0.5, 3, 0.05), 0.3).residualMax, 1e-4);
}

TEST(VState, ZeroAmplitudeReturnsBifurcationPoint) {
  const VStateSolution s = solveVState(3, 0.5, 0.0);
  EXPECT_EQ(s.omega, bifurcationOmega(3, 0.5));
  EXPECT_LT(s.residualMax, 1e-13);
  EXPECT_EQ(s.iterations, 0);
}

TEST(VState, SmallAmplitudeNearBifurcation) {
  for (auto [m, b] : {std::pair{2, 0.5}, std::pair{3, 0.5}, std::pair{3, 0.3}}) {
    const VStateSolution s = solveVState(m, b, 1e-3);
    EXPECT_NEAR(s.omega, bifurcationOmega(m, b), 1e-3);
    EXPECT_NEAR(s.omega, bifurcationOmega(m, b), 1e-5);  // the shift is quadratic in the amplitude
    EXPECT_LT(s.residualMax, 1e-10);
  }
}

TEST(VState, ThreeFoldSolutionProperties) {
  const VStateSolution& s = threeFold();
  EXPECT_LT(s.residualMax, 1e-10);
  EXPECT_GT(s.omega, 0.0);
  EXPECT_LT(s.omega, bifurcationOmega(3, 0.5));
  const PatchSummary sum = summarize(s.boundary);
  EXPECT_NEAR(sum.area, kPi * 0.25, 1e-13);
  EXPECT_NEAR(s.boundary.cosCoeffs()[2], 0.05, 0.0);
  // only multiples of 3 appear
  const auto& a = s.boundary.cosCoeffs();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if ((k + 1) % 3 != 0) EXPECT_EQ(a[k], 0.0);
  }
  EXPECT_LT(hausdorff(s.boundary, rotate(s.boundary, kTwoPi / 3)), 1e-13);
}

TEST(VState, FirstVariationVanishes) {
  const VStateSolution& s = threeFold();
  const TorsionSolution t(s.boundary);
  const FunctionalReport r = decompose(s.boundary, s.omega, t);
  const Real area = r.summary.area;
  EXPECT_LT(std::abs(r.firstVariation), 1e-4 * area * area);
  EXPECT_LT(std::abs(r.firstVariation), 1e-10);
  EXPECT_EQ(r.verdict, Verdict::Inconclusive);
}

TEST(VState, OrthogonalToDivergenceFreeFields) {
  // w = grad^perp phi, phi = Im(z^3) + 0.3 x y; not tangent to the boundary, and it
  // sees the 3-fold modes of the boundary data
  auto w = [](Complex x) {
    const Real X = x.real(), Y = x.imag();
    return Complex(3 * X * X - 3 * Y * Y + 0.3 * X, -(6 * X * Y + 0.3 * Y));
  };
  auto pairing = [&](const PatchBoundary& d, Real om) {
    const PatchPotential p(d);
    const AreaQuadrature q = fanQuadrature(d, 16);
    return q.integrate([&](Complex x) { return dot(p.streamGradient(x) + om * x, w(x)); });
  };
  const VStateSolution& s = threeFold();
  const Real area = summarize(s.boundary).area;
  Real wmax = 0.0;
  for (Complex z : s.boundary.nodes()) wmax = std::max(wmax, std::abs(w(z)));
  EXPECT_LT(std::abs(pairing(s.boundary, s.omega)), 1e-5 * wmax * area);
  const Real onV = std::abs(pairing(s.boundary, s.omega));
  const Real offV = std::abs(pairing(flower(0.5, 3, 0.05), s.omega));
  EXPECT_GT(offV, 1e3 * onV);
}

TEST(VState, ComplementRelation) {
  const VStateSolution& s = threeFold();
  const PatchPotential p(s.boundary);
  const auto psi = p.streamAtNodes();
  const Real oc = 0.5 - s.omega;
  Real lo = 1e9, hi = -1e9;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const Real r2 = std::norm(s.boundary.nodes()[i]);
    const Real v = (1 - r2) / 4 - psi[i] + oc / 2 * r2;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LT(hi - lo, 1e-8);
}

TEST(VState, WarmStartAndBranch) {
  const VStateSolution& base = threeFold();
  const VStateSolution next = solveVState(3, 0.5, 0.06, {}, &base);
  EXPECT_LT(next.residualMax, 1e-10);
  EXPECT_LT(next.omega, base.omega);
  const Branch br = continueBranch(3, 0.5, {0.02, 0.04});
  ASSERT_EQ(br.points.size(), 2u);
  EXPECT_FALSE(br.truncated);
  EXPECT_GT(br.points[0].solution.omega, br.points[1].solution.omega);
  EXPECT_GT(br.points[1].symDiff, br.points[0].symDiff);
  EXPECT_THROW(continueBranch(3, 0.5, {0.04, 0.02}), Error);
}

TEST(VState, BranchStopsAtFirstFailure) {
  const Branch br = continueBranch(3, 0.5, {0.05, 0.6});
  EXPECT_EQ(br.points.size(), 1u);
  EXPECT_TRUE(br.truncated);
  EXPECT_FALSE(br.message.empty());
}

TEST(VState, InputErrors) {
  expectCode([] { solveVState(1, 0.5, 0.01); }, ErrorCode::InvalidArgument);
  expectCode([] { solveVState(3, 1.2, 0.01); }, ErrorCode::InvalidArgument);
  VStateOptions o;
  o.nodes = 100;
  expectCode([&] { solveVState(3, 0.5, 0.01, o); }, ErrorCode::InvalidResolution);
  o = VStateOptions{};
  o.maxIter = 1;
  expectCode([&] { solveVState(3, 0.5, 0.05, o); }, ErrorCode::NoConvergence);
}
