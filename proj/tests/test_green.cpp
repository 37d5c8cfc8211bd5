#include <gtest/gtest.h>

#include <random>

#include "vpatch/green.hpp"

using namespace vpatch;

namespace {

// polar dblquad of the disc Green function over flower c0=0.5, m=3, a=0.05 (tests/oracles/oracles.py)
constexpr Real kFlowerPsi0 = 0.14895200583592788;
constexpr Real kFlowerPsiAxis = 0.028815814862068634;    // x = (0.8, 0)
constexpr Real kFlowerPsiOffAxis = 0.039018697602063668; // x = (0.2, 0.7)

Real discPsi(Real b, Real r) {
  return r < b ? (b * b - r * r) / 4 - b * b / 2 * std::log(b) : -b * b / 2 * std::log(r);
}

}  // namespace

TEST(GreenKernel, SymmetricAndVanishesOnUnitCircle) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<Real> u(-0.7, 0.7);
  for (int i = 0; i < 200; ++i) {
    const Complex x(u(rng), u(rng)), y(u(rng), u(rng));
    EXPECT_NEAR(greenKernel(x, y), greenKernel(y, x), 1e-14);
    EXPECT_NEAR(imagePart(x, y), imagePart(y, x), 1e-14);
    EXPECT_NEAR(greenKernel(std::polar(1.0, u(rng) * 4), y), 0.0, 1e-14);
  }
  EXPECT_EQ(imagePart(0.0, Complex(0.3, 0.2)), 0.0);
  EXPECT_NEAR(greenKernel(0.0, 0.5), std::log(2.0) / kTwoPi, 1e-15);
}

TEST(GreenKernel, SingularAtCoincidence) {
  try {
    greenKernel(Complex(0.1, 0.2), Complex(0.1, 0.2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularArgument);
  }
}

TEST(GreenKernel, LogSingularRuleMoments) {
  // int ln(4 sin^2(t/2)) cos(k t) dt = -2 pi / k, and 0 for k = 0
  const std::size_t n = 64;
  const auto w = logSingularWeights(n);
  for (int k = 0; k < 20; ++k) {
    Real acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += w[j] * std::cos(k * kTwoPi * j / n);
    EXPECT_NEAR(acc, k == 0 ? 0.0 : -kTwoPi / k, 1e-13) << k;
  }
}

TEST(GreenEvalKnobs, Validation) {
  GreenEval e;
  EXPECT_NO_THROW(e.validate());
  e.radialOrder = 2;
  EXPECT_THROW(e.validate(), Error);
  e = GreenEval{};
  e.nearDistance = 0.5;
  EXPECT_THROW(e.validate(), Error);
}

TEST(StreamFunction, DiscClosedForm) {
  for (Real b : {0.2, 0.5, 0.8}) {
    const PatchPotential p(disc(b));
    for (Real r : {0.0, 0.1, 0.19, 0.3, 0.49, 0.5, 0.51, 0.75, 0.95}) {
      const Complex x = std::polar(r, 0.3 + r);
      EXPECT_NEAR(p.stream(x), discPsi(b, r), 1e-11) << "b=" << b << " r=" << r;
    }
  }
  EXPECT_NEAR(streamFunction(disc(0.5), 0.0), 0.0625 + 0.125 * std::log(2.0), 1e-14);
  EXPECT_NEAR(streamFunction(disc(0.5), 0.75), 0.03596025905647261, 1e-13);
}

TEST(StreamFunction, NearlyFullDisc) {
  std::vector<Complex> pts(256);
  for (std::size_t j = 0; j < pts.size(); ++j) pts[j] = std::polar(1.0 - 2e-6, kTwoPi * j / 256.0);
  EXPECT_NEAR(streamFunction(PatchBoundary::vertices(pts), 0.0), 0.25, 1e-5);
}

TEST(StreamFunction, FlowerMatchesAreaQuadratureOracle) {
  const PatchPotential p(flower(0.5, 3, 0.05));
  EXPECT_NEAR(p.stream(0.0), kFlowerPsi0, 1e-13);
  EXPECT_NEAR(p.stream(Complex(0.8, 0.0)), kFlowerPsiAxis, 1e-13);
  EXPECT_NEAR(p.stream(Complex(0.2, 0.7)), kFlowerPsiOffAxis, 1e-13);
}

TEST(StreamFunction, PoissonEquationByFiniteDifferences) {
  const PatchPotential p(flower(0.5, 3, 0.05));
  const Real h = 1e-3;
  auto lap = [&](Complex x) {
    return (p.stream(x + h) + p.stream(x - h) + p.stream(x + Complex(0, h)) + p.stream(x - Complex(0, h)) -
            4 * p.stream(x)) / (h * h);
  };
  for (Complex x : {Complex(0.1, 0.05), Complex(-0.3, 0.2), Complex(0.0, -0.42)}) EXPECT_NEAR(lap(x), -1.0, 1e-5);
  for (Complex x : {Complex(0.7, 0.1), Complex(-0.2, 0.75)}) EXPECT_NEAR(lap(x), 0.0, 1e-5);
}

TEST(StreamFunction, GradientMatchesFiniteDifferences) {
  const PatchPotential p(ellipse(0.5, 0.3, 256, Complex(0.05, 0.02)));
  const Real h = 1e-5;
  for (Complex x : {Complex(0.1, 0.1), Complex(0.0, 0.28), Complex(0.56, 0.0), Complex(0.3, -0.5)}) {
    const Complex g = p.streamGradient(x);
    const Real gx = (p.stream(x + h) - p.stream(x - h)) / (2 * h);
    const Real gy = (p.stream(x + Complex(0, h)) - p.stream(x - Complex(0, h))) / (2 * h);
    EXPECT_NEAR(g.real(), gx, 1e-8);
    EXPECT_NEAR(g.imag(), gy, 1e-8);
    EXPECT_LT(std::abs(p.velocity(x) - Complex(gy, -gx)), 1e-8);
  }
}

TEST(StreamFunction, DiscVelocityIsSolidBodyInsideAndVortexOutside) {
  const Real b = 0.5;
  const PatchPotential p(disc(b));
  const Complex in(0.2, 0.1), out(0.6, -0.3);
  EXPECT_LT(std::abs(p.velocity(in) - Complex(0, 0.5) * in), 1e-12);
  EXPECT_LT(std::abs(p.velocity(out) - Complex(0, b * b / 2) * out / std::norm(out)), 1e-12);
  for (Complex u : p.velocityAtNodes()) EXPECT_NEAR(std::abs(u), 0.25, 1e-12);
}

TEST(StreamFunction, BoundaryValuesAreContinuous) {
  const PatchBoundary f = flower(0.45, 4, 0.04);
  const PatchPotential p(f);
  const auto psi = p.streamAtNodes();
  const auto grad = p.streamGradientAtNodes();
  for (std::size_t i = 0; i < f.resolution(); i += 17) {
    const Complex z = f.nodes()[i];
    EXPECT_NEAR(psi[i], p.stream(z * (1 - 1e-9)), 1e-9);
    EXPECT_NEAR(psi[i], p.stream(z * (1 + 1e-9)), 1e-9);
    EXPECT_LT(std::abs(grad[i] - p.streamGradient(z * (1 - 1e-7))), 1e-6);
  }
}

TEST(Energy, DiscClosedForm) {
  for (Real b : {0.2, 0.5, 0.8}) {
    const Real b4 = std::pow(b, 4);
    EXPECT_NEAR(doubleEnergy(disc(b)), kPi * b4 / 16 - kPi * b4 / 4 * std::log(b), 1e-14);
  }
  EXPECT_NEAR(doubleEnergy(disc(0.5)), 0.04629662896407891, 1e-15);
}

TEST(Energy, GreenIdentityMatchesAreaIntegral) {
  for (const PatchBoundary& d : {flower(0.5, 3, 0.05), ellipse(0.4, 0.3, 256, Complex(0.1, 0.0))}) {
    const PatchPotential p(d);
    const AreaQuadrature q = fanQuadrature(d, 16);
    const Real direct = 0.5 * q.integrate([&](Complex x) { return p.stream(x); });
    EXPECT_NEAR(p.doubleEnergy(), direct, 1e-9);
  }
}

TEST(Energy, RotationInvariant) {
  const PatchBoundary f = flower(0.5, 3, 0.05);
  EXPECT_NEAR(doubleEnergy(f), doubleEnergy(rotate(f, 1.1)), 1e-14);
}
