#pragma once

#include <Eigen/Dense>
#include <vector>

#include "vpatch/core.hpp"
#include "vpatch/geometry.hpp"
#include "vpatch/green.hpp"

namespace vpatch {

/// Torsion function p: -Lap p = 2 in D, p = 0 on the boundary.
///
/// p = -|x|^2/2 + phi with phi harmonic and phi = |x|^2/2 on the boundary.
/// phi is the double-layer potential of a density mu solved by Nystrom,
/// which equals Re F for the Cauchy integral F of mu; F and F' are carried
/// by their interior boundary traces and evaluated inside by barycentric
/// Cauchy interpolation.
class TorsionSolution {
 public:
  TorsionSolution(const PatchBoundary& patch, GreenEval eval = {}) : patch_(patch), eval_(eval) {
    eval_.validate();
    const CurveSamples& s = patch_.samples();
    const std::size_t n = s.size();
    require(n <= 4096, ErrorCode::InvalidResolution, "dense torsion solve limited to N <= 4096");
    const Real h = s.step();

    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      rhs(i) = 0.5 * std::norm(s.z[i]);
      for (std::size_t j = 0; j < n; ++j) {
        Real k;
        if (i == j) {
          k = cross(s.zt[i], s.ztt[i]) / (2.0 * kTwoPi * std::norm(s.zt[i]));
        } else {
          const Complex diff = s.z[j] - s.z[i];
          k = cross(diff, s.zt[j]) / (kTwoPi * std::norm(diff));
        }
        a(i, j) = h * k + (i == j ? 0.5 : 0.0);
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Real rcond = lu.rcond();
    require(rcond > 1e-12, ErrorCode::SolverFailure, "double-layer system is ill-conditioned");
    const Eigen::VectorXd mu = lu.solve(rhs);

    density_.resize(n);
    std::vector<Complex> f(n);
    for (std::size_t j = 0; j < n; ++j) {
      density_[j] = mu(j);
      f[j] = mu(j);
    }
    densityCurve_ = TrigCurve::interpolate(f);
    fTrace_ = interiorCauchyTrace(s, f, spectralDerivative(f));
    const std::vector<Complex> dtrace = spectralDerivative(fTrace_);
    dTrace_.resize(n);
    for (std::size_t j = 0; j < n; ++j) dTrace_[j] = dtrace[j] / s.zt[j];

    residual_ = 0.0;
    for (std::size_t j = 0; j < n; ++j) residual_ = std::max(residual_, std::abs(fTrace_[j].real() - rhs(j)));

    buildTaylorSeries();

    const AreaQuadrature rule = fanQuadrature(patch_, eval_.radialOrder);
    mass_ = rule.integrate([&](Complex z) { return valueUnchecked(z); });
    area_ = summarize(patch_).area;
  }

  const PatchBoundary& patch() const { return patch_; }
  const std::vector<Real>& density() const { return density_; }

  /// Max-norm mismatch of the harmonic part's boundary condition at the nodes.
  Real residual() const { return residual_; }

  /// int_D p dx.
  Real mass() const { return mass_; }
  /// |D|^2 / (4 pi), the disc value of the mass at equal area.
  Real talentiBound() const { return area_ * area_ / (4.0 * kPi); }
  Real talentiGap() const { return talentiBound() - mass_; }

  /// p(x) for x in D.
  Real value(Complex x) const {
    require(contains(patch_, x), ErrorCode::OutOfDomain, "torsion evaluated outside the patch");
    return valueUnchecked(x);
  }

  /// grad p for x in D at distance > near distance from the boundary.
  Complex gradient(Complex x) const {
    require(contains(patch_, x), ErrorCode::OutOfDomain, "torsion gradient outside the patch");
    Real best = std::numeric_limits<Real>::max();
    for (Complex w : patch_.nodes()) best = std::min(best, std::abs(w - x));
    require(best > eval_.nearDistance, ErrorCode::OutOfDomain, "torsion gradient too close to the boundary");
    return gradientUnchecked(x);
  }

  /// Interior evaluation without domain checks (callers guarantee x in closure of D).
  Real valueUnchecked(Complex x) const {
    return -0.5 * std::norm(x) + barycentricCauchy(patch_.samples(), fTrace_, x).real();
  }

  Complex gradientUnchecked(Complex x) const {
    return -x + std::conj(barycentricCauchy(patch_.samples(), dTrace_, x));
  }

  /// grad p at the boundary nodes.
  std::vector<Complex> gradientAtNodes() const {
    std::vector<Complex> g(dTrace_.size());
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = -patch_.nodes()[j] + std::conj(dTrace_[j]);
    return g;
  }

  /// p at an arbitrary boundary parameter t (off the collocation grid).
  Real boundaryTrace(Real t) const {
    const CurveSamples& s = patch_.samples();
    const Real h = s.step();
    const Real mu0 = densityCurve_(t).real();
    const Complex z0 = patch_.curve()(t);
    Complex acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const Complex diff = s.z[j] - z0;
      if (std::abs(diff) < 1e-14) continue;
      acc += h * (density_[j] - mu0) * s.zt[j] / diff;
    }
    const Complex trace = mu0 + acc / Complex(0.0, kTwoPi);
    return -0.5 * std::norm(z0) + trace.real();
  }

  /// grad phi = grad p + x near the boundary, continued a short distance
  /// outside D by a Taylor expansion of the analytic F' about the closest
  /// boundary point. Used by the area-preserving flow.
  Complex deformationField(Complex x) const {
    if (contains(patch_, x)) {
      const Real dist = nearestNodeDistance(x);
      if (dist > 0.5 * patch_.samples().step()) return std::conj(barycentricCauchy(patch_.samples(), dTrace_, x));
    }
    return std::conj(taylorDerivative(x));
  }

 private:
  Real nearestNodeDistance(Complex x) const {
    Real best = std::numeric_limits<Real>::max();
    for (Complex w : patch_.nodes()) best = std::min(best, std::abs(w - x));
    return best;
  }

  Complex taylorDerivative(Complex x) const {
    const CurveSamples& s = patch_.samples();
    std::size_t best = 0;
    Real bestD = std::numeric_limits<Real>::max();
    for (std::size_t j = 0; j < s.size(); ++j) {
      const Real dd = std::norm(s.z[j] - x);
      if (dd < bestD) { bestD = dd; best = j; }
    }
    Real t = s.step() * static_cast<Real>(best);
    for (int iter = 0; iter < 30; ++iter) {
      Complex w, wt, wtt;
      patch_.curve().evaluate(t, w, wt, wtt);
      const Real g = dot(w - x, wt);
      const Real dg = std::norm(wt) + dot(w - x, wtt);
      if (dg <= 0.0) break;
      t -= g / dg;
      if (std::abs(g / dg) < 1e-15) break;
    }
    const Complex delta = x - patch_.curve()(t);
    Complex acc = 0.0;
    Complex power = 1.0;
    Real factorial = 1.0;
    for (std::size_t k = 0; k < derivativeSeries_.size(); ++k) {
      if (k > 0) {
        power *= delta;
        factorial *= static_cast<Real>(k);
      }
      acc += derivativeSeries_[k](t) * power / factorial;
    }
    return acc;
  }

  void buildTaylorSeries() {
    const CurveSamples& s = patch_.samples();
    const std::size_t n = s.size();
    std::vector<Complex> level = dTrace_;
    for (int k = 0; k < kTaylorOrder; ++k) {
      derivativeSeries_.push_back(TrigCurve::interpolate(level));
      const std::vector<Complex> dt = spectralDerivative(level);
      for (std::size_t j = 0; j < n; ++j) level[j] = dt[j] / s.zt[j];
    }
  }

  static constexpr int kTaylorOrder = 5;

  PatchBoundary patch_;
  GreenEval eval_;
  std::vector<Real> density_;
  TrigCurve densityCurve_;
  std::vector<Complex> fTrace_;
  std::vector<Complex> dTrace_;
  std::vector<TrigCurve> derivativeSeries_;
  Real residual_ = 0.0;
  Real mass_ = 0.0;
  Real area_ = 0.0;
};

inline TorsionSolution solveTorsion(const PatchBoundary& d, GreenEval eval = {}) {
  return TorsionSolution(d, eval);
}

inline Real torsionMass(const TorsionSolution& t) { return t.mass(); }
inline Real talentiGap(const TorsionSolution& t) { return t.talentiGap(); }
inline Complex torsionGradientAt(const TorsionSolution& t, Complex x) { return t.gradient(x); }

}  // namespace vpatch
