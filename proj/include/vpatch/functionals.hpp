#pragma once

#include <string>
#include <utility>

#include "vpatch/core.hpp"
#include "vpatch/geometry.hpp"
#include "vpatch/green.hpp"
#include "vpatch/torsion.hpp"

namespace vpatch {

/// Kernel of the image term after differentiation,
/// L(x,y) = (1/2pi) (|x|^2|y|^2 - x.y) / (1 - 2x.y + |x|^2|y|^2).
inline Real kernelL(Complex x, Complex y) {
  const Real xy = std::norm(x) * std::norm(y);
  require(xy < 1.0, ErrorCode::SingularArgument, "kernel L requires |x||y| < 1");
  const Real d = dot(x, y);
  return (xy - d) / (kTwoPi * (1.0 - 2.0 * d + xy));
}

struct KernelBounds {
  Real lower = 0.0;
  Real upper = 0.0;
};

/// Bounds of L on the disc of radius l.
inline KernelBounds kernelBounds(Real l) {
  require(l > 0.0 && l < 1.0, ErrorCode::InvalidArgument, "kernel bounds need 0 < l < 1");
  const Real l2 = l * l;
  return {-l2 / (kTwoPi * (1.0 - l2)), l2 * (1.0 + l2) / (kTwoPi * (1.0 - l2) * (1.0 - l2))};
}

/// Trapezoid value of (1/2pi) int_0^{2pi} (t cos th - t^2)/(1 - 2t cos th + t^2) dth,
/// which vanishes identically for 0 <= t < 1.
inline Real residueIdentity(Real t, int nTheta) {
  require(t >= 0.0 && t < 1.0, ErrorCode::InvalidArgument, "residue identity needs 0 <= t < 1");
  require(nTheta >= 64, ErrorCode::InvalidResolution, "n_theta must be >= 64");
  std::vector<Real> terms(static_cast<std::size_t>(nTheta));
  const Real h = kTwoPi / nTheta;
  for (int j = 0; j < nTheta; ++j) {
    const Real c = std::cos(h * j);
    terms[j] = h * (t * c - t * t) / (kTwoPi * (1.0 - 2.0 * t * c + t * t));
  }
  return pairwiseSum(terms);
}

/// Rigidity thresholds for a patch with maximal radius l:
/// Omega+ = max{1/2, 2l^2/(1-l^2)^2}, Omega- = -2l^2/(1-l^2)^2.
struct Thresholds {
  Real plus = 0.0;
  Real minus = 0.0;
};

inline Real rigidityRatio(Real l) {
  require(l > 0.0 && l < 1.0, ErrorCode::InvalidArgument, "thresholds need 0 < l < 1");
  const Real l2 = l * l;
  return 2.0 * l2 / ((1.0 - l2) * (1.0 - l2));
}

inline Thresholds thresholds(Real l) {
  const Real t = rigidityRatio(l);
  return {std::max(0.5, t), -t};
}

/// Angular velocity of the complementary patch.
inline Real complementOmega(Real omega) { return 0.5 - omega; }

/// Angular velocity of the equivalent unit-strength patch in the unit disc
/// (geometry is rescaled by 1/r by the caller).
inline Real reduceParams(Real lambda, Real r, Real omega) {
  require(lambda != 0.0, ErrorCode::InvalidArgument, "vorticity strength must be nonzero");
  require(r > 0.0, ErrorCode::InvalidArgument, "container radius must be positive");
  return omega / lambda;
}

/// Inverse of reduceParams.
inline Real embedParams(Real lambda, Real r, Real reducedOmega) {
  require(lambda != 0.0, ErrorCode::InvalidArgument, "vorticity strength must be nonzero");
  require(r > 0.0, ErrorCode::InvalidArgument, "container radius must be positive");
  return reducedOmega * lambda;
}

enum class Side { Patch, Complement };

/// Excluded Omega ranges, either for a simply-connected patch or for the
/// complement of one. Complementing maps Omega to 1/2 - Omega, so the band of
/// the complement is the reflection of the patch band; the band is stored by
/// (l, side) so a double complement reproduces the original values bit for bit.
class RigidityBand {
 public:
  RigidityBand(Real l, Side side) : l_(l), side_(side) { rigidityRatio(l); }

  Real maxRadius() const { return l_; }
  Side side() const { return side_; }

  /// Omega <= lower() is excluded.
  Real lower() const {
    const Real t = rigidityRatio(l_);
    return side_ == Side::Patch ? -t : std::min(0.0, 0.5 - t);
  }
  /// Omega >= upper() is excluded.
  Real upper() const {
    const Real t = rigidityRatio(l_);
    return side_ == Side::Patch ? std::max(0.5, t) : 0.5 + t;
  }

  bool excludes(Real omega) const { return omega >= upper() || omega <= lower(); }

  RigidityBand complement() const {
    return RigidityBand(l_, side_ == Side::Patch ? Side::Complement : Side::Patch);
  }

  friend bool operator==(const RigidityBand&, const RigidityBand&) = default;

 private:
  Real l_;
  Side side_;
};

inline Real termK(const PatchSummary& s, Real omega) {
  return omega * (s.secondMoment - s.area * s.area / kTwoPi);
}

inline Real termJ(const TorsionSolution& t, Real omega) { return (2.0 * omega - 1.0) * t.talentiGap(); }

/// Double fan quadrature of L over D x D.
inline Real termL(const PatchBoundary& d, int radialOrder = 8) {
  const AreaQuadrature q = fanQuadrature(d, radialOrder);
  const std::size_t n = q.points.size();
  std::vector<Real> outer(n);
  std::vector<Real> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = std::norm(q.points[i]);
  parallelFor(n, [&](std::size_t i) {
    const Complex x = q.points[i];
    Real acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const Real xy = norms[i] * norms[j];
      const Real d2 = dot(x, q.points[j]);
      acc += q.weights[j] * (xy - d2) / (1.0 - 2.0 * d2 + xy);
    }
    outer[i] = q.weights[i] * acc;
  });
  return pairwiseSum(outer) / kTwoPi;
}

/// L over a union of rings: Gauss in both radii, the angular integral by the
/// trapezoid rule of residueIdentity. Vanishes up to quadrature error.
inline Real termLRadial(const RadialSet& s, int radialOrder = 8, int nTheta = 256) {
  validate(s);
  const GaussRule g = gaussLegendreUnit(radialOrder);
  std::vector<std::pair<Real, Real>> nodes;  // (radius, weight incl. r)
  for (const auto& [rin, rout] : s.rings) {
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      const Real r = rin + (rout - rin) * g.nodes[k];
      nodes.emplace_back(r, (rout - rin) * g.weights[k] * r);
    }
  }
  Real total = 0.0;
  for (const auto& [rx, wx] : nodes) {
    for (const auto& [ry, wy] : nodes) {
      // the two angular integrals of L give -2 pi residueIdentity(rx*ry)
      total += wx * wy * (-kTwoPi * residueIdentity(rx * ry, nTheta));
    }
  }
  return total;
}

/// Lemma-L style bound 2 l^2 / (pi (1 - l^2)^2) |D\B|^2.
inline Real lBound(Real l, Real symDiff) {
  return rigidityRatio(l) / kPi * symDiff * symDiff;
}

enum class Verdict { ExcludedNonradial, Inconclusive, Radial };

inline const char* toString(Verdict v) {
  switch (v) {
    case Verdict::ExcludedNonradial: return "EXCLUDED_NONRADIAL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    case Verdict::Radial: return "RADIAL";
  }
  return "UNKNOWN";
}

inline constexpr Real kRadialTolerance = 1e-9;

struct FunctionalReport {
  Real omega = 0.0;
  Real energy = 0.0;       ///< E_Omega
  Real termJ = 0.0;
  Real termK = 0.0;
  Real termL = 0.0;
  Real firstVariation = 0.0;  ///< I_Omega = J + K + L
  Real torsionMass = 0.0;
  Real talentiGap = 0.0;
  PatchSummary summary;
  Real omegaPlus = 0.0;
  Real omegaMinus = 0.0;
  Real lBound = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

inline Verdict classify(Real symDiff, Real omega, Real plus, Real minus) {
  if (symDiff < kRadialTolerance) return Verdict::Radial;
  if (omega >= plus || omega <= minus) return Verdict::ExcludedNonradial;
  return Verdict::Inconclusive;
}

/// E_Omega(D) = (1/2) int int G + (Omega/2) int |x|^2.
inline Real energyOmega(const PatchPotential& pot, const PatchSummary& s, Real omega) {
  return pot.doubleEnergy() + 0.5 * omega * s.secondMoment;
}

/// First-variation decomposition I = J + K + L with thresholds and verdict.
inline FunctionalReport decompose(const PatchBoundary& d, Real omega, const TorsionSolution& t,
                                  GreenEval eval = {}) {
  FunctionalReport r;
  r.omega = omega;
  r.summary = summarize(d);
  PatchPotential pot(d, eval);
  r.energy = energyOmega(pot, r.summary, omega);
  r.torsionMass = t.mass();
  r.talentiGap = t.talentiGap();
  r.termJ = termJ(t, omega);
  r.termK = termK(r.summary, omega);
  r.termL = termL(d, eval.radialOrder);
  r.firstVariation = r.termJ + r.termK + r.termL;
  const Thresholds th = thresholds(r.summary.maxRadius);
  r.omegaPlus = th.plus;
  r.omegaMinus = th.minus;
  r.lBound = lBound(r.summary.maxRadius, r.summary.symDiff);
  r.verdict = classify(r.summary.symDiff, omega, th.plus, th.minus);
  return r;
}

/// int_D grad(psi + Omega |x|^2/2) . (x + grad p) dx by fan quadrature.
inline Real directFirstVariation(const PatchBoundary& d, Real omega, const TorsionSolution& t,
                                 GreenEval eval = {}) {
  PatchPotential pot(d, eval);
  const AreaQuadrature q = fanQuadrature(d, eval.radialOrder);
  std::vector<Real> terms(q.points.size());
  parallelFor(q.points.size(), [&](std::size_t i) {
    const Complex x = q.points[i];
    const Complex gradPsi = pot.streamGradientInterior(x) + omega * x;
    const Complex w = x + t.gradientUnchecked(x);
    terms[i] = q.weights[i] * dot(gradPsi, w);
  });
  return pairwiseSum(terms);
}

/// Alternative route to L: -int_D x . grad H(x) dx with the image potential
/// gradient taken from the potential evaluator instead of the kernel.
inline Real termLFromImageGradient(const PatchBoundary& d, GreenEval eval = {}) {
  PatchPotential pot(d, eval);
  const AreaQuadrature q = fanQuadrature(d, eval.radialOrder);
  return -q.integrate([&](Complex x) { return dot(x, pot.imageGradient(x)); });
}

/// Boundary advected for time s along w = x + grad p by one classical RK4 step.
inline PatchBoundary advectAlongDeformation(const PatchBoundary& d, const TorsionSolution& t, Real s) {
  std::vector<Complex> pts = d.nodes();
  for (auto& z : pts) {
    const Complex k1 = t.deformationField(z);
    const Complex k2 = t.deformationField(z + 0.5 * s * k1);
    const Complex k3 = t.deformationField(z + 0.5 * s * k2);
    const Complex k4 = t.deformationField(z + s * k3);
    z += s * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  }
  return PatchBoundary::vertices(std::move(pts), d.wallGap(), false);
}

inline Real energyOmega(const PatchBoundary& d, Real omega, GreenEval eval = {}) {
  PatchPotential pot(d, eval);
  return energyOmega(pot, summarize(d), omega);
}

/// Central difference (E(D_s) - E(D_-s)) / 2s along the area-preserving flow.
inline Real flowDerivative(const PatchBoundary& d, Real omega, Real step, const TorsionSolution& t,
                           GreenEval eval = {}) {
  require(step > 0.0 && step <= 1e-2, ErrorCode::InvalidArgument, "flow step must lie in (0, 1e-2]");
  const PatchBoundary plus = advectAlongDeformation(d, t, step);
  const PatchBoundary minus = advectAlongDeformation(d, t, -step);
  return (energyOmega(plus, omega, eval) - energyOmega(minus, omega, eval)) / (2.0 * step);
}

}  // namespace vpatch
