#pragma once

#include <sstream>
#include <string>

#include "vpatch/core.hpp"
#include "vpatch/functionals.hpp"
#include "vpatch/geometry.hpp"
#include "vpatch/io.hpp"
#include "vpatch/torsion.hpp"
#include "vpatch/vstate.hpp"

namespace vpatch {

enum class Corollary { None, ScaledDiscR, Complement };

inline const char* toString(Corollary c) {
  switch (c) {
    case Corollary::None: return "NONE";
    case Corollary::ScaledDiscR: return "SCALED_DISC_R";
    case Corollary::Complement: return "COMPLEMENT";
  }
  return "UNKNOWN";
}

/// Max l is inflated by this factor before thresholds are evaluated so that
/// rounding cannot push a borderline case into exclusion.
inline constexpr Real kRadiusInflation = 1e-10;
/// Boundary residual below which the patch is reported as a V-state.
inline constexpr Real kVStateTolerance = 1e-8;

struct CertifyOptions {
  GreenEval eval;
  std::size_t nodes = 256;  ///< sampling for Fourier specs
};

struct Certificate {
  // inputs as given
  Real omega = 0.0;
  Real lambda = 1.0;
  Real radius = 1.0;
  Corollary corollary = Corollary::None;

  // unit problem actually examined (for the complement: the inner patch at 1/2 - Omega)
  Real reducedOmega = 0.0;
  Real inflatedRadius = 0.0;
  RigidityBand band{0.5, Side::Patch};
  FunctionalReport report;
  BoundaryResidual residual;
  bool numericalVState = false;

  Real jPlusK = 0.0;
  Real proofMargin = 0.0;  ///< |J + K| - LBound; positive means the identity I = 0 is violated
  Verdict verdict = Verdict::Inconclusive;
  std::string verdictText;
};

namespace detail {

inline std::string verdictText(const Certificate& c) {
  std::ostringstream os;
  os.precision(6);
  const bool comp = c.corollary == Corollary::Complement;
  switch (c.verdict) {
    case Verdict::Radial:
      os << (comp ? "inner region is a centered disc up to tolerance; the complement is an annulus"
                  : "patch is a centered disc up to tolerance");
      break;
    case Verdict::ExcludedNonradial:
      os << "omega " << c.omega << " is outside (" << c.band.lower() << ", " << c.band.upper()
         << "); a non-radial rotating patch with this omega cannot exist";
      if (comp) os << " (complement)";
      break;
    case Verdict::Inconclusive:
      os << "omega " << c.omega << " is inside (" << c.band.lower() << ", " << c.band.upper()
         << "); rigidity does not decide";
      break;
  }
  if (!c.numericalVState) os << "; boundary residual " << c.residual.residualMax << " says this is not a V-state";
  return os.str();
}

inline Certificate certifyUnit(const PatchBoundary& d, Real omegaForPatch, Side side, Real bandOmega,
                               const CertifyOptions& opt) {
  Certificate c;
  c.reducedOmega = bandOmega;
  const TorsionSolution t(d, opt.eval);
  c.report = decompose(d, omegaForPatch, t, opt.eval);
  c.residual = boundaryResidual(d, omegaForPatch);
  c.numericalVState = c.residual.residualMax < kVStateTolerance;
  c.inflatedRadius = std::min(c.report.summary.maxRadius * (1.0 + kRadiusInflation), std::nextafter(1.0, 0.0));
  c.band = RigidityBand(c.inflatedRadius, side);
  c.jPlusK = c.report.termJ + c.report.termK;
  c.proofMargin = std::abs(c.jPlusK) - c.report.lBound;
  if (c.report.summary.symDiff < kRadialTolerance) {
    c.verdict = Verdict::Radial;
  } else {
    c.verdict = c.band.excludes(bandOmega) ? Verdict::ExcludedNonradial : Verdict::Inconclusive;
  }
  c.report.verdict = c.verdict;
  return c;
}

}  // namespace detail

/// Patch given in D_r with vorticity lambda; reduced to the unit problem first.
inline Certificate certifyPatch(const PatchSpec& spec, Real omega, Real lambda = 1.0, Real radius = 1.0,
                                const CertifyOptions& opt = {}) {
  require(lambda != 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be nonzero");
  require(radius > 0.0 && std::isfinite(radius), ErrorCode::InvalidArgument, "radius must be positive");
  require(std::isfinite(omega), ErrorCode::InvalidArgument, "omega must be finite");
  const Real reduced = reduceParams(lambda, radius, omega);
  const PatchBoundary d = toPatch(spec, 1.0 / radius, opt.nodes);
  Certificate c = detail::certifyUnit(d, reduced, Side::Patch, reduced, opt);
  c.omega = omega;
  c.lambda = lambda;
  c.radius = radius;
  c.corollary = (lambda == 1.0 && radius == 1.0) ? Corollary::None : Corollary::ScaledDiscR;
  c.verdictText = detail::verdictText(c);
  return c;
}

inline Certificate certifyPatch(const PatchBoundary& d, Real omega, Real lambda = 1.0, Real radius = 1.0,
                                const CertifyOptions& opt = {}) {
  if (lambda == 1.0 && radius == 1.0) {
    require(std::isfinite(omega), ErrorCode::InvalidArgument, "omega must be finite");
    Certificate c = detail::certifyUnit(d, omega, Side::Patch, omega, opt);
    c.omega = omega;
    c.verdictText = detail::verdictText(c);
    return c;
  }
  CertifyOptions o = opt;
  o.nodes = d.resolution();
  return certifyPatch(toSpec(d), omega, lambda, radius, o);
}

/// Rotating patch occupying the unit disc minus the closure of d. It rotates
/// at omega exactly when d itself satisfies the V-state relation at 1/2 - omega.
inline Certificate certifyComplement(const PatchBoundary& d, Real omega, const CertifyOptions& opt = {}) {
  require(std::isfinite(omega), ErrorCode::InvalidArgument, "omega must be finite");
  Certificate c = detail::certifyUnit(d, complementOmega(omega), Side::Complement, omega, opt);
  c.omega = omega;
  c.corollary = Corollary::Complement;
  c.verdictText = detail::verdictText(c);
  return c;
}

/// key=value lines for every report field.
inline void writeReportFields(std::ostream& os, const FunctionalReport& r) {
  const PatchSummary& s = r.summary;
  auto kv = [&](const char* key, Real v) { os << key << "=" << formatReal(v) << "\n"; };
  kv("omega", r.omega);
  kv("energy", r.energy);
  kv("term_j", r.termJ);
  kv("term_k", r.termK);
  kv("term_l", r.termL);
  kv("first_variation", r.firstVariation);
  kv("torsion_mass", r.torsionMass);
  kv("talenti_gap", r.talentiGap);
  kv("area", s.area);
  kv("max_radius", s.maxRadius);
  kv("second_moment", s.secondMoment);
  kv("equal_area_radius", s.equalAreaRadius);
  kv("sym_diff", s.symDiff);
  kv("omega_plus", r.omegaPlus);
  kv("omega_minus", r.omegaMinus);
  kv("l_bound", r.lBound);
  os << "verdict=" << toString(r.verdict) << "\n";
}

/// CSV block "term,value" for J, K, L, I, LBound, OmegaPlus, OmegaMinus.
inline void writeTermCsv(std::ostream& os, const FunctionalReport& r) {
  os << "term,value\n";
  os << "J," << formatReal(r.termJ) << "\n";
  os << "K," << formatReal(r.termK) << "\n";
  os << "L," << formatReal(r.termL) << "\n";
  os << "I," << formatReal(r.firstVariation) << "\n";
  os << "LBound," << formatReal(r.lBound) << "\n";
  os << "OmegaPlus," << formatReal(r.omegaPlus) << "\n";
  os << "OmegaMinus," << formatReal(r.omegaMinus) << "\n";
}

inline std::string formatCertificate(const Certificate& c) {
  std::ostringstream os;
  auto kv = [&](const char* key, Real v) { os << key << "=" << formatReal(v) << "\n"; };
  os << "VERDICT " << toString(c.verdict) << "\n";
  os << "corollary=" << toString(c.corollary) << "\n";
  kv("input_omega", c.omega);
  kv("input_lambda", c.lambda);
  kv("input_radius", c.radius);
  kv("reduced_omega", c.reducedOmega);
  writeReportFields(os, c.report);
  kv("inflated_radius", c.inflatedRadius);
  kv("band_lower", c.band.lower());
  kv("band_upper", c.band.upper());
  kv("j_plus_k", c.jPlusK);
  kv("proof_margin", c.proofMargin);
  kv("residual_max", c.residual.residualMax);
  kv("residual_mu", c.residual.mu);
  os << "numerical_vstate=" << (c.numericalVState ? "yes" : "no") << "\n";
  os << "assumption=boundary is C1 (not checked from samples)\n";
  os << "verdict_text=" << c.verdictText << "\n";
  os << "\n";
  writeTermCsv(os, c.report);
  return os.str();
}

}  // namespace vpatch
