#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vpatch/core.hpp"
#include "vpatch/geometry.hpp"
#include "vpatch/green.hpp"

namespace vpatch {

/// Velocity u = grad^perp psi at every boundary node.
inline std::vector<Complex> boundaryVelocity(const PatchBoundary& d) {
  return PatchPotential(d).velocityAtNodes();
}

struct EvolutionSample {
  Real time = 0.0;
  Real area = 0.0;
  Real secondMoment = 0.0;
  Real energy = 0.0;           ///< (1/2) int int G, i.e. E_Omega at Omega = 0
  Real hausdorffVsRotation = 0.0;
  PatchBoundary boundary;
};

struct EvolveOptions {
  Real dt = 0.0;               ///< 0 selects 1e-2 * b / max|u|
  int sampleEvery = 10;        ///< steps between diagnostics samples
  int reparamEvery = 20;       ///< 0 disables arclength respacing
  Real clusteringLimit = 50.0; ///< max/min node spacing ratio tolerated
  Real referenceOmega = 0.0;   ///< rotation rate for the hausdorff column
  bool recordDiagnostics = true;
};

struct EvolutionState {
  PatchBoundary boundary;
  PatchBoundary initial;
  Real time = 0.0;
  Real dt = 0.0;
  long steps = 0;
  std::vector<EvolutionSample> history;
};

namespace detail {

inline PatchBoundary shifted(const std::vector<Complex>& nodes, const std::vector<Complex>& k, Real scale,
                             Real wallGap) {
  std::vector<Complex> pts(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) pts[i] = nodes[i] + scale * k[i];
  try {
    return PatchBoundary::vertices(std::move(pts), wallGap, false);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::OutsideUnitDisc) throw Error(ErrorCode::BlowupDetected, "node left the unit disc");
    throw;
  }
}

inline Real spacingRatio(const std::vector<Complex>& nodes) {
  Real lo = std::numeric_limits<Real>::max(), hi = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Real d = std::abs(nodes[(i + 1) % nodes.size()] - nodes[i]);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi / lo;
}

}  // namespace detail

inline EvolutionSample sampleDiagnostics(const EvolutionState& s, Real referenceOmega) {
  EvolutionSample out;
  out.time = s.time;
  const PatchSummary sum = summarize(s.boundary);
  out.area = sum.area;
  out.secondMoment = sum.secondMoment;
  out.energy = PatchPotential(s.boundary).doubleEnergy();
  out.hausdorffVsRotation = hausdorff(s.boundary, rotate(s.initial, referenceOmega * s.time));
  out.boundary = s.boundary;
  return out;
}

/// One classical RK4 step of the contour dynamics dx/dt = u(x) on the nodes.
inline EvolutionState step(const EvolutionState& s, const EvolveOptions& opt = {}) {
  require(s.dt != 0.0, ErrorCode::InvalidArgument, "time step must be nonzero");
  const std::vector<Complex>& x0 = s.boundary.nodes();
  const Real gap = s.boundary.wallGap();
  const Real dt = s.dt;
  const std::vector<Complex> k1 = boundaryVelocity(s.boundary);
  const std::vector<Complex> k2 = boundaryVelocity(detail::shifted(x0, k1, 0.5 * dt, gap));
  const std::vector<Complex> k3 = boundaryVelocity(detail::shifted(x0, k2, 0.5 * dt, gap));
  const std::vector<Complex> k4 = boundaryVelocity(detail::shifted(x0, k3, dt, gap));
  std::vector<Complex> incr(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) incr[i] = (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;

  EvolutionState next = s;
  next.boundary = detail::shifted(x0, incr, dt, gap);
  next.time = s.time + dt;
  next.steps = s.steps + 1;

  if (opt.reparamEvery > 0 && next.steps % opt.reparamEvery == 0) {
    const Real ratio = detail::spacingRatio(next.boundary.nodes());
    require(ratio <= opt.clusteringLimit, ErrorCode::ReparamFailure,
            "node spacing ratio " + std::to_string(ratio) + " exceeds limit");
    next.boundary = resample(next.boundary, next.boundary.resolution());
  }
  return next;
}

/// Default step 1e-2 * R / max|u| with R the equal-area radius.
inline Real defaultTimeStep(const PatchBoundary& d) {
  Real umax = 0.0;
  for (Complex u : boundaryVelocity(d)) umax = std::max(umax, std::abs(u));
  return 1e-2 * std::sqrt(summarize(d).area / kPi) / std::max(umax, 1e-12);
}

/// Evolves d0 up to tEnd; the step is shortened uniformly to land on tEnd.
inline EvolutionState run(const PatchBoundary& d0, Real tEnd, const EvolveOptions& opt = {}) {
  require(tEnd >= 0.0, ErrorCode::InvalidArgument, "end time must be nonnegative");
  require(opt.sampleEvery >= 1, ErrorCode::InvalidArgument, "sampleEvery must be >= 1");
  const Real dtTarget = opt.dt > 0.0 ? opt.dt : defaultTimeStep(d0);
  const long n = std::max<long>(1, static_cast<long>(std::ceil(tEnd / dtTarget - 1e-12)));

  EvolutionState s;
  s.boundary = PatchBoundary::vertices(d0.nodes(), d0.wallGap(), false);
  s.initial = s.boundary;
  s.dt = tEnd > 0.0 ? tEnd / static_cast<Real>(n) : dtTarget;
  if (opt.recordDiagnostics) s.history.push_back(sampleDiagnostics(s, opt.referenceOmega));
  if (tEnd == 0.0) return s;
  for (long i = 0; i < n; ++i) {
    s = step(s, opt);
    if (opt.recordDiagnostics && (s.steps % opt.sampleEvery == 0 || i + 1 == n)) {
      s.history.push_back(sampleDiagnostics(s, opt.referenceOmega));
    }
  }
  s.time = tEnd;
  return s;
}

/// Max over samples of the Hausdorff distance between the evolved boundary
/// and the initial boundary rotated by omega * t.
inline Real rigidRotationError(const std::vector<EvolutionSample>& history, Real omega) {
  require(history.size() >= 2, ErrorCode::InvalidArgument, "need at least two samples");
  const PatchBoundary& initial = history.front().boundary;
  Real err = 0.0;
  for (const auto& sample : history) {
    err = std::max(err, hausdorff(sample.boundary, rotate(initial, omega * sample.time)));
  }
  return err;
}

inline void writeDiagnosticsCsv(std::ostream& os, const std::vector<EvolutionSample>& history) {
  os << "t,area,second_moment,energy,hausdorff_vs_rotation\n";
  char buf[160];
  for (const auto& h : history) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", h.time, h.area, h.secondMoment, h.energy,
                  h.hausdorffVsRotation);
    os << buf;
  }
}

}  // namespace vpatch
