#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "vpatch/core.hpp"
#include "vpatch/geometry.hpp"
#include "vpatch/green.hpp"

namespace vpatch {

/// Angular velocity at which the m-fold branch leaves the disc of radius b.
inline Real bifurcationOmega(int m, Real b) {
  require(m >= 1, ErrorCode::InvalidArgument, "fold m must be >= 1");
  require(b > 0.0 && b < 1.0, ErrorCode::InvalidArgument, "base radius must lie in (0, 1)");
  return (static_cast<Real>(m) - 1.0 + std::pow(b, 2 * m)) / (2.0 * m);
}

struct BoundaryResidual {
  Real mu = 0.0;           ///< node mean of psi + Omega |x|^2 / 2
  Real residualMax = 0.0;  ///< max_i |psi_Omega(x_i) - mu|
  std::vector<Real> perNode;
};

/// Deviation of the relative stream function from a constant on the boundary.
inline BoundaryResidual boundaryResidual(const PatchPotential& pot, Real omega) {
  const std::vector<Real> psi = pot.streamAtNodes();
  const auto& nodes = pot.patch().nodes();
  BoundaryResidual r;
  r.perNode.resize(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) r.perNode[i] = psi[i] + 0.5 * omega * std::norm(nodes[i]);
  r.mu = pairwiseSum(r.perNode) / static_cast<Real>(psi.size());
  for (auto& v : r.perNode) {
    v -= r.mu;
    r.residualMax = std::max(r.residualMax, std::abs(v));
  }
  return r;
}

inline BoundaryResidual boundaryResidual(const PatchBoundary& d, Real omega) {
  return boundaryResidual(PatchPotential(d), omega);
}

struct VStateSolution {
  PatchBoundary boundary;
  Real omega = 0.0;
  Real mu = 0.0;
  Real residualMax = 0.0;
  int fold = 0;
  Real baseRadius = 0.0;
  Real amplitude = 0.0;
  int iterations = 0;
};

struct VStateOptions {
  std::size_t nodes = 256;
  int maxIter = 40;
  Real tol = 1e-10;
  /// Highest retained harmonic of r(theta); 0 selects N/2 - 8.
  int maxHarmonic = 0;
};

namespace detail {

/// m-fold cosine patch with area pi b^2: c0 follows from the harmonics.
inline PatchBoundary foldedPatch(int m, Real b, Real amplitude, const std::vector<Real>& higher,
                                 std::size_t n) {
  Real sumSq = amplitude * amplitude;
  for (Real v : higher) sumSq += v * v;
  const Real c0sq = b * b - 0.5 * sumSq;
  require(c0sq > 0.0, ErrorCode::InvalidShape, "harmonics too large for the prescribed area");
  std::vector<Real> a(static_cast<std::size_t>(m) * (higher.size() + 1), 0.0);
  a[m - 1] = amplitude;
  for (std::size_t k = 0; k < higher.size(); ++k) a[m * (k + 2) - 1] = higher[k];
  return PatchBoundary::fourier(std::sqrt(c0sq), std::move(a), {}, n);
}


inline std::string formatResidual(Real r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

}  // namespace detail

/// Newton (Gauss-Newton least squares) solve for an m-fold V-state near the
/// disc of radius b. The amplitude of cos(m theta) is pinned; unknowns are the
/// higher harmonics a_{mk}, k >= 2, and Omega. The residual is psi_Omega at the
/// nodes minus its mean; the Jacobian is taken by forward differences.
inline VStateSolution solveVState(int m, Real b, Real amplitude, const VStateOptions& opt = {},
                                  const VStateSolution* warmStart = nullptr) {
  require(m >= 2, ErrorCode::InvalidArgument, "fold m must be >= 2");
  require(b > 0.0 && b < 1.0, ErrorCode::InvalidArgument, "base radius must lie in (0, 1)");
  require(opt.nodes >= 128 && opt.nodes % 2 == 0, ErrorCode::InvalidResolution, "N must be even and >= 128");
  const int maxHarmonic = opt.maxHarmonic > 0 ? opt.maxHarmonic : static_cast<int>(opt.nodes / 2) - 8;
  const int extra = std::max(0, maxHarmonic / m - 1);

  std::vector<Real> higher(static_cast<std::size_t>(extra), 0.0);
  Real omega = bifurcationOmega(m, b);
  if (warmStart != nullptr && warmStart->fold == m) {
    omega = warmStart->omega;
    const auto& a = warmStart->boundary.cosCoeffs();
    for (int k = 0; k < extra; ++k) {
      const std::size_t idx = static_cast<std::size_t>(m) * (k + 2) - 1;
      if (idx < a.size()) higher[k] = a[idx];
    }
  }

  const std::size_t unknowns = higher.size() + 1;
  auto evaluate = [&](const std::vector<Real>& h, Real om, BoundaryResidual& out) {
    const PatchBoundary patch = detail::foldedPatch(m, b, amplitude, h, opt.nodes);
    out = boundaryResidual(PatchPotential(patch), om);
    return patch;
  };

  BoundaryResidual res;
  PatchBoundary patch = evaluate(higher, omega, res);
  int iter = 0;
  std::vector<Real> history{res.residualMax};
  while (res.residualMax >= opt.tol) {
    // give up when five iterations have not halved the residual
    const bool stalled = history.size() > 5 && res.residualMax > 0.5 * history[history.size() - 6];
    if (iter >= opt.maxIter || stalled) {
      throw Error(ErrorCode::NoConvergence,
                  "V-state Newton stalled at residual " + detail::formatResidual(res.residualMax));
    }
    ++iter;
    const std::size_t rows = res.perNode.size();
    Eigen::MatrixXd jac(rows, unknowns);
    Eigen::VectorXd rhs(rows);
    for (std::size_t i = 0; i < rows; ++i) rhs(i) = -res.perNode[i];

    // Omega enters linearly: d r_i / d Omega = |x_i|^2/2 minus its mean.
    {
      Real mean = 0.0;
      for (Complex z : patch.nodes()) mean += 0.5 * std::norm(z);
      mean /= static_cast<Real>(rows);
      for (std::size_t i = 0; i < rows; ++i) jac(i, unknowns - 1) = 0.5 * std::norm(patch.nodes()[i]) - mean;
    }
    std::vector<Eigen::VectorXd> columns(higher.size());
    parallelFor(higher.size(), [&](std::size_t k) {
      std::vector<Real> hp = higher;
      const Real step = 1e-7 * (1.0 + std::abs(hp[k]));
      hp[k] += step;
      BoundaryResidual rp;
      evaluate(hp, omega, rp);
      columns[k].resize(static_cast<Eigen::Index>(rows));
      for (std::size_t i = 0; i < rows; ++i) columns[k](i) = (rp.perNode[i] - res.perNode[i]) / step;
    });
    for (std::size_t k = 0; k < higher.size(); ++k) jac.col(static_cast<Eigen::Index>(k)) = columns[k];

    const Eigen::VectorXd delta = jac.colPivHouseholderQr().solve(rhs);

    Real damping = 1.0;
    bool accepted = false;
    for (int tries = 0; tries < 8; ++tries) {
      std::vector<Real> trial = higher;
      for (std::size_t k = 0; k < higher.size(); ++k) trial[k] += damping * delta(static_cast<Eigen::Index>(k));
      const Real trialOmega = omega + damping * delta(static_cast<Eigen::Index>(unknowns - 1));
      try {
        BoundaryResidual trialRes;
        PatchBoundary trialPatch = evaluate(trial, trialOmega, trialRes);
        if (trialRes.residualMax < res.residualMax || tries == 7) {
          higher = std::move(trial);
          omega = trialOmega;
          res = std::move(trialRes);
          patch = std::move(trialPatch);
          accepted = true;
          break;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidShape && e.code() != ErrorCode::OutsideUnitDisc) throw;
      }
      damping *= 0.5;
    }
    require(accepted, ErrorCode::InvalidShape, "Newton update left the admissible shapes");
    history.push_back(res.residualMax);
  }

  VStateSolution sol;
  sol.boundary = std::move(patch);
  sol.omega = omega;
  sol.mu = res.mu;
  sol.residualMax = res.residualMax;
  sol.fold = m;
  sol.baseRadius = b;
  sol.amplitude = amplitude;
  sol.iterations = iter;
  return sol;
}

struct BranchPoint {
  VStateSolution solution;
  Real maxRadius = 0.0;
  Real symDiff = 0.0;
};

struct Branch {
  std::vector<BranchPoint> points;
  bool truncated = false;
  std::string message;
};

/// Solves along increasing amplitudes, warm-starting each solve from the
/// previous point. The first failure ends the branch.
inline Branch continueBranch(int m, Real b, const std::vector<Real>& amplitudes,
                             const VStateOptions& opt = {}) {
  for (std::size_t i = 1; i < amplitudes.size(); ++i) {
    require(amplitudes[i] > amplitudes[i - 1], ErrorCode::InvalidArgument, "amplitudes must increase");
  }
  Branch branch;
  for (Real amp : amplitudes) {
    try {
      const VStateSolution* warm = branch.points.empty() ? nullptr : &branch.points.back().solution;
      VStateSolution sol = solveVState(m, b, amp, opt, warm);
      const PatchSummary s = summarize(sol.boundary);
      branch.points.push_back({std::move(sol), s.maxRadius, s.symDiff});
    } catch (const Error& e) {
      branch.truncated = true;
      branch.message = e.what();
      break;
    }
  }
  return branch;
}

}  // namespace vpatch
