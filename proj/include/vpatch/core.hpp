#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace vpatch {

using Real = double;
using Complex = std::complex<double>;

inline constexpr Real kPi = std::numbers::pi;
inline constexpr Real kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorCode {
  InvalidShape,
  OutsideUnitDisc,
  InvalidResolution,
  InvalidArgument,
  SingularArgument,
  SolverFailure,
  OutOfDomain,
  NoConvergence,
  BlowupDetected,
  ReparamFailure,
  ParseError,
  UsageError,
};

inline const char* toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::OutsideUnitDisc: return "OutsideUnitDisc";
    case ErrorCode::InvalidResolution: return "InvalidResolution";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularArgument: return "SingularArgument";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BlowupDetected: return "BlowupDetected";
    case ErrorCode::ReparamFailure: return "ReparamFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(toString(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

inline Real cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline Real dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

inline GaussRule gaussLegendreUnit(int order) {
  require(order >= 1, ErrorCode::InvalidArgument, "Gauss-Legendre order must be positive");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    Real x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    Real dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        Real p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    Real w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1,1] -> [0,1]
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[order - 1 - i] = 0.5 * w;
  }
  return rule;
}

/// Worker count, capped by VPATCH_THREADS when set.
inline unsigned workerCount() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VPATCH_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

/// Runs body(i) for i in [0, n). Each index must write only its own output slot,
/// so results do not depend on the thread count.
inline void parallelFor(std::size_t n, const std::function<void(std::size_t)>& body) {
  unsigned workers = std::min<std::size_t>(workerCount(), n);
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Pairwise summation; fixed reduction tree for run-to-run reproducibility.
inline Real pairwiseSum(const Real* data, std::size_t n) {
  if (n <= 16) {
    Real s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwiseSum(data, half) + pairwiseSum(data + half, n - half);
}

inline Real pairwiseSum(const std::vector<Real>& v) { return pairwiseSum(v.data(), v.size()); }

}  // namespace vpatch
