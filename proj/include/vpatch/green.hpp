#pragma once

#include <array>
#include <mutex>
#include <vector>

#include "vpatch/core.hpp"
#include "vpatch/geometry.hpp"

namespace vpatch {

/// Quadrature knobs for potential evaluation.
struct GreenEval {
  int radialOrder = 8;        ///< Gauss nodes per fan triangle
  Real nearDistance = 0.02;   ///< evaluations closer than this to the boundary count as near

  void validate() const {
    require(radialOrder >= 4, ErrorCode::InvalidArgument, "N_r must be >= 4");
    require(nearDistance > 0.0 && nearDistance < 0.1, ErrorCode::InvalidArgument,
            "near distance must lie in (0, 0.1)");
  }
};

/// Image part h(x,y) = -(1/2 pi) ln| x/|x| - |x| y |, written through
/// 1 - 2 x.y + |x|^2 |y|^2 so that x = 0 needs no special case.
inline Real imagePart(Complex x, Complex y) {
  const Real q = 1.0 - 2.0 * dot(x, y) + std::norm(x) * std::norm(y);
  return -std::log(q) / (4.0 * kPi);
}

/// Green function of the unit disc with zero Dirichlet data.
inline Real greenKernel(Complex x, Complex y) {
  require(x != y, ErrorCode::SingularArgument, "Green kernel is singular at x = y");
  return -std::log(std::abs(x - y)) / kTwoPi - imagePart(x, y);
}

/// Weights R_j of the periodic log-singular rule
///   int_0^{2pi} ln(4 sin^2((t_i - tau)/2)) g(tau) dtau ~ sum_j R_{(i-j) mod N} g(t_j).
inline std::vector<Real> logSingularWeights(std::size_t n) {
  const std::size_t half = n / 2;
  std::vector<Real> w(n);
  for (std::size_t d = 0; d < n; ++d) {
    const Real delta = kTwoPi * static_cast<Real>(d) / static_cast<Real>(n);
    Real acc = 0.0;
    for (std::size_t m = 1; m < half; ++m) acc += std::cos(static_cast<Real>(m) * delta) / static_cast<Real>(m);
    const Real hn = static_cast<Real>(half);
    w[d] = -(kTwoPi / hn) * acc - (kPi / (hn * hn)) * std::cos(hn * delta);
  }
  return w;
}

/// Interior boundary values of the Cauchy integral (1/2 pi i) oint f/(zeta - z) dzeta
/// at the nodes, given f and df/dt at the nodes.
inline std::vector<Complex> interiorCauchyTrace(const CurveSamples& s, const std::vector<Complex>& f,
                                                const std::vector<Complex>& ft) {
  const std::size_t n = s.size();
  const Real h = s.step();
  const Complex inv2pii = 1.0 / Complex(0.0, kTwoPi);
  std::vector<Complex> out(n);
  parallelFor(n, [&](std::size_t i) {
    Complex acc = h * ft[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      acc += h * (f[j] - f[i]) * s.zt[j] / (s.z[j] - s.z[i]);
    }
    out[i] = f[i] + inv2pii * acc;
  });
  return out;
}

/// Barycentric Cauchy interpolation of an analytic function from its
/// boundary trace; accurate up to the boundary for interior points.
inline Complex barycentricCauchy(const CurveSamples& s, const std::vector<Complex>& trace, Complex z) {
  Complex num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const Complex diff = s.z[j] - z;
    if (diff == Complex(0.0)) return trace[j];
    const Complex w = s.zt[j] / diff;
    num += w * trace[j];
    den += w;
  }
  return num / den;
}

/// Spectral d/dt of periodic samples.
inline std::vector<Complex> spectralDerivative(const std::vector<Complex>& f) {
  return TrigCurve::interpolate(f).sample(f.size()).zt;
}

/// Stream function psi = G I_D of a patch and its derivatives.
///
/// psi = -(1/2pi) Phi(x) - H(x), where Phi(z) = int_D ln|y - z| dy is the
/// Newtonian part and H(x) = int_D h(x,y) dy the image part. Phi is evaluated
/// by the boundary formula oint (y-z).nu (2 ln|y-z| - 1)/4, its gradient through
/// the Cauchy-Pompeiu representation pi (z - conj C(z)), C = Cauchy integral of
/// conj(zeta). For |x| >= 1/4 the image part is reduced to Phi at the inverse
/// point x/|x|^2; closer to the origin it is integrated over the fan.
class PatchPotential {
 public:
  explicit PatchPotential(const PatchBoundary& patch, GreenEval eval = {})
      : patch_(patch), eval_(eval) {
    eval_.validate();
    const CurveSamples& s = patch_.samples();
    const std::size_t n = s.size();
    area_ = 0.0;
    for (std::size_t j = 0; j < n; ++j) area_ += 0.5 * s.step() * cross(s.z[j], s.zt[j]);
    Real maxSpeed = 0.0;
    for (Complex zt : s.zt) maxSpeed = std::max(maxSpeed, std::abs(zt));
    nodeSpacing_ = maxSpeed * s.step();

    std::vector<Complex> f(n), ft(n);
    for (std::size_t j = 0; j < n; ++j) {
      f[j] = std::conj(s.z[j]);
      ft[j] = std::conj(s.zt[j]);
    }
    conjTrace_ = interiorCauchyTrace(s, f, ft);
    imageRule_ = fanQuadrature(patch_, std::max(eval_.radialOrder, 12));
  }

  const PatchBoundary& patch() const { return patch_; }
  const GreenEval& eval() const { return eval_; }
  Real area() const { return area_; }

  /// Distance from z to the nearest boundary node (cheap proxy for distance to the curve).
  Real nodeDistance(Complex z) const {
    Real best = std::numeric_limits<Real>::max();
    for (Complex w : patch_.nodes()) best = std::min(best, std::norm(w - z));
    return std::sqrt(best);
  }

  bool contains(Complex z) const { return vpatch::contains(patch_, z); }

  /// Newtonian potential Phi(z) = int_D ln|y - z| dy at an arbitrary point.
  Real newtonPotential(Complex z) const {
    const CurveSamples& s = levelFor(z);
    const Real h = s.step();
    Real acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const Complex diff = s.z[j] - z;
      const Real r2 = std::norm(diff);
      if (r2 == 0.0) continue;
      acc += h * 0.25 * cross(diff, s.zt[j]) * (std::log(r2) - 1.0);
    }
    return acc;
  }

  /// Gradient of Phi as a complex number Phi_x + i Phi_y.
  Complex newtonGradient(Complex z) const {
    if (contains(z)) {
      const Complex c = barycentricCauchy(patch_.samples(), conjTrace_, z);
      return kPi * (z - std::conj(c));
    }
    const CurveSamples& s = levelFor(z);
    const Real h = s.step();
    Complex acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) acc += h * std::conj(s.z[j]) * s.zt[j] / (s.z[j] - z);
    const Complex c = acc / Complex(0.0, kTwoPi);
    return -kPi * std::conj(c);
  }

  /// grad psi for a point known to lie in the closure of D.
  Complex streamGradientInterior(Complex x) const {
    const Complex c = barycentricCauchy(patch_.samples(), conjTrace_, x);
    return -kPi * (x - std::conj(c)) / kTwoPi - imageGradient(x);
  }

  /// Image potential H(x) = int_D h(x,y) dy.
  Real imagePotential(Complex x) const {
    const Real r = std::abs(x);
    if (r < kImageSwitch) {
      return imageRule_.integrate([&](Complex y) { return imagePart(x, y); });
    }
    const Complex xs = x / (r * r);
    return -(area_ * std::log(r) + newtonPotential(xs)) / kTwoPi;
  }

  Complex imageGradient(Complex x) const {
    const Real r = std::abs(x);
    if (r < kImageSwitch) {
      Real gx = 0.0, gy = 0.0;
      for (std::size_t i = 0; i < imageRule_.points.size(); ++i) {
        const Complex y = imageRule_.points[i];
        const Real q = 1.0 - 2.0 * dot(x, y) + std::norm(x) * std::norm(y);
        const Complex grad = (2.0 * std::norm(y) * x - 2.0 * y) / q;
        gx += imageRule_.weights[i] * grad.real();
        gy += imageRule_.weights[i] * grad.imag();
      }
      return -Complex(gx, gy) / (4.0 * kPi);
    }
    const Complex xs = x / (r * r);
    const Complex v = newtonGradient(xs);
    const Complex unit = x / r;
    const Complex reflected = -unit * unit * std::conj(v);
    return -(area_ * x / (r * r) + reflected / (r * r)) / kTwoPi;
  }

  /// psi(x) = int_D G(x,y) dy.
  Real stream(Complex x) const { return -newtonPotential(x) / kTwoPi - imagePotential(x); }

  /// grad psi as psi_x + i psi_y.
  Complex streamGradient(Complex x) const { return -newtonGradient(x) / kTwoPi - imageGradient(x); }

  /// u = grad^perp psi = (psi_y, -psi_x).
  Complex velocity(Complex x) const { return Complex(0.0, -1.0) * streamGradient(x); }

  /// psi at the boundary nodes, with the log singularity integrated exactly.
  std::vector<Real> streamAtNodes() const {
    const CurveSamples& s = patch_.samples();
    const std::size_t n = s.size();
    const Real h = s.step();
    const std::vector<Real> weights = logSingularWeights(n);
    std::vector<Real> out(n);
    parallelFor(n, [&](std::size_t i) {
      Real acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const Complex diff = s.z[j] - s.z[i];
        const Real a = 0.25 * cross(diff, s.zt[j]);
        const Real kress = weights[(i + n - j) % n];
        acc += kress * a;
        if (j == i) continue;
        const Real sinHalf = std::sin(0.5 * h * (static_cast<Real>(j) - static_cast<Real>(i)));
        acc += h * a * (std::log(std::norm(diff) / (4.0 * sinHalf * sinHalf)) - 1.0);
      }
      out[i] = -acc / kTwoPi - imagePotential(s.z[i]);
    });
    return out;
  }

  /// grad psi at the boundary nodes (interior limit; grad psi is continuous).
  std::vector<Complex> streamGradientAtNodes() const {
    const CurveSamples& s = patch_.samples();
    std::vector<Complex> out(s.size());
    parallelFor(s.size(), [&](std::size_t i) {
      const Complex newton = kPi * (s.z[i] - std::conj(conjTrace_[i]));
      out[i] = -newton / kTwoPi - imageGradient(s.z[i]);
    });
    return out;
  }

  std::vector<Complex> velocityAtNodes() const {
    std::vector<Complex> g = streamGradientAtNodes();
    for (auto& v : g) v *= Complex(0.0, -1.0);
    return g;
  }

  /// (1/2) int_D int_D G(x,y) dx dy, through Green's identity with q = -|x|^2/4:
  /// int_D psi = -(1/4) int_D |x|^2 + oint (psi x.nu/2 - |x|^2/4 d psi/d nu).
  Real doubleEnergy() const {
    const CurveSamples& s = patch_.samples();
    const std::vector<Real> psi = streamAtNodes();
    const std::vector<Complex> grad = streamGradientAtNodes();
    const Real h = s.step();
    std::vector<Real> terms(s.size());
    Real moment = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const Real xnu = cross(s.z[j], s.zt[j]);
      const Complex nuScaled = Complex(0.0, -1.0) * s.zt[j];
      moment += 0.25 * h * std::norm(s.z[j]) * xnu;
      terms[j] = h * (0.5 * psi[j] * xnu - 0.25 * std::norm(s.z[j]) * dot(grad[j], nuScaled));
    }
    return 0.5 * (-0.25 * moment + pairwiseSum(terms));
  }

 private:
  static constexpr Real kImageSwitch = 0.25;

  const CurveSamples& levelFor(Complex z) const {
    const Real d = nodeDistance(z);
    if (d >= 4.0 * nodeSpacing_) return patch_.samples();
    std::call_once(levelsOnce_, [this] {
      levels_[0] = patch_.curve().sample(4 * patch_.resolution());
      levels_[1] = patch_.curve().sample(16 * patch_.resolution());
    });
    return d >= nodeSpacing_ ? levels_[0] : levels_[1];
  }

  PatchBoundary patch_;
  GreenEval eval_;
  Real area_ = 0.0;
  Real nodeSpacing_ = 0.0;
  // upsampled boundaries for near-boundary log sums, built on first use
  mutable std::once_flag levelsOnce_;
  mutable std::array<CurveSamples, 2> levels_;
  std::vector<Complex> conjTrace_;
  AreaQuadrature imageRule_;
};

inline Real streamFunction(const PatchBoundary& d, Complex x) { return PatchPotential(d).stream(x); }
inline Complex velocity(const PatchBoundary& d, Complex x) { return PatchPotential(d).velocity(x); }
inline Real doubleEnergy(const PatchBoundary& d) { return PatchPotential(d).doubleEnergy(); }

}  // namespace vpatch
