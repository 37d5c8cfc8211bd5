#pragma once

#include <vector>

#include "vpatch/core.hpp"

namespace vpatch {

/// Boundary samples on the uniform parameter grid t_j = 2*pi*j/N, with
/// derivatives taken from the trigonometric representation.
struct CurveSamples {
  std::vector<Complex> z;
  std::vector<Complex> zt;
  std::vector<Complex> ztt;

  std::size_t size() const { return z.size(); }
  Real step() const { return kTwoPi / static_cast<Real>(z.size()); }
};

/// Closed curve z(t) = sum_{k=-M}^{M} c_k e^{ikt}, t in [0, 2*pi).
class TrigCurve {
 public:
  TrigCurve() = default;

  TrigCurve(std::vector<Complex> coeffs, int maxMode)
      : coeffs_(std::move(coeffs)), maxMode_(maxMode) {
    require(static_cast<int>(coeffs_.size()) == 2 * maxMode_ + 1, ErrorCode::InvalidArgument,
            "coefficient count must be 2M+1");
  }

  /// Trigonometric interpolant of N equispaced samples (N even). The Nyquist
  /// mode is split evenly between +N/2 and -N/2 so the interpolant is real-symmetric.
  static TrigCurve interpolate(const std::vector<Complex>& samples) {
    const int n = static_cast<int>(samples.size());
    require(n >= 4 && n % 2 == 0, ErrorCode::InvalidResolution, "sample count must be even and >= 4");
    const int m = n / 2;
    std::vector<Complex> c(2 * m + 1);
    std::vector<Complex> roots(n);
    for (int j = 0; j < n; ++j) roots[j] = std::polar(1.0, -kTwoPi * j / n);
    for (int k = -m; k <= m; ++k) {
      Complex acc = 0.0;
      const int kk = ((k % n) + n) % n;
      for (int j = 0; j < n; ++j) acc += samples[j] * roots[(static_cast<long>(kk) * j) % n];
      c[k + m] = acc / static_cast<Real>(n);
    }
    c[0] *= 0.5;
    c[2 * m] *= 0.5;
    return TrigCurve(std::move(c), m);
  }

  int maxMode() const { return maxMode_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex coeff(int k) const {
    return (k < -maxMode_ || k > maxMode_) ? Complex(0.0) : coeffs_[k + maxMode_];
  }

  /// Value and first two derivatives at parameter t.
  void evaluate(Real t, Complex& z, Complex& zt, Complex& ztt) const {
    z = zt = ztt = 0.0;
    const Complex step = std::polar(1.0, t);
    Complex pos = 1.0;
    Complex neg = 1.0;
    z = coeffs_[maxMode_];
    for (int k = 1; k <= maxMode_; ++k) {
      pos *= step;
      neg = std::conj(pos);
      const Complex cp = coeffs_[maxMode_ + k] * pos;
      const Complex cn = coeffs_[maxMode_ - k] * neg;
      const Real kr = static_cast<Real>(k);
      z += cp + cn;
      zt += Complex(0.0, kr) * (cp - cn);
      ztt -= kr * kr * (cp + cn);
    }
  }

  Complex operator()(Real t) const {
    Complex z, zt, ztt;
    evaluate(t, z, zt, ztt);
    return z;
  }

  CurveSamples sample(std::size_t n) const {
    CurveSamples s;
    s.z.resize(n);
    s.zt.resize(n);
    s.ztt.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      evaluate(kTwoPi * static_cast<Real>(j) / static_cast<Real>(n), s.z[j], s.zt[j], s.ztt[j]);
    }
    return s;
  }

  /// Curve obtained by z -> factor * z + shift.
  TrigCurve affine(Complex factor, Complex shift) const {
    std::vector<Complex> c = coeffs_;
    for (auto& v : c) v *= factor;
    c[maxMode_] += shift;
    return TrigCurve(std::move(c), maxMode_);
  }

 private:
  std::vector<Complex> coeffs_{Complex(0.0)};
  int maxMode_ = 0;
};

/// Trigonometric interpolation of a real periodic sequence, with derivatives.
class TrigSeries {
 public:
  TrigSeries() = default;

  explicit TrigSeries(const std::vector<Complex>& samples) : curve_(TrigCurve::interpolate(samples)) {}

  Complex value(Real t) const { return curve_(t); }

  /// d/dt of the interpolant sampled back on the original grid.
  std::vector<Complex> derivativeOnGrid(std::size_t n) const {
    CurveSamples s = curve_.sample(n);
    return s.zt;
  }

  const TrigCurve& curve() const { return curve_; }

 private:
  TrigCurve curve_;
};

}  // namespace vpatch
