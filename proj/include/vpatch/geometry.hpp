#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "vpatch/core.hpp"
#include "vpatch/trig_curve.hpp"

namespace vpatch {

inline constexpr Real kDefaultWallGap = 1e-6;

enum class Representation { Fourier, Vertices };

/// Boundary of a simply-connected patch inside the unit disc, held as a
/// trigonometric curve sampled on N uniform parameter nodes.
///
/// Fourier patches are star-shaped about the origin,
///   r(theta) = c0 + sum_k (a_k cos k theta + b_k sin k theta),
/// and the parameter is the polar angle. Vertex patches are the trigonometric
/// interpolant of N counterclockwise points.
class PatchBoundary {
 public:
  PatchBoundary() = default;

  Representation representation() const { return rep_; }
  std::size_t resolution() const { return samples_.size(); }
  const TrigCurve& curve() const { return curve_; }
  const CurveSamples& samples() const { return samples_; }
  Real wallGap() const { return wallGap_; }

  Real meanRadius() const { return c0_; }
  const std::vector<Real>& cosCoeffs() const { return a_; }
  const std::vector<Real>& sinCoeffs() const { return b_; }
  /// Stored vertices (Vertices form) or the sampled nodes (Fourier form).
  const std::vector<Complex>& nodes() const { return samples_.z; }

  /// Radius function for Fourier patches.
  Real radius(Real theta) const {
    Real r = c0_;
    for (std::size_t k = 0; k < a_.size(); ++k) {
      const Real kt = static_cast<Real>(k + 1) * theta;
      r += a_[k] * std::cos(kt) + b_[k] * std::sin(kt);
    }
    return r;
  }

  /// Fan center used by interior quadrature: the origin for Fourier patches,
  /// the area centroid for vertex patches.
  Complex fanCenter() const { return fanCenter_; }

  static PatchBoundary fourier(Real c0, std::vector<Real> a, std::vector<Real> b, std::size_t n,
                               Real wallGap = kDefaultWallGap);
  static PatchBoundary vertices(std::vector<Complex> points, Real wallGap = kDefaultWallGap,
                                bool checkSimple = true);

 private:
  void finish(bool checkSimple);

  Representation rep_ = Representation::Fourier;
  Real c0_ = 0.0;
  std::vector<Real> a_, b_;
  TrigCurve curve_;
  CurveSamples samples_;
  Complex fanCenter_ = 0.0;
  Real wallGap_ = kDefaultWallGap;
};

struct PatchSummary {
  Real area = 0.0;
  Real maxRadius = 0.0;
  Real secondMoment = 0.0;
  Real equalAreaRadius = 0.0;
  Real symDiff = 0.0;
};

/// Finite union of concentric rings [r_in, r_out).
struct RadialSet {
  std::vector<std::pair<Real, Real>> rings;
};

namespace detail {

inline bool segmentsCross(Complex p1, Complex p2, Complex q1, Complex q2) {
  const Real d1 = cross(p2 - p1, q1 - p1);
  const Real d2 = cross(p2 - p1, q2 - p1);
  const Real d3 = cross(q2 - q1, p1 - q1);
  const Real d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

inline bool polygonIsSimple(const std::vector<Complex>& p) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = p[i], b = p[(i + 1) % n];
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segmentsCross(a, b, p[j], p[(j + 1) % n])) return false;
    }
  }
  return true;
}

/// Root of g on [lo, hi] where g changes sign; safeguarded Newton.
template <class F, class DF>
Real bracketedRoot(F g, DF dg, Real lo, Real hi) {
  Real glo = g(lo);
  Real x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const Real gx = g(x);
    if (gx == 0.0) return x;
    if ((gx > 0) == (glo > 0)) {
      lo = x;
      glo = gx;
    } else {
      hi = x;
    }
    const Real d = dg(x);
    Real next = (d != 0.0) ? x - gx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15 * (1.0 + std::abs(x)) || hi - lo < 1e-15) return next;
    x = next;
  }
  return x;
}

}  // namespace detail

inline Real maxRadiusOf(const TrigCurve& curve, std::size_t n) {
  const std::size_t ng = std::max<std::size_t>(4 * n, 256);
  Real best = -1.0;
  Real bestT = 0.0;
  for (std::size_t j = 0; j < ng; ++j) {
    const Real t = kTwoPi * static_cast<Real>(j) / static_cast<Real>(ng);
    const Real r2 = std::norm(curve(t));
    if (r2 > best) {
      best = r2;
      bestT = t;
    }
  }
  // Newton on d|z|^2/dt, kept inside the sampling cell.
  Real t = bestT;
  const Real cell = kTwoPi / static_cast<Real>(ng);
  for (int iter = 0; iter < 30; ++iter) {
    Complex z, zt, ztt;
    curve.evaluate(t, z, zt, ztt);
    const Real g = 2.0 * dot(z, zt);
    const Real dg = 2.0 * (std::norm(zt) + dot(z, ztt));
    if (dg >= 0.0) break;
    const Real step = g / dg;
    if (std::abs(t - step - bestT) > cell) break;
    t -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return std::sqrt(std::max(best, std::norm(curve(t))));
}

inline PatchBoundary PatchBoundary::fourier(Real c0, std::vector<Real> a, std::vector<Real> b,
                                            std::size_t n, Real wallGap) {
  require(n >= 16 && n % 2 == 0, ErrorCode::InvalidResolution, "N must be even and >= 16");
  require(c0 > 0.0, ErrorCode::InvalidShape, "mean radius must be positive");
  const std::size_t k = std::max(a.size(), b.size());
  a.resize(k, 0.0);
  b.resize(k, 0.0);
  require(2 * (k + 1) < n, ErrorCode::InvalidResolution, "too many harmonics for N nodes");

  PatchBoundary p;
  p.rep_ = Representation::Fourier;
  p.c0_ = c0;
  p.a_ = std::move(a);
  p.b_ = std::move(b);
  p.wallGap_ = wallGap;

  // z(theta) = r(theta) e^{i theta}: harmonic k of r shifts to modes k+1 and -k+1.
  const int m = static_cast<int>(k) + 1;
  std::vector<Complex> c(2 * m + 1, 0.0);
  auto at = [&](int mode) -> Complex& { return c[mode + m]; };
  at(1) += c0;
  for (std::size_t j = 0; j < k; ++j) {
    const int kk = static_cast<int>(j) + 1;
    // a cos + b sin = ((a - i b)/2) e^{ik} + ((a + i b)/2) e^{-ik}
    at(kk + 1) += Complex(p.a_[j], -p.b_[j]) * 0.5;
    at(-kk + 1) += Complex(p.a_[j], p.b_[j]) * 0.5;
  }
  p.curve_ = TrigCurve(std::move(c), m);

  // r(theta) = Re(z(theta) e^{-i theta}) on a dense grid
  const std::size_t dense = std::max<std::size_t>(8 * n, 64 * (k + 1));
  for (std::size_t j = 0; j < dense; ++j) {
    const Real th = kTwoPi * static_cast<Real>(j) / static_cast<Real>(dense);
    const Real r = (p.curve_(th) * std::polar(1.0, -th)).real();
    require(r > 0.0, ErrorCode::InvalidShape, "radius function is not positive");
  }
  p.samples_ = p.curve_.sample(n);
  p.finish(false);
  return p;
}

inline PatchBoundary PatchBoundary::vertices(std::vector<Complex> points, Real wallGap,
                                             bool checkSimple) {
  const std::size_t n = points.size();
  require(n >= 16 && n % 2 == 0, ErrorCode::InvalidResolution, "vertex count must be even and >= 16");
  PatchBoundary p;
  p.rep_ = Representation::Vertices;
  p.wallGap_ = wallGap;
  p.curve_ = TrigCurve::interpolate(points);
  p.samples_ = p.curve_.sample(n);
  // keep the exact input coordinates at the nodes
  p.samples_.z = std::move(points);
  p.finish(checkSimple);
  return p;
}

inline void PatchBoundary::finish(bool checkSimple) {
  const std::size_t n = samples_.size();
  const Real h = samples_.step();
  Real twiceArea = 0.0;
  Real mx = 0.0, my = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex z = samples_.z[j], zt = samples_.zt[j];
    twiceArea += h * cross(z, zt);
    mx += h * z.real() * z.real() * zt.imag();
    my -= h * z.imag() * z.imag() * zt.real();
  }
  require(twiceArea > 0.0, ErrorCode::InvalidShape, "boundary must be counterclockwise");
  if (checkSimple) {
    require(detail::polygonIsSimple(samples_.z), ErrorCode::InvalidShape, "polygon is self-intersecting");
  }
  const Real l = maxRadiusOf(curve_, n);
  require(l <= 1.0 - wallGap_, ErrorCode::OutsideUnitDisc, "patch reaches the unit circle");
  fanCenter_ = (rep_ == Representation::Fourier) ? Complex(0.0) : Complex(mx, my) / twiceArea;
}

/// Closed-form circle: Fourier patch with zero harmonics.
inline PatchBoundary disc(Real radius, std::size_t n = 256) {
  return PatchBoundary::fourier(radius, {}, {}, n);
}

/// m-fold cosine flower r = c0 + amp cos(m theta).
inline PatchBoundary flower(Real c0, int m, Real amp, std::size_t n = 256) {
  std::vector<Real> a(static_cast<std::size_t>(m), 0.0);
  a[m - 1] = amp;
  return PatchBoundary::fourier(c0, std::move(a), {}, n);
}

/// Ellipse with semi-axes (ax, by) centred at `center`, as a vertex patch.
inline PatchBoundary ellipse(Real ax, Real by, std::size_t n = 256, Complex center = 0.0) {
  std::vector<Complex> pts(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Real t = kTwoPi * static_cast<Real>(j) / static_cast<Real>(n);
    pts[j] = center + Complex(ax * std::cos(t), by * std::sin(t));
  }
  return PatchBoundary::vertices(std::move(pts));
}

inline PatchBoundary fromFourier(Real c0, const std::vector<Real>& a, const std::vector<Real>& b,
                                 std::size_t n) {
  return PatchBoundary::fourier(c0, a, b, n);
}

/// Rotation about the origin by phi.
inline PatchBoundary rotate(const PatchBoundary& d, Real phi) {
  if (d.representation() == Representation::Fourier) {
    std::vector<Real> a = d.cosCoeffs(), b = d.sinCoeffs();
    for (std::size_t j = 0; j < a.size(); ++j) {
      const Real kp = static_cast<Real>(j + 1) * phi;
      const Real ca = d.cosCoeffs()[j], sb = d.sinCoeffs()[j];
      a[j] = ca * std::cos(kp) - sb * std::sin(kp);
      b[j] = ca * std::sin(kp) + sb * std::cos(kp);
    }
    return PatchBoundary::fourier(d.meanRadius(), a, b, d.resolution(), d.wallGap());
  }
  std::vector<Complex> pts = d.nodes();
  const Complex f = std::polar(1.0, phi);
  for (auto& z : pts) z *= f;
  return PatchBoundary::vertices(std::move(pts), d.wallGap(), false);
}

inline PatchBoundary translate(const PatchBoundary& d, Complex shift) {
  std::vector<Complex> pts = d.nodes();
  for (auto& z : pts) z += shift;
  return PatchBoundary::vertices(std::move(pts), d.wallGap(), false);
}

inline PatchBoundary scale(const PatchBoundary& d, Real factor, Real wallGap) {
  if (d.representation() == Representation::Fourier) {
    std::vector<Real> a = d.cosCoeffs(), b = d.sinCoeffs();
    for (auto& v : a) v *= factor;
    for (auto& v : b) v *= factor;
    return PatchBoundary::fourier(d.meanRadius() * factor, a, b, d.resolution(), wallGap);
  }
  std::vector<Complex> pts = d.nodes();
  for (auto& z : pts) z *= factor;
  return PatchBoundary::vertices(std::move(pts), wallGap, false);
}

/// Arclength-equispaced parameter values of the trigonometric curve.
inline std::vector<Real> arclengthParameters(const TrigCurve& curve, std::size_t count) {
  // speed |z'(t)| on a fine grid, integrated spectrally
  const std::size_t ng = std::max<std::size_t>(4 * static_cast<std::size_t>(curve.maxMode()) + 8, 2 * count);
  const std::size_t nFine = ng + (ng % 2);
  std::vector<Complex> speed(nFine);
  const CurveSamples s = curve.sample(nFine);
  for (std::size_t j = 0; j < nFine; ++j) speed[j] = std::abs(s.zt[j]);
  const TrigCurve sp = TrigCurve::interpolate(speed);
  const Real c0 = sp.coeff(0).real();
  const Real length = kTwoPi * c0;
  auto arc = [&](Real t) {
    Real acc = c0 * t;
    for (int k = 1; k <= sp.maxMode(); ++k) {
      const Complex ck = sp.coeff(k), cmk = sp.coeff(-k);
      const Real kr = static_cast<Real>(k);
      // integral of c_k e^{ikt} + c_{-k} e^{-ikt} from 0 to t
      const Complex ek = std::polar(1.0, kr * t);
      acc += (ck * (ek - 1.0) / Complex(0.0, kr) + cmk * (std::conj(ek) - 1.0) / Complex(0.0, -kr)).real();
    }
    return acc;
  };
  auto speedAt = [&](Real t) { return sp(t).real(); };
  std::vector<Real> ts(count);
  Real t = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const Real target = length * static_cast<Real>(j) / static_cast<Real>(count);
    if (j > 0) t = ts[j - 1] + kTwoPi / static_cast<Real>(count);
    for (int iter = 0; iter < 50; ++iter) {
      const Real step = (arc(t) - target) / speedAt(t);
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    ts[j] = t;
  }
  return ts;
}

/// Fourier patches keep their coefficients at the new node count; vertex
/// patches are respaced uniformly in arclength.
inline PatchBoundary resample(const PatchBoundary& d, std::size_t n) {
  require(n >= 16 && n % 2 == 0, ErrorCode::InvalidResolution, "N' must be even and >= 16");
  if (d.representation() == Representation::Fourier) {
    return PatchBoundary::fourier(d.meanRadius(), d.cosCoeffs(), d.sinCoeffs(), n, d.wallGap());
  }
  const std::vector<Real> ts = arclengthParameters(d.curve(), n);
  std::vector<Complex> pts(n);
  for (std::size_t j = 0; j < n; ++j) pts[j] = d.curve()(ts[j]);
  return PatchBoundary::vertices(std::move(pts), d.wallGap(), false);
}

namespace detail {

/// Area of D intersected with the centred disc of radius R, by clipping the
/// boundary against the circle: arcs inside the circle contribute the
/// triangle-fan area 1/2 z x dz, arcs outside contribute the sector 1/2 R^2 dphi.
inline Real clippedArea(const TrigCurve& curve, std::size_t n, Real radius) {
  const Real r2 = radius * radius;
  const std::size_t ng = std::max<std::size_t>(8 * n, 512);
  auto f = [&](Real t) { return std::norm(curve(t)) - r2; };
  auto df = [&](Real t) {
    Complex z, zt, ztt;
    curve.evaluate(t, z, zt, ztt);
    return 2.0 * dot(z, zt);
  };
  std::vector<Real> cuts;
  Real prevT = 0.0;
  Real prevF = f(0.0);
  for (std::size_t j = 1; j <= ng; ++j) {
    const Real t = kTwoPi * static_cast<Real>(j) / static_cast<Real>(ng);
    const Real ft = f(t);
    if ((ft > 0) != (prevF > 0)) cuts.push_back(bracketedRoot(f, df, prevT, t));
    prevT = t;
    prevF = ft;
  }
  std::vector<Real> edges;
  edges.push_back(0.0);
  for (Real c : cuts) edges.push_back(c);
  edges.push_back(kTwoPi);

  static const GaussRule gauss = gaussLegendreUnit(12);
  const Real maxPiece = 2.0 * kTwoPi / static_cast<Real>(n);
  Real total = 0.0;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const Real t0 = edges[e], t1 = edges[e + 1];
    if (t1 <= t0) continue;
    const bool inside = f(0.5 * (t0 + t1)) < 0.0;
    const int pieces = std::max(1, static_cast<int>(std::ceil((t1 - t0) / maxPiece)));
    const Real w = (t1 - t0) / pieces;
    for (int p = 0; p < pieces; ++p) {
      for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
        const Real t = t0 + w * (p + gauss.nodes[q]);
        Complex z, zt, ztt;
        curve.evaluate(t, z, zt, ztt);
        const Real integrand = inside ? cross(z, zt) : r2 * cross(z, zt) / std::norm(z);
        total += 0.5 * w * gauss.weights[q] * integrand;
      }
    }
  }
  return total;
}

}  // namespace detail

/// Area, maximal radius, second moment and symmetric difference against the
/// equal-area centred disc.
inline PatchSummary summarize(const PatchBoundary& d) {
  const CurveSamples& s = d.samples();
  const std::size_t n = s.size();
  const Real h = s.step();
  std::vector<Real> area(n), moment(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Real c = cross(s.z[j], s.zt[j]);
    area[j] = 0.5 * h * c;
    moment[j] = 0.25 * h * std::norm(s.z[j]) * c;
  }
  PatchSummary out;
  out.area = pairwiseSum(area);
  out.secondMoment = pairwiseSum(moment);
  out.maxRadius = maxRadiusOf(d.curve(), n);
  out.equalAreaRadius = std::sqrt(out.area / kPi);
  out.symDiff = std::max(0.0, out.area - detail::clippedArea(d.curve(), n, out.equalAreaRadius));
  return out;
}

inline void validate(const RadialSet& s) {
  require(!s.rings.empty(), ErrorCode::InvalidShape, "radial set is empty");
  Real prevOut = -1.0;
  for (const auto& [rin, rout] : s.rings) {
    require(rin >= 0.0 && rin < rout && rout <= 1.0, ErrorCode::InvalidShape, "invalid ring radii");
    require(rin >= prevOut, ErrorCode::InvalidShape, "rings overlap or are unsorted");
    prevOut = rout;
  }
}

/// Exact moments of a union of rings.
inline PatchSummary radialMoments(const RadialSet& s) {
  validate(s);
  PatchSummary out;
  for (const auto& [rin, rout] : s.rings) {
    const Real a2 = rin * rin, b2 = rout * rout;
    out.area += kPi * (b2 - a2);
    out.secondMoment += 0.5 * kPi * (b2 * b2 - a2 * a2);
  }
  out.maxRadius = s.rings.back().second;
  out.equalAreaRadius = std::sqrt(out.area / kPi);
  const Real r2 = out.area / kPi;
  for (const auto& [rin, rout] : s.rings) {
    const Real lo = std::max(rin * rin, r2), hi = std::max(rout * rout, r2);
    out.symDiff += kPi * (hi - lo);
  }
  return out;
}

/// Gap in the second-moment inequality: int |x|^2 - |D|^2/(2 pi) - |D\B|^2/pi.
inline Real secondMomentGap(const PatchSummary& s) {
  return s.secondMoment - s.area * s.area / kTwoPi - s.symDiff * s.symDiff / kPi;
}

/// Tensor quadrature over the fan of curved triangles joining the fan center to
/// consecutive boundary nodes: y = c + rho (z(t) - c), dA = rho (z - c) x z' drho dt.
struct AreaQuadrature {
  std::vector<Complex> points;
  std::vector<Real> weights;

  template <class F>
  Real integrate(F&& f) const {
    std::vector<Real> terms(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) terms[i] = weights[i] * f(points[i]);
    return pairwiseSum(terms);
  }
};

inline AreaQuadrature fanQuadrature(const PatchBoundary& d, int radialOrder) {
  require(radialOrder >= 2, ErrorCode::InvalidResolution, "radial order must be >= 2");
  const CurveSamples& s = d.samples();
  const Complex c = d.fanCenter();
  const GaussRule g = gaussLegendreUnit(radialOrder);
  const Real h = s.step();
  AreaQuadrature q;
  q.points.reserve(s.size() * g.nodes.size());
  q.weights.reserve(s.size() * g.nodes.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    const Real jac = cross(s.z[j] - c, s.zt[j]);
    require(jac > 0.0, ErrorCode::InvalidShape, "patch is not star-shaped about its fan center");
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      q.points.push_back(c + g.nodes[k] * (s.z[j] - c));
      q.weights.push_back(h * g.weights[k] * g.nodes[k] * jac);
    }
  }
  return q;
}

/// Point-in-patch test. Far from the boundary the node polygon's winding
/// number decides; near it, the side of the closest curve point.
inline bool contains(const PatchBoundary& d, Complex p) {
  const CurveSamples& s = d.samples();
  const std::size_t n = s.size();
  std::size_t best = 0;
  Real bestD = std::numeric_limits<Real>::max();
  Real maxSpeed = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Real dd = std::norm(s.z[j] - p);
    if (dd < bestD) { bestD = dd; best = j; }
    maxSpeed = std::max(maxSpeed, std::abs(s.zt[j]));
  }
  if (std::sqrt(bestD) > 3.0 * maxSpeed * s.step()) {
    Real wind = 0.0;
    for (std::size_t j = 0; j < n; ++j) wind += std::arg((s.z[(j + 1) % n] - p) / (s.z[j] - p));
    return std::abs(wind) > kPi;
  }
  Real t = s.step() * static_cast<Real>(best);
  for (int iter = 0; iter < 30; ++iter) {
    Complex w, wt, wtt;
    d.curve().evaluate(t, w, wt, wtt);
    const Real g = dot(w - p, wt);
    const Real dg = std::norm(wt) + dot(w - p, wtt);
    if (dg <= 0.0) break;
    t -= g / dg;
    if (std::abs(g / dg) < 1e-15) break;
  }
  Complex w, wt, wtt;
  d.curve().evaluate(t, w, wt, wtt);
  // outward normal direction is -i z_t
  return dot(p - w, Complex(0.0, -1.0) * wt) < 0.0;
}

/// Hausdorff-style distance from a point to the trigonometric curve.
inline Real distanceToCurve(const TrigCurve& curve, const CurveSamples& s, Complex p) {
  std::size_t best = 0;
  Real bestD = std::numeric_limits<Real>::max();
  for (std::size_t j = 0; j < s.size(); ++j) {
    const Real dd = std::norm(s.z[j] - p);
    if (dd < bestD) {
      bestD = dd;
      best = j;
    }
  }
  Real t = kTwoPi * static_cast<Real>(best) / static_cast<Real>(s.size());
  const Real t0 = t;
  const Real cell = s.step();
  for (int iter = 0; iter < 30; ++iter) {
    Complex z, zt, ztt;
    curve.evaluate(t, z, zt, ztt);
    const Real g = dot(z - p, zt);
    const Real dg = std::norm(zt) + dot(z - p, ztt);
    if (dg <= 0.0) break;
    const Real step = g / dg;
    if (std::abs(t - step - t0) > 1.5 * cell) break;
    t -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return std::sqrt(std::min(bestD, std::norm(curve(t) - p)));
}

/// Symmetric Hausdorff distance between two boundaries.
inline Real hausdorff(const PatchBoundary& a, const PatchBoundary& b) {
  Real d = 0.0;
  for (Complex z : a.nodes()) d = std::max(d, distanceToCurve(b.curve(), b.samples(), z));
  for (Complex z : b.nodes()) d = std::max(d, distanceToCurve(a.curve(), a.samples(), z));
  return d;
}

}  // namespace vpatch
