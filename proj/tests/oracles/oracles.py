"""Independent reference values frozen into the C++ tests.

Polar quadrature with scipy/numpy for a flower r(t) = c0 + a cos(m t), and a
harmonic-polynomial least-squares fit for its torsion function. Nothing here
shares code or method with the library (boundary integrals / Nystrom).
Run: python3 tests/oracles/oracles.py
"""
import warnings

import numpy as np
from scipy import integrate

warnings.simplefilter("ignore", integrate.IntegrationWarning)

C0, M, A = 0.5, 3, 0.05


def r(t):
    return C0 + A * np.cos(M * t)


def flower_moments():
    area = integrate.quad(lambda t: r(t) ** 2 / 2, 0, 2 * np.pi, epsabs=1e-15, epsrel=1e-15)[0]
    m2 = integrate.quad(lambda t: r(t) ** 4 / 4, 0, 2 * np.pi, epsabs=1e-15, epsrel=1e-15)[0]
    rad = np.sqrt(area / np.pi)
    # crossings of r(t) = R are at cos(3t) = (R - c0)/a
    c = (rad - C0) / A
    t0 = np.arccos(c) / M
    pts = sorted({(k * 2 * np.pi / M + s * t0) % (2 * np.pi) for k in range(M) for s in (1, -1)})
    sym = integrate.quad(lambda t: max(r(t) ** 2 - rad**2, 0.0) / 2, 0, 2 * np.pi, points=pts,
                         epsabs=1e-15, epsrel=1e-15, limit=200)[0]
    lmax = C0 + A
    return area, m2, sym, lmax


def psi_origin():
    # psi(0) = -(1/2pi) int ln|y| dy ; the image term vanishes at 0
    f = lambda t: r(t) ** 2 / 2 * np.log(r(t)) - r(t) ** 2 / 4
    return -integrate.quad(f, 0, 2 * np.pi, epsabs=1e-15, epsrel=1e-15)[0] / (2 * np.pi)


def green(x, y1, y2):
    d2 = (x[0] - y1) ** 2 + (x[1] - y2) ** 2
    xy = x[0] * y1 + x[1] * y2
    h = -np.log(1 - 2 * xy + (x[0] ** 2 + x[1] ** 2) * (y1**2 + y2**2)) / (4 * np.pi)
    return -np.log(d2) / (4 * np.pi) - h


def psi_at(x):
    f = lambda rho, t: green(x, rho * np.cos(t), rho * np.sin(t)) * rho
    return integrate.dblquad(f, 0, 2 * np.pi, 0, r, epsabs=1e-14, epsrel=1e-14)[0]


def gauss_polar(nr, nt):
    g, w = np.polynomial.legendre.leggauss(nr)
    g = (g + 1) / 2
    w = w / 2
    t = 2 * np.pi * np.arange(nt) / nt
    R = r(t)
    rho = np.outer(R, g)
    wt = np.outer(R * R * 2 * np.pi / nt, g * w)
    x = rho * np.cos(t)[:, None]
    y = rho * np.sin(t)[:, None]
    return x.ravel(), y.ravel(), wt.ravel()


def torsion_mass(deg=60):
    # p = -|x|^2/2 + sum Re(c_k z^k); harmonic part fits |z|^2/2 on the boundary
    t = 2 * np.pi * np.arange(2000) / 2000
    z = r(t) * np.exp(1j * t)
    cols = [np.ones_like(t)]
    for k in range(1, deg + 1):
        cols += [np.real(z**k), np.imag(z**k)]
    A_ = np.array(cols).T
    coef, *_ = np.linalg.lstsq(A_, np.abs(z) ** 2 / 2, rcond=None)
    x, y, w = gauss_polar(40, 512)
    zz = x + 1j * y
    cols = [np.ones_like(x)]
    for k in range(1, deg + 1):
        cols += [np.real(zz**k), np.imag(zz**k)]
    phi = np.array(cols).T @ coef
    p = -np.abs(zz) ** 2 / 2 + phi
    return np.sum(w * p), np.max(np.abs(A_ @ coef - np.abs(z) ** 2 / 2))


def term_l():
    x, y, w = gauss_polar(24, 192)
    X = x[:, None]; Y = y[:, None]; U = x[None, :]; V = y[None, :]
    nx2 = X * X + Y * Y; ny2 = U * U + V * V; dot = X * U + Y * V
    k = (nx2 * ny2 - dot) / (1 - 2 * dot + nx2 * ny2) / (2 * np.pi)
    return w @ k @ w


def ellipse_symdiff(a=0.5, b=0.3):
    r2 = lambda t: 1.0 / (np.cos(t) ** 2 / a**2 + np.sin(t) ** 2 / b**2)
    R2 = a * b
    tc = np.arctan(np.sqrt((1 / R2 - 1 / a**2) / (1 / b**2 - 1 / R2)))
    pts = [tc, np.pi - tc, np.pi + tc, 2 * np.pi - tc]
    return integrate.quad(lambda t: max(r2(t) - R2, 0.0) / 2, 0, 2 * np.pi, points=pts,
                          epsabs=1e-15, epsrel=1e-15, limit=200)[0]


if __name__ == "__main__":
    area, m2, sym, lmax = flower_moments()
    print(f"flower area      {area:.17g}")
    print(f"flower M2        {m2:.17g}")
    print(f"flower symDiff   {sym:.17g}")
    print(f"flower psi(0)    {psi_origin():.17g}")
    print(f"flower psi(0.8)  {psi_at((0.8, 0.0)):.17g}")
    print(f"flower psi(.2,.7) {psi_at((0.2, 0.7)):.17g}")
    mass, fit = torsion_mass()
    print(f"flower torsion   {mass:.17g}  (fit residual {fit:.1e})")
    print(f"flower talenti   {area**2 / (4*np.pi) - mass:.17g}")
    print(f"flower termL     {term_l():.17g}")
    print(f"ellipse symDiff  {ellipse_symdiff():.17g}")
