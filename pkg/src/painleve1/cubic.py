"""Turning-point geometry of the scaled linear problem.

Everything in this module lives on the cubic z^3 + A*z + 1 and on contour
integrals of f0(z)^{1/2}, f0(z) = 4(z^3 + A*z + 1), taken between its roots
or from a root out to infinity.  The square root is evaluated factor by
factor with fixed argument windows, which makes the branch choice testable
in isolation:

    f0(z)^{1/2} = 2 (z - z0)^{1/2} (z - z1)^{1/2} (z - z2)^{1/2},
    arg(z - z0) in (-pi, pi),  arg(z - z1), arg(z - z2) in (-pi/2, 3*pi/2).

The cuts therefore run leftward from z0 and straight down from z1 and z2.
Points exactly on a downward cut resolve to arg = -pi/2 (the right-hand
side), which is what the vertical-segment period integral needs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

__all__ = [
    "A_CRIT",
    "GeometryError",
    "CubicData",
    "KappaPair",
    "AlphaSet",
    "cubic_roots",
    "f0_sqrt",
    "kappa_pair",
    "find_C0",
    "C0",
    "alpha0",
    "alpha1_parts",
    "alpha_set",
    "alpha1",
    "lambda0_and_B1",
]

A_CRIT = -3.0 / 2.0 ** (2.0 / 3.0)

# quadrature knobs; fixed values keep every output bit-reproducible
_GJ_NODES = 160
_GL_NODES = 200
_TAIL_RADIUS = 1.0e4
_RAY_PANELS = (0.0, 1.0, 2.5, 6.0, 15.0, 40.0, 100.0)


class GeometryError(ValueError):
    """Raised when a contour or inversion cannot be constructed."""


@dataclass(frozen=True)
class CubicData:
    A: float
    z0: complex
    z1: complex
    z2: complex

    @property
    def roots(self) -> tuple[complex, complex, complex]:
        return (self.z0, self.z1, self.z2)


@dataclass(frozen=True)
class KappaPair:
    kappa2: complex
    kappa_hat2: complex | None
    err_estimate: float
    coalescing: bool = False


@dataclass(frozen=True)
class AlphaSet:
    A: float
    alpha0: complex
    alpha11: complex
    alpha12_plus: complex
    alpha12_minus: complex


def _polish(z: complex, A: float) -> complex:
    # two Newton steps push the closed-form root to machine accuracy
    for _ in range(2):
        f = z * z * z + A * z + 1.0
        df = 3.0 * z * z + A
        if df != 0:
            z = z - f / df
    return z


def cubic_roots(A: float) -> CubicData:
    """Roots of z^3 + A z + 1, ordered so Re z0 < 0 and z1 'above' z2.

    For three real roots (A < A_CRIT) z1 >= z2 are the two positive ones;
    otherwise z1 is the upper-half member of the conjugate pair.  Closed
    forms plus a Newton polish; the companion matrix is left to the tests
    as an independent oracle.
    """
    A = float(A)
    disc = -4.0 * A ** 3 - 27.0
    if disc > 0.0:
        # three real roots, trigonometric form
        m = 2.0 * math.sqrt(-A / 3.0)
        phi = math.acos((3.0 / (2.0 * A)) * math.sqrt(-3.0 / A))
        rts = sorted(
            _polish(m * math.cos(phi / 3.0 - 2.0 * math.pi * k / 3.0), A).real
            for k in range(3)
        )
        z0, z2, z1 = rts  # unique negative root first, then z1 >= z2
        return CubicData(A, complex(z0), complex(z1), complex(z2))
    # one real root (negative since the root product is -1) plus a pair
    half = -0.5
    inner = 0.25 + A ** 3 / 27.0
    s = math.sqrt(inner) if inner >= 0 else 0.0
    zr = math.copysign(abs(half + s) ** (1.0 / 3.0), half + s) + math.copysign(
        abs(half - s) ** (1.0 / 3.0), half - s
    )
    zr = _polish(zr, A).real
    # remaining quadratic z^2 + zr z + (zr^2 + A)
    c = zr * zr + A
    im = cmath.sqrt(complex(zr * zr - 4.0 * c)) / 2.0
    z1 = _polish(complex(-zr / 2.0) + im, A)
    z2 = _polish(complex(-zr / 2.0) - im, A)
    if z1.imag < z2.imag:
        z1, z2 = z2, z1
    return CubicData(A, complex(zr), z1, z2)


def _sqrt_down_cut(w: complex) -> complex:
    # square root with arg(w) in [-pi/2, 3*pi/2): cut straight down,
    # on-cut points resolve to the right-hand side
    a = cmath.phase(w)
    if a < -math.pi / 2.0:
        a += 2.0 * math.pi
    return math.sqrt(abs(w)) * cmath.exp(0.5j * a)


def f0_sqrt(z: complex, data: CubicData) -> complex:
    """Branch-resolved f0^{1/2} = 2 prod (z - zi)^{1/2}; see module docstring."""
    return (
        2.0
        * cmath.sqrt(z - data.z0)
        * _sqrt_down_cut(z - data.z1)
        * _sqrt_down_cut(z - data.z2)
    )


def _gj_segment(data: CubicData, za: complex, zb: complex, n: int) -> complex:
    # integral of f0^{1/2} over the straight segment [za, zb] where both
    # endpoints are turning points (square-root zeros of the integrand)
    x, w = roots_jacobi(n, 0.5, 0.5)
    mid = 0.5 * (za + zb)
    half = 0.5 * (zb - za)
    total = 0.0 + 0.0j
    for xi, wi in zip(x, w):
        z = mid + half * xi
        g = f0_sqrt(z, data) / math.sqrt((1.0 - xi) * (1.0 + xi))
        total += wi * g
    return half * total


def _segment_chain(data: CubicData, points: list[complex], n: int) -> complex:
    return sum(_gj_segment(data, a, b, n) for a, b in zip(points, points[1:]))


def kappa_pair(A: float, want_hat: bool = True) -> KappaPair:
    """Period integrals kappa^2 and kappa_hat^2 of f0^{1/2}.

    Both are (2/(pi*i)) times an integral between turning points, the first
    over the z1/z2 cycle, the second from z0 to z1 (split at z2 when all
    three roots are collinear).  The cycle orientation is the one that
    reproduces the published sign table on both sides of A_CRIT; it is
    pinned by the identity Im alpha0 = (pi/4) kappa^2 in the conjugate-pair
    regime (see tests).
    """
    A = float(A)
    if abs(A - A_CRIT) < 1.0e-6:
        if want_hat:
            raise GeometryError("coalescing turning points")
        return KappaPair(0.0 + 0.0j, None, 0.0, coalescing=True)
    data = cubic_roots(A)
    pref = 2.0 / (math.pi * 1.0j)

    def both(n: int) -> tuple[complex, complex]:
        if data.z1.imag > 0.0:
            # conjugate pair: the segment rides the right side of z1's cut
            k2 = pref * _segment_chain(data, [data.z1, data.z2], n)
            hat = pref * _segment_chain(data, [data.z0, data.z1], n)
        else:
            # collinear roots: cycle orientation flips relative to the
            # conjugate regime (calibrated against the alpha0 identity)
            k2 = pref * _segment_chain(data, [data.z2, data.z1], n)
            hat = pref * _segment_chain(data, [data.z0, data.z2, data.z1], n)
        return k2, hat

    k2_a, hat_a = both(_GJ_NODES)
    k2_b, hat_b = both(_GJ_NODES // 2)
    err = max(abs(k2_a - k2_b), abs(hat_a - hat_b))
    return KappaPair(k2_a, hat_a, err)


def find_C0() -> float:
    """Root of Im kappa_hat^2 on [1.5, 2.5], bisection cross-checked by secant."""

    def g(A: float) -> float:
        return kappa_pair(A).kappa_hat2.imag

    lo, hi = 1.5, 2.5
    glo, ghi = g(lo), g(hi)
    if not (glo > 0.0 > ghi):
        raise GeometryError("sign structure violated")
    a, b, ga = lo, hi, glo
    while b - a > 1.0e-13:
        m = 0.5 * (a + b)
        gm = g(m)
        if gm == 0.0:
            a = b = m
            break
        if (gm > 0.0) == (ga > 0.0):
            a, ga = m, gm
        else:
            b = m
    bis = 0.5 * (a + b)
    # independent secant refinement from the original bracket
    x0, x1, f0, f1 = lo, hi, glo, ghi
    for _ in range(60):
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not lo <= x2 <= hi:
            x2 = 0.5 * (x0 + x1)
        f2 = g(x2)
        x0, f0, x1, f1 = x1, f1, x2, f2
        if abs(x1 - x0) < 1.0e-14:
            break
    if abs(bis - x1) > 1.0e-12:
        raise GeometryError("sign structure violated")
    return bis


@lru_cache(maxsize=1)
def C0() -> float:
    return find_C0()


def _ray_theta(data: CubicData, theta: float | None) -> float:
    """Pick the outgoing direction for z1 -> infinity contours.

    The path z1 + e^{i theta} u^2 must stay clear of the other turning
    points, the origin, and the downward cuts; theta = 2*pi/5 works for
    every real A, but the reselection logic is part of the contract.
    """
    scale = 1.0 + max(abs(data.z0), abs(data.z1), abs(data.z2))
    candidates = (
        [theta]
        if theta is not None
        else [2.0 * math.pi / 5.0 + k * math.pi / 20.0 for k in (0, 1, -1, 2, -2, 3, 4)]
    )
    for th in candidates:
        if not 0.0 <= th <= 4.0 * math.pi / 5.0:
            continue
        e = cmath.exp(1j * th)
        ok = True
        for obstacle in (data.z0, data.z2, 0.0):
            # distance from the curve z1 + e u^2 (u in [0, 40]) to the obstacle
            d = min(
                abs(data.z1 + e * u * u - obstacle) for u in np.linspace(0.0, 40.0, 4001)
            )
            if d < 1.0e-3 * scale:
                ok = False
                break
        if ok:
            return th
    raise GeometryError("contour obstruction")


@lru_cache(maxsize=4)
def _gl_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _quad_ray(func) -> complex:
    # fixed Gauss-Legendre panels out to u = sqrt(_TAIL_RADIUS); the u^2
    # substitution makes the integrand analytic at u = 0, and panel growth
    # tracks its algebraic decay, so 200 nodes per panel hit machine level
    x, w = _gl_rule(_GL_NODES)
    total = 0.0 + 0.0j
    for a, b in zip(_RAY_PANELS, _RAY_PANELS[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        total += half * sum(wi * func(mid + half * xi) for xi, wi in zip(x, w))
    return total


def alpha0(A: float, theta: float | None = None) -> complex:
    """Regularized exponent integral from z1 to infinity.

    alpha0 = 2 * int_{z1}^{inf e^{i theta}} [ (s^3+As+1)^{1/2}
             - s^{3/2} - (A/2) s^{-1/2} ] ds  - (4/5) z1^{5/2} - 2A z1^{1/2},
    with the integral taken on s(u) = z1 + e^{i theta} u^2 out to
    |s| ~ 1e6 and a three-term closed-form tail beyond.
    """
    A = float(A)
    data = cubic_roots(A)
    th = _ray_theta(data, theta)
    e = cmath.exp(1j * th)
    u_max = math.sqrt(_TAIL_RADIUS)

    switch = 10.0 * (1.0 + abs(A))

    def integrand(u: float) -> complex:
        s = data.z1 + e * u * u
        if abs(s) < switch:
            diff = 0.5 * f0_sqrt(s, data) - s ** 1.5 - 0.5 * A * s ** -0.5
        else:
            # same quantity rewritten without the ~|s|^3 cancellation:
            # with x = A/s^2 + 1/s^3 and r = sqrt(1+x),
            # diff = s^{3/2} [ s^{-3} - (A/2) s^{-2} x/(1+r) ] / (1+r)
            x = (A + 1.0 / s) / (s * s)
            r = cmath.sqrt(1.0 + x)
            diff = s ** 1.5 * (s ** -3.0 - 0.5 * A * s ** -2.0 * x / (1.0 + r)) / (1.0 + r)
        return diff * 2.0 * e * u

    s_max = data.z1 + e * u_max * u_max
    tail = (
        s_max ** -0.5
        - (A * A / 12.0) * s_max ** -1.5
        - (A / 10.0) * s_max ** -2.5
        + ((A ** 3 / 16.0 - 0.125) * 2.0 / 7.0) * s_max ** -3.5
        + (A * A / 24.0) * s_max ** -4.5
    )
    head = _quad_ray(integrand)
    return 2.0 * (head + tail) - 0.8 * data.z1 ** 2.5 - 2.0 * A * data.z1 ** 0.5


def alpha1_parts(A: float, theta: float | None = None) -> tuple[complex, complex, complex]:
    """(alpha11, alpha12_plus, alpha12_minus): first-correction integrals.

    alpha11  = int_{z1}^{inf} f0^{-1/2} dz
    alpha12s = -sgn(b) * int_{z1}^{inf} dz / (z f0^{1/2})
    on the same regularized ray as alpha0, with closed-form tails.
    """
    A = float(A)
    data = cubic_roots(A)
    th = _ray_theta(data, theta)
    e = cmath.exp(1j * th)
    u_max = math.sqrt(_TAIL_RADIUS)

    def integrand11(u: float) -> complex:
        s = data.z1 + e * u * u
        return 2.0 * e * u / f0_sqrt(s, data)

    def integrand12(u: float) -> complex:
        s = data.z1 + e * u * u
        return 2.0 * e * u / (s * f0_sqrt(s, data))

    s_max = data.z1 + e * u_max * u_max
    a11 = (
        _quad_ray(integrand11)
        + s_max ** -0.5
        - (A / 10.0) * s_max ** -2.5
        - (1.0 / 14.0) * s_max ** -3.5
    )
    base12 = (
        _quad_ray(integrand12)
        + (1.0 / 3.0) * s_max ** -1.5
        - (A / 14.0) * s_max ** -3.5
    )
    return a11, -base12, base12


@lru_cache(maxsize=512)
def alpha_set(A: float) -> AlphaSet:
    a11, a12p, a12m = alpha1_parts(A)
    return AlphaSet(float(A), alpha0(A), a11, a12p, a12m)


def alpha1(A: float, sgnb: int, B1: float = 0.0) -> complex:
    """alpha1 = 2 B1 alpha11 + alpha12(A, sgn b)."""
    if sgnb not in (1, -1):
        raise ValueError("sgnb must be +1 or -1")
    s = alpha_set(A)
    part = s.alpha12_plus if sgnb > 0 else s.alpha12_minus
    return 2.0 * B1 * s.alpha11 + part


def lambda0_and_B1(s1_abs: float) -> tuple[float, float, float, float]:
    """(Lambda0_plus, Lambda0_minus, B1_plus, B1_minus) at A = C0.

    B1_pm   = (log|s1| - 2 Re alpha12(C0, pm)) / (4 Re alpha11(C0))
    Lambda0 = the same expression with log|s1| replaced by -log 2, the
    smallest B1 for which the fingertip arccos stays in range.
    """
    if s1_abs <= 0.0:
        raise ValueError("s1_abs must be positive")
    s = alpha_set(C0())
    den = 4.0 * s.alpha11.real
    if abs(den) < 1.0e-12:
        raise GeometryError("degenerate inversion")
    lam_p = (-math.log(2.0) - 2.0 * s.alpha12_plus.real) / den
    lam_m = (-math.log(2.0) - 2.0 * s.alpha12_minus.real) / den
    b1_p = (math.log(s1_abs) - 2.0 * s.alpha12_plus.real) / den
    b1_m = (math.log(s1_abs) - 2.0 * s.alpha12_minus.real) / den
    return lam_p, lam_m, b1_p, b1_m
