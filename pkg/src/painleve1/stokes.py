"""Stokes multipliers of the zero-pinned linear problem, by monodromy.

A real zero of a solution, together with its slope, pins the scalar problem

    phi''(lam) = Q(lam) phi,   Q = 4 lam^3 + 2 lam r + b^2 - b/lam + 3/(4 lam^2),

whose five canonical sectors at infinity carry normalized recessive
solutions.  WKB jets are planted on the anti-Stokes directions of a circle
|lam| = R, transported along the circle with the compiled kernel, and the
multipliers come out of Wronskian ratios evaluated at neutral directions
(where neither exponential type dominates).  Exponents are tracked in log
form throughout, so nothing overflows even at b ~ 30.

Radial phase conventions are literal: the angle of lam^{1/2}, lam^{5/2}
and the prefactor lam^{-3/4} follows the jet's own ray angle continuously
over theta in [-2pi/5, 2pi], not a principal branch.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from painleve1 import backend

__all__ = [
    "StokesError",
    "MonodromyConfig",
    "StokesVector",
    "potential",
    "canonical_pair",
    "compute_stokes",
    "classify_from_stokes",
]


class StokesError(Exception):
    pass


def potential(lam: complex, r: float, b: float) -> complex:
    """Q(lam) of the scalar problem pinned at a zero with data (r, b)."""
    if lam == 0:
        raise StokesError("apparent singularity")
    lam = complex(lam)
    return 4.0 * lam ** 3 + 2.0 * lam * r + b * b - b / lam + 0.75 / (lam * lam)


@dataclass
class MonodromyConfig:
    R: float | None = None  # matching radius; None selects from (r, b)
    trunc: int = 8  # prefactor series order in lam^{-1/2}
    ode_tol: float = 1e-11
    max_steps: int = 40_000_000
    residual_threshold: float = 1e-6
    check_radius_doubling: bool = False


@dataclass
class StokesVector:
    s: dict[int, complex]
    residual_constraint: float
    residual_symmetry: float
    residual_wronskian: float
    meta: dict = field(default_factory=dict)

    def __getitem__(self, k: int) -> complex:
        return self.s[((k + 2) % 5) - 2]


def _matching_radius(r: float, b: float) -> float:
    # all turning points of Q inside; invariant demands a factor-2 margin
    roots = np.roots([4.0, 0.0, 2.0 * r, b * b, -b, 0.75])
    return max(6.0, 2.2 * float(np.max(np.abs(roots))))


def _prefactor_coeffs(r: float, b: float, sigma: int, n: int) -> list[complex]:
    """Series c_m of P(mu) with phi = lam^{-3/4} e^{sigma wt} P, mu = lam^{-1/2}.

    wt = (4/5)lam^{5/2} + r lam^{1/2} - (b^2/2) lam^{-1/2} carries the whole
    b^2-exponent; leaving it in the prefactor instead makes intermediate
    terms reach e^{b^2 mu /2} and destroys the cancellation.
    """
    c = [0j] * (n + 1)
    c[0] = 1.0 + 0j

    def g(j):
        return c[j] if j >= 0 else 0j

    for m in range(0, n):
        rhs = (
            (0.25 * r * r + b) * g(m - 2)
            - sigma * r * (1.0 + 0.5 * (m - 3)) * g(m - 3)
            + (0.25 * (m - 4) * (m + 1) + 9.0 / 16.0 + 0.25 * r * b * b) * g(m - 4)
            - sigma * 0.25 * b * b * (m - 2) * g(m - 5)
            + (b ** 4 / 16.0) * g(m - 6)
        )
        c[m + 1] = rhs / (2.0 * sigma * (m + 1))
    return c


def _jet(R: float, theta: float, r: float, b: float, sigma: int,
         trunc: int, sign: float) -> tuple[complex, complex, complex]:
    """(zlog, phi, dphi) at lam = R e^{i theta}, literal-angle branches."""
    lam12 = math.sqrt(R) * cmath.exp(0.5j * theta)
    lam0 = R * cmath.exp(1j * theta)
    mu = 1.0 / lam12
    c = _prefactor_coeffs(r, b, sigma, trunc)
    P = 0j
    dPdmu = 0j
    for m in range(len(c) - 1, 0, -1):
        P = (P + c[m]) * mu
        dPdmu = (dPdmu + m * c[m]) * mu
    P += c[0]
    dPdmu /= mu
    dP = -0.5 * mu ** 3 * dPdmu
    wt = 0.8 * lam12 ** 5 + r * lam12 - 0.5 * b * b * mu
    dwt = 2.0 * lam12 ** 3 + 0.5 * r / lam12 + 0.25 * b * b * mu ** 3
    zlog = (sigma * wt - 0.75 * (math.log(R) + 1j * theta)
            - 0.5 * math.log(2.0))
    if sign < 0:
        zlog += 1j * math.pi
    v2 = (sigma * dwt - 0.75 / lam0) * P + dP
    return zlog, P, v2


def canonical_pair(lam: complex, r: float, trunc: int = 8, b: float = 0.0):
    """Normalized (recessive, dominant) jets at lam, each (zlog, phi, dphi).

    The jets are the two exponential types lam^{-3/4}e^{+-wt}/sqrt(2); which
    one is recessive follows the sign of Re wt at lam.  Values are scaled:
    the solution is e^{zlog} (phi, dphi).
    """
    lam = complex(lam)
    R, theta = abs(lam), cmath.phase(lam)
    lam12 = math.sqrt(R) * cmath.exp(0.5j * theta)
    wt = 0.8 * lam12 ** 5 + r * lam12 - 0.5 * b * b / lam12
    if abs(wt.real) < 1e-9 * abs(wt):
        raise StokesError("ambiguous dominance")
    jm = _jet(R, theta, r, b, -1, trunc, +1.0)
    jp = _jet(R, theta, r, b, +1, trunc, +1.0)
    return (jm, jp) if wt.real > 0.0 else (jp, jm)


def _neutral_angle(R: float, r: float, jlo: float, jhi: float) -> float:
    # zero of the leading Re exponent between consecutive anti-Stokes rays
    def g(th):
        return (0.8 * R ** 2.5 * math.cos(2.5 * th)
                + r * math.sqrt(R) * math.cos(0.5 * th))

    lo, hi = 0.4 * math.pi * jlo, 0.4 * math.pi * jhi
    return brentq(g, lo + 1e-12, hi - 1e-12, xtol=1e-13)


def _log_wronskian(a, bjet) -> complex:
    za, v1a, v2a = a
    zb, v1b, v2b = bjet
    w = v1a * v2b - v2a * v1b
    if w == 0:
        raise StokesError("monodromy not converged")
    return za + zb + cmath.log(w)


def compute_stokes(r: float, b: float,
                   cfg: MonodromyConfig | None = None) -> StokesVector:
    """All five multipliers s_{-2}..s_2 for the solution with zero data (r, b).

    Each jet u_j (recessive on the ray arg lam = 2 pi j / 5) is planted at
    its own ray and carried one ray backward and two forward; the recursion
    u_{k+1} = u_{k-1} + s_k u_k then gives s_k as a ratio of Wronskians,
    numerator and denominator each evaluated where both factors are valid.
    """
    cfg = cfg or MonodromyConfig()
    if b == 0.0:
        raise StokesError("degenerate scaling")
    R = cfg.R if cfg.R is not None else _matching_radius(r, b)

    def arc(state, th0, th1):
        zlog, v1, v2 = state
        nv1, nv2, dz, status, _ = backend.transport_arc(
            r, b, R, th0, th1, v1, v2, cfg.ode_tol, cfg.max_steps)
        if status != backend.STATUS_OK:
            raise StokesError("monodromy not converged")
        return zlog + dz, nv1, nv2

    theta = {j: 0.4 * math.pi * j for j in range(-1, 6)}
    neutral = {j: _neutral_angle(R, r, j - 1, j) for j in range(0, 6)}

    jets = {}
    for j in range(-1, 6):
        sigma = -1 if j % 2 == 0 else +1
        sign = -1.0 if j % 2 == 0 else +1.0
        jets[j] = _jet(R, theta[j], r, b, sigma, cfg.trunc, sign)

    at_own = {}  # u_j at N_j (backward leg)
    for j in range(0, 6):
        at_own[j] = arc(jets[j], theta[j], neutral[j])
    fwd1 = {}  # u_j at N_{j+1}
    fwd2 = {}  # u_j at N_{j+2}
    for j in range(-1, 4):
        fwd1[j] = arc(jets[j], theta[j], neutral[j + 1])
        fwd2[j] = arc(fwd1[j], neutral[j + 1], neutral[j + 2])

    s5 = {}
    logw_den = {}
    for k in range(0, 5):
        num = _log_wronskian(fwd2[k - 1], at_own[k + 1])
        den = _log_wronskian(fwd1[k - 1], at_own[k])
        logw_den[k] = den
        s5[k] = cmath.exp(num - den)

    # the pair normalization fixes W[u_{k-1}, u_k] = 2 (-1)^k; the defect
    # measures jet truncation plus transport error directly
    res_w = max(abs(cmath.exp(logw_den[k]) - 2.0 * (-1.0) ** k) / 2.0
                for k in range(0, 5))

    s = {k: s5[k] for k in (0, 1, 2)}
    s[-1] = s5[4]
    s[-2] = s5[3]

    def per(k):
        return s[((k + 2) % 5) - 2]

    res_c = max(abs(per(k) - 1j * (1.0 + per(k + 2) * per(k + 3)))
                for k in range(-2, 3))
    res_s = max(abs(per(-k) + per(k).conjugate()) for k in range(0, 3))

    sv = StokesVector(
        s, res_c, res_s, res_w,
        meta={"R": R, "trunc": cfg.trunc, "ode_tol": cfg.ode_tol})
    if max(res_c, res_s) > cfg.residual_threshold:
        raise StokesError(
            "monodromy not converged: constraint %.3e symmetry %.3e "
            "wronskian %.3e at R=%.3f" % (res_c, res_s, res_w, R))
    if cfg.check_radius_doubling:
        big = MonodromyConfig(R=2.0 * R, trunc=cfg.trunc,
                              ode_tol=cfg.ode_tol, max_steps=cfg.max_steps,
                              residual_threshold=cfg.residual_threshold)
        other = compute_stokes(r, b, big)
        gap = max(abs(other.s[k] - s[k]) / max(abs(s[k]), 1.0)
                  for k in s)
        sv.meta["radius_doubling_gap"] = gap
    return sv


def classify_from_stokes(sv: StokesVector, tol: float = 1e-4) -> str:
    """A / B / C by the sign of Im s0; B means boundary within tolerance."""
    im = sv.s[0].imag
    if im > tol:
        return "A"
    if im < -tol:
        return "C"
    return "B"
