"""Real-line integration of y'' = 6 y^2 + t with pole-aware continuation.

Solutions hit double poles y ~ (t-p)^{-2} at finite t.  The integrator runs
an adaptive RK45 kernel until blowup, fits the local Laurent data (p, H)
to the pre-blowup tail, restarts on the far side of the pole from the
series, and keeps going.  Zeros of y are bracketed on accepted steps and
refined on a quintic dense interpolant.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from painleve1 import backend

__all__ = [
    "OdeCoreError",
    "IntegratorOptions",
    "RealState",
    "PoleDatum",
    "ZeroDatum",
    "Trajectory",
    "laurent_coeffs",
    "laurent_eval",
    "restart_from_pole",
    "fit_pole",
    "integrate",
    "find_zeros",
    "seed_special_solution",
    "tritronquee_series",
]

_SQRT6 = math.sqrt(6.0)


class OdeCoreError(RuntimeError):
    pass


@dataclass(frozen=True)
class IntegratorOptions:
    rtol: float = 1e-10
    atol: float = 1e-12
    y_blow: float = 1e6
    max_steps: int = 2_000_000
    max_poles: int = 500
    zero_tol: float = 1e-10


@dataclass(frozen=True)
class RealState:
    t: float
    y: float
    dy: float


@dataclass(frozen=True)
class PoleDatum:
    p: float
    H: float


@dataclass(frozen=True)
class ZeroDatum:
    r: float
    b: float
    side: str  # "minus" (falling crossing) or "plus" (rising crossing)
    index: int  # ordinal of the pole gap holding the zero; 0 = left of pole 1


@dataclass
class Trajectory:
    ts: np.ndarray
    ys: np.ndarray
    dys: np.ndarray
    poles: list[PoleDatum] = field(default_factory=list)
    zeros: list[ZeroDatum] = field(default_factory=list)
    segments: list[tuple[int, int]] = field(default_factory=list)  # node slices
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = ["t,y,dy"]
        for t, y, dy in zip(self.ts, self.ys, self.dys):
            lines.append("%.15e,%.15e,%.15e" % (t, y, dy))
        return "\n".join(lines) + "\n"

    def events_json(self) -> str:
        events = [{"type": "pole", "p": p.p, "H": p.H} for p in self.poles]
        events += [
            {"type": "zero", "r": z.r, "b": z.b, "side": z.side, "index": z.index}
            for z in self.zeros
        ]
        events.sort(key=lambda e: e.get("p", e.get("r")))
        return json.dumps(events)


def laurent_coeffs(p: float, H: float, nmax: int) -> np.ndarray:
    """Coefficients a_{-2}..a_{nmax} of y = sum a_k (t-p)^k at a double pole.

    a_{-2}=1, a_{-1}=a_0=a_1=0, a_2=-p/10, a_3=-1/6, a_4=H, and for m >= 3
    (m+5)(m-2) a_{m+2} = 6 sum_{i=-1}^{m+1} a_i a_{m-i}; the resonance at
    m=2 is automatically satisfied, which is what makes H free.
    """
    a = np.zeros(nmax + 3)  # a[k+2] holds a_k
    a[0] = 1.0
    if nmax >= 2:
        a[4] = -p / 10.0
    if nmax >= 3:
        a[5] = -1.0 / 6.0
    if nmax >= 4:
        a[6] = H
    for m in range(3, nmax - 1):
        s = 0.0
        for i in range(-1, m + 2):
            s += a[i + 2] * a[m - i + 2]
        a[m + 4] = 6.0 * s / ((m + 5) * (m - 2))
    return a


def laurent_eval(p: float, H: float, t: float, nmax: int = 16) -> tuple[float, float]:
    """(y, y') from the truncated pole series at t."""
    a = laurent_coeffs(p, H, nmax)
    tau = t - p
    y = a[0] / (tau * tau)
    dy = -2.0 * a[0] / (tau * tau * tau)
    for k in range(2, nmax + 1):  # a_{-1}..a_1 vanish
        c = a[k + 2]
        if c != 0.0:
            y += c * tau ** k
            dy += k * c * tau ** (k - 1)
    return y, dy


def _pole_spacing_estimate(p: float) -> float:
    # on the far negative axis consecutive poles sit ~ 2 pi 24^{-1/4} |t|^{-1/4}
    # apart; elsewhere gaps level out at order one
    if p < -1.0:
        return 2.0 * math.pi * 24.0 ** -0.25 * (-p) ** -0.25
    return 2.5


def _series_radius_estimate(p: float, H: float, nmax: int = 16) -> float:
    a = laurent_coeffs(p, H, nmax)
    floor = 1e-30 * max(1.0, abs(p), abs(H))
    ratios = []
    for k in range(nmax - 4, nmax + 1):
        if abs(a[k + 2]) > floor and abs(a[k + 1]) > floor:
            ratios.append(abs(a[k + 1] / a[k + 2]))
    spacing = _pole_spacing_estimate(p)
    if len(ratios) < 2:
        return spacing
    # coefficient ratios refine the spacing proxy but cannot overrule it:
    # vanishing high-order terms (small p, H) make them meaningless
    return min(max(float(np.median(ratios)), 0.4 * spacing), 4.0 * spacing)


def restart_from_pole(pole: PoleDatum, offset: float) -> RealState:
    """State (p+offset, y, y') from the Laurent series, adaptively truncated."""
    if offset == 0.0:
        raise ValueError("offset must be nonzero")
    if abs(offset) > 0.5 * _series_radius_estimate(pole.p, pole.H):
        raise OdeCoreError("offset too large")
    nmax = 16
    while True:
        y, dy = laurent_eval(pole.p, pole.H, pole.p + offset, nmax)
        a = laurent_coeffs(pole.p, pole.H, nmax)
        tail = abs(a[nmax + 2] * offset ** nmax)
        if tail < 1e-16 * max(abs(y), 1.0):
            return RealState(pole.p + offset, y, dy)
        nmax += 8
        if nmax > 64:
            raise OdeCoreError("offset too large")


def _laurent_eval_adaptive(p: float, h: float, t: float) -> float:
    nmax = 12
    while True:
        y, _ = laurent_eval(p, h, t, nmax)
        a = laurent_coeffs(p, h, nmax)
        if abs(a[nmax + 2] * (t - p) ** nmax) < 1e-14 * max(abs(y), 1.0) or nmax >= 48:
            return y
        nmax += 8


def _newton_pole(t1: float, y1: float, t2: float, y2: float,
                 direction: float) -> PoleDatum:
    # the sample nearest the pole pins p (y ~ (t-p)^{-2} dominates); the
    # far sample pins H, whose series term H (t-p)^4 is invisible up close
    p = t1 + direction / math.sqrt(y1)
    h = 0.0

    def f(pv, hv):
        return (
            (_laurent_eval_adaptive(pv, hv, t1) - y1) / abs(y1),
            (_laurent_eval_adaptive(pv, hv, t2) - y2) / max(abs(y2), 1.0),
        )

    for _ in range(40):
        f1, f2 = f(p, h)
        dp = 1e-8 * abs(t1 - p)
        dh = 1e-6 * (1.0 + abs(h))
        g1p, g2p = f(p + dp, h)
        g1h, g2h = f(p, h + dh)
        j11, j12 = (g1p - f1) / dp, (g1h - f1) / dh
        j21, j22 = (g2p - f2) / dp, (g2h - f2) / dh
        det = j11 * j22 - j12 * j21
        if det == 0.0:
            break
        step_p = (f1 * j22 - f2 * j12) / det
        step_h = (f2 * j11 - f1 * j21) / det
        p -= step_p
        h -= step_h
        if abs(step_p) < 1e-14 * (1.0 + abs(p)) and abs(step_h) < 1e-11 * (1.0 + abs(h)):
            break
    f1, f2 = f(p, h)
    if not (math.hypot(f1, f2) < 1e-7 and direction * (p - t1) > 0.0):
        raise OdeCoreError("not a PI pole")
    return PoleDatum(p, h)


def fit_pole(ts: np.ndarray, ys: np.ndarray, dys: np.ndarray,
             rtol: float = 1e-10, atol: float = 1e-12) -> PoleDatum:
    """Fit (p, H) to a blowup tail; validates on an intermediate sample."""
    ts = np.asarray(ts, dtype=float)
    ys = np.asarray(ys, dtype=float)
    dys = np.asarray(dys, dtype=float)
    if len(ts) < 3 or ys[-1] <= 0.0:
        raise OdeCoreError("not a PI pole")
    direction = 1.0 if ts[-1] > ts[0] else -1.0
    # near sample: pole term dominant, but short of cancellation trouble
    idx = len(ts) - 1
    while idx > 0 and ys[idx] > 1e4:
        idx -= 1
    if ys[idx] < 10.0:
        raise OdeCoreError("not a PI pole")
    # far sample: back off until H (t-p)^4 is measurable, staying well
    # inside the series radius
    p_guess = ts[idx] + direction / math.sqrt(ys[idx])
    y_far_target = max(8.0, (0.15 * _pole_spacing_estimate(p_guess)) ** -2)
    jdx = idx
    while jdx > 0 and ys[jdx - 1] > y_far_target and ys[jdx - 1] < ys[jdx]:
        jdx -= 1
    t2, y2 = float(ts[jdx]), float(ys[jdx])
    if jdx == idx or y2 > 4.0 * y_far_target:
        # the supplied tail never cools enough for the H term to register;
        # integrate away from the pole to manufacture a cool sample, kept
        # well inside the series radius
        reach = 0.28 * _pole_spacing_estimate(p_guess)
        _, tse, yse, _ = backend.integrate_pi(
            float(ts[0]), float(ys[0]), float(dys[0]),
            float(ts[0]) - direction * reach,
            min(rtol, 1e-11), min(atol, 1e-13), 1e6, 2_000_000)
        sel = np.where((yse >= y_far_target)
                       & (np.abs(tse - p_guess) <= reach))[0]
        if len(sel):
            k = sel[np.argmin(yse[sel])]
            t2, y2 = float(tse[k]), float(yse[k])
    if t2 == float(ts[idx]):
        if idx == 0:
            raise OdeCoreError("not a PI pole")
        t2, y2 = float(ts[idx - 1]), float(ys[idx - 1])
    pole = _newton_pole(float(ts[idx]), float(ys[idx]), t2, y2, direction)
    # independent check against an intermediate sample
    kdx = idx
    while kdx > 0 and ys[kdx] > 1e3 and ys[kdx - 1] < ys[kdx]:
        kdx -= 1
    if kdx != idx and abs(ts[kdx] - t2) > 1e-12 and ys[kdx] > 10.0:
        ycheck = _laurent_eval_adaptive(pole.p, pole.H, float(ts[kdx]))
        if abs(ycheck - ys[kdx]) > 1e-5 * abs(ys[kdx]):
            raise OdeCoreError("not a PI pole")
    return pole


def _hermite_quintic(t0, y0, v0, t1, y1, v1):
    # two-point quintic using the exact second derivatives y'' = 6 y^2 + t
    h = t1 - t0
    a0 = 6.0 * y0 * y0 + t0
    a1 = 6.0 * y1 * y1 + t1

    def val(t):
        x = (t - t0) / h
        x2, x3 = x * x, x * x * x
        x4, x5 = x3 * x, x3 * x * x
        h0 = 1.0 - 10.0 * x3 + 15.0 * x4 - 6.0 * x5
        h1 = x - 6.0 * x3 + 8.0 * x4 - 3.0 * x5
        h2 = 0.5 * x2 - 1.5 * x3 + 1.5 * x4 - 0.5 * x5
        h3 = 10.0 * x3 - 15.0 * x4 + 6.0 * x5
        h4 = -4.0 * x3 + 7.0 * x4 - 3.0 * x5
        h5 = 0.5 * x3 - x4 + 0.5 * x5
        return (y0 * h0 + h * v0 * h1 + h * h * a0 * h2
                + y1 * h3 + h * v1 * h4 + h * h * a1 * h5)

    def deriv(t):
        x = (t - t0) / h
        x2, x3, x4 = x * x, x * x * x, x * x * x * x
        d0 = -30.0 * x2 + 60.0 * x3 - 30.0 * x4
        d1 = 1.0 - 18.0 * x2 + 32.0 * x3 - 15.0 * x4
        d2 = x - 4.5 * x2 + 6.0 * x3 - 2.5 * x4
        d3 = 30.0 * x2 - 60.0 * x3 + 30.0 * x4
        d4 = -12.0 * x2 + 28.0 * x3 - 15.0 * x4
        d5 = 1.5 * x2 - 4.0 * x3 + 2.5 * x4
        return (y0 * d0 + h * v0 * d1 + h * h * a0 * d2
                + y1 * d3 + h * v1 * d4 + h * h * a1 * d5) / h

    def deriv2(t):
        x = (t - t0) / h
        x2, x3 = x * x, x * x * x
        e0 = -60.0 * x + 180.0 * x2 - 120.0 * x3
        e1 = -36.0 * x + 96.0 * x2 - 60.0 * x3
        e2 = 1.0 - 9.0 * x + 18.0 * x2 - 10.0 * x3
        e3 = 60.0 * x - 180.0 * x2 + 120.0 * x3
        e4 = -24.0 * x + 84.0 * x2 - 60.0 * x3
        e5 = 3.0 * x - 12.0 * x2 + 10.0 * x3
        return (y0 * e0 + h * v0 * e1 + h * h * a0 * e2
                + y1 * e3 + h * v1 * e4 + h * h * a1 * e5) / (h * h)

    return val, deriv, deriv2


def dense_eval(traj: Trajectory, t: float, second: bool = False):
    """(y, y') anywhere inside a stored segment, via the quintic interpolant.

    With second=True the interpolant's y'' is appended, giving a residual
    probe independent of the equation itself.
    """
    for lo, hi in traj.segments:
        ts = traj.ts[lo:hi]
        if len(ts) < 2:
            continue
        ascending = ts[1] > ts[0]
        if ascending and not ts[0] <= t <= ts[-1]:
            continue
        if not ascending and not ts[-1] <= t <= ts[0]:
            continue
        i = np.searchsorted(ts, t) if ascending else len(ts) - np.searchsorted(ts[::-1], t)
        i = min(max(int(i), 1), len(ts) - 1)
        val, deriv, deriv2 = _hermite_quintic(
            ts[i - 1], traj.ys[lo + i - 1], traj.dys[lo + i - 1],
            ts[i], traj.ys[lo + i], traj.dys[lo + i])
        if second:
            return val(t), deriv(t), deriv2(t)
        return val(t), deriv(t)
    raise ValueError("t outside stored segments")


def _refine_zeros(ts, ys, dys, zero_tol):
    found = []
    for i in range(len(ts) - 1):
        y0, y1 = ys[i], ys[i + 1]
        if y0 == 0.0:
            found.append((ts[i], dys[i]))
        elif y0 * y1 < 0.0:
            val, deriv, _ = _hermite_quintic(ts[i], y0, dys[i], ts[i + 1], y1, dys[i + 1])
            lo, hi = (ts[i], ts[i + 1]) if ts[i + 1] > ts[i] else (ts[i + 1], ts[i])
            r = brentq(val, lo, hi, xtol=1e-14, rtol=8.9e-16)
            found.append((float(r), float(deriv(r))))
    if len(ts) and ys[-1] == 0.0:
        found.append((ts[-1], dys[-1]))
    return [(r, b) for r, b in found]


def _tag_zeros(raw_zeros, boundaries):
    """Attach side and gap index to refined zero crossings.

    With poles present, a zero's index is the ordinal of the inter-pole gap
    containing it (0 when left of the first pole) and its side follows the
    crossing direction, which for a two-zero gap reproduces left-to-right
    pairing.  Without poles, pairs are counted from the left.
    """
    if boundaries:
        return [
            ZeroDatum(r, b, "minus" if b < 0.0 else "plus",
                      bisect.bisect_left(boundaries, r))
            for r, b in raw_zeros
        ]
    return [
        ZeroDatum(r, b, "minus" if k % 2 == 0 else "plus", k // 2 + 1)
        for k, (r, b) in enumerate(raw_zeros)
    ]


def integrate(start: RealState, t_end: float, opts: IntegratorOptions | None = None,
              *, boundary_poles: tuple[float, ...] = ()) -> Trajectory:
    """Integrate through poles from start to t_end, collecting events.

    Accepted nodes within the pole exclusion window |t - p| < delta of a
    detected pole are not emitted; the trajectory continues at p + delta
    (direction-signed) from the fitted series.  boundary_poles lists pole
    locations known a priori (e.g. the seed pole of a series-started run)
    so gap indexing can count them.
    """
    opts = opts or IntegratorOptions()
    all_t: list[np.ndarray] = []
    all_y: list[np.ndarray] = []
    all_dy: list[np.ndarray] = []
    segments: list[tuple[int, int]] = []
    poles: list[PoleDatum] = []
    raw_zeros: list[tuple[float, float]] = []
    state = start
    direction = 1.0 if t_end >= start.t else -1.0
    nodes = 0
    nsteps = 0
    if t_end == start.t:
        ts = np.array([start.t])
        traj = Trajectory(ts, np.array([start.y]), np.array([start.dy]))
        traj.segments = [(0, 1)]
        traj.meta = {"rtol": opts.rtol, "atol": opts.atol, "steps": 0}
        return traj

    for _ in range(opts.max_poles + 1):
        status, ts, ys, dys = backend.integrate_pi(
            state.t, state.y, state.dy, t_end,
            opts.rtol, opts.atol, opts.y_blow, opts.max_steps)
        nsteps += len(ts)
        if status == backend.STATUS_NEG_BLOWUP:
            raise OdeCoreError("blowup unclassified")
        if status == backend.STATUS_STIFF and (len(ys) < 3 or ys[-1] < 1e3):
            raise OdeCoreError("stiffness failure")

        if status == backend.STATUS_OK:
            raw_zeros += _refine_zeros(ts, ys, dys, opts.zero_tol)
            all_t.append(ts)
            all_y.append(ys)
            all_dy.append(dys)
            segments.append((nodes, nodes + len(ts)))
            nodes += len(ts)
            break

        # pole approach: fit, trim the exclusion window, restart beyond it
        pole = fit_pole(ts, ys, dys, opts.rtol, opts.atol)
        delta = 0.05 * _pole_spacing_estimate(pole.p)
        keep = np.abs(ts - pole.p) >= delta
        raw_zeros += _refine_zeros(ts[keep], ys[keep], dys[keep], opts.zero_tol)
        all_t.append(ts[keep])
        all_y.append(ys[keep])
        all_dy.append(dys[keep])
        segments.append((nodes, nodes + int(keep.sum())))
        nodes += int(keep.sum())
        poles.append(pole)
        if direction * (pole.p + direction * delta - t_end) >= 0.0:
            break  # the pole sits at or beyond the target
        state = restart_from_pole(pole, direction * delta)
    else:
        raise OdeCoreError("stiffness failure")

    traj = Trajectory(
        np.concatenate(all_t) if all_t else np.empty(0),
        np.concatenate(all_y) if all_y else np.empty(0),
        np.concatenate(all_dy) if all_dy else np.empty(0),
    )
    traj.segments = segments
    traj.poles = poles
    raw_zeros.sort(key=lambda z: z[0])
    traj.zeros = _tag_zeros(
        raw_zeros, sorted({p.p for p in poles} | set(boundary_poles)))
    traj.meta = {"rtol": opts.rtol, "atol": opts.atol, "steps": nsteps}
    return traj


def find_zeros(traj: Trajectory) -> list[ZeroDatum]:
    """Zeros collected during integration, ordered left to right."""
    return list(traj.zeros)


def tritronquee_series(t: float, nterms: int = 40) -> tuple[float, float, float]:
    """(y, y', smallest term ratio) of the pole-free branch at t < 0.

    y = -sqrt(-t/6) (1 + sum c_k x^k), x = (-t)^{-5/2}; the series is
    asymptotic, so summation stops at the smallest term.
    """
    if t >= 0.0:
        raise OdeCoreError("seed out of range")
    s = -t
    x = s ** -2.5
    c = [0.0, 1.0 / (8.0 * _SQRT6)]
    for m in range(1, nterms):
        conv = sum(c[i] * c[m + 1 - i] for i in range(1, m + 1))
        c.append(-(c[m] * (25.0 * m * m - 1.0) / (4.0 * _SQRT6) + conv) / 2.0)
    v = 0.0
    dvdx = 0.0
    smallest = math.inf
    for k in range(1, nterms + 1):
        term = c[k] * x ** k
        if abs(term) > smallest:
            break  # asymptotic tail turned around; stop at the smallest term
        smallest = abs(term)
        v += term
        dvdx += k * c[k] * x ** (k - 1)
    y = -math.sqrt(s / 6.0) * (1.0 + v)
    # d/dt = -d/ds; dv/dt = dv/dx * (5/2) s^{-7/2}
    dy = (0.5 / math.sqrt(6.0 * s)) * (1.0 + v) - math.sqrt(s / 6.0) * 2.5 * s ** -3.5 * dvdx
    return y, dy, smallest


def seed_special_solution(kind: str, t_start: float,
                          pole: PoleDatum | None = None) -> RealState:
    """Starting state for the named solutions.

    kind "tritronquee": seeds on the pole-free negative axis at -|t_start|
    from the algebraic series.  kind "pole_seeded": delegates to
    restart_from_pole(pole, t_start - pole.p).
    """
    if kind == "tritronquee":
        t0 = -abs(t_start)
        y, dy, smallest = tritronquee_series(t0)
        if smallest > 1e-10:
            raise OdeCoreError("seed out of range")
        return RealState(t0, y, dy)
    if kind == "pole_seeded":
        if pole is None:
            raise ValueError("pole_seeded requires a PoleDatum")
        return restart_from_pole(pole, t_start - pole.p)
    raise ValueError("unknown special solution kind")
