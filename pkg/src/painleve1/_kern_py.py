"""Pure-Python compute kernels: the compiled module mirrors these exactly.

Two hot loops live here: an embedded Dormand-Prince 5(4) integrator for
y'' = 6 y^2 + t on the real line (with blowup detection), and the same
stepper for the complex potential equation phi'' = Q(lambda) phi along
arcs and rays, log-rescaled so exponentially growing solutions never
overflow.  Keep the arithmetic expression-for-expression in sync with
_kern.pyx; the backend parity test compares the two.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "pure"

STATUS_OK = 0
STATUS_BLOWUP = 1
STATUS_STIFF = 2
STATUS_NEG_BLOWUP = 3

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 0.2, 0.3, 0.8, 8.0 / 9.0
_A21 = 0.2
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    35.0 / 384.0 - 5179.0 / 57600.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
)


def integrate_pi(t0, y0, dy0, t_end, rtol, atol, y_blow, max_steps):
    """Adaptive RK45 for y'' = 6 y^2 + t, stopping at t_end or at blowup.

    Returns (status, ts, ys, dys) with every accepted node included.
    status: 0 reached t_end, 1 y exceeded +y_blow, 2 step failure,
    3 y fell below -y_blow.
    """
    ts = [t0]
    ys = [y0]
    dys = [dy0]
    if t_end == t0:
        return STATUS_OK, np.array(ts), np.array(ys), np.array(dys)
    direction = 1.0 if t_end > t0 else -1.0
    t, y, v = t0, y0, dy0
    f1y, f1v = v, 6.0 * y * y + t
    h = direction * min(1e-3, abs(t_end - t0))
    status = STATUS_STIFF
    for _ in range(max_steps):
        if direction * (t + h - t_end) > 0.0:
            h = t_end - t
        # stages
        ty = y + h * _A21 * f1y
        tv = v + h * _A21 * f1v
        f2y, f2v = tv, 6.0 * ty * ty + (t + _C2 * h)
        ty = y + h * (_A31 * f1y + _A32 * f2y)
        tv = v + h * (_A31 * f1v + _A32 * f2v)
        f3y, f3v = tv, 6.0 * ty * ty + (t + _C3 * h)
        ty = y + h * (_A41 * f1y + _A42 * f2y + _A43 * f3y)
        tv = v + h * (_A41 * f1v + _A42 * f2v + _A43 * f3v)
        f4y, f4v = tv, 6.0 * ty * ty + (t + _C4 * h)
        ty = y + h * (_A51 * f1y + _A52 * f2y + _A53 * f3y + _A54 * f4y)
        tv = v + h * (_A51 * f1v + _A52 * f2v + _A53 * f3v + _A54 * f4v)
        f5y, f5v = tv, 6.0 * ty * ty + (t + _C5 * h)
        ty = y + h * (_A61 * f1y + _A62 * f2y + _A63 * f3y + _A64 * f4y + _A65 * f5y)
        tv = v + h * (_A61 * f1v + _A62 * f2v + _A63 * f3v + _A64 * f4v + _A65 * f5v)
        f6y, f6v = tv, 6.0 * ty * ty + (t + h)
        ny = y + h * (_B1 * f1y + _B3 * f3y + _B4 * f4y + _B5 * f5y + _B6 * f6y)
        nv = v + h * (_B1 * f1v + _B3 * f3v + _B4 * f4v + _B5 * f5v + _B6 * f6v)
        f7y, f7v = nv, 6.0 * ny * ny + (t + h)
        ey = h * (_E1 * f1y + _E3 * f3y + _E4 * f4y + _E5 * f5y + _E6 * f6y + _E7 * f7y)
        ev = h * (_E1 * f1v + _E3 * f3v + _E4 * f4v + _E5 * f5v + _E6 * f6v + _E7 * f7v)
        sy = atol + rtol * max(abs(y), abs(ny))
        sv = atol + rtol * max(abs(v), abs(nv))
        err = math.sqrt(0.5 * ((ey / sy) ** 2 + (ev / sv) ** 2))
        if err <= 1.0:
            t += h
            y, v = ny, nv
            f1y, f1v = f7y, f7v
            ts.append(t)
            ys.append(y)
            dys.append(v)
            if y > y_blow:
                status = STATUS_BLOWUP
                break
            if y < -y_blow:
                status = STATUS_NEG_BLOWUP
                break
            if t == t_end:
                status = STATUS_OK
                break
        fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h *= fac
        if abs(h) < 1e-14 * max(1.0, abs(t)):
            status = STATUS_STIFF
            break
    return status, np.array(ts), np.array(ys), np.array(dys)


def _transport(r, b, lam_of, dlam_of, v1, v2, rtol, max_steps):
    # phi'' = Q(lam) phi pulled back to tau in [0, 1]; state is the complex
    # pair (phi, dphi/dlam), rescaled by exp(zlog) whenever it leaves
    # [1e-30, 1e+30] so only the stored pair stays moderate
    def q_of(lam):
        return 4.0 * lam * lam * lam + 2.0 * lam * r + b * b - b / lam + 0.75 / (lam * lam)

    tau = 0.0
    zlog = 0.0
    lam = lam_of(0.0)
    dl = dlam_of(0.0)
    f11, f12 = dl * v2, dl * q_of(lam) * v1
    h = 1e-4
    status = STATUS_STIFF
    nsteps = 0
    for _ in range(max_steps):
        if tau + h > 1.0:
            h = 1.0 - tau
        lam2 = lam_of(tau + _C2 * h)
        dl2 = dlam_of(tau + _C2 * h)
        w1 = v1 + h * _A21 * f11
        w2 = v2 + h * _A21 * f12
        f21, f22 = dl2 * w2, dl2 * q_of(lam2) * w1
        lam3 = lam_of(tau + _C3 * h)
        dl3 = dlam_of(tau + _C3 * h)
        w1 = v1 + h * (_A31 * f11 + _A32 * f21)
        w2 = v2 + h * (_A31 * f12 + _A32 * f22)
        f31, f32 = dl3 * w2, dl3 * q_of(lam3) * w1
        lam4 = lam_of(tau + _C4 * h)
        dl4 = dlam_of(tau + _C4 * h)
        w1 = v1 + h * (_A41 * f11 + _A42 * f21 + _A43 * f31)
        w2 = v2 + h * (_A41 * f12 + _A42 * f22 + _A43 * f32)
        f41, f42 = dl4 * w2, dl4 * q_of(lam4) * w1
        lam5 = lam_of(tau + _C5 * h)
        dl5 = dlam_of(tau + _C5 * h)
        w1 = v1 + h * (_A51 * f11 + _A52 * f21 + _A53 * f31 + _A54 * f41)
        w2 = v2 + h * (_A51 * f12 + _A52 * f22 + _A53 * f32 + _A54 * f42)
        f51, f52 = dl5 * w2, dl5 * q_of(lam5) * w1
        lam6 = lam_of(tau + h)
        dl6 = dlam_of(tau + h)
        w1 = v1 + h * (_A61 * f11 + _A62 * f21 + _A63 * f31 + _A64 * f41 + _A65 * f51)
        w2 = v2 + h * (_A61 * f12 + _A62 * f22 + _A63 * f32 + _A64 * f42 + _A65 * f52)
        f61, f62 = dl6 * w2, dl6 * q_of(lam6) * w1
        n1 = v1 + h * (_B1 * f11 + _B3 * f31 + _B4 * f41 + _B5 * f51 + _B6 * f61)
        n2 = v2 + h * (_B1 * f12 + _B3 * f32 + _B4 * f42 + _B5 * f52 + _B6 * f62)
        f71, f72 = dl6 * n2, dl6 * q_of(lam6) * n1
        e1 = h * (_E1 * f11 + _E3 * f31 + _E4 * f41 + _E5 * f51 + _E6 * f61 + _E7 * f71)
        e2 = h * (_E1 * f12 + _E3 * f32 + _E4 * f42 + _E5 * f52 + _E6 * f62 + _E7 * f72)
        big = max(abs(v1), abs(n1), abs(v2), abs(n2))
        s1 = rtol * max(abs(v1), abs(n1), 1e-6 * big)
        s2 = rtol * max(abs(v2), abs(n2), 1e-6 * big)
        err = math.sqrt(0.5 * ((abs(e1) / s1) ** 2 + (abs(e2) / s2) ** 2))
        if err <= 1.0:
            tau += h
            v1, v2 = n1, n2
            f11, f12 = f71, f72
            nsteps += 1
            mag = max(abs(v1), abs(v2))
            if mag > 1e30 or mag < 1e-30:
                s = math.log(mag)
                scale = math.exp(-s)
                v1 *= scale
                v2 *= scale
                f11 *= scale
                f12 *= scale
                zlog += s
            if tau >= 1.0:
                status = STATUS_OK
                break
        fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h *= fac
        if h < 1e-14:
            status = STATUS_STIFF
            break
    return v1, v2, zlog, status, nsteps


def transport_arc(r, b, R, th0, th1, v1, v2, rtol, max_steps):
    """Carry (phi, phi') along lambda = R e^{i theta} from th0 to th1.

    Returns (v1, v2, zlog, status, nsteps); the true pair is e^{zlog} (v1, v2).
    """
    span = th1 - th0

    def lam_of(tau):
        return R * complex(math.cos(th0 + span * tau), math.sin(th0 + span * tau))

    def dlam_of(tau):
        return 1j * span * lam_of(tau)

    return _transport(r, b, lam_of, dlam_of, complex(v1), complex(v2), rtol, max_steps)


def transport_ray(r, b, theta, R0, R1, v1, v2, rtol, max_steps):
    """Carry (phi, phi') radially along arg(lambda) = theta from R0 to R1."""
    e = complex(math.cos(theta), math.sin(theta))
    span = R1 - R0

    def lam_of(tau):
        return e * (R0 + span * tau)

    def dlam_of(tau):
        return e * span

    return _transport(r, b, lam_of, dlam_of, complex(v1), complex(v2), rtol, max_steps)
