# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled compute kernels; mirrors _kern_py expression for expression."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, fabs, log, pow, sin, sqrt

cnp.import_array()

BACKEND = "compiled"

STATUS_OK = 0
STATUS_BLOWUP = 1
STATUS_STIFF = 2
STATUS_NEG_BLOWUP = 3

cdef double _C2 = 0.2, _C3 = 0.3, _C4 = 0.8, _C5 = 8.0 / 9.0
cdef double _A21 = 0.2
cdef double _A31 = 3.0 / 40.0, _A32 = 9.0 / 40.0
cdef double _A41 = 44.0 / 45.0, _A42 = -56.0 / 15.0, _A43 = 32.0 / 9.0
cdef double _A51 = 19372.0 / 6561.0, _A52 = -25360.0 / 2187.0
cdef double _A53 = 64448.0 / 6561.0, _A54 = -212.0 / 729.0
cdef double _A61 = 9017.0 / 3168.0, _A62 = -355.0 / 33.0, _A63 = 46732.0 / 5247.0
cdef double _A64 = 49.0 / 176.0, _A65 = -5103.0 / 18656.0
cdef double _B1 = 35.0 / 384.0, _B3 = 500.0 / 1113.0, _B4 = 125.0 / 192.0
cdef double _B5 = -2187.0 / 6784.0, _B6 = 11.0 / 84.0
cdef double _E1 = 35.0 / 384.0 - 5179.0 / 57600.0
cdef double _E3 = 500.0 / 1113.0 - 7571.0 / 16695.0
cdef double _E4 = 125.0 / 192.0 - 393.0 / 640.0
cdef double _E5 = -2187.0 / 6784.0 + 92097.0 / 339200.0
cdef double _E6 = 11.0 / 84.0 - 187.0 / 2100.0
cdef double _E7 = -1.0 / 40.0


def integrate_pi(double t0, double y0, double dy0, double t_end,
                 double rtol, double atol, double y_blow, long max_steps):
    """Adaptive RK45 for y'' = 6 y^2 + t, stopping at t_end or at blowup.

    Returns (status, ts, ys, dys) with every accepted node included.
    status: 0 reached t_end, 1 y exceeded +y_blow, 2 step failure,
    3 y fell below -y_blow.
    """
    cdef long cap = 4096
    cdef cnp.ndarray[cnp.float64_t] ts = np.empty(cap)
    cdef cnp.ndarray[cnp.float64_t] ys = np.empty(cap)
    cdef cnp.ndarray[cnp.float64_t] dys = np.empty(cap)
    cdef long n = 0
    ts[0] = t0; ys[0] = y0; dys[0] = dy0; n = 1
    if t_end == t0:
        return STATUS_OK, ts[:n].copy(), ys[:n].copy(), dys[:n].copy()
    cdef double direction = 1.0 if t_end > t0 else -1.0
    cdef double t = t0, y = y0, v = dy0
    cdef double f1y = v, f1v = 6.0 * y * y + t
    cdef double h = direction * min(1e-3, fabs(t_end - t0))
    cdef int status = STATUS_STIFF
    cdef long it
    cdef double ty, tv, ny, nv, ey, ev, sy, sv, err, fac
    cdef double f2y, f2v, f3y, f3v, f4y, f4v, f5y, f5v, f6y, f6v, f7y, f7v
    for it in range(max_steps):
        if direction * (t + h - t_end) > 0.0:
            h = t_end - t
        ty = y + h * _A21 * f1y
        tv = v + h * _A21 * f1v
        f2y = tv; f2v = 6.0 * ty * ty + (t + _C2 * h)
        ty = y + h * (_A31 * f1y + _A32 * f2y)
        tv = v + h * (_A31 * f1v + _A32 * f2v)
        f3y = tv; f3v = 6.0 * ty * ty + (t + _C3 * h)
        ty = y + h * (_A41 * f1y + _A42 * f2y + _A43 * f3y)
        tv = v + h * (_A41 * f1v + _A42 * f2v + _A43 * f3v)
        f4y = tv; f4v = 6.0 * ty * ty + (t + _C4 * h)
        ty = y + h * (_A51 * f1y + _A52 * f2y + _A53 * f3y + _A54 * f4y)
        tv = v + h * (_A51 * f1v + _A52 * f2v + _A53 * f3v + _A54 * f4v)
        f5y = tv; f5v = 6.0 * ty * ty + (t + _C5 * h)
        ty = y + h * (_A61 * f1y + _A62 * f2y + _A63 * f3y + _A64 * f4y + _A65 * f5y)
        tv = v + h * (_A61 * f1v + _A62 * f2v + _A63 * f3v + _A64 * f4v + _A65 * f5v)
        f6y = tv; f6v = 6.0 * ty * ty + (t + h)
        ny = y + h * (_B1 * f1y + _B3 * f3y + _B4 * f4y + _B5 * f5y + _B6 * f6y)
        nv = v + h * (_B1 * f1v + _B3 * f3v + _B4 * f4v + _B5 * f5v + _B6 * f6v)
        f7y = nv; f7v = 6.0 * ny * ny + (t + h)
        ey = h * (_E1 * f1y + _E3 * f3y + _E4 * f4y + _E5 * f5y + _E6 * f6y + _E7 * f7y)
        ev = h * (_E1 * f1v + _E3 * f3v + _E4 * f4v + _E5 * f5v + _E6 * f6v + _E7 * f7v)
        sy = atol + rtol * max(fabs(y), fabs(ny))
        sv = atol + rtol * max(fabs(v), fabs(nv))
        err = sqrt(0.5 * ((ey / sy) * (ey / sy) + (ev / sv) * (ev / sv)))
        if err <= 1.0:
            t += h
            y = ny; v = nv
            f1y = f7y; f1v = f7v
            if n >= cap:
                cap *= 2
                ts = np.concatenate([ts, np.empty(cap - n)])
                ys = np.concatenate([ys, np.empty(cap - n)])
                dys = np.concatenate([dys, np.empty(cap - n)])
            ts[n] = t; ys[n] = y; dys[n] = v; n += 1
            if y > y_blow:
                status = STATUS_BLOWUP
                break
            if y < -y_blow:
                status = STATUS_NEG_BLOWUP
                break
            if t == t_end:
                status = STATUS_OK
                break
        fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * pow(err, -0.2)))
        h *= fac
        if fabs(h) < 1e-14 * max(1.0, fabs(t)):
            status = STATUS_STIFF
            break
    return status, ts[:n].copy(), ys[:n].copy(), dys[:n].copy()


cdef inline double complex _q_of(double complex lam, double r, double b):
    return (4.0 * lam * lam * lam + 2.0 * lam * r + b * b - b / lam
            + 0.75 / (lam * lam))


cdef _transport(double r, double b, int kind, double R, double th0, double th1,
                double R0, double R1, double complex v1, double complex v2,
                double rtol, long max_steps):
    # kind 0: lam = R e^{i(th0 + span tau)}; kind 1: lam = e^{i th0}(R0 + span tau)
    cdef double span = (th1 - th0) if kind == 0 else (R1 - R0)
    cdef double complex e = cos(th0) + 1j * sin(th0)
    cdef double tau = 0.0, zlog = 0.0
    cdef double complex lam, dl
    cdef double complex f11, f12, f21, f22, f31, f32, f41, f42
    cdef double complex f51, f52, f61, f62, f71, f72
    cdef double complex w1, w2, n1, n2, e1, e2
    cdef double h = 1e-4, err, fac, s1, s2, big, mag, s, scale, p
    cdef int status = STATUS_STIFF
    cdef long nsteps = 0, it

    if kind == 0:
        lam = R * (cos(th0) + 1j * sin(th0))
        dl = 1j * span * lam
    else:
        lam = e * R0
        dl = e * span
    f11 = dl * v2
    f12 = dl * _q_of(lam, r, b) * v1
    for it in range(max_steps):
        if tau + h > 1.0:
            h = 1.0 - tau
        if kind == 0:
            p = th0 + span * (tau + _C2 * h)
            lam = R * (cos(p) + 1j * sin(p)); dl = 1j * span * lam
        else:
            lam = e * (R0 + span * (tau + _C2 * h)); dl = e * span
        w1 = v1 + h * _A21 * f11
        w2 = v2 + h * _A21 * f12
        f21 = dl * w2; f22 = dl * _q_of(lam, r, b) * w1
        if kind == 0:
            p = th0 + span * (tau + _C3 * h)
            lam = R * (cos(p) + 1j * sin(p)); dl = 1j * span * lam
        else:
            lam = e * (R0 + span * (tau + _C3 * h)); dl = e * span
        w1 = v1 + h * (_A31 * f11 + _A32 * f21)
        w2 = v2 + h * (_A31 * f12 + _A32 * f22)
        f31 = dl * w2; f32 = dl * _q_of(lam, r, b) * w1
        if kind == 0:
            p = th0 + span * (tau + _C4 * h)
            lam = R * (cos(p) + 1j * sin(p)); dl = 1j * span * lam
        else:
            lam = e * (R0 + span * (tau + _C4 * h)); dl = e * span
        w1 = v1 + h * (_A41 * f11 + _A42 * f21 + _A43 * f31)
        w2 = v2 + h * (_A41 * f12 + _A42 * f22 + _A43 * f32)
        f41 = dl * w2; f42 = dl * _q_of(lam, r, b) * w1
        if kind == 0:
            p = th0 + span * (tau + _C5 * h)
            lam = R * (cos(p) + 1j * sin(p)); dl = 1j * span * lam
        else:
            lam = e * (R0 + span * (tau + _C5 * h)); dl = e * span
        w1 = v1 + h * (_A51 * f11 + _A52 * f21 + _A53 * f31 + _A54 * f41)
        w2 = v2 + h * (_A51 * f12 + _A52 * f22 + _A53 * f32 + _A54 * f42)
        f51 = dl * w2; f52 = dl * _q_of(lam, r, b) * w1
        if kind == 0:
            p = th0 + span * (tau + h)
            lam = R * (cos(p) + 1j * sin(p)); dl = 1j * span * lam
        else:
            lam = e * (R0 + span * (tau + h)); dl = e * span
        w1 = v1 + h * (_A61 * f11 + _A62 * f21 + _A63 * f31 + _A64 * f41 + _A65 * f51)
        w2 = v2 + h * (_A61 * f12 + _A62 * f22 + _A63 * f32 + _A64 * f42 + _A65 * f52)
        f61 = dl * w2; f62 = dl * _q_of(lam, r, b) * w1
        n1 = v1 + h * (_B1 * f11 + _B3 * f31 + _B4 * f41 + _B5 * f51 + _B6 * f61)
        n2 = v2 + h * (_B1 * f12 + _B3 * f32 + _B4 * f42 + _B5 * f52 + _B6 * f62)
        f71 = dl * n2; f72 = dl * _q_of(lam, r, b) * n1
        e1 = h * (_E1 * f11 + _E3 * f31 + _E4 * f41 + _E5 * f51 + _E6 * f61 + _E7 * f71)
        e2 = h * (_E1 * f12 + _E3 * f32 + _E4 * f42 + _E5 * f52 + _E6 * f62 + _E7 * f72)
        big = max(abs(v1), abs(n1), abs(v2), abs(n2))
        s1 = rtol * max(abs(v1), abs(n1), 1e-6 * big)
        s2 = rtol * max(abs(v2), abs(n2), 1e-6 * big)
        err = sqrt(0.5 * ((abs(e1) / s1) ** 2 + (abs(e2) / s2) ** 2))
        if err <= 1.0:
            tau += h
            v1 = n1; v2 = n2
            f11 = f71; f12 = f72
            nsteps += 1
            mag = max(abs(v1), abs(v2))
            if mag > 1e30 or mag < 1e-30:
                s = log(mag)
                scale = exp(-s)
                v1 *= scale
                v2 *= scale
                f11 *= scale
                f12 *= scale
                zlog += s
            if tau >= 1.0:
                status = STATUS_OK
                break
        fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * pow(err, -0.2)))
        h *= fac
        if h < 1e-14:
            status = STATUS_STIFF
            break
    return v1, v2, zlog, status, nsteps


def transport_arc(double r, double b, double R, double th0, double th1,
                  v1, v2, double rtol, long max_steps):
    """Carry (phi, phi') along lambda = R e^{i theta} from th0 to th1.

    Returns (v1, v2, zlog, status, nsteps); the true pair is e^{zlog} (v1, v2).
    """
    return _transport(r, b, 0, R, th0, th1, 0.0, 0.0,
                      complex(v1), complex(v2), rtol, max_steps)


def transport_ray(double r, double b, double theta, double R0, double R1,
                  v1, v2, double rtol, long max_steps):
    """Carry (phi, phi') radially along arg(lambda) = theta from R0 to R1."""
    return _transport(r, b, 1, 0.0, theta, 0.0, R0, R1,
                      complex(v1), complex(v2), rtol, max_steps)
