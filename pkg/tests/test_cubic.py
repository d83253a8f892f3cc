"""Turning-point geometry: roots, branch cuts, periods, exponent integrals."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from painleve1 import cubic


def companion_roots(A):
    # independent oracle: eigenvalues of the companion matrix
    return np.sort_complex(np.linalg.eigvals(np.array(
        [[0.0, 0.0, -1.0], [1.0, 0.0, -A], [0.0, 1.0, 0.0]])))


@given(st.floats(-10.0, 10.0))
@settings(max_examples=120, deadline=None)
def test_roots_match_companion_oracle(A):
    if abs(A - cubic.A_CRIT) < 1e-3:
        return
    data = cubic.cubic_roots(A)
    got = np.sort_complex(np.array(data.roots))
    want = companion_roots(A)
    assert np.max(np.abs(got - want)) < 1e-10 * (1.0 + abs(A))


@given(st.floats(-10.0, 10.0))
@settings(max_examples=120, deadline=None)
def test_root_ordering_and_symmetric_functions(A):
    if abs(A - cubic.A_CRIT) < 1e-3:
        return
    d = cubic.cubic_roots(A)
    assert d.z0.real < 0.0
    assert abs(d.z0 + d.z1 + d.z2) < 1e-12 * (1.0 + abs(A))
    assert abs(d.z0 * d.z1 * d.z2 + 1.0) < 1e-11 * (1.0 + abs(A)) ** 2
    for z in d.roots:
        assert abs(z ** 3 + A * z + 1.0) < 1e-11 * (1.0 + abs(A)) ** 2
    if A < cubic.A_CRIT:
        assert d.z1.imag == 0.0 and d.z2.imag == 0.0
        assert d.z1.real >= d.z2.real > 0.0
    else:
        assert d.z1.imag > 0.0
        assert abs(d.z2 - d.z1.conjugate()) < 1e-12 * (1.0 + abs(A))


def test_branch_windows_of_f0_sqrt():
    d = cubic.cubic_roots(0.0)
    # directly below z1 the point sits on z1's downward cut; that factor
    # must resolve to the right-hand side, arg((z - z1)^{1/2}) = -pi/4
    z = d.z1 - 0.5j
    expected = (2.0 * cmath.sqrt(z - d.z0)
                * math.sqrt(abs(z - d.z1)) * cmath.exp(-0.25j * math.pi)
                * math.sqrt(abs(z - d.z2)) * cmath.exp(0.5j * cmath.phase(z - d.z2)))
    assert abs(cubic.f0_sqrt(z, d) - expected) < 1e-12


@given(st.floats(-4.0, 4.0), st.floats(-2.0, 2.0), st.floats(0.3, 2.5))
@settings(max_examples=80, deadline=None)
def test_f0_sqrt_squares_back(A, xre, xim):
    d = cubic.cubic_roots(A)
    z = complex(xre, xim) + 0.1j  # keep off the real axis and the cuts
    v = cubic.f0_sqrt(z, d)
    assert abs(v * v - 4.0 * (z ** 3 + A * z + 1.0)) < 1e-9 * (1.0 + abs(z) ** 3)


def bump_path_integral(A, za, zb, n=600):
    # oracle route: same integrand, but on an upward parabolic arc with
    # plain Gauss-Legendre, nowhere near the endpoints' sqrt behavior
    d = cubic.cubic_roots(A)
    x, w = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (x + 1.0)
    height = 0.3j * abs(zb - za)
    z = za + (zb - za) * u + height * u * (1.0 - u)
    dz = (zb - za) + height * (1.0 - 2.0 * u)
    return sum(wi * cubic.f0_sqrt(zi, d) * dzi for wi, zi, dzi in zip(w, z, dz)) * 0.5


def test_kappa_pair_against_deformed_contour():
    # conjugate-pair regime: deform the z1 -> z2 segment upward; the bump
    # stays right of z1's cut, so both routes must agree
    A = 0.0
    d = cubic.cubic_roots(A)
    pref = 2.0 / (math.pi * 1.0j)
    kp = cubic.kappa_pair(A)
    oracle = pref * bump_path_integral(A, d.z1, d.z2)
    assert abs(kp.kappa2 - oracle) < 1e-8
    oracle_hat = pref * bump_path_integral(A, d.z0, d.z1)
    assert abs(kp.kappa_hat2 - oracle_hat) < 1e-8


def test_kappa_sign_table():
    for A in (-3.0, -2.5, -2.0):
        kp = cubic.kappa_pair(A)
        assert kp.kappa2.real > 0.0 and abs(kp.kappa2.imag) < 1e-12
        assert kp.kappa_hat2.imag > 0.0
    for A in (-1.5, 0.0, 1.0, 1.9):
        kp = cubic.kappa_pair(A)
        assert kp.kappa2.real < 0.0 and abs(kp.kappa2.imag) < 1e-12
        assert kp.kappa_hat2.imag > 0.0
    for A in (2.1, 3.0, 4.0):
        assert cubic.kappa_pair(A).kappa_hat2.imag < 0.0


def test_kappa_error_estimate_and_coalescing_window():
    kp = cubic.kappa_pair(1.0)
    assert kp.err_estimate < 1e-10
    with pytest.raises(cubic.GeometryError, match="coalescing turning points"):
        cubic.kappa_pair(cubic.A_CRIT + 1e-8)
    soft = cubic.kappa_pair(cubic.A_CRIT + 1e-8, want_hat=False)
    assert soft.coalescing and soft.kappa2 == 0.0 and soft.kappa_hat2 is None


def test_C0_value():
    assert abs(cubic.C0() - 2.004860503264124) < 1e-12


def test_alpha0_is_path_independent():
    for A in (-3.0, 0.0, 2.5):
        vals = [cubic.alpha0(A, th) for th in (0.9, 2.0 * math.pi / 5.0, 2.2)]
        assert max(abs(a - b) for a in vals for b in vals) < 1e-10


def test_alpha0_real_when_all_roots_are_real():
    for A in (-3.0, -2.5, -2.0):
        assert abs(cubic.alpha0(A).imag) < 1e-10


def test_alpha0_period_identities():
    # real part tracks Im kappa_hat^2 on the whole range; imaginary part
    # tracks kappa^2 only where the root pair is conjugate
    for A in np.linspace(-3.0, 4.0, 23):
        if abs(A - cubic.A_CRIT) < 0.05:
            continue
        kp = cubic.kappa_pair(float(A))
        a0 = cubic.alpha0(float(A))
        assert abs(a0.real - 0.5 * math.pi * kp.kappa_hat2.imag) < 1e-8
        if A > cubic.A_CRIT:
            assert abs(a0.imag - 0.25 * math.pi * kp.kappa2.real) < 1e-8


def test_alpha1_parts_path_independent_and_antisymmetric():
    for A in (0.0, 2.0):
        a = cubic.alpha1_parts(A, 0.9)
        b = cubic.alpha1_parts(A, 2.2)
        assert max(abs(x - y) for x, y in zip(a, b)) < 1e-10
        assert a[1] == -a[2]


def test_alpha1_combination():
    s = cubic.alpha_set(2.0)
    v = cubic.alpha1(2.0, 1, 0.7)
    assert abs(v - (1.4 * s.alpha11 + s.alpha12_plus)) < 1e-14
    with pytest.raises(ValueError):
        cubic.alpha1(2.0, 0)


def test_lambda0_B1_round_trip():
    s = cubic.alpha_set(cubic.C0())
    b1 = 0.7
    s1_abs = math.exp(4.0 * s.alpha11.real * b1 + 2.0 * s.alpha12_plus.real)
    lam_p, lam_m, got_p, _ = cubic.lambda0_and_B1(s1_abs)
    assert abs(got_p - b1) < 1e-12
    # threshold values recover |s1| = 1/2 on each side
    for lam, part in ((lam_p, s.alpha12_plus), (lam_m, s.alpha12_minus)):
        back = math.exp(4.0 * s.alpha11.real * lam + 2.0 * part.real)
        assert abs(back - 0.5) < 1e-12


def test_contour_obstruction_is_raised_for_bad_theta():
    with pytest.raises(cubic.GeometryError, match="contour obstruction"):
        cubic.alpha0(0.0, theta=5.0)
