import math

import numpy as np
import pytest

from loggamma_ldp import rate
from loggamma_ldp.errors import DomainError, SingularityError
from loggamma_ldp.phase import (
    PhaseParams,
    a_root,
    g_eval,
    h_eval,
    q_eval,
    q_prime_zero_temp,
    sign_grid,
)

B0 = 2 * math.sqrt(3)  # b(0.5, 0)


def test_h_examples():
    for th in (0.0, 0.3, 1.0):
        assert h_eval(0, 0.0, PhaseParams(0.7, th)) == 0
    v = h_eval(0, 1j, PhaseParams(1.5, 0.0))
    assert v.real == pytest.approx(1.5 - math.log(3), abs=1e-15)
    z = 0.8 + 0.4j
    p = PhaseParams(1.0, 0.3)
    assert abs(h_eval(0, -z, p) + h_eval(0, z, p)) < 1e-12


@pytest.mark.parametrize("th", [0.0, 0.05, 0.3, 1.0])
def test_h_is_odd(th):
    rng = np.random.default_rng(2)
    z = rng.uniform(-8, 8, 300) + 1j * rng.uniform(-1.9, 1.9, 300)
    p = PhaseParams(0.8, th)
    for order, sign in ((0, 1), (1, -1), (2, 1)):
        # h odd => h' even, h'' odd
        assert np.max(np.abs(h_eval(order, -z, p) + sign * h_eval(order, z, p))) < 1e-12


@pytest.mark.parametrize("th", [0.0, 0.1, 0.3, 0.7])
def test_ih2_positive_on_positive_axis(th):
    x = np.linspace(1e-3, 40, 2000)
    v = 1j * h_eval(2, x, PhaseParams(1.0, th))
    assert np.all(v.real > 0)
    assert np.max(np.abs(v.imag)) < 1e-12


@pytest.mark.parametrize("th", [0.0, 0.2])
def test_derivatives_match_finite_differences(th):
    p = PhaseParams(0.6, th)
    z = np.array([0.4 + 0.3j, 3.0 - 0.5j, -1.2 + 1.1j])
    e = 1e-6
    fd1 = (h_eval(0, z + e, p) - h_eval(0, z - e, p)) / (2 * e)
    assert np.max(np.abs(fd1 - h_eval(1, z, p))) < 1e-8
    fd2 = (h_eval(1, z + e, p) - h_eval(1, z - e, p)) / (2 * e)
    assert np.max(np.abs(fd2 - h_eval(2, z, p))) < 1e-8


def test_theta_continuity():
    z = np.array([0.5 + 0.1j, 2.0 - 1.0j, -4.0 + 0.3j, 10.0])
    for order in (0, 1, 2):
        a = h_eval(order, z, PhaseParams(0.9, 0.0))
        b = h_eval(order, z, PhaseParams(0.9, 1e-7))
        assert np.max(np.abs(a - b)) < 1e-5


def test_singular_points():
    with pytest.raises(SingularityError):
        h_eval(0, 2j, PhaseParams(1.0, 0.0))
    with pytest.raises(SingularityError):
        h_eval(1, -2j, PhaseParams(1.0, 0.0))
    th = 0.25
    with pytest.raises(SingularityError):
        h_eval(0, 2j * (1 + 3 / th), PhaseParams(1.0, th))
    with pytest.raises(DomainError):
        h_eval(3, 1.0, PhaseParams(1.0, 0.0))
    with pytest.raises(DomainError):
        PhaseParams(-1.0, 0.0)


def test_sign_grid_examples():
    g = sign_grid(1.5)
    re, im = g.re, g.im

    def cell(z):
        j = int(np.argmin(np.abs(re - z.real)))
        k = int(np.argmin(np.abs(im - z.imag)))
        return g.cells[k, j]

    assert cell(1j) == 1
    assert cell(-1j) == -1
    for s in (0.5, 1.0, 1.5):
        gs = sign_grid(s)
        k0 = int(np.argmin(np.abs(gs.im)))
        assert np.all(gs.cells[k0] == 0)


def test_sign_grid_layout_and_poles():
    g = sign_grid(1.0, -2, 2, -2, 2, 5, 5)  # nodes hit +-2i exactly
    rows = list(g.rows())
    assert len(rows) == 25
    assert rows[0][:2] == (-2.0, -2.0) and rows[1][:2] == (-1.0, -2.0)
    assert rows[-1][:2] == (2.0, 2.0)
    assert set(np.unique(g.cells)) <= {-1, 0, 1}
    with pytest.raises(DomainError):
        sign_grid(1.0, nx=1)


@pytest.mark.parametrize("s", [0.5, 1.0, 1.5])
def test_sign_on_large_ring(s):
    # for |zeta| large off the real axis, Re h ~ s Im zeta dominates
    t = np.linspace(0.1, np.pi - 0.1, 50)
    z = 50 * np.exp(1j * t)
    p = PhaseParams(s, 0.0)
    assert np.all(h_eval(0, z, p).real > 0)
    assert np.all(h_eval(0, np.conj(z), p).real < 0)


# --------------------------------------------------------------------------
# g and q


@pytest.fixture(scope="module")
def sol():
    s, th = 0.6, 0.2
    r = rate.big_F(rate.RateQuery(s, th), refine=False)
    return s, th, r


def test_a_root_branch():
    b = 2.0
    assert abs(a_root(100.0, b) - math.sqrt(100**2 - 4)) < 1e-12
    assert abs(a_root(-100.0, b) + math.sqrt(100**2 - 4)) < 1e-12
    assert abs(a_root(100j, b) - 1j * math.sqrt(100**2 + 4)) < 1e-12
    # boundary values on the cut are +-i sqrt(b^2 - x^2)
    assert abs(a_root(0.5 + 1e-14j, b) - 1j * math.sqrt(4 - 0.25)) < 1e-10


def test_g_jump(sol):
    s, th, r = sol
    for frac in (0.3, -0.7, 0.99):
        x = frac * r.b
        gp = g_eval(x + 1e-6j, s, th, r.b)
        gm = g_eval(x - 1e-6j, s, th, r.b)
        assert abs(gp + gm - h_eval(0, x, PhaseParams(s, th))) < 1e-6


def test_g_first_coefficient(sol):
    s, th, r = sol
    for z in (1e3, -1e3, 1e3j, -1e3j, 7e2 + 7e2j):
        assert abs(z * g_eval(z, s, th, r.b) - (-1j * r.f)) < 1e-6
    # equivalently i g_1 = f
    assert abs(1j * 1e3 * g_eval(1e3, s, th, r.b) - r.f) < 1e-6


def test_g_vanishes_at_infinity(sol):
    s, th, r = sol
    vals = [abs(g_eval(1j * R, s, th, r.b)) for R in (1e2, 1e3, 1e4, 1e5)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-5


def test_q_vanishes_at_endpoints(sol):
    s, th, r = sol
    for z in (r.b + 1e-9, -r.b - 1e-9, r.b + 1e-9j):
        assert abs(q_eval(z, s, th, r.b)) < 1e-6


@pytest.mark.parametrize("zeta", [4.0, 1 + 1j, -3 + 0.5j])
@pytest.mark.parametrize("th", [0.0, 1e-6])
def test_q_prime_closed_form(zeta, th):
    e = 1e-5
    fd = (q_eval(zeta + e, 0.5, th, B0) - q_eval(zeta - e, 0.5, th, B0)) / (2 * e)
    assert abs(fd - q_prime_zero_temp(zeta, 0.5, B0)) < 1e-4


def test_q_prime_sign_outside_cut():
    for z in (1.05 * B0, 2 * B0, 10.0, -1.05 * B0):
        v = -1j * q_prime_zero_temp(z, 0.5, B0)
        assert abs(v.imag) < 1e-14
        assert v.real > 0
    # and the numerical q agrees with the sign to the right of b
    z, e = 1.05 * B0, 1e-5
    fd = (q_eval(z + e, 0.5, 0.0, B0) - q_eval(z - e, 0.5, 0.0, B0)) / (2 * e)
    assert (-1j * fd).real > 0


def test_g_errors():
    with pytest.raises(DomainError):
        g_eval(0.5, 0.5, 0.0, B0)
    with pytest.raises(DomainError):
        q_prime_zero_temp(3.0, 0.5, B0)
    with pytest.raises(DomainError):
        g_eval(5.0, 0.5, 0.0, B0, m=8)
    with pytest.raises(DomainError):
        g_eval(5.0, 0.5, 0.0, -1.0)


def test_g_vectorised(sol):
    s, th, r = sol
    z = np.array([[5.0, 1 + 1j], [r.b + 0.01, -20j]])
    out = g_eval(z, s, th, r.b)
    assert out.shape == (2, 2)
    assert abs(out[0, 1] - g_eval(1 + 1j, s, th, r.b)) < 1e-15
