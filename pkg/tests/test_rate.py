import math

import numpy as np
import pytest
from scipy import integrate, optimize, special

from loggamma_ldp import rate
from loggamma_ldp.errors import DomainError, NoRootError
from loggamma_ldp.rate import QuadratureSpec, RateQuery
from loggamma_ldp.special_fn import digamma, tetragamma

# (s, theta) -> (b, f, F) from the independent adaptive-quadrature oracle below
# (scipy quad in the angle variable u = sin(phi), brentq for b, quad over t for F).
FROZEN = {
    (0.5, 0.3): (3.711501313117483, -0.624224533761951, 0.09273588138788406),
    (0.3, 0.1): (7.323060485022343, -2.0973521954728356, 0.33520981341337175),
    (0.8, 0.6): (1.0476451904344746, -0.016104606414321272, 0.000648599668157592),
}


def _ihp(x, s, th):
    return (0.5 * th * (special.psi(th * (1 + 0.5j * x)) + special.psi(th * (1 - 0.5j * x)))).real + s


def _oracle_b(s, th):
    def H(b):
        return integrate.quad(lambda p: _ihp(b * math.sin(p), s, th), 0, math.pi / 2, epsabs=1e-14)[0]

    hi = 4.0
    while H(hi) < 0:
        hi *= 2
    return optimize.brentq(H, 1e-14, hi, xtol=1e-15, rtol=1e-15)


def test_oracle_reproduces_frozen():
    assert _oracle_b(0.5, 0.3) == pytest.approx(FROZEN[(0.5, 0.3)][0], rel=1e-12)


@pytest.mark.parametrize("key", list(FROZEN))
def test_frozen_rate_values(key):
    s, th = key
    r = rate.big_F(RateQuery(s, th))
    b, f, F = FROZEN[key]
    assert r.b == pytest.approx(b, rel=1e-10)
    assert r.f == pytest.approx(f, rel=1e-9)
    assert r.F == pytest.approx(F, rel=1e-8)
    assert r.residual_H < 1e-10
    assert r.refine_delta < 1e-8


def test_s_star_examples():
    assert rate.s_star(0.0) == 1.0
    assert rate.s_star(1e-9) == pytest.approx(1.0, abs=1e-8)
    euler = 0.5772156649015329
    assert rate.s_star(0.5) == pytest.approx(-0.5 * (-euler - 2 * math.log(2)), rel=1e-14)
    assert rate.s_star(1.0) == pytest.approx(euler, rel=1e-14)
    with pytest.raises(DomainError):
        rate.s_star(1.5)
    with pytest.raises(DomainError):
        rate.s_star(-0.1)


def test_zero_temperature_closed_forms():
    assert rate.zero_temp_closed_forms(1.0) == (0.0, 0.0, 0.0)
    b, f, F = rate.zero_temp_closed_forms(0.5)
    assert b == pytest.approx(3.4641016151377544, rel=1e-15)
    assert f == -0.5
    assert F == pytest.approx(0.0681471805599453, rel=1e-14)
    e = 1e-5
    s = 0.7
    fd = (rate.zero_temp_closed_forms(s + e)[2] - rate.zero_temp_closed_forms(s - e)[2]) / (2 * e)
    assert fd == pytest.approx(rate.zero_temp_closed_forms(s)[1], abs=1e-6)
    for bad in (0.0, -0.2, 1.2):
        with pytest.raises(DomainError):
            rate.zero_temp_closed_forms(bad)


def test_small_theta_limit():
    b, _ = rate.solve_b(RateQuery(0.5, 1e-6))
    assert b == pytest.approx(2 * math.sqrt(3), rel=1e-3)
    r = rate.big_F(RateQuery(0.5, 1e-6), refine=False)
    assert r.f == pytest.approx(-0.5, abs=1e-3)
    assert r.F == pytest.approx(0.0681472, abs=1e-3)
    r = rate.big_F(RateQuery(0.5, 1e-3), refine=False)
    assert r.F == pytest.approx(0.0681472, abs=1e-2)


def test_theta_zero_uses_closed_forms():
    r = rate.big_F(RateQuery(0.4, 0.0))
    assert (r.b, r.f, r.F) == rate.zero_temp_closed_forms(0.4)


def test_b_decreasing_in_s():
    ss = np.linspace(0.1, rate.s_star(0.3) - 1e-3, 15)
    bs = [rate.solve_b(RateQuery(s, 0.3))[0] for s in ss]
    assert all(b2 < b1 for b1, b2 in zip(bs, bs[1:]))


def test_H_increasing_in_b():
    bs = np.linspace(0.1, 20, 60)
    H = [rate.H_value(b, 0.5, 0.3) for b in bs]
    assert all(h2 > h1 for h1, h2 in zip(H, H[1:]))
    b, res = rate.solve_b(RateQuery(0.5, 0.3))
    assert abs(rate.H_value(b, 0.5, 0.3)) < 1e-10


def test_edge_asymptotics():
    th = 0.2
    st = rate.s_star(th)
    s = st - 1e-3
    b, _ = rate.solve_b(RateQuery(s, th))
    assert b / rate.edge_asymptotics(s, th)[0] == pytest.approx(1.0, abs=0.02)
    s = st - 1e-2
    r = rate.big_F(RateQuery(s, th), refine=False)
    cubic = 2 * (st - s) ** 3 / (3 * th**3 * abs(tetragamma(th).real))
    assert rate.edge_asymptotics(s, th)[2] == pytest.approx(cubic, rel=1e-12)
    assert r.F / cubic == pytest.approx(1.0, abs=0.1)
    assert r.F > 0


def test_f_vanishes_at_edge():
    th = 0.3
    st = rate.s_star(th)
    vals = []
    for d in (1e-1, 1e-2, 1e-3, 1e-4):
        b, _ = rate.solve_b(RateQuery(st - d, th))
        vals.append(abs(rate.f_value(st - d, th, b)))
    assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))
    assert vals[-1] < 1e-6
    r = rate.big_F(RateQuery(st, th))
    assert (r.b, r.f, r.F) == (0.0, 0.0, 0.0)


def test_F_derivative_is_f():
    th, s, e = 0.3, 0.55, 1e-4
    Fp = rate.big_F(RateQuery(s + e, th), refine=False).F
    Fm = rate.big_F(RateQuery(s - e, th), refine=False).F
    f = rate.big_F(RateQuery(s, th), refine=False).f
    assert (Fp - Fm) / (2 * e) == pytest.approx(f, rel=1e-6)


@pytest.mark.parametrize("s", [0.2, 0.5, 0.9])
def test_quadrature_doubling_stable(s):
    q = QuadratureSpec()
    r1 = rate.big_F(RateQuery(s, 0.4, q), refine=False)
    r2 = rate.big_F(RateQuery(s, 0.4, q.doubled()), refine=False)
    assert abs(r1.b - r2.b) < 1e-8
    assert abs(r1.f - r2.f) < 1e-8
    assert abs(r1.F - r2.F) < 1e-8


def test_F_positive_and_decreasing():
    rows = rate.rate_table(np.linspace(0.2, 0.9, 8), 0.3, refine=False)
    F = [r.result.F for r in rows]
    assert all(v > 0 for v in F)
    assert all(b < a for a, b in zip(F, F[1:]))


def test_rate_table_small_theta_and_edge():
    grid = [0.3, 0.5, 0.7]
    rows = rate.rate_table(grid, 1e-3, refine=False)
    for r in rows:
        b0, f0, F0 = rate.zero_temp_closed_forms(r.s)
        assert abs(r.result.b - b0) < 1e-2 * b0
        assert abs(r.result.F - F0) < 1e-2
    th = 0.3
    rows = rate.rate_table([0.8, rate.s_star(th)], th, refine=False)
    assert rows[-1].result.F == 0.0


def test_rate_table_flags_bad_rows():
    rows = rate.rate_table([0.5, 5.0, -1.0], 0.3, refine=False)
    assert rows[0].error is None and rows[0].result.F > 0
    assert rows[1].result is None and "DomainError" in rows[1].error
    assert rows[2].result is None


def test_query_validation():
    with pytest.raises(DomainError):
        RateQuery(0.0, 0.3)
    with pytest.raises(DomainError):
        RateQuery(1.2, 0.3)
    with pytest.raises(DomainError):
        QuadratureSpec(m_cheb1=4)


def test_no_root_error():
    # outside the window H stays negative for every b
    with pytest.raises(NoRootError):
        rate._solve_b_many(np.array([-5.0]), 0.3, 64)


def test_s_star_matches_digamma():
    for th in (0.1, 0.4, 0.9):
        assert rate.s_star(th) == pytest.approx(-th * special.psi(th), rel=1e-14)
        assert rate.s_star(th) == pytest.approx(-th * digamma(th).real, rel=1e-15)
