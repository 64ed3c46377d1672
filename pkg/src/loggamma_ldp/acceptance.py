"""The ten acceptance criteria as callable checks.

Each ``criterion_k()`` returns a :class:`Check` holding the measured values,
the expected values, the tolerance and the verdict.  ``run_all`` is what the
``verify`` command and tests/test_acceptance.py execute.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate, special

from . import fredholm, phase, polymer, rate
from .special_fn import digamma, tetragamma, trigamma

__all__ = ["Check", "CRITERIA", "run_criterion", "run_all", "inverse_gamma_laplace"]


@dataclass
class Check:
    criterion_id: int
    name: str
    passed: bool
    measured: object
    expected: object
    tolerance: object
    runtime: float = 0.0
    notes: str = ""
    details: dict = field(default_factory=dict)

    def report(self):
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d

    def line(self):
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"criterion {self.criterion_id:2d} [{verdict}] {self.name}: "
            f"measured={_short(self.measured)} expected={_short(self.expected)} "
            f"tol={_short(self.tolerance)} ({self.runtime:.1f}s)"
        )


def _short(x):
    if isinstance(x, float):
        return f"{x:.6g}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_short(v) for v in x) + "]"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}: {_short(v)}" for k, v in x.items()) + "}"
    return str(x)


def inverse_gamma_laplace(u, theta):
    """E exp(-u d), d inverse-Gamma(2 theta), by adaptive quadrature of the density."""
    a = 2.0 * theta

    def dens(x):
        return math.exp(-u * x - (a + 1.0) * math.log(x) - 1.0 / x - special.gammaln(a))

    # split at the density mode to help the adaptive rule
    mode = 1.0 / (a + 1.0)
    p1 = integrate.quad(dens, 0.0, mode, epsabs=1e-15, epsrel=1e-13, limit=400)[0]
    p2 = integrate.quad(dens, mode, np.inf, epsabs=1e-15, epsrel=1e-13, limit=400)[0]
    return p1 + p2


def _timed(fn):
    def wrapped():
        t0 = time.perf_counter()
        chk = fn()
        chk.runtime = time.perf_counter() - t0
        return chk

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@_timed
def criterion_1():
    """b(s, 1e-3) against 2 sqrt(1/s^2 - 1)."""
    meas, exp, ok = [], [], True
    for s in (0.5, 0.3, 0.7):
        b, _ = rate.solve_b(rate.RateQuery(s, 1e-3))
        b0 = rate.zero_temp_closed_forms(s)[0]
        meas.append(b)
        exp.append(b0)
        ok &= abs(b / b0 - 1.0) < 1e-2
    return Check(1, "zero-temperature endpoint", ok, meas, exp, "rel 1e-2")


@_timed
def criterion_2():
    """F(s, 1e-3) against -s^2/2 - 3/2 + 2s - log s."""
    meas, exp, ok = [], [], True
    for s in (0.3, 0.5, 0.7):
        F = rate.big_F(rate.RateQuery(s, 1e-3), refine=False).F
        F0 = rate.zero_temp_closed_forms(s)[2]
        meas.append(F)
        exp.append(F0)
        ok &= abs(F - F0) < 1e-2
    return Check(2, "zero-temperature rate", ok, meas, exp, "abs 1e-2")


@_timed
def criterion_3():
    """Edge asymptotics of b and of the cubic tail of F at theta = 0.2."""
    th = 0.2
    st = rate.s_star(th)
    s1 = st - 1e-3
    b, _ = rate.solve_b(rate.RateQuery(s1, th))
    rb = b / rate.edge_asymptotics(s1, th)[0]
    s2 = st - 1e-2
    F = rate.big_F(rate.RateQuery(s2, th), refine=False).F
    rF = F / rate.edge_asymptotics(s2, th)[2]
    ok = 0.98 <= rb <= 1.02 and abs(rF - 1.0) < 0.10
    return Check(
        3, "edge asymptotics", ok, {"b_ratio": rb, "F_ratio": rF}, 1.0, "b [0.98,1.02], F 10%"
    )


@_timed
def criterion_4():
    """Determinant identities at n = 1 against the inverse-Gamma density."""
    th = 0.25
    lap = fredholm.laplace_det(1.0, 1, th, refine=False).value.real
    lap_ref = inverse_gamma_laplace(1.0, th)
    s = 0.5
    sm = fredholm.smoothed_det(s, 1, th, refine=False).value.real
    sm_ref = inverse_gamma_laplace(math.exp(-2.0 * s / th), th)
    e1, e2 = abs(lap - lap_ref), abs(sm - sm_ref)
    ok = e1 < 1e-8 and e2 < 1e-6
    return Check(
        4,
        "determinant identity n=1",
        ok,
        {"laplace": lap, "smoothed": sm},
        {"laplace": lap_ref, "smoothed": sm_ref},
        "1e-8 / 1e-6",
        details={"err_laplace": e1, "err_smoothed": e2},
    )


@_timed
def criterion_5(samples=10**6, seed=20240611):
    """laplace_det against mc_laplace within 3 standard errors."""
    meas, exp, z, ok = [], [], [], True
    for n in (2, 3):
        for th in (0.25, 0.4):
            for u in (0.5, 1.0):
                mc = polymer.mc_laplace(n, th, u, samples, seed)
                det = fredholm.laplace_det(u, n, th, refine=False).value.real
                meas.append(mc["estimate"])
                exp.append(det)
                zz = abs(mc["estimate"] - det) / mc["stderr"]
                z.append(zz)
                ok &= zz <= 3.0
    return Check(5, "MC cross-check n=2,3", ok, meas, exp, "3 stderr", details={"z": z})


@_timed
def criterion_6():
    """Marchenko-Pastur limit of the theta = 0 kernel at n = 40."""
    rows = fredholm.mp_check(40, (0.25, 0.5, 0.75, 1.5))
    ok = True
    for y, v, t in rows:
        if t > 0:
            ok &= abs(v / t - 1.0) < 0.05
        else:
            ok &= abs(v) < 0.02
    return Check(
        6,
        "Marchenko-Pastur",
        ok,
        [r[1] for r in rows],
        [r[2] for r in rows],
        "rel 5% inside, abs 0.02 outside",
    )


@_timed
def criterion_7():
    """-log Q_n(0.5)/n^2 against F(0.5, 0.3) at n = 8 and 16."""
    th, s = 0.3, 0.5
    F = rate.big_F(rate.RateQuery(s, th), refine=False).F
    meas, ok = [], True
    for n, tol in ((8, 0.25), (16, 0.15)):
        q = fredholm.step_det(s, n, th, refine=False).value.real
        v = -math.log(q) / n**2
        meas.append(v)
        ok &= abs(v / F - 1.0) < tol
    return Check(7, "rate trend of -log Q/n^2", ok, meas, F, "25% (n=8), 15% (n=16)")


@_timed
def criterion_8():
    """|log Q~ - log Q|/n^2 non-increasing up to a factor 1.5 over n = 4, 8, 16."""
    rows = fredholm.ansatz_gap(0.5, 0.3, (4, 8, 16))
    gaps = [r["gap_over_n2"] for r in rows]
    ok = all(b <= 1.5 * a for a, b in zip(gaps, gaps[1:]))
    return Check(
        8,
        "smoothed vs step gap trend",
        ok,
        gaps,
        "decreasing",
        "slack 1.5",
        details={"rows": rows},
    )


@_timed
def criterion_9(samples=2000, seed=7):
    """Mean slope -2 psi(0.5) and variance exponent of log Z_n."""
    ns = (50, 100, 200)
    means = [polymer.mc_summary(polymer.SimConfig(n, 0.5, samples, seed)).mean_logZ for n in ns]
    slope = float(np.polyfit(ns, means, 1)[0])
    target = float(-2.0 * digamma(0.5).real)
    vn = (32, 64, 128, 256)
    vars_ = [polymer.mc_summary(polymer.SimConfig(n, 0.5, samples, seed + 1)).var_logZ for n in vn]
    vslope = float(np.polyfit(np.log(vn), np.log(vars_), 1)[0])
    ok = abs(slope / target - 1.0) < 0.03 and 0.5 <= vslope <= 0.85
    return Check(
        9,
        "mean and variance order",
        ok,
        {"mean_slope": slope, "var_slope": vslope},
        {"mean_slope": target, "var_slope": "[0.5, 0.85]"},
        "3% / interval",
    )


def _brute_force(logd, combine):
    n = logd.shape[0]
    best = None
    # paths are choices of n-1 down steps among 2n-2 moves
    from itertools import combinations

    for downs in combinations(range(2 * n - 2), n - 1):
        i = j = 0
        acc = [logd[0, 0]]
        dset = set(downs)
        for k in range(2 * n - 2):
            if k in dset:
                i += 1
            else:
                j += 1
            acc.append(logd[i, j])
        val = sum(acc)
        best = val if best is None else combine(best, val)
    return best


@_timed
def criterion_10():
    """Invariant suites in condensed form."""
    rng = np.random.default_rng(3)
    res = {}
    z = rng.uniform(0.1, 20, 10**4) + 1j * rng.uniform(-20, 20, 10**4)
    rec = np.abs(digamma(z + 1) - digamma(z) - 1 / z)
    res["recurrence"] = float(rec.max())
    zr = rng.uniform(-5, 5, 200) + 1j * rng.uniform(-5, 5, 200)
    refl = max(
        float(np.max(np.abs(f(np.conj(zr)) - np.conj(f(zr))) / (1 + np.abs(f(zr)))))
        for f in (digamma, trigamma, tetragamma)
    )
    res["reflection"] = refl
    odd = 0.0
    for th in (0.0, 0.3):
        p = phase.PhaseParams(1.0, th)
        zz = rng.uniform(-3, 3, 200) + 1j * rng.uniform(-1.5, 1.5, 200)
        odd = max(odd, float(np.max(np.abs(phase.h_eval(0, -zz, p) + phase.h_eval(0, zz, p)))))
    res["h_odd"] = odd
    x = np.linspace(0.01, 10, 400)
    pos = min(
        float(np.min((1j * phase.h_eval(2, x, phase.PhaseParams(1.0, th))).real))
        for th in (0.1, 0.3, 0.5)
    )
    res["ih2_min"] = pos
    s, th = 0.6, 0.2
    rr = rate.big_F(rate.RateQuery(s, th), refine=False)
    xg = 0.3 * rr.b
    jump = phase.g_eval(xg + 1e-7j, s, th, rr.b) + phase.g_eval(xg - 1e-7j, s, th, rr.b)
    res["g_jump"] = abs(jump - phase.h_eval(0, xg, phase.PhaseParams(s, th)))
    g1 = 1e3 * phase.g_eval(1e3, s, th, rr.b)
    res["g1_minus_if"] = abs(g1 - (-1j * rr.f))
    bs = [rate.solve_b(rate.RateQuery(v, 0.3))[0] for v in (0.2, 0.4, 0.6, 0.8, 1.0)]
    res["b_monotone"] = bool(all(a > b for a, b in zip(bs, bs[1:])))
    brute = 0.0
    for n in (1, 2, 3, 4):
        for seed in range(5):
            ld = polymer.log_weight_field(n, 0.4, seed)
            lz = polymer.log_partition(n, 0.4, polymer.CounterRNG(seed))
            brute = max(brute, abs(lz - _brute_force(ld, np.logaddexp)) / max(1.0, abs(lz)))
            w = polymer.exp_weight_field(n, seed)
            lp = polymer.lpp_time(n, polymer.CounterRNG(seed))
            brute = max(brute, abs(lp - _brute_force(w, max)))
    res["brute_force"] = brute
    q = rate.QuadratureSpec()
    q2 = q.doubled()
    st = 0.0
    for sv in (0.4, 0.7):
        b1, _ = rate.solve_b(rate.RateQuery(sv, 0.3, q))
        b2, _ = rate.solve_b(rate.RateQuery(sv, 0.3, q2))
        f1 = rate.f_value(sv, 0.3, b1, q)
        f2 = rate.f_value(sv, 0.3, b2, q2)
        st = max(st, abs(b1 / b2 - 1), abs(f1 / f2 - 1))
    res["doubling"] = st
    tol = {
        "recurrence": 1e-12,
        "reflection": 1e-12,
        "h_odd": 1e-12,
        "ih2_min": "> 0",
        "g_jump": 1e-6,
        "g1_minus_if": 1e-6,
        "b_monotone": True,
        "brute_force": 1e-10,
        "doubling": 1e-8,
    }
    ok = (
        res["recurrence"] < 1e-12
        and res["reflection"] < 1e-12
        and res["h_odd"] < 1e-12
        and res["ih2_min"] > 0
        and res["g_jump"] < 1e-6
        and res["g1_minus_if"] < 1e-6
        and res["b_monotone"]
        and res["brute_force"] < 1e-10
        and res["doubling"] < 1e-8
    )
    return Check(10, "invariant suites", ok, res, "see tolerance", tol)


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run_criterion(k):
    return CRITERIA[k]()


def run_all(ids=None, echo=None):
    out = []
    for k in ids or sorted(CRITERIA):
        chk = run_criterion(k)
        if echo is not None:
            echo(chk.line())
        out.append(chk)
    return out
