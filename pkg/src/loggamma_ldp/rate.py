"""Rate function F(s, theta) of the log-Gamma polymer lower tail.

For 0 < s < s*(theta) = -theta psi(theta) the endpoint b(s, theta) > 0 is the
root of

    H(b) = int_0^1 ih'(b u) / sqrt(1 - u^2) du,
    ih'(x) = (theta/2) [psi(theta(1 - i x/2)) + psi(theta(1 + i x/2))] + s,

which is strictly increasing in b.  From b one gets

    f(s, theta) = b^2/(2 pi) int_0^1 (theta psi(theta + i u theta b/2)
                  + theta psi(theta - i u theta b/2) + 2 s) sqrt(1 - u^2) du

and F(s, theta) = -int_s^{s*} f(t, theta) dt.  At theta = 0 everything is
available in closed form and the solver is bypassed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, NoRootError, QuadratureError
from .quadrature import chebyshev1, chebyshev2, gauss_legendre
from .special_fn import digamma, tetragamma, trigamma

__all__ = [
    "THETA_MAX",
    "QuadratureSpec",
    "RateQuery",
    "RateResult",
    "TableRow",
    "s_star",
    "H_value",
    "solve_b",
    "f_value",
    "big_F",
    "zero_temp_closed_forms",
    "edge_asymptotics",
    "rate_table",
]

THETA_MAX = 1.0
B_TOL = 1e-12
H_TOL = 1e-10
IMAG_TOL = 1e-9
B_LIMIT = 1e6
EDGE_ASYMPTOTIC = 1e-8


@dataclass(frozen=True)
class QuadratureSpec:
    m_cheb1: int = 64
    m_cheb2: int = 64
    m_legendre: int = 32
    panels: int = 8

    def __post_init__(self):
        for name in ("m_cheb1", "m_cheb2", "m_legendre", "panels"):
            if int(getattr(self, name)) < 8:
                raise DomainError(f"{name} must be >= 8")

    def doubled(self):
        return QuadratureSpec(
            2 * self.m_cheb1, 2 * self.m_cheb2, 2 * self.m_legendre, 2 * self.panels
        )


@dataclass(frozen=True)
class RateQuery:
    s: float
    theta: float
    quad: QuadratureSpec = QuadratureSpec()

    def __post_init__(self):
        check_theta(self.theta)
        st = s_star(self.theta)
        if not (self.s > 0.0):
            raise DomainError(f"s must be positive, got {self.s}")
        if self.s > st:
            raise DomainError(f"s={self.s} exceeds s*({self.theta})={st}")


@dataclass(frozen=True)
class RateResult:
    b: float
    f: float
    F: float
    s_star: float
    residual_H: float
    refine_delta: float


def check_theta(theta):
    if not (0.0 <= theta <= THETA_MAX) or math.isnan(theta):
        raise DomainError(f"theta must lie in [0, {THETA_MAX}], got {theta}")


def s_star(theta):
    """Right end s*(theta) = -theta psi(theta) of the window; s*(0) = 1."""
    check_theta(theta)
    if theta == 0.0:
        return 1.0
    return float(-theta * digamma(theta).real)


def zero_temp_closed_forms(s):
    """(b0, f0, F0) at theta = 0 for 0 < s <= 1."""
    if not (0.0 < s <= 1.0):
        raise DomainError(f"closed forms need 0 < s <= 1, got {s}")
    b0 = 2.0 * math.sqrt(max(1.0 / (s * s) - 1.0, 0.0))
    f0 = 2.0 - s - 1.0 / s
    F0 = -0.5 * s * s - 1.5 + 2.0 * s - math.log(s)
    return b0, f0, F0


def edge_asymptotics(s, theta):
    """Leading behaviour of (b, f, F) as s -> s*(theta) from below, theta > 0.

    b ~ 4 sqrt((s + theta psi)/(theta^3 psi''))
    f ~ 2 (s - s*)^2 / (theta^3 psi'')
    F ~ 2 (s + theta psi)^3 / (3 theta^3 psi'')
    """
    if not (0.0 < theta <= THETA_MAX):
        raise DomainError("edge asymptotics need theta > 0")
    d = s - s_star(theta)  # = s + theta psi(theta) <= 0
    p2 = float(tetragamma(theta).real)
    t3 = theta**3 * p2
    return 4.0 * math.sqrt(d / t3), 2.0 * d * d / t3, 2.0 * d**3 / (3.0 * t3)


# --------------------------------------------------------------------------
# endpoint equation


def _ihp(x, s, theta):
    """ih'(x) for real x (arrays); returns (value, max imaginary residual)."""
    zp = theta * (1.0 + 0.5j * x)
    zm = theta * (1.0 - 0.5j * x)
    val = 0.5 * theta * (digamma(zm) + digamma(zp)) + s
    val = np.asarray(val)
    return val.real, float(np.max(np.abs(val.imag), initial=0.0))


def _ihpp(x, theta):
    """ih''(x) = -(theta^2/2) Im psi'(theta(1 + i x/2)), positive for x > 0."""
    return -0.5 * theta**2 * np.asarray(trigamma(theta * (1.0 + 0.5j * x))).imag


def _H_many(b, s, theta, m):
    # the integrand is even in u, so int_0^1 = 1/2 int_{-1}^{1}
    x = chebyshev1(m)
    b = np.asarray(b, dtype=float)
    s = np.broadcast_to(np.asarray(s, dtype=float), b.shape)
    val, imag = _ihp(b[..., None] * x, s[..., None], theta)
    if imag > IMAG_TOL:
        raise QuadratureError(f"imaginary residual {imag:.3g} in H")
    return 0.5 * np.pi / m * val.sum(axis=-1)


def _Hprime_many(b, theta, m):
    x = chebyshev1(m)
    b = np.asarray(b, dtype=float)
    return 0.5 * np.pi / m * (x * _ihpp(b[..., None] * x, theta)).sum(axis=-1)


def H_value(b, s, theta, m=64):
    """H(b; s, theta) by Gauss-Chebyshev-I with m nodes (theta > 0)."""
    return float(_H_many(np.array([b], dtype=float), s, theta, m)[0])


def _solve_b_many(s, theta, m):
    """Vectorised bracket/bisection/Newton solve of H(b) = 0 for an array of s."""
    s = np.asarray(s, dtype=float)
    lo = np.zeros_like(s)
    hi = np.full_like(s, 4.0)
    h_hi = _H_many(hi, s, theta, m)
    while np.any(h_hi < 0):
        neg = h_hi < 0
        if np.any(hi[neg] * 2 > B_LIMIT):
            raise NoRootError(
                f"no root of H below b={B_LIMIT:g}; is s inside (0, s*)?"
            )
        lo[neg] = hi[neg]
        hi[neg] *= 2.0
        h_hi[neg] = _H_many(hi[neg], s[neg], theta, m)
    while np.any(hi - lo > B_TOL):
        mid = 0.5 * (lo + hi)
        pos = _H_many(mid, s, theta, m) >= 0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    b = 0.5 * (lo + hi)
    for _ in range(2):
        h = _H_many(b, s, theta, m)
        dh = _Hprime_many(b, theta, m)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dh > 0, b - h / dh, b)
        # keep the bracket guarantee: reject steps that leave it
        ok = (step >= lo - B_TOL) & (step <= hi + B_TOL)
        b = np.where(ok, step, b)
    return b, _H_many(b, s, theta, m)


def solve_b(q: RateQuery):
    """Endpoint b(s, theta) and the residual H(b)."""
    st = s_star(q.theta)
    if q.theta == 0.0:
        return zero_temp_closed_forms(q.s)[0], 0.0
    if q.s >= st:
        return 0.0, 0.0
    b, res = _solve_b_many(np.array([q.s]), q.theta, q.quad.m_cheb1)
    return float(b[0]), float(res[0])


def _f_many(s, theta, b, m):
    x, w = chebyshev2(m)
    b = np.asarray(b, dtype=float)
    s = np.asarray(s, dtype=float)
    z = 0.5j * theta * b[..., None] * x
    val = theta * (digamma(theta + z) + digamma(theta - z)) + 2.0 * s[..., None]
    val = np.asarray(val)
    imag = float(np.max(np.abs(val.imag), initial=0.0))
    if imag > IMAG_TOL:
        raise QuadratureError(f"imaginary residual {imag:.3g} in f")
    # even integrand: int_0^1 = 1/2 int_{-1}^{1}
    return b * b / (2.0 * np.pi) * 0.5 * (val.real * w).sum(axis=-1)


def f_value(s, theta, b, q: QuadratureSpec = QuadratureSpec()):
    """f(s, theta) given the endpoint b."""
    check_theta(theta)
    if theta == 0.0:
        return zero_temp_closed_forms(s)[1]
    return float(_f_many(np.array([s]), theta, np.array([b]), q.m_cheb2)[0])


def _f_along(t, theta, st, q):
    """f at the nodes t in (s, s*); the b-asymptotic is used right at the edge."""
    t = np.asarray(t, dtype=float)
    b = np.empty_like(t)
    edge = st - t < EDGE_ASYMPTOTIC
    if np.any(edge):
        t3 = theta**3 * float(tetragamma(theta).real)
        b[edge] = 4.0 * np.sqrt((t[edge] - st) / t3)
    if np.any(~edge):
        b[~edge] = _solve_b_many(t[~edge], theta, q.m_cheb1)[0]
    return _f_many(t, theta, b, q.m_cheb2)


def _F_integral(s, theta, st, q):
    width = st - s
    w = min(0.1 * width, 1e-2)
    edges = np.linspace(s, st - w, q.panels + 1)
    t_list, wt_list = [], []
    for a, c in zip(edges[:-1], edges[1:]):
        t, wt = gauss_legendre(a, c, q.m_legendre)
        t_list.append(t)
        wt_list.append(wt)
    t, wt = gauss_legendre(st - w, st, q.m_legendre)
    t_list.append(t)
    wt_list.append(wt)
    t = np.concatenate(t_list)
    wt = np.concatenate(wt_list)
    return float(-(wt * _f_along(t, theta, st, q)).sum())


def big_F(q: RateQuery, refine=True):
    """Full RateResult for one (s, theta); refine_delta = |F(m) - F(2m)|."""
    st = s_star(q.theta)
    if q.theta == 0.0:
        b0, f0, F0 = zero_temp_closed_forms(q.s)
        return RateResult(b0, f0, F0, st, 0.0, 0.0)
    if q.s >= st:
        return RateResult(0.0, 0.0, 0.0, st, 0.0, 0.0)
    b, res = solve_b(q)
    f = f_value(q.s, q.theta, b, q.quad)
    F = _F_integral(q.s, q.theta, st, q.quad)
    delta = float("nan")
    if refine:
        q2 = replace(q.quad, m_legendre=2 * q.quad.m_legendre)
        delta = abs(F - _F_integral(q.s, q.theta, st, q2))
    return RateResult(b, f, F, st, abs(res), delta)


@dataclass(frozen=True)
class TableRow:
    s: float
    theta: float
    result: RateResult | None
    error: str | None = None


def rate_table(s_grid, theta, quad: QuadratureSpec = QuadratureSpec(), refine=True):
    """One TableRow per grid point; failures are flagged, not raised."""
    rows = []
    for s in s_grid:
        s = float(s)
        try:
            res = big_F(RateQuery(s, theta, quad), refine=refine)
            rows.append(TableRow(s, theta, res))
        except (DomainError, NoRootError, QuadratureError) as exc:
            rows.append(TableRow(s, theta, None, f"{type(exc).__name__}: {exc}"))
    return rows
