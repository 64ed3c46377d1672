"""Nystrom evaluation of the Fredholm determinants attached to the polymer.

Three determinants are computed:

* laplace_det: E exp(-u Z_n) = det(I + K_n^{u,theta}) on a circle around -theta,
  with K(v, v') = (2 pi i)^-2 int_l dw pi u^(w-v) / sin(pi(v-w)) W(w)/W(v) / (w-v')
  and W(z) = Gamma(theta - z)^n / Gamma(theta + z)^n.
* step_det: Q_n(s) = det(1 - L)_{L^2(s, inf)} with the rescaled kernel
  L(y, y') = (2 pi i)^-2 int_Sigma du int dv What(v)/What(u) e^(-vy+uy') / (v-u),
  What(z) = Gamma(theta(1 - z/2n))^n / Gamma(theta(1 + z/2n))^n.
* smoothed_det: det(1 - sigma L) on L^2(R) with the sigmoid weight
  sigma(y) = 1/(1 + exp(-(2n/theta)(y - s))); it equals E exp(-e^{-2ns/theta} Z_n).

The u-contour Sigma is a circle around -2n.  The v-integral is taken along a
contour bent through the saddle point of What(v) e^(-vy), one contour per
row y; a straight vertical line is available as well but loses everything to
cancellation once n is moderately large.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import lu_factor
from scipy.optimize import brentq

from .errors import ContourError, DomainError, KernelOverflowError, TruncationError
from .quadrature import gl_panels, trapezoid_circle
from .special_fn import digamma, log_gamma

__all__ = [
    "ContourSpec",
    "NystromGrid",
    "DetResult",
    "laplace_det",
    "rescaled_kernel",
    "kernel_matrix",
    "step_det",
    "smoothed_det",
    "ansatz_gap",
    "mp_density",
    "mp_check",
]

LOG_OVERFLOW = 700.0
TAIL_TOL = 1e-10
YTAIL_TOL = 1e-6
YTAIL_TARGET = 1e-10
PAD_EPS = 1e-14
ETA_CAP = 200.0
PANEL_SCALE = 8.0
RAY_DROP = 40.0
MAX_CONTOUR_NODES = 200_000


# --------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class NystromGrid:
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes and weights differ in length")

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class ContourSpec:
    """Integration contour description.

    kinds: ``circle`` (center, radius, m trapezoid nodes), ``vline`` (Re = c,
    |Im| <= v_cut, panels of m Gauss-Legendre nodes), ``halfline``
    ([origin, origin + y_cut], panels of m nodes) and ``saddle`` (per-row
    steepest-descent-like contour for the rescaled kernel, about ``per_unit``
    nodes per unit of length in v/2n).  panels = 0 selects an automatic count.
    A vline with h_min > 0 uses graded panels: width h_min at Im = 0, growing
    geometrically up to the uniform width 2 v_cut / panels.
    """

    kind: str
    center: complex = 0j
    radius: float = 0.0
    c: float = 0.0
    v_cut: float = 0.0
    origin: float = 0.0
    y_cut: float = 0.0
    m: int = 32
    panels: int = 0
    per_unit: float = 12.0
    h_min: float = 0.0

    def __post_init__(self):
        if self.kind not in ("circle", "vline", "halfline", "saddle"):
            raise ContourError(f"unknown contour kind {self.kind!r}")
        if self.m < 8:
            raise ContourError("contours need m >= 8 nodes")
        if self.kind == "circle" and not self.radius > 0:
            raise ContourError("circle radius must be positive")
        if self.kind == "vline" and not self.v_cut > 0:
            raise ContourError("vline needs v_cut > 0")
        if self.kind == "halfline" and not self.y_cut > 0:
            raise ContourError("halfline needs y_cut > 0")

    @classmethod
    def circle(cls, center, radius, m=64):
        return cls("circle", center=complex(center), radius=float(radius), m=int(m))

    @classmethod
    def vline(cls, c, v_cut, m=32, panels=0, h_min=0.0):
        return cls(
            "vline", c=float(c), v_cut=float(v_cut), m=int(m), panels=int(panels), h_min=float(h_min)
        )

    @classmethod
    def halfline(cls, origin, y_cut, m=32, panels=0):
        return cls(
            "halfline", origin=float(origin), y_cut=float(y_cut), m=int(m), panels=int(panels)
        )

    @classmethod
    def saddle(cls, per_unit=12.0, m=32):
        return cls("saddle", per_unit=float(per_unit), m=int(m))

    def refined(self):
        """Same contour with twice the nodes."""
        if self.kind == "circle":
            return replace(self, m=2 * self.m)
        if self.kind == "saddle":
            return replace(self, per_unit=2 * self.per_unit)
        return replace(self, panels=2 * max(self.panels, 1), h_min=0.5 * self.h_min)

    def grid(self):
        if self.kind == "circle":
            z, dz = trapezoid_circle(self.center, self.radius, self.m)
            return NystromGrid(z, dz)
        if self.kind == "vline":
            p = max(self.panels, 1)
            if self.h_min > 0:
                edges = _graded_edges(self.v_cut, self.h_min, 2 * self.v_cut / p)
            else:
                edges = np.linspace(-self.v_cut, self.v_cut, p + 1)
            t, w = gl_panels(edges, self.m)
            return NystromGrid(self.c + 1j * t, 1j * w)
        if self.kind == "halfline":
            p = max(self.panels, 1)
            edges = np.linspace(self.origin, self.origin + self.y_cut, p + 1)
            y, w = gl_panels(edges, self.m)
            return NystromGrid(y.astype(complex), w.astype(complex))
        raise ContourError("saddle contours depend on the row and have no fixed grid")


def _graded_edges(T, h0, hmax, growth=1.15):
    """Symmetric panel edges on [-T, T], width h0 at 0 growing to hmax."""
    e = [0.0]
    h = min(h0, hmax)
    while e[-1] < T:
        e.append(min(T, e[-1] + h))
        h = min(hmax, h * growth)
    pos = np.array(e)
    return np.concatenate([-pos[:0:-1], pos])


@dataclass(frozen=True)
class DetResult:
    value: complex
    imag_residual: float
    refine_delta: float
    dims: int

    def to_dict(self):
        return {
            "value_re": float(self.value.real),
            "value_im": float(self.value.imag),
            "imag_residual": float(self.imag_residual),
            "refine_delta": float(self.refine_delta),
            "dims": int(self.dims),
        }


def _det(M):
    """Determinant through LU with partial pivoting."""
    lu, piv = lu_factor(M, check_finite=True)
    d = np.diag(lu)
    sign = (-1.0) ** np.count_nonzero(piv != np.arange(len(piv)))
    return complex(sign * np.prod(d))


def _result(val, ref, dims):
    delta = abs(val - ref) if ref is not None else float("nan")
    return DetResult(val, abs(val.imag), delta, dims)


def _check_n_theta(n, theta, lo=0.0):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if not (lo <= theta < 1.0):
        raise DomainError(f"theta must lie in [{lo}, 1), got {theta}")


# --------------------------------------------------------------------------
# Laplace-transform determinant


def _log_W(z, n, theta):
    return n * (log_gamma(theta - z) - log_gamma(theta + z))


def _default_ell(u, n, theta, r):
    c = 0.5 * ((-theta + r) + min(theta, 1.0 - theta - r))
    lu = abs(math.log(u))
    # |pi/sin| decays like exp(-pi |t|); W(c+it) grows at most like |t|^(2n max(-c,0))
    grow = 2.0 * n * max(-c, 0.0)
    T = 40.0
    while math.pi * T - grow * math.log(T) < math.log(1.0 / PAD_EPS) + 5.0:
        T *= 1.25
    omega = lu + 2.0 * n * math.log1p(T) + 1.0
    panels = int(math.ceil(2.0 * T * (1.0 + omega / (6.0 * math.pi))))
    # the Cauchy factor 1/(w - v') is sharp when Sigma is close to the line
    return ContourSpec.vline(c, T, 32, panels, h_min=1.5 * (c + theta - r))


def _laplace_matrix(u, n, theta, sig, ell):
    v, dv = sig.grid().nodes, sig.grid().weights
    g = ell.grid()
    w, dw = g.nodes, g.weights
    lu = math.log(u)
    lWv = _log_W(v, n, theta)
    lWw = _log_W(w, n, theta)
    D = v[:, None] - w[None, :]
    A = np.pi * np.exp((w[None, :] - v[:, None]) * lu - lWv[:, None]) / np.sin(np.pi * D)
    C = (dw * np.exp(lWw))[:, None] / (w[:, None] - v[None, :])
    K = (A @ C) / (2j * np.pi) ** 2
    # tail of the truncated line: |integrand| at the ends times its decay length 1/pi
    ends = [0, len(w) - 1]
    tail = np.abs(A[:, ends][:, :, None] * C[ends][None, :, :] / dw[ends][None, :, None])
    tail = float(tail.max()) / np.pi / (4 * np.pi**2)
    sq = np.sqrt(dv)
    return np.eye(len(v)) + sq[:, None] * K * sq[None, :], tail


def laplace_det(u, n, theta, sigma=None, ell=None, refine=True):
    """E exp(-u Z_n(theta)) as det(I + K_n^{u,theta}) on L^2(Sigma).

    sigma: circle around -theta with radius < theta (default radius theta/2,
    64 nodes).  ell: vertical line Re w = c with -theta + r < c < theta and
    c < 1 - theta - r, so that the poles of 1/sin(pi(v - w)) stay off it.
    """
    _check_n_theta(n, theta, lo=1e-300)
    if not u > 0:
        raise DomainError("u must be positive")
    sig = sigma or ContourSpec.circle(-theta, 0.5 * theta, 64)
    if sig.kind != "circle" or abs(sig.center + theta) > 1e-12 or not sig.radius < theta:
        raise ContourError("Sigma must be a circle around -theta with radius < theta")
    r = sig.radius
    ln = ell or _default_ell(u, n, theta, r)
    if ln.kind != "vline":
        raise ContourError("ell must be a vertical line")
    if not (-theta + r < ln.c < theta and ln.c < 1.0 - theta - r):
        raise ContourError(
            f"line Re w = {ln.c} must satisfy {-theta + r:.6g} < c < "
            f"{min(theta, 1 - theta - r):.6g}"
        )
    if ln.panels == 0:
        ln = replace(ln, panels=_default_ell(u, n, theta, r).panels)
        if ln.h_min == 0:
            ln = replace(ln, h_min=1.5 * (ln.c + theta - r))
    M, tail = _laplace_matrix(u, n, theta, sig, ln)
    if tail > TAIL_TOL:
        raise TruncationError(f"line truncation tail {tail:.3g} exceeds {TAIL_TOL:g}")
    val = _det(M)
    ref = None
    if refine:
        M2, _ = _laplace_matrix(u, n, theta, sig.refined(), ln.refined())
        ref = _det(M2)
    return _result(val, ref, len(sig.grid()))


# --------------------------------------------------------------------------
# rescaled kernel


def _log_What(z, n, theta):
    z = np.asarray(z, dtype=np.complex128)
    if theta == 0.0:
        return n * (np.log1p(z / (2 * n)) - np.log1p(-z / (2 * n)))
    return n * (log_gamma(theta * (1.0 - z / (2 * n))) - log_gamma(theta * (1.0 + z / (2 * n))))


def _s_star(theta):
    return 1.0 if theta == 0.0 else float(-theta * digamma(theta).real)


def _saddle(y, theta):
    """Saddle of What(2n w) e^{-2n w y} in w = v/2n.

    Returns ('imag', eta) for a conjugate pair +-i eta (y < s*) and
    ('real', w) with 0 <= w < 1 otherwise.
    """
    if y < _s_star(theta):
        if theta == 0.0:
            return "imag", math.sqrt(1.0 / y - 1.0)

        def g(e):
            return theta * digamma(theta * (1.0 + 1j * e)).real + y

        hi = 1.0
        while g(hi) < 0:
            hi *= 2.0
            if hi > 1e8:
                raise ContourError(f"row y={y} lies too far in the left tail")
        return "imag", brentq(g, 0.0, hi, xtol=1e-10)
    if theta == 0.0:
        return "real", math.sqrt(1.0 - 1.0 / y)

    def g(w):
        return -theta * (digamma(theta * (1 - w)) + digamma(theta * (1 + w))).real - 2 * y

    if g(0.0) >= 0:
        return "real", 0.0
    return "real", brentq(g, 0.0, 1.0 - 1e-12, xtol=1e-13)


def _eta(y, theta):
    kind, val = _saddle(y, theta)
    return val if kind == "imag" else 0.0


def _saddle_contour(y, n, theta, spec, gamma=0.05, beta=1.0):
    """v-nodes and dv for row y: vertical piece through the saddles plus two rays."""
    kind, val = _saddle(y, theta)
    x0 = max(gamma, val) if kind == "real" else gamma
    tau1 = 1.15 * val + 0.1 if kind == "imag" else 0.1

    def expo(w):
        return (_log_What(2 * n * w, n, theta) - 2 * n * y * w).real

    e0 = float(np.max(expo(x0 + 1j * np.linspace(0, tau1, 64))))
    T = 0.5
    while expo(x0 + beta * T + 1j * (tau1 + T)) > e0 - RAY_DROP:
        T *= 1.5
    m = spec.m
    pv = int(math.ceil(n * tau1 * spec.per_unit / m)) + 1
    ts, ws = gl_panels(np.linspace(-tau1, tau1, pv + 1), m)
    # rays: panels start at the segment width and grow geometrically up to
    # about one oscillation of e^{-2n y w} What(2n w), so long rays stay cheap
    h0 = T / (int(math.ceil(n * T * spec.per_unit / m)) + 2)
    hmax = max(h0, math.pi / (n * (abs(y) + theta + 1e-3)))
    edges = [0.0]
    h = h0
    while edges[-1] < T:
        edges.append(edges[-1] + h)
        h = min(1.1 * h, hmax)
        if (pv + 2 * len(edges)) * m > MAX_CONTOUR_NODES:
            raise ContourError(f"row y={y} lies too far in the left tail for n={n}")
    edges[-1] = max(edges[-1], T)
    tr, wr = gl_panels(np.array(edges), m)
    mid = 2 * n * (x0 + 1j * ts)
    dmid = 2j * n * ws
    up = 2 * n * (x0 + beta * tr + 1j * (tau1 + tr))
    dup = 2 * n * (beta + 1j) * wr
    lo = np.conj(up)
    dlo = -2 * n * (beta - 1j) * wr  # traversed upward, from far away to the segment
    return np.concatenate([lo[::-1], mid, up]), np.concatenate([dlo[::-1], dmid, dup])


def _vline_nodes(y, n, theta, spec):
    c = spec.c
    if not (0.0 < c < 2 * n) or (theta > 0 and not c < 2 * n * (1 - theta) / theta):
        raise ContourError(f"vertical line c={c} outside (0, min(2n, 2n(1-theta)/theta))")
    p = spec.panels
    if p == 0:
        omega = abs(y) + 1.0 + theta * math.log1p(spec.v_cut / n)
        p = int(math.ceil(spec.v_cut * omega / (4 * math.pi))) + 1
    t, w = gl_panels(np.linspace(-spec.v_cut, spec.v_cut, p + 1), spec.m)
    return c + 1j * t, 1j * w


def _default_sigma(n, rho=0.9, m=None):
    if m is None:
        m = 96 if n <= 2 else (128 if n < 8 else 256)
    return ContourSpec.circle(-2 * n, rho * 2 * n, m)


def _check_sigma(sig, n):
    if sig.kind != "circle" or abs(sig.center + 2 * n) > 1e-9 or not (0 < sig.radius < 2 * n):
        raise ContourError("Sigma must be a circle around -2n with radius < 2n")


def kernel_matrix(ys, yps, n, theta, sigma=None, vcontour=None, diag=False):
    """Matrix L(ys[i], yps[j]) of the rescaled kernel (or its diagonal)."""
    _check_n_theta(n, theta)
    sig = sigma or _default_sigma(n)
    _check_sigma(sig, n)
    vspec = vcontour or ContourSpec.saddle()
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    yps = np.atleast_1d(np.asarray(yps, dtype=float))
    u, du = sig.grid().nodes, sig.grid().weights
    lWu = _log_What(u, n, theta)
    eb = -lWu[None, :] + np.outer(yps, u)
    beta = eb.real.max(axis=1)
    B = np.exp(eb - beta[:, None]) * du[None, :] / (2j * np.pi)
    A = np.zeros((len(ys), len(u)), dtype=complex)
    alpha = np.zeros(len(ys))
    for i, y in enumerate(ys):
        if theta == 0.0 and y <= 0.0:
            # the v-integrand is then analytic to the left; the row vanishes
            continue
        if vspec.kind == "saddle":
            v, dv = _saddle_contour(y, n, theta, vspec)
        elif vspec.kind == "vline":
            v, dv = _vline_nodes(y, n, theta, vspec)
        else:
            raise ContourError("v-contour must be 'saddle' or 'vline'")
        ea = _log_What(v, n, theta) - v * y
        alpha[i] = ea.real.max()
        f = np.exp(ea - alpha[i]) * dv / (2j * np.pi)
        A[i] = f @ (1.0 / (v[:, None] - u[None, :]))
    if diag:
        if len(ys) != len(yps):
            raise ValueError("diag needs equal-length ys and yps")
        scale = alpha + beta
        if np.any(scale > LOG_OVERFLOW):
            raise KernelOverflowError("kernel magnitude exceeds exp(700)")
        return np.exp(scale) * np.einsum("ia,ia->i", A, B)
    scale = alpha[:, None] + beta[None, :]
    if np.any(scale > LOG_OVERFLOW):
        raise KernelOverflowError("kernel magnitude exceeds exp(700)")
    return np.exp(scale) * (A @ B.T)


def rescaled_kernel(y, y_prime, n, theta, sigma=None, vcontour=None):
    """Pointwise value of the rescaled kernel L_n^theta(y, y')."""
    return complex(kernel_matrix([y], [y_prime], n, theta, sigma, vcontour)[0, 0])


def mp_density(y):
    """Marchenko-Pastur density (2/pi) sqrt((1-y)/y) on (0, 1), zero elsewhere."""
    y = np.asarray(y, dtype=float)
    inside = (y > 0) & (y < 1)
    out = np.zeros_like(y)
    out[inside] = 2.0 / np.pi * np.sqrt((1.0 - y[inside]) / y[inside])
    return out


def mp_check(n=40, ys=(0.25, 0.5, 0.75, 1.5), theta=0.0):
    """Rows (y, L(y,y)/n, MP density) for the zero-temperature kernel."""
    ys = np.asarray(ys, dtype=float)
    d = kernel_matrix(ys, ys, n, theta, diag=True).real / n
    return [(float(y), float(v), float(t)) for y, v, t in zip(ys, d, mp_density(ys))]


# --------------------------------------------------------------------------
# step and smoothed determinants on a y-grid


def _march_edges(a, b, n, theta, breaks=(), fine=None):
    """Panel edges on [a, b].

    A row at y oscillates like exp(-2 i n eta y) (eta the saddle height), so a
    panel spans PANEL_SCALE/(n max(eta, 1)).  ``fine = (center, width)`` caps
    the panel width near a sigmoid center.
    """
    edges = [a]
    y = a
    stops = sorted(x for x in breaks if a < x < b) + [b]
    while y < b - 1e-14:
        width = PANEL_SCALE / (n * max(_eta(y, theta), 1.0))
        if fine is not None and abs(y - fine[0]) < 4 * fine[1] + width:
            width = min(width, fine[1])
        nxt = min(y + width, stops[0])
        if nxt >= stops[0] - 1e-14:
            nxt = stops.pop(0)
        edges.append(nxt)
        y = nxt
    return np.array(edges)


def _halfline(s, n, theta, grid):
    if grid is None:
        y_cut = s + 2.0 * _s_star(theta)
        grid = ContourSpec.halfline(s, y_cut)
    if grid.kind != "halfline":
        raise ContourError("step_det needs a halfline grid")
    if grid.y_cut < s + 2.0 * _s_star(theta) - 1e-12:
        raise ContourError("halfline y_cut must be at least s + 2 s*(theta)")
    return grid


def _grid_nodes(grid, a, n, theta):
    b = grid.origin + grid.y_cut
    if grid.panels:
        edges = np.linspace(a, b, grid.panels + 1)
    else:
        edges = _march_edges(a, b, n, theta)
    return gl_panels(edges, grid.m)


def _tail_mass(yhi, length, n, theta, sigma, vcontour):
    """int_{yhi}^{yhi+length} |L(y,y)| dy, a first-order bound on truncation."""
    y, w = gl_panels(np.linspace(yhi, yhi + length, 3), 16)
    d = kernel_matrix(y, y, n, theta, sigma, vcontour, diag=True)
    return float(np.sum(w * np.abs(d)))


def _weighted_det(y, w, n, theta, sigma, vcontour):
    L = kernel_matrix(y, y, n, theta, sigma, vcontour)
    sw = np.sqrt(w)
    return _det(np.eye(len(y)) - sw[:, None] * L * sw[None, :])


def step_det(s, n, theta, grid=None, sigma=None, vcontour=None, refine=True, check_tail=True):
    """Q_n^theta(s) = det(1 - L)_{L^2(s, inf)} on Gauss-Legendre panels of [s, s + y_cut]."""
    _check_n_theta(n, theta)
    if not s > 0:
        raise DomainError("s must be positive")
    auto = grid is None
    grid = _halfline(s, n, theta, grid)
    sig = sigma or _default_sigma(n)
    vc = vcontour or ContourSpec.saddle()
    if check_tail:
        for _ in range(6):
            tail = _tail_mass(s + grid.y_cut, grid.y_cut, n, theta, sig, vc)
            # default grids are extended well past the error threshold
            if tail <= YTAIL_TARGET or not auto:
                break
            grid = replace(grid, y_cut=2.0 * grid.y_cut)
        if tail > YTAIL_TOL:
            raise TruncationError(f"kernel mass {tail:.3g} beyond y_cut; enlarge y_cut")
    y, w = _grid_nodes(grid, s, n, theta)
    val = _weighted_det(y, w, n, theta, sig, vc)
    ref = None
    if refine:
        y2, w2 = _grid_nodes(replace(grid, m=2 * grid.m), s, n, theta)
        ref = _weighted_det(y2, w2, n, theta, sig, vc)
    return _result(val, ref, len(y))


def sigmoid(y, s, n, theta):
    """sigma_{s,n,theta}(y) = 1 / (1 + exp(-(2n/theta)(y - s)))."""
    x = (2.0 * n / theta) * (np.asarray(y, dtype=float) - s)
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def _smoothed_nystrom(s, n, theta, grid, sig, vc, refine):
    grid = _halfline(s, n, theta, grid)
    tau = theta / (2.0 * n)
    pad = tau * math.log(1.0 / PAD_EPS)
    y_lo = s - pad
    # rows deep in the left tail need very tall v-contours; stop where the
    # saddle height passes ETA_CAP/n and check that the cut-off weight is tiny
    if _eta(y_lo, theta) * n > ETA_CAP:
        y_lo = brentq(lambda y: _eta(y, theta) * n - ETA_CAP, y_lo, s, xtol=1e-10)
        d = abs(kernel_matrix([y_lo], [y_lo], n, theta, sig, vc, diag=True)[0])
        cut = float(sigmoid(y_lo, s, n, theta)) * tau * d
        if cut > 1e-9:
            raise TruncationError(
                f"left cut-off at y={y_lo:.4g} drops weight {cut:.3g}; use method='sigma'"
            )
    yhi = s + grid.y_cut

    def nodes(m):
        edges = _march_edges(y_lo, yhi, n, theta, breaks=(s,), fine=(s, 10.0 * tau))
        return gl_panels(edges, m)

    y, w = nodes(grid.m)
    val = _weighted_det(y, w * sigmoid(y, s, n, theta), n, theta, sig, vc)
    ref = None
    if refine:
        y2, w2 = nodes(2 * grid.m)
        ref = _weighted_det(y2, w2 * sigmoid(y2, s, n, theta), n, theta, sig, vc)
    return _result(val, ref, len(y))


def _smoothed_sigma_matrix(s, n, theta, sig, per):
    # the y-integral is done in closed form:
    # int sigma(y) e^{-(v-u) y} dy = e^{-(v-u) s} (pi/kappa) / sin(pi (v-u)/kappa)
    kappa = 2.0 * n / theta
    u, du = sig.grid().nodes, sig.grid().weights
    right = -2 * n + sig.radius
    c_hi = min(2.0 * n, kappa - 2 * n - sig.radius)
    if not c_hi > right:
        raise ContourError("no admissible line between Sigma and the sigmoid poles")
    c = 0.5 * (max(right, 0.0) + c_hi)
    T = (math.log(1.0 / PAD_EPS) + 10.0) * kappa / math.pi
    omega = s + theta * math.log1p(T / n) + 1.0
    p = int(math.ceil(2 * T * omega * per / (8 * math.pi))) + 1
    t, wt = gl_panels(np.linspace(-T, T, p + 1), 32)
    v = c + 1j * t
    fv = np.exp(_log_What(v, n, theta) - v * s) * 1j * wt / (2j * np.pi)
    g = np.exp(-_log_What(u, n, theta) + u * s) / (2j * np.pi)
    D = v[:, None] - u[None, :]
    S = (np.pi / kappa) / np.sin(np.pi * D / kappa)
    K = g[:, None] * ((S * fv[:, None]).T @ (1.0 / D))
    sq = np.sqrt(du)
    return np.eye(len(u)) - sq[:, None] * K * sq[None, :]


def _smoothed_sigma(s, n, theta, sig, refine):
    val = _det(_smoothed_sigma_matrix(s, n, theta, sig, 1.0))
    ref = _det(_smoothed_sigma_matrix(s, n, theta, sig.refined(), 2.0)) if refine else None
    return _result(val, ref, len(sig.grid()))


def smoothed_det(
    s, n, theta, grid=None, sigma=None, vcontour=None, refine=True, method="sigma"
):
    """Q~_n^theta(s) = det(1 - sigma_{s,n,theta} L) on L^2(R).

    method='nystrom' discretises y on [s - pad, s + y_cut] with
    pad = (theta/2n) log(1e14) and weights w_i sigma(y_i) split symmetrically.
    method='sigma' moves the determinant to L^2(Sigma) and integrates the
    sigmoid in closed form; it needs no left cut-off and is much cheaper.
    """
    _check_n_theta(n, theta, lo=1e-300)
    if not s > 0:
        raise DomainError("s must be positive")
    if method == "sigma":
        sig = sigma or ContourSpec.circle(-2 * n, min(0.9, 0.5 * (1 / theta - 1)) * 2 * n, 128)
        _check_sigma(sig, n)
        return _smoothed_sigma(s, n, theta, sig, refine)
    if method != "nystrom":
        raise DomainError(f"unknown method {method!r}")
    sig = sigma or _default_sigma(n)
    _check_sigma(sig, n)
    return _smoothed_nystrom(s, n, theta, grid, sig, vcontour or ContourSpec.saddle(), refine)


def ansatz_gap(s, theta, n_list, refine=False, method="sigma"):
    """Rows {n, logQ, logQtilde, gap_over_n2} comparing step and smoothed determinants."""
    rows = []
    for n in n_list:
        q = step_det(s, n, theta, refine=refine).value.real
        qt = smoothed_det(s, n, theta, refine=refine, method=method).value.real
        lq, lqt = math.log(abs(q)), math.log(abs(qt))
        rows.append(
            {"n": int(n), "logQ": lq, "logQtilde": lqt, "gap_over_n2": abs(lqt - lq) / n**2}
        )
    return rows
