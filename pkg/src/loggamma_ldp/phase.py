"""Phase function h(zeta; s, theta), its sign regions, and the g/q functions.

    h(zeta) = log Gamma(theta(1 - i zeta/2)) - log Gamma(theta(1 + i zeta/2)) - i s zeta

with the theta -> 0 limit log(1 + i zeta/2) - log(1 - i zeta/2) - i s zeta.
h is odd in zeta.  g solves the scalar jump problem g_+ + g_- = h on [-b, b]
with g -> 0 at infinity:

    g(zeta) = -(a(zeta)/2 pi) int_{-b}^{b} h(u) / (sqrt(b^2 - u^2) (u - zeta)) du,
    a(zeta) = sqrt(zeta - b) sqrt(zeta + b),

and q = g - h/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError
from .quadrature import chebyshev1
from .special_fn import digamma, log_gamma, trigamma

__all__ = [
    "PhaseParams",
    "SignGrid",
    "h_eval",
    "sign_grid",
    "a_root",
    "g_eval",
    "q_eval",
    "q_prime_zero_temp",
]

SIGN_TOL = 1e-9
NEAR_CUT = 0.05
_SING_TOL = 1e-12


@dataclass(frozen=True)
class PhaseParams:
    s: float
    theta: float = 0.0

    def __post_init__(self):
        if not self.s > 0:
            raise DomainError(f"s must be positive, got {self.s}")
        if not self.theta >= 0:
            raise DomainError(f"theta must be >= 0, got {self.theta}")


def _check_singular(zeta, theta):
    # singular points sit on the imaginary axis at +-2i(1 + k/theta)
    on_axis = np.abs(zeta.real) < _SING_TOL
    if not np.any(on_axis):
        return
    y = np.abs(zeta.imag[on_axis])
    if theta == 0.0:
        bad = np.abs(y - 2.0) < _SING_TOL
    else:
        k = np.round((y / 2.0 - 1.0) * theta)
        bad = (k >= 0) & (np.abs(y - 2.0 * (1.0 + k / theta)) < _SING_TOL)
    if np.any(bad):
        raise SingularityError("h is singular at this zeta")


def h_eval(order, zeta, p: PhaseParams):
    """h (order 0), h' (order 1) or h'' (order 2) at zeta (scalar or array)."""
    if order not in (0, 1, 2):
        raise DomainError(f"order must be 0, 1 or 2, got {order}")
    z = np.asarray(zeta, dtype=np.complex128)
    zz = np.atleast_1d(z)
    _check_singular(zz, p.theta)
    s, th = p.s, p.theta
    if th == 0.0:
        if order == 0:
            res = np.log1p(0.5j * zz) - np.log1p(-0.5j * zz) - 1j * s * zz
        elif order == 1:
            res = 4j / (zz * zz + 4.0) - 1j * s
        else:
            res = -8j * zz / (zz * zz + 4.0) ** 2
    else:
        zm = th * (1.0 - 0.5j * zz)
        zp = th * (1.0 + 0.5j * zz)
        if order == 0:
            res = log_gamma(zm) - log_gamma(zp) - 1j * s * zz
        elif order == 1:
            res = -1j * (0.5 * th * (digamma(zm) + digamma(zp)) + s)
        else:
            res = 0.25 * th * th * (trigamma(zp) - trigamma(zm))
    res = np.asarray(res).reshape(z.shape)
    return complex(res) if res.ndim == 0 else res


# --------------------------------------------------------------------------
# sign regions of Re h(zeta; s, 0)


@dataclass(frozen=True)
class SignGrid:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int
    ny: int
    cells: np.ndarray  # shape (ny, nx), row k has Im zeta = im[k]

    @property
    def re(self):
        return np.linspace(self.re_min, self.re_max, self.nx)

    @property
    def im(self):
        return np.linspace(self.im_min, self.im_max, self.ny)

    def rows(self):
        """(re, im, sign) triples, row-major with Im ascending."""
        re, im = self.re, self.im
        for k in range(self.ny):
            for j in range(self.nx):
                yield re[j], im[k], int(self.cells[k, j])


def sign_grid(s, re_min=-6.0, re_max=6.0, im_min=-6.0, im_max=6.0, nx=121, ny=121):
    """sign(Re h(zeta; s, 0)) on a rectangular grid; 0 inside the |Re h| < 1e-9 band."""
    if nx < 2 or ny < 2:
        raise DomainError("grid needs nx, ny >= 2")
    if not (re_max > re_min and im_max > im_min):
        raise DomainError("empty grid bounds")
    p = PhaseParams(s, 0.0)
    re = np.linspace(re_min, re_max, nx)
    im = np.linspace(im_min, im_max, ny)
    Z = re[None, :] + 1j * im[:, None]
    for pole in (2j, -2j):
        near = np.abs(Z - pole) < 1e-9
        Z = np.where(near, Z + 2e-9, Z)
    val = h_eval(0, Z, p).real
    cells = np.where(np.abs(val) < SIGN_TOL, 0, np.sign(val)).astype(np.int8)
    return SignGrid(re_min, re_max, im_min, im_max, nx, ny, cells)


# --------------------------------------------------------------------------
# g and q


def a_root(zeta, b):
    """a(zeta) = sqrt((zeta - b)(zeta + b)), cut on [-b, b], a ~ zeta at infinity."""
    z = np.asarray(zeta, dtype=np.complex128)
    return np.sqrt(z - b) * np.sqrt(z + b)


def _on_cut(z, b):
    return (z.imag == 0) & (np.abs(z.real) <= b)


def _gq(zeta, s, theta, b, m, want_q):
    if m < 16:
        raise DomainError("g/q quadrature needs m >= 16")
    if not b > 0:
        raise DomainError("b must be positive")
    p = PhaseParams(s, theta)
    z = np.atleast_1d(np.asarray(zeta, dtype=np.complex128))
    if np.any(_on_cut(z, b)):
        raise DomainError("zeta lies on the cut [-b, b]")
    u = b * chebyshev1(m)
    hu = h_eval(0, u, p)
    a = a_root(z, b)
    dist = np.where(
        np.abs(z.real) <= b, np.abs(z.imag), np.abs(z - np.sign(z.real) * b)
    )
    near = dist < NEAR_CUT * b
    out = np.empty_like(z)
    far = ~near
    if np.any(far):
        zf = z[far]
        g = -a[far] / (2 * m) * (hu[None, :] / (u[None, :] - zf[:, None])).sum(axis=1)
        out[far] = g - 0.5 * h_eval(0, zf, p) if want_q else g
    if np.any(near):
        # subtract h(zeta): int du/(sqrt(b^2-u^2)(u-zeta)) = -pi/a(zeta)
        zn = z[near]
        hz = h_eval(0, zn, p)
        diff = (hu[None, :] - hz[:, None]) / (u[None, :] - zn[:, None])
        q = -a[near] / (2 * m) * diff.sum(axis=1)
        out[near] = q if want_q else q + 0.5 * hz
    out = out.reshape(np.shape(zeta))
    return complex(out) if out.ndim == 0 else out


def g_eval(zeta, s, theta, b, m=64):
    """g(zeta; s, theta) off the cut [-b, b] by Gauss-Chebyshev-I with m nodes."""
    return _gq(zeta, s, theta, b, m, False)


def q_eval(zeta, s, theta, b, m=64):
    """q = g - h/2."""
    return _gq(zeta, s, theta, b, m, True)


def q_prime_zero_temp(zeta, s, b):
    """q'(zeta; s, 0) = i s zeta a(zeta) / (2 (zeta^2 + 4))."""
    z = np.asarray(zeta, dtype=np.complex128)
    zz = np.atleast_1d(z)
    if np.any(_on_cut(zz, b)):
        raise DomainError("zeta lies on the cut [-b, b]")
    _check_singular(zz, 0.0)
    res = (1j * s * zz * a_root(zz, b) / (2.0 * (zz * zz + 4.0))).reshape(z.shape)
    return complex(res) if res.ndim == 0 else res
