"""Complex log-Gamma, digamma and the first two polygamma functions.

All routines accept scalars or numpy arrays (real or complex) and return
complex results of the broadcast shape; 0-d inputs give Python ``complex``.

For ``Re z >= 10`` the Stirling series with eight Bernoulli terms is used
directly.  Smaller real parts are lifted by the upward recurrence, and
``Re z < 0`` goes through the reflection formula.  The branch of
``log_gamma`` is the principal one: continuous on C minus (-inf, 0] and real
on the positive axis.
"""

from __future__ import annotations

import numpy as np

from .errors import PoleError, UnsupportedOrder

__all__ = ["log_gamma", "digamma", "polygamma", "trigamma", "tetragamma"]

STIRLING_THRESHOLD = 10.0

# B_2, B_4, ..., B_16
_BERNOULLI = np.array(
    [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ]
)
_K2 = 2.0 * np.arange(1, 9)
_LOGGAMMA_COEF = _BERNOULLI / (_K2 * (_K2 - 1.0))  # times z^-(2k-1)
_DIGAMMA_COEF = _BERNOULLI / _K2  # times z^-2k
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)
_LOG_PI = np.log(np.pi)


def _as_complex(z):
    return np.asarray(z, dtype=np.complex128)


def _out(res):
    if res.ndim == 0:
        return complex(res)
    return res


def _check_poles(z):
    bad = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(bad):
        where = z[bad].ravel()[0]
        raise PoleError(f"Gamma has a pole at z={where.real:g}")


def _horner(coef, w):
    """Sum coef[k] * w**k for k = 0..len-1 (w array)."""
    acc = np.zeros_like(w)
    for c in coef[::-1]:
        acc = acc * w + c
    return acc


def _lift(z):
    """Shift counts so that Re(z + count) >= STIRLING_THRESHOLD."""
    return np.maximum(0, np.ceil(STIRLING_THRESHOLD - z.real)).astype(np.int64)


# --------------------------------------------------------------------------
# Stirling kernels, valid for Re z >= STIRLING_THRESHOLD


def _loggamma_stirling(z):
    w = 1.0 / (z * z)
    tail = _horner(_LOGGAMMA_COEF, w) / z
    return (z - 0.5) * np.log(z) - z + _HALF_LOG_2PI + tail


def _digamma_stirling(z):
    w = 1.0 / (z * z)
    tail = _horner(_DIGAMMA_COEF, w) * w
    return np.log(z) - 0.5 / z - tail


def _trigamma_stirling(z):
    w = 1.0 / (z * z)
    # sum B_2k / z^(2k+1)
    tail = _horner(_BERNOULLI, w) * w / z
    return 1.0 / z + 0.5 * w + tail


def _tetragamma_stirling(z):
    w = 1.0 / (z * z)
    # -sum (2k+1) B_2k / z^(2k+2)
    tail = _horner((_K2 + 1.0) * _BERNOULLI, w) * w * w
    return -w - w / z - tail


# --------------------------------------------------------------------------
# right half plane: recurrence + Stirling


def _shifted(z, stirling, term):
    """Evaluate f(z) = f(z + N) + sum_k term(z + k) with N from _lift."""
    counts = _lift(z)
    acc = np.zeros_like(z)
    top = int(counts.max(initial=0))
    for k in range(top):
        m = counts > k
        if m.all():
            acc += term(z + k)
        else:
            acc[m] += term(z[m] + k)
    return stirling(z + counts) + acc


def _loggamma_right(z):
    # log Gamma(z) = log Gamma(z+N) - sum log(z+k); summing principal logs
    # keeps the branch continuous off the negative axis.
    return _shifted(z, _loggamma_stirling, lambda x: -np.log(x))


def _digamma_right(z):
    return _shifted(z, _digamma_stirling, lambda x: -1.0 / x)


def _trigamma_right(z):
    return _shifted(z, _trigamma_stirling, lambda x: 1.0 / (x * x))


def _tetragamma_right(z):
    return _shifted(z, _tetragamma_stirling, lambda x: -2.0 / (x * x * x))


# --------------------------------------------------------------------------
# left half plane: reflection


def _e2ipz(z):
    """exp(2 i pi z) for Im z >= 0 (bounded by 1)."""
    return np.exp(2j * np.pi * z)


def _upper(z):
    """Map z to the closed upper half plane; return (z_up, flipped)."""
    flip = z.imag < 0
    return np.where(flip, np.conj(z), z), flip


def _log_sinpi(z):
    """Principal log(sin(pi z)), stable for large |Im z|."""
    zu, flip = _upper(z)
    q = _e2ipz(zu)
    # sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
    val = np.log(0.5) + 0.5j * np.pi - 1j * np.pi * zu + np.log1p(-q)
    im = np.mod(val.imag + np.pi, 2.0 * np.pi) - np.pi
    # principal branch imaginary part lies in (-pi, pi]
    im = np.where(im == -np.pi, np.pi, im)
    val = val.real + 1j * im
    return np.where(flip, np.conj(val), val)


def _cot_pi(z):
    zu, flip = _upper(z)
    q = _e2ipz(zu)
    val = -1j * (1.0 + q) / (1.0 - q)
    return np.where(flip, np.conj(val), val)


def _csc2_pi(z):
    """1 / sin(pi z)^2."""
    zu, flip = _upper(z)
    q = _e2ipz(zu)
    val = -4.0 * q / (1.0 - q) ** 2
    return np.where(flip, np.conj(val), val)


def _loggamma_left(z):
    # log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z) + 2 pi i k,
    # with k fixed so the result matches the additive-recurrence branch.
    corr = np.copysign(2.0 * np.pi, z.imag) * np.floor(0.5 * z.real + 0.25)
    ls = _log_sinpi(z)
    on_cut = z.imag == 0
    if np.any(on_cut):
        # value on the cut is the limit from above
        x = z.real[on_cut]
        sin_neg = np.sin(np.pi * x) < 0
        arg = np.where(sin_neg, np.where(np.cos(np.pi * x) < 0, -np.pi, np.pi), 0.0)
        ls[on_cut] = ls[on_cut].real + 1j * arg
    return _LOG_PI + 1j * corr - ls - _loggamma_right(1.0 - z)


def _dispatch(z, right, left):
    _check_poles(z)
    res = np.empty_like(z)
    neg = z.real < 0
    if np.any(~neg):
        res[~neg] = right(z[~neg])
    if np.any(neg):
        res[neg] = left(z[neg])
    return res


# --------------------------------------------------------------------------
# public API


def log_gamma(z):
    """Principal branch of log Gamma(z).

    Raises PoleError at non-positive integers.
    """
    z = _as_complex(z)
    res = _dispatch(np.atleast_1d(z), _loggamma_right, _loggamma_left)
    return _out(res.reshape(z.shape))


def digamma(z):
    """psi(z) = Gamma'(z)/Gamma(z)."""
    z = _as_complex(z)

    def left(x):
        return _digamma_right(1.0 - x) - np.pi * _cot_pi(x)

    res = _dispatch(np.atleast_1d(z), _digamma_right, left)
    return _out(res.reshape(z.shape))


def trigamma(z):
    z = _as_complex(z)

    def left(x):
        return -_trigamma_right(1.0 - x) + np.pi**2 * _csc2_pi(x)

    res = _dispatch(np.atleast_1d(z), _trigamma_right, left)
    return _out(res.reshape(z.shape))


def tetragamma(z):
    z = _as_complex(z)

    def left(x):
        return _tetragamma_right(1.0 - x) - 2.0 * np.pi**3 * _cot_pi(x) * _csc2_pi(x)

    res = _dispatch(np.atleast_1d(z), _tetragamma_right, left)
    return _out(res.reshape(z.shape))


def polygamma(k, z):
    """psi^(k)(z) for k in {1, 2}."""
    if k == 1:
        return trigamma(z)
    if k == 2:
        return tetragamma(z)
    raise UnsupportedOrder(f"polygamma order {k} not supported (only 1 and 2)")
