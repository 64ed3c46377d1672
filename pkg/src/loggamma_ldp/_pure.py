"""Numpy implementation of the Monte Carlo kernels (fallback for _core).

Uses the same counter-based hashing as the compiled module, so both backends
see identical random fields.  Work is vectorised over whole lattices and
blocks of samples; the row recursions use the identities

    log Z_i[j] = D_j + logcumsumexp_{k<=j}(log Z_{i-1}[k] - D_{k-1})
    G_i[j]     = D_j + cummax_{k<=j}(G_{i-1}[k] - D_{k-1})

with D_j the running sum of the weights along row i.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
C_SAMPLE = np.uint64(0xD1B54A32D192ED03)
C_ROW = np.uint64(0xABC98388FB8FAC03)
C_COL = np.uint64(0x8CB92BA72F3D8DD7)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = (np.uint64(k) for k in (30, 27, 31, 11))
_ONE = np.uint64(1)
_INV_2_53 = 2.0**-53
BLOCK_SITES = 1 << 21


def _quiet(fn):
    # uint64 products wrap modulo 2^64 by design
    def wrapped(*args):
        with np.errstate(over="ignore"):
            return fn(*args)

    wrapped.__doc__ = fn.__doc__
    return wrapped


@_quiet
def _mix(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@_quiet
def _sample_keys(seed, samples):
    h = _mix(np.uint64(seed) + GOLDEN)
    return _mix(h ^ ((np.asarray(samples, dtype=np.uint64) + _ONE) * C_SAMPLE))


@_quiet
def _site_keys(skeys, n):
    """Keys of shape skeys.shape + (n, n)."""
    idx = np.arange(n, dtype=np.uint64)
    h = _mix(skeys[..., None] ^ ((idx + _ONE) * C_ROW))
    return _mix(h[..., :, None] ^ ((idx + _ONE) * C_COL))


@_quiet
def _draw(keys, k):
    k = np.asarray(k, dtype=np.uint64)
    bits = _mix(keys + (k + _ONE) * GOLDEN) >> _S11
    return (bits.astype(np.float64) + 0.5) * _INV_2_53


def _log_gamma_variates(shape, keys):
    """log G for G ~ Gamma(shape), one per key (Marsaglia-Tsang, log-space boost)."""
    keys = keys.ravel()
    a = shape
    boost = 0.0
    if a < 1.0:
        boost = np.log(_draw(keys, 0)) / a
        a = a + 1.0
    d = a - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty(keys.shape)
    todo = np.arange(keys.size)
    k = np.ones(keys.size, dtype=np.uint64)
    while todo.size:
        kk = keys[todo]
        kt = k[todo]
        u1 = _draw(kk, kt)
        u2 = _draw(kk, kt + _ONE)
        u3 = _draw(kk, kt + np.uint64(2))
        k[todo] += np.uint64(3)
        x = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
        v = 1.0 + c * x
        pos = v > 0
        v3 = np.where(pos, v, 1.0) ** 3
        acc = pos & (np.log(u3) < 0.5 * x * x + d - d * v3 + d * np.log(v3))
        out[todo[acc]] = np.log(d * v3[acc])
        todo = todo[~acc]
    return out + boost


def log_weights_many(n, theta, seed, samples):
    skeys = _sample_keys(seed, samples)
    keys = _site_keys(skeys, n)
    return -_log_gamma_variates(2.0 * theta, keys).reshape(keys.shape)


def exp_weights_many(n, seed, samples):
    keys = _site_keys(_sample_keys(seed, samples), n)
    return -np.log(_draw(keys, 0))


def _recursion(w, combine):
    """Row recursion over w of shape (B, n, n); combine is logaddexp or maximum."""
    D = np.cumsum(w, axis=2)
    prev = D[:, 0]
    shifted = np.zeros_like(prev)
    for i in range(1, w.shape[1]):
        Di = D[:, i]
        shifted[:, 1:] = Di[:, :-1]
        prev = Di + combine.accumulate(prev - shifted, axis=1)
    return prev[:, -1]


def _blocks(n, count):
    step = max(1, BLOCK_SITES // (n * n))
    for a in range(0, count, step):
        yield a, min(count, a + step)


def log_partition_batch(n, theta, seed, start, count):
    out = np.empty(count)
    for a, b in _blocks(n, count):
        w = log_weights_many(n, theta, seed, np.arange(start + a, start + b))
        out[a:b] = _recursion(w, np.logaddexp)
    return out


def lpp_batch(n, seed, start, count):
    out = np.empty(count)
    for a, b in _blocks(n, count):
        w = exp_weights_many(n, seed, np.arange(start + a, start + b))
        out[a:b] = _recursion(w, np.maximum)
    return out


def log_weights(n, theta, seed, sample):
    return log_weights_many(n, theta, seed, np.array([sample]))[0]


def exp_weights(n, seed, sample):
    return exp_weights_many(n, seed, np.array([sample]))[0]


def log_inverse_gamma_many(theta, seed, start, count):
    skeys = _sample_keys(seed, np.arange(start, start + count))
    keys = _site_keys(skeys, 1).reshape(-1)
    return -_log_gamma_variates(2.0 * theta, keys)


@_quiet
def uniform(seed, sample, i, j, k):
    skey = _sample_keys(seed, np.array([sample]))
    h = _mix(skey ^ ((np.uint64(i) + _ONE) * C_ROW))
    key = _mix(h ^ ((np.uint64(j) + _ONE) * C_COL))
    return float(_draw(key, k)[0])
