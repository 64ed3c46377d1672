# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the lattice Monte Carlo.

Every random number is a pure function of (seed, sample, i, j, k): a
splitmix64-style mixer hashes the coordinates into a site key and the k-th
draw of that site.  Results therefore do not depend on how samples are split
across threads.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, log, log1p, sqrt
from libc.stdint cimport uint64_t

cnp.import_array()

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t C_SAMPLE = 0xD1B54A32D192ED03ULL
cdef uint64_t C_ROW = 0xABC98388FB8FAC03ULL
cdef uint64_t C_COL = 0x8CB92BA72F3D8DD7ULL
cdef double TWO_PI = 6.283185307179586
cdef double INV_2_53 = 1.1102230246251565e-16


cdef inline uint64_t mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t sample_key(uint64_t seed, uint64_t sample) nogil:
    cdef uint64_t h = mix(seed + GOLDEN)
    return mix(h ^ ((sample + 1) * C_SAMPLE))


cdef inline uint64_t site_key(uint64_t skey, uint64_t i, uint64_t j) nogil:
    cdef uint64_t h = mix(skey ^ ((i + 1) * C_ROW))
    return mix(h ^ ((j + 1) * C_COL))


cdef inline double draw(uint64_t key, uint64_t k) nogil:
    # uniform on (0, 1), never 0 or 1
    return (<double>(mix(key + (k + 1) * GOLDEN) >> 11) + 0.5) * INV_2_53


cdef double log_gamma_variate(double shape, uint64_t key) nogil:
    """log G, G ~ Gamma(shape, 1), by Marsaglia-Tsang.

    For shape < 1 the boost G = G' U^(1/shape) with G' ~ Gamma(shape + 1) is
    applied in log space, so tiny shapes do not underflow.
    """
    cdef double a = shape
    cdef double boost = 0.0
    cdef double d, c, x, v, u1, u2, u3
    cdef uint64_t k = 1
    if a < 1.0:
        boost = log(draw(key, 0)) / a
        a = a + 1.0
    d = a - 1.0 / 3.0
    c = 1.0 / sqrt(9.0 * d)
    while True:
        u1 = draw(key, k)
        u2 = draw(key, k + 1)
        u3 = draw(key, k + 2)
        k += 3
        x = sqrt(-2.0 * log(u1)) * cos(TWO_PI * u2)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        if log(u3) < 0.5 * x * x + d - d * v + d * log(v):
            return log(d * v) + boost


cdef inline double logaddexp(double a, double b) nogil:
    cdef double diff
    if a < b:
        a, b = b, a
    diff = b - a
    if diff < -40.0:
        return a
    return a + log1p(exp(diff))


cdef double log_partition_one(int n, double shape, uint64_t skey, double[::1] row) nogil:
    cdef int i, j
    cdef double ld
    for i in range(n):
        for j in range(n):
            ld = -log_gamma_variate(shape, site_key(skey, i, j))
            if i == 0 and j == 0:
                row[j] = ld
            elif i == 0:
                row[j] = ld + row[j - 1]
            elif j == 0:
                row[j] = ld + row[j]
            else:
                row[j] = ld + logaddexp(row[j], row[j - 1])
    return row[n - 1]


cdef double lpp_one(int n, uint64_t skey, double[::1] row) nogil:
    cdef int i, j
    cdef double w
    for i in range(n):
        for j in range(n):
            w = -log(draw(site_key(skey, i, j), 0))
            if i == 0 and j == 0:
                row[j] = w
            elif i == 0:
                row[j] = w + row[j - 1]
            elif j == 0:
                row[j] = w + row[j]
            else:
                row[j] = w + (row[j] if row[j] > row[j - 1] else row[j - 1])
    return row[n - 1]


def log_partition_batch(int n, double theta, uint64_t seed, uint64_t start, Py_ssize_t count):
    """log Z_n for samples start, ..., start + count - 1."""
    cdef cnp.ndarray[double, ndim=1] out = np.empty(count)
    cdef double[::1] o = out
    cdef double[::1] row = np.empty(n)
    cdef Py_ssize_t t
    cdef double shape = 2.0 * theta
    with nogil:
        for t in range(count):
            o[t] = log_partition_one(n, shape, sample_key(seed, start + t), row)
    return out


def lpp_batch(int n, uint64_t seed, uint64_t start, Py_ssize_t count):
    """Last-passage times with Exp(1) weights for a block of samples."""
    cdef cnp.ndarray[double, ndim=1] out = np.empty(count)
    cdef double[::1] o = out
    cdef double[::1] row = np.empty(n)
    cdef Py_ssize_t t
    with nogil:
        for t in range(count):
            o[t] = lpp_one(n, sample_key(seed, start + t), row)
    return out


def log_weights(int n, double theta, uint64_t seed, uint64_t sample):
    """The n x n field of log d_{i,j} used by log_partition_batch."""
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, n))
    cdef double[:, ::1] o = out
    cdef uint64_t skey = sample_key(seed, sample)
    cdef int i, j
    cdef double shape = 2.0 * theta
    with nogil:
        for i in range(n):
            for j in range(n):
                o[i, j] = -log_gamma_variate(shape, site_key(skey, i, j))
    return out


def exp_weights(int n, uint64_t seed, uint64_t sample):
    """The n x n field of Exp(1) weights used by lpp_batch."""
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, n))
    cdef double[:, ::1] o = out
    cdef uint64_t skey = sample_key(seed, sample)
    cdef int i, j
    with nogil:
        for i in range(n):
            for j in range(n):
                o[i, j] = -log(draw(site_key(skey, i, j), 0))
    return out


def log_inverse_gamma_many(double theta, uint64_t seed, uint64_t start, Py_ssize_t count):
    """log d for count independent inverse-Gamma(2 theta) weights (site (0, 0) of each sample)."""
    cdef cnp.ndarray[double, ndim=1] out = np.empty(count)
    cdef double[::1] o = out
    cdef Py_ssize_t t
    cdef double shape = 2.0 * theta
    with nogil:
        for t in range(count):
            o[t] = -log_gamma_variate(shape, site_key(sample_key(seed, start + t), 0, 0))
    return out


def uniform(uint64_t seed, uint64_t sample, uint64_t i, uint64_t j, uint64_t k):
    """The k-th uniform draw of site (i, j) in the given sample."""
    return draw(site_key(sample_key(seed, sample), i, j), k)
