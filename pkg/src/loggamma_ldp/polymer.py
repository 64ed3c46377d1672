"""Monte Carlo for the log-Gamma polymer and its zero-temperature limit.

Weights d_{i,j} are inverse-Gamma(2 theta), i.e. 1/G with G ~ Gamma(2 theta, 1),
and Z_n sums prod d_{i,j} over up-right paths (1,1) -> (n,n).  The recursion

    log Z(i,j) = log d_{i,j} + logaddexp(log Z(i-1,j), log Z(i,j-1))

runs in log space.  LPP replaces (logaddexp, log d) by (max, Exp(1)).

Randomness is counter based: the k-th draw of site (i, j) in sample t is a
hash of (seed, t, i, j, k).  The compiled core is used when available; set
LOGGAMMA_LDP_PURE=1 to force the numpy fallback.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

if os.environ.get("LOGGAMMA_LDP_PURE") == "1":
    from . import _pure as _backend

    BACKEND = "numpy"
else:
    try:
        from . import _core as _backend

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _pure as _backend

        BACKEND = "numpy"

__all__ = [
    "BACKEND",
    "N_MAX",
    "SAMPLES_MAX",
    "CounterRNG",
    "SimConfig",
    "SimSummary",
    "sample_inverse_gamma",
    "inverse_gamma_draws",
    "log_partition",
    "lpp_time",
    "log_partition_samples",
    "lpp_samples",
    "mc_laplace",
    "mc_summary",
]

N_MAX = 4096
SAMPLES_MAX = 10**8
SEED_MAX = 2**64 - 1
_CHUNK = 256


@dataclass(frozen=True)
class CounterRNG:
    """Stateless stream family; the draw at (sample, i, j, k) never changes."""

    seed: int = 0
    sample: int = 0

    def __post_init__(self):
        _check_seed(self.seed)

    def uniform(self, i=0, j=0, k=0):
        return float(_backend.uniform(self.seed, self.sample, i, j, k))


@dataclass(frozen=True)
class SimConfig:
    n: int
    theta: float
    samples: int
    seed: int = 0

    def __post_init__(self):
        _check_n(self.n)
        _check_theta(self.theta)
        _check_samples(self.samples)
        _check_seed(self.seed)


@dataclass(frozen=True)
class SimSummary:
    mean_logZ: float
    var_logZ: float
    stderr_mean: float
    samples_used: int


def _check_n(n):
    if int(n) != n or not 1 <= n <= N_MAX:
        raise DomainError(f"n must be an integer in [1, {N_MAX}], got {n}")


def _check_theta(theta):
    if not theta > 0 or not math.isfinite(theta):
        raise DomainError(f"theta must be positive, got {theta}")


def _check_samples(samples):
    if int(samples) != samples or not 1 <= samples <= SAMPLES_MAX:
        raise DomainError(f"samples must be an integer in [1, {SAMPLES_MAX}], got {samples}")


def _check_seed(seed):
    if int(seed) != seed or not 0 <= seed <= SEED_MAX:
        raise DomainError("seed must be a 64-bit unsigned integer")


def default_threads():
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1


def _run_chunked(fn, count, threads):
    """fn(start, count) -> array, evaluated in fixed chunks and stitched in order."""
    starts = list(range(0, count, _CHUNK))
    sizes = [min(_CHUNK, count - a) for a in starts]
    threads = max(1, int(threads or 1))
    if threads == 1 or len(starts) == 1:
        parts = [fn(a, c) for a, c in zip(starts, sizes)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(fn, starts, sizes))
    return np.concatenate(parts)


# --------------------------------------------------------------------------
# single draws


def sample_inverse_gamma(theta, rng: CounterRNG = CounterRNG()):
    """One inverse-Gamma(2 theta) weight: 1/G with G ~ Gamma(2 theta, 1).

    Uses site (0, 0) of the stream ``rng``; for tiny theta the value can
    overflow to inf, use ``inverse_gamma_draws(..., log=True)`` there.
    """
    _check_theta(theta)
    ld = float(_backend.log_inverse_gamma_many(theta, rng.seed, rng.sample, 1)[0])
    return math.exp(min(ld, 709.0)) if ld < 709.0 else math.inf


def inverse_gamma_draws(theta, count, seed=0, log=False):
    """count independent inverse-Gamma(2 theta) weights (or their logs)."""
    _check_theta(theta)
    _check_samples(count)
    _check_seed(seed)
    ld = _backend.log_inverse_gamma_many(theta, seed, 0, count)
    return ld if log else np.exp(ld)


def log_weight_field(n, theta, seed=0, sample=0):
    """The n x n field log d_{i,j} seen by log_partition for this sample."""
    _check_n(n)
    _check_theta(theta)
    return np.asarray(_backend.log_weights(n, theta, seed, sample))


def exp_weight_field(n, seed=0, sample=0):
    """The n x n Exp(1) field seen by lpp_time for this sample."""
    _check_n(n)
    return np.asarray(_backend.exp_weights(n, seed, sample))


def log_partition(n, theta, rng: CounterRNG = CounterRNG()):
    """log Z_n(theta) for one sample."""
    _check_n(n)
    _check_theta(theta)
    return float(_backend.log_partition_batch(n, theta, rng.seed, rng.sample, 1)[0])


def lpp_time(n, rng: CounterRNG = CounterRNG()):
    """Last-passage time with Exp(1) weights for one sample."""
    _check_n(n)
    return float(_backend.lpp_batch(n, rng.seed, rng.sample, 1)[0])


def log_partition_samples(n, theta, samples, seed=0, threads=1):
    cfg = SimConfig(n, theta, samples, seed)
    return _run_chunked(
        lambda a, c: _backend.log_partition_batch(cfg.n, cfg.theta, cfg.seed, a, c),
        cfg.samples,
        threads,
    )


def lpp_samples(n, samples, seed=0, threads=1):
    _check_n(n)
    _check_samples(samples)
    _check_seed(seed)
    return _run_chunked(lambda a, c: _backend.lpp_batch(n, seed, a, c), samples, threads)


# --------------------------------------------------------------------------
# estimators


def mc_laplace(n, theta, u, samples, seed=0, threads=1):
    """Estimate E exp(-u Z_n) with its standard error.

    Each term is exp(-exp(log u + log Z)), which never overflows.
    """
    if not u >= 0:
        raise DomainError("u must be non-negative")
    if u == 0:
        SimConfig(n, theta, samples, seed)
        return {"estimate": 1.0, "stderr": 0.0}
    logz = log_partition_samples(n, theta, samples, seed, threads)
    x = np.exp(-np.exp(np.minimum(math.log(u) + logz, 700.0)))
    est = float(x.mean())
    err = float(x.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return {"estimate": est, "stderr": err}


def mc_summary(cfg: SimConfig, threads=1):
    """Mean, variance and standard error of log Z_n over cfg.samples samples."""
    logz = log_partition_samples(cfg.n, cfg.theta, cfg.samples, cfg.seed, threads)
    mean = float(logz.mean())
    var = float(logz.var(ddof=1)) if cfg.samples > 1 else 0.0
    return SimSummary(mean, var, math.sqrt(var / cfg.samples), cfg.samples)
