"""Lower-tail large deviations of the log-Gamma polymer.

Submodules: special_fn (log Gamma and polygamma on C), phase (h, g, q),
rate (b, f and the rate function F), fredholm (Nystrom determinants and the
rescaled kernel), polymer (Monte Carlo), cli (command line front end).
"""

from . import errors, fredholm, phase, polymer, rate, special_fn
from .polymer import BACKEND
from .rate import RateQuery, big_F, s_star, solve_b

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "RateQuery",
    "big_F",
    "errors",
    "fredholm",
    "phase",
    "polymer",
    "rate",
    "s_star",
    "solve_b",
    "special_fn",
]
