"""Node/weight helpers shared by the rate, phase and fredholm modules."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def _legendre(m):
    x, w = np.polynomial.legendre.leggauss(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(a, b, m):
    """m-point Gauss-Legendre rule on [a, b]."""
    x, w = _legendre(m)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def gl_panels(edges, m):
    """Composite Gauss-Legendre rule over consecutive panels [e_k, e_{k+1}]."""
    edges = np.asarray(edges, dtype=float)
    x, w = _legendre(m)
    h = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (h[:, None] * x[None, :] + mid[:, None]).ravel()
    weights = (h[:, None] * w[None, :]).ravel()
    return nodes, weights


def chebyshev1(m):
    """Nodes of the m-point Gauss-Chebyshev rule of the first kind.

    int_{-1}^{1} g(x)/sqrt(1-x^2) dx ~ (pi/m) sum g(x_k).
    """
    k = np.arange(1, m + 1)
    return np.cos((2 * k - 1) * np.pi / (2 * m))


def chebyshev2(m):
    """Nodes and weights of the m-point Gauss-Chebyshev rule of the second kind.

    int_{-1}^{1} g(x) sqrt(1-x^2) dx ~ sum w_k g(x_k).
    """
    k = np.arange(1, m + 1)
    t = k * np.pi / (m + 1)
    return np.cos(t), np.pi / (m + 1) * np.sin(t) ** 2


def trapezoid_circle(center, radius, m):
    """Nodes and complex weights dz for a positively oriented circle."""
    phi = 2.0 * np.pi * np.arange(m) / m
    e = np.exp(1j * phi)
    return center + radius * e, 1j * radius * e * (2.0 * np.pi / m)
