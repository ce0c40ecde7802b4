"""Reference values computed by routes the library does not use.

Weighted one-dimensional integrals go through QUADPACK's QAWS algebraic
weight, kernel moments through Gauss hypergeometric closed forms, and one
double integral through a plain midpoint Riemann sum. Agreement between
these and the package is evidence, not tautology.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma, hyp2f1


def j_reference(u: float, t: float, a: float) -> float:
    """int_0^u s (u-s)^(a-1) (t-s)^a ds, via 2F1."""
    if u == 0.0:
        return 0.0
    return u ** (a + 1) * t**a / (a * (a + 1)) * hyp2f1(-a, 2.0, a + 2.0, u / t)


def h_reference(u: float, t: float, a: float) -> float:
    """int_0^u (u-s)^(a-1) (t-s)^a ds, via 2F1."""
    if u == 0.0:
        return 0.0
    return u**a * t**a / a * hyp2f1(-a, 1.0, a + 1.0, u / t)


def fibm_cov_reference(u: float, t: float, a: float) -> float:
    """Covariance of the order-a integral of Brownian motion at (u, t),
    assembled from the hypergeometric moments. Assumes u <= t."""
    if u == 0.0:
        return 0.0
    lead = t ** (a + 1) * u**a / (a * a * (a + 1))
    rest = (j_reference(u, t, a) - t * h_reference(u, t, a)) / (a * (a + 1))
    return (lead + rest) / gamma(a) ** 2


def weighted_left(f, u: float, a: float) -> float:
    """int_0^u f(s) (u-s)^(a-1) ds by QAWS."""
    if u == 0.0:
        return 0.0
    val, _ = quad(f, 0.0, u, weight="alg", wvar=(0.0, a - 1.0), limit=200)
    return val


def cov_reference(c, u: float, t: float, a: float) -> float:
    """Double QUADPACK evaluation of the order-a integral covariance

        (1/Gamma(a)^2) int_0^u int_0^t (u-s)^(a-1) (t-v)^(a-1) c(s,v) dv ds

    for a pointwise kernel c(s, v). Assumes 0 <= u <= t. The inner
    integral is split at v = s, where Gauss-Markov kernels kink.
    """
    if u == 0.0:
        return 0.0

    def inner(s: float) -> float:
        total = 0.0
        if s > 0.0:
            smooth, _ = quad(lambda v: (t - v) ** (a - 1.0) * c(s, v),
                             0.0, min(s, t), limit=200)
            total += smooth
        if s < t:
            sing, _ = quad(lambda v: c(s, v), s, t,
                           weight="alg", wvar=(0.0, a - 1.0), limit=200)
            total += sing
        return total

    val, _ = quad(inner, 0.0, u, weight="alg", wvar=(0.0, a - 1.0), limit=200)
    return val / gamma(a) ** 2


def fibm_cov_riemann(u: float, t: float, a: float, cells: int = 1500) -> float:
    """Midpoint Riemann sum on (0,u) x (0,t); slow, O(h^a) accurate."""
    s = (np.arange(cells) + 0.5) * (u / cells)
    v = (np.arange(cells) + 0.5) * (t / cells)
    sv = np.minimum(s[:, None], v[None, :])
    w = (u - s[:, None]) ** (a - 1.0) * (t - v[None, :]) ** (a - 1.0)
    return float((sv * w).sum() * (u / cells) * (t / cells) / gamma(a) ** 2)


def bm_kernel(s: float, v: float) -> float:
    return min(s, v)


def ou_kernel(mu: float, sigma: float):
    k = sigma**2 / (2.0 * mu)

    def c(s: float, v: float) -> float:
        return k * (np.exp(-mu * abs(s - v)) - np.exp(-mu * (s + v)))

    return c


def sou_kernel(mu: float, sigma: float):
    k = sigma**2 / (2.0 * mu)

    def c(s: float, v: float) -> float:
        return k * np.exp(-mu * abs(s - v))

    return c
