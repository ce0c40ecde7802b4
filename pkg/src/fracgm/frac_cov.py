"""Moments of fractional integrals of Gauss-Markov processes.

The fractional integral of order alpha (left Riemann-Liouville) of a path Y:

    I^a(Y)(t) = (1/Gamma(a)) int_0^t (t - s)^(a - 1) Y(s) ds.

For Y Gaussian with mean m and kernel c, I^a(Y) is again Gaussian, with mean
I^a(m)(t) and covariance

    Cov(u, t) = (1/Gamma(a)^2)
                int_0^u ds int_0^t dv (u-s)^(a-1) (t-v)^(a-1) c(s, v).

For a factorized kernel c(s, v) = h1(min) h2(max) and u <= t, the rectangle
splits into three parts where min/max resolve:

    v in (0, s):  c = h1(v) h2(s)
    v in (s, u):  c = h1(s) h2(v)
    v in (u, t):  c = h1(s) h2(v)

Each part is a nested singular integral handled by the quadrature module.

Closed forms (sigma, mu are the OU noise scale and rate; u <= t throughout):

  fractional integrated BM, variance:
      t^(2a+1) / ((2a+1) Gamma(a+1)^2)
  fractional integrated BM, covariance:
      (1/Gamma(a)^2) [ t^(a+1) u^a / (a^2 (a+1))
                       - t H_a(u,t) / (a (a+1)) + J_a(u,t) / (a (a+1)) ]
      with J, H from the quadrature module; at a = 1 this collapses to
      u^2 (t/2 - u/6).
  integrated OU (deterministic start at 0), covariance:
      sigma^2/(2 mu^3) [ 2 mu u - 2 + 2 e^(-mu u) + 2 e^(-mu t)
                         - e^(-mu (t-u)) - e^(-mu (t+u)) ]
  integrated stationary OU, covariance:
      sigma^2/(2 mu^3) [ 2 mu u - 1 + e^(-mu u) + e^(-mu t)
                         - e^(-mu (t-u)) ]

The stationary start decomposes as S(t) = e^(-mu t) [W(rho(t)) + S(0)] with
W a Brownian motion independent of S(0) (increments of the driving motion
after the start are independent of the start value). Consequently the
fractional integrated stationary OU covariance equals the pinned-start one
plus the start contribution

    Var(S(0)) * I^a(e^(-mu .))(u) * I^a(e^(-mu .))(t),

with no cross term; `fisou_start_term` computes exactly that product.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import DomainError, ParameterError, ResolutionError, UnsupportedSpecError
from .gm_core import GaussMarkovSpec, OUParams, SOUParams, ou_spec
from .quadrature import (
    FracOrder,
    InnerBound,
    QuadratureConfig,
    as_order,
    compute_H,
    compute_J,
    nested_singular_integral,
    reciprocal_gamma,
    singular_left_integral,
)

Method = str
_METHODS = ("auto", "closed", "quadrature")


def _check_time(t: float) -> None:
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"time must be finite and >= 0, got {t}")


def _ordered(u: float, t: float) -> tuple[float, float]:
    _check_time(u)
    _check_time(t)
    return (u, t) if u <= t else (t, u)


def _pick_closed(alpha: FracOrder, method: Method) -> bool:
    if method not in _METHODS:
        raise ParameterError(f"method must be one of {_METHODS}, got {method!r}")
    if method == "closed":
        if alpha.alpha != 1.0:
            raise ParameterError("closed form is only available at alpha = 1")
        return True
    if method == "auto":
        return alpha.alpha == 1.0
    return False


# -- fractional integrated Brownian motion ----------------------------------


def fibm_var(t: float, alpha: float | FracOrder) -> float:
    """Variance of I^a(B)(t): t^(2a+1) / ((2a+1) Gamma(a+1)^2)."""
    alpha = as_order(alpha)
    _check_time(t)
    a = alpha.alpha
    return t ** (2 * a + 1) / ((2 * a + 1) * math.gamma(a + 1) ** 2)


def fibm_cov(
    u: float,
    t: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
    method: Method = "auto",
) -> float:
    """Covariance of I^a(B) between times u and t (order irrelevant).

    method: "auto" uses the alpha = 1 closed form when applicable and
    quadrature otherwise; "closed" and "quadrature" force one route.
    """
    alpha = as_order(alpha)
    u, t = _ordered(u, t)
    if u == 0.0:
        return 0.0
    if _pick_closed(alpha, method):
        return u * u * (t / 2.0 - u / 6.0)
    a = alpha.alpha
    rg = reciprocal_gamma(a)
    A = t ** (a + 1) * u**a / (a * a * (a + 1))
    B = t * compute_H(u, t, alpha, cfg) / (a * (a + 1))
    C = compute_J(u, t, alpha, cfg) / (a * (a + 1))
    return rg * rg * (A - B + C)


# -- generic Gauss-Markov process via nested quadrature ----------------------


def figm_mean(
    spec: GaussMarkovSpec,
    t: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Mean of I^a(Y)(t), i.e. the fractional integral of the mean function."""
    alpha = as_order(alpha)
    _check_time(t)
    if t == 0.0:
        return 0.0
    return reciprocal_gamma(alpha) * singular_left_integral(spec.m, t, alpha, cfg)


def figm_cov(
    spec: GaussMarkovSpec,
    u: float,
    t: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Covariance of I^a(Y) for a pinned-start spec (r0 = 0), by quadrature.

    Specs with a random start (r0 > 0) are not accepted here; their one
    supported instance, the stationary OU process, goes through fisou_cov.
    """
    alpha = as_order(alpha)
    if spec.r0 != 0.0:
        raise UnsupportedSpecError(
            f"spec {spec.name!r} has r0 = {spec.r0}; only pinned starts "
            "(r0 = 0) are supported by the generic covariance"
        )
    u, t = _ordered(u, t)
    if u == 0.0:
        return 0.0
    rg = reciprocal_gamma(alpha)
    total = _split_cov(spec.h1, spec.h2, u, t, alpha, cfg, diagonal=(u == t))
    return rg * rg * total


def figm_var(
    spec: GaussMarkovSpec,
    t: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Variance of I^a(Y)(t) for a pinned-start spec, by quadrature."""
    return figm_cov(spec, t, t, alpha, cfg)


def _split_cov(
    h1: Callable[[np.ndarray], np.ndarray],
    h2: Callable[[np.ndarray], np.ndarray],
    u: float,
    t: float,
    alpha: FracOrder,
    cfg: QuadratureConfig | None,
    diagonal: bool,
) -> float:
    """Three-way rectangle split of the doubly weighted kernel integral."""

    def low(s, v):
        return h2(s) * h1(v)

    def high(s, v):
        return h1(s) * h2(v)

    part1 = nested_singular_integral(low, u, t, alpha, alpha, InnerBound.S, cfg)
    if diagonal:
        # (v < s) and (v > s) contribute equally on the diagonal.
        return 2.0 * part1
    part2 = nested_singular_integral(high, u, t, alpha, alpha, InnerBound.U, cfg)
    part3 = nested_singular_integral(high, u, t, alpha, alpha, InnerBound.T_FROM_U, cfg)
    return part1 + part2 + part3


# -- integrated OU, pinned start (closed forms and fractional versions) ------


def iou_var(p: OUParams, t: float) -> float:
    """Variance of int_0^t X(s) ds for OU X started at a constant."""
    _check_time(t)
    mu, sg = p.mu, p.sigma
    x = mu * t
    return sg**2 / (2.0 * mu**3) * (2.0 * x - 3.0 + 4.0 * math.exp(-x) - math.exp(-2.0 * x))


def iou_cov(p: OUParams, u: float, t: float) -> float:
    """Covariance of the integrated pinned-start OU between u and t."""
    u, t = _ordered(u, t)
    mu, sg = p.mu, p.sigma
    return (
        sg**2
        / (2.0 * mu**3)
        * (
            2.0 * mu * u
            - 2.0
            + 2.0 * math.exp(-mu * u)
            + 2.0 * math.exp(-mu * t)
            - math.exp(-mu * (t - u))
            - math.exp(-mu * (t + u))
        )
    )


def fiou_cov(
    p: OUParams,
    u: float,
    t: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
    method: Method = "auto",
) -> float:
    """Covariance of the fractional integrated pinned-start OU."""
    alpha = as_order(alpha)
    u, t = _ordered(u, t)
    if _pick_closed(alpha, method):
        return iou_cov(p, u, t)
    return figm_cov(ou_spec(p), u, t, alpha, cfg)


def fiou_var(
    p: OUParams,
    t: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
    method: Method = "auto",
) -> float:
    """Variance of the fractional integrated pinned-start OU at t."""
    return fiou_cov(p, t, t, alpha, cfg, method)


# -- integrated stationary OU -------------------------------------------------


def isou_var(p: SOUParams, t: float) -> float:
    """Variance of int_0^t S(s) ds for stationary OU S."""
    _check_time(t)
    mu, sg = p.mu, p.sigma
    x = mu * t
    return sg**2 / (2.0 * mu**3) * (2.0 * x - 2.0 + 2.0 * math.exp(-x))


def isou_cov(p: SOUParams, u: float, t: float) -> float:
    """Covariance of the integrated stationary OU between u and t."""
    u, t = _ordered(u, t)
    mu, sg = p.mu, p.sigma
    return (
        sg**2
        / (2.0 * mu**3)
        * (
            2.0 * mu * u
            - 1.0
            + math.exp(-mu * u)
            + math.exp(-mu * t)
            - math.exp(-mu * (t - u))
        )
    )


def fisou_start_term(
    p: SOUParams,
    u: float,
    t: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Start contribution Var(S(0)) * I^a(e^(-mu .))(u) * I^a(e^(-mu .))(t).

    The stationary process splits into an independent pinned-start part plus
    e^(-mu t) S(0); increments of the driving Brownian motion after the start
    are independent of S(0), so the cross term between the two parts
    vanishes identically and only this product survives.
    """
    alpha = as_order(alpha)
    u, t = _ordered(u, t)
    mu = p.mu
    rg = reciprocal_gamma(alpha)

    def decay(s: np.ndarray) -> np.ndarray:
        return np.exp(-mu * s)

    eu = rg * singular_left_integral(decay, u, alpha, cfg)
    et = rg * singular_left_integral(decay, t, alpha, cfg)
    return p.stationary_var * eu * et


def fisou_cov(
    p: SOUParams,
    u: float,
    t: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
    method: Method = "auto",
) -> float:
    """Covariance of the fractional integrated stationary OU.

    Computed as the pinned-start covariance plus the start term; see
    fisou_start_term for why no cross term appears.
    """
    alpha = as_order(alpha)
    u, t = _ordered(u, t)
    if _pick_closed(alpha, method):
        return isou_cov(p, u, t)
    pinned = OUParams(mu=p.mu, sigma=p.sigma)
    return fiou_cov(pinned, u, t, alpha, cfg, "quadrature") + fisou_start_term(
        p, u, t, alpha, cfg
    )


def fisou_var(
    p: SOUParams,
    t: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
    method: Method = "auto",
) -> float:
    """Variance of the fractional integrated stationary OU at t."""
    return fisou_cov(p, t, t, alpha, cfg, method)


# -- Caputo derivative --------------------------------------------------------


def caputo_derivative(
    times: np.ndarray,
    values: np.ndarray,
    t: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Caputo derivative of order alpha from samples of f:

        D^a f(t) = (1/Gamma(1 - a)) int_0^t f'(s) (t - s)^(-a) ds.

    f' is the per-panel finite difference of the samples (f is treated as
    piecewise linear) and the weakly singular weight is integrated exactly
    against it panel by panel, so no quadrature nodes ever touch the
    derivative's jump points. At alpha = 1 the limit is the slope of the
    panel containing t. Left-inverse property: for f with f(0) = 0,
    D^a I^a f = f up to the sampling error of the panels.

    times must be strictly increasing and start at 0; t must lie inside the
    sampled range. cfg is accepted for interface uniformity; the panel
    moments are exact, so no quadrature settings apply.
    """
    alpha = as_order(alpha)
    del cfg
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.ndim != 1 or times.shape != values.shape:
        raise ParameterError("times and values must be 1-D arrays of equal length")
    if times.size < 2:
        raise ResolutionError("need at least two samples")
    if times[0] != 0.0:
        raise DomainError("samples must start at time 0")
    if np.any(np.diff(times) <= 0.0):
        raise ParameterError("times must be strictly increasing")
    _check_time(t)
    if t > times[-1]:
        raise DomainError(f"t = {t} lies beyond the sampled range [0, {times[-1]}]")
    if t == 0.0:
        return 0.0

    a = alpha.alpha
    slopes = np.diff(values) / np.diff(times)
    # Index of the panel containing t; t exactly on a node uses the panel
    # to its left (matches the alpha -> 1 limit of the weights).
    j = int(np.searchsorted(times, t, side="left")) - 1
    if a == 1.0:
        return float(slopes[j])

    e = 1.0 - a
    left = times[: j + 1]          # panel left edges fully below t
    right = np.minimum(times[1 : j + 2], t)
    moments = ((t - left) ** e - (t - right) ** e) / e
    return float(slopes[: j + 1] @ moments) / math.gamma(e)
