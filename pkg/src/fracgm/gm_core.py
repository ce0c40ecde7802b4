"""Gauss-Markov process specifications and their covariance kernels.

A (centered) Gauss-Markov process Y admits the factorized covariance

    c(s, t) = h1(min(s, t)) * h2(max(s, t)),

and the time-changed Brownian representation

    Y(t) = m(t) + h2(t) * B(r(t)),        r = h1 / h2,

with r nondecreasing and B a standard Brownian motion. r(0) = r0 is 0 for
processes pinned at a deterministic start; a stationary start shows up as
r0 > 0 (the process inherits B(r0) as a nondegenerate initial value).

The three built-in specs:

    bm_spec()    Brownian motion: h1 = t, h2 = 1, r = t.
    ou_spec(p)   Ornstein-Uhlenbeck, dX = -mu (X - beta) dt + sigma dB,
                 started at the constant y:
                 h1 = (sigma^2/mu) sinh(mu t), h2 = e^(-mu t),
                 r = sigma^2/(2 mu) (e^(2 mu t) - 1), r0 = 0,
                 m(t) = beta + (y - beta) e^(-mu t).
    sou_spec(p)  The stationary variant (random N(0, sigma^2/(2 mu)) start,
                 zero mean): h1 = sigma^2/(2 mu) e^(mu t), h2 = e^(-mu t),
                 r = sigma^2/(2 mu) e^(2 mu t), r0 = sigma^2/(2 mu).

All spec functions are numpy-vectorized (they accept and return arrays);
custom specs must follow suit, since the quadrature engine evaluates them on
whole node batches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import DomainError, ParameterError

# Rate floor below which the OU formulas lose conditioning; callers wanting
# the mu -> 0 limit use bm_spec, which is that limit exactly.
MU_MIN = 1e-6

ArrayFn = Callable[[np.ndarray], np.ndarray]


def _check_times(*values: np.ndarray) -> None:
    for v in values:
        if not np.all(np.isfinite(v)) or np.any(np.asarray(v) < 0):
            raise DomainError("times must be finite and >= 0")


@dataclass(frozen=True, eq=False)
class GaussMarkovSpec:
    """Mean function plus factorized covariance of a Gauss-Markov process."""

    name: str
    m: ArrayFn
    h1: ArrayFn
    h2: ArrayFn
    r: ArrayFn
    r0: float = 0.0
    params: Mapping[str, float] = field(default_factory=dict)

    def kernel(self, s, t):
        """Covariance c(s, t) = h1(min) * h2(max), elementwise."""
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        _check_times(s, t)
        lo = np.minimum(s, t)
        hi = np.maximum(s, t)
        out = self.h1(lo) * self.h2(hi)
        return out if out.ndim else float(out)


def kernel(spec: GaussMarkovSpec, s, t):
    """Module-level alias for GaussMarkovSpec.kernel."""
    return spec.kernel(s, t)


@dataclass(frozen=True)
class OUParams:
    """Ornstein-Uhlenbeck parameters: rate mu, noise scale sigma, long-run
    mean beta, deterministic start y."""

    mu: float
    sigma: float
    beta: float = 0.0
    y: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and self.mu >= MU_MIN):
            raise ParameterError(
                f"mu must be >= {MU_MIN} (got {self.mu}); for the mu -> 0 "
                "limit use bm_spec"
            )
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ParameterError(f"sigma must be positive, got {self.sigma}")
        if not (math.isfinite(self.beta) and math.isfinite(self.y)):
            raise ParameterError("beta and y must be finite")


@dataclass(frozen=True)
class SOUParams:
    """Stationary Ornstein-Uhlenbeck parameters (zero mean by convention)."""

    mu: float
    sigma: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and self.mu >= MU_MIN):
            raise ParameterError(f"mu must be >= {MU_MIN}, got {self.mu}")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ParameterError(f"sigma must be positive, got {self.sigma}")

    @property
    def stationary_var(self) -> float:
        return self.sigma**2 / (2.0 * self.mu)


def bm_spec() -> GaussMarkovSpec:
    """Standard Brownian motion."""
    return GaussMarkovSpec(
        name="bm",
        m=np.zeros_like,
        h1=lambda t: np.asarray(t, dtype=float),
        h2=np.ones_like,
        r=lambda t: np.asarray(t, dtype=float),
        r0=0.0,
    )


def ou_spec(p: OUParams) -> GaussMarkovSpec:
    """Ornstein-Uhlenbeck with deterministic start y and mean level beta."""
    mu, sigma = p.mu, p.sigma
    # sinh/expm1 keep h1 and r well-conditioned down to MU_MIN.
    return GaussMarkovSpec(
        name="ou",
        m=lambda t: p.beta + (p.y - p.beta) * np.exp(-mu * t),
        h1=lambda t: (sigma**2 / mu) * np.sinh(mu * t),
        h2=lambda t: np.exp(-mu * t),
        r=lambda t: sigma**2 / (2.0 * mu) * np.expm1(2.0 * mu * t),
        r0=0.0,
        params={"mu": mu, "sigma": sigma, "beta": p.beta, "y": p.y},
    )


def sou_spec(p: SOUParams) -> GaussMarkovSpec:
    """Stationary Ornstein-Uhlenbeck (random start, exponential kernel)."""
    mu, sigma = p.mu, p.sigma
    v = p.stationary_var
    return GaussMarkovSpec(
        name="sou",
        m=np.zeros_like,
        h1=lambda t: v * np.exp(mu * t),
        h2=lambda t: np.exp(-mu * t),
        r=lambda t: v * np.exp(2.0 * mu * t),
        r0=v,
        params={"mu": mu, "sigma": sigma},
    )
