"""Quadrature for integrals with a left algebraic endpoint singularity.

Every moment formula in this package reduces to integrals of the form

    int_0^u (u - s)^(alpha - 1) phi(s) ds,        0 < alpha <= 1,

whose integrand blows up at s = u when alpha < 1. The weight is removed
exactly by the power substitution w = (u - s)^alpha:

    int_0^u (u - s)^(alpha - 1) phi(s) ds
        = (1/alpha) int_0^(u^alpha) phi(u - w^(1/alpha)) dw,

which leaves a bounded integrand on a bounded interval. The transformed
integrand is evaluated with composite Gauss-Legendre panels whose edges are
power-graded toward w = 0, where phi(u - w^(1/alpha)) still has a mild
w^(1/alpha) kink. Node counts are deterministic (no adaptivity), so repeated
runs are bit-identical; accuracy is reported a posteriori by re-evaluating
with doubled panels.

Nested double integrals over triangular regions use the same substitution in
both variables; the inner weight is always (t - v)^(alpha - 1), so the inner
variable is z = (t - v)^alpha regardless of the inner interval, which also
handles the corner where the inner interval touches v = t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_legendre

from .errors import DomainError, NumericError, ParameterError

ALPHA_MIN = 0.01
ALPHA_MAX = 1.0

# Accuracy below this order degrades (the transformed kink w^(1/alpha) grows
# arbitrarily flat); results are still returned but flagged by callers.
ALPHA_ACCURACY_FLOOR = 0.1

# Exponent for power-grading panel edges toward the singular end.
_GRADING = 3.0


@dataclass(frozen=True)
class FracOrder:
    """Fractional integration order, restricted to [0.01, 1]."""

    alpha: float

    def __post_init__(self) -> None:
        a = self.alpha
        if not (isinstance(a, (int, float)) and math.isfinite(a)):
            raise ParameterError(f"fractional order must be a finite real, got {a!r}")
        if not (ALPHA_MIN <= a <= ALPHA_MAX):
            raise ParameterError(
                f"fractional order {a} outside the supported range "
                f"[{ALPHA_MIN}, {ALPHA_MAX}]"
            )

    @property
    def low_accuracy(self) -> bool:
        """True when alpha is below the documented accuracy floor."""
        return self.alpha < ALPHA_ACCURACY_FLOOR


def as_order(alpha: float | FracOrder) -> FracOrder:
    """Coerce a float to FracOrder, validating the range."""
    if isinstance(alpha, FracOrder):
        return alpha
    return FracOrder(float(alpha))


@dataclass(frozen=True)
class QuadratureConfig:
    """Deterministic composite Gauss-Legendre settings.

    rel_tol is not an adaptive target; it is the bar against which the
    panel-doubling self-check compares.
    """

    nodes_per_panel: int = 32
    panels: int = 8
    rel_tol: float = 1e-8

    def __post_init__(self) -> None:
        if self.nodes_per_panel < 2:
            raise ParameterError("nodes_per_panel must be at least 2")
        if self.panels < 1:
            raise ParameterError("panels must be at least 1")
        if not (0.0 < self.rel_tol < 1.0):
            raise ParameterError("rel_tol must lie in (0, 1)")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=32)
def _gl_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    # Cached reference nodes/weights on [-1, 1]; treat as read-only.
    x, w = roots_legendre(n)
    return x, w


def _graded_edges(panels: int) -> np.ndarray:
    return (np.arange(panels + 1) / panels) ** _GRADING


def _composite_nodes(
    lo: np.ndarray | float, hi: np.ndarray | float, cfg: QuadratureConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Composite GL nodes and weights on [lo, hi], edges graded toward lo.

    lo and hi may be arrays of common shape; the returned arrays gain a
    trailing axis of length panels * nodes_per_panel.
    """
    x, w = _gl_rule(cfg.nodes_per_panel)
    frac = _graded_edges(cfg.panels)
    lo = np.asarray(lo, dtype=float)[..., None]
    hi = np.asarray(hi, dtype=float)[..., None]
    edges = lo + (hi - lo) * frac            # (..., panels + 1)
    mid = 0.5 * (edges[..., 1:] + edges[..., :-1])
    half = 0.5 * (edges[..., 1:] - edges[..., :-1])
    nodes = mid[..., None] + half[..., None] * x    # (..., panels, n)
    wts = half[..., None] * w
    shape = nodes.shape[:-2] + (cfg.panels * cfg.nodes_per_panel,)
    return nodes.reshape(shape), wts.reshape(shape)


def transformed_nodes(
    u: float, alpha: FracOrder, cfg: QuadratureConfig
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Evaluation points for the substituted integral on (0, u).

    Returns (s, gap, weights) with gap = u - s held exactly as w^(1/alpha);
    use gap instead of recomputing u - s when the integrand involves powers
    of the distance to the singular endpoint, where the subtraction would
    lose all digits.
    """
    a = alpha.alpha
    w_nodes, w_wts = _composite_nodes(0.0, u**a, cfg)
    gap = w_nodes ** (1.0 / a)
    s = np.maximum(u - gap, 0.0)
    return s, gap, w_wts / a


def _check_finite(values: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(values)):
        raise NumericError(f"{what} produced non-finite values")


def singular_left_integral(
    phi: Callable[[np.ndarray], np.ndarray],
    u: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
) -> float:
    """int_0^u (u - s)^(alpha - 1) phi(s) ds.

    phi must accept a numpy array of points in (0, u) and evaluate
    elementwise. u = 0 returns 0; u < 0 is a domain error.
    """
    alpha = as_order(alpha)
    cfg = cfg or DEFAULT_CONFIG
    if not math.isfinite(u) or u < 0.0:
        raise DomainError(f"upper limit must be finite and >= 0, got {u}")
    if u == 0.0:
        return 0.0
    s, _, wts = transformed_nodes(u, alpha, cfg)
    vals = np.broadcast_to(np.asarray(phi(s), dtype=float), s.shape)
    _check_finite(vals, "integrand")
    return float(vals @ wts)


def _check_pair(u: float, t: float) -> None:
    if not (math.isfinite(u) and math.isfinite(t)):
        raise DomainError(f"times must be finite, got ({u}, {t})")
    if u < 0.0 or u > t:
        raise DomainError(f"times must satisfy 0 <= u <= t, got ({u}, {t})")


def compute_J(
    u: float, t: float, alpha: float | FracOrder, cfg: QuadratureConfig | None = None
) -> float:
    """J(u, t) = int_0^u s (u - s)^(alpha - 1) (t - s)^alpha ds for u <= t.

    The (t - s)^alpha factor is formed from the transform variable itself
    (t - s = (t - u) + w^(1/alpha)), so the diagonal u = t stays accurate.
    """
    alpha = as_order(alpha)
    cfg = cfg or DEFAULT_CONFIG
    _check_pair(u, t)
    if u == 0.0:
        return 0.0
    delta = t - u
    s, gap, wts = transformed_nodes(u, alpha, cfg)
    vals = s * (delta + gap) ** alpha.alpha
    return float(vals @ wts)


def compute_H(
    u: float, t: float, alpha: float | FracOrder, cfg: QuadratureConfig | None = None
) -> float:
    """H(u, t) = int_0^u (u - s)^(alpha - 1) (t - s)^alpha ds for u <= t."""
    alpha = as_order(alpha)
    cfg = cfg or DEFAULT_CONFIG
    _check_pair(u, t)
    if u == 0.0:
        return 0.0
    delta = t - u
    _, gap, wts = transformed_nodes(u, alpha, cfg)
    vals = (delta + gap) ** alpha.alpha
    return float(vals @ wts)


class InnerBound(Enum):
    """Inner integration interval of the nested double integral.

    S:          v in (0, s)   (s is the outer variable)
    U:          v in (s, u)
    T_FROM_U:   v in (u, t)
    """

    S = "s"
    U = "u"
    T_FROM_U = "t_from_u"


def nested_singular_integral(
    psi: Callable[[np.ndarray, np.ndarray], np.ndarray],
    u: float,
    t: float,
    alpha_outer: float | FracOrder,
    alpha_inner: float | FracOrder,
    inner_bounds: InnerBound,
    cfg: QuadratureConfig | None = None,
) -> float:
    """int_0^u (u - s)^(a_out - 1) [ int (t - v)^(a_in - 1) psi(s, v) dv ] ds.

    The inner interval is selected by inner_bounds; see InnerBound. psi must
    broadcast over numpy arrays (it receives an outer-node column against an
    inner-node matrix). Requires 0 <= u <= t.
    """
    a_out = as_order(alpha_outer)
    a_in = as_order(alpha_inner)
    cfg = cfg or DEFAULT_CONFIG
    _check_pair(u, t)
    if u == 0.0:
        return 0.0
    ai = a_in.alpha
    delta = t - u

    s, gap, wts_out = transformed_nodes(u, a_out, cfg)
    # Inner substitution z = (t - v)^ai maps v-interval (vlo, vhi) to the
    # z-interval ((t - vhi)^ai, (t - vlo)^ai); distances to t come from the
    # outer transform variable, never from float subtraction against t.
    if inner_bounds is InnerBound.S:
        zlo = (delta + gap) ** ai
        zhi = np.full_like(s, t**ai)
    elif inner_bounds is InnerBound.U:
        zlo = np.full_like(s, delta**ai)
        zhi = (delta + gap) ** ai
    elif inner_bounds is InnerBound.T_FROM_U:
        zlo = np.zeros_like(s)
        zhi = np.full_like(s, delta**ai)
    else:
        raise ParameterError(f"unknown inner bounds {inner_bounds!r}")

    z, wts_in = _composite_nodes(zlo, zhi, cfg)     # (N, M)
    v = np.maximum(t - z ** (1.0 / ai), 0.0)
    vals = np.broadcast_to(np.asarray(psi(s[:, None], v), dtype=float), v.shape)
    _check_finite(vals, "inner integrand")
    inner = (vals * wts_in).sum(axis=1) / ai
    return float(inner @ wts_out)


def panel_doubling_error(
    evaluate: Callable[[QuadratureConfig], float],
    cfg: QuadratureConfig | None = None,
) -> tuple[float, float]:
    """A posteriori accuracy check: re-evaluate with doubled panel count.

    evaluate maps a QuadratureConfig to a value. Returns (refined, change)
    where refined uses 2x panels and change = |refined - coarse| is the
    self-reported error, to be compared against cfg.rel_tol * |refined|.
    """
    cfg = cfg or DEFAULT_CONFIG
    coarse = evaluate(cfg)
    refined = evaluate(replace(cfg, panels=2 * cfg.panels))
    return refined, abs(refined - coarse)


def reciprocal_gamma(alpha: float | FracOrder) -> float:
    """1/Gamma(alpha), computed as alpha/Gamma(alpha + 1) to stay clear of
    the pole at 0."""
    a = alpha.alpha if isinstance(alpha, FracOrder) else float(alpha)
    return a / math.gamma(a + 1.0)
