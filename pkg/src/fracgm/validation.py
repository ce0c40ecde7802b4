"""Self-check suites behind the validate command and the acceptance tests.

Each suite returns CheckResult rows; a check passes when value <= limit.
All Monte-Carlo checks take an explicit seed, so verdicts are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import frac_cov as fc
from . import neuro, simulate
from .gm_core import OUParams, SOUParams
from .errors import ParameterError

DEFAULT_SEED = 20260814


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    value: float
    limit: float
    detail: str = ""


def _check(suite: str, name: str, value: float, limit: float, detail: str = "") -> CheckResult:
    return CheckResult(suite, name, bool(value <= limit), float(value), float(limit), detail)


def suite_limits(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Quadrature at alpha = 1 against the closed forms, 5x5 grid in [0.5, 3]."""
    del seed
    p = OUParams(mu=1.0, sigma=1.0)
    sp = SOUParams(mu=1.0, sigma=1.0)
    pts = np.linspace(0.5, 3.0, 5)
    pairs = [(float(u), float(t)) for u in pts for t in pts]
    cases: list[tuple[str, Callable[[float, float], float], Callable[[float, float], float]]] = [
        ("fibm", lambda u, t: fc.fibm_cov(u, t, 1.0, method="quadrature"),
         lambda u, t: fc.fibm_cov(u, t, 1.0, method="closed")),
        ("fiou", lambda u, t: fc.fiou_cov(p, u, t, 1.0, method="quadrature"),
         lambda u, t: fc.fiou_cov(p, u, t, 1.0, method="closed")),
        ("fisou", lambda u, t: fc.fisou_cov(sp, u, t, 1.0, method="quadrature"),
         lambda u, t: fc.fisou_cov(sp, u, t, 1.0, method="closed")),
    ]
    out = []
    for name, quad, closed in cases:
        worst = max(abs(quad(u, t) - closed(u, t)) / abs(closed(u, t)) for u, t in pairs)
        out.append(_check("limits", f"{name}-alpha1-closed-form", worst, 1e-5,
                          "max relative gap on the grid"))
    return out


def _crossing_time(var_of_t: Callable[[float], float], lo: float, hi: float) -> float:
    """Root of var_0.2 - var_0.8 in [lo, hi]; the curves must actually cross."""
    f = var_of_t
    if f(lo) <= 0.0 or f(hi) >= 0.0:
        raise ParameterError(
            f"variance curves do not bracket a crossing on [{lo}, {hi}]"
        )
    return float(brentq(f, lo, hi, xtol=1e-10))


def fibm_crossing_time() -> float:
    """Where the order-0.2 and order-0.8 variance curves cross (closed forms)."""
    return _crossing_time(
        lambda t: fc.fibm_var(t, 0.2) - fc.fibm_var(t, 0.8), 1.0, 2.5
    )


def fiou_crossing_time() -> float:
    """Same crossing for the integrated OU variances (quadrature curves)."""
    p = OUParams(mu=1.0, sigma=1.0)
    return _crossing_time(
        lambda t: fc.fiou_var(p, t, 0.2) - fc.fiou_var(p, t, 0.8), 1.0, 2.5
    )


def suite_crossing(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Variance-crossing times of the order-0.2 vs order-0.8 curves."""
    del seed
    out = []
    t_bm = fibm_crossing_time()
    out.append(CheckResult("crossing", "fibm-crossing-in-window",
                           1.6 <= t_bm <= 1.9, t_bm, 1.9,
                           "crossing time; window [1.6 .. 1.9]"))
    t_ou = fiou_crossing_time()
    out.append(CheckResult("crossing", "fiou-crossing-in-window",
                           1.5 <= t_ou <= 2.0, t_ou, 2.0,
                           "crossing time; window [1.5 .. 2.0]"))
    return out


def comparison_grid() -> simulate.TimeGrid:
    """50 times in [0.1, 2], all multiples of h = 0.01 so the pathwise route
    evaluates at exactly these times."""
    idx = np.unique(np.round(np.linspace(10, 200, 50)).astype(int))
    return simulate.TimeGrid(idx * 0.01)


def suite_mc(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Cross-validation of the two simulation routes for order 0.5."""
    alpha = 0.5
    n_paths = 10_000
    fine = simulate.TimeGrid.regular(0.01, 200, include_zero=True)
    grid = comparison_grid()
    idx = np.round(grid.times / 0.01).astype(int)

    bm = simulate.sample_bm_paths(fine, n_paths, seed)
    rl = simulate.pathwise_rl_integral(bm, alpha)

    exact_var_2 = fc.fibm_var(2.0, alpha)
    est, se = simulate.mc_cov_estimate(rl, fine.n - 1, fine.n - 1)
    out = [
        _check("mc", "pathwise-var-at-2", abs(est - exact_var_2),
               3.0 * se + 0.02 * exact_var_2,
               f"estimate {est:.6g} vs exact {exact_var_2:.6g}")
    ]

    cov = simulate.build_cov_matrix(
        lambda u, t: fc.fibm_cov(u, t, alpha), grid, source="fibm alpha=0.5"
    )
    factor = simulate.cholesky_factor(cov)
    chol = simulate.sample_paths(factor, grid, n_paths, seed + 1,
                                 process="fibm", alpha=alpha)

    worst = 0.0
    for k, fine_k in enumerate(idx):
        vc, sc = simulate.mc_cov_estimate(chol, k, k)
        vp, sp_ = simulate.mc_cov_estimate(rl, int(fine_k), int(fine_k))
        joint = math.sqrt(sc * sc + sp_ * sp_)
        worst = max(worst, abs(vc - vp) / (3.0 * joint))
    out.append(_check("mc", "cholesky-vs-pathwise-variances", worst, 1.0,
                      "max |diff| / (3 joint std errors) over the 50 grid times"))

    ks = simulate.gaussian_ks_statistic(chol.values[:, -1], exact_var_2)
    out.append(_check("mc", "ks-normal-at-2", ks,
                      simulate.ks_critical_value(n_paths, 0.01),
                      "KS statistic vs critical value at 1%"))
    return out


def suite_neuro(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Voltage ensemble statistics against the analytic engines."""
    p = neuro.NeuronParams(c_m=1.0, g_l=1.0, v_l=0.0, tau=1.0, varsigma=1.0,
                           i0=0.0, eta0="stationary")
    n_paths = 10_000
    grid = simulate.TimeGrid.regular(0.01, 200, include_zero=True)
    eta = neuro.simulate_eta(p, grid, n_paths, seed)
    out = []
    for alpha in (0.5, 1.0):
        v = neuro.simulate_voltage(p, eta, alpha)
        for t in (0.5, 1.0, 2.0):
            k = int(round(t / 0.01))
            col = v.values[:, k]
            mean_se = col.std(ddof=1) / math.sqrt(n_paths)
            m_exact = neuro.voltage_mean(p, t, alpha)
            out.append(_check("neuro", f"mean-a{alpha}-t{t}",
                              abs(col.mean() - m_exact), 3.0 * mean_se,
                              f"MC mean vs analytic {m_exact:.6g}"))
            est, se = simulate.mc_cov_estimate(v, k, k)
            v_exact = neuro.voltage_var(p, t, alpha)
            out.append(_check("neuro", f"var-a{alpha}-t{t}",
                              abs(est - v_exact), 3.0 * se + 0.02 * v_exact,
                              f"MC var vs analytic {v_exact:.6g}"))
    return out


SUITES: dict[str, Callable[[int], list[CheckResult]]] = {
    "limits": suite_limits,
    "crossing": suite_crossing,
    "mc": suite_mc,
    "neuro": suite_neuro,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    if name not in SUITES:
        raise ParameterError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed)
