"""Acceptance gate: the binding numerical requirements, one test per
criterion, each printing a single PASS/FAIL line (run with -s to see them
on success). Tolerances are fixed here and must not be loosened to make a
failing build green.
"""

import math
import time

import numpy as np
import pytest

from fracgm import frac_cov as fc
from fracgm import neuro, simulate as sim
from fracgm.gm_core import OUParams, SOUParams
from fracgm.validation import (
    comparison_grid,
    fibm_crossing_time,
    fiou_crossing_time,
    suite_limits,
    suite_mc,
    suite_neuro,
)

SEED = 20260814

P = OUParams(mu=1.0, sigma=1.0)
SP = SOUParams(mu=1.0, sigma=1.0)


def report(num, label, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num} ({label}): {detail}")
    assert ok, f"criterion {num} ({label}): {detail}"


def test_criterion_1_order_one_limit_agreement():
    start = time.perf_counter()
    results = suite_limits()
    elapsed = time.perf_counter() - start
    worst = max(r.value for r in results)
    ok = all(r.passed for r in results) and elapsed < 10.0
    report(1, "quadrature equals closed forms at order 1", ok,
           f"worst relative gap {worst:.3e} (limit 1e-5), {elapsed:.2f}s "
           f"(limit 10s)")


def test_criterion_2_diagonal_variance_agreement():
    worst = 0.0
    for a in np.arange(0.1, 0.95, 0.1):
        for t in (0.5, 1.0, 2.0, 5.0):
            closed = fc.fibm_var(t, float(a))
            quad = fc.fibm_cov(t, t, float(a), method="quadrature")
            worst = max(worst, abs(quad - closed) / closed)
    report(2, "quadrature variance matches closed form", worst <= 1e-6,
           f"worst relative gap {worst:.3e} (limit 1e-6)")


@pytest.fixture(scope="module")
def mc_results():
    start = time.perf_counter()
    results = suite_mc(SEED)
    return {r.name: r for r in results}, time.perf_counter() - start


def test_criterion_3_exact_value_and_monte_carlo(mc_results):
    results, elapsed = mc_results
    closed = fc.fibm_var(2.0, 0.5)
    exact_ok = closed == pytest.approx(8.0 / math.pi, rel=1e-14)
    r = results["pathwise-var-at-2"]
    ok = exact_ok and r.passed and elapsed < 60.0
    report(3, "variance at t=2 order 1/2 equals 8/pi and survives MC", ok,
           f"closed {closed:.12g} vs 8/pi {8.0 / math.pi:.12g}; MC gap "
           f"{r.value:.3e} (limit {r.limit:.3e}); {elapsed:.1f}s (limit 60s)")


def test_criterion_4_variance_crossing_windows():
    t_bm = fibm_crossing_time()
    t_ou = fiou_crossing_time()
    ok = 1.6 <= t_bm <= 1.9 and 1.5 <= t_ou <= 2.0
    report(4, "order-0.2/0.8 variance curves cross in the windows", ok,
           f"integrated BM crossing {t_bm:.4f} in [1.6, 1.9]; integrated OU "
           f"crossing {t_ou:.4f} in [1.5, 2.0]")


def test_criterion_5_stationary_decomposition():
    worst_gap = 0.0
    dominated = True
    ts = np.linspace(0.3, 3.0, 10)
    for a in (0.2, 0.5, 0.8):
        for u in ts:
            for t in ts:
                uu, tt = float(u), float(t)
                fisou = fc.fisou_cov(SP, uu, tt, a)
                fiou = fc.fiou_cov(P, uu, tt, a, method="quadrature")
                start = fc.fisou_start_term(SP, uu, tt, a)
                worst_gap = max(worst_gap, abs(fisou - fiou - start))
                dominated = dominated and fisou >= fiou
    ok = worst_gap <= 1e-12 and dominated
    report(5, "stationary equals pinned plus start term", ok,
           f"worst identity residual {worst_gap:.3e} (limit 1e-12); "
           f"stationary >= pinned on the grid: {dominated}")


def count_local_maxima(vals: np.ndarray) -> int:
    # discrete local maxima; boundary points compare one-sided
    padded = np.concatenate(([-np.inf], vals, [-np.inf]))
    return int(np.sum((padded[1:-1] > padded[:-2]) & (padded[1:-1] > padded[2:])))


def test_criterion_6_single_maximum_in_order():
    alphas = np.arange(0.05, 0.951, 0.05)
    vals = np.array([fc.fibm_cov(1.0, 5.0, float(a)) for a in alphas])
    peaks = count_local_maxima(vals)
    amax = float(alphas[vals.argmax()])
    # at (1, 5) the curve rises over the whole supported order range, so
    # the single maximum sits at the right edge of the sampled set; an
    # interior peak does occur at shorter horizons, checked at (1, 2)
    near = np.array([fc.fibm_cov(1.0, 2.0, float(a)) for a in alphas])
    near_peaks = count_local_maxima(near)
    near_amax = int(near.argmax())
    interior = 0 < near_amax < len(alphas) - 1
    ok = peaks == 1 and near_peaks == 1 and interior
    report(6, "covariance is unimodal in the order", ok,
           f"(1, 5): {peaks} local maximum at order {amax:.2f}; "
           f"(1, 2): {near_peaks} at interior order "
           f"{float(alphas[near_amax]):.2f}")


def test_criterion_7_simulation_cross_validation(mc_results):
    results, _ = mc_results
    agree = results["cholesky-vs-pathwise-variances"]
    ks = results["ks-normal-at-2"]
    ok = agree.passed and ks.passed
    n_times = comparison_grid().n
    report(7, "Cholesky and pathwise routes agree and look Gaussian", ok,
           f"max variance gap {agree.value:.3f} of 3 joint SE over "
           f"{n_times} times (limit 1); KS {ks.value:.4f} < critical "
           f"{ks.limit:.4f}")


def test_criterion_8_neuron_voltage_statistics():
    results = suite_neuro(SEED)
    ok = all(r.passed for r in results)
    worst = max(r.value / r.limit for r in results)
    report(8, "voltage ensemble matches analytic mean and variance", ok,
           f"{sum(r.passed for r in results)}/{len(results)} checks passed "
           f"(orders 0.5 and 1 at t in {{0.5, 1, 2}}), worst ratio "
           f"{worst:.2f} of its bound")
