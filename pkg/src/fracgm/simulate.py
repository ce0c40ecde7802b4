"""Gaussian path simulation and Monte-Carlo cross-validation.

Two independent routes to an ensemble of fractional-integral paths:

1. Cholesky sampling of the exact law: build the covariance matrix of the
   fractional integral on a grid from the analytic/quadrature covariance
   functions, factor it (with a small documented jitter ladder for matrices
   that are only just positive definite), and multiply standard normals.

2. Pathwise integration: simulate the underlying process exactly (Brownian
   increments, or the exact Ornstein-Uhlenbeck transition) on a fine uniform
   grid, then apply the fractional integral path by path. The integral of a
   piecewise-linear path against the (t-s)^(alpha-1) weight is computed with
   exact per-panel moments (product integration), so the only error is the
   piecewise-linear approximation of the path itself, not the quadrature.

Both routes are deterministic given (seed, path index): every path draws its
Gaussians from its own counter-based substream keyed by (seed, index), so
ensembles are independent of evaluation order and can be regenerated
bit-identically. The generator id string is stored with every ensemble.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
from scipy import stats

from .errors import (
    DomainError,
    NotPSDError,
    NumericError,
    ParameterError,
    UnsupportedSpecError,
)
from .gm_core import OUParams, SOUParams
from .quadrature import FracOrder, as_order, reciprocal_gamma

GENERATOR_ID = "numpy-philox4x64-10:standard-normal:key=(seed,path)"

# Relative jitter ladder tried in order when Cholesky fails outright.
JITTER_LADDER = (1e-12, 1e-10, 1e-8)

THREADS_ENV_VAR = "FRACGM_THREADS"


# -- grids --------------------------------------------------------------------


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing evaluation times, optionally starting at 0.

    Covariance matrices require times > 0 (the integral paths are pinned at
    0, so including it makes the matrix singular); path simulation wants the
    0 node. Constructors cover both.
    """

    times: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size == 0:
            raise ParameterError("grid times must be a non-empty 1-D array")
        if not np.all(np.isfinite(t)):
            raise ParameterError("grid times must be finite")
        if t[0] < 0.0:
            raise DomainError("grid times must be >= 0")
        if np.any(np.diff(t) <= 0.0):
            raise ParameterError("grid times must be strictly increasing")
        t.setflags(write=False)
        object.__setattr__(self, "times", t)

    @classmethod
    def regular(cls, step: float, n_steps: int, include_zero: bool = False) -> "TimeGrid":
        """Uniform grid step, 2*step, ..., n_steps*step (plus 0 if asked)."""
        if step <= 0.0 or n_steps < 1:
            raise ParameterError("step must be positive and n_steps >= 1")
        start = 0 if include_zero else 1
        return cls(step * np.arange(start, n_steps + 1))

    @property
    def n(self) -> int:
        return self.times.size

    @property
    def uniform(self) -> bool:
        d = np.diff(self.times)
        if d.size == 0:
            return True
        return bool(np.allclose(d, d[0], rtol=1e-9, atol=0.0))

    @property
    def step(self) -> float | None:
        if self.n < 2 or not self.uniform:
            return None
        return float(self.times[1] - self.times[0])

    @property
    def includes_zero(self) -> bool:
        return self.times[0] == 0.0


# -- covariance matrices and factorization ------------------------------------


@dataclass(frozen=True)
class CovMatrix:
    """Covariance matrix evaluated on a grid, with provenance string."""

    grid: TimeGrid
    values: np.ndarray
    source: str = ""

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        n = self.grid.n
        if v.shape != (n, n):
            raise ParameterError(f"covariance must be {n}x{n}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise NumericError("covariance matrix has non-finite entries")
        if not np.allclose(v, v.T, rtol=1e-12, atol=0.0):
            raise NumericError("covariance matrix is not symmetric")
        if np.any(np.diag(v) < 0.0):
            raise NumericError("covariance matrix has negative diagonal entries")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def _resolve_threads(n_threads: int | None) -> int:
    if n_threads is None:
        n_threads = int(os.environ.get(THREADS_ENV_VAR, "1"))
    if n_threads < 1:
        raise ParameterError("thread count must be >= 1")
    return n_threads


def build_cov_matrix(
    cov_fn: Callable[[float, float], float],
    grid: TimeGrid,
    n_threads: int | None = None,
    source: str = "",
) -> CovMatrix:
    """Evaluate cov_fn on the upper triangle of grid x grid and mirror.

    The grid must exclude t = 0. Entries are independent, so the optional
    thread pool (default from the FRACGM_THREADS environment variable)
    changes nothing but wall time.
    """
    if grid.includes_zero:
        raise DomainError(
            "covariance grids must exclude t = 0 (the matrix would be singular)"
        )
    n_threads = _resolve_threads(n_threads)
    t = grid.times
    n = grid.n
    out = np.empty((n, n))

    def fill_row(i: int) -> None:
        for j in range(i, n):
            val = float(cov_fn(t[i], t[j]))
            if not math.isfinite(val):
                raise NumericError(
                    f"covariance function returned {val} at (t_{i}, t_{j}) = "
                    f"({t[i]}, {t[j]})"
                )
            out[i, j] = val

    if n_threads == 1:
        for i in range(n):
            fill_row(i)
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            # .result() re-raises worker exceptions
            for fut in [pool.submit(fill_row, i) for i in range(n)]:
                fut.result()

    lower = np.tril_indices(n, -1)
    out[lower] = out.T[lower]
    return CovMatrix(grid=grid, values=out, source=source)


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower-triangular factor plus the jitter that made it possible."""

    matrix: np.ndarray
    jitter: float = 0.0


def cholesky_factor(cov: CovMatrix | np.ndarray) -> CholeskyFactor:
    """Lower Cholesky factor of a covariance matrix.

    If plain factorization fails, retries with jitter eps * max(diag) added
    to the diagonal for eps in the documented ladder; gives up with a
    not-positive-semidefinite error after that.
    """
    c = cov.values if isinstance(cov, CovMatrix) else np.asarray(cov, dtype=float)
    scale = float(np.max(np.diag(c))) if c.size else 0.0
    for eps in (0.0, *JITTER_LADDER):
        try:
            shifted = c if eps == 0.0 else c + eps * scale * np.eye(c.shape[0])
            return CholeskyFactor(matrix=np.linalg.cholesky(shifted), jitter=eps * scale)
        except np.linalg.LinAlgError:
            continue
    raise NotPSDError(
        f"covariance matrix is not positive semidefinite even after jitter "
        f"ladder {JITTER_LADDER} (relative to max diagonal {scale})"
    )


# -- ensembles ----------------------------------------------------------------


@dataclass(frozen=True)
class PathEnsemble:
    """Matrix of sampled paths (one row per path) on a common grid."""

    grid: TimeGrid
    values: np.ndarray
    seed: int
    generator_id: str = GENERATOR_ID
    process: str = ""
    alpha: float | None = None

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[1] != self.grid.n:
            raise ParameterError(
                f"values must be (n_paths, {self.grid.n}), got {v.shape}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_paths(self) -> int:
        return self.values.shape[0]

    def to_csv(self, path: str, extra_metadata: Mapping[str, str] | None = None) -> None:
        write_ensemble_csv(self, path, extra_metadata)


def _check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise ParameterError(f"seed must be an integer, got {seed!r}")
    if not (0 <= int(seed) < 2**64):
        raise ParameterError("seed must fit in an unsigned 64-bit integer")
    return int(seed)


def _draw_standard_normals(n_paths: int, n_cols: int, seed: int) -> np.ndarray:
    """One row of standard normals per path, each from its keyed substream."""
    seed = _check_seed(seed)
    if n_paths < 1:
        raise ParameterError("n_paths must be >= 1")
    z = np.empty((n_paths, n_cols))
    for i in range(n_paths):
        bitgen = np.random.Philox(key=np.array([seed, i], dtype=np.uint64))
        z[i] = np.random.Generator(bitgen).standard_normal(n_cols)
    return z


def sample_paths(
    factor: CholeskyFactor | np.ndarray,
    grid: TimeGrid,
    n_paths: int,
    seed: int,
    process: str = "",
    alpha: float | None = None,
) -> PathEnsemble:
    """Draw n_paths correlated Gaussian paths x = L z on the grid."""
    L = factor.matrix if isinstance(factor, CholeskyFactor) else np.asarray(factor)
    if L.shape != (grid.n, grid.n):
        raise ParameterError(f"factor must be {grid.n}x{grid.n}, got {L.shape}")
    z = _draw_standard_normals(n_paths, grid.n, seed)
    return PathEnsemble(
        grid=grid,
        values=z @ L.T,
        seed=int(seed),
        process=process,
        alpha=alpha,
    )


def mc_cov_estimate(ensemble: PathEnsemble, i: int, j: int) -> tuple[float, float]:
    """Unbiased sample covariance between grid indices i and j, with its
    standard error estimated from the spread of the per-path products."""
    n = ensemble.n_paths
    if n < 2:
        raise ParameterError("need at least two paths for a covariance estimate")
    cols = ensemble.values.shape[1]
    if not (0 <= i < cols and 0 <= j < cols):
        raise IndexError(f"indices ({i}, {j}) out of range for {cols} grid times")
    xi = ensemble.values[:, i] - ensemble.values[:, i].mean()
    xj = ensemble.values[:, j] - ensemble.values[:, j].mean()
    products = xi * xj
    estimate = float(products.sum() / (n - 1))
    std_error = float(products.std(ddof=1) / math.sqrt(n))
    return estimate, std_error


# -- underlying process samplers ----------------------------------------------


def _ou_transition_paths(
    mu: float,
    sigma: float,
    beta: float,
    grid: TimeGrid,
    n_paths: int,
    seed: int,
    start_value: float = 0.0,
    start_std: float = 0.0,
) -> np.ndarray:
    """Exact OU transitions on the grid, vectorized over paths.

    Column layout of each path's substream: an optional draw for the random
    start (when start_std > 0) followed by one draw per grid step. The first
    step runs from t = 0 to times[0]; if the grid starts at 0 that step has
    zero length and just reproduces the start value.
    """
    times = grid.times
    dts = np.diff(times, prepend=0.0)
    n_steps = times.size
    randomized = start_std > 0.0
    z = _draw_standard_normals(n_paths, n_steps + (1 if randomized else 0), seed)
    if randomized:
        x = start_value + start_std * z[:, 0]
        z = z[:, 1:]
    else:
        x = np.full(n_paths, float(start_value))

    decay = np.exp(-mu * dts)
    # conditional std of the exact transition over each step
    step_std = np.sqrt(sigma**2 / (2.0 * mu) * -np.expm1(-2.0 * mu * dts))
    out = np.empty((n_paths, n_steps))
    for k in range(n_steps):
        x = beta + (x - beta) * decay[k] + step_std[k] * z[:, k]
        out[:, k] = x
    return out


def sample_bm_paths(grid: TimeGrid, n_paths: int, seed: int) -> PathEnsemble:
    """Standard Brownian motion on the grid (exact increments from t = 0)."""
    dts = np.diff(grid.times, prepend=0.0)
    z = _draw_standard_normals(n_paths, grid.n, seed)
    values = np.cumsum(z * np.sqrt(dts), axis=1)
    return PathEnsemble(grid=grid, values=values, seed=int(seed), process="bm")


def sample_ou_paths(p: OUParams, grid: TimeGrid, n_paths: int, seed: int) -> PathEnsemble:
    """OU paths with the exact transition, started at the constant p.y."""
    values = _ou_transition_paths(
        p.mu, p.sigma, p.beta, grid, n_paths, seed, start_value=p.y
    )
    return PathEnsemble(grid=grid, values=values, seed=int(seed), process="ou")


def sample_sou_paths(p: SOUParams, grid: TimeGrid, n_paths: int, seed: int) -> PathEnsemble:
    """Stationary OU paths: random start from the stationary law, then the
    same exact transition (zero mean level)."""
    values = _ou_transition_paths(
        p.mu,
        p.sigma,
        0.0,
        grid,
        n_paths,
        seed,
        start_value=0.0,
        start_std=math.sqrt(p.stationary_var),
    )
    return PathEnsemble(grid=grid, values=values, seed=int(seed), process="sou")


# -- pathwise fractional integration -------------------------------------------


def rl_weight_matrix(grid: TimeGrid, alpha: float | FracOrder) -> np.ndarray:
    """Lower-triangular W with (I^a Y)(t_k) = sum_m W[k, m] Y(t_m) for a
    piecewise-linear Y on a uniform grid containing 0.

    Per panel [t_j, t_(j+1)] the moments int (t_k - s)^(a-1) ds and
    int (t_k - s)^(a-1) (s - t_j) ds are exact, so constants and linear
    functions integrate exactly for every alpha.
    """
    alpha = as_order(alpha)
    if not grid.includes_zero or grid.step is None:
        raise UnsupportedSpecError(
            "pathwise fractional integration needs a uniform grid starting at 0"
        )
    a = alpha.alpha
    h = grid.step
    n = grid.n
    d = np.arange(n + 1, dtype=float)
    # m0[d], m1[d]: weight moments of the panel ending d steps before t_k
    pow_a = d**a
    pow_a1 = d ** (a + 1.0)
    m0 = np.zeros(n + 1)
    m1 = np.zeros(n + 1)
    m0[1:] = h**a * (pow_a[1:] - pow_a[:-1]) / a
    m1[1:] = h ** (a + 1.0) * (
        d[1:] * (pow_a[1:] - pow_a[:-1]) / a - (pow_a1[1:] - pow_a1[:-1]) / (a + 1.0)
    )
    left = m0 - m1 / h    # multiplies the panel's left value
    right = m1 / h        # multiplies the panel's right value

    k = np.arange(n)
    D = k[:, None] - k[None, :]
    W = np.where(D >= 1, left[np.clip(D, 0, n)], 0.0)
    W += np.where((D >= 0) & (k[None, :] >= 1), right[np.clip(D + 1, 0, n)], 0.0)
    return reciprocal_gamma(a) * W


def pathwise_rl_integral(ensemble: PathEnsemble, alpha: float | FracOrder) -> PathEnsemble:
    """Apply the fractional integral to every path of the ensemble.

    The ensemble's grid must be uniform and start at 0 (paths are pinned
    there); the result lives on the same grid and keeps seed and generator.
    """
    alpha = as_order(alpha)
    W = rl_weight_matrix(ensemble.grid, alpha)
    name = f"rl({ensemble.process})" if ensemble.process else "rl"
    return PathEnsemble(
        grid=ensemble.grid,
        values=ensemble.values @ W.T,
        seed=ensemble.seed,
        generator_id=ensemble.generator_id,
        process=name,
        alpha=alpha.alpha,
    )


# -- distribution checks --------------------------------------------------------


def gaussian_ks_statistic(samples: np.ndarray, variance: float) -> float:
    """One-sample Kolmogorov-Smirnov statistic against N(0, variance)."""
    if variance <= 0.0:
        raise ParameterError("variance must be positive")
    return float(
        stats.kstest(np.asarray(samples, dtype=float), "norm", args=(0.0, math.sqrt(variance))).statistic
    )


def ks_critical_value(n_samples: int, significance: float = 0.01) -> float:
    """Asymptotic Kolmogorov critical value at the given significance."""
    if n_samples < 1 or not (0.0 < significance < 1.0):
        raise ParameterError("need n_samples >= 1 and significance in (0, 1)")
    return math.sqrt(-0.5 * math.log(significance / 2.0)) / math.sqrt(n_samples)


# -- CSV serialization ----------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_ensemble_csv(
    ensemble: PathEnsemble,
    path: str,
    extra_metadata: Mapping[str, str] | None = None,
    extra_rows: Mapping[str, np.ndarray] | None = None,
) -> None:
    """Write the ensemble with a '#'-prefixed key,value metadata preamble,
    a times row, then one row per path. Deterministic byte-for-byte for a
    given ensemble.

    extra_rows are labeled per-time rows (analytic curves and the like)
    written between the times row and the paths; labels must not start
    with "path".
    """
    from . import __version__

    grid = ensemble.grid
    meta: dict[str, str] = {
        "format": "fracgm-ensemble-v1",
        "version": __version__,
        "process": ensemble.process or "unknown",
        "alpha": "" if ensemble.alpha is None else _fmt(ensemble.alpha),
        "seed": str(ensemble.seed),
        "generator_id": ensemble.generator_id,
        "n_paths": str(ensemble.n_paths),
        "grid_step": _fmt(grid.step) if grid.step is not None else "nonuniform",
        "grid_includes_zero": str(grid.includes_zero).lower(),
    }
    if extra_metadata:
        meta.update({str(k): str(v) for k, v in extra_metadata.items()})
    with open(path, "w", newline="") as fh:
        for key, value in meta.items():
            fh.write(f"# {key},{value}\n")
        fh.write("times," + ",".join(_fmt(t) for t in grid.times) + "\n")
        for label, row in (extra_rows or {}).items():
            row = np.asarray(row, dtype=float)
            if label.startswith("path") or label == "times" or row.shape != (grid.n,):
                raise ParameterError(f"bad extra row {label!r}")
            fh.write(f"{label}," + ",".join(_fmt(x) for x in row) + "\n")
        for i in range(ensemble.n_paths):
            row = ensemble.values[i]
            fh.write(f"path{i}," + ",".join(_fmt(x) for x in row) + "\n")


def read_ensemble_csv(path: str) -> tuple[PathEnsemble, dict[str, str]]:
    """Inverse of write_ensemble_csv; returns the ensemble and its metadata.

    Labeled non-path rows come back in the metadata under "row:<label>"
    as their raw comma-joined text.
    """
    meta: dict[str, str] = {}
    times: np.ndarray | None = None
    rows: list[np.ndarray] = []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(",")
                meta[key] = value
                continue
            label, _, rest = line.partition(",")
            data = np.array(rest.split(","), dtype=float) if rest else np.empty(0)
            if label == "times":
                times = data
            elif label.startswith("path"):
                rows.append(data)
            else:
                meta[f"row:{label}"] = rest
    if times is None:
        raise ParameterError(f"{path} has no times row")
    alpha = float(meta["alpha"]) if meta.get("alpha") else None
    ensemble = PathEnsemble(
        grid=TimeGrid(times),
        values=np.vstack(rows),
        seed=int(meta.get("seed", "0")),
        generator_id=meta.get("generator_id", GENERATOR_ID),
        process=meta.get("process", ""),
        alpha=alpha,
    )
    return ensemble, meta
