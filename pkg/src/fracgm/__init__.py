"""Fractional Riemann-Liouville integrals of Gauss-Markov processes.

Exact and quadrature-based means, variances and covariances of the
fractional integral of Brownian motion and Ornstein-Uhlenbeck processes,
Cholesky path simulation with Monte-Carlo cross-validation, and a
fractional leaky integrate-and-fire neuron built on top.
"""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    FracGMError,
    NotPSDError,
    NumericError,
    ParameterError,
    ResolutionError,
    UnsupportedSpecError,
)
from .frac_cov import (
    caputo_derivative,
    fibm_cov,
    fibm_var,
    figm_cov,
    figm_mean,
    figm_var,
    fiou_cov,
    fiou_var,
    fisou_cov,
    fisou_start_term,
    fisou_var,
    iou_cov,
    iou_var,
    isou_cov,
    isou_var,
)
from .gm_core import (
    GaussMarkovSpec,
    OUParams,
    SOUParams,
    bm_spec,
    kernel,
    ou_spec,
    sou_spec,
)
from .neuro import (
    NeuronParams,
    noise_ou_params,
    noise_sou_params,
    simulate_eta,
    simulate_voltage,
    voltage_mean,
    voltage_var,
)
from .quadrature import (
    ALPHA_MIN,
    FracOrder,
    InnerBound,
    QuadratureConfig,
    compute_H,
    compute_J,
    nested_singular_integral,
    panel_doubling_error,
    reciprocal_gamma,
    singular_left_integral,
)
from .simulate import (
    CovMatrix,
    PathEnsemble,
    TimeGrid,
    build_cov_matrix,
    cholesky_factor,
    gaussian_ks_statistic,
    ks_critical_value,
    mc_cov_estimate,
    pathwise_rl_integral,
    read_ensemble_csv,
    rl_weight_matrix,
    sample_bm_paths,
    sample_ou_paths,
    sample_paths,
    sample_sou_paths,
    write_ensemble_csv,
)

__all__ = [
    "__version__",
    "ALPHA_MIN",
    "CovMatrix",
    "DomainError",
    "FracGMError",
    "FracOrder",
    "GaussMarkovSpec",
    "InnerBound",
    "NeuronParams",
    "NotPSDError",
    "NumericError",
    "OUParams",
    "ParameterError",
    "PathEnsemble",
    "QuadratureConfig",
    "ResolutionError",
    "SOUParams",
    "TimeGrid",
    "UnsupportedSpecError",
    "bm_spec",
    "build_cov_matrix",
    "caputo_derivative",
    "cholesky_factor",
    "compute_H",
    "compute_J",
    "fibm_cov",
    "fibm_var",
    "figm_cov",
    "figm_mean",
    "figm_var",
    "fiou_cov",
    "fiou_var",
    "fisou_cov",
    "fisou_start_term",
    "fisou_var",
    "gaussian_ks_statistic",
    "iou_cov",
    "iou_var",
    "isou_cov",
    "isou_var",
    "kernel",
    "ks_critical_value",
    "mc_cov_estimate",
    "nested_singular_integral",
    "noise_ou_params",
    "noise_sou_params",
    "ou_spec",
    "panel_doubling_error",
    "pathwise_rl_integral",
    "read_ensemble_csv",
    "reciprocal_gamma",
    "rl_weight_matrix",
    "sample_bm_paths",
    "sample_ou_paths",
    "sample_paths",
    "sample_sou_paths",
    "simulate_eta",
    "simulate_voltage",
    "singular_left_integral",
    "sou_spec",
    "voltage_mean",
    "voltage_var",
    "write_ensemble_csv",
]
