"""Fractional leaky integrate-and-fire voltage driven by OU synaptic noise.

The subthreshold voltage (no spiking reset here) integrates its drive with a
power-law memory kernel instead of an ordinary integral:

    V(t) = (g_L V_L / C_m) t^a / Gamma(a+1) + (1/C_m) I^a(eta)(t),

where I^a is the fractional integral of order a and eta is the synaptic
current, an Ornstein-Uhlenbeck process relaxing toward the constant input
I0 with time constant tau and noise amplitude varsigma:

    d eta = -(eta - I0)/tau dt + (varsigma/tau) dB.

In the Gauss-Markov parameterization that is rate mu = 1/tau and noise scale
sigma = varsigma/tau, so the voltage fluctuation statistics come directly
from the fractional integrated OU moments: variance fiou_var/C_m^2 for a
deterministic eta(0), fisou_var/C_m^2 for a stationary start. V(0) = 0 is a
standing assumption of those formulas and is enforced on the parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .frac_cov import figm_mean, fiou_var, fisou_var
from .gm_core import OUParams, SOUParams, ou_spec
from .quadrature import FracOrder, QuadratureConfig, as_order
from .simulate import PathEnsemble, TimeGrid, _ou_transition_paths, pathwise_rl_integral

STATIONARY = "stationary"


@dataclass(frozen=True)
class NeuronParams:
    """Membrane and synaptic-noise parameters.

    eta0 is either a float (deterministic initial current) or the string
    "stationary" (initial current drawn from the stationary law, centered
    at i0). v0 exists for interface completeness and must be 0.
    """

    c_m: float
    g_l: float
    v_l: float
    tau: float
    varsigma: float
    i0: float = 0.0
    v0: float = 0.0
    eta0: float | str = STATIONARY

    def __post_init__(self) -> None:
        if not (math.isfinite(self.c_m) and self.c_m > 0.0):
            raise ParameterError(f"c_m must be positive, got {self.c_m}")
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise ParameterError(f"tau must be positive, got {self.tau}")
        if not (math.isfinite(self.varsigma) and self.varsigma > 0.0):
            raise ParameterError(f"varsigma must be positive, got {self.varsigma}")
        if not (math.isfinite(self.g_l) and math.isfinite(self.v_l) and math.isfinite(self.i0)):
            raise ParameterError("g_l, v_l and i0 must be finite")
        if self.v0 != 0.0:
            raise ParameterError(
                "v0 must be 0: the voltage moment formulas assume a voltage "
                "pinned at the origin"
            )
        if isinstance(self.eta0, str):
            if self.eta0 != STATIONARY:
                raise ParameterError(
                    f'eta0 must be a number or "{STATIONARY}", got {self.eta0!r}'
                )
        elif not math.isfinite(self.eta0):
            raise ParameterError(f"eta0 must be finite, got {self.eta0}")

    @property
    def mu(self) -> float:
        return 1.0 / self.tau

    @property
    def sigma(self) -> float:
        return self.varsigma / self.tau

    @property
    def stationary_start(self) -> bool:
        return isinstance(self.eta0, str)


def noise_ou_params(p: NeuronParams) -> OUParams:
    """OU parameters of the synaptic current; a stationary start is mapped
    to its mean i0 (only the mean function uses y)."""
    y = p.i0 if p.stationary_start else float(p.eta0)
    return OUParams(mu=p.mu, sigma=p.sigma, beta=p.i0, y=y)


def noise_sou_params(p: NeuronParams) -> SOUParams:
    """Stationary-OU parameters of the centered current fluctuation."""
    return SOUParams(mu=p.mu, sigma=p.sigma)


def simulate_eta(p: NeuronParams, grid: TimeGrid, n_paths: int, seed: int) -> PathEnsemble:
    """Exact OU transitions of the synaptic current on a grid starting at 0.

    A stationary eta0 draws each path's start from N(i0, varsigma^2/(2 tau))
    inside that path's own substream, keeping ensembles reproducible and
    order-independent.
    """
    if not grid.includes_zero:
        raise DomainError(
            "current paths must start at t = 0 (the voltage integral needs "
            "the origin node)"
        )
    if p.stationary_start:
        start_value = p.i0
        start_std = math.sqrt(p.varsigma**2 / (2.0 * p.tau))
    else:
        start_value = float(p.eta0)
        start_std = 0.0
    values = _ou_transition_paths(
        p.mu, p.sigma, p.i0, grid, n_paths, seed,
        start_value=start_value, start_std=start_std,
    )
    return PathEnsemble(grid=grid, values=values, seed=int(seed), process="eta")


def simulate_voltage(
    p: NeuronParams, eta: PathEnsemble, alpha: float | FracOrder
) -> PathEnsemble:
    """Voltage paths from current paths: deterministic leak drive plus the
    fractional integral of each current path (grid must be uniform from 0)."""
    alpha = as_order(alpha)
    integral = pathwise_rl_integral(eta, alpha)
    a = alpha.alpha
    t = eta.grid.times
    drive = (p.g_l * p.v_l / p.c_m) * t**a / math.gamma(a + 1.0)
    values = drive[None, :] + integral.values / p.c_m
    return PathEnsemble(
        grid=eta.grid,
        values=values,
        seed=eta.seed,
        generator_id=eta.generator_id,
        process="voltage",
        alpha=a,
    )


def voltage_mean(
    p: NeuronParams,
    t: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
) -> float:
    """E[V(t)]: leak drive plus the fractional integral of E[eta].

    For a stationary start E[eta] is the constant i0; for a deterministic
    start it relaxes from eta0 to i0 exponentially.
    """
    alpha = as_order(alpha)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"time must be finite and >= 0, got {t}")
    a = alpha.alpha
    drive = (p.g_l * p.v_l / p.c_m) * t**a / math.gamma(a + 1.0)
    current = figm_mean(ou_spec(noise_ou_params(p)), t, alpha, cfg)
    return drive + current / p.c_m


def voltage_var(
    p: NeuronParams,
    t: float,
    alpha: float | FracOrder,
    cfg: QuadratureConfig | None = None,
    method: str = "auto",
) -> float:
    """Var[V(t)] = Var[I^a(eta)(t)] / C_m^2 (the drive is deterministic)."""
    if p.stationary_start:
        v = fisou_var(noise_sou_params(p), t, alpha, cfg, method)
    else:
        v = fiou_var(OUParams(mu=p.mu, sigma=p.sigma), t, alpha, cfg, method)
    return v / p.c_m**2
