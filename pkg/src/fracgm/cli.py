"""Command line front end.

Five subcommands: var-curve and cov-table tabulate analytic moments,
simulate draws path ensembles (Cholesky or pathwise product integration),
validate runs the built-in check suites, neuro produces voltage ensembles
for the leaky integrate-and-fire model with OU synaptic noise.

Every CSV starts with a '#'-prefixed key,value preamble recording the
resolved command line, version, seed and parameters, so a file can be
regenerated exactly. Values are written with 17 significant digits.

Defaults can live in a TOML file passed as `fracgm --config conf.toml ...`;
explicit flags win over the file, the file wins over built-in defaults.
Section names match subcommands, keys match flag names:

    [var-curve]
    process = "fibm"
    alpha = [0.2, 0.8]

Exit codes: 0 success, 2 bad usage, 3 numerical failure, 4 validation
suite failed.
"""

from __future__ import annotations

import functools
import sys

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

import click
import numpy as np
from click.core import ParameterSource

from . import __version__
from . import frac_cov as fc
from . import neuro as nr
from . import simulate as sim
from .errors import FracGMError, NumericError
from .gm_core import OUParams, SOUParams, kernel, ou_spec, sou_spec
from .quadrature import ALPHA_ACCURACY_FLOOR, DEFAULT_CONFIG, as_order
from .validation import DEFAULT_SEED, run_suite

EXIT_NUMERIC = 3
EXIT_VALIDATION = 4

FRACTIONAL = ("fibm", "fiou", "fisou")
PLAIN = ("iou", "isou", "ou", "sou")
PROCESSES = FRACTIONAL + PLAIN

OU_FAMILY = ("fiou", "fisou", "iou", "isou", "ou", "sou")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


class _ConfigCommand(click.Command):
    """Back-fills parameters from the config file before invoking."""

    @staticmethod
    def _config_key(param: click.Parameter) -> str:
        # config keys mirror flag names: --t-max -> "t-max", --alpha -> "alpha"
        for opt in param.opts:
            if opt.startswith("--"):
                return opt[2:]
        return (param.name or "").replace("_", "-")

    def invoke(self, ctx: click.Context):
        cfg = (ctx.obj or {}).get(self.name, {})
        if isinstance(cfg, dict):
            for param in self.params:
                key = self._config_key(param)
                if key not in cfg:
                    continue
                if ctx.get_parameter_source(param.name) is ParameterSource.COMMANDLINE:
                    continue
                value = cfg[key]
                if getattr(param, "multiple", False) and not isinstance(value, (list, tuple)):
                    value = [value]
                ctx.params[param.name] = param.type_cast_value(ctx, value)
        return super().invoke(ctx)


def _handle_errors(fn):
    # Bad values reach here as library exceptions; map them onto exit codes.
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NumericError as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(EXIT_NUMERIC)
        except FracGMError as exc:
            raise click.UsageError(str(exc)) from exc

    return wrapper


def _require(value, flag: str):
    if value is None or (isinstance(value, tuple) and not value):
        raise click.UsageError(f"missing {flag} (flag or config file)")
    return value


def _check_alphas(process: str, alphas: tuple[float, ...]) -> list[float]:
    if process in PLAIN:
        if alphas:
            raise click.UsageError(f"--alpha does not apply to process {process!r}")
        return []
    if not alphas:
        raise click.UsageError(f"process {process!r} needs at least one --alpha")
    return [as_order(a).alpha for a in alphas]


def _accuracy_warning(process: str, alphas) -> str | None:
    low = [a for a in alphas if a < ALPHA_ACCURACY_FLOOR]
    if process in ("fiou", "fisou") and low:
        lows = " ".join(f"{a:g}" for a in low)
        return (f"reduced accuracy: nested quadrature below "
                f"alpha={ALPHA_ACCURACY_FLOOR:g} (alpha {lows})")
    return None


def _base_meta(command: str, process: str, mu: float, sigma: float) -> dict[str, str]:
    meta = {
        "format": "fracgm-table-v1",
        "version": __version__,
        "command": command,
        "process": process,
    }
    if process in OU_FAMILY:
        meta["mu"] = _fmt(mu)
        meta["sigma"] = _fmt(sigma)
    cfg = DEFAULT_CONFIG
    meta["quadrature"] = (f"gauss-legendre nodes={cfg.nodes_per_panel} "
                          f"panels={cfg.panels} rel_tol={cfg.rel_tol:g}")
    return meta


def _write_table(path: str, meta: dict[str, str], header: list[str],
                 rows) -> None:
    with open(path, "w", newline="") as fh:
        for key, value in meta.items():
            fh.write(f"# {key},{value}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(float(x)) for x in row) + "\n")


def _time_points(t_min: float, t_max: float, t_count: int) -> np.ndarray:
    if t_min < 0 or not t_max > t_min or t_count < 2:
        raise click.UsageError("need 0 <= t-min < t-max and t-count >= 2")
    return np.linspace(t_min, t_max, t_count)


def _var_fn(process: str, mu: float, sigma: float):
    """(t, alpha) -> variance; alpha ignored for the plain processes."""
    p = OUParams(mu=mu, sigma=sigma)
    sp = SOUParams(mu=mu, sigma=sigma)
    if process == "fibm":
        return lambda t, a: fc.fibm_var(t, a)
    if process == "fiou":
        return lambda t, a: 0.0 if t == 0 else fc.fiou_var(p, t, a)
    if process == "fisou":
        return lambda t, a: 0.0 if t == 0 else fc.fisou_var(sp, t, a)
    if process == "iou":
        return lambda t, a: fc.iou_var(p, t)
    if process == "isou":
        return lambda t, a: fc.isou_var(sp, t)
    if process == "ou":
        spec = ou_spec(p)
        return lambda t, a: kernel(spec, t, t)
    spec = sou_spec(sp)
    return lambda t, a: kernel(spec, t, t)


def _cov_fn(process: str, mu: float, sigma: float):
    """(u, t, alpha) -> covariance; alpha ignored for the plain processes."""
    p = OUParams(mu=mu, sigma=sigma)
    sp = SOUParams(mu=mu, sigma=sigma)
    if process == "fibm":
        return lambda u, t, a: fc.fibm_cov(u, t, a)
    if process == "fiou":
        return lambda u, t, a: 0.0 if min(u, t) == 0 else fc.fiou_cov(p, u, t, a)
    if process == "fisou":
        return lambda u, t, a: 0.0 if min(u, t) == 0 else fc.fisou_cov(sp, u, t, a)
    if process == "iou":
        return lambda u, t, a: fc.iou_cov(p, u, t)
    if process == "isou":
        return lambda u, t, a: fc.isou_cov(sp, u, t)
    if process == "ou":
        spec = ou_spec(p)
        return lambda u, t, a: kernel(spec, u, t)
    spec = sou_spec(sp)
    return lambda u, t, a: kernel(spec, u, t)


@click.group()
@click.version_option(__version__, prog_name="fracgm")
@click.option("--config", "config_path",
              type=click.Path(exists=True, dir_okay=False),
              default=None, help="TOML file with per-subcommand defaults.")
@click.pass_context
def main(ctx: click.Context, config_path: str | None) -> None:
    """Moments and simulation of fractionally integrated Gauss-Markov
    processes."""
    ctx.obj = {}
    if config_path:
        with open(config_path, "rb") as fh:
            try:
                ctx.obj = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise click.UsageError(f"bad config file: {exc}") from exc


@main.command("var-curve", cls=_ConfigCommand)
@click.option("--process", type=click.Choice(PROCESSES), default=None,
              help="Which integrated process to tabulate.")
@click.option("--alpha", "alphas", type=float, multiple=True,
              help="Integration order in [0.01, 1]; repeat for several curves.")
@click.option("--t-min", type=float, default=0.0, show_default=True)
@click.option("--t-max", type=float, default=5.0, show_default=True)
@click.option("--t-count", type=int, default=50, show_default=True)
@click.option("--mu", type=float, default=1.0, show_default=True,
              help="OU relaxation rate.")
@click.option("--sigma", type=float, default=1.0, show_default=True,
              help="OU noise amplitude.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              default=None, help="Output CSV path.")
@click.pass_context
@_handle_errors
def var_curve(ctx, process, alphas, t_min, t_max, t_count, mu, sigma, out_path):
    """Variance against time, one column per order."""
    process = _require(process, "--process")
    out_path = _require(out_path, "--out")
    alphas = _check_alphas(process, alphas)
    times = _time_points(t_min, t_max, t_count)
    var = _var_fn(process, mu, sigma)

    if alphas:
        header = ["t"] + [f"var_alpha{a:g}" for a in alphas]
        cols = [[var(float(t), a) for t in times] for a in alphas]
    else:
        header = ["t", "var"]
        cols = [[var(float(t), 1.0) for t in times]]
    rows = np.column_stack([times] + [np.asarray(c) for c in cols])

    cmd = (f"fracgm var-curve --process {process}"
           + "".join(f" --alpha {a:g}" for a in alphas)
           + f" --t-min {t_min:g} --t-max {t_max:g} --t-count {t_count}"
           + f" --mu {mu:g} --sigma {sigma:g} --out {out_path}")
    meta = _base_meta(cmd, process, mu, sigma)
    if alphas:
        meta["alpha"] = " ".join(f"{a:g}" for a in alphas)
    warning = _accuracy_warning(process, alphas)
    if warning:
        meta["warnings"] = warning
    _write_table(out_path, meta, header, rows)
    click.echo(f"wrote {out_path}")


@main.command("cov-table", cls=_ConfigCommand)
@click.option("--process", type=click.Choice(PROCESSES), default=None)
@click.option("--alpha", type=float, default=None,
              help="Integration order in [0.01, 1].")
@click.option("--u", "u_fixed", type=float, default=None,
              help="Tabulate cov(u, t) along t for this fixed u.")
@click.option("--full-grid", is_flag=True, default=False,
              help="Tabulate the whole (u, t) matrix instead of a slice.")
@click.option("--t-min", type=float, default=0.1, show_default=True)
@click.option("--t-max", type=float, default=5.0, show_default=True)
@click.option("--t-count", type=int, default=25, show_default=True)
@click.option("--mu", type=float, default=1.0, show_default=True)
@click.option("--sigma", type=float, default=1.0, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@_handle_errors
def cov_table(ctx, process, alpha, u_fixed, full_grid, t_min, t_max, t_count,
              mu, sigma, out_path):
    """Covariance values: a fixed-u slice or the full symmetric grid."""
    process = _require(process, "--process")
    out_path = _require(out_path, "--out")
    alphas = _check_alphas(process, () if alpha is None else (alpha,))
    a = alphas[0] if alphas else 1.0
    if (u_fixed is None) == (not full_grid):
        raise click.UsageError("give exactly one of --u or --full-grid")
    times = _time_points(t_min, t_max, t_count)
    cov = _cov_fn(process, mu, sigma)

    cmd = (f"fracgm cov-table --process {process}"
           + (f" --alpha {a:g}" if alphas else "")
           + (f" --u {u_fixed:g}" if u_fixed is not None else " --full-grid")
           + f" --t-min {t_min:g} --t-max {t_max:g} --t-count {t_count}"
           + f" --mu {mu:g} --sigma {sigma:g} --out {out_path}")
    meta = _base_meta(cmd, process, mu, sigma)
    if alphas:
        meta["alpha"] = f"{a:g}"
    warning = _accuracy_warning(process, alphas)
    if warning:
        meta["warnings"] = warning

    if u_fixed is not None:
        if u_fixed < 0:
            raise click.UsageError("--u must be >= 0")
        meta["u"] = _fmt(u_fixed)
        rows = [(t, cov(float(u_fixed), float(t), a)) for t in times]
        _write_table(out_path, meta, ["t", "cov"], rows)
    else:
        n = len(times)
        mat = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                mat[i, j] = cov(float(times[i]), float(times[j]), a)
                mat[j, i] = mat[i, j]
        header = ["u"] + [_fmt(float(t)) for t in times]
        rows = [[times[i], *mat[i]] for i in range(n)]
        _write_table(out_path, meta, header, rows)
    click.echo(f"wrote {out_path}")


def _suffixed(path: str, alpha: float) -> str:
    stem, dot, ext = path.rpartition(".")
    if not dot:
        return f"{path}-alpha{alpha:g}"
    return f"{stem}-alpha{alpha:g}.{ext}"


def _ensemble_grid(t_max: float, h: float, include_zero: bool) -> sim.TimeGrid:
    if h <= 0 or t_max <= 0:
        raise click.UsageError("need positive --h and --t-max")
    n = round(t_max / h)
    if n < 1 or abs(n * h - t_max) > 1e-9 * max(1.0, t_max):
        raise click.UsageError("--t-max must be a positive multiple of --h")
    return sim.TimeGrid.regular(h, n, include_zero=include_zero)


@main.command("simulate", cls=_ConfigCommand)
@click.option("--process", type=click.Choice(FRACTIONAL), default=None)
@click.option("--alpha", "alphas", type=float, multiple=True,
              help="Orders to simulate; repeat for several ensembles.")
@click.option("--t-max", type=float, default=2.0, show_default=True)
@click.option("--h", type=float, default=0.01, show_default=True,
              help="Grid step.")
@click.option("--n-paths", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--method", type=click.Choice(("cholesky", "pathwise")),
              default="cholesky", show_default=True)
@click.option("--shared-z", is_flag=True, default=False,
              help="Reuse one Gaussian ensemble across the alpha list so "
                   "trajectories are comparable order by order.")
@click.option("--mu", type=float, default=1.0, show_default=True)
@click.option("--sigma", type=float, default=1.0, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@_handle_errors
def simulate_cmd(ctx, process, alphas, t_max, h, n_paths, seed, method,
                 shared_z, mu, sigma, out_path):
    """Draw a path ensemble per order and write one CSV per ensemble."""
    process = _require(process, "--process")
    out_path = _require(out_path, "--out")
    alphas = _check_alphas(process, alphas)
    if n_paths < 2:
        raise click.UsageError("--n-paths must be >= 2")

    p = OUParams(mu=mu, sigma=sigma)
    sp = SOUParams(mu=mu, sigma=sigma)
    cov = _cov_fn(process, mu, sigma)
    base_sampler = {
        "fibm": sim.sample_bm_paths,
        "fiou": lambda g, n, s: sim.sample_ou_paths(p, g, n, s),
        "fisou": lambda g, n, s: sim.sample_sou_paths(sp, g, n, s),
    }[process]

    written = []
    for k, a in enumerate(alphas):
        run_seed = seed if shared_z else seed + k
        if method == "cholesky":
            grid = _ensemble_grid(t_max, h, include_zero=False)
            matrix = sim.build_cov_matrix(
                lambda u, t: cov(u, t, a), grid,
                source=f"{process} alpha={a:g}")
            factor = sim.cholesky_factor(matrix)
            ens = sim.sample_paths(factor, grid, n_paths, run_seed,
                                   process=process, alpha=a)
            method_meta = {"jitter": _fmt(factor.jitter)}
        else:
            fine = _ensemble_grid(t_max, h, include_zero=True)
            base = base_sampler(fine, n_paths, run_seed)
            ens = sim.pathwise_rl_integral(base, a)
            method_meta = {"base_process": base.process}

        cmd = (f"fracgm simulate --process {process} --alpha {a:g}"
               + f" --t-max {t_max:g} --h {h:g} --n-paths {n_paths}"
               + f" --seed {seed} --method {method}"
               + (" --shared-z" if shared_z else "")
               + f" --mu {mu:g} --sigma {sigma:g} --out {out_path}")
        meta = {"command": cmd, "method": method,
                "shared_z": str(shared_z).lower(),
                "requested_process": process, **method_meta}
        if process in OU_FAMILY:
            meta["mu"] = _fmt(mu)
            meta["sigma"] = _fmt(sigma)
        warning = _accuracy_warning(process, [a])
        if warning:
            meta["warnings"] = warning
        target = out_path if len(alphas) == 1 else _suffixed(out_path, a)
        sim.write_ensemble_csv(ens, target, extra_metadata=meta)
        written.append(target)
    for target in written:
        click.echo(f"wrote {target}")


@main.command("validate", cls=_ConfigCommand)
@click.option("--suite", type=click.Choice(("limits", "crossing", "mc", "neuro")),
              default=None)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.pass_context
@_handle_errors
def validate(ctx, suite, seed):
    """Run a self-check suite; exit 0 only if every check passes."""
    suite = _require(suite, "--suite")
    results = run_suite(suite, seed)
    click.echo(f"# command,fracgm validate --suite {suite} --seed {seed}")
    click.echo(f"# version,{__version__}")
    click.echo("suite,check,passed,value,limit,detail")
    for r in results:
        click.echo(f"{r.suite},{r.name},{str(r.passed).lower()},"
                   f"{_fmt(r.value)},{_fmt(r.limit)},{r.detail}")
    failed = [r for r in results if not r.passed]
    click.echo(f"# {len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        sys.exit(EXIT_VALIDATION)


_NEURON_KEYS = ("c_m", "g_l", "v_l", "tau", "varsigma", "i0", "v0", "eta0")


def _load_neuron_params(path: str) -> nr.NeuronParams:
    with open(path, "rb") as fh:
        try:
            raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise click.UsageError(f"bad params file: {exc}") from exc
    unknown = sorted(set(raw) - set(_NEURON_KEYS))
    if unknown:
        raise click.UsageError(f"unknown neuron parameters: {' '.join(unknown)}")
    try:
        return nr.NeuronParams(**raw)
    except TypeError as exc:
        raise click.UsageError(str(exc)) from exc


@main.command("neuro", cls=_ConfigCommand)
@click.option("--params-file", type=click.Path(exists=True, dir_okay=False),
              default=None, help="TOML file with the neuron parameters.")
@click.option("--alpha", type=float, default=None,
              help="Order of the memory kernel, in [0.01, 1].")
@click.option("--t-max", type=float, default=2.0, show_default=True)
@click.option("--h", type=float, default=0.01, show_default=True)
@click.option("--n-paths", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@_handle_errors
def neuro_cmd(ctx, params_file, alpha, t_max, h, n_paths, seed, out_path):
    """Membrane-voltage ensemble with the analytic mean alongside."""
    params_file = _require(params_file, "--params-file")
    alpha = as_order(_require(alpha, "--alpha")).alpha
    out_path = _require(out_path, "--out")
    if n_paths < 2:
        raise click.UsageError("--n-paths must be >= 2")
    p = _load_neuron_params(params_file)

    grid = _ensemble_grid(t_max, h, include_zero=True)
    eta = nr.simulate_eta(p, grid, n_paths, seed)
    voltage = nr.simulate_voltage(p, eta, alpha)
    analytic = np.array([nr.voltage_mean(p, float(t), alpha)
                         for t in grid.times])

    cmd = (f"fracgm neuro --params-file {params_file} --alpha {alpha:g}"
           + f" --t-max {t_max:g} --h {h:g} --n-paths {n_paths}"
           + f" --seed {seed} --out {out_path}")
    meta = {"command": cmd,
            "c_m": _fmt(p.c_m), "g_l": _fmt(p.g_l), "v_l": _fmt(p.v_l),
            "tau": _fmt(p.tau), "varsigma": _fmt(p.varsigma),
            "i0": _fmt(p.i0), "v0": _fmt(p.v0),
            "eta0": p.eta0 if isinstance(p.eta0, str) else _fmt(p.eta0)}
    if alpha < ALPHA_ACCURACY_FLOOR:
        meta["warnings"] = (f"reduced accuracy: nested quadrature below "
                            f"alpha={ALPHA_ACCURACY_FLOOR:g} (alpha {alpha:g})")
    sim.write_ensemble_csv(voltage, out_path, extra_metadata=meta,
                           extra_rows={"analytic_mean": analytic})
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
