"""Command-line interface: fit, test, simulate and eigen-check.

Every command writes a JSON report (stdout or --output) that echoes the
effective configuration and the package version, so any number in a
report can be reproduced from the report alone. Exit codes are stable:
0 success, 2 parse/usage failure, 3 fit failure, 4 kernel or tail-
probability failure, each with a one-line ``error: <stage>: <reason>``
on stderr.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import __version__
from .errors import (
    AllStartsFailed,
    ConvergenceError,
    DomainError,
    EigenSolverFailure,
    NonFiniteHessian,
    QuadratureFailure,
    SingularInformation,
    StudyAborted,
    TooFewObservations,
)
from .estimation import FitConfig, FitResult, fit_mle
from .gof_statistic import cvm_statistic, pit
from .imhof import WeightedChiSquare, imhof_tail
from .kernel_eigen import (
    brownian_bridge_q,
    build_q_matrix,
    eigen_spectrum,
    simple_hypothesis_lambdas,
)
from .mixture_model import MixtureParams, Sample
from .simulation import PopulationSpec, benchmark_populations, run_study

EXIT_PARSE = 2
EXIT_FIT = 3
EXIT_KERNEL = 4

_FIT_ERRORS = (TooFewObservations, AllStartsFailed)
_KERNEL_ERRORS = (
    SingularInformation,
    ConvergenceError,
    EigenSolverFailure,
    NonFiniteHessian,
    QuadratureFailure,
)


class DataFileError(Exception):
    """A data file could not be parsed into positive observations."""


def read_observations(path: str) -> np.ndarray:
    """Read one observation per line; '#' starts a comment.

    A single-column CSV is accepted too: a trailing comma is ignored and
    one non-numeric header line at the top is skipped.
    """
    values = []
    header_allowed = True
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise DataFileError(f"cannot open {path}: {exc.strerror}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = [f for f in line.replace(",", " ").split() if f]
            if len(fields) != 1:
                raise DataFileError(f"line {lineno}: expected a single column, got {line!r}")
            try:
                v = float(fields[0])
            except ValueError:
                if header_allowed:
                    header_allowed = False
                    continue
                raise DataFileError(f"line {lineno}: not a number: {fields[0]!r}") from None
            header_allowed = False
            if not np.isfinite(v) or v <= 0.0:
                raise DataFileError(
                    f"line {lineno}: observations must be positive and finite, got {fields[0]}"
                )
            values.append(v)
    if not values:
        raise DataFileError(f"no observations found in {path}")
    return np.asarray(values)


def _fail(code: int, stage: str, message: str) -> None:
    click.echo(f"error: {stage}: {message}", err=True)
    sys.exit(code)


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _fit_section(fit: FitResult) -> dict:
    theta = fit.theta_hat
    return {
        "alpha1": theta.alpha1,
        "alpha2": theta.alpha2,
        "beta1": theta.beta1,
        "beta2": theta.beta2,
        "p": theta.p,
        "log_likelihood": fit.log_likelihood,
        "converged": fit.converged,
        "n_starts_used": fit.n_starts_used,
        "n_boundary_starts": fit.n_boundary_starts,
        "boundary_proximity": fit.boundary_proximity,
        "local_optima_log_likelihoods": list(fit.best_of_likelihoods),
    }


def _parse_theta(text: str) -> MixtureParams:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 5:
        raise click.UsageError("--theta needs five numbers: alpha1,alpha2,beta1,beta2,p")
    try:
        return MixtureParams(*(float(p) for p in parts))
    except (ValueError, DomainError) as exc:
        raise click.UsageError(f"invalid --theta: {exc}") from exc


seed_option = click.option(
    "--seed",
    type=int,
    default=0,
    show_default=True,
    envvar="WMIXGOF_SEED",
    help="Master seed (env: WMIXGOF_SEED).",
)
output_option = click.option(
    "--output", "-o", type=click.Path(dir_okay=False), default=None, help="Write the JSON report here instead of stdout."
)


def fit_options(f):
    f = click.option("--n-starts", type=int, default=10, show_default=True)(f)
    f = click.option("--tolerance", type=float, default=1e-6, show_default=True)(f)
    f = click.option("--max-iterations", type=int, default=200, show_default=True)(f)
    return f


def kernel_options(f):
    f = click.option("--grid-size", "-m", type=int, default=500, show_default=True)(f)
    f = click.option("--tail-tolerance", type=float, default=1e-4, show_default=True)(f)
    f = click.option(
        "--info-matrix-mode",
        type=click.Choice(["inverse", "literal"]),
        default="inverse",
        show_default=True,
    )(f)
    f = click.option("--imhof-tolerance", type=float, default=1e-6, show_default=True)(f)
    return f


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="JSON file with per-command option defaults; flags override it.",
)
@click.pass_context
def main(ctx, config_path):
    """Goodness-of-fit testing for two-component Weibull mixtures."""
    if config_path:
        with open(config_path, "r", encoding="utf-8") as fh:
            ctx.default_map = json.load(fh)


@main.command("fit")
@click.option("--input", "-i", "input_path", required=True, type=click.Path())
@output_option
@seed_option
@fit_options
def cmd_fit(input_path, output, seed, n_starts, tolerance, max_iterations):
    """Fit the mixture by maximum likelihood and report the parameters."""
    try:
        data = read_observations(input_path)
    except DataFileError as exc:
        _fail(EXIT_PARSE, "parse", str(exc))
    sample = Sample(data, label=input_path)
    config = FitConfig(
        n_starts=n_starts, tolerance=tolerance, max_iterations=max_iterations, seed=seed
    )
    try:
        fit = fit_mle(sample, config)
    except _FIT_ERRORS as exc:
        _fail(EXIT_FIT, "fit", str(exc))
    report = {
        "command": "fit",
        "version": __version__,
        "config": {
            "input": input_path,
            "seed": seed,
            "n_starts": n_starts,
            "tolerance": tolerance,
            "max_iterations": max_iterations,
        },
        "input": {"path": input_path, "n": sample.n},
        "fit": _fit_section(fit),
    }
    _emit(report, output)


@main.command("test")
@click.option("--input", "-i", "input_path", required=True, type=click.Path())
@output_option
@seed_option
@fit_options
@kernel_options
def cmd_test(
    input_path,
    output,
    seed,
    n_starts,
    tolerance,
    max_iterations,
    grid_size,
    tail_tolerance,
    info_matrix_mode,
    imhof_tolerance,
):
    """Run the full goodness-of-fit test on a data file.

    Fits the mixture, transforms the sample through the fitted CDF,
    computes the Cramer-von Mises statistic, estimates the covariance
    kernel eigenvalues and converts the statistic to an approximate
    p-value.
    """
    try:
        data = read_observations(input_path)
    except DataFileError as exc:
        _fail(EXIT_PARSE, "parse", str(exc))
    sample = Sample(data, label=input_path)
    config = FitConfig(
        n_starts=n_starts, tolerance=tolerance, max_iterations=max_iterations, seed=seed
    )
    try:
        fit = fit_mle(sample, config)
    except _FIT_ERRORS as exc:
        _fail(EXIT_FIT, "fit", str(exc))
    w2 = cvm_statistic(pit(sample, fit.theta_hat))
    try:
        q = build_q_matrix(
            fit.theta_hat, fit.hessian, sample.n, grid_size, info_matrix_mode=info_matrix_mode
        )
        spectrum = eigen_spectrum(q, tail_tolerance)
        p_value = imhof_tail(WeightedChiSquare(spectrum.retained), w2, imhof_tolerance)
    except _KERNEL_ERRORS as exc:
        _fail(EXIT_KERNEL, "kernel", str(exc))
    report = {
        "command": "test",
        "version": __version__,
        "config": {
            "input": input_path,
            "seed": seed,
            "n_starts": n_starts,
            "tolerance": tolerance,
            "max_iterations": max_iterations,
            "grid_size": grid_size,
            "tail_tolerance": tail_tolerance,
            "info_matrix_mode": info_matrix_mode,
            "imhof_tolerance": imhof_tolerance,
        },
        "input": {"path": input_path, "n": sample.n},
        "fit": _fit_section(fit),
        "statistic": {"w2": w2},
        "eigenvalues": {
            "n_retained": spectrum.n_retained,
            "trace_captured": spectrum.trace_captured,
            "n_negative": spectrum.n_negative,
            "min_eigenvalue": spectrum.min_eigenvalue,
            "retained": [float(v) for v in spectrum.retained],
        },
        "p_value": p_value,
        "diagnostics": {"quantile_inversion_failures": 0},
    }
    _emit(report, output)


@main.command("simulate")
@output_option
@seed_option
@fit_options
@click.option("--grid-size", "-m", type=int, default=200, show_default=True)
@click.option("--tail-tolerance", type=float, default=1e-4, show_default=True)
@click.option(
    "--info-matrix-mode",
    type=click.Choice(["inverse", "literal"]),
    default="inverse",
    show_default=True,
)
@click.option("--imhof-tolerance", type=float, default=1e-6, show_default=True)
@click.option("--n-reps", type=int, default=500, show_default=True)
@click.option("--sample-size", type=int, default=100, show_default=True)
@click.option(
    "--population",
    type=click.IntRange(1, 5),
    default=None,
    help="Benchmark population index (1..5).",
)
@click.option("--theta", "theta_text", default=None, help="Explicit alpha1,alpha2,beta1,beta2,p.")
def cmd_simulate(
    output,
    seed,
    n_starts,
    tolerance,
    max_iterations,
    grid_size,
    tail_tolerance,
    info_matrix_mode,
    imhof_tolerance,
    n_reps,
    sample_size,
    population,
    theta_text,
):
    """Monte Carlo uniformity study of the approximate p-values."""
    if population is None and theta_text is None:
        raise click.UsageError("provide --population or --theta")
    if theta_text is not None:
        spec = PopulationSpec(theta=_parse_theta(theta_text), label="custom")
    else:
        spec = benchmark_populations()[population - 1]
    config = FitConfig(
        n_starts=n_starts, tolerance=tolerance, max_iterations=max_iterations, seed=seed
    )
    try:
        result = run_study(
            spec,
            n_reps,
            sample_size,
            seed,
            grid_size=grid_size,
            fit_config=config,
            tail_tolerance=tail_tolerance,
            imhof_tolerance=imhof_tolerance,
            info_matrix_mode=info_matrix_mode,
        )
    except StudyAborted as exc:
        _fail(EXIT_FIT, "simulate", str(exc))
    except DomainError as exc:
        raise click.UsageError(str(exc)) from exc
    theta = spec.theta
    report = {
        "command": "simulate",
        "version": __version__,
        "config": {
            "seed": seed,
            "n_starts": n_starts,
            "tolerance": tolerance,
            "max_iterations": max_iterations,
            "grid_size": grid_size,
            "tail_tolerance": tail_tolerance,
            "info_matrix_mode": info_matrix_mode,
            "imhof_tolerance": imhof_tolerance,
            "n_reps": n_reps,
            "sample_size": sample_size,
            "population": population,
            "theta": theta_text,
        },
        "population": {
            "label": spec.label,
            "alpha1": theta.alpha1,
            "alpha2": theta.alpha2,
            "beta1": theta.beta1,
            "beta2": theta.beta2,
            "p": theta.p,
        },
        "n_reps": result.n_reps,
        "sample_size": result.sample_size,
        "grid_size": result.grid_size,
        "n_failed_fits": result.n_failed_fits,
        "ad_statistic": result.ad_statistic,
        "ad_p_value": result.ad_p_value,
        "p_values": [float(v) for v in result.p_values],
    }
    _emit(report, output)


@main.command("eigen-check")
@output_option
@click.option("--grid-size", "-m", type=int, default=500, show_default=True)
def cmd_eigen_check(output, grid_size):
    """Compare discretized Brownian bridge eigenvalues to 1/(pi*j)**2."""
    spectrum = eigen_spectrum(brownian_bridge_q(grid_size), tail_tolerance=0.0)
    exact = simple_hypothesis_lambdas(10)
    rows = []
    for j in range(10):
        estimate = float(spectrum.lambdas[j])
        rows.append(
            {
                "j": j + 1,
                "estimate": estimate,
                "exact": float(exact[j]),
                "relative_error": abs(estimate - exact[j]) / exact[j],
            }
        )
    report = {
        "command": "eigen-check",
        "version": __version__,
        "config": {"grid_size": grid_size},
        "rows": rows,
    }
    _emit(report, output)


if __name__ == "__main__":
    main()
