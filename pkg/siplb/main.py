# siplb/main.py
"""
Command-line interface.

    python -m siplb.main solve --builtin cex --oracle scripted --max-iter 12 --trace cex.csv
    python -m siplb.main show --instance problem.sip

``solve`` runs the lower bounding procedure and exits with a code that
depends only on the final status:

    0   converged_optimal or infeasible_sip (both are definitive answers)
    2   max_iter_reached
    3   subsolver_failure, or a library/I-O error
    64  usage error

A run is fully determined by its flags; no environment variables are read.
"""

import logging
import re
import sys
from typing import Callable, Dict, List, Optional, Sequence

import click
from pydantic import ValidationError

from siplb.core.exceptions import DimensionMismatchError, SipError
from siplb.core.log import configure_logging
from siplb.io.instance_file import read_instance, to_file_text
from siplb.io.trace import save_trace
from siplb.schemas.config import OptConfig, SipConfig
from siplb.schemas.domain import Discretization, PointVec
from siplb.schemas.instance import AffineMap, SipInstance, builtin_counterexample
from siplb.schemas.results import SipStatus, SolveReport
from siplb.solvers.lower_bounding import run_lower_bounding
from siplb.solvers.oracles import LlpOracle

logger = logging.getLogger(__name__)

BUILTINS: Dict[str, Callable[[], SipInstance]] = {"cex": builtin_counterexample}

EXIT_CODES = {
    SipStatus.CONVERGED_OPTIMAL: 0,
    SipStatus.INFEASIBLE_SIP: 0,
    SipStatus.MAX_ITER_REACHED: 2,
    SipStatus.SUBSOLVER_FAILURE: 3,
}
EXIT_FAILURE = 3
EXIT_USAGE = 64


def exit_code(status: SipStatus) -> int:
    return EXIT_CODES[status]


# ------------------------------------------------------------------------------
# Argument helpers
# ------------------------------------------------------------------------------
def _numbers(text: str, option: str) -> List[float]:
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {text!r}", param_hint=option) from None


def _load_instance(instance: Optional[str], builtin: Optional[str]) -> SipInstance:
    if (instance is None) == (builtin is None):
        raise click.UsageError("Give exactly one of --instance or --builtin")
    if builtin is not None:
        return BUILTINS[builtin]()
    return read_instance(instance)


def _oracle(
    inst: SipInstance,
    kind: str,
    alpha: Optional[float],
    map_text: Optional[str],
) -> LlpOracle:
    if kind == "alpha" and alpha is None:
        raise click.UsageError("--oracle alpha needs --alpha")
    if kind != "alpha" and alpha is not None:
        raise click.UsageError("--alpha only applies to --oracle alpha")
    if kind != "scripted" and map_text is not None:
        raise click.UsageError("--map only applies to --oracle scripted")
    affine_map = None
    if map_text is not None:
        try:
            affine_map = AffineMap.from_flat(_numbers(map_text, "--map"), inst.x_box.dim, inst.y_box.dim)
        except DimensionMismatchError as exc:
            raise click.BadParameter(str(exc), param_hint="--map") from exc
    elif kind == "scripted" and inst.x_box.dim != inst.y_box.dim:
        raise click.UsageError("--oracle scripted needs --map when dim(x) != dim(y)")
    try:
        return LlpOracle.create(kind, alpha=alpha, affine_map=affine_map)
    except ValidationError as exc:
        raise click.BadParameter(exc.errors()[0]["msg"], param_hint="--alpha") from exc


def _initial_points(inst: SipInstance, texts: Sequence[str]) -> Discretization:
    points = []
    for text in texts:
        coords = _numbers(text, "--init-point")
        try:
            point = PointVec(coords=tuple(coords))
        except ValidationError as exc:
            raise click.BadParameter(exc.errors()[0]["msg"], param_hint="--init-point") from exc
        if point.dim != inst.y_box.dim or not inst.y_box.contains(point):
            raise click.BadParameter(f"{text!r} is not a point of Y = {inst.y_box}", param_hint="--init-point")
        points.append(point)
    return Discretization(points=tuple(points))


def _config(
    inst: SipInstance,
    eps_feas: Optional[float],
    eps_obj: Optional[float],
    max_iter: Optional[int],
    init_points: Sequence[str],
) -> SipConfig:
    opt = {} if eps_obj is None else {"eps_obj": eps_obj}
    overrides = {"eps_feas": eps_feas, "max_iter": max_iter}
    try:
        return SipConfig(
            opt=OptConfig(**opt),
            initial_discretization=_initial_points(inst, init_points),
            **{k: v for k, v in overrides.items() if v is not None},
        )
    except ValidationError as exc:
        error = exc.errors()[0]
        field = ".".join(str(p) for p in error["loc"])
        raise click.UsageError(f"Invalid value for {field}: {error['msg']}") from exc


def _print_report(report: SolveReport, quiet: bool) -> None:
    if not quiet:
        for record in report.iterations:
            outcome = record.oracle
            status = outcome.kind if outcome is not None else "lbd_infeasible"
            line = f"k={record.k:<4d} f_lbd={record.f_lbd:<+24.17g} x_bar={record.x_bar} oracle={status}"
            if outcome is not None and not outcome.is_feasible:
                line += f" y={outcome.y} g={outcome.g_value:.6g}"
            click.echo(line)
    click.echo(f"status: {report.status.value}")
    click.echo(f"final lower bound: {report.final_lower_bound:.17g}")
    click.echo(f"iterations: {len(report.iterations)}")
    if report.optimal_point is not None:
        click.echo(f"optimal point: {report.optimal_point}")
    if report.message:
        click.echo(f"message: {report.message}")


# ------------------------------------------------------------------------------
# Commands
# ------------------------------------------------------------------------------
@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Lower bounds for semi-infinite programs by adaptive discretization."""


instance_option = click.option(
    "--instance", type=click.Path(exists=True, dir_okay=False), help="Instance file to load."
)
builtin_option = click.option("--builtin", type=click.Choice(sorted(BUILTINS)), help="Built-in instance.")


@cli.command()
@instance_option
@builtin_option
@click.option(
    "--oracle", "oracle_kind",
    type=click.Choice(["exact", "alpha", "scripted"]), default="exact", show_default=True,
    help="Lower-level oracle.",
)
@click.option("--alpha", type=float, help="Degradation factor in (0, 1) for --oracle alpha.")
@click.option("--map", "map_text", help="Affine script 'A (row-major), b' for --oracle scripted.")
@click.option("--eps-feas", type=float, help="Feasibility tolerance of the oracle certificate.")
@click.option("--eps-obj", type=float, help="Relative optimality tolerance of the subsolvers.")
@click.option("--max-iter", type=int, help="Iteration limit.")
@click.option("--init-point", "init_points", multiple=True, help="Initial discretization point 'v1,v2,...' (repeatable).")
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), help="Write a CSV trace here.")
@click.option("--quiet", is_flag=True, help="Only print the summary.")
@click.option("--verbose", is_flag=True, help="Log every iteration.")
@click.pass_context
def solve(
    ctx: click.Context,
    instance: Optional[str],
    builtin: Optional[str],
    oracle_kind: str,
    alpha: Optional[float],
    map_text: Optional[str],
    eps_feas: Optional[float],
    eps_obj: Optional[float],
    max_iter: Optional[int],
    init_points: Sequence[str],
    trace_path: Optional[str],
    quiet: bool,
    verbose: bool,
):
    """Run the lower bounding procedure on an instance."""
    if quiet and verbose:
        raise click.UsageError("--quiet and --verbose are mutually exclusive")
    configure_logging("ERROR" if quiet else "INFO" if verbose else None)
    try:
        inst = _load_instance(instance, builtin)
        oracle = _oracle(inst, oracle_kind, alpha, map_text)
        cfg = _config(inst, eps_feas, eps_obj, max_iter, init_points)
        logger.info("Solving %s with %r", inst.name, oracle)
        report = run_lower_bounding(inst, oracle, cfg)
        # a summary is only printed for a run whose trace was written
        if trace_path is not None:
            save_trace(report, trace_path)
        _print_report(report, quiet)
    except (SipError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(EXIT_FAILURE)
    ctx.exit(exit_code(report.status))


@cli.command()
@instance_option
@builtin_option
@click.pass_context
def show(ctx: click.Context, instance: Optional[str], builtin: Optional[str]):
    """Print the canonical instance file text."""
    try:
        inst = _load_instance(instance, builtin)
    except (SipError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(EXIT_FAILURE)
    click.echo(to_file_text(inst), nl=False)


# ------------------------------------------------------------------------------
# Entry point
# ------------------------------------------------------------------------------
def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return the process exit code (usage errors map to 64)."""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="siplb", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_FAILURE
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_FAILURE
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
