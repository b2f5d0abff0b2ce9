# siplb/io/trace.py
"""
CSV convergence traces.

One header row, then one row per iteration of a SolveReport:

    k, f_lbd, incumbent_value, x1..xn, oracle_status, y1..ym, g_value, g_star_estimate

Numbers are written with 17 significant digits, infinities as ``inf`` /
``-inf``. On a feasible row the y columns are empty and ``g_value`` holds the
certified upper bound on g*(x_bar). On the row of an infeasible lower
bounding problem everything after ``incumbent_value`` is empty.
"""

import csv
import io
import logging
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Union

from siplb.schemas.results import IterationRecord, SolveReport

logger = logging.getLogger(__name__)


def format_number(value: Optional[float]) -> str:
    if value is None:
        return ""
    return "%.17g" % value


def trace_header(x_dim: int, y_dim: int) -> List[str]:
    return (
        ["k", "f_lbd", "incumbent_value"]
        + [f"x{i}" for i in range(1, x_dim + 1)]
        + ["oracle_status"]
        + [f"y{j}" for j in range(1, y_dim + 1)]
        + ["g_value", "g_star_estimate"]
    )


def _row(record: IterationRecord, x_dim: int, y_dim: int) -> List[str]:
    row = [str(record.k), format_number(record.f_lbd), format_number(record.incumbent_value)]
    row += [format_number(c) for c in record.x_bar.coords] if record.x_bar is not None else [""] * x_dim
    outcome = record.oracle
    if outcome is None:
        return row + [""] * (y_dim + 3)
    row.append(outcome.kind)
    if outcome.is_feasible:
        return row + [""] * y_dim + [format_number(outcome.certified_max), ""]
    return (
        row
        + [format_number(c) for c in outcome.y.coords]
        + [format_number(outcome.g_value), format_number(outcome.g_star_estimate)]
    )


def trace_rows(report: SolveReport) -> Iterator[Dict[str, str]]:
    """Trace rows keyed by column name."""
    x_dim, y_dim = report.x_dim, report.y_dim
    header = trace_header(x_dim, y_dim)
    for record in report.iterations:
        yield dict(zip(header, _row(record, x_dim, y_dim)))


def write_trace(report: SolveReport) -> str:
    """Render the report as CSV text (header plus one row per iteration)."""
    x_dim, y_dim = report.x_dim, report.y_dim
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(trace_header(x_dim, y_dim))
    for record in report.iterations:
        writer.writerow(_row(record, x_dim, y_dim))
    return buffer.getvalue()


def save_trace(report: SolveReport, path: Union[str, Path]) -> Path:
    """
    Write the CSV trace to ``path``.

    Raises:
        OSError: If the file cannot be written; the message names the path
    """
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(write_trace(report))
    except OSError as exc:
        raise OSError(exc.errno, f"Cannot write trace to {path}: {exc.strerror}") from exc
    logger.info("Wrote %d trace rows to %s", len(report.iterations), path)
    return path
