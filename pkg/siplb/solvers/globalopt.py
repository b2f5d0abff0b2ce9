# siplb/solvers/globalopt.py
"""
Deterministic global minimization over a box by interval branch-and-bound.

The same engine solves the lower bounding problems (variables x, finitely many
constraints) and the lower-level programs (variables y, no constraints,
through ``maximize``). ``grid_min`` is an independent brute-force reference
used to cross-check it.

Node processing is best-first on the node's objective lower bound, FIFO on
ties, so two runs on identical inputs are bit-identical.
"""

import heapq
import itertools
import logging
import math
from typing import Callable, List, Literal, Optional, Sequence, Tuple

import numpy as np

from siplb.core.config import get_settings
from siplb.core.exceptions import (
    EvaluationError,
    GridSizeError,
    IntervalDivisionByZeroError,
    SubsolverError,
)
from siplb.models.expression import Expression, Neg
from siplb.operations import Bounds, affine
from siplb.schemas.config import OptConfig
from siplb.schemas.domain import BoxRegion, PointVec, split_bounds
from siplb.schemas.results import CertifiedMin, MinStatus

logger = logging.getLogger(__name__)

VariableFamily = Literal["x", "y"]
BoxBounds = Tuple[Bounds, ...]
# indices of the constraints not yet proven satisfied on a node
Active = Tuple[int, ...]

GRID_CHUNK = 1_000_000


def _binder(variables: VariableFamily) -> Callable[[Sequence], Tuple[Sequence, Sequence]]:
    if variables == "x":
        return lambda values: (values, ())
    if variables == "y":
        return lambda values: ((), values)
    raise ValueError(f"variables must be 'x' or 'y', got {variables!r}")


class _BranchAndBound:
    """State of a single minimize call."""

    def __init__(
        self,
        objective: Expression,
        constraints: Sequence[Expression],
        cfg: OptConfig,
        variables: VariableFamily,
    ):
        self.objective = objective
        self.constraints = list(constraints)
        self.cfg = cfg
        self.bind = _binder(variables)
        self.incumbent: Optional[Tuple[float, ...]] = None
        self.incumbent_value = math.inf

    def tolerance(self) -> float:
        return self.cfg.eps_obj * max(1.0, abs(self.incumbent_value))

    def can_prune(self, lb: float) -> bool:
        return self.incumbent is not None and lb >= self.incumbent_value - self.tolerance()

    @staticmethod
    def tighten(e: Expression, forms, lo: float, hi: float) -> Bounds:
        """Intersect a natural enclosure with the affine-form enclosure of ``e``."""
        try:
            form_lo, form_hi = e.enclose_affine(*forms).range()
        except IntervalDivisionByZeroError:
            return lo, hi
        if math.isnan(lo) or form_lo > lo:
            lo = form_lo
        if math.isnan(hi) or form_hi < hi:
            hi = form_hi
        return lo, hi

    def node_bound(self, bounds: BoxBounds, active: Active) -> Optional[Tuple[float, Active]]:
        """
        Objective lower bound over the box and the constraints that are not
        yet satisfied everywhere on it; None if some constraint is infeasible
        on the whole box.
        """
        args = self.bind(bounds)
        forms = self.bind(affine.box_forms(bounds))
        still_active = []
        for i in active:
            c = self.constraints[i]
            try:
                lo, hi = c.enclose(*args)
            except IntervalDivisionByZeroError:
                still_active.append(i)
                continue
            if lo <= self.cfg.eps_feas and hi > 0.0:
                lo, hi = self.tighten(c, forms, lo, hi)
            if lo > self.cfg.eps_feas:
                return None
            if hi > 0.0:
                still_active.append(i)
        try:
            lb, hi = self.objective.enclose(*args)
        except IntervalDivisionByZeroError:
            return -math.inf, tuple(still_active)
        lb, _ = self.tighten(self.objective, forms, lb, hi)
        return (-math.inf if math.isnan(lb) else lb), tuple(still_active)

    def point_value(self, point: Tuple[float, ...], active: Active) -> Optional[float]:
        """Objective at an eps_feas-feasible point, None otherwise."""
        args = self.bind(point)
        try:
            for i in active:
                if not self.constraints[i].evaluate(*args) <= self.cfg.eps_feas:
                    return None
            value = float(self.objective.evaluate(*args))
        except (EvaluationError, ZeroDivisionError, OverflowError):
            return None
        return value if math.isfinite(value) else None

    def improve_incumbent(self, bounds: BoxBounds, active: Active) -> None:
        candidates = [tuple(0.5 * (lo + hi) for lo, hi in bounds)]
        candidates.extend(itertools.product(*bounds))
        for point in candidates:
            value = self.point_value(point, active)
            if value is not None and value < self.incumbent_value:
                self.incumbent, self.incumbent_value = tuple(point), value

    def run(self, root: BoxBounds) -> CertifiedMin:
        cfg = self.cfg
        counter = itertools.count()
        pruned_min = math.inf
        nodes = 0

        root_node = self.node_bound(root, tuple(range(len(self.constraints))))
        if root_node is None:
            return CertifiedMin(lower_bound=math.inf, status=MinStatus.INFEASIBLE, nodes=0)
        root_lb, root_active = root_node
        self.improve_incumbent(root, root_active)
        heap: List[Tuple[float, int, BoxBounds, int, Active]] = [(root_lb, next(counter), root, 0, root_active)]
        status = MinStatus.SOLVED

        while heap:
            lb, _, bounds, depth, active = heap[0]
            if self.can_prune(lb):
                # best-first: every remaining node is pruned by bound as well
                pruned_min = min(pruned_min, lb)
                heap.clear()
                break
            if nodes >= cfg.max_nodes:
                status = MinStatus.DEPTH_CAP_REACHED
                pruned_min = min(pruned_min, lb)
                logger.warning("Node cap of %d reached; best bound %.6g", cfg.max_nodes, pruned_min)
                break
            heapq.heappop(heap)
            nodes += 1

            if all(hi == lo for lo, hi in bounds):
                # a single point: already tried as an incumbent candidate
                if self.point_value(tuple(lo for lo, _ in bounds), active) is not None:
                    pruned_min = min(pruned_min, lb)
                continue
            if depth >= cfg.max_split_depth:
                raise SubsolverError(
                    f"Split depth cap {cfg.max_split_depth} reached on box {bounds} "
                    f"(objective bound {lb}); the enclosure cannot be resolved"
                )
            for child in split_bounds(bounds):
                child_node = self.node_bound(child, active)
                if child_node is None:
                    continue
                child_lb, child_active = child_node
                self.improve_incumbent(child, child_active)
                if self.can_prune(child_lb):
                    pruned_min = min(pruned_min, child_lb)
                    continue
                heapq.heappush(heap, (child_lb, next(counter), child, depth + 1, child_active))

        logger.debug("Branch-and-bound finished after %d nodes (%s)", nodes, status.value)

        if self.incumbent is None:
            if status == MinStatus.SOLVED:
                return CertifiedMin(lower_bound=math.inf, status=MinStatus.INFEASIBLE, nodes=nodes)
            return CertifiedMin(lower_bound=pruned_min, status=status, nodes=nodes)

        lower_bound = min(pruned_min, self.incumbent_value)
        return CertifiedMin(
            incumbent=PointVec(coords=self.incumbent),
            incumbent_value=self.incumbent_value,
            lower_bound=lower_bound,
            status=status,
            nodes=nodes,
        )


def minimize(
    objective: Expression,
    box: BoxRegion,
    constraints: Sequence[Expression] = (),
    cfg: Optional[OptConfig] = None,
    variables: VariableFamily = "x",
) -> CertifiedMin:
    """
    Epsilon-global minimization of ``objective`` over ``box`` subject to
    ``c(v) <= 0`` for every constraint.

    A node is dropped as infeasible when some constraint's interval lower
    bound exceeds ``eps_feas``, and pruned by bound when its objective lower
    bound is within ``eps_obj * max(1, |incumbent|)`` of the incumbent.
    Incumbents come from box midpoints and corners whose constraint values
    are at most ``eps_feas``.

    Node bounds intersect the natural interval extension with the affine-form
    enclosure, whose overestimation shrinks quadratically with the box width;
    minima inside the box are therefore resolved without a cluster of
    undecided nodes around them. A constraint whose upper bound on a node is
    <= 0 holds on every sub-box and is not checked below that node.

    Args:
        objective: Expression to minimize
        box: Domain of the variables of family ``variables``
        constraints: Expressions required to be <= 0
        cfg: Tolerances and caps (defaults from Settings)
        variables: Which variable family ("x" or "y") the box binds

    Returns:
        CertifiedMin: SOLVED, INFEASIBLE, or DEPTH_CAP_REACHED when the node
        budget ran out (best bounds so far)

    Raises:
        SubsolverError: If a division enclosure stays unresolved past the
            split-depth cap
    """
    cfg = cfg or OptConfig()
    return _BranchAndBound(objective, constraints, cfg, variables).run(box.bounds)


def maximize(
    objective: Expression,
    box: BoxRegion,
    cfg: Optional[OptConfig] = None,
    variables: VariableFamily = "x",
) -> CertifiedMin:
    """
    Maximize by minimizing the negated expression.

    The returned ``incumbent_value`` approximates the supremum and
    ``lower_bound`` is a certified UPPER bound on it.
    """
    result = minimize(Neg(objective), box, (), cfg, variables)
    return CertifiedMin(
        incumbent=result.incumbent,
        incumbent_value=None if result.incumbent_value is None else -result.incumbent_value,
        lower_bound=-result.lower_bound,
        status=result.status,
        nodes=result.nodes,
    )


def _grid_columns(box: BoxRegion, points_per_dim: int):
    if points_per_dim < 2:
        raise ValueError(f"points_per_dim must be at least 2, got {points_per_dim}")
    total = points_per_dim ** box.dim
    cap = get_settings().GRID_POINT_CAP
    if total > cap:
        raise GridSizeError(f"Grid of {total} points exceeds the cap of {cap}")
    axes = [np.linspace(d.lo, d.hi, points_per_dim) for d in box.dims]
    shape = (points_per_dim,) * box.dim
    for start in range(0, total, GRID_CHUNK):
        flat = np.arange(start, min(start + GRID_CHUNK, total))
        index = np.unravel_index(flat, shape)
        yield [axis[i] for axis, i in zip(axes, index)], flat.size


def grid_min(
    objective: Expression,
    box: BoxRegion,
    constraints: Sequence[Expression] = (),
    points_per_dim: int = 1001,
    variables: VariableFamily = "x",
    feas_tol: float = 0.0,
) -> float:
    """
    Brute-force minimum over a uniform grid that includes the box corners.

    Only grid points where every constraint is ``<= feas_tol`` count.

    Returns:
        float: The grid minimum, or +inf when no grid point is feasible

    Raises:
        GridSizeError: If points_per_dim ** dim exceeds GRID_POINT_CAP
    """
    bind = _binder(variables)
    best = math.inf
    for columns, size in _grid_columns(box, points_per_dim):
        args = bind(columns)
        values = np.broadcast_to(np.asarray(objective.evaluate_grid(*args), dtype=float), (size,))
        mask = np.isfinite(values)
        for c in constraints:
            g = np.broadcast_to(np.asarray(c.evaluate_grid(*args), dtype=float), (size,))
            mask &= g <= feas_tol
        if mask.any():
            best = min(best, float(values[mask].min()))
    return best


def grid_max(
    objective: Expression,
    box: BoxRegion,
    points_per_dim: int = 1001,
    variables: VariableFamily = "x",
) -> float:
    """Brute-force maximum over the same grid as ``grid_min``."""
    return -grid_min(Neg(objective), box, (), points_per_dim, variables)
