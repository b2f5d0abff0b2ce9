# siplb/solvers/lower_bounding.py
"""
The discretization-based lower bounding iteration.

At iteration k (starting at k = 1 with Y^{LBD,1} = the initial
discretization):

1. solve the lower bounding problem over Y^{LBD,k}; if it is infeasible the
   SIP is infeasible and the bound is +inf;
2. query the oracle at the incumbent x_bar^k;
3. on a feasibility certificate x_bar^k is optimal; on a violating point
   y^k, set Y^{LBD,k+1} = Y^{LBD,k} + {y^k} and repeat.

The reported f^{LBD,k} is the branch-and-bound certified lower bound, never
the incumbent value, and it is carried forward as a running maximum: the
bound of iteration k-1 remains valid for the larger discretization of
iteration k, so the sequence is non-decreasing.
"""

import logging
import math
from typing import List, Optional

from siplb.core.exceptions import DimensionMismatchError, OracleContractViolation, SubsolverError
from siplb.schemas.config import SipConfig
from siplb.schemas.domain import Discretization, PointVec
from siplb.schemas.instance import SipInstance, builtin_counterexample
from siplb.schemas.results import (
    IterationRecord,
    MinStatus,
    SipStatus,
    SolveReport,
)
from siplb.solvers.oracles import LlpOracle, g_value
from siplb.solvers.subproblems import llp_certified_max, solve_lbd

logger = logging.getLogger(__name__)

__all__ = [
    "builtin_counterexample",
    "llp_certified_max",
    "run_lower_bounding",
    "solve_lbd",
]


def _check_initial(inst: SipInstance, d: Discretization) -> None:
    for p in d.points:
        if p.dim != inst.y_box.dim:
            raise DimensionMismatchError(
                f"Initial point {p} has dimension {p.dim}, Y has dimension {inst.y_box.dim}"
            )
        if not inst.y_box.contains(p):
            raise ValueError(f"Initial point {p} lies outside Y = {inst.y_box}")


def run_lower_bounding(
    inst: SipInstance,
    oracle: LlpOracle,
    cfg: Optional[SipConfig] = None,
) -> SolveReport:
    """
    Run the lower bounding procedure until convergence, infeasibility,
    max_iter, or a subsolver failure.

    Raises:
        OracleContractViolation: If the oracle reports a "violating" point
            whose independently evaluated g(x_bar, y) is not positive, a point
            outside Y, or a feasibility certificate above eps_feas
    """
    cfg = cfg or SipConfig()
    d = cfg.initial_discretization
    _check_initial(inst, d)
    records: List[IterationRecord] = []
    best = -math.inf

    def finish(status: SipStatus, bound: float, point: Optional[PointVec] = None, message: Optional[str] = None):
        if message:
            logger.warning("%s: stopping at iteration %d with %s (%s)", inst.name, len(records), status.value, message)
        return SolveReport(
            status=status,
            x_dim=inst.x_box.dim,
            y_dim=inst.y_box.dim,
            iterations=records,
            final_lower_bound=bound,
            optimal_point=point,
            discretization=d,
            message=message,
        )

    for k in range(1, cfg.max_iter + 1):
        try:
            lbd = solve_lbd(inst, d, cfg.opt)
        except SubsolverError as exc:
            return finish(SipStatus.SUBSOLVER_FAILURE, best, message=str(exc))

        if lbd.status == MinStatus.INFEASIBLE:
            records.append(IterationRecord(k=k, f_lbd=math.inf, incumbent_value=math.inf))
            logger.info("%s k=%d: lower bounding problem infeasible", inst.name, k)
            return finish(SipStatus.INFEASIBLE_SIP, math.inf)
        if lbd.status != MinStatus.SOLVED:
            return finish(
                SipStatus.SUBSOLVER_FAILURE,
                best,
                message=f"lower bounding problem at k={k}: {lbd.status.value} after {lbd.nodes} nodes",
            )

        best = max(best, lbd.lower_bound)
        x_bar = lbd.incumbent

        try:
            outcome = oracle.query(inst, x_bar, cfg.opt, cfg.eps_feas)
        except SubsolverError as exc:
            records.append(IterationRecord(k=k, x_bar=x_bar, f_lbd=best, incumbent_value=lbd.incumbent_value))
            return finish(SipStatus.SUBSOLVER_FAILURE, best, message=str(exc))

        records.append(
            IterationRecord(k=k, x_bar=x_bar, f_lbd=best, incumbent_value=lbd.incumbent_value, oracle=outcome)
        )

        if outcome.is_feasible:
            if outcome.certified_max > cfg.eps_feas:
                raise OracleContractViolation(
                    f"Feasibility certificate {outcome.certified_max} exceeds eps_feas = {cfg.eps_feas}"
                )
            logger.info("%s k=%d: f_lbd=%.10g, x_bar=%s certified feasible", inst.name, k, best, x_bar)
            return finish(SipStatus.CONVERGED_OPTIMAL, best, point=x_bar)

        y = outcome.y
        if y.dim != inst.y_box.dim or not inst.y_box.contains(y):
            raise OracleContractViolation(f"Oracle returned {y}, which is not a point of Y = {inst.y_box}")
        value = g_value(inst, x_bar, y)
        if not value > 0:
            raise OracleContractViolation(
                f"Oracle returned y = {y} with g(x_bar, y) = {value} <= 0 at x_bar = {x_bar}"
            )
        logger.info("%s k=%d: f_lbd=%.10g, x_bar=%s, y=%s, g=%.6g", inst.name, k, best, x_bar, y, value)

        if d.nearest_distance(y) <= cfg.duplicate_tol:
            return finish(
                SipStatus.SUBSOLVER_FAILURE,
                best,
                message=f"oracle returned {y}, already in the discretization; the bound cannot improve",
            )
        d = d.with_point(y)

    return finish(SipStatus.MAX_ITER_REACHED, best, message=f"max_iter = {cfg.max_iter} reached")
