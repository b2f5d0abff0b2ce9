# siplb/solvers/subproblems.py
"""
The two finite subproblems of the lower bounding procedure:

- solve_lbd: the lower bounding problem, f over X with g(x, y) <= 0 enforced
  only at the discretization points;
- llp_certified_max: the lower-level program sup_y g(x_bar, y) over Y.
"""

import logging
from typing import Optional

from siplb.core.exceptions import DimensionMismatchError, SubsolverError
from siplb.models.expression import substitute
from siplb.schemas.config import OptConfig
from siplb.schemas.domain import Discretization, PointVec
from siplb.schemas.instance import SipInstance
from siplb.schemas.results import CertifiedMin, MinStatus
from siplb.solvers.globalopt import maximize, minimize

logger = logging.getLogger(__name__)


def solve_lbd(inst: SipInstance, d: Discretization, cfg: Optional[OptConfig] = None) -> CertifiedMin:
    """
    Solve min f(x) over X s.t. g(x, y) <= 0 for every y in the discretization.

    Each discretization point contributes one constraint expression, obtained
    by substituting the point's coordinates for the y-variables. An empty
    discretization leaves the problem unconstrained over X.

    The result is returned as is; a DEPTH_CAP_REACHED status is turned into a
    subsolver failure by the caller.
    """
    for p in d.points:
        if p.dim != inst.y_box.dim:
            raise DimensionMismatchError(
                f"Discretization point of dimension {p.dim} does not match Y of dimension {inst.y_box.dim}"
            )
    constraints = [substitute(inst.constraint, y=p) for p in d.points]
    return minimize(inst.objective, inst.x_box, constraints, cfg, variables="x")


def llp_certified_max(inst: SipInstance, x_bar: PointVec, cfg: Optional[OptConfig] = None) -> CertifiedMin:
    """
    Maximize g(x_bar, y) over Y.

    Returns:
        CertifiedMin: incumbent maximizer, its value, and in ``lower_bound``
        (alias ``upper_bound``) a certified upper bound on g*(x_bar)

    Raises:
        SubsolverError: If the node cap is reached
    """
    if x_bar.dim != inst.x_box.dim:
        raise DimensionMismatchError(f"x_bar has dimension {x_bar.dim}, X has {inst.x_box.dim}")
    g_at_x = substitute(inst.constraint, x=x_bar)
    result = maximize(g_at_x, inst.y_box, cfg, variables="y")
    if result.status != MinStatus.SOLVED:
        raise SubsolverError(f"Lower-level program at x = {x_bar} not solved: {result.status.value}")
    logger.debug("LLP at %s: value %.12g, certified bound %.12g", x_bar, result.incumbent_value, result.upper_bound)
    return result
