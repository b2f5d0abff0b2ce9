# siplb/solvers/oracles.py
"""
Lower-level program oracles.

An oracle is queried at the lower bounding solution x_bar and must either
certify g*(x_bar) <= eps_feas or return a point y with g(x_bar, y) > 0.
Three implementations share that contract:

1. ExactOracle - solves the lower-level program to certified precision and
   returns its maximizer.
2. AlphaOracle - returns the *worst* point that still satisfies
   g(x_bar, y) >= alpha * g*(x_bar) > 0. Under this hypothesis the lower
   bounds converge.
3. ScriptedOracle - returns y = clamp(A x_bar + b) whenever that point has a
   positive constraint value, falling back to the exact oracle otherwise.
   It satisfies the weaker "any y with g > 0" hypothesis, under which the
   lower bounds need not converge.

Oracles are stateless apart from their parameters; queries are pure.
"""

import logging
from abc import ABC, abstractmethod
from typing import Optional

from siplb.core.config import get_settings
from siplb.core.exceptions import BisectionFailureError, DimensionMismatchError, SubsolverError
from siplb.models.expression import eval_point
from siplb.schemas.config import AlphaConfig, OptConfig
from siplb.schemas.domain import PointVec, VarAssignment, clamp_to_box
from siplb.schemas.instance import AffineMap, SipInstance
from siplb.schemas.results import (
    FeasibleOutcome,
    OracleOutcome,
    OutcomeSource,
    ViolationOutcome,
)
from siplb.solvers.subproblems import llp_certified_max

logger = logging.getLogger(__name__)
settings = get_settings()

# Solves the exact oracle spends separating "certified feasible" from
# "violated"; eps_obj shrinks 10x per solve down to REFINE_EPS_OBJ_FLOOR
MAX_REFINEMENTS = 8


def g_value(inst: SipInstance, x_bar: PointVec, y: PointVec) -> float:
    return eval_point(inst.constraint, VarAssignment(x=x_bar, y=y))


class LlpOracle(ABC):
    """
    Abstract base class for lower-level program oracles.

    Design Pattern: Strategy - the lower bounding loop only depends on
    ``query``; the three oracles differ in which violating point they pick.
    """

    source: OutcomeSource = OutcomeSource.EXACT

    @abstractmethod
    def query(
        self,
        inst: SipInstance,
        x_bar: PointVec,
        cfg: Optional[OptConfig] = None,
        eps_feas: float = settings.EPS_FEAS_SIP,
    ) -> OracleOutcome:
        """
        Either certify g*(x_bar) <= eps_feas or return y with g(x_bar, y) > 0.

        Raises:
            SubsolverError: If the lower-level program cannot be resolved
        """
        raise NotImplementedError

    @classmethod
    def create(
        cls,
        kind: str,
        alpha: Optional[float] = None,
        affine_map: Optional[AffineMap] = None,
    ) -> "LlpOracle":
        """
        Factory method to create an oracle by name.

        Args:
            kind: "exact", "alpha" or "scripted"
            alpha: Degradation factor in (0, 1), required for "alpha"
            affine_map: Script for "scripted"; the identity when omitted

        Raises:
            ValueError: If the kind is unknown or alpha is missing
        """
        kind = kind.lower()
        if kind == "exact":
            return ExactOracle()
        if kind == "alpha":
            if alpha is None:
                raise ValueError("The alpha oracle needs a value for alpha")
            return AlphaOracle(AlphaConfig(alpha=alpha))
        if kind == "scripted":
            return ScriptedOracle(affine_map)
        raise ValueError(f"Unsupported oracle type: {kind}")

    def __repr__(self):
        return f"<{type(self).__name__}>"


class ExactOracle(LlpOracle):
    """
    Certified solution of the lower-level program.

    A maximizer is reported as violating right away when g > eps_feas. When
    the best value found lies in (-inf, eps_feas] but the certified bound is
    still above eps_feas, eps_obj is tightened tenfold and the problem
    re-solved, at most MAX_REFINEMENTS times in all and never below
    REFINE_EPS_OBJ_FLOOR; a point with 0 < g <= eps_feas is only returned
    once the refinements are used up.
    """

    def query(self, inst, x_bar, cfg=None, eps_feas=settings.EPS_FEAS_SIP) -> OracleOutcome:
        cfg = cfg or OptConfig()
        result, value = None, None
        for _ in range(MAX_REFINEMENTS):
            result = llp_certified_max(inst, x_bar, cfg)
            if result.upper_bound <= eps_feas:
                return FeasibleOutcome(certified_max=result.upper_bound, source=self.source)
            value = g_value(inst, x_bar, result.incumbent)
            if value > eps_feas:
                return self._violation(result, value)
            logger.debug(
                "LLP at %s unresolved (value %.3g, bound %.3g); refining eps_obj below %.1e",
                x_bar, value, result.upper_bound, cfg.eps_obj,
            )
            floor = settings.REFINE_EPS_OBJ_FLOOR
            if cfg.eps_obj <= floor:
                break
            cfg = cfg.model_copy(update={"eps_obj": max(cfg.eps_obj / 10.0, floor)})
        if value is not None and value > 0:
            return self._violation(result, value)
        raise SubsolverError(
            f"Could not decide feasibility of x = {x_bar} down to eps_obj = {cfg.eps_obj:.1e}"
        )

    def _violation(self, result, value: float) -> ViolationOutcome:
        return ViolationOutcome(
            y=result.incumbent,
            g_value=value,
            g_star_estimate=result.incumbent_value,
            source=self.source,
        )


class AlphaOracle(LlpOracle):
    """
    Worst-case oracle for the alpha-approximate hypothesis.

    With target t = alpha * g*, it returns the box corner minimizing
    g(x_bar, .) if that already reaches t; otherwise it bisects the segment
    from that corner to the exact maximizer until t <= g <= t + value_tol.
    Continuity of g guarantees the crossing exists.
    """

    source = OutcomeSource.ALPHA

    def __init__(self, acfg: AlphaConfig):
        self.acfg = acfg
        self.exact = ExactOracle()

    def query(self, inst, x_bar, cfg=None, eps_feas=settings.EPS_FEAS_SIP) -> OracleOutcome:
        outcome = self.exact.query(inst, x_bar, cfg, eps_feas)
        if outcome.is_feasible:
            return FeasibleOutcome(certified_max=outcome.certified_max, source=self.source)

        y_star, g_star = outcome.y, outcome.g_star_estimate
        target = self.acfg.alpha * g_star
        tol = self.acfg.value_tol

        if g_star <= target + tol:
            return self._violation(y_star, outcome.g_value, g_star)

        anchor = min(inst.y_box.corners(), key=lambda corner: g_value(inst, x_bar, corner))
        g_anchor = g_value(inst, x_bar, anchor)
        if g_anchor >= target:
            return self._violation(anchor, g_anchor, g_star)

        lo, hi = 0.0, 1.0
        for _ in range(self.acfg.max_bisections):
            s = 0.5 * (lo + hi)
            point = clamp_to_box(
                PointVec(coords=tuple(a + s * (b - a) for a, b in zip(anchor.coords, y_star.coords))),
                inst.y_box,
            )
            value = g_value(inst, x_bar, point)
            if target <= value <= target + tol:
                return self._violation(point, value, g_star)
            if value < target:
                lo = s
            else:
                hi = s
        raise BisectionFailureError(
            f"Segment bisection at x = {x_bar} did not reach g = {target} "
            f"within {self.acfg.max_bisections} steps"
        )

    def _violation(self, y: PointVec, value: float, g_star: float) -> ViolationOutcome:
        return ViolationOutcome(y=y, g_value=value, g_star_estimate=g_star, source=self.source)

    def __repr__(self):
        return f"<AlphaOracle(alpha={self.acfg.alpha})>"


class ScriptedOracle(LlpOracle):
    """
    Adversarial oracle following y = clamp(A x_bar + b).

    Its scripted point is returned whenever g(x_bar, y) > 0, which is all the
    sign-only hypothesis asks for; otherwise the exact oracle answers.
    """

    source = OutcomeSource.SCRIPTED

    def __init__(self, affine_map: Optional[AffineMap] = None):
        self.affine_map = affine_map
        self.exact = ExactOracle()

    def map_for(self, inst: SipInstance) -> AffineMap:
        if self.affine_map is None:
            if inst.x_box.dim != inst.y_box.dim:
                raise DimensionMismatchError(
                    f"The identity script needs dim(x) == dim(y), got {inst.x_box.dim} and {inst.y_box.dim}"
                )
            return AffineMap.identity(inst.x_box.dim)
        if self.affine_map.input_dim != inst.x_box.dim or self.affine_map.output_dim != inst.y_box.dim:
            raise DimensionMismatchError(
                f"Affine map is {self.affine_map.output_dim}x{self.affine_map.input_dim}, "
                f"instance needs {inst.y_box.dim}x{inst.x_box.dim}"
            )
        return self.affine_map

    def query(self, inst, x_bar, cfg=None, eps_feas=settings.EPS_FEAS_SIP) -> OracleOutcome:
        y = clamp_to_box(self.map_for(inst).apply(x_bar), inst.y_box)
        value = g_value(inst, x_bar, y)
        if value > 0:
            return ViolationOutcome(y=y, g_value=value, g_star_estimate=None, source=self.source)
        logger.debug("Scripted point %s has g = %.3g <= 0; falling back to the exact oracle", y, value)
        return self.exact.query(inst, x_bar, cfg, eps_feas)

    def __repr__(self):
        return f"<ScriptedOracle(map={self.affine_map})>"
