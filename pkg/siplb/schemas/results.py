"""
Result Schemas Module

Pydantic schemas for everything a solve returns:

- CertifiedMin: outcome of one branch-and-bound call
- OracleOutcome: the two-way answer of a lower-level oracle, as a
  discriminated union of FeasibleOutcome and ViolationOutcome
- IterationRecord / SolveReport: the history of a lower bounding run

Status values are str Enums so that they print and serialise as plain text.
"""

import math
from enum import Enum
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from siplb.schemas.domain import Discretization, PointVec


class MinStatus(str, Enum):
    """Termination status of the branch-and-bound."""
    SOLVED = "solved"
    INFEASIBLE = "infeasible"
    DEPTH_CAP_REACHED = "depth_cap_reached"


class CertifiedMin(BaseModel):
    """
    Result of a global minimization (or, sign-flipped, a maximization).

    For a minimization ``lower_bound`` is a certified lower bound on the
    minimum. For a maximization the values are negated back, so
    ``incumbent_value`` approximates the supremum and ``lower_bound`` carries
    a certified UPPER bound on it.
    """
    incumbent: Optional[PointVec] = Field(None, description="Best point found, if any")
    incumbent_value: Optional[float] = Field(None, description="Objective at the incumbent")
    lower_bound: float = Field(..., description="Certified bound (see class docstring)")
    status: MinStatus
    nodes: int = Field(0, ge=0, description="Number of processed nodes")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_incumbent(self) -> "CertifiedMin":
        if (self.incumbent is None) != (self.incumbent_value is None):
            raise ValueError("incumbent and incumbent_value must be given together")
        if self.status == MinStatus.SOLVED and self.incumbent is None:
            raise ValueError("A solved problem needs an incumbent")
        return self

    @property
    def upper_bound(self) -> float:
        """Certified upper bound on the supremum of a maximization result."""
        return self.lower_bound


class OutcomeSource(str, Enum):
    EXACT = "exact"
    ALPHA = "alpha"
    SCRIPTED = "scripted"


class FeasibleOutcome(BaseModel):
    """The oracle certified g*(x) <= eps_feas."""
    kind: Literal["feasible"] = "feasible"
    certified_max: float = Field(..., description="Certified upper bound on g*(x)")
    source: OutcomeSource = OutcomeSource.EXACT

    model_config = ConfigDict(frozen=True)

    @property
    def is_feasible(self) -> bool:
        return True


class ViolationOutcome(BaseModel):
    """The oracle returned a point y with g(x, y) > 0."""
    kind: Literal["violation"] = "violation"
    y: PointVec
    g_value: float = Field(..., gt=0, description="g(x, y), strictly positive")
    g_star_estimate: Optional[float] = Field(None, description="Estimate of g*(x); absent for scripted points")
    source: OutcomeSource = OutcomeSource.EXACT

    model_config = ConfigDict(frozen=True)

    @property
    def is_feasible(self) -> bool:
        return False


OracleOutcome = Annotated[Union[FeasibleOutcome, ViolationOutcome], Field(discriminator="kind")]


class IterationRecord(BaseModel):
    """One pass of the lower bounding loop."""
    k: int = Field(..., ge=1)
    x_bar: Optional[PointVec] = Field(None, description="Incumbent of the k-th lower bounding problem")
    f_lbd: float = Field(..., description="Rigorous lower bound f^{LBD,k}")
    incumbent_value: float = Field(..., description="Objective value at x_bar")
    oracle: Optional[OracleOutcome] = None

    model_config = ConfigDict(frozen=True)


class SipStatus(str, Enum):
    CONVERGED_OPTIMAL = "converged_optimal"
    INFEASIBLE_SIP = "infeasible_sip"
    MAX_ITER_REACHED = "max_iter_reached"
    SUBSOLVER_FAILURE = "subsolver_failure"


class SolveReport(BaseModel):
    """Outcome of run_lower_bounding."""
    status: SipStatus
    x_dim: int = Field(..., ge=1, description="dim(X) of the instance")
    y_dim: int = Field(..., ge=1, description="dim(Y) of the instance")
    iterations: List[IterationRecord] = Field(default_factory=list)
    final_lower_bound: float
    optimal_point: Optional[PointVec] = None
    discretization: Discretization = Field(default_factory=Discretization)
    message: Optional[str] = Field(None, description="Diagnostic for failures")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_status(self) -> "SolveReport":
        converged = self.status == SipStatus.CONVERGED_OPTIMAL
        if converged != (self.optimal_point is not None):
            raise ValueError("optimal_point is present iff the run converged")
        if converged:
            last = self.iterations[-1].oracle if self.iterations else None
            if last is None or not last.is_feasible:
                raise ValueError("A converged run must end with a feasibility certificate")
        if self.status == SipStatus.INFEASIBLE_SIP and not (
            math.isinf(self.final_lower_bound) and self.final_lower_bound > 0
        ):
            raise ValueError("An infeasible run has final_lower_bound = +inf")
        return self

    @property
    def bounds(self) -> List[float]:
        return [record.f_lbd for record in self.iterations]
