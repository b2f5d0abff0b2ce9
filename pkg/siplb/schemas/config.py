"""
Run Configuration Schemas

Validated configuration objects for the global optimizer, the lower bounding
loop and the alpha-degraded oracle. Defaults come from the project Settings;
invariants (strictly positive tolerances, alpha strictly inside (0, 1)) are
enforced by field constraints, so an invalid value raises a ValidationError
at construction time.
"""

from pydantic import BaseModel, ConfigDict, Field

from siplb.core.config import get_settings
from siplb.schemas.domain import Discretization

settings = get_settings()


class OptConfig(BaseModel):
    """Tolerances and caps of the interval branch-and-bound."""
    eps_obj: float = Field(
        default=settings.EPS_OBJ,
        gt=0,
        description="Optimality tolerance, relative to max(1, |incumbent value|)",
    )
    eps_feas: float = Field(
        default=settings.EPS_FEAS_OPT,
        gt=0,
        description="Constraint values up to eps_feas are accepted for incumbents",
    )
    max_nodes: int = Field(default=settings.MAX_NODES, ge=1, description="Node budget")
    max_split_depth: int = Field(
        default=settings.MAX_SPLIT_DEPTH,
        ge=1,
        description="Bisection depth after which an unresolved division aborts the solve",
    )

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"eps_obj": 1e-6, "eps_feas": 1e-8, "max_nodes": 1000000}},
    )


class SipConfig(BaseModel):
    """Configuration of the lower bounding iteration."""
    eps_feas: float = Field(
        default=settings.EPS_FEAS_SIP,
        gt=0,
        description="A point is declared SIP-feasible when the certified bound on g* is <= eps_feas",
    )
    max_iter: int = Field(default=settings.MAX_ITER, ge=1)
    opt: OptConfig = Field(default_factory=OptConfig)
    initial_discretization: Discretization = Field(
        default_factory=Discretization,
        description="Y^{LBD,1}; empty by default",
    )
    duplicate_tol: float = Field(
        default=settings.DUPLICATE_TOL,
        ge=0,
        description="A returned point this close to an existing one is a duplicate",
    )

    model_config = ConfigDict(frozen=True)


class AlphaConfig(BaseModel):
    """Parameters of the worst-case alpha-degraded oracle."""
    alpha: float = Field(..., gt=0, lt=1, description="Fraction of the maximal violation to deliver", example=0.5)
    value_tol: float = Field(default=settings.ALPHA_VALUE_TOL, gt=0)
    max_bisections: int = Field(default=settings.ALPHA_MAX_BISECTIONS, ge=1)

    model_config = ConfigDict(frozen=True)
