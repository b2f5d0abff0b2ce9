"""
SIP Instance Schemas

- SipInstance: objective f(x), semi-infinite constraint g(x, y), and the
  boxes X and Y.
- AffineMap: y = A x + b, the script followed by the adversarial oracle.
- builtin_counterexample(): the instance on which a merely sign-correct
  oracle produces lower bounds that stall at 0 instead of reaching 1/2.
"""

from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from siplb.core.exceptions import DimensionMismatchError
from siplb.models.expression import Expression, variables
from siplb.models.parser import parse
from siplb.schemas.domain import BoxRegion, PointVec


class SipInstance(BaseModel):
    """inf f(x) s.t. x in X, g(x, y) <= 0 for all y in Y."""
    name: str = Field(default="unnamed", min_length=1)
    objective: Expression = Field(..., description="f, over x-variables only")
    constraint: Expression = Field(..., description="g, over x- and y-variables")
    x_box: BoxRegion = Field(..., description="X")
    y_box: BoxRegion = Field(..., description="Y")

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def validate_variables(self) -> "SipInstance":
        for family, index in variables(self.objective):
            if family == "y":
                raise ValueError(f"Objective must not reference y{index + 1}")
            if index >= self.x_box.dim:
                raise ValueError(f"Objective references x{index + 1} but X has dimension {self.x_box.dim}")
        for family, index in variables(self.constraint):
            box = self.x_box if family == "x" else self.y_box
            if index >= box.dim:
                raise ValueError(
                    f"Constraint references {family}{index + 1} but "
                    f"{family.upper()} has dimension {box.dim}"
                )
        return self

    @classmethod
    def from_text(
        cls,
        objective: str,
        constraint: str,
        x_bounds,
        y_bounds,
        name: str = "unnamed",
    ) -> "SipInstance":
        return cls(
            name=name,
            objective=parse(objective),
            constraint=parse(constraint),
            x_box=BoxRegion.from_bounds(x_bounds),
            y_box=BoxRegion.from_bounds(y_bounds),
        )


class AffineMap(BaseModel):
    """y = A x + b with A stored row-major as a tuple of rows."""
    matrix: Tuple[Tuple[float, ...], ...] = Field(..., min_length=1)
    offset: Tuple[float, ...] = Field(..., min_length=1)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_shape(self) -> "AffineMap":
        if len(self.matrix) != len(self.offset):
            raise ValueError(f"Matrix has {len(self.matrix)} rows but offset has {len(self.offset)} entries")
        widths = {len(row) for row in self.matrix}
        if len(widths) != 1 or 0 in widths:
            raise ValueError("Matrix rows must be non-empty and of equal length")
        return self

    @property
    def input_dim(self) -> int:
        return len(self.matrix[0])

    @property
    def output_dim(self) -> int:
        return len(self.offset)

    @classmethod
    def identity(cls, dim: int) -> "AffineMap":
        return cls(
            matrix=tuple(tuple(1.0 if i == j else 0.0 for j in range(dim)) for i in range(dim)),
            offset=(0.0,) * dim,
        )

    @classmethod
    def from_flat(cls, entries, input_dim: int, output_dim: int) -> "AffineMap":
        """Build from ``output_dim * input_dim`` matrix entries (row-major) followed by the offset."""
        entries = [float(v) for v in entries]
        expected = output_dim * input_dim + output_dim
        if len(entries) != expected:
            raise DimensionMismatchError(
                f"Affine map for dim(x)={input_dim}, dim(y)={output_dim} needs {expected} entries, got {len(entries)}"
            )
        rows = tuple(
            tuple(entries[i * input_dim:(i + 1) * input_dim]) for i in range(output_dim)
        )
        return cls(matrix=rows, offset=tuple(entries[output_dim * input_dim:]))

    def apply(self, x: PointVec) -> PointVec:
        if x.dim != self.input_dim:
            raise DimensionMismatchError(f"Affine map expects dim {self.input_dim}, got point of dim {x.dim}")
        return PointVec(
            coords=tuple(
                sum(a * c for a, c in zip(row, x.coords)) + b
                for row, b in zip(self.matrix, self.offset)
            )
        )


def builtin_counterexample() -> SipInstance:
    """inf -x s.t. x in [-1, 1], 2x - y <= 0 for all y in [-1, 1]; f* = 1/2."""
    return SipInstance.from_text(
        objective="-x1",
        constraint="2*x1 - y1",
        x_bounds=[(-1.0, 1.0)],
        y_bounds=[(-1.0, 1.0)],
        name="cex",
    )
