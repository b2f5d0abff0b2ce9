"""
Domain Schemas Module

Closed intervals, boxes (products of intervals) and point vectors used by
every other module. All three are immutable pydantic models:

- Interval rejects lo > hi and NaN bounds. Degenerate intervals (lo == hi)
  are allowed and represent fixed variables.
- BoxRegion needs at least one dimension, and every dimension must be finite
  so that it can be bisected.
- PointVec holds finite coordinates only; it may be empty (an x-only
  expression is evaluated with an empty y).

The two box operations, ``clamp_to_box`` and ``split_widest``, are plain
functions. The branch-and-bound engine works on raw ``(lo, hi)`` tuples in its
inner loop and goes through ``split_bounds`` directly.
"""

import itertools
import math
from typing import Iterator, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from siplb.core.exceptions import DimensionMismatchError

Bounds = Tuple[float, float]


class Interval(BaseModel):
    """A closed interval [lo, hi]."""
    lo: float = Field(..., description="Lower end point", example=-1.0)
    hi: float = Field(..., description="Upper end point", example=1.0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_order(self) -> "Interval":
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("Interval bounds must not be NaN")
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")
        return self

    @classmethod
    def from_bounds(cls, bounds: Bounds) -> "Interval":
        return cls(lo=bounds[0], hi=bounds[1])

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def encloses(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def as_bounds(self) -> Bounds:
        return (self.lo, self.hi)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


class PointVec(BaseModel):
    """An ordered list of finite reals."""
    coords: Tuple[float, ...] = Field(default=(), description="Coordinates", example=(0.5,))

    model_config = ConfigDict(frozen=True)

    @field_validator("coords")
    @classmethod
    def validate_finite(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if not all(math.isfinite(c) for c in v):
            raise ValueError("Point coordinates must be finite")
        return v

    @classmethod
    def of(cls, *coords: float) -> "PointVec":
        return cls(coords=tuple(float(c) for c in coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def distance_inf(self, other: "PointVec") -> float:
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"Cannot compare points of dimension {self.dim} and {other.dim}"
            )
        return max((abs(a - b) for a, b in zip(self.coords, other.coords)), default=0.0)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, index: int) -> float:
        return self.coords[index]

    def __str__(self) -> str:
        return "(" + ", ".join(repr(c) for c in self.coords) + ")"


class BoxRegion(BaseModel):
    """A product of finite closed intervals."""
    dims: Tuple[Interval, ...] = Field(..., min_length=1, description="One interval per coordinate")

    model_config = ConfigDict(frozen=True)

    @field_validator("dims")
    @classmethod
    def validate_finite(cls, v: Tuple[Interval, ...]) -> Tuple[Interval, ...]:
        for i, interval in enumerate(v):
            if not (math.isfinite(interval.lo) and math.isfinite(interval.hi)):
                raise ValueError(f"Box dimension {i} must be bounded")
        return v

    @classmethod
    def from_bounds(cls, bounds: Sequence[Bounds]) -> "BoxRegion":
        return cls(dims=tuple(Interval(lo=lo, hi=hi) for lo, hi in bounds))

    @property
    def dim(self) -> int:
        return len(self.dims)

    @property
    def bounds(self) -> Tuple[Bounds, ...]:
        return tuple(d.as_bounds() for d in self.dims)

    def midpoint(self) -> PointVec:
        return PointVec(coords=tuple(d.midpoint for d in self.dims))

    def corners(self) -> Iterator[PointVec]:
        for corner in itertools.product(*[(d.lo, d.hi) for d in self.dims]):
            yield PointVec(coords=corner)

    def contains(self, p: PointVec) -> bool:
        if p.dim != self.dim:
            raise DimensionMismatchError(
                f"Point of dimension {p.dim} does not match box of dimension {self.dim}"
            )
        return all(d.contains(c) for d, c in zip(self.dims, p.coords))

    def __str__(self) -> str:
        return " x ".join(str(d) for d in self.dims)


def clamp_to_box(p: PointVec, b: BoxRegion) -> PointVec:
    """
    Project a point onto a box coordinate by coordinate.

    Args:
        p: The point to project
        b: The target box, of the same dimension

    Returns:
        PointVec: The projection; ``p`` itself when it already lies inside

    Raises:
        DimensionMismatchError: If dim(p) != dim(b)
    """
    if b.contains(p):
        return p
    return PointVec(coords=tuple(min(max(c, d.lo), d.hi) for c, d in zip(p.coords, b.dims)))


def split_bounds(bounds: Sequence[Bounds]) -> Tuple[Tuple[Bounds, ...], Tuple[Bounds, ...]]:
    """Bisect raw bounds along the widest dimension (lowest index on ties)."""
    widest = 0
    widest_width = bounds[0][1] - bounds[0][0]
    for i in range(1, len(bounds)):
        width = bounds[i][1] - bounds[i][0]
        if width > widest_width:
            widest, widest_width = i, width
    lo, hi = bounds[widest]
    mid = 0.5 * (lo + hi)
    left: List[Bounds] = list(bounds)
    right: List[Bounds] = list(bounds)
    left[widest] = (lo, mid)
    right[widest] = (mid, hi)
    return tuple(left), tuple(right)


def split_widest(b: BoxRegion) -> Tuple[BoxRegion, BoxRegion]:
    """
    Bisect a box at the midpoint of its widest dimension.

    Ties are broken by the lowest dimension index. The two children share the
    midpoint facet and their union is the parent.
    """
    left, right = split_bounds(b.bounds)
    return BoxRegion.from_bounds(left), BoxRegion.from_bounds(right)


class VarAssignment(BaseModel):
    """Values bound to x1..xN and y1..yM for a point evaluation."""
    x: PointVec = Field(default_factory=PointVec, description="Values of x1, x2, ...")
    y: PointVec = Field(default_factory=PointVec, description="Values of y1, y2, ... (may be empty)")

    model_config = ConfigDict(frozen=True)

    @classmethod
    def of(cls, x: Sequence[float] = (), y: Sequence[float] = ()) -> "VarAssignment":
        return cls(x=PointVec.of(*x), y=PointVec.of(*y))


class Discretization(BaseModel):
    """
    The finite index set Y^{LBD,k}: an ordered, append-only list of y-points.

    ``with_point`` returns a new discretization; a run never removes points.
    """
    points: Tuple[PointVec, ...] = Field(default=(), description="Discretization points, in insertion order")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_dimensions(self) -> "Discretization":
        dims = {p.dim for p in self.points}
        if len(dims) > 1:
            raise ValueError(f"Discretization points have mixed dimensions {sorted(dims)}")
        return self

    def with_point(self, p: PointVec) -> "Discretization":
        return Discretization(points=self.points + (p,))

    def nearest_distance(self, p: PointVec) -> float:
        return min((q.distance_inf(p) for q in self.points), default=float("inf"))

    def __len__(self) -> int:
        return len(self.points)
