# siplb/operations/affine.py

"""
Module: affine

First-order bound forms over a box. A form represents a function of the box
variables as

    center + sum_i coeffs[i] * t_i + remainder,    t_i in [-1, 1],

where box variable i is ``mid_i + rad_i * t_i`` and ``remainder`` is a
``(lo, hi)`` pair collecting every nonlinear contribution. Sums and scalings
are exact on the linear part, so a variable that occurs several times in an
expression is not counted as independent copies the way the natural interval
extension counts it. On a box of width w the enclosure of a smooth
expression overestimates its range by O(w^2) instead of O(w).

Nonlinear unary functions are linearized at the center of their argument
with a second-order remainder: f(u) = f(c) + f'(c) (u - c) + f''(xi) (u - c)^2 / 2.

Functions:
- box_forms(bounds) -> Tuple[AffineForm, ...]: One form per box variable.
- sin(a), cos(a), exp(a), reciprocal(a) -> AffineForm
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Tuple

from siplb import operations
from siplb.core.exceptions import IntervalDivisionByZeroError
from siplb.operations import Bounds

ZERO: Bounds = (0.0, 0.0)
UNBOUNDED: Bounds = (-math.inf, math.inf)


def _widen(remainder: Bounds, magnitude: float) -> Bounds:
    # rounding of the center and coefficients, relative to the operands' size
    slack = operations.PADDING * max(1.0, magnitude)
    return (remainder[0] - slack, remainder[1] + slack)


def _combine(p: float, a: Tuple[float, ...], q: float, b: Tuple[float, ...]) -> Tuple[float, ...]:
    # coefficients of p * a + q * b; an empty tuple stands for all zeros
    if not a:
        return tuple(q * v for v in b)
    if not b:
        return tuple(p * u for u in a)
    return tuple(p * u + q * v for u, v in zip(a, b))


@dataclass(frozen=True)
class AffineForm:
    center: float
    coeffs: Tuple[float, ...] = ()
    remainder: Bounds = field(default=ZERO)

    @classmethod
    def constant(cls, value: float) -> "AffineForm":
        return cls(float(value))

    @classmethod
    def unbounded(cls) -> "AffineForm":
        return cls(0.0, (), UNBOUNDED)

    @property
    def radius(self) -> float:
        """Half-width of the linear part."""
        try:
            return math.fsum(abs(c) for c in self.coeffs)
        except OverflowError:
            return math.inf

    def range(self) -> Bounds:
        """
        Enclosure of every value the form takes over the box.

        Example:
        >>> x = box_forms([(0.0, 2.0)])[0]
        >>> lo, hi = (x * x - x * 2.0).range()
        >>> lo <= -1.0 and hi >= 0.0
        True
        """
        if math.isinf(self.center):
            # an overflowed center carries no information
            return UNBOUNDED
        radius = self.radius
        lo, hi = operations.pad(
            self.center - radius + self.remainder[0],
            self.center + radius + self.remainder[1],
        )
        if lo == math.inf or hi == -math.inf:
            return UNBOUNDED
        return lo, hi

    def __neg__(self) -> "AffineForm":
        return AffineForm(-self.center, tuple(-c for c in self.coeffs), operations.negate(self.remainder))

    def __add__(self, other) -> "AffineForm":
        other = _as_form(other)
        return AffineForm(
            self.center + other.center,
            _combine(1.0, self.coeffs, 1.0, other.coeffs),
            _widen(
                operations.add(self.remainder, other.remainder),
                abs(self.center) + self.radius + abs(other.center) + other.radius,
            ),
        )

    def __sub__(self, other) -> "AffineForm":
        return self + (-_as_form(other))

    def __mul__(self, other) -> "AffineForm":
        """
        Product of two forms.

        The product of the two linear parts splits into squares t_i^2 in
        [0, 1] and cross terms t_i t_j in [-1, 1]; both go to the remainder
        together with the products involving a remainder.
        """
        other = _as_form(other)
        a, b = self.coeffs, other.coeffs
        coeffs = _combine(other.center, a, self.center, b)

        square_lo = square_hi = 0.0
        diagonal = 0.0
        for u, v in zip(a, b):
            p = u * v
            diagonal += abs(p)
            if p < 0:
                square_lo += p
            else:
                square_hi += p
        ra, rb = self.radius, other.radius
        cross = max(0.0, ra * rb - diagonal)
        linear_product = operations.pad(square_lo - cross, square_hi + cross)

        ea, eb = self.remainder, other.remainder
        remainder = linear_product
        if eb != ZERO:
            remainder = operations.add(remainder, operations.multiply((self.center - ra, self.center + ra), eb))
        if ea != ZERO:
            remainder = operations.add(remainder, operations.multiply(ea, (other.center - rb, other.center + rb)))
            if eb != ZERO:
                remainder = operations.add(remainder, operations.multiply(ea, eb))
        remainder = _widen(remainder, (abs(self.center) + ra) * (abs(other.center) + rb))
        return AffineForm(self.center * other.center, coeffs, remainder)

    __radd__ = __add__
    __rmul__ = __mul__

    def __truediv__(self, other) -> "AffineForm":
        return self * reciprocal(_as_form(other))

    def __pow__(self, n: int) -> "AffineForm":
        if n == 0:
            return AffineForm.constant(1.0)
        result = self
        for _ in range(n - 1):
            result = result * self
        return result


def _as_form(value) -> AffineForm:
    if isinstance(value, AffineForm):
        return value
    return AffineForm.constant(value)


def box_forms(bounds: Sequence[Bounds]) -> Tuple[AffineForm, ...]:
    """
    Forms of the box variables themselves.

    Example:
    >>> x, y = box_forms([(0.0, 2.0), (-1.0, 1.0)])
    >>> x.center, x.coeffs, y.coeffs
    (1.0, (1.0, 0.0), (0.0, 1.0))
    """
    forms = []
    for i, (lo, hi) in enumerate(bounds):
        coeffs = [0.0] * len(bounds)
        coeffs[i] = 0.5 * (hi - lo)
        forms.append(AffineForm(0.5 * (lo + hi), tuple(coeffs)))
    return tuple(forms)


def _linearize(
    a: AffineForm,
    value: Callable[[float], float],
    slope: Callable[[float], float],
    curvature: Callable[[Bounds], Bounds],
) -> AffineForm:
    c = a.center
    span = a.range()
    if not (math.isfinite(c) and math.isfinite(span[0]) and math.isfinite(span[1])):
        return AffineForm.unbounded()
    try:
        f0, s = value(c), slope(c)
    except OverflowError:
        return AffineForm.unbounded()
    deviation = operations.subtract(span, (c, c))
    taylor = operations.multiply(
        operations.multiply((0.5, 0.5), curvature(span)),
        operations.power(deviation, 2),
    )
    remainder = operations.add(operations.multiply((s, s), a.remainder), taylor)
    remainder = _widen(remainder, abs(f0) + abs(s) * (abs(c) + a.radius))
    return AffineForm(f0, tuple(s * v for v in a.coeffs), remainder)


def sin(a: AffineForm) -> AffineForm:
    return _linearize(a, math.sin, math.cos, lambda span: operations.negate(operations.sin(span)))


def cos(a: AffineForm) -> AffineForm:
    return _linearize(a, math.cos, lambda c: -math.sin(c), lambda span: operations.negate(operations.cos(span)))


def exp(a: AffineForm) -> AffineForm:
    return _linearize(a, math.exp, math.exp, operations.exp)


def reciprocal(a: AffineForm) -> AffineForm:
    """
    Form of 1 / a.

    Raises:
        IntervalDivisionByZeroError: If the range of ``a`` contains zero
    """
    span = a.range()
    if span[0] <= 0.0 <= span[1]:
        raise IntervalDivisionByZeroError(f"Denominator form ranges over [{span[0]}, {span[1]}], which contains zero")
    return _linearize(
        a,
        lambda c: 1.0 / c,
        lambda c: -1.0 / (c * c),
        lambda s: operations.divide((2.0, 2.0), operations.power(s, 3)),
    )
