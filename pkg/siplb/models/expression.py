# siplb/models/expression.py
"""
Expression Models Module

This module defines the abstract syntax tree of the small expression language
used for the objective f(x) and the semi-infinite constraint g(x, y).

It follows the same shape as a polymorphic model hierarchy:

1. Template Method - ``Expression`` declares the operations every node
   implements (point evaluation, grid evaluation, interval enclosure,
   affine enclosure, canonical printing, substitution).
2. Factory - ``Expression.create()`` builds the right node class from a
   node kind, which is what the parser uses.
3. Immutability - nodes are frozen dataclasses, so structural equality and
   hashing come for free and trees can be shared between threads.

Variables are named ``x<k>`` or ``y<k>`` with k >= 1. Constants are finite and
non-negative: a negative number is always ``Neg(Constant(c))``, which keeps
``parse(to_text(e)) == e`` exact.
"""

import math
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, Sequence, Tuple, Type

import numpy as np

from siplb import operations
from siplb.operations import affine
from siplb.core.exceptions import (
    DivisionByZeroError,
    EvaluationOverflowError,
    UnboundVariableError,
)
from siplb.operations import Bounds
from siplb.operations.affine import AffineForm
from siplb.schemas.domain import BoxRegion, Interval, PointVec, VarAssignment

VARIABLE_PATTERN = re.compile(r"^([xy])([1-9][0-9]*)$")

# (family, zero-based index)
VariableKey = Tuple[str, int]


class Expression(ABC):
    """
    Abstract base class for expression nodes.

    Subclasses implement the node operations. ``xs``/``ys`` are the
    coordinates bound to x1.. and y1.. respectively; for interval enclosure
    they are sequences of ``(lo, hi)`` pairs instead.
    """

    @abstractmethod
    def evaluate(self, xs: Sequence[float], ys: Sequence[float]) -> float:
        raise NotImplementedError

    @abstractmethod
    def evaluate_grid(self, xs: Sequence[np.ndarray], ys: Sequence[np.ndarray]):
        raise NotImplementedError

    @abstractmethod
    def enclose(self, xb: Sequence[Bounds], yb: Sequence[Bounds]) -> Bounds:
        raise NotImplementedError

    @abstractmethod
    def enclose_affine(self, xf: Sequence[AffineForm], yf: Sequence[AffineForm]) -> AffineForm:
        raise NotImplementedError

    @abstractmethod
    def to_text(self) -> str:
        raise NotImplementedError

    @abstractmethod
    def substitute(self, x: Optional[Sequence[float]], y: Optional[Sequence[float]]) -> "Expression":
        raise NotImplementedError

    @abstractmethod
    def variables(self) -> FrozenSet[VariableKey]:
        raise NotImplementedError

    @classmethod
    def create(cls, kind: str, *operands) -> "Expression":
        """
        Factory method to create expression nodes of the appropriate type.

        Args:
            kind: Node kind, e.g. "+", "sin", "const", "var"
            operands: Child expressions, or the payload for leaves

        Returns:
            An instance of the matching Expression subclass

        Raises:
            ValueError: If the kind is not supported
        """
        node_classes: Dict[str, Type[Expression]] = {
            "const": Constant,
            "var": Var,
            "neg": Neg,
            "+": Add,
            "-": Sub,
            "*": Mul,
            "/": Div,
            "^": PowInt,
            "sin": Sin,
            "cos": Cos,
            "exp": Exp,
        }
        node_class = node_classes.get(kind)
        if node_class is None:
            raise ValueError(f"Unsupported expression kind: {kind}")
        return node_class(*operands)

    def __str__(self) -> str:
        return self.to_text()


def constant_node(value: float) -> Expression:
    """Build the canonical node for a real number (sign carried by Neg)."""
    value = float(value)
    if value < 0:
        return Neg(Constant(-value))
    return Constant(value)


def _format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


@dataclass(frozen=True)
class Constant(Expression):
    value: float

    def __post_init__(self):
        value = float(self.value)
        if not math.isfinite(value) or value < 0:
            raise ValueError(f"Constant must be finite and non-negative, got {self.value}")
        # normalises -0.0 as well
        object.__setattr__(self, "value", value + 0.0)

    def evaluate(self, xs, ys) -> float:
        return self.value

    def evaluate_grid(self, xs, ys):
        return self.value

    def enclose(self, xb, yb) -> Bounds:
        return (self.value, self.value)

    def enclose_affine(self, xf, yf) -> AffineForm:
        return AffineForm.constant(self.value)

    def to_text(self) -> str:
        return _format_number(self.value)

    def substitute(self, x, y) -> Expression:
        return self

    def variables(self) -> FrozenSet[VariableKey]:
        return frozenset()


@dataclass(frozen=True)
class Var(Expression):
    name: str
    family: str = field(init=False, compare=False, repr=False)
    index: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        match = VARIABLE_PATTERN.match(self.name)
        if match is None:
            raise ValueError(f"Invalid variable name '{self.name}' (expected x<k> or y<k>, k >= 1)")
        object.__setattr__(self, "family", match.group(1))
        object.__setattr__(self, "index", int(match.group(2)) - 1)

    def _pick(self, xs, ys):
        values = xs if self.family == "x" else ys
        if values is None or self.index >= len(values):
            raise UnboundVariableError(self.name)
        return values[self.index]

    def evaluate(self, xs, ys) -> float:
        return self._pick(xs, ys)

    def evaluate_grid(self, xs, ys):
        return self._pick(xs, ys)

    def enclose(self, xb, yb) -> Bounds:
        return self._pick(xb, yb)

    def enclose_affine(self, xf, yf) -> AffineForm:
        return self._pick(xf, yf)

    def to_text(self) -> str:
        return self.name

    def substitute(self, x, y) -> Expression:
        values = x if self.family == "x" else y
        if values is None:
            return self
        if self.index >= len(values):
            raise UnboundVariableError(self.name)
        return constant_node(values[self.index])

    def variables(self) -> FrozenSet[VariableKey]:
        return frozenset({(self.family, self.index)})


@dataclass(frozen=True)
class Neg(Expression):
    operand: Expression

    def evaluate(self, xs, ys) -> float:
        return -self.operand.evaluate(xs, ys)

    def evaluate_grid(self, xs, ys):
        return -self.operand.evaluate_grid(xs, ys)

    def enclose(self, xb, yb) -> Bounds:
        return operations.negate(self.operand.enclose(xb, yb))

    def enclose_affine(self, xf, yf) -> AffineForm:
        return -self.operand.enclose_affine(xf, yf)

    def to_text(self) -> str:
        return f"(-{self.operand.to_text()})"

    def substitute(self, x, y) -> Expression:
        return Neg(self.operand.substitute(x, y))

    def variables(self) -> FrozenSet[VariableKey]:
        return self.operand.variables()


@dataclass(frozen=True)
class BinaryOp(Expression):
    """Shared behaviour of the four arithmetic operators."""
    left: Expression
    right: Expression

    symbol = "?"

    @abstractmethod
    def apply(self, a, b):
        raise NotImplementedError

    @abstractmethod
    def apply_bounds(self, a: Bounds, b: Bounds) -> Bounds:
        raise NotImplementedError

    def evaluate(self, xs, ys) -> float:
        return self.apply(self.left.evaluate(xs, ys), self.right.evaluate(xs, ys))

    def evaluate_grid(self, xs, ys):
        return self.apply(self.left.evaluate_grid(xs, ys), self.right.evaluate_grid(xs, ys))

    def enclose(self, xb, yb) -> Bounds:
        return self.apply_bounds(self.left.enclose(xb, yb), self.right.enclose(xb, yb))

    def enclose_affine(self, xf, yf) -> AffineForm:
        return self.apply(self.left.enclose_affine(xf, yf), self.right.enclose_affine(xf, yf))

    def to_text(self) -> str:
        return f"({self.left.to_text()} {self.symbol} {self.right.to_text()})"

    def substitute(self, x, y) -> Expression:
        return type(self)(self.left.substitute(x, y), self.right.substitute(x, y))

    def variables(self) -> FrozenSet[VariableKey]:
        return self.left.variables() | self.right.variables()


@dataclass(frozen=True)
class Add(BinaryOp):
    symbol = "+"

    def apply(self, a, b):
        return a + b

    def apply_bounds(self, a, b):
        return operations.add(a, b)


@dataclass(frozen=True)
class Sub(BinaryOp):
    symbol = "-"

    def apply(self, a, b):
        return a - b

    def apply_bounds(self, a, b):
        return operations.subtract(a, b)


@dataclass(frozen=True)
class Mul(BinaryOp):
    symbol = "*"

    def apply(self, a, b):
        return a * b

    def apply_bounds(self, a, b):
        return operations.multiply(a, b)


@dataclass(frozen=True)
class Div(BinaryOp):
    symbol = "/"

    def apply(self, a, b):
        zero = np.any(b == 0) if isinstance(b, np.ndarray) else b == 0
        if zero:
            raise DivisionByZeroError(f"Division by zero in {self.to_text()}")
        return a / b

    def apply_bounds(self, a, b):
        return operations.divide(a, b)

    def enclose_affine(self, xf, yf) -> AffineForm:
        return self.left.enclose_affine(xf, yf) / self.right.enclose_affine(xf, yf)


@dataclass(frozen=True)
class PowInt(Expression):
    base: Expression
    exponent: int

    def __post_init__(self):
        if isinstance(self.exponent, bool) or not isinstance(self.exponent, int) or self.exponent < 0:
            raise ValueError(f"Exponent must be a non-negative integer, got {self.exponent!r}")

    def evaluate(self, xs, ys) -> float:
        try:
            return float(self.base.evaluate(xs, ys)) ** self.exponent
        except OverflowError as exc:
            raise EvaluationOverflowError(f"Overflow in {self.to_text()}") from exc

    def evaluate_grid(self, xs, ys):
        return np.power(self.base.evaluate_grid(xs, ys), self.exponent)

    def enclose(self, xb, yb) -> Bounds:
        return operations.power(self.base.enclose(xb, yb), self.exponent)

    def enclose_affine(self, xf, yf) -> AffineForm:
        return self.base.enclose_affine(xf, yf) ** self.exponent

    def to_text(self) -> str:
        return f"({self.base.to_text()} ^ {self.exponent})"

    def substitute(self, x, y) -> Expression:
        return PowInt(self.base.substitute(x, y), self.exponent)

    def variables(self) -> FrozenSet[VariableKey]:
        return self.base.variables()


@dataclass(frozen=True)
class UnaryFunction(Expression):
    """Shared behaviour of sin, cos and exp."""
    argument: Expression

    name = "?"

    @abstractmethod
    def apply(self, value: float) -> float:
        raise NotImplementedError

    @abstractmethod
    def apply_grid(self, values):
        raise NotImplementedError

    @abstractmethod
    def apply_bounds(self, a: Bounds) -> Bounds:
        raise NotImplementedError

    @abstractmethod
    def apply_form(self, a: AffineForm) -> AffineForm:
        raise NotImplementedError

    def evaluate(self, xs, ys) -> float:
        return self.apply(self.argument.evaluate(xs, ys))

    def evaluate_grid(self, xs, ys):
        return self.apply_grid(self.argument.evaluate_grid(xs, ys))

    def enclose(self, xb, yb) -> Bounds:
        return self.apply_bounds(self.argument.enclose(xb, yb))

    def enclose_affine(self, xf, yf) -> AffineForm:
        return self.apply_form(self.argument.enclose_affine(xf, yf))

    def to_text(self) -> str:
        return f"{self.name}({self.argument.to_text()})"

    def substitute(self, x, y) -> Expression:
        return type(self)(self.argument.substitute(x, y))

    def variables(self) -> FrozenSet[VariableKey]:
        return self.argument.variables()


@dataclass(frozen=True)
class Sin(UnaryFunction):
    name = "sin"

    def apply(self, value):
        return math.sin(value)

    def apply_grid(self, values):
        return np.sin(values)

    def apply_bounds(self, a):
        return operations.sin(a)

    def apply_form(self, a):
        return affine.sin(a)


@dataclass(frozen=True)
class Cos(UnaryFunction):
    name = "cos"

    def apply(self, value):
        return math.cos(value)

    def apply_grid(self, values):
        return np.cos(values)

    def apply_bounds(self, a):
        return operations.cos(a)

    def apply_form(self, a):
        return affine.cos(a)


@dataclass(frozen=True)
class Exp(UnaryFunction):
    name = "exp"

    def apply(self, value):
        try:
            return math.exp(value)
        except OverflowError as exc:
            raise EvaluationOverflowError(f"Overflow in {self.to_text()}") from exc

    def apply_grid(self, values):
        with np.errstate(over="ignore"):
            return np.exp(values)

    def apply_bounds(self, a):
        return operations.exp(a)

    def apply_form(self, a):
        return affine.exp(a)


FUNCTIONS: Dict[str, Type[UnaryFunction]] = {"sin": Sin, "cos": Cos, "exp": Exp}


# ------------------------------------------------------------------------------
# Public evaluation API
# ------------------------------------------------------------------------------
def eval_point(e: Expression, a: VarAssignment) -> float:
    """
    Evaluate an expression exactly (in floating point) at a point.

    Raises:
        UnboundVariableError: If a referenced variable has no value
        DivisionByZeroError: If a denominator evaluates to zero
        EvaluationOverflowError: If the result is not a finite real
    """
    value = float(e.evaluate(a.x.coords, a.y.coords))
    if not math.isfinite(value):
        raise EvaluationOverflowError(f"Non-finite value {value} for {e.to_text()}")
    return value


def eval_interval(e: Expression, x_box: Optional[BoxRegion], y_box: Optional[BoxRegion] = None) -> Interval:
    """
    Natural interval extension of an expression over a pair of boxes.

    Every point evaluation over the boxes lies inside the returned interval.

    Raises:
        UnboundVariableError: If a referenced variable is not covered
        IntervalDivisionByZeroError: If a denominator enclosure contains zero
    """
    xb = x_box.bounds if x_box is not None else ()
    yb = y_box.bounds if y_box is not None else ()
    return Interval.from_bounds(e.enclose(xb, yb))


def eval_affine(e: Expression, x_box: Optional[BoxRegion], y_box: Optional[BoxRegion] = None) -> Interval:
    """
    Affine-form enclosure over a pair of boxes.

    As sound as ``eval_interval``; repeated variables stay correlated, so it
    is usually tighter on small boxes (``x1 - x1`` encloses to about [0, 0]).

    Raises:
        UnboundVariableError: If a referenced variable is not covered
        IntervalDivisionByZeroError: If a denominator form ranges over zero
    """
    xb = x_box.bounds if x_box is not None else ()
    yb = y_box.bounds if y_box is not None else ()
    forms = affine.box_forms(tuple(xb) + tuple(yb))
    return Interval.from_bounds(e.enclose_affine(forms[:len(xb)], forms[len(xb):]).range())


def to_text(e: Expression) -> str:
    """Canonical fully parenthesised text; ``parse(to_text(e)) == e``."""
    return e.to_text()


def substitute(e: Expression, x: Optional[PointVec] = None, y: Optional[PointVec] = None) -> Expression:
    """Replace x- and/or y-variables by constants."""
    return e.substitute(
        x.coords if x is not None else None,
        y.coords if y is not None else None,
    )


def variables(e: Expression) -> FrozenSet[VariableKey]:
    return e.variables()
