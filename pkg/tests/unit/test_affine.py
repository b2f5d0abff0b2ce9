# tests/unit/test_affine.py

import math

import pytest

from siplb.core.exceptions import IntervalDivisionByZeroError
from siplb.models import eval_affine, eval_interval, eval_point, parse
from siplb.operations import affine
from siplb.operations.affine import AffineForm, box_forms
from siplb.schemas.domain import BoxRegion, VarAssignment

pytestmark = pytest.mark.fast


def assert_encloses(result, expected, slack=1e-9):
    lo, hi = result
    assert lo <= expected[0] and hi >= expected[1], f"{result} does not enclose {expected}"
    assert expected[0] - lo <= slack and hi - expected[1] <= slack, f"{result} is loose around {expected}"


# ---------------------------------------------
# Forms of box variables and arithmetic
# ---------------------------------------------

def test_box_forms():
    x, y = box_forms([(0.0, 2.0), (-1.0, 1.0)])
    assert (x.center, x.coeffs, x.remainder) == (1.0, (1.0, 0.0), (0.0, 0.0))
    assert (y.center, y.coeffs) == (0.0, (0.0, 1.0))
    assert_encloses(x.range(), (0.0, 2.0))
    assert_encloses(y.range(), (-1.0, 1.0))


def test_repeated_variable_cancels():
    x, = box_forms([(0.0, 2.0)])
    lo, hi = (x - x).range()
    assert abs(lo) < 1e-10 and abs(hi) < 1e-10


def test_square_minus_linear_is_exact():
    """x^2 - 2x on [0, 2] has range [-1, 0]; the natural extension gives [-4, 4]."""
    x, = box_forms([(0.0, 2.0)])
    assert_encloses((x * x - x * 2.0).range(), (-1.0, 0.0))


def test_cross_term():
    x, y = box_forms([(-1.0, 1.0), (-1.0, 1.0)])
    assert_encloses((x * y).range(), (-1.0, 1.0))


def test_scalars_on_either_side():
    x, = box_forms([(1.0, 3.0)])
    assert_encloses((3.0 * x + 1.0).range(), (4.0, 10.0))
    assert_encloses((1.0 + x * 3.0).range(), (4.0, 10.0))


def test_power_zero_is_one():
    x, = box_forms([(-5.0, 5.0)])
    assert (x ** 0) == AffineForm.constant(1.0)


# ---------------------------------------------
# Linearized functions
# ---------------------------------------------

def test_reciprocal():
    x, = box_forms([(1.0, 2.0)])
    lo, hi = affine.reciprocal(x).range()
    assert lo <= 0.5 and hi >= 1.0
    assert hi - lo < 0.75


def test_reciprocal_through_zero():
    x, = box_forms([(-1.0, 1.0)])
    with pytest.raises(IntervalDivisionByZeroError):
        affine.reciprocal(x)
    with pytest.raises(IntervalDivisionByZeroError):
        AffineForm.constant(1.0) / x


@pytest.mark.parametrize(
    "func, exact",
    [
        (affine.sin, (math.sin(-0.1), math.sin(0.1))),
        (affine.cos, (math.cos(0.1), 1.0)),
        (affine.exp, (math.exp(-0.1), math.exp(0.1))),
    ],
    ids=["sin", "cos", "exp"]
)
def test_linearized_functions_enclose(func, exact):
    x, = box_forms([(-0.1, 0.1)])
    lo, hi = func(x).range()
    assert lo <= exact[0] and hi >= exact[1]
    # second-order remainder: (0.1)^2 / 2 times a curvature of at most about 1.1
    assert exact[0] - lo <= 0.01 and hi - exact[1] <= 0.01


def test_overflow_gives_unbounded_form():
    assert affine.exp(AffineForm.constant(1000.0)).range() == (-math.inf, math.inf)


# ---------------------------------------------
# Through expressions
# ---------------------------------------------

def test_eval_affine_is_tight_near_an_interior_minimum():
    """
    Around the minimizer (-2/3, -1/3) of x1^2 + x2^2 - x1*x2 + x1 the natural
    extension is off by about the box width; the affine form by its square.
    """
    f = parse("x1^2 + x2^2 - x1*x2 + x1")
    box = BoxRegion.from_bounds([(-0.67, -0.66), (-0.34, -0.33)])
    natural = eval_interval(f, box)
    form = eval_affine(f, box)
    center = eval_point(f, VarAssignment.of(x=[-0.665, -0.335]))

    assert natural.contains(center) and form.contains(center)
    assert natural.width > 1e-2
    assert form.width < 1e-3


def test_eval_affine_over_x_and_y():
    g = parse("2*x1 - y1 + y1")
    result = eval_affine(g, BoxRegion.from_bounds([(0.0, 1.0)]), BoxRegion.from_bounds([(-1.0, 1.0)]))
    assert_encloses((result.lo, result.hi), (0.0, 2.0))
