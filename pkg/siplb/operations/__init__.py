# siplb/operations/__init__.py

"""
Module: operations

This module contains the interval arithmetic primitives behind the natural
interval extension of expressions: addition, subtraction, multiplication,
division, integer powers, negation, and the sin, cos and exp enclosures.
Intervals are handled here as plain ``(lo, hi)`` float pairs; the validated
``Interval`` schema is only built at the public API boundary.

Every result is widened outward by a relative padding (default 1e-12 of the
bound's magnitude, at least 1e-12 absolute). No directed rounding is used;
the padding dominates the rounding error of a single floating operation.

Functions:
- add(a, b) -> Bounds: Enclosure of a + b.
- subtract(a, b) -> Bounds: Enclosure of a - b.
- negate(a) -> Bounds: Enclosure of -a (exact, no padding).
- multiply(a, b) -> Bounds: Enclosure of a * b.
- divide(a, b) -> Bounds: Enclosure of a / b. Raises IntervalDivisionByZeroError
  if b contains zero.
- power(a, n) -> Bounds: Enclosure of a ** n for an integer n >= 0, with
  even-power tightening.
- sin(a), cos(a) -> Bounds: Critical-point scan enclosures.
- exp(a) -> Bounds: Monotone enclosure.
"""

import math
from typing import Tuple

from siplb.core.config import get_settings
from siplb.core.exceptions import IntervalDivisionByZeroError

# An interval as a (lo, hi) pair of floats
Bounds = Tuple[float, float]

PADDING = get_settings().INTERVAL_PADDING
HALF_PI = math.pi / 2.0

# sin(k * pi/2) and cos(k * pi/2) for k mod 4
_SIN_AT_QUARTER = (0.0, 1.0, 0.0, -1.0)
_COS_AT_QUARTER = (1.0, 0.0, -1.0, 0.0)


def pad(lo: float, hi: float) -> Bounds:
    """
    Widen a pair of bounds outward by the relative padding.

    Parameters:
    - lo (float): Lower bound.
    - hi (float): Upper bound.

    Returns:
    - Bounds: ``(lo - p(lo), hi + p(hi))`` where ``p(v) = PADDING * max(1, |v|)``.
      Infinite bounds stay infinite; a NaN bound (from inf - inf) widens to
      the matching infinity.

    Example:
    >>> lo, hi = pad(0.0, 1.0)
    >>> lo < 0.0 < 1.0 < hi
    True
    """
    if math.isnan(lo):
        lo = -math.inf
    elif math.isfinite(lo):
        lo -= PADDING * max(1.0, abs(lo))
    if math.isnan(hi):
        hi = math.inf
    elif math.isfinite(hi):
        hi += PADDING * max(1.0, abs(hi))
    return (lo, hi)


def add(a: Bounds, b: Bounds) -> Bounds:
    """
    Enclose the sum of two intervals.

    Example:
    >>> lo, hi = add((1.0, 2.0), (3.0, 4.0))
    >>> round(lo, 6), round(hi, 6)
    (4.0, 6.0)
    """
    return pad(a[0] + b[0], a[1] + b[1])


def subtract(a: Bounds, b: Bounds) -> Bounds:
    """
    Enclose the difference a - b of two intervals.

    Example:
    >>> lo, hi = subtract((1.0, 2.0), (3.0, 4.0))
    >>> round(lo, 6), round(hi, 6)
    (-3.0, -1.0)
    """
    return pad(a[0] - b[1], a[1] - b[0])


def negate(a: Bounds) -> Bounds:
    # Sign flip is exact in floating point
    return (-a[1], -a[0])


def multiply(a: Bounds, b: Bounds) -> Bounds:
    """
    Enclose the product of two intervals.

    The extremes of a bilinear function over a box lie at its corners, so the
    four endpoint products bound the result.

    Example:
    >>> lo, hi = multiply((-1.0, 2.0), (3.0, 4.0))
    >>> round(lo, 6), round(hi, 6)
    (-4.0, 8.0)
    """
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    # inf * 0 yields nan; the finite products still bound the result there
    products = [p for p in products if not math.isnan(p)]
    if not products:
        return (-math.inf, math.inf)
    return pad(min(products), max(products))


def divide(a: Bounds, b: Bounds) -> Bounds:
    """
    Enclose the quotient a / b of two intervals.

    Parameters:
    - a (Bounds): The dividend enclosure.
    - b (Bounds): The divisor enclosure.

    Returns:
    - Bounds: Enclosure of all quotients.

    Raises:
    - IntervalDivisionByZeroError: If the divisor interval contains zero.
      Extended interval arithmetic is not supported; the caller is expected
      to split the enclosing box instead.

    Example:
    >>> lo, hi = divide((1.0, 2.0), (4.0, 8.0))
    >>> round(lo, 6), round(hi, 6)
    (0.125, 0.5)
    """
    if b[0] <= 0.0 <= b[1]:
        raise IntervalDivisionByZeroError(
            f"Denominator interval [{b[0]}, {b[1]}] contains zero"
        )
    reciprocal = pad(1.0 / b[1], 1.0 / b[0])
    return multiply(a, reciprocal)


def _pow(value: float, n: int) -> float:
    try:
        return value ** n
    except OverflowError:
        return math.inf if (value > 0 or n % 2 == 0) else -math.inf


def power(a: Bounds, n: int) -> Bounds:
    """
    Enclose a ** n for a non-negative integer exponent.

    Odd powers are monotone. Even powers are monotone on each half-line, so
    an interval straddling zero has lower bound zero; this is tighter than
    evaluating ``a * a``, which would give a negative lower bound.

    Example:
    >>> lo, hi = power((-1.0, 1.0), 2)
    >>> lo <= 0.0 and abs(lo) < 1e-9 and abs(hi - 1.0) < 1e-9
    True
    """
    if n == 0:
        return (1.0, 1.0)
    lo_n, hi_n = _pow(a[0], n), _pow(a[1], n)
    if n % 2 == 1:
        return pad(lo_n, hi_n)
    if a[0] >= 0.0:
        return pad(lo_n, hi_n)
    if a[1] <= 0.0:
        return pad(hi_n, lo_n)
    return pad(0.0, max(lo_n, hi_n))


def _periodic(a: Bounds, func, critical_values) -> Bounds:
    # Whole period covered, or unbounded input
    if not (math.isfinite(a[0]) and math.isfinite(a[1])) or a[1] - a[0] >= 2.0 * math.pi:
        return pad(-1.0, 1.0)
    values = [func(a[0]), func(a[1])]
    first = math.ceil(a[0] / HALF_PI)
    last = math.floor(a[1] / HALF_PI)
    for k in range(first, last + 1):
        values.append(critical_values[k % 4])
    lo, hi = pad(min(values), max(values))
    return (max(lo, -1.0 - PADDING), min(hi, 1.0 + PADDING))


def sin(a: Bounds) -> Bounds:
    """
    Enclose sin over an interval by scanning the endpoints and every
    multiple of pi/2 inside it.

    Example:
    >>> lo, hi = sin((0.0, math.pi))
    >>> lo <= 0.0 and hi >= 1.0
    True
    """
    return _periodic(a, math.sin, _SIN_AT_QUARTER)


def cos(a: Bounds) -> Bounds:
    """Enclose cos over an interval (same scan as ``sin``)."""
    return _periodic(a, math.cos, _COS_AT_QUARTER)


def _exp(value: float) -> float:
    try:
        return math.exp(value)
    except OverflowError:
        return math.inf


def exp(a: Bounds) -> Bounds:
    """
    Enclose exp over an interval; exp is increasing, so the endpoints suffice.

    Example:
    >>> lo, hi = exp((0.0, 1.0))
    >>> lo <= 1.0 and hi >= math.e
    True
    """
    lo, hi = pad(_exp(a[0]), _exp(a[1]))
    return (max(lo, 0.0), hi)
