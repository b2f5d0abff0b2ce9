# tests/conftest.py
import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import pytest

from siplb.core.log import configure_logging
from siplb.schemas.config import OptConfig, SipConfig
from siplb.schemas.domain import BoxRegion
from siplb.schemas.instance import SipInstance, builtin_counterexample

# ======================================================================================
# Logging Configuration
# ======================================================================================
configure_logging(logging.INFO)
logger = logging.getLogger(__name__)

# ======================================================================================
# Random Instance Generation
# ======================================================================================
RANDOM_SEEDS = list(range(20))

# x-grid of the brute-force reference: odd, so x = 0 is a grid point
REFERENCE_X_POINTS = 41
GRID_CHUNK_CELLS = 2_000_000


def _axes(box: BoxRegion, points_per_dim: int) -> List[np.ndarray]:
    """Flattened coordinates of a uniform grid including the box corners."""
    lines = [np.linspace(d.lo, d.hi, points_per_dim) for d in box.dims]
    return [axis.ravel() for axis in np.meshgrid(*lines, indexing="ij")]


@dataclass(frozen=True)
class RandomSip:
    """A seeded instance together with a bound on the curvature of g in y."""
    seed: int
    instance: SipInstance
    y_curvature: float

    def y_grid_points(self) -> int:
        return 1001 if self.instance.y_box.dim == 1 else 101

    def grid_margin(self, y_points: int) -> float:
        """
        Bound on g*(x) minus the maximum over the y-grid, for every x.

        A maximizer of g(x, .) over Y has zero gradient along the face of Y
        it lies on, and a grid point on that face within sqrt(m) * h / 2 of
        it, so a second-order expansion with the curvature bound applies.
        """
        y_box = self.instance.y_box
        h = max(d.width for d in y_box.dims) / (y_points - 1)
        return 0.5 * self.y_curvature * y_box.dim * (h / 2.0) ** 2

    def grid_optimum(self, x_points: int = REFERENCE_X_POINTS) -> float:
        """
        Brute-force SIP optimum: min f over the x-grid points whose y-grid
        maximum of g stays below -grid_margin.

        Every such point is SIP-feasible, so the result is an upper bound on f*.
        """
        inst = self.instance
        y_points = self.y_grid_points()
        margin = self.grid_margin(y_points)
        xs = _axes(inst.x_box, x_points)
        ys = [axis[None, :] for axis in _axes(inst.y_box, y_points)]
        total, width = xs[0].size, ys[0].size
        step = max(1, GRID_CHUNK_CELLS // width)

        best = math.inf
        for start in range(0, total, step):
            chunk = [axis[start:start + step] for axis in xs]
            size = chunk[0].size
            g = np.broadcast_to(inst.constraint.evaluate_grid([axis[:, None] for axis in chunk], ys), (size, width))
            feasible = g.max(axis=1) <= -margin
            if feasible.any():
                f = np.broadcast_to(np.asarray(inst.objective.evaluate_grid(chunk, []), dtype=float), (size,))
                best = min(best, float(f[feasible].min()))
        return best


def _coef(rng: np.random.Generator, scale: float = 1.0) -> float:
    # one decimal keeps the printed text short and exact to read back
    return round(float(rng.uniform(-scale, scale)), 1)


def _term(c: float, body: str) -> str:
    return f"({c!r}) * {body}" if body else f"({c!r})"


def make_random_instance(seed: int, n: Optional[int] = None, m: Optional[int] = None) -> RandomSip:
    """
    Random SIP with x in [-1, 1]^n and y in [-1, 1]^m (n, m in {1, 2}):

        f(x)    = cubic polynomial in x
        g(x, y) = p(x) + sum_j ((a_j + b_j * x_i) * y_j - s_j * y_j^2 + t_j * y_j^3)
                  + d * y1 * y2   (m = 2 only),   p quadratic, s_j in [0.5, 1.5]

    g has degree at most 3 and its maximum over Y may lie inside Y. The
    constant of p is chosen so that x = 0 is strictly feasible. Passing n or
    m fixes that dimension instead of drawing it.
    """
    rng = np.random.default_rng(seed)
    drawn_n, drawn_m = int(rng.integers(1, 3)), int(rng.integers(1, 3))
    n = n or drawn_n
    m = m or drawn_m

    f_terms = []
    for i in range(1, n + 1):
        for power in (1, 2, 3):
            f_terms.append(_term(_coef(rng), f"x{i}^{power}"))
    if n == 2:
        f_terms.append(_term(_coef(rng), "x1 * x2"))

    a = [_coef(rng) for _ in range(m)]
    b = [_coef(rng) for _ in range(m)]
    s = [round(float(rng.uniform(0.5, 1.5)), 1) for _ in range(m)]
    t = [_coef(rng, 0.5) for _ in range(m)]
    d = _coef(rng, 0.5) if m == 2 else 0.0
    slack = round(float(rng.uniform(0.1, 0.5)), 1)
    # sup over y of the y-part at x = 0 is at most sum |a_j| + sum |t_j| + |d|
    c0 = -(sum(abs(v) for v in a) + sum(abs(v) for v in t) + abs(d) + slack)
    g_terms = [_term(round(c0, 1), "")]
    for i in range(1, n + 1):
        g_terms.append(_term(_coef(rng), f"x{i}"))
        g_terms.append(_term(abs(_coef(rng)), f"x{i}^2"))
    for j in range(1, m + 1):
        i = 1 + (j - 1) % n
        g_terms.append(f"(({a[j - 1]!r}) + ({b[j - 1]!r}) * x{i}) * y{j}")
        g_terms.append(_term(-s[j - 1], f"y{j}^2"))
        g_terms.append(_term(t[j - 1], f"y{j}^3"))
    if m == 2:
        g_terms.append(_term(d, "y1 * y2"))

    instance = SipInstance.from_text(
        objective=" + ".join(f_terms),
        constraint=" + ".join(g_terms),
        x_bounds=[(-1.0, 1.0)] * n,
        y_bounds=[(-1.0, 1.0)] * m,
        name=f"random-{seed}",
    )
    curvature = max(2.0 * sj + 6.0 * abs(tj) for sj, tj in zip(s, t)) + abs(d)
    return RandomSip(seed=seed, instance=instance, y_curvature=curvature)


# ======================================================================================
# Fixtures
# ======================================================================================
@pytest.fixture
def cex() -> SipInstance:
    """inf -x s.t. 2x - y <= 0 for all y in [-1, 1]; f* = 1/2."""
    return builtin_counterexample()


@pytest.fixture
def opt_cfg() -> OptConfig:
    return OptConfig()


@pytest.fixture
def sip_cfg() -> SipConfig:
    return SipConfig()


@pytest.fixture
def loose_cfg() -> SipConfig:
    """Tolerances that keep random-instance runs quick."""
    return SipConfig(eps_feas=1e-4, max_iter=15, opt=OptConfig(eps_obj=1e-3, max_nodes=20_000))


@pytest.fixture(params=RANDOM_SEEDS, ids=[f"seed{s}" for s in RANDOM_SEEDS])
def random_sip(request) -> RandomSip:
    return make_random_instance(request.param)


# ======================================================================================
# Pytest Command-Line Options
# ======================================================================================
def pytest_addoption(parser):
    """
    Add custom command line options:
      --run-slow    : Run tests marked as 'slow'
    """
    parser.addoption("--run-slow", action="store_true", help="Run tests marked as slow")


def pytest_collection_modifyitems(config, items):
    """
    Skip tests marked as 'slow' unless --run-slow is specified.
    """
    if not config.getoption("--run-slow"):
        skip_slow = pytest.mark.skip(reason="use --run-slow to run")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)
