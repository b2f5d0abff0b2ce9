# tests/unit/test_oracles.py

import numpy as np
import pytest
from pydantic import ValidationError

from siplb.core.config import get_settings
from siplb.core.exceptions import BisectionFailureError, DimensionMismatchError, SubsolverError
from siplb.models.expression import substitute
from siplb.schemas.config import AlphaConfig, OptConfig
from siplb.schemas.domain import Discretization, PointVec
from siplb.schemas.instance import AffineMap, SipInstance
from siplb.schemas.results import CertifiedMin, MinStatus, OutcomeSource
from siplb.solvers.globalopt import grid_max
from siplb.solvers.oracles import (
    AlphaOracle,
    ExactOracle,
    LlpOracle,
    MAX_REFINEMENTS,
    ScriptedOracle,
    g_value,
)
from siplb.solvers.subproblems import llp_certified_max, solve_lbd
from tests.conftest import make_random_instance


# ---------------------------------------------
# Subproblems on the counterexample
# ---------------------------------------------

@pytest.mark.parametrize(
    "x_bar, expected",
    [(1.0, 3.0), (-0.5, 0.0), (-1.0, -1.0)],
    ids=["violated", "boundary", "strictly_feasible"]
)
def test_llp_certified_max(cex, x_bar, expected):
    result = llp_certified_max(cex, PointVec.of(x_bar))
    assert result.incumbent_value == pytest.approx(expected, abs=1e-9)
    assert result.upper_bound >= result.incumbent_value
    assert result.upper_bound <= expected + 1e-6


@pytest.mark.parametrize(
    "points, x_expected",
    [((), 1.0), ((1.0,), 0.5), ((1.0, 0.5), 0.25)],
    ids=["empty_discretization", "one_point", "two_points"]
)
def test_solve_lbd(cex, points, x_expected):
    """
    Each point y of the discretization adds x <= y / 2, so the minimizer of
    -x sits at half the smallest point.
    """
    d = Discretization(points=tuple(PointVec.of(p) for p in points))
    result = solve_lbd(cex, d)
    assert result.incumbent[0] == pytest.approx(x_expected, abs=1e-6)
    assert result.lower_bound <= -x_expected + 1e-9


def test_solve_lbd_dimension_mismatch(cex):
    d = Discretization(points=(PointVec.of(0.0, 0.0),))
    with pytest.raises(DimensionMismatchError):
        solve_lbd(cex, d)


# ---------------------------------------------
# ExactOracle
# ---------------------------------------------

@pytest.mark.parametrize(
    "x_bar, y_expected, g_expected",
    [(1.0, -1.0, 3.0), (0.0, -1.0, 1.0), (0.25, -1.0, 1.5)],
    ids=["x_at_one", "x_at_zero", "x_at_quarter"]
)
def test_exact_oracle_violation(cex, x_bar, y_expected, g_expected):
    outcome = ExactOracle().query(cex, PointVec.of(x_bar))
    assert not outcome.is_feasible
    assert outcome.y[0] == pytest.approx(y_expected, abs=1e-9)
    assert outcome.g_value == pytest.approx(g_expected, abs=1e-9)
    assert outcome.g_star_estimate == pytest.approx(g_expected, abs=1e-9)
    assert outcome.source == OutcomeSource.EXACT


@pytest.mark.parametrize("x_bar", [-0.5, -0.6, -1.0], ids=["boundary", "interior", "left_end"])
def test_exact_oracle_feasible(cex, x_bar):
    outcome = ExactOracle().query(cex, PointVec.of(x_bar))
    assert outcome.is_feasible
    assert outcome.certified_max <= 1e-6
    # g*(x_bar) = 2 * x_bar + 1
    assert outcome.certified_max >= 2.0 * x_bar + 1.0 - 1e-9


def test_exact_oracle_small_violation_is_reported(cex):
    """g* = 1e-7 lies below the default eps_feas but is decided at a tighter one."""
    outcome = ExactOracle().query(cex, PointVec.of(-0.49999995), eps_feas=1e-8)
    assert not outcome.is_feasible
    assert outcome.g_value > 0
    assert outcome.y[0] == pytest.approx(-1.0, abs=1e-6)


# ---------------------------------------------
# AlphaOracle
# ---------------------------------------------

@pytest.mark.parametrize(
    "x_bar, y_expected, g_expected",
    [(1.0, 0.5, 1.5), (0.25, -0.25, 0.75)],
    ids=["x_at_one", "x_at_quarter"]
)
def test_alpha_oracle_half(cex, x_bar, y_expected, g_expected):
    """
    With alpha = 1/2 the oracle returns the point of Y closest to the
    feasible side with g(x_bar, y) = g*(x_bar) / 2.
    """
    outcome = AlphaOracle(AlphaConfig(alpha=0.5)).query(cex, PointVec.of(x_bar))
    assert not outcome.is_feasible
    assert outcome.y[0] == pytest.approx(y_expected, abs=1e-9)
    assert outcome.g_value == pytest.approx(g_expected, abs=1e-9)
    assert outcome.g_value >= 0.5 * outcome.g_star_estimate
    assert outcome.source == OutcomeSource.ALPHA


def test_alpha_oracle_returns_anchor_corner(cex):
    # g(1, 1) = 1 already reaches 0.1 * g* = 0.3
    outcome = AlphaOracle(AlphaConfig(alpha=0.1)).query(cex, PointVec.of(1.0))
    assert outcome.y == PointVec.of(1.0)
    assert outcome.g_value == 1.0


def test_alpha_oracle_feasible(cex):
    outcome = AlphaOracle(AlphaConfig(alpha=0.5)).query(cex, PointVec.of(-0.6))
    assert outcome.is_feasible
    assert outcome.source == OutcomeSource.ALPHA


def test_alpha_oracle_bisection_failure(cex):
    oracle = AlphaOracle(AlphaConfig(alpha=0.5, max_bisections=1))
    with pytest.raises(BisectionFailureError):
        oracle.query(cex, PointVec.of(1.0))


def test_alpha_oracle_two_dimensional_y():
    inst = SipInstance.from_text("-x1", "x1 - y1 - y2", [(-1.0, 1.0)], [(-1.0, 1.0), (-1.0, 1.0)])
    outcome = AlphaOracle(AlphaConfig(alpha=0.5)).query(inst, PointVec.of(1.0))
    # g* = 3 at (-1, -1); the returned point sits on the level set g = 1.5
    assert outcome.g_value == pytest.approx(1.5, abs=1e-8)
    assert g_value(inst, PointVec.of(1.0), outcome.y) == outcome.g_value
    assert inst.y_box.contains(outcome.y)


# ---------------------------------------------
# ScriptedOracle
# ---------------------------------------------

@pytest.mark.parametrize(
    "x_bar, y_expected, g_expected",
    [(1.0, 1.0, 1.0), (0.5, 0.5, 0.5), (0.125, 0.125, 0.125)],
    ids=["x_at_one", "x_at_half", "x_at_eighth"]
)
def test_scripted_oracle_follows_identity(cex, x_bar, y_expected, g_expected):
    outcome = ScriptedOracle().query(cex, PointVec.of(x_bar))
    assert outcome.y == PointVec.of(y_expected)
    assert outcome.g_value == g_expected
    assert outcome.g_star_estimate is None
    assert outcome.source == OutcomeSource.SCRIPTED


def test_scripted_oracle_falls_back_when_feasible(cex):
    outcome = ScriptedOracle().query(cex, PointVec.of(-0.6))
    assert outcome.is_feasible
    assert outcome.source == OutcomeSource.EXACT


def test_scripted_oracle_falls_back_on_zero_value(cex):
    # y = 0 gives g(0, 0) = 0, not a violation; the exact oracle finds y = -1
    outcome = ScriptedOracle().query(cex, PointVec.of(0.0))
    assert outcome.y[0] == pytest.approx(-1.0, abs=1e-9)
    assert outcome.source == OutcomeSource.EXACT


def test_scripted_oracle_clamps_into_y(cex):
    oracle = ScriptedOracle(AffineMap.from_flat([3.0, 0.0], input_dim=1, output_dim=1))
    outcome = oracle.query(cex, PointVec.of(0.75))
    assert outcome.y == PointVec.of(1.0)
    assert outcome.source == OutcomeSource.SCRIPTED


def test_scripted_oracle_needs_matching_map():
    inst = SipInstance.from_text("-x1", "x1 - y1 - y2", [(-1.0, 1.0)], [(-1.0, 1.0), (-1.0, 1.0)])
    with pytest.raises(DimensionMismatchError):
        ScriptedOracle().query(inst, PointVec.of(1.0))
    with pytest.raises(DimensionMismatchError):
        ScriptedOracle(AffineMap.identity(1)).query(inst, PointVec.of(1.0))
    oracle = ScriptedOracle(AffineMap.from_flat([1.0, 1.0, 0.0, 0.0], input_dim=1, output_dim=2))
    assert oracle.query(inst, PointVec.of(1.0)).source == OutcomeSource.EXACT

# ---------------------------------------------
# Seeded sweeps over random instances
# ---------------------------------------------

SWEEP_ALPHAS = (0.1, 0.5, 0.9)


def violated_queries(count: int, m: int, per_instance: int = 5):
    """
    Seeded (instance, x_bar, grid maximum of g(x_bar, .)) triples whose grid
    maximum exceeds 1e-3, so g* is well above eps_feas.
    """
    rng = np.random.default_rng(1234 + m)
    queries = []
    for seed in range(200):
        sip = make_random_instance(seed, n=1, m=m)
        inst = sip.instance
        for x in rng.uniform(-1.0, 1.0, size=per_instance):
            x_bar = PointVec.of(float(x))
            g_at_x = substitute(inst.constraint, x=x_bar)
            g_grid = grid_max(g_at_x, inst.y_box, points_per_dim=1001, variables="y")
            if g_grid > 1e-3:
                queries.append((inst, x_bar, g_grid))
            if len(queries) == count:
                return queries
    raise AssertionError(f"only {len(queries)} violated queries in 200 instances")


def test_alpha_oracle_sweep():
    """
    On 100 seeded violated queries the returned point reaches alpha * g*,
    never exceeds g*, and stays within 10 value_tol of alpha * g* whenever
    the lowest corner of Y lies below that level.
    """
    worst_case_checked = 0
    for i, (inst, x_bar, g_grid) in enumerate(violated_queries(100, m=1)):
        acfg = AlphaConfig(alpha=SWEEP_ALPHAS[i % len(SWEEP_ALPHAS)])
        outcome = AlphaOracle(acfg).query(inst, x_bar)
        alpha, g_star = acfg.alpha, outcome.g_star_estimate

        assert not outcome.is_feasible
        assert outcome.g_value > 0
        assert g_value(inst, x_bar, outcome.y) == outcome.g_value
        assert inst.y_box.contains(outcome.y)
        assert outcome.g_value >= alpha * (g_star - 1e-9)
        assert outcome.g_value >= alpha * (g_grid - 1e-6 * max(1.0, g_grid)) - 1e-9
        assert outcome.g_value <= g_star + 1e-12

        lowest_corner = min(g_value(inst, x_bar, corner) for corner in inst.y_box.corners())
        if lowest_corner < alpha * g_star:
            worst_case_checked += 1
            assert outcome.g_value <= alpha * g_star + 10 * acfg.value_tol
    assert worst_case_checked > 0


@pytest.mark.parametrize("m", [1, 2], ids=["one_y", "two_y"])
def test_exact_oracle_matches_grid_maximum(m):
    for inst, x_bar, g_grid in violated_queries(10, m=m, per_instance=2):
        outcome = ExactOracle().query(inst, x_bar)
        assert not outcome.is_feasible
        assert outcome.g_value == g_value(inst, x_bar, outcome.y)
        assert outcome.g_value >= g_grid - 1e-3
        assert outcome.g_value <= g_grid + 1e-2


# ---------------------------------------------
# ExactOracle refinement budget
# ---------------------------------------------

class UndecidedLlp:
    """Stands in for llp_certified_max: the bound never drops below 1e-3."""

    def __init__(self, y: float):
        self.y = y
        self.eps_seen = []

    def __call__(self, inst, x_bar, cfg=None):
        self.eps_seen.append(cfg.eps_obj)
        value = g_value(inst, x_bar, PointVec.of(self.y))
        return CertifiedMin(
            incumbent=PointVec.of(self.y),
            incumbent_value=value,
            lower_bound=1e-3,
            status=MinStatus.SOLVED,
            nodes=1,
        )


def test_exact_oracle_refinement_stops_at_floor(cex, monkeypatch):
    """A value in (0, eps_feas] under an undecided bound is reported once eps_obj hits the floor."""
    llp = UndecidedLlp(y=-1.0)
    monkeypatch.setattr("siplb.solvers.oracles.llp_certified_max", llp)
    # g(x, -1) = 2x + 1 = 5e-7
    outcome = ExactOracle().query(cex, PointVec.of(-0.49999975))

    floor = get_settings().REFINE_EPS_OBJ_FLOOR
    assert not outcome.is_feasible
    assert outcome.g_value == pytest.approx(5e-7, rel=1e-6)
    assert llp.eps_seen[0] == OptConfig().eps_obj
    assert llp.eps_seen[-1] == floor
    assert min(llp.eps_seen) >= floor
    assert len(llp.eps_seen) <= MAX_REFINEMENTS
    assert llp.eps_seen == sorted(llp.eps_seen, reverse=True)


def test_exact_oracle_refinement_gives_up(cex, monkeypatch):
    llp = UndecidedLlp(y=-1.0)
    monkeypatch.setattr("siplb.solvers.oracles.llp_certified_max", llp)
    # g(-0.6, -1) = -0.2: nothing to report
    with pytest.raises(SubsolverError, match="eps_obj"):
        ExactOracle().query(cex, PointVec.of(-0.6))
    assert len(llp.eps_seen) <= MAX_REFINEMENTS


def test_exact_oracle_does_not_refine_below_floor(cex, monkeypatch):
    llp = UndecidedLlp(y=-1.0)
    monkeypatch.setattr("siplb.solvers.oracles.llp_certified_max", llp)
    floor = get_settings().REFINE_EPS_OBJ_FLOOR
    ExactOracle().query(cex, PointVec.of(-0.49999975), OptConfig(eps_obj=floor))
    assert llp.eps_seen == [floor]



# ---------------------------------------------
# Factory
# ---------------------------------------------

@pytest.mark.parametrize(
    "kind, kwargs, cls",
    [
        ("exact", {}, ExactOracle),
        ("alpha", {"alpha": 0.5}, AlphaOracle),
        ("Scripted", {}, ScriptedOracle),
    ],
    ids=["exact", "alpha", "scripted_case_insensitive"]
)
def test_create(kind, kwargs, cls):
    assert isinstance(LlpOracle.create(kind, **kwargs), cls)


@pytest.mark.parametrize(
    "kind, kwargs",
    [
        ("alpha", {}),
        ("alpha", {"alpha": 1.0}),
        ("alpha", {"alpha": 0.0}),
        ("oracle", {}),
    ],
    ids=["alpha_missing", "alpha_one", "alpha_zero", "unknown_kind"]
)
def test_create_invalid(kind, kwargs):
    # pydantic's ValidationError is a ValueError
    with pytest.raises(ValueError):
        LlpOracle.create(kind, **kwargs)


def test_alpha_config_bounds():
    with pytest.raises(ValidationError):
        AlphaConfig(alpha=-0.5)
