"""End-to-end smoke tests for the pegs python module."""

import math
import os

import pytest

import pegs


def triangle_instance():
    graph = pegs.Graph(3, [(0, 1), (0, 2), (1, 2)], True, [0, 1, 2])
    return pegs.GameInstance(
        graph, 1, 0.9, pegs.PursuerPosition([0]), pegs.Belief.uniform([1, 2], 3)
    )


def test_load_instance_from_repo():
    src = os.environ.get("PEGS_SRC")
    if src is None:
        pytest.skip("PEGS_SRC not set")
    inst = pegs.load_instance(os.path.join(src, "instances", "triangle.json"))
    assert inst.graph.vertex_count == 3
    assert inst.initial_belief[0] == 0.0


def test_parse_rejects_bad_documents():
    with pytest.raises(ValueError):
        pegs.parse_instance("{not json")


def test_belief_and_moves():
    inst = triangle_instance()
    moves = pegs.expand_pursuer_moves(inst.graph, inst.initial_position)
    assert len(moves) == 3
    conditioned = pegs.condition_not_caught(
        pegs.Belief([0.2, 0.3, 0.5]), pegs.PursuerPosition([0])
    )
    assert conditioned[1] == pytest.approx(0.375)
    pushed = pegs.transform_belief(
        inst.graph,
        pegs.Belief([0.0, 0.5, 0.5]),
        pegs.EvaderStageStrategy.uniform(inst.graph),
        pegs.PursuerPosition([0]),
    )
    assert sum(pushed.mass) == pytest.approx(1.0)


def test_solve_reaches_the_triangle_fixed_point():
    inst = triangle_instance()
    report = pegs.solve(inst, eps=1e-3)
    assert report.converged
    value = report.value_at(inst.initial_position, inst.initial_belief)
    assert abs(value - 0.75) <= 1e-3
    # residual trace contracts
    for prev, cur in zip(report.residuals, report.residuals[1:]):
        assert cur <= 0.9 * prev + 1e-7


def test_oracle_matches_one_step_value():
    inst = triangle_instance()
    assert pegs.oracle_value(inst, 1, inst.initial_belief) == pytest.approx(0.3)


def test_rollout_consistency():
    inst = triangle_instance()
    report = pegs.solve(inst, eps=1e-3)
    stats = pegs.rollout(inst, report, episodes=20000, seed=123)
    value = report.value_at(inst.initial_position, inst.initial_belief)
    slack = 3.0 * stats.std_error + 1e-4 + 1e-3
    assert abs(stats.mean - value) <= slack
    assert stats.episodes == 20000
    assert not math.isnan(stats.std_error)
