"""Pursuit-evasion game solver on graphs."""

from ._core import (
    Belief,
    EvaderStageStrategy,
    GameInstance,
    Graph,
    ParseError,
    PursuerPosition,
    RolloutStats,
    SolveReport,
    condition_not_caught,
    expand_pursuer_moves,
    load_instance,
    oracle_value,
    parse_instance,
    rollout,
    solve,
    transform_belief,
)

__all__ = [
    "Belief",
    "EvaderStageStrategy",
    "GameInstance",
    "Graph",
    "ParseError",
    "PursuerPosition",
    "RolloutStats",
    "SolveReport",
    "condition_not_caught",
    "expand_pursuer_moves",
    "load_instance",
    "oracle_value",
    "parse_instance",
    "rollout",
    "solve",
    "transform_belief",
]

__version__ = "0.1.0"
