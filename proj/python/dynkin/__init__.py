"""Solver for two-player stopping games on finite Markov chains."""

import json as _json

from ._core import (  # noqa: F401
    EmpiricalEstimate,
    EquilibriumReport,
    Game,
    GameClass,
    GameParseError,
    GameSchemaError,
    GameValidationError,
    MedConditionError,
    PreconditionError,
    PureDiagnostics,
    RunReport,
    best_response,
    estimate_payoffs,
    evaluate_payoffs,
    med,
    med_value_iteration,
    optimal_stopping_value,
    report_json,
    shapley_value,
    solve,
    verify,
    war_of_attrition,
)


def game_from_dict(spec):
    """Build a Game from a plain dict matching the game file schema."""
    return Game.from_json(_json.dumps(spec))


__all__ = [
    "EmpiricalEstimate",
    "EquilibriumReport",
    "Game",
    "GameClass",
    "GameParseError",
    "GameSchemaError",
    "GameValidationError",
    "MedConditionError",
    "PreconditionError",
    "PureDiagnostics",
    "RunReport",
    "best_response",
    "estimate_payoffs",
    "evaluate_payoffs",
    "game_from_dict",
    "med",
    "med_value_iteration",
    "optimal_stopping_value",
    "report_json",
    "shapley_value",
    "solve",
    "verify",
    "war_of_attrition",
]
