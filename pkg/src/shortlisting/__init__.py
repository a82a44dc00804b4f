"""Approval-based shortlisting rules that select a variable number of winners."""

from .core import (
    Election,
    ParameterError,
    SortedScores,
    WinnerSet,
    approval_scores,
    feasible_winner_sets,
    is_degenerate,
    sort_scores,
)
from .rules import KSelector, PriorityOrder, RuleSpec, evaluate, parse_rule_spec

__all__ = [
    "Election",
    "KSelector",
    "ParameterError",
    "PriorityOrder",
    "RuleSpec",
    "SortedScores",
    "WinnerSet",
    "approval_scores",
    "evaluate",
    "feasible_winner_sets",
    "is_degenerate",
    "parse_rule_spec",
    "sort_scores",
]
