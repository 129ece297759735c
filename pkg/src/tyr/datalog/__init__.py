"""Datalog programs, stratification and evaluation."""

from tyr.datalog.naive import naive_fixpoint
from tyr.datalog.program import (
    DatalogError,
    NotStratifiableError,
    Predicate,
    Program,
    Rule,
    StratifiedProgram,
    UnsafeRuleError,
    dependency_graph,
    make_rule,
    stratify,
)
from tyr.datalog.seminaive import EvaluationResult, seminaive_evaluate
from tyr.datalog.store import FactStore
from tyr.datalog.text import format_program, parse_program

__all__ = [
    "DatalogError",
    "EvaluationResult",
    "FactStore",
    "NotStratifiableError",
    "Predicate",
    "Program",
    "Rule",
    "StratifiedProgram",
    "UnsafeRuleError",
    "dependency_graph",
    "format_program",
    "make_rule",
    "naive_fixpoint",
    "parse_program",
    "seminaive_evaluate",
    "stratify",
]
