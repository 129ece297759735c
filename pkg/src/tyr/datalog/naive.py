"""Exhaustive-enumeration fixpoint, used as the test oracle for the semi-naive engine."""

from __future__ import annotations

from itertools import product
from typing import Iterator, Sequence

from tyr.atoms import GroundAtom
from tyr.datalog.program import CapExceededError, Rule, StratifiedProgram

DEFAULT_CAP = 10**7


def all_bindings(rule: Rule, objects: Sequence[int], cap: int = DEFAULT_CAP) -> Iterator[tuple[int, ...]]:
    if len(objects) ** rule.arity > cap:
        raise CapExceededError(
            f"rule {rule.name or rule.head}: {len(objects)}^{rule.arity} substitutions exceed cap {cap}"
        )
    return product(objects, repeat=rule.arity)


def applicable_instances(
    rule: Rule, facts: set[GroundAtom], objects: Sequence[int], cap: int = DEFAULT_CAP
) -> list[tuple[int, ...]]:
    return [b for b in all_bindings(rule, objects, cap) if rule.body_holds(b, facts)]


def naive_fixpoint(
    program: StratifiedProgram,
    universe: Sequence[int] | int | None = None,
    cap: int = DEFAULT_CAP,
) -> set[GroundAtom]:
    """Stratified least model by iterating the consequence operator per stratum."""
    if universe is None:
        objects: Sequence[int] = range(len(program.program.objects))
    elif isinstance(universe, int):
        objects = range(universe)
    else:
        objects = sorted(universe)
    rules = program.rules
    model = set(program.facts)
    for stratum in program.strata:
        while True:
            derived = set()
            for rid in stratum:
                r = rules[rid]
                for b in applicable_instances(r, model, objects, cap):
                    derived.add(r.head.ground(b))
            if derived <= model:
                break
            model |= derived
    return model
