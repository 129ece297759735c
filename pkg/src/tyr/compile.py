"""Datalog programs for applicable actions and the delete-relaxed planning graph.

Both programs reuse the task's predicate and object ids.  Their fact sets
are left empty and bound to a state at query time with ``with_facts``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from tyr.atoms import Atom, GroundAtom, var
from tyr.datalog.program import Predicate, Program, Rule, StratifiedProgram, stratify
from tyr.grounder import GroundRuleInstance
from tyr.model import GroundAction
from tyr.pddl import Task

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ActionProgram:
    program: StratifiedProgram
    schema_of_rule: tuple[int, ...]
    head_predicates: tuple[int, ...]


@dataclass(frozen=True)
class RpgProgram:
    program: StratifiedProgram
    # rule id -> (schema id, index into the schema's add list)
    action_of_rule: tuple[tuple[int, int], ...]
    goal_atoms: tuple[GroundAtom, ...]
    static_negative_goals: tuple[GroundAtom, ...] = ()
    fluent_negative_goals: tuple[GroundAtom, ...] = ()
    # rule id -> non-static negative preconditions dropped by the relaxation
    dropped: tuple[tuple[Atom, ...], ...] = field(default=())

    @property
    def has_fluent_negative_goals(self) -> bool:
        return bool(self.fluent_negative_goals)


def _base_predicates(task: Task) -> list[Predicate]:
    return [Predicate(p.name, p.arity) for p in task.predicates]


def _fresh_name(name: str, taken: set[str]) -> str:
    cand, i = name, 1
    while cand in taken:
        i += 1
        cand = f"{name}-{i}"
    taken.add(cand)
    return cand


def compile_action_program(task: Task) -> ActionProgram:
    preds = _base_predicates(task)
    taken = {p.name for p in preds}
    rules = []
    heads = []
    for sid, s in enumerate(task.schemas):
        pid = len(preds)
        preds.append(Predicate(_fresh_name(f"{s.name}-applicable", taken), s.arity))
        heads.append(pid)
        head = Atom(pid, tuple(var(i) for i in range(s.arity)))
        rules.append(Rule(head, s.pre_pos, s.pre_neg, s.parameters, name=s.name))
    prog = Program(tuple(preds), task.objects, tuple(rules))
    return ActionProgram(stratify(prog), tuple(range(len(rules))), tuple(heads))


def decode_applicable(instances: Iterable[GroundRuleInstance], prog: ActionProgram) -> set[GroundAction]:
    return {GroundAction(prog.schema_of_rule[i.rule_id], i.binding) for i in instances}


def compile_rpg_program(task: Task) -> RpgProgram:
    preds = _base_predicates(task)
    rules = []
    action_of_rule = []
    dropped = []
    for sid, s in enumerate(task.schemas):
        keep_neg = tuple(a for a in s.pre_neg if task.is_static(a.predicate))
        lost = tuple(a for a in s.pre_neg if not task.is_static(a.predicate))
        for ei, eff in enumerate(s.add):
            rules.append(Rule(eff, s.pre_pos, keep_neg, s.parameters, name=f"{s.name}#{ei}"))
            action_of_rule.append((sid, ei))
            dropped.append(lost)
    goal_atoms = tuple(lit.atom for lit in task.goal if lit.positive)
    static_neg = tuple(lit.atom for lit in task.goal if not lit.positive and task.is_static(lit.atom.predicate))
    fluent_neg = tuple(lit.atom for lit in task.goal if not lit.positive and not task.is_static(lit.atom.predicate))
    if fluent_neg:
        log.warning("task %s has negative fluent goals; relaxed-plan heuristics fall back to 0", task.name)
    prog = Program(tuple(preds), task.objects, tuple(rules))
    return RpgProgram(
        stratify(prog), tuple(action_of_rule), goal_atoms, static_neg, fluent_neg, tuple(dropped)
    )


def instance_action(rpg: RpgProgram, inst: GroundRuleInstance) -> GroundAction:
    return GroundAction(rpg.action_of_rule[inst.rule_id][0], inst.binding)
