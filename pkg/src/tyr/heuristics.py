"""Relaxed-plan heuristics evaluated on the semi-naive engine.

FF extracts a relaxed plan by backchaining from the goal atoms over first
achievers.  Goal atoms are processed in descending layer order, and
ascending atom order within a layer.  The heuristic value is the number of
distinct ground actions behind the chosen rule instances.  h_add and h_max
run a generalized Dijkstra over every rule instance the evaluation logged.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from tyr.atoms import GroundAtom
from tyr.compile import ActionProgram, RpgProgram, compile_rpg_program, decode_applicable, instance_action
from tyr.datalog.seminaive import EvaluationResult, seminaive_evaluate
from tyr.grounder import GroundRuleInstance
from tyr.model import GroundAction, State, is_goal
from tyr.parallel import Executor
from tyr.pddl import Task
from tyr.stats import PhaseBreakdown

DEAD_END = None


@dataclass(frozen=True)
class HeuristicResult:
    value: int | None
    relaxed_plan: frozenset[GroundAction] = frozenset()
    preferred: frozenset[GroundAction] = frozenset()
    layers: int = 0
    facts: int = 0

    @property
    def dead_end(self) -> bool:
        return self.value is None


def aggregate_cost(mode: str, costs: Sequence[int]) -> int:
    """Sum or max of body costs; the caller adds the unit cost of the rule's action."""
    if mode == "sum":
        return sum(costs)
    if mode == "max":
        return max(costs, default=0)
    raise ValueError(f"unknown aggregation mode {mode!r}")


def backchain(
    ev: EvaluationResult, rpg: RpgProgram, goals: Iterable[GroundAtom]
) -> list[GroundRuleInstance]:
    """Selected first-achiever instances, in extraction order."""
    rules = rpg.program.rules
    heap = []
    closed: set[GroundAtom] = set()
    for g in goals:
        if g not in closed and g in ev.achievers:
            closed.add(g)
            heapq.heappush(heap, (-ev.achievers[g][1], g))
    chosen = []
    while heap:
        _, atom = heapq.heappop(heap)
        inst, _ = ev.achievers[atom]
        chosen.append(inst)
        for a in rules[inst.rule_id].body_pos:
            b = a.ground(inst.binding)
            if b not in closed and b in ev.achievers:
                closed.add(b)
                heapq.heappush(heap, (-ev.achievers[b][1], b))
    return chosen


class RelaxedEvaluator:
    """Runs the RPG program for one state at a time and accumulates timings."""

    def __init__(
        self, task: Task | None, rpg: RpgProgram | None = None, executor: Executor | None = None
    ) -> None:
        if rpg is None:
            if task is None:
                raise ValueError("need a task or a compiled RPG program")
            rpg = compile_rpg_program(task)
        self.task = task
        self.rpg = rpg
        self.executor = executor if executor is not None else Executor()
        self.timings = PhaseBreakdown()
        self.rule_us: dict[int, float] = {}
        self.evaluations = 0

    def run(self, state: State, keep_instances: bool = False) -> EvaluationResult:
        ev = seminaive_evaluate(self.rpg.program, self.executor, state.atoms, keep_instances=keep_instances)
        self.timings.add(ev.breakdown)
        for rid, us in ev.rule_us.items():
            self.rule_us[rid] = self.rule_us.get(rid, 0.0) + us
        self.evaluations += 1
        return ev

    def static_goals_violated(self, state: State) -> bool:
        return any(a in state for a in self.rpg.static_negative_goals)


class FFHeuristic(RelaxedEvaluator):
    name = "ff"

    def evaluate(self, state: State, applicable: Iterable[GroundAction] | None = None) -> HeuristicResult:
        if self.static_goals_violated(state):
            return HeuristicResult(DEAD_END)
        if self.rpg.has_fluent_negative_goals:
            return HeuristicResult(0)
        if all(g in state for g in self.rpg.goal_atoms):
            return HeuristicResult(0)
        ev = self.run(state)
        model = ev.store
        if any(g not in model for g in self.rpg.goal_atoms):
            return HeuristicResult(DEAD_END, layers=_layers(ev), facts=len(model))
        chosen = backchain(ev, self.rpg, self.rpg.goal_atoms)
        plan = frozenset(instance_action(self.rpg, i) for i in chosen)
        app = set(applicable) if applicable is not None else set()
        return HeuristicResult(len(plan), plan, frozenset(plan & app), _layers(ev), len(model))


class CostHeuristic(RelaxedEvaluator):
    """h_add (``mode="sum"``) or h_max (``mode="max"``) with unit action costs."""

    def __init__(self, task: Task, mode: str, rpg: RpgProgram | None = None, executor: Executor | None = None):
        super().__init__(task, rpg, executor)
        aggregate_cost(mode, [])
        self.mode = mode
        self.name = "add" if mode == "sum" else "max"

    def evaluate(self, state: State, applicable: Iterable[GroundAction] | None = None) -> HeuristicResult:
        if self.static_goals_violated(state):
            return HeuristicResult(DEAD_END)
        if self.rpg.has_fluent_negative_goals:
            return HeuristicResult(0)
        ev = self.run(state, keep_instances=True)
        costs = relaxed_costs(ev.instances, self.rpg, state.atoms, self.mode)
        if any(g not in costs for g in self.rpg.goal_atoms):
            return HeuristicResult(DEAD_END, layers=_layers(ev), facts=len(ev.store))
        value = aggregate_cost(self.mode, [costs[g] for g in self.rpg.goal_atoms])
        return HeuristicResult(value, layers=_layers(ev), facts=len(ev.store))


def relaxed_costs(
    instances: Sequence[GroundRuleInstance], rpg: RpgProgram, state_atoms, mode: str
) -> dict[GroundAtom, int]:
    """Least fixpoint of ``cost(h) = min over instances (agg(body costs) + 1)``."""
    rules = rpg.program.rules
    cost: dict[GroundAtom, int] = {}
    heap: list[tuple[int, GroundAtom]] = [(0, a) for a in state_atoms]
    heapq.heapify(heap)
    waiting: dict[GroundAtom, list[int]] = {}
    remaining = []
    bodies = []
    for idx, inst in enumerate(instances):
        body = list(dict.fromkeys(a.ground(inst.binding) for a in rules[inst.rule_id].body_pos))
        bodies.append(body)
        remaining.append(len(body))
        for b in body:
            waiting.setdefault(b, []).append(idx)
        if not body:
            heapq.heappush(heap, (1, inst.head))
    while heap:
        c, atom = heapq.heappop(heap)
        if atom in cost:
            continue
        cost[atom] = c
        for idx in waiting.get(atom, ()):
            remaining[idx] -= 1
            if remaining[idx] == 0:
                inst = instances[idx]
                if inst.head not in cost:
                    h = aggregate_cost(mode, [cost[b] for b in bodies[idx]]) + 1
                    heapq.heappush(heap, (h, inst.head))
    return cost


class BlindHeuristic:
    name = "blind"

    def __init__(self, task: Task) -> None:
        self.task = task
        self.timings = PhaseBreakdown()
        self.rule_us: dict[int, float] = {}
        self.evaluations = 0

    def evaluate(self, state: State, applicable: Iterable[GroundAction] | None = None) -> HeuristicResult:
        self.evaluations += 1
        return HeuristicResult(0 if is_goal(state, self.task.goal) else 1)


def make_heuristic(name: str, task: Task, executor: Executor | None = None):
    if name == "ff":
        return FFHeuristic(task, executor=executor)
    if name == "add":
        return CostHeuristic(task, "sum", executor=executor)
    if name == "max":
        return CostHeuristic(task, "max", executor=executor)
    if name == "blind":
        return BlindHeuristic(task)
    raise ValueError(f"unknown heuristic {name!r}")


def applicable_actions(
    state: State, prog: ActionProgram, executor: Executor | None = None
) -> tuple[set[GroundAction], EvaluationResult]:
    ev = seminaive_evaluate(prog.program, executor, state.atoms)
    return decode_applicable(ev.instances, prog), ev


def evaluate_ff(
    state: State, rpg: RpgProgram, action_prog: ActionProgram, executor: Executor | None = None
) -> HeuristicResult:
    """One-shot FF evaluation including the applicable-action query for preferred actions."""
    app, _ = applicable_actions(state, action_prog, executor)
    return FFHeuristic(None, rpg, executor).evaluate(state, app)


def _layers(ev: EvaluationResult) -> int:
    return max((layer for _, layer in ev.achievers.values()), default=0)
