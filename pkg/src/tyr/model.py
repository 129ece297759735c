"""Ground semantics of a normalized task: states, applicability, progression."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, NamedTuple, Sequence

from tyr.atoms import GroundAtom, GroundLiteral
from tyr.datalog.naive import DEFAULT_CAP
from tyr.datalog.program import CapExceededError
from tyr.pddl import Task


class InapplicableActionError(ValueError):
    pass


class State:
    """Immutable set of ground atoms with a cached hash."""

    __slots__ = ("atoms", "_hash")

    def __init__(self, atoms: Iterable[GroundAtom] = ()) -> None:
        self.atoms = frozenset(atoms)
        self._hash = hash(self.atoms)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return isinstance(other, State) and self._hash == other._hash and self.atoms == other.atoms

    def __contains__(self, atom: GroundAtom) -> bool:
        return atom in self.atoms

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def sorted_atoms(self) -> list[GroundAtom]:
        return sorted(self.atoms)

    def __repr__(self) -> str:
        return f"State({self.sorted_atoms()})"


class GroundAction(NamedTuple):
    schema: int
    binding: tuple[int, ...]


def holds(state: State | frozenset, literal: GroundLiteral) -> bool:
    return (literal.atom in state) == literal.positive


def precondition(task: Task, action: GroundAction) -> list[GroundLiteral]:
    s = task.schemas[action.schema]
    return [lit.ground(action.binding) for lit in s.precondition]


def is_applicable(state: State, action: GroundAction, task: Task) -> bool:
    s = task.schemas[action.schema]
    if len(action.binding) != s.arity:
        raise ValueError(f"{s.name}: binding has {len(action.binding)} objects, expected {s.arity}")
    return all((lit.atom.ground(action.binding) in state) == lit.positive for lit in s.precondition)


def apply(state: State, action: GroundAction, task: Task) -> State:
    """Successor ``(s \\ del) ∪ add``; deletes are applied before adds."""
    if not is_applicable(state, action, task):
        raise InapplicableActionError(f"{format_action(task, action)} is not applicable")
    s = task.schemas[action.schema]
    b = action.binding
    atoms = set(state.atoms)
    atoms.difference_update(a.ground(b) for a in s.delete)
    atoms.update(a.ground(b) for a in s.add)
    return State(atoms)


def brute_force_applicable(state: State, task: Task, cap: int = DEFAULT_CAP) -> set[GroundAction]:
    """Exhaustive substitution enumeration (test oracle)."""
    n = len(task.objects)
    for s in task.schemas:
        if n ** s.arity > cap:
            raise CapExceededError(f"schema {s.name}: {n}^{s.arity} substitutions exceed cap {cap}")
    out = set()
    for sid, s in enumerate(task.schemas):
        for b in product(range(n), repeat=s.arity):
            a = GroundAction(sid, b)
            if is_applicable(state, a, task):
                out.add(a)
    return out


def is_goal(state: State, goal: Iterable[GroundLiteral]) -> bool:
    return all(holds(state, lit) for lit in goal)


def initial_state(task: Task) -> State:
    return State(task.init)


def format_action(task: Task, action: GroundAction) -> str:
    s = task.schemas[action.schema]
    return "(" + " ".join([s.name, *(task.objects[o] for o in action.binding)]) + ")"


def parse_action(task: Task, text: str) -> GroundAction:
    parts = text.strip().strip("()").lower().split()
    if not parts:
        raise ValueError("empty action")
    sid = task.schema_id(parts[0])
    return GroundAction(sid, tuple(task.object_id(o) for o in parts[1:]))


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    failed_step: int | None = None
    message: str = ""


def validate_plan(task: Task, plan: Sequence[GroundAction]) -> ValidationResult:
    """Sequential applicability from the initial state, then the goal test."""
    state = initial_state(task)
    for i, a in enumerate(plan):
        if not is_applicable(state, a, task):
            return ValidationResult(False, i, f"step {i}: {format_action(task, a)} is not applicable")
        state = apply(state, a, task)
    if not is_goal(state, task.goal):
        return ValidationResult(False, len(plan), "goal not satisfied after the last step")
    return ValidationResult(True)


def bfs_plan(task: Task, max_states: int = 200_000) -> list[GroundAction] | None:
    """Shortest plan by breadth-first search over brute-force successors (test oracle)."""
    s0 = initial_state(task)
    parent: dict[State, tuple[State, GroundAction] | None] = {s0: None}
    frontier = deque([s0])
    while frontier:
        s = frontier.popleft()
        if is_goal(s, task.goal):
            plan = []
            while parent[s] is not None:
                s, a = parent[s]  # type: ignore[misc]
                plan.append(a)
            return plan[::-1]
        for a in sorted(brute_force_applicable(s, task)):
            t = apply(s, a, task)
            if t not in parent:
                if len(parent) >= max_states:
                    raise CapExceededError(f"more than {max_states} states")
                parent[t] = (s, a)
                frontier.append(t)
    return None


def reachable_states(task: Task, max_states: int = 200_000) -> set[State]:
    s0 = initial_state(task)
    seen = {s0}
    frontier = deque([s0])
    while frontier:
        s = frontier.popleft()
        for a in brute_force_applicable(s, task):
            t = apply(s, a, task)
            if t not in seen:
                if len(seen) >= max_states:
                    raise CapExceededError(f"more than {max_states} states")
                seen.add(t)
                frontier.append(t)
    return seen
