"""Lazy greedy best-first search with a boosted preferred-operator queue.

Successors are enqueued with their parent's heuristic value and evaluated
only when popped.  Whenever the best heuristic value seen so far improves,
the preferred queue receives 1000 units of credit.  Each expansion costs
one unit.  While credit remains, the preferred queue is popped first.
"""

from __future__ import annotations

import heapq
import math
import resource
import time
from dataclasses import dataclass, field

from tyr.compile import ActionProgram, compile_action_program, decode_applicable
from tyr.datalog.seminaive import seminaive_evaluate
from tyr.heuristics import HeuristicResult, make_heuristic
from tyr.model import GroundAction, State, apply, initial_state, is_goal, validate_plan
from tyr.parallel import Executor, ExecutorConfig
from tyr.pddl import Task
from tyr.stats import PhaseBreakdown, PhaseTimings

BOOST = 1000

SOLVED = "solved"
UNSOLVABLE = "unsolvable"
EXHAUSTED = "exhausted"


class ResourceLimitError(RuntimeError):
    pass


class TimeLimitError(ResourceLimitError):
    pass


class MemoryLimitError(ResourceLimitError):
    pass


class PlanValidationError(RuntimeError):
    pass


class DualOpenList:
    """Regular and preferred FIFO-tie-broken heaps plus the preferred credit."""

    def __init__(self) -> None:
        self.regular: list[tuple[int, int, int]] = []
        self.preferred: list[tuple[int, int, int]] = []
        self.credit = 0
        self._counter = 0

    def push(self, h: int, node: int, preferred: bool = False) -> None:
        entry = (h, self._counter, node)
        self._counter += 1
        heapq.heappush(self.regular, entry)
        if preferred:
            heapq.heappush(self.preferred, entry)

    def boost(self, event: str) -> None:
        if event == "h-improved":
            self.credit += BOOST
        elif event == "node-expanded":
            self.credit = max(self.credit - 1, 0)
        else:
            raise ValueError(f"unknown event {event!r}")

    def source(self) -> str | None:
        """Which queue the next pop draws from."""
        if self.credit > 0 and self.preferred:
            return "preferred"
        if self.regular:
            return "regular"
        if self.preferred:
            return "preferred"
        return None

    def pop(self) -> int:
        src = self.source()
        if src is None:
            raise IndexError("pop from empty open list")
        return heapq.heappop(self.preferred if src == "preferred" else self.regular)[2]

    def __bool__(self) -> bool:
        return bool(self.regular or self.preferred)

    def __len__(self) -> int:
        return len(self.regular) + len(self.preferred)


@dataclass
class SearchConfig:
    heuristic: str = "ff"
    executor: ExecutorConfig = field(default_factory=ExecutorConfig)
    time_limit: float | None = None
    memory_limit_mib: float | None = None
    max_expansions: int | None = None
    use_preferred: bool = True


@dataclass
class SearchResult:
    status: str
    plan: list[GroundAction] | None = None
    expansions: int = 0
    evaluations: int = 0
    generated: int = 0
    # heuristic value of every evaluated state, in evaluation order
    h_trace: list[int | None] = field(default_factory=list)
    timings: PhaseTimings = field(default_factory=PhaseTimings)

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


class SuccessorGenerator:
    """Applicable actions via the action program, with accumulated timings."""

    def __init__(self, task: Task, executor: Executor, prog: ActionProgram | None = None) -> None:
        self.task = task
        self.prog = prog if prog is not None else compile_action_program(task)
        self.executor = executor
        self.timings = PhaseBreakdown()
        self.rule_us: dict[int, float] = {}

    def applicable(self, state: State) -> list[GroundAction]:
        ev = seminaive_evaluate(self.prog.program, self.executor, state.atoms)
        self.timings.add(ev.breakdown)
        for rid, us in ev.rule_us.items():
            self.rule_us[rid] = self.rule_us.get(rid, 0.0) + us
        return sorted(decode_applicable(ev.instances, self.prog))

    def successors(self, state: State) -> list[tuple[GroundAction, State]]:
        return [(a, apply(state, a, self.task)) for a in self.applicable(state)]


def _rss_mib() -> float:
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0


def gbfs(task: Task, config: SearchConfig | None = None, observer=None) -> SearchResult:
    """Lazy GBFS.  ``observer(state, applicable, h)`` is called per evaluated state."""
    config = config or SearchConfig()
    start = time.perf_counter()
    with Executor(config.executor) as ex:
        succ = SuccessorGenerator(task, ex)
        heur = make_heuristic(config.heuristic, task, ex)
        res = SearchResult(EXHAUSTED)
        try:
            _search(task, config, succ, heur, res, start, observer)
        finally:
            t = res.timings
            t.total_us = (time.perf_counter() - start) * 1e6
            t.action = succ.timings
            t.ff = heur.timings
            n_action = len(succ.prog.program.rules)
            t.per_rule_us = [succ.rule_us.get(i, 0.0) for i in range(n_action)]
            if hasattr(heur, "rpg"):
                t.per_rule_us += [heur.rule_us.get(i, 0.0) for i in range(len(heur.rpg.program.rules))]
            t.expansions = res.expansions
            t.evaluations = res.evaluations
            t.plan_length = len(res.plan) if res.plan is not None else None
    return res


def _search(task, config, succ, heur, res: SearchResult, start: float, observer) -> None:
    s0 = initial_state(task)
    states: list[State] = [s0]
    ids: dict[State, int] = {s0: 0}
    parent: list[tuple[int, GroundAction] | None] = [None]
    expanded = bytearray(1)
    open_list = DualOpenList()
    open_list.push(0, 0)
    best = math.inf

    while open_list:
        if config.time_limit is not None and time.perf_counter() - start > config.time_limit:
            raise TimeLimitError(f"time limit of {config.time_limit}s reached")
        if config.memory_limit_mib is not None and _rss_mib() > config.memory_limit_mib:
            raise MemoryLimitError(f"memory limit of {config.memory_limit_mib} MiB reached")
        if config.max_expansions is not None and res.expansions >= config.max_expansions:
            return
        node = open_list.pop()
        if expanded[node]:
            continue
        expanded[node] = 1
        state = states[node]
        if is_goal(state, task.goal):
            plan = []
            cur = node
            while parent[cur] is not None:
                cur, a = parent[cur]  # type: ignore[misc]
                plan.append(a)
            plan.reverse()
            check = validate_plan(task, plan)
            if not check.valid:
                raise PlanValidationError(check.message)
            res.status = SOLVED
            res.plan = plan
            return
        applicable = succ.applicable(state)
        h: HeuristicResult = heur.evaluate(state, applicable)
        res.evaluations += 1
        res.h_trace.append(h.value)
        if observer is not None:
            observer(state, applicable, h)
        if h.dead_end:
            if node == 0:
                res.status = UNSOLVABLE
                return
            continue
        if h.value < best:
            if best != math.inf:
                open_list.boost("h-improved")
            best = h.value
        res.expansions += 1
        pref = h.preferred if config.use_preferred else frozenset()
        for a in applicable:
            t = apply(state, a, task)
            if t in ids:
                continue
            ids[t] = len(states)
            states.append(t)
            parent.append((node, a))
            expanded.append(0)
            res.generated += 1
            open_list.push(h.value, ids[t], a in pref)
        open_list.boost("node-expanded")
