"""Two-level fork-join execution of one semi-naive iteration.

Level 1 runs rule tasks concurrently, and level 2 splits a rule's Δ-edges
into round-robin slices.  Both levels are flattened into ``(rule, slice)``
work units that are submitted FIFO to a single pool of ``workers`` threads
(or forked processes).  Workers only read the frozen store and graphs and
write to private buffers.  The coordinator then merges the buffers in a
fixed order (rule id, then seed Δ-edge index), so no result depends on
scheduling.
"""

from __future__ import annotations

import heapq
import multiprocessing as mp
import time
from concurrent.futures import Executor as _PoolBase
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from tyr.atoms import GroundAtom
from tyr.datalog.program import Rule
from tyr.datalog.store import FactStore
from tyr.graph import ConsistencyGraph
from tyr.grounder import (
    GrounderStats,
    GroundRuleInstance,
    RecheckEntry,
    drain_recheck_queue,
    enumerate_from_seed,
    ground_rule_small_arity,
)

DEFAULT_THRESHOLD = 1024


class WorkerError(RuntimeError):
    pass


@dataclass(frozen=True)
class GroundingPolicy:
    threshold: int = DEFAULT_THRESHOLD
    workers_when_above: int = 1

    def __post_init__(self) -> None:
        if self.threshold < 0:
            raise ValueError("threshold must be >= 0")
        if self.workers_when_above < 1:
            raise ValueError("workers_when_above must be >= 1")

    def slices_for(self, count: int) -> int:
        return self.workers_when_above if count > self.threshold else 1


@dataclass(frozen=True)
class ExecutorConfig:
    workers: int = 1
    policy: GroundingPolicy = field(default_factory=GroundingPolicy)
    backend: str = "thread"

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.backend not in ("thread", "process"):
            raise ValueError(f"unknown backend {self.backend!r}")


@dataclass(frozen=True)
class RuleTask:
    rule_id: int
    slices: tuple[range, ...]


@dataclass(frozen=True)
class IterationPlan:
    stratum: int
    iteration: int
    tasks: tuple[RuleTask, ...]


def balance(
    counts: Mapping[int, int], config: ExecutorConfig, stratum: int = 0, iteration: int = 0
) -> IterationPlan:
    """One task per rule; Δ-edge ``e`` goes to slice ``e mod m``."""
    tasks = []
    for rid in sorted(counts):
        n = counts[rid]
        m = config.policy.slices_for(n)
        tasks.append(RuleTask(rid, tuple(range(s, n, m) for s in range(m))))
    return IterationPlan(stratum, iteration, tuple(tasks))


@dataclass
class RuleContext:
    """Per-rule evaluation state owned by the coordinator."""

    rule_id: int
    rule: Rule
    graph: ConsistencyGraph | None
    queue: list[RecheckEntry] = field(default_factory=list)
    fresh_all: bool = True
    # keep only the first instance per new head (callers that skip the instance log)
    heads_only: bool = False


@dataclass
class WorkerBuffer:
    rule_id: int
    slice_index: int
    entries: list[tuple[int, GroundRuleInstance]]
    rechecks: list[tuple[int, RecheckEntry]]
    surviving: list[RecheckEntry] | None
    stats: GrounderStats
    elapsed_us: float


@dataclass
class IterationTimings:
    parallel_us: float = 0.0
    sequential_us: float = 0.0
    slice0_us: float = 0.0
    extra_slices_us: float = 0.0

    def split(self) -> tuple[float, float]:
        """Parallel wall time divided into (inter, intra) by worker busy time."""
        busy = self.slice0_us + self.extra_slices_us
        if busy <= 0:
            return self.parallel_us, 0.0
        intra = self.parallel_us * self.extra_slices_us / busy
        return self.parallel_us - intra, intra


@dataclass
class MergeResult:
    new_facts: list[GroundAtom] = field(default_factory=list)
    instance_log: list[GroundRuleInstance] = field(default_factory=list)
    first_achievers: dict[GroundAtom, GroundRuleInstance] = field(default_factory=dict)
    queues: dict[int, list[RecheckEntry]] = field(default_factory=dict)
    stats: dict[int, GrounderStats] = field(default_factory=dict)
    rule_us: dict[int, float] = field(default_factory=dict)
    timings: IterationTimings = field(default_factory=IterationTimings)


def ground_unit(
    ctx: RuleContext, slice_index: int, seeds: range, store: FactStore, owner_pruning: bool = True
) -> WorkerBuffer:
    """Execute one (rule, slice) unit into a private buffer."""
    start = time.perf_counter()
    stats = GrounderStats()
    entries: list[tuple[int, GroundRuleInstance]] = []
    rechecks: list[tuple[int, RecheckEntry]] = []
    surviving = None
    try:
        if slice_index == 0:
            emitted, surviving = drain_recheck_queue(ctx.queue, store)
            entries.extend((-1, inst) for inst in emitted)
            if ctx.graph is None:
                out, queue = ground_rule_small_arity(ctx.rule, store, ctx.fresh_all, ctx.rule_id, stats)
                entries.extend((0, inst) for inst in out)
                rechecks.extend((0, e) for e in queue)
        if ctx.graph is not None:
            edges = ctx.graph.delta_edges
            for idx in seeds:
                out, queue = enumerate_from_seed(
                    ctx.graph, ctx.rule, edges[idx], store, ctx.rule_id, stats, owner_pruning
                )
                entries.extend((idx, inst) for inst in out)
                rechecks.extend((idx, e) for e in queue)
    except Exception as exc:
        raise WorkerError(
            f"grounding failed in rule {ctx.rule.name or ctx.rule_id} slice {slice_index}: {exc!r}"
        ) from exc
    if ctx.heads_only:
        entries = _first_per_head(entries, store)
    elapsed = (time.perf_counter() - start) * 1e6
    return WorkerBuffer(ctx.rule_id, slice_index, entries, rechecks, surviving, stats, elapsed)


def _first_per_head(
    entries: list[tuple[int, GroundRuleInstance]], store: FactStore
) -> list[tuple[int, GroundRuleInstance]]:
    # entries are in seed order, so the survivor is still the canonical first achiever
    seen: set[GroundAtom] = set()
    out = []
    for e in entries:
        h = e[1].head
        if h not in seen and h not in store:
            seen.add(h)
            out.append(e)
    return out


def merge(buffers: Sequence[WorkerBuffer], store: FactStore) -> MergeResult:
    """Sequential barrier merge in canonical (rule id, seed index) order."""
    res = MergeResult()
    by_rule: dict[int, list[WorkerBuffer]] = {}
    for b in buffers:
        by_rule.setdefault(b.rule_id, []).append(b)
    seen: set[GroundAtom] = set()
    for rid in sorted(by_rule):
        bufs = sorted(by_rule[rid], key=lambda b: b.slice_index)
        stats = GrounderStats()
        emitted: set[tuple[int, ...]] = set()
        for _, inst in heapq.merge(*(b.entries for b in bufs), key=lambda e: e[0]):
            # a drained entry and a fresh clique may coincide in one iteration
            if inst.binding in emitted:
                continue
            emitted.add(inst.binding)
            res.instance_log.append(inst)
            h = inst.head
            if h in seen or h in store:
                continue
            seen.add(h)
            res.new_facts.append(h)
            res.first_achievers[h] = inst
        queue: list[RecheckEntry] = []
        keys: set[tuple[int, ...]] = set()
        for b in bufs:
            if b.surviving is not None:
                for e in b.surviving:
                    keys.add(e.instance.binding)
                    queue.append(e)
        for _, e in heapq.merge(*(b.rechecks for b in bufs), key=lambda e: e[0]):
            if e.instance.binding not in keys:
                keys.add(e.instance.binding)
                queue.append(e)
        for b in bufs:
            stats.add(b.stats)
        stats.queue_length = len(queue)
        res.queues[rid] = queue
        res.stats[rid] = stats
        res.rule_us[rid] = sum(b.elapsed_us for b in bufs)
    return res


# Forked workers inherit the iteration's state through this global instead
# of pickling graphs and the store for every unit.
_SHARED: tuple | None = None


def _process_unit(index: int) -> WorkerBuffer:
    assert _SHARED is not None
    contexts, store, units, owner_pruning = _SHARED
    rid, s, seeds = units[index]
    return ground_unit(contexts[rid], s, seeds, store, owner_pruning)


class Executor:
    """Runs iteration plans; owns the worker pool (created lazily)."""

    def __init__(self, config: ExecutorConfig | None = None) -> None:
        self.config = config or ExecutorConfig()
        self._pool: _PoolBase | None = None

    def __enter__(self) -> "Executor":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def run_iteration(
        self,
        plan: IterationPlan,
        store: FactStore,
        contexts: Mapping[int, RuleContext],
        owner_pruning: bool = True,
    ) -> MergeResult:
        units = [(t.rule_id, s, seeds) for t in plan.tasks for s, seeds in enumerate(t.slices)]
        store.frozen = True
        start = time.perf_counter()
        try:
            buffers = self._run_units(units, store, contexts, owner_pruning)
        finally:
            store.frozen = False
        mid = time.perf_counter()
        res = merge(buffers, store)
        end = time.perf_counter()
        t = res.timings
        t.parallel_us = (mid - start) * 1e6
        t.sequential_us = (end - mid) * 1e6
        t.slice0_us = sum(b.elapsed_us for b in buffers if b.slice_index == 0)
        t.extra_slices_us = sum(b.elapsed_us for b in buffers if b.slice_index > 0)
        return res

    def _run_units(self, units, store, contexts, owner_pruning) -> list[WorkerBuffer]:
        n = self.config.workers
        if n == 1 or len(units) <= 1:
            return [ground_unit(contexts[r], s, seeds, store, owner_pruning) for r, s, seeds in units]
        if self.config.backend == "thread":
            if self._pool is None:
                self._pool = ThreadPoolExecutor(max_workers=n)
            return list(
                self._pool.map(
                    lambda u: ground_unit(contexts[u[0]], u[1], u[2], store, owner_pruning), units
                )
            )
        global _SHARED
        _SHARED = (contexts, store, units, owner_pruning)
        try:
            # fork per iteration so children see the current graphs and store
            with ProcessPoolExecutor(max_workers=n, mp_context=mp.get_context("fork")) as pool:
                return list(pool.map(_process_unit, range(len(units))))
        finally:
            _SHARED = None
