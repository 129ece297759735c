"""Δ-edge-anchored k-clique enumeration over consistency graphs.

Every clique of a rule's graph whose body intersects Δ contains at least
one Δ-edge.  Each such clique is reported only from its owner, the
minimum-rank Δ-edge it contains.  Candidates that would add a Δ-edge ranking
below the seed are pruned during the search itself, so no clique is ever
built twice.  Literals over three or more variables are not encoded in the
graph.  They are checked per binding: a failing negative rejects the binding
for good (facts only grow), while a failing positive sends it to the recheck
queue.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterable, Iterator, NamedTuple, Sequence

from tyr.atoms import GroundAtom, Projection
from tyr.datalog.program import Rule
from tyr.datalog.store import FactStore
from tyr.graph import ConsistencyGraph, DeltaEdge, iter_bits


class GroundRuleInstance(NamedTuple):
    rule_id: int
    binding: tuple[int, ...]
    head: GroundAtom


class RecheckEntry(NamedTuple):
    instance: GroundRuleInstance
    pending: tuple[GroundAtom, ...]


@dataclass
class GrounderStats:
    seeds: int = 0
    emitted: int = 0
    owner_rejected: int = 0
    high_rejected: int = 0
    requeued: int = 0
    queue_length: int = 0

    def add(self, other: "GrounderStats") -> None:
        for f in fields(self):
            if f.name != "queue_length":
                setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def pivot_select(candidates: dict[int, int]) -> int | None:
    """Unchosen partition with the fewest candidates, lowest index on ties.

    ``None`` signals that some candidate set is empty and the branch is dead.
    """
    best, best_size = None, 0
    for p in sorted(candidates):
        size = candidates[p].bit_count()
        if size == 0:
            return None
        if best is None or size < best_size:
            best, best_size = p, size
    return best


def _pair_rank(p: int, q: int) -> tuple[int, int]:
    return (p, q) if p < q else (q, p)


class _Search:
    __slots__ = ("graph", "seed_pair", "prune", "chosen")

    def __init__(self, graph: ConsistencyGraph, seed: DeltaEdge, prune: bool) -> None:
        self.graph = graph
        self.seed_pair = (seed.i, seed.j)
        self.prune = prune
        self.chosen = [-1] * graph.k
        self.chosen[seed.i] = seed.a
        self.chosen[seed.j] = seed.b

    def restrict(self, q: int, oq: int, p: int, mask: int) -> int:
        mask &= self.graph.adjacent(q, oq, p)
        if self.prune and _pair_rank(q, p) < self.seed_pair:
            mask &= ~self.graph.delta_adjacent(q, oq, p)
        return mask

    def cliques(self) -> Iterator[tuple[int, ...]]:
        g = self.graph
        cands: dict[int, int] = {}
        for p in range(g.k):
            if self.chosen[p] < 0:
                m = g.full
                for q in (self.seed_pair[0], self.seed_pair[1]):
                    m = self.restrict(q, self.chosen[q], p, m)
                cands[p] = m
        yield from self._extend(cands)

    def _extend(self, cands: dict[int, int]) -> Iterator[tuple[int, ...]]:
        if not cands:
            yield tuple(self.chosen)
            return
        p = pivot_select(cands)
        if p is None:
            return
        for o in iter_bits(cands[p]):
            nxt = {}
            for q, m in cands.items():
                if q == p:
                    continue
                m = self.restrict(p, o, q, m)
                if not m:
                    break
                nxt[q] = m
            else:
                self.chosen[p] = o
                yield from self._extend(nxt)
        self.chosen[p] = -1


def clique_owner(graph: ConsistencyGraph, binding: Sequence[int]) -> DeltaEdge | None:
    """Minimum-rank Δ-edge inside the clique described by ``binding``."""
    k = len(binding)
    for i in range(k):
        for j in range(i + 1, k):
            if graph.is_delta_edge(i, binding[i], j, binding[j]):
                return DeltaEdge(i, binding[i], j, binding[j])
    return None


def check_high_arity(
    rule: Rule, binding: Sequence[int], facts: FactStore
) -> tuple[bool, tuple[GroundAtom, ...]]:
    """``(rejected, pending)`` for the literals over three or more variables."""
    pending = []
    for lit in rule.high_lits:
        g = lit.atom.ground(binding)
        if lit.positive:
            if g not in facts:
                pending.append(g)
        elif g in facts:
            return True, ()
    return False, tuple(pending)


def _finish(
    rule_id: int,
    rule: Rule,
    binding: tuple[int, ...],
    facts: FactStore,
    stats: GrounderStats,
    out: list[GroundRuleInstance],
    queue: list[RecheckEntry],
) -> None:
    inst = GroundRuleInstance(rule_id, binding, rule.head.ground(binding))
    if rule.high_lits:
        rejected, pending = check_high_arity(rule, binding, facts)
        if rejected:
            stats.high_rejected += 1
            return
        if pending:
            stats.requeued += 1
            queue.append(RecheckEntry(inst, pending))
            return
    stats.emitted += 1
    out.append(inst)


def enumerate_from_seed(
    graph: ConsistencyGraph,
    rule: Rule,
    seed: DeltaEdge,
    facts: FactStore,
    rule_id: int = 0,
    stats: GrounderStats | None = None,
    owner_pruning: bool = True,
) -> tuple[list[GroundRuleInstance], list[RecheckEntry]]:
    """All k-cliques owned by ``seed``, converted to instances or recheck entries.

    With ``owner_pruning=False`` the search explores every clique through
    the seed and filters by owner afterwards (slower; counts rejections).
    """
    stats = stats if stats is not None else GrounderStats()
    stats.seeds += 1
    out: list[GroundRuleInstance] = []
    queue: list[RecheckEntry] = []
    for binding in _Search(graph, seed, owner_pruning).cliques():
        if not owner_pruning and clique_owner(graph, binding) != seed:
            stats.owner_rejected += 1
            continue
        _finish(rule_id, rule, binding, facts, stats, out, queue)
    return out, queue


def ground_rule_delta(
    graph: ConsistencyGraph,
    rule: Rule,
    facts: FactStore,
    seeds: Iterable[DeltaEdge],
    rule_id: int = 0,
    stats: GrounderStats | None = None,
    owner_pruning: bool = True,
) -> tuple[list[GroundRuleInstance], list[RecheckEntry]]:
    stats = stats if stats is not None else GrounderStats()
    out: list[GroundRuleInstance] = []
    queue: list[RecheckEntry] = []
    for seed in seeds:
        o, q = enumerate_from_seed(graph, rule, seed, facts, rule_id, stats, owner_pruning)
        out.extend(o)
        queue.extend(q)
    return out, queue


def ground_rule_small_arity(
    rule: Rule,
    facts: FactStore,
    fresh_all: bool,
    rule_id: int = 0,
    stats: GrounderStats | None = None,
) -> tuple[list[GroundRuleInstance], list[RecheckEntry]]:
    """Grounding for rules with zero or one variable.

    ``fresh_all`` marks t = 0, where every known fact counts as new.
    """
    stats = stats if stats is not None else GrounderStats()
    out: list[GroundRuleInstance] = []
    queue: list[RecheckEntry] = []
    if rule.arity == 0:
        fresh = fresh_all or any(facts.in_delta(a.ground(())) for a in rule.body_pos)
        if fresh and rule.body_holds((), facts):
            _finish(rule_id, rule, (), facts, stats, out, queue)
        return out, queue
    if rule.arity != 1:
        raise ValueError(f"rule {rule.name} has {rule.arity} variables")

    candidates: set[int] = set()
    zero_fresh = any(facts.in_delta(a.ground(())) for a in rule.body_pos if not a.variables())
    unary = [a for a in rule.body_pos if a.variables()]
    if fresh_all or zero_fresh:
        # any object may now satisfy the body; those bound by the first unary atom suffice
        pr = Projection(unary[0])
        sources = [(pr, facts.facts(unary[0].predicate))]
    else:
        sources = [(Projection(a), facts.delta_facts(a.predicate)) for a in unary]
    for pr, rows in sources:
        for args in rows:
            img = pr.project(args)
            if img is not None:
                candidates.add(img[0])
    for o in sorted(candidates):
        if rule.body_holds((o,), facts):
            _finish(rule_id, rule, (o,), facts, stats, out, queue)
    return out, queue


def drain_recheck_queue(
    queue: Sequence[RecheckEntry], facts: FactStore
) -> tuple[list[GroundRuleInstance], list[RecheckEntry]]:
    """Emit entries whose pending positive literals now all hold; keep the rest."""
    emitted: list[GroundRuleInstance] = []
    surviving: list[RecheckEntry] = []
    for e in queue:
        still = tuple(g for g in e.pending if g not in facts)
        if still:
            surviving.append(e if len(still) == len(e.pending) else RecheckEntry(e.instance, still))
        else:
            emitted.append(e.instance)
    return emitted, surviving
