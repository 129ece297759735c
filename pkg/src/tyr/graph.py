"""k-partite substitution consistency graphs over bitset rows.

One partition per rule variable; vertex ``(i, o)`` stands for the binding
``x_i/o``.  Adjacency between partitions ``i`` and ``j`` is kept as a list of
int bitmasks (row ``a`` has bit ``b`` set iff ``(x_i/a, x_j/b)`` satisfies
every body literal over exactly those two variables).  Partition pairs that
share no such literal are unconstrained and never materialized: their rows
are the alive mask of the other partition.

A vertex is alive iff all literals over only its variable hold; the graph
"gate" is the conjunction of the variable-free body literals.  An edge is
present iff the gate holds, both endpoints are alive and the pair row bit is
set.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple, Sequence

from tyr.atoms import Atom, GroundAtom, Projection
from tyr.datalog.program import Rule
from tyr.datalog.store import FactStore


class NonMonotoneUpdateError(RuntimeError):
    pass


class DeltaEdge(NamedTuple):
    """Edge ``{x_i/a, x_j/b}`` with ``i < j``."""

    i: int
    a: int
    j: int
    b: int


def edge_rank(edge: DeltaEdge) -> tuple[int, int, int, int]:
    return (edge.i, edge.j, edge.a, edge.b)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _bitmask(objs) -> int:
    m = 0
    for o in objs:
        m |= 1 << o
    return m


class ConsistencyGraph:
    def __init__(self, rule: Rule, num_objects: int) -> None:
        if rule.arity < 1:
            raise ValueError("consistency graphs need at least one variable")
        self.rule = rule
        self.k = rule.arity
        self.n = num_objects
        self.full = (1 << num_objects) - 1
        self.gate = False
        self.alive = [0] * self.k
        self.raw: dict[tuple[int, int], list[int]] = {}
        for (i, j) in rule.binary_lits:
            self.raw[(i, j)] = [0] * num_objects
            self.raw[(j, i)] = [0] * num_objects
        self._unary = [tuple((lit, Projection(lit.atom)) for lit in lits) for lits in rule.unary_lits]
        self._neg_preds = {a.predicate for a in rule.body_neg}
        self._pos_preds = {a.predicate for a in rule.body_pos}
        # state under the previous fact set; _fresh means "no previous graph"
        self._fresh = True
        self._prev_gate = False
        self._prev_alive = [0] * self.k
        self._prev_rows: dict[tuple[int, int], dict[int, int]] = {}
        self.delta_edges: list[DeltaEdge] = []

    # -- construction -----------------------------------------------------

    @classmethod
    def build(cls, rule: Rule, facts: FactStore, num_objects: int) -> "ConsistencyGraph":
        g = cls(rule, num_objects)
        g.gate = all(g._holds(lit.atom.ground(()), lit.positive, facts) for lit in rule.zero_lits)
        for i in range(g.k):
            g.alive[i] = g._initial_alive(i, facts)
        for (i, j), lits in rule.binary_lits.items():
            g._initial_rows(i, j, lits, facts)
        g.delta_edges = g._collect_delta_edges()
        return g

    @staticmethod
    def _holds(atom: GroundAtom, positive: bool, facts: FactStore) -> bool:
        return (atom in facts) == positive

    def _vertex_ok(self, i: int, o: int, facts: FactStore) -> bool:
        for lit, _ in self._unary[i]:
            b = [0] * self.k
            b[i] = o
            if (lit.atom.ground(b) in facts) != lit.positive:
                return False
        return True

    def _initial_alive(self, i: int, facts: FactStore) -> int:
        lits = self._unary[i]
        if not lits:
            return self.full
        pos = [(lit, pr) for lit, pr in lits if lit.positive]
        if pos:
            lit, pr = pos[0]
            cands = set()
            for args in facts.facts(lit.atom.predicate):
                img = pr.project(args)
                if img is not None:
                    cands.add(img[0])
            return _bitmask(o for o in cands if self._vertex_ok(i, o, facts))
        mask = self.full
        for lit, pr in lits:
            for args in facts.facts(lit.atom.predicate):
                img = pr.project(args)
                if img is not None:
                    mask &= ~(1 << img[0])
        return mask

    def _pair_image(self, proj: Projection, flipped: bool, args) -> tuple[int, int] | None:
        img = proj.project(args)
        if img is None:
            return None
        return (img[1], img[0]) if flipped else (img[0], img[1])

    def _pair_ok(self, i: int, j: int, a: int, b: int, facts: FactStore) -> bool:
        binding = [0] * self.k
        binding[i] = a
        binding[j] = b
        for lit, _, _ in self.rule.binary_lits[(i, j)]:
            if (lit.atom.ground(binding) in facts) != lit.positive:
                return False
        return True

    def _initial_rows(self, i: int, j: int, lits, facts: FactStore) -> None:
        fwd, bwd = self.raw[(i, j)], self.raw[(j, i)]
        pos = [x for x in lits if x[0].positive]
        if pos:
            lit, proj, flipped = pos[0]
            for args in facts.facts(lit.atom.predicate):
                ab = self._pair_image(proj, flipped, args)
                if ab is None:
                    continue
                a, b = ab
                if not (fwd[a] >> b) & 1 and self._pair_ok(i, j, a, b, facts):
                    fwd[a] |= 1 << b
                    bwd[b] |= 1 << a
            return
        for a in range(self.n):
            fwd[a] = self.full
            bwd[a] = self.full
        for lit, proj, flipped in lits:
            for args in facts.facts(lit.atom.predicate):
                ab = self._pair_image(proj, flipped, args)
                if ab is None:
                    continue
                a, b = ab
                fwd[a] &= ~(1 << b)
                bwd[b] &= ~(1 << a)

    # -- incremental update ----------------------------------------------

    def update(self, facts: FactStore) -> "ConsistencyGraph":
        """Absorb ``facts.delta`` (J^t = J^{t-1} ∪ Δ) and refresh ``delta_edges``."""
        changed = facts.delta_predicates()
        bad = changed & self._neg_preds
        if bad:
            raise NonMonotoneUpdateError(
                f"rule {self.rule.name}: new facts for negatively used predicates {sorted(bad)}"
            )
        self._fresh = False
        self._prev_gate = self.gate
        self._prev_alive = list(self.alive)
        self._prev_rows = {}
        if not changed & self._pos_preds:
            self.delta_edges = []
            return self

        if not self.gate:
            self.gate = all(
                self._holds(lit.atom.ground(()), lit.positive, facts) for lit in self.rule.zero_lits
            )
        for i in range(self.k):
            for lit, pr in self._unary[i]:
                if not lit.positive or lit.atom.predicate not in changed:
                    continue
                for args in facts.delta_facts(lit.atom.predicate):
                    img = pr.project(args)
                    if img is None:
                        continue
                    o = img[0]
                    if not (self.alive[i] >> o) & 1 and self._vertex_ok(i, o, facts):
                        self.alive[i] |= 1 << o
        for (i, j), lits in self.rule.binary_lits.items():
            fwd, bwd = self.raw[(i, j)], self.raw[(j, i)]
            prev_f = self._prev_rows.setdefault((i, j), {})
            prev_b = self._prev_rows.setdefault((j, i), {})
            for lit, proj, flipped in lits:
                if not lit.positive or lit.atom.predicate not in changed:
                    continue
                for args in facts.delta_facts(lit.atom.predicate):
                    ab = self._pair_image(proj, flipped, args)
                    if ab is None:
                        continue
                    a, b = ab
                    if (fwd[a] >> b) & 1 or not self._pair_ok(i, j, a, b, facts):
                        continue
                    prev_f.setdefault(a, fwd[a])
                    prev_b.setdefault(b, bwd[b])
                    fwd[a] |= 1 << b
                    bwd[b] |= 1 << a
        self.delta_edges = self._collect_delta_edges()
        return self

    # -- queries ----------------------------------------------------------

    def is_alive(self, i: int, o: int) -> bool:
        return bool((self.alive[i] >> o) & 1)

    def constrained(self, i: int, j: int) -> bool:
        return (i, j) in self.raw

    def adjacent(self, i: int, a: int, j: int) -> int:
        """Bitmask of partition-``j`` vertices adjacent to ``x_i/a``."""
        if not self.gate or not (self.alive[i] >> a) & 1:
            return 0
        row = self.raw.get((i, j))
        return self.alive[j] if row is None else row[a] & self.alive[j]

    def _prev_adjacent(self, i: int, a: int, j: int) -> int:
        if self._fresh or not self._prev_gate or not (self._prev_alive[i] >> a) & 1:
            return 0
        row = self.raw.get((i, j))
        if row is None:
            return self._prev_alive[j]
        old = self._prev_rows.get((i, j), {}).get(a, row[a])
        return old & self._prev_alive[j]

    def delta_adjacent(self, i: int, a: int, j: int) -> int:
        """Bitmask of partition-``j`` vertices joined to ``x_i/a`` by a Δ-edge."""
        return self.adjacent(i, a, j) & ~self._prev_adjacent(i, a, j)

    def has_edge(self, i: int, a: int, j: int, b: int) -> bool:
        return bool((self.adjacent(i, a, j) >> b) & 1)

    def is_delta_edge(self, i: int, a: int, j: int, b: int) -> bool:
        return bool((self.delta_adjacent(i, a, j) >> b) & 1)

    def edges(self) -> Iterator[DeltaEdge]:
        for i in range(self.k):
            for j in range(i + 1, self.k):
                for a in iter_bits(self.alive[i] if self.gate else 0):
                    for b in iter_bits(self.adjacent(i, a, j)):
                        yield DeltaEdge(i, a, j, b)

    def _collect_delta_edges(self) -> list[DeltaEdge]:
        out: list[DeltaEdge] = []
        if not self.gate:
            return out
        for i in range(self.k):
            for j in range(i + 1, self.k):
                for a in iter_bits(self.alive[i]):
                    for b in iter_bits(self.delta_adjacent(i, a, j)):
                        out.append(DeltaEdge(i, a, j, b))
        return out

    def edge_count(self, i: int, j: int) -> int:
        if not self.gate:
            return 0
        return sum(self.adjacent(i, a, j).bit_count() for a in iter_bits(self.alive[i]))

    def dump(self, objects: Sequence[str] | None = None) -> str:
        name = (lambda o: objects[o]) if objects is not None else str
        lines = []
        for i in range(self.k):
            alive = self.alive[i] if self.gate else 0
            verts = " ".join(name(o) for o in iter_bits(alive))
            lines.append(f"partition {i} {self.rule.variables[i]}: {verts}".rstrip())
        for i in range(self.k):
            for j in range(i + 1, self.k):
                lines.append(f"pair {i}-{j}: {self.edge_count(i, j)} edges")
        return "\n".join(lines) + "\n"


def build_graph(rule: Rule, facts: FactStore, num_objects: int) -> ConsistencyGraph:
    return ConsistencyGraph.build(rule, facts, num_objects)


def update_graph(graph: ConsistencyGraph, facts: FactStore) -> ConsistencyGraph:
    return graph.update(facts)


def literal_image(atom: Atom, args: tuple[int, ...]) -> tuple[int, ...] | None:
    return Projection(atom).project(args)
