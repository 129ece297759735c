"""Rules, programs, the predicate dependency graph and stratification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

from tyr.atoms import Atom, GroundAtom, Literal, Projection, var_index

POS = "+"
NEG = "-"


class DatalogError(Exception):
    pass


class UnsafeRuleError(DatalogError):
    pass


class NotStratifiableError(DatalogError):
    def __init__(self, cycle: Sequence[str]) -> None:
        self.cycle = tuple(cycle)
        super().__init__("negative dependency cycle: " + " -> ".join(self.cycle))


class CapExceededError(DatalogError):
    pass


@dataclass(frozen=True)
class Predicate:
    name: str
    arity: int


@dataclass(frozen=True, eq=False)
class Rule:
    """``head <- body_pos, not body_neg`` over dense variables ``0..arity-1``.

    Every variable must occur in some positive body atom; this is checked on
    construction, together with density of the variable indices.
    """

    head: Atom
    body_pos: tuple[Atom, ...] = ()
    body_neg: tuple[Atom, ...] = ()
    variables: tuple[str, ...] = ()
    name: str = ""
    # derived, filled in __post_init__
    zero_lits: tuple[Literal, ...] = field(init=False, repr=False)
    unary_lits: tuple[tuple[Literal, ...], ...] = field(init=False, repr=False)
    binary_lits: dict = field(init=False, repr=False)
    high_lits: tuple[Literal, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        k = len(self.variables)
        used: set[int] = set()
        positive: set[int] = set()
        for a in self.body_pos:
            positive.update(a.variables())
        for a in (self.head, *self.body_pos, *self.body_neg):
            used.update(a.variables())
        if used != set(range(k)):
            raise UnsafeRuleError(
                f"rule {self.name or self.head}: variables must be dense 0..{k - 1}, got {sorted(used)}"
            )
        if positive != used:
            missing = sorted(used - positive)
            names = [self.variables[i] for i in missing]
            raise UnsafeRuleError(
                f"rule {self.name or self.head}: variables {names} do not occur in a positive body atom"
            )
        zero, high = [], []
        unary: list[list[Literal]] = [[] for _ in range(k)]
        binary: dict[tuple[int, int], list[tuple[Literal, Projection, bool]]] = {}
        for lit in self.literals():
            vs = lit.atom.variables()
            if len(vs) == 0:
                zero.append(lit)
            elif len(vs) == 1:
                unary[vs[0]].append(lit)
            elif len(vs) == 2:
                i, j = vs
                # flipped: projection yields (o_j, o_i) for a literal whose first variable is j
                flipped = i > j
                key = (min(i, j), max(i, j))
                binary.setdefault(key, []).append((lit, Projection(lit.atom), flipped))
            else:
                high.append(lit)
        object.__setattr__(self, "zero_lits", tuple(zero))
        object.__setattr__(self, "unary_lits", tuple(tuple(u) for u in unary))
        object.__setattr__(self, "binary_lits", {k2: tuple(v) for k2, v in binary.items()})
        object.__setattr__(self, "high_lits", tuple(high))

    @property
    def arity(self) -> int:
        return len(self.variables)

    def literals(self) -> tuple[Literal, ...]:
        return tuple(Literal(a, True) for a in self.body_pos) + tuple(
            Literal(a, False) for a in self.body_neg
        )

    def body_holds(self, binding: Sequence[int], facts) -> bool:
        """Direct evaluation of the ground body against a membership test ``facts``."""
        for a in self.body_pos:
            if a.ground(binding) not in facts:
                return False
        for a in self.body_neg:
            if a.ground(binding) in facts:
                return False
        return True


@dataclass(frozen=True)
class Program:
    predicates: tuple[Predicate, ...]
    objects: tuple[str, ...]
    rules: tuple[Rule, ...] = ()
    facts: frozenset[GroundAtom] = frozenset()

    def predicate_id(self, name: str) -> int:
        for i, p in enumerate(self.predicates):
            if p.name == name:
                return i
        raise KeyError(name)

    def format_atom(self, atom: GroundAtom) -> str:
        p = self.predicates[atom.predicate]
        if not atom.args:
            return p.name
        return f"{p.name}({','.join(self.objects[o] for o in atom.args)})"

    def with_facts(self, facts: Iterable[GroundAtom]) -> "Program":
        return Program(self.predicates, self.objects, self.rules, frozenset(facts))


@dataclass(frozen=True)
class StratifiedProgram:
    """A program plus its rule strata (lowest first).

    ``predicate_stratum`` maps predicate ids to levels; level 0 holds the
    extensional predicates (no defining rule), rule stratum ``i`` of
    ``strata`` corresponds to the ``i``-th smallest non-zero level.
    """

    program: Program
    strata: tuple[tuple[int, ...], ...]
    predicate_stratum: dict[int, int]

    @property
    def facts(self) -> frozenset[GroundAtom]:
        return self.program.facts

    @property
    def rules(self) -> tuple[Rule, ...]:
        return self.program.rules

    def with_facts(self, facts: Iterable[GroundAtom]) -> "StratifiedProgram":
        return StratifiedProgram(self.program.with_facts(facts), self.strata, self.predicate_stratum)


def dependency_graph(rules: Iterable[Rule]) -> nx.DiGraph:
    """Edge ``P -> P'`` with label set ``labels`` ⊆ {POS, NEG} per body/head occurrence."""
    g = nx.DiGraph()
    for r in rules:
        h = r.head.predicate
        g.add_node(h)
        for a in r.body_pos:
            _add_label(g, a.predicate, h, POS)
        for a in r.body_neg:
            _add_label(g, a.predicate, h, NEG)
    return g


def _add_label(g: nx.DiGraph, u: int, v: int, label: str) -> None:
    if g.has_edge(u, v):
        g.edges[u, v]["labels"].add(label)
    else:
        g.add_edge(u, v, labels={label})


def stratify(program: Program) -> StratifiedProgram:
    g = dependency_graph(program.rules)
    g.add_nodes_from(range(len(program.predicates)))
    idb = {r.head.predicate for r in program.rules}

    cond = nx.condensation(g)
    members = cond.graph["mapping"]  # predicate -> scc id
    for scc in cond.nodes:
        nodes = cond.nodes[scc]["members"]
        for u in nodes:
            for v in g.successors(u):
                if v in nodes and NEG in g.edges[u, v]["labels"]:
                    path = nx.shortest_path(g.subgraph(nodes), v, u)
                    names = [program.predicates[p].name for p in [u, *path]]
                    raise NotStratifiableError(names)

    level: dict[int, int] = {}
    for scc in nx.topological_sort(cond):
        nodes = cond.nodes[scc]["members"]
        lv = 1 if nodes & idb else 0
        for v in nodes:
            for u in g.predecessors(v):
                if members[u] == scc:
                    continue
                bump = 1 if NEG in g.edges[u, v]["labels"] else 0
                lv = max(lv, level[u] + bump)
        for v in nodes:
            level[v] = lv

    by_level: dict[int, list[int]] = {}
    for rid, r in enumerate(program.rules):
        by_level.setdefault(level[r.head.predicate], []).append(rid)
    strata = tuple(tuple(by_level[lv]) for lv in sorted(by_level))
    return StratifiedProgram(program, strata, level)


def check_stratification(sp: StratifiedProgram) -> None:
    """Raise AssertionError if some dependency edge violates the level constraints."""
    g = dependency_graph(sp.rules)
    lv = sp.predicate_stratum
    for u, v, data in g.edges(data=True):
        if POS in data["labels"]:
            assert lv[u] <= lv[v], (u, v)
        if NEG in data["labels"]:
            assert lv[u] < lv[v], (u, v)
    for s in sp.strata:
        levels = {lv[sp.rules[rid].head.predicate] for rid in s}
        assert len(levels) == 1


def make_rule(
    head: Atom,
    body_pos: Sequence[Atom] = (),
    body_neg: Sequence[Atom] = (),
    variables: Sequence[str] | None = None,
    name: str = "",
) -> Rule:
    """Convenience constructor inferring default variable names."""
    if variables is None:
        k = 0
        for a in (head, *body_pos, *body_neg):
            for v in a.variables():
                k = max(k, v + 1)
        variables = tuple(f"X{i}" for i in range(k))
    return Rule(head, tuple(body_pos), tuple(body_neg), tuple(variables), name)


def rule_variable_name(rule: Rule, term: int) -> str:
    return rule.variables[var_index(term)]
