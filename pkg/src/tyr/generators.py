"""Seeded random programs, grounding instances and STRIPS tasks for property tests."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

from tyr.atoms import Atom, GroundAtom, GroundLiteral, Literal, var
from tyr.datalog.program import Predicate, Program, Rule
from tyr.pddl import ActionSchema, PredicateInfo, Task, static_predicates


def _objects(n: int) -> tuple[str, ...]:
    return tuple(f"c{i}" for i in range(n))


def _term(rng: random.Random, k: int, n: int, const_p: float) -> int:
    if k == 0 or rng.random() < const_p:
        return rng.randrange(n)
    return var(rng.randrange(k))


def _safe_rule(
    rng: random.Random, head_pred: int, arities, pos_preds, neg_preds, k: int, n: int, max_pos: int, const_p: float
) -> Rule:
    """Random rule; variables not bound by the positive body are renamed away."""
    pos = [Atom(p, tuple(_term(rng, k, n, const_p) for _ in range(arities[p])))
           for p in (rng.choice(pos_preds) for _ in range(rng.randint(1, max_pos)))]
    bound = sorted({v for a in pos for v in a.variables()})
    remap = {var(v): var(i) for i, v in enumerate(bound)}
    k2 = len(bound)

    def fix(a: Atom) -> Atom:
        return Atom(a.predicate, tuple(remap.get(t, t) if t >= 0 or t in remap else _term(rng, k2, n, 0.0) for t in a.terms))

    pos = [fix(a) for a in pos]
    head = fix(Atom(head_pred, tuple(_term(rng, k, n, const_p) for _ in range(arities[head_pred]))))
    neg = []
    if neg_preds:
        for _ in range(rng.choice((0, 0, 1, 1, 2))):
            p = rng.choice(neg_preds)
            neg.append(fix(Atom(p, tuple(_term(rng, k, n, const_p) for _ in range(arities[p])))))
    return Rule(head, tuple(pos), tuple(neg), tuple(f"X{i}" for i in range(k2)))


def random_program(
    seed: int,
    max_predicates: int = 4,
    max_arity: int = 3,
    max_rules: int = 6,
    max_constants: int = 8,
    max_vars: int = 4,
) -> Program:
    """Stratifiable program: negation only refers to strictly lower levels."""
    rng = random.Random(seed)
    np_ = rng.randint(2, max_predicates)
    n = rng.randint(1, max_constants)
    arities = [rng.randint(0 if i else 1, max_arity) for i in range(np_)]
    levels = [0] + [rng.randint(1, 3) for _ in range(np_ - 1)]
    if rng.random() < 0.3:
        levels[rng.randrange(1, np_)] = 0
    rules = []
    idb = [p for p in range(np_) if levels[p] > 0] or [np_ - 1]
    for ri in range(rng.randint(1, max_rules)):
        # cover each derived predicate once before choosing freely
        h = idb[ri] if ri < len(idb) else rng.choice(idb)
        lv = max(levels[h], 1)
        pos_preds = [p for p in range(np_) if levels[p] <= lv]
        neg_preds = [p for p in range(np_) if levels[p] < lv and p != h]
        if any(levels[p] > 0 for p in neg_preds) and rng.random() < 0.7:
            neg_preds = [p for p in neg_preds if levels[p] > 0]
        k = rng.randint(1, max_vars)
        r = _safe_rule(rng, h, arities, pos_preds, neg_preds, k, n, 3, 0.15)
        rules.append(Rule(r.head, r.body_pos, r.body_neg, r.variables, name=f"r{ri}"))
    facts = set()
    for p in range(np_):
        density = rng.uniform(0.1, 0.6) if levels[p] == 0 else rng.uniform(0.0, 0.15)
        for args in product(range(n), repeat=arities[p]):
            if rng.random() < density:
                facts.add(GroundAtom(p, args))
    preds = tuple(Predicate(f"p{i}", a) for i, a in enumerate(arities))
    return Program(preds, _objects(n), tuple(rules), frozenset(facts))


@dataclass(frozen=True)
class GroundingInstance:
    """A rule with old facts ``J^{t-1}`` and a delta; ``J^t`` is their union."""

    program: Program
    rule: Rule
    old: frozenset[GroundAtom]
    delta: frozenset[GroundAtom]

    @property
    def facts(self) -> frozenset[GroundAtom]:
        return self.old | self.delta


def random_grounding_instance(
    seed: int, max_vars: int = 4, max_objects: int = 8, high_arity: bool = False
) -> GroundingInstance:
    """Body literals over at most two variables (one 3-variable literal if ``high_arity``).

    Negated predicates never receive delta facts, mirroring stratified evaluation.
    """
    rng = random.Random(seed)
    n = rng.randint(2, max_objects)
    k = rng.randint(3 if high_arity else 1, max_vars)
    np_ = 5
    arities = [0, 1, 2, 2, 3]
    neg_preds = [1, 3] if rng.random() < 0.6 else []
    pos_choices = [0, 1, 2, 3]
    pos: list[Atom] = []

    def small_atom(p: int) -> Atom:
        vs = rng.sample(range(k), min(k, rng.choice((1, 2)) if arities[p] >= 2 else arities[p]))
        terms = []
        for i in range(arities[p]):
            if vs and (i < len(vs) or rng.random() < 0.7):
                terms.append(var(vs[i % len(vs)]))
            else:
                terms.append(rng.randrange(n))
        return Atom(p, tuple(terms))

    # cover every variable with a positive literal of arity <= 2
    order = list(range(k))
    rng.shuffle(order)
    i = 0
    while i < k:
        if i + 1 < k and rng.random() < 0.7:
            pos.append(Atom(rng.choice((2, 3)), (var(order[i]), var(order[i + 1]))))
            i += 2
        else:
            x = var(order[i])
            pos.append(Atom(2, (x, x)) if rng.random() < 0.3 else Atom(1, (x,)))
            i += 1
    for _ in range(rng.randint(0, 3)):
        pos.append(small_atom(rng.choice(pos_choices)))
    if rng.random() < 0.2:
        pos.append(Atom(0, ()))
    neg: list[Atom] = []
    for _ in range(rng.randint(0, 2)):
        if neg_preds:
            neg.append(small_atom(rng.choice(neg_preds)))
    if high_arity:
        vs = rng.sample(range(k), 3)
        lit = Atom(4, tuple(var(v) for v in vs))
        if neg_preds and rng.random() < 0.3:
            neg.append(lit)
            neg_preds = neg_preds + [4]
        else:
            pos.append(lit)
    head = Atom(np_, tuple(var(v) for v in range(k)))
    rule = Rule(head, tuple(dict.fromkeys(pos)), tuple(dict.fromkeys(neg)), tuple(f"X{i}" for i in range(k)))

    density = rng.uniform(0.2, 0.8)
    old, delta = set(), set()
    for p in range(np_):
        for args in product(range(n), repeat=arities[p]):
            if rng.random() < density * (0.4 if arities[p] == 3 else 1.0):
                a = GroundAtom(p, args)
                if p in neg_preds or rng.random() < 0.6:
                    old.add(a)
                else:
                    delta.add(a)
    preds = tuple(Predicate(f"q{i}", a) for i, a in enumerate(arities)) + (Predicate("h", k),)
    prog = Program(preds, _objects(n), (rule,), frozenset(old | delta))
    return GroundingInstance(prog, rule, frozenset(old), frozenset(delta))


def random_task(
    seed: int,
    max_objects: int = 4,
    max_predicates: int = 3,
    max_schemas: int = 3,
    max_params: int = 2,
) -> Task:
    """Untyped STRIPS task; every parameter is guarded by the static ``obj`` predicate."""
    rng = random.Random(seed)
    n = rng.randint(1, max_objects)
    np_ = rng.randint(1, max_predicates)
    arities = [rng.randint(0, 2) for _ in range(np_)]
    obj = np_
    schemas = []
    for si in range(rng.randint(1, max_schemas)):
        k = rng.randint(0, max_params)

        def atom(p: int) -> Atom:
            return Atom(p, tuple(var(rng.randrange(k)) if k and rng.random() < 0.85 else rng.randrange(n)
                                 for _ in range(arities[p])))

        pre = [Literal(Atom(obj, (var(i),))) for i in range(k)]
        for _ in range(rng.randint(0, 2)):
            pre.append(Literal(atom(rng.randrange(np_)), rng.random() < 0.75))
        add = tuple(dict.fromkeys(atom(rng.randrange(np_)) for _ in range(rng.randint(1, 2))))
        dele = tuple(dict.fromkeys(atom(rng.randrange(np_)) for _ in range(rng.randint(0, 2))))
        schemas.append(ActionSchema(f"a{si}", tuple(f"?x{i}" for i in range(k)),
                                    tuple(dict.fromkeys(pre)), add, dele))
    all_arities = arities + [1]
    static = static_predicates(schemas, np_ + 1)
    preds = tuple(
        PredicateInfo(f"p{i}" if i < np_ else "obj", a, s) for i, (a, s) in enumerate(zip(all_arities, static))
    )
    init = {GroundAtom(obj, (o,)) for o in range(n)}
    for p in range(np_):
        for args in product(range(n), repeat=arities[p]):
            if rng.random() < 0.3:
                init.add(GroundAtom(p, args))
    goal = []
    for _ in range(rng.randint(1, 2)):
        p = rng.randrange(np_)
        goal.append(GroundLiteral(GroundAtom(p, tuple(rng.randrange(n) for _ in range(arities[p]))), True))
    return Task(
        name=f"random-{seed}",
        predicates=preds,
        objects=_objects(n),
        schemas=tuple(schemas),
        init=frozenset(init),
        goal=tuple(dict.fromkeys(goal)),
    )


def synthetic_triangles(rules: int = 64, nodes: int = 40, density: float = 0.5, seed: int = 0) -> Program:
    """``rules`` independent rules marking vertices on a transitive triangle.

    Every rule reads its own copy of one random digraph, so all rules cost
    the same to ground while producing at most ``nodes`` heads each.
    """
    rng = random.Random(seed)
    edges = [(a, b) for a in range(nodes) for b in range(nodes) if a != b and rng.random() < density]
    preds = []
    fs = set()
    rs = []
    x, y, z = var(0), var(1), var(2)
    for i in range(rules):
        e = len(preds)
        preds.append(Predicate(f"e{i}", 2))
        t = len(preds)
        preds.append(Predicate(f"t{i}", 1))
        fs.update(GroundAtom(e, ab) for ab in edges)
        rs.append(Rule(Atom(t, (x,)), (Atom(e, (x, y)), Atom(e, (y, z)), Atom(e, (x, z))), (),
                       ("X", "Y", "Z"), name=f"tri{i}"))
    return Program(tuple(preds), tuple(f"n{i}" for i in range(nodes)), tuple(rs), frozenset(fs))


def random_recheck_program(seed: int, max_objects: int = 6) -> tuple[Program, int]:
    """Program whose main rule has a 3-variable literal fed by a slow recursive chain.

    Facts ``q_i`` of the grounding instance are routed through
    ``q_i(..) :- src_i(..), ready(first arg)`` where ``ready`` spreads one
    object per iteration, so positive literals become true in late
    iterations and bindings must wait in the recheck queue.  Returns the
    program and the id of the main rule.
    """
    rng = random.Random(seed)
    inst = random_grounding_instance(seed, max_objects=max_objects, high_arity=True)
    base = inst.program
    n = len(base.objects)
    preds = list(base.predicates)
    neg = {a.predicate for a in inst.rule.body_neg}
    ready = len(preds)
    preds.append(Predicate("ready", 1))
    succ = len(preds)
    preds.append(Predicate("succ", 2))
    order = list(range(n))
    rng.shuffle(order)
    facts = {GroundAtom(ready, (order[0],))}
    facts.update(GroundAtom(succ, (a, b)) for a, b in zip(order, order[1:]))
    rules = [Rule(Atom(ready, (var(1),)), (Atom(ready, (var(0),)), Atom(succ, (var(0), var(1)))), (), ("X", "Y"), "chain")]
    delayed = {p for p in range(len(base.predicates) - 1) if base.predicates[p].arity > 0 and p not in neg and rng.random() < 0.6}
    if 4 not in neg:
        delayed.add(4)
    src_of = {}
    for p in sorted(delayed):
        src_of[p] = len(preds)
        ar = base.predicates[p].arity
        preds.append(Predicate(f"src{p}", ar))
        vs = tuple(var(i) for i in range(ar))
        rules.append(Rule(Atom(p, vs), (Atom(src_of[p], vs), Atom(ready, (vs[0],))), (),
                          tuple(f"X{i}" for i in range(ar)), f"delay{p}"))
    for a in inst.facts:
        facts.add(GroundAtom(src_of[a.predicate], a.args) if a.predicate in src_of else a)
    main = len(rules)
    rules.append(Rule(inst.rule.head, inst.rule.body_pos, inst.rule.body_neg, inst.rule.variables, "main"))
    return Program(tuple(preds), base.objects, tuple(rules), frozenset(facts)), main
