"""Typed-STRIPS PDDL subset: parsing, checking, pretty-printing, normalization.

Supported requirements are ``:strips``, ``:typing``, ``:negative-preconditions``
and ``:equality``.  Preconditions and goals are conjunctions of literals,
and effects are conjunctions of literals.  Anything else is rejected with an
:class:`UnsupportedFeatureError` naming the construct.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from tyr.atoms import Atom, GroundAtom, GroundLiteral, Literal, var

SUPPORTED_REQUIREMENTS = frozenset({":strips", ":typing", ":negative-preconditions", ":equality"})
ROOT_TYPE = "object"
EQUALITY = "="

_UNSUPPORTED_FORMULA = {
    "or", "forall", "exists", "imply", "when", "either", "increase", "decrease",
    "assign", "scale-up", "scale-down", "preference",
}


class PDDLError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0, filename: str = "<string>") -> None:
        self.message, self.line, self.col, self.filename = message, line, col, filename
        super().__init__(f"{filename}:{line}:{col}: {message}")


class PDDLSyntaxError(PDDLError):
    pass


class UnsupportedFeatureError(PDDLError):
    pass


class PDDLSemanticError(PDDLError):
    pass


# -- s-expressions -------------------------------------------------------


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


SExpr = Union[Token, "SList"]


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    col: int


_LEX = re.compile(r"(?P<ws>[ \t\r\f]+)|(?P<nl>\n)|(?P<comment>;[^\n]*)|(?P<open>\()|(?P<close>\))|(?P<atom>[^\s();]+)")


def parse_sexprs(text: str, filename: str = "<string>") -> list[SExpr]:
    """Parse ``text`` into top-level s-expressions, lower-casing all symbols."""
    stack: list[tuple[list, int, int]] = []
    top: list[SExpr] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _LEX.match(text, pos)
        assert m is not None
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "open":
            stack.append(([], line, col))
        elif kind == "close":
            if not stack:
                raise PDDLSyntaxError("unbalanced ')'", line, col, filename)
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            (stack[-1][0] if stack else top).append(node)
        elif kind == "atom":
            tok = Token(m.group().lower(), line, col)
            if not stack:
                raise PDDLSyntaxError(f"symbol {tok.text!r} outside of any list", line, col, filename)
            stack[-1][0].append(tok)
        pos = m.end()
    if stack:
        _, l0, c0 = stack[-1]
        raise PDDLSyntaxError("unclosed '('", l0, c0, filename)
    return top


# -- raw syntax trees ----------------------------------------------------


@dataclass(frozen=True)
class RawLiteral:
    predicate: str
    args: tuple[str, ...]
    positive: bool = True
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class RawPredicate:
    name: str
    parameters: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class RawAction:
    name: str
    parameters: tuple[tuple[str, str], ...]
    precondition: tuple[RawLiteral, ...]
    effect: tuple[RawLiteral, ...]


@dataclass(frozen=True)
class RawDomain:
    name: str
    requirements: tuple[str, ...] = ()
    types: tuple[tuple[str, str], ...] = ()
    constants: tuple[tuple[str, str], ...] = ()
    predicates: tuple[RawPredicate, ...] = ()
    actions: tuple[RawAction, ...] = ()

    def type_parents(self) -> dict[str, str]:
        return {t: p for t, p in self.types}

    def predicate(self, name: str) -> RawPredicate | None:
        for p in self.predicates:
            if p.name == name:
                return p
        return None


@dataclass(frozen=True)
class RawProblem:
    name: str
    domain_ref: str
    objects: tuple[tuple[str, str], ...] = ()
    init: tuple[RawLiteral, ...] = ()
    goal: tuple[RawLiteral, ...] = ()


class _Reader:
    def __init__(self, filename: str) -> None:
        self.filename = filename

    def err(self, cls, message: str, node) -> PDDLError:
        return cls(message, node.line, node.col, self.filename)

    def sym(self, node, what: str) -> str:
        if not isinstance(node, Token):
            raise self.err(PDDLSyntaxError, f"expected {what}, got a list", node)
        return node.text

    def lst(self, node, what: str) -> SList:
        if not isinstance(node, SList):
            raise self.err(PDDLSyntaxError, f"expected {what}, got {node.text!r}", node)
        return node

    def typed_list(self, items: Sequence, variables: bool) -> list[tuple[str, str]]:
        out: list[tuple[str, str]] = []
        pending: list[Token] = []
        i = 0
        while i < len(items):
            node = items[i]
            if isinstance(node, Token) and node.text == "-":
                if i + 1 >= len(items):
                    raise self.err(PDDLSyntaxError, "missing type after '-'", node)
                tnode = items[i + 1]
                if isinstance(tnode, SList):
                    head = tnode.items[0].text if tnode.items and isinstance(tnode.items[0], Token) else "?"
                    raise self.err(UnsupportedFeatureError, f"unsupported type expression ({head} ...)", tnode)
                if not pending:
                    raise self.err(PDDLSyntaxError, "type annotation without names", node)
                out.extend((p.text, tnode.text) for p in pending)
                pending = []
                i += 2
                continue
            tok = self.lst_or_tok(node)
            if variables and not tok.text.startswith("?"):
                raise self.err(PDDLSyntaxError, f"expected variable, got {tok.text!r}", tok)
            if not variables and tok.text.startswith("?"):
                raise self.err(PDDLSyntaxError, f"unexpected variable {tok.text!r}", tok)
            pending.append(tok)
            i += 1
        out.extend((p.text, ROOT_TYPE) for p in pending)
        return out

    def lst_or_tok(self, node) -> Token:
        if isinstance(node, SList):
            raise self.err(PDDLSyntaxError, "expected a name, got a list", node)
        return node

    def atom(self, node, positive: bool = True) -> RawLiteral:
        lst = self.lst(node, "atom")
        if not lst.items:
            raise self.err(PDDLSyntaxError, "empty atom", lst)
        head = self.sym(lst.items[0], "predicate name")
        args = tuple(self.sym(a, "term") for a in lst.items[1:])
        return RawLiteral(head, args, positive, (lst.line, lst.col))

    def literal(self, node) -> RawLiteral:
        lst = self.lst(node, "literal")
        if lst.items and isinstance(lst.items[0], Token):
            head = lst.items[0].text
            if head == "not":
                if len(lst.items) != 2:
                    raise self.err(PDDLSyntaxError, "'not' takes exactly one argument", lst)
                inner = self.lst(lst.items[1], "atom")
                if inner.items and isinstance(inner.items[0], Token):
                    ih = inner.items[0].text
                    if ih in _UNSUPPORTED_FORMULA or ih in ("and", "not"):
                        raise self.err(UnsupportedFeatureError, f"unsupported construct (not ({ih} ...))", inner)
                return self.atom(inner, positive=False)
            if head in _UNSUPPORTED_FORMULA:
                raise self.err(UnsupportedFeatureError, f"unsupported construct ({head} ...)", lst)
        return self.atom(lst)

    def conjunction(self, node) -> tuple[RawLiteral, ...]:
        lst = self.lst(node, "formula")
        if not lst.items:
            return ()
        if isinstance(lst.items[0], Token) and lst.items[0].text == "and":
            out: list[RawLiteral] = []
            for sub in lst.items[1:]:
                out.extend(self.conjunction(sub))
            return tuple(out)
        return (self.literal(lst),)


def _sections(reader: _Reader, top: list[SExpr], kind: str) -> tuple[str, list[SList], SList]:
    if len(top) != 1:
        node = top[1] if len(top) > 1 else None
        if node is None:
            raise PDDLSyntaxError(f"expected one (define ({kind} ...)) form", 1, 1, reader.filename)
        raise reader.err(PDDLSyntaxError, "trailing content after define form", node)
    root = reader.lst(top[0], "define form")
    if len(root.items) < 2 or not isinstance(root.items[0], Token) or root.items[0].text != "define":
        raise reader.err(PDDLSyntaxError, "expected (define ...)", root)
    header = reader.lst(root.items[1], f"({kind} name)")
    if len(header.items) != 2 or reader.sym(header.items[0], kind) != kind:
        raise reader.err(PDDLSyntaxError, f"expected ({kind} name)", header)
    name = reader.sym(header.items[1], f"{kind} name")
    secs = []
    for node in root.items[2:]:
        sec = reader.lst(node, "section")
        if not sec.items or not isinstance(sec.items[0], Token):
            raise reader.err(PDDLSyntaxError, "malformed section", sec)
        secs.append(sec)
    return name, secs, root


def parse_domain(text: str, filename: str = "<domain>") -> RawDomain:
    r = _Reader(filename)
    name, secs, _ = _sections(r, parse_sexprs(text, filename), "domain")
    reqs: list[str] = []
    types: list[tuple[str, str]] = []
    constants: list[tuple[str, str]] = []
    preds: list[RawPredicate] = []
    actions: list[RawAction] = []
    nodes_of: dict[str, SList] = {}
    for sec in secs:
        key = sec.items[0].text
        if key == ":requirements":
            for tok in sec.items[1:]:
                req = r.sym(tok, "requirement")
                if req not in SUPPORTED_REQUIREMENTS:
                    raise r.err(UnsupportedFeatureError, f"unsupported requirement {req}", tok)
                reqs.append(req)
        elif key == ":types":
            types.extend(r.typed_list(sec.items[1:], variables=False))
        elif key == ":constants":
            constants.extend(r.typed_list(sec.items[1:], variables=False))
        elif key == ":predicates":
            for pnode in sec.items[1:]:
                p = r.lst(pnode, "predicate declaration")
                if not p.items:
                    raise r.err(PDDLSyntaxError, "empty predicate declaration", p)
                pname = r.sym(p.items[0], "predicate name")
                if any(x.name == pname for x in preds):
                    raise r.err(PDDLSemanticError, f"duplicate predicate {pname}", p)
                nodes_of["pred:" + pname] = p
                preds.append(RawPredicate(pname, tuple(r.typed_list(p.items[1:], variables=True))))
        elif key == ":action":
            actions.append(_parse_action(r, sec, actions))
            nodes_of["action:" + actions[-1].name] = sec
        else:
            raise r.err(UnsupportedFeatureError, f"unsupported section {key}", sec)
    dom = RawDomain(name, tuple(reqs), tuple(types), tuple(constants), tuple(preds), tuple(actions))
    _check_domain(r, dom, nodes_of)
    return dom


def _parse_action(r: _Reader, sec: SList, previous: list[RawAction]) -> RawAction:
    if len(sec.items) < 2:
        raise r.err(PDDLSyntaxError, "action without name", sec)
    name = r.sym(sec.items[1], "action name")
    if any(a.name == name for a in previous):
        raise r.err(PDDLSemanticError, f"duplicate action {name}", sec)
    params: list[tuple[str, str]] = []
    pre: tuple[RawLiteral, ...] = ()
    eff: tuple[RawLiteral, ...] = ()
    items = sec.items[2:]
    if len(items) % 2:
        raise r.err(PDDLSyntaxError, f"action {name}: odd number of key/value items", sec)
    for key_node, value in zip(items[::2], items[1::2]):
        key = r.sym(key_node, "action keyword")
        if key == ":parameters":
            params = r.typed_list(r.lst(value, "parameter list").items, variables=True)
        elif key == ":precondition":
            pre = r.conjunction(value)
        elif key == ":effect":
            eff = r.conjunction(value)
        else:
            raise r.err(UnsupportedFeatureError, f"unsupported action field {key}", key_node)
    return RawAction(name, tuple(params), pre, eff)


def _type_closure(r: _Reader, parents: dict[str, str], node) -> None:
    for t in parents:
        seen = {t}
        cur = t
        while cur != ROOT_TYPE:
            cur = parents.get(cur, ROOT_TYPE)
            if cur in seen:
                raise r.err(PDDLSemanticError, f"cyclic type hierarchy through {t}", node)
            seen.add(cur)


def _check_domain(r: _Reader, dom: RawDomain, nodes_of: dict[str, SList]) -> None:
    parents = dom.type_parents()
    declared = set(parents) | {ROOT_TYPE} | set(parents.values())
    anchor = SList((), 1, 1)
    _type_closure(r, parents, anchor)
    for t, parent in dom.types:
        if parent not in declared:
            raise r.err(PDDLSemanticError, f"undeclared type {parent}", anchor)
    for c, t in dom.constants:
        if t not in declared:
            raise r.err(PDDLSemanticError, f"constant {c} has undeclared type {t}", anchor)
    arity = {p.name: len(p.parameters) for p in dom.predicates}
    uses_eq = ":equality" in dom.requirements
    for p in dom.predicates:
        for v, t in p.parameters:
            if t not in declared:
                raise r.err(PDDLSemanticError, f"predicate {p.name}: undeclared type {t}", nodes_of["pred:" + p.name])
    constants = {c for c, _ in dom.constants}
    for a in dom.actions:
        node = nodes_of["action:" + a.name]
        names = [v for v, _ in a.parameters]
        if len(set(names)) != len(names):
            raise r.err(PDDLSemanticError, f"action {a.name}: duplicate parameter", node)
        for v, t in a.parameters:
            if t not in declared:
                raise r.err(PDDLSemanticError, f"action {a.name}: undeclared type {t}", node)
        for lit, in_effect in [(l, False) for l in a.precondition] + [(l, True) for l in a.effect]:
            where = SList((), *lit.pos)
            if lit.predicate == EQUALITY:
                if in_effect:
                    raise r.err(PDDLSemanticError, "equality in effect", where)
                if not uses_eq:
                    raise r.err(PDDLSemanticError, "'=' used without :equality", where)
                if len(lit.args) != 2:
                    raise r.err(PDDLSemanticError, "'=' takes two arguments", where)
            elif lit.predicate not in arity:
                raise r.err(PDDLSemanticError, f"undeclared predicate {lit.predicate}", where)
            elif arity[lit.predicate] != len(lit.args):
                raise r.err(
                    PDDLSemanticError,
                    f"predicate {lit.predicate} expects {arity[lit.predicate]} arguments, got {len(lit.args)}",
                    where,
                )
            for t in lit.args:
                if t.startswith("?"):
                    if t not in names:
                        raise r.err(PDDLSemanticError, f"action {a.name}: unknown variable {t}", where)
                elif t not in constants:
                    raise r.err(PDDLSemanticError, f"action {a.name}: unknown constant {t}", where)
            if not lit.positive and not in_effect and ":negative-preconditions" not in dom.requirements:
                raise r.err(PDDLSemanticError, "negative precondition without :negative-preconditions", where)


def parse_problem(text: str, domain: RawDomain, filename: str = "<problem>") -> RawProblem:
    r = _Reader(filename)
    name, secs, root = _sections(r, parse_sexprs(text, filename), "problem")
    parents = domain.type_parents()
    declared = set(parents) | {ROOT_TYPE} | set(parents.values())
    names = {c for c, _ in domain.constants}
    dref = None
    objects: list[tuple[str, str]] = []
    init: list[RawLiteral] = []
    goal: tuple[RawLiteral, ...] = ()
    for sec in secs:
        key = sec.items[0].text
        if key == ":domain":
            if len(sec.items) != 2:
                raise r.err(PDDLSyntaxError, "expected (:domain name)", sec)
            dref = r.sym(sec.items[1], "domain name")
            if dref != domain.name:
                raise r.err(PDDLSemanticError, f"problem refers to domain {dref}, got {domain.name}", sec)
        elif key == ":requirements":
            for tok in sec.items[1:]:
                req = r.sym(tok, "requirement")
                if req not in SUPPORTED_REQUIREMENTS:
                    raise r.err(UnsupportedFeatureError, f"unsupported requirement {req}", tok)
        elif key == ":objects":
            for o, t in r.typed_list(sec.items[1:], variables=False):
                if t not in declared:
                    raise r.err(PDDLSemanticError, f"object {o} has undeclared type {t}", sec)
                if o in names:
                    raise r.err(PDDLSemanticError, f"duplicate object {o}", sec)
                names.add(o)
                objects.append((o, t))
        elif key == ":init":
            for node in sec.items[1:]:
                lit = r.literal(node)
                if not lit.positive:
                    raise r.err(PDDLSemanticError, "negative literal in :init", node)
                init.append(lit)
        elif key == ":goal":
            if len(sec.items) != 2:
                raise r.err(PDDLSyntaxError, "expected (:goal formula)", sec)
            goal = r.conjunction(sec.items[1])
        else:
            raise r.err(UnsupportedFeatureError, f"unsupported section {key}", sec)
    if dref is None:
        raise r.err(PDDLSyntaxError, "missing (:domain ...)", root)
    prob = RawProblem(name, dref, tuple(objects), tuple(dict.fromkeys(init)), goal)
    _check_problem(r, prob, domain, names)
    return prob


def _check_problem(r: _Reader, prob: RawProblem, dom: RawDomain, names: set[str]) -> None:
    arity = {p.name: len(p.parameters) for p in dom.predicates}
    for lit in prob.init + prob.goal:
        where = SList((), *lit.pos)
        if lit.predicate == EQUALITY and len(lit.args) == 2 and lit not in prob.init:
            pass
        elif lit.predicate not in arity:
            raise r.err(PDDLSemanticError, f"undeclared predicate {lit.predicate}", where)
        elif arity[lit.predicate] != len(lit.args):
            raise r.err(
                PDDLSemanticError,
                f"predicate {lit.predicate} expects {arity[lit.predicate]} arguments, got {len(lit.args)}",
                where,
            )
        for o in lit.args:
            if o not in names:
                raise r.err(PDDLSemanticError, f"undeclared object {o}", where)


# -- printing ------------------------------------------------------------


def _typed(items: Iterable[tuple[str, str]]) -> str:
    return " ".join(f"{n} - {t}" for n, t in items)


def _lit(lit: RawLiteral) -> str:
    a = "(" + " ".join((lit.predicate, *lit.args)) + ")"
    return a if lit.positive else f"(not {a})"


def _conj(lits: Sequence[RawLiteral]) -> str:
    return "(and " + " ".join(_lit(l) for l in lits) + ")" if lits else "()"


def format_domain(dom: RawDomain) -> str:
    out = [f"(define (domain {dom.name})"]
    if dom.requirements:
        out.append(f"  (:requirements {' '.join(dom.requirements)})")
    if dom.types:
        out.append(f"  (:types {_typed(dom.types)})")
    if dom.constants:
        out.append(f"  (:constants {_typed(dom.constants)})")
    if dom.predicates:
        ps = " ".join("(" + " ".join([p.name, _typed(p.parameters)]).strip() + ")" for p in dom.predicates)
        out.append(f"  (:predicates {ps})")
    for a in dom.actions:
        out.append(f"  (:action {a.name}")
        out.append(f"    :parameters ({_typed(a.parameters)})")
        out.append(f"    :precondition {_conj(a.precondition)}")
        out.append(f"    :effect {_conj(a.effect)})")
    out.append(")")
    return "\n".join(out) + "\n"


def format_problem(prob: RawProblem) -> str:
    out = [f"(define (problem {prob.name})", f"  (:domain {prob.domain_ref})"]
    if prob.objects:
        out.append(f"  (:objects {_typed(prob.objects)})")
    out.append("  (:init " + " ".join(_lit(l) for l in prob.init) + ")")
    out.append(f"  (:goal {_conj(prob.goal)})")
    out.append(")")
    return "\n".join(out) + "\n"


# -- normalized task -----------------------------------------------------


@dataclass(frozen=True)
class PredicateInfo:
    name: str
    arity: int
    static: bool = False


@dataclass(frozen=True)
class ActionSchema:
    """Schema over parameters ``0..arity-1`` (variable terms ``var(i)``)."""

    name: str
    parameters: tuple[str, ...]
    precondition: tuple[Literal, ...] = ()
    add: tuple[Atom, ...] = ()
    delete: tuple[Atom, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.parameters)

    @property
    def pre_pos(self) -> tuple[Atom, ...]:
        return tuple(l.atom for l in self.precondition if l.positive)

    @property
    def pre_neg(self) -> tuple[Atom, ...]:
        return tuple(l.atom for l in self.precondition if not l.positive)


@dataclass(frozen=True)
class Task:
    name: str
    predicates: tuple[PredicateInfo, ...]
    objects: tuple[str, ...]
    schemas: tuple[ActionSchema, ...]
    init: frozenset[GroundAtom]
    goal: tuple[GroundLiteral, ...]
    object_types: tuple[frozenset[str], ...] = ()
    type_predicates: tuple[tuple[str, int], ...] = ()
    equality: int | None = None
    domain_name: str = ""

    def predicate_id(self, name: str) -> int:
        for i, p in enumerate(self.predicates):
            if p.name == name:
                return i
        raise KeyError(name)

    def object_id(self, name: str) -> int:
        return self.objects.index(name)

    def schema_id(self, name: str) -> int:
        for i, s in enumerate(self.schemas):
            if s.name == name:
                return i
        raise KeyError(name)

    def is_static(self, pid: int) -> bool:
        return self.predicates[pid].static

    def format_atom(self, atom: GroundAtom) -> str:
        return "(" + " ".join((self.predicates[atom.predicate].name, *(self.objects[o] for o in atom.args))) + ")"


def static_predicates(schemas: Iterable[ActionSchema], num_predicates: int) -> list[bool]:
    """``static[p]`` iff ``p`` occurs in no add or delete effect."""
    touched: set[int] = set()
    for s in schemas:
        touched.update(a.predicate for a in s.add + s.delete)
    return [p not in touched for p in range(num_predicates)]


def _fresh(name: str, taken: set[str]) -> str:
    cand, i = name, 1
    while cand in taken:
        i += 1
        cand = f"{name}-{i}"
    taken.add(cand)
    return cand


def normalize(domain: RawDomain, problem: RawProblem) -> Task:
    """Intern names, compile types and equality into static predicates."""
    parents = domain.type_parents()
    all_types = [ROOT_TYPE] + [t for t in dict.fromkeys([*parents, *parents.values()]) if t != ROOT_TYPE]

    def ancestors(t: str) -> list[str]:
        out = [t]
        while t != ROOT_TYPE:
            t = parents.get(t, ROOT_TYPE)
            out.append(t)
        return out

    taken = {p.name for p in domain.predicates}
    preds = [PredicateInfo(p.name, len(p.parameters)) for p in domain.predicates]
    pid = {p.name: i for i, p in enumerate(domain.predicates)}
    type_pid: dict[str, int] = {}
    for t in all_types:
        type_pid[t] = len(preds)
        preds.append(PredicateInfo(_fresh(t, taken), 1))
    uses_eq = any(l.predicate == EQUALITY for a in domain.actions for l in a.precondition) or any(
        l.predicate == EQUALITY for l in problem.goal
    )
    eq_pid = None
    if uses_eq:
        eq_pid = len(preds)
        preds.append(PredicateInfo(_fresh("equal", taken), 2))
        pid[EQUALITY] = eq_pid

    typed_objects = list(domain.constants) + list(problem.objects)
    objects = tuple(o for o, _ in typed_objects)
    oid = {o: i for i, o in enumerate(objects)}
    object_types = tuple(frozenset(ancestors(t)) for _, t in typed_objects)

    schemas = []
    for a in domain.actions:
        vid = {v: i for i, (v, _) in enumerate(a.parameters)}

        def term(t: str) -> int:
            return var(vid[t]) if t.startswith("?") else oid[t]

        pre = [Literal(Atom(type_pid[t], (var(i),))) for i, (_, t) in enumerate(a.parameters)]
        pre += [Literal(Atom(pid[l.predicate], tuple(term(x) for x in l.args)), l.positive) for l in a.precondition]
        add = [Atom(pid[l.predicate], tuple(term(x) for x in l.args)) for l in a.effect if l.positive]
        dele = [Atom(pid[l.predicate], tuple(term(x) for x in l.args)) for l in a.effect if not l.positive]
        schemas.append(
            ActionSchema(
                a.name,
                tuple(v for v, _ in a.parameters),
                tuple(dict.fromkeys(pre)),
                tuple(dict.fromkeys(add)),
                tuple(dict.fromkeys(dele)),
            )
        )
    static = static_predicates(schemas, len(preds))
    preds = [PredicateInfo(p.name, p.arity, s) for p, s in zip(preds, static)]

    init = {GroundAtom(pid[l.predicate], tuple(oid[o] for o in l.args)) for l in problem.init}
    for o, types in enumerate(object_types):
        for t in types:
            init.add(GroundAtom(type_pid[t], (o,)))
    if eq_pid is not None:
        init.update(GroundAtom(eq_pid, (o, o)) for o in range(len(objects)))
    goal = tuple(
        dict.fromkeys(
            GroundLiteral(GroundAtom(pid[l.predicate], tuple(oid[o] for o in l.args)), l.positive)
            for l in problem.goal
        )
    )
    return Task(
        name=problem.name,
        predicates=tuple(preds),
        objects=objects,
        schemas=tuple(schemas),
        init=frozenset(init),
        goal=goal,
        object_types=object_types,
        type_predicates=tuple((t, type_pid[t]) for t in all_types),
        equality=eq_pid,
        domain_name=domain.name,
    )


def load_task(domain_path: str, problem_path: str) -> Task:
    with open(domain_path, encoding="utf-8") as fh:
        dom = parse_domain(fh.read(), domain_path)
    with open(problem_path, encoding="utf-8") as fh:
        prob = parse_problem(fh.read(), dom, problem_path)
    return normalize(dom, prob)


def parse_task(domain_text: str, problem_text: str) -> Task:
    dom = parse_domain(domain_text)
    return normalize(dom, parse_problem(problem_text, dom))
