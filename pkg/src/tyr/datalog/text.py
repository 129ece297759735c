"""Plain-text Datalog dialect.

    path(X,Y) :- edge(X,Y).
    path(X,Z) :- path(X,Y), edge(Y,Z).
    unreach(X) :- node(X), not reach(X).
    edge(a,b).

Identifiers starting with an upper-case letter or ``_`` are variables, all
others (including numbers) are constants.  ``%`` starts a line comment.
"""

from __future__ import annotations

import re
from typing import Iterable

from tyr.atoms import Atom, GroundAtom, var, var_index
from tyr.datalog.program import DatalogError, Predicate, Program, Rule

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>%[^\n]*)|(?P<neck>:-)"
    r"|(?P<punct>[(),.])|(?P<ident>[A-Za-z0-9_][A-Za-z0-9_\-']*)"
)


class DatalogSyntaxError(DatalogError):
    def __init__(self, message: str, line: int, col: int, filename: str = "<string>") -> None:
        self.line, self.col, self.filename = line, col, filename
        super().__init__(f"{filename}:{line}:{col}: {message}")


def _tokens(text: str, filename: str):
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DatalogSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, filename)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            yield m.group(), line, pos - line_start + 1
        pos = m.end()


def _is_variable(name: str) -> bool:
    return name[0].isupper() or name[0] == "_"


class _Parser:
    def __init__(self, text: str, filename: str) -> None:
        self.toks = list(_tokens(text, filename))
        self.i = 0
        self.filename = filename
        self.predicates: dict[str, int] = {}
        self.arities: list[int] = []
        self.objects: dict[str, int] = {}

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("<eof>", *self._end())

    def _end(self):
        if self.toks:
            return self.toks[-1][1], self.toks[-1][2] + len(self.toks[-1][0])
        return 1, 1

    def take(self, expected: str | None = None):
        tok = self.peek()
        if expected is not None and tok[0] != expected:
            self.error(f"expected {expected!r}, got {tok[0]!r}", tok)
        self.i += 1
        return tok

    def error(self, message: str, tok) -> None:
        raise DatalogSyntaxError(message, tok[1], tok[2], self.filename)

    def atom(self, variables: dict[str, int] | None):
        tok = self.take()
        name = tok[0]
        if not re.fullmatch(r"[A-Za-z0-9_][A-Za-z0-9_\-']*", name) or _is_variable(name):
            self.error(f"expected predicate name, got {name!r}", tok)
        args: list[int] = []
        if self.peek()[0] == "(":
            self.take("(")
            while True:
                t = self.take()
                if t[0] in "(),.":
                    self.error(f"expected term, got {t[0]!r}", t)
                if _is_variable(t[0]):
                    if variables is None:
                        self.error(f"variable {t[0]} in fact", t)
                    args.append(var(variables.setdefault(t[0], len(variables))))
                else:
                    args.append(self.objects.setdefault(t[0], len(self.objects)))
                sep = self.take()
                if sep[0] == ")":
                    break
                if sep[0] != ",":
                    self.error(f"expected ',' or ')', got {sep[0]!r}", sep)
        pid = self.predicates.get(name)
        if pid is None:
            pid = self.predicates[name] = len(self.arities)
            self.arities.append(len(args))
        elif self.arities[pid] != len(args):
            self.error(f"predicate {name} used with arity {len(args)}, declared {self.arities[pid]}", tok)
        return Atom(pid, tuple(args))

    def parse(self) -> Program:
        facts: list[GroundAtom] = []
        rules: list[Rule] = []
        while self.i < len(self.toks):
            start = self.peek()
            variables: dict[str, int] = {}
            head = self.atom(variables)
            sep = self.take()
            if sep[0] == ".":
                if variables:
                    self.error("fact contains variables", start)
                facts.append(GroundAtom(head.predicate, head.terms))
                continue
            if sep[0] != ":-":
                self.error(f"expected '.' or ':-', got {sep[0]!r}", sep)
            pos, neg = [], []
            while True:
                negated = False
                if self.peek()[0] == "not":
                    self.take()
                    negated = True
                a = self.atom(variables)
                (neg if negated else pos).append(a)
                sep = self.take()
                if sep[0] == ".":
                    break
                if sep[0] != ",":
                    self.error(f"expected ',' or '.', got {sep[0]!r}", sep)
            names = tuple(sorted(variables, key=variables.get))
            try:
                rules.append(Rule(head, tuple(pos), tuple(neg), names, name=f"r{len(rules)}"))
            except DatalogError as exc:
                self.error(str(exc), start)
        preds = sorted(self.predicates, key=self.predicates.get)
        return Program(
            tuple(Predicate(n, self.arities[self.predicates[n]]) for n in preds),
            tuple(sorted(self.objects, key=self.objects.get)),
            tuple(rules),
            frozenset(facts),
        )


def parse_program(text: str, filename: str = "<string>") -> Program:
    return _Parser(text, filename).parse()


def _term(program: Program, rule: Rule | None, t: int) -> str:
    if t < 0:
        assert rule is not None
        name = re.sub(r"[^A-Za-z0-9_]", "_", rule.variables[var_index(t)].lstrip("?"))
        if not name or name[0].isdigit():
            name = "V" + name
        return name if _is_variable(name) else name[0].upper() + name[1:]
    return program.objects[t]


def format_rule_atom(program: Program, rule: Rule | None, a: Atom) -> str:
    name = program.predicates[a.predicate].name
    if not a.terms:
        return name
    return f"{name}({','.join(_term(program, rule, t) for t in a.terms)})"


def format_rule(program: Program, rule: Rule) -> str:
    head = format_rule_atom(program, rule, rule.head)
    body = [format_rule_atom(program, rule, a) for a in rule.body_pos]
    body += ["not " + format_rule_atom(program, rule, a) for a in rule.body_neg]
    if not body:
        return head + "."
    return f"{head} :- {', '.join(body)}."


def format_program(program: Program, facts: Iterable[GroundAtom] | None = None) -> str:
    facts = program.facts if facts is None else facts
    lines = sorted(program.format_atom(a) + "." for a in facts)
    lines += [format_rule(program, r) for r in program.rules]
    return "\n".join(lines) + ("\n" if lines else "")
