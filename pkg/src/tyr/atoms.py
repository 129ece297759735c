"""Terms, atoms and literals shared by the planning and Datalog layers.

Terms are plain ints: objects are ``>= 0`` and variable ``i`` is encoded as
``-(i + 1)``.  Ground atoms are ``(predicate, args)`` named tuples so they hash
and sort like tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence


def var(index: int) -> int:
    return -index - 1


def is_var(term: int) -> bool:
    return term < 0


def var_index(term: int) -> int:
    return -term - 1


class GroundAtom(NamedTuple):
    predicate: int
    args: tuple[int, ...]


class GroundLiteral(NamedTuple):
    atom: GroundAtom
    positive: bool = True


@dataclass(frozen=True)
class Atom:
    """A possibly non-ground atom ``P(t1, ..., tn)``."""

    predicate: int
    terms: tuple[int, ...]

    def variables(self) -> tuple[int, ...]:
        """Distinct variable indices in order of first occurrence."""
        seen: list[int] = []
        for t in self.terms:
            if t < 0 and -t - 1 not in seen:
                seen.append(-t - 1)
        return tuple(seen)

    @property
    def arity(self) -> int:
        # arity in the sense of free variables, not predicate arity
        return len(self.variables())

    def ground(self, binding: Sequence[int]) -> GroundAtom:
        return GroundAtom(
            self.predicate, tuple(binding[-t - 1] if t < 0 else t for t in self.terms)
        )

    def is_ground(self) -> bool:
        return all(t >= 0 for t in self.terms)


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def ground(self, binding: Sequence[int]) -> GroundLiteral:
        return GroundLiteral(self.atom.ground(binding), self.positive)


def matches(a: Atom, b: Atom) -> bool:
    """True iff ``a`` and ``b`` share a predicate and agree wherever both are objects."""
    if a.predicate != b.predicate or len(a.terms) != len(b.terms):
        return False
    for x, y in zip(a.terms, b.terms):
        if x >= 0 and y >= 0 and x != y:
            return False
    return True


class Projection:
    """Maps ground atoms of one predicate onto the distinct variables of an atom.

    ``project(args)`` returns the tuple of objects bound to ``atom.variables()``
    when ``args`` matches the atom (constants agree, repeated variables agree),
    else ``None``.
    """

    __slots__ = ("atom", "variables", "_consts", "_first", "_repeats")

    def __init__(self, atom: Atom) -> None:
        self.atom = atom
        self.variables = atom.variables()
        self._consts = tuple((i, t) for i, t in enumerate(atom.terms) if t >= 0)
        first: dict[int, int] = {}
        repeats = []
        for i, t in enumerate(atom.terms):
            if t < 0:
                if t in first:
                    repeats.append((first[t], i))
                else:
                    first[t] = i
        self._first = tuple(first[var(v)] for v in self.variables)
        self._repeats = tuple(repeats)

    def project(self, args: tuple[int, ...]) -> tuple[int, ...] | None:
        for i, c in self._consts:
            if args[i] != c:
                return None
        for i, j in self._repeats:
            if args[i] != args[j]:
                return None
        return tuple(args[i] for i in self._first)
