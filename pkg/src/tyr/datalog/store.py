from __future__ import annotations

from typing import Iterable, Iterator

from tyr.atoms import GroundAtom


class FrozenStoreError(RuntimeError):
    pass


class FactStore:
    """Per-predicate fact tables with the current semi-naive delta.

    ``J`` is the union of all tables; ``delta`` holds the facts added by the
    most recent ``advance``.  The store is frozen while grounding workers run;
    any mutation in that window raises :class:`FrozenStoreError`.
    """

    def __init__(self, facts: Iterable[GroundAtom] = ()) -> None:
        self._tables: dict[int, set[tuple[int, ...]]] = {}
        self._order: dict[int, list[tuple[int, ...]]] = {}
        self._delta: dict[int, set[tuple[int, ...]]] = {}
        self.iteration = 0
        self.frozen = False
        for a in facts:
            self._insert(a)

    def _insert(self, a: GroundAtom) -> bool:
        table = self._tables.setdefault(a.predicate, set())
        if a.args in table:
            return False
        table.add(a.args)
        self._order.setdefault(a.predicate, []).append(a.args)
        return True

    def __contains__(self, atom: GroundAtom) -> bool:
        table = self._tables.get(atom[0])
        return table is not None and atom[1] in table

    def __len__(self) -> int:
        return sum(len(t) for t in self._tables.values())

    def __iter__(self) -> Iterator[GroundAtom]:
        for p, rows in self._order.items():
            for args in rows:
                yield GroundAtom(p, args)

    def facts(self, predicate: int) -> set[tuple[int, ...]]:
        return self._tables.get(predicate, _EMPTY)

    def ordered_facts(self, predicate: int) -> list[tuple[int, ...]]:
        return self._order.get(predicate, [])

    def delta_facts(self, predicate: int) -> set[tuple[int, ...]]:
        return self._delta.get(predicate, _EMPTY)

    def delta_predicates(self) -> set[int]:
        return {p for p, d in self._delta.items() if d}

    def in_delta(self, atom: GroundAtom) -> bool:
        d = self._delta.get(atom[0])
        return d is not None and atom[1] in d

    def delta_atoms(self) -> Iterator[GroundAtom]:
        for p, rows in self._delta.items():
            for args in rows:
                yield GroundAtom(p, args)

    def delta_size(self) -> int:
        return sum(len(d) for d in self._delta.values())

    def atoms(self) -> set[GroundAtom]:
        return set(self)

    def reset_delta_to_all(self) -> None:
        """Stratum start: every known fact counts as new."""
        self._check_writable()
        self._delta = {p: set(t) for p, t in self._tables.items()}

    def advance(self, new_facts: Iterable[GroundAtom]) -> int:
        """Install ``new_facts`` as the next delta and add them to J; returns the number added."""
        self._check_writable()
        delta: dict[int, set[tuple[int, ...]]] = {}
        for a in new_facts:
            if self._insert(a):
                delta.setdefault(a.predicate, set()).add(a.args)
        self._delta = delta
        self.iteration += 1
        return sum(len(d) for d in delta.values())

    def _check_writable(self) -> None:
        if self.frozen:
            raise FrozenStoreError("fact store mutated while grounding workers are live")


_EMPTY: set = frozenset()  # type: ignore[assignment]
