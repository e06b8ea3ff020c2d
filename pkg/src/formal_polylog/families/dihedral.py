"""Reversal and shuffle identities of correlators."""

from __future__ import annotations

from itertools import combinations

from ..coalg import LinComb, combine, normalize
from ..errors import SymbolError
from ..field import FieldElem
from .base import Instance, RelationKind, cyclic_arcs


class Reversal(RelationKind):
    """cor(x0, ..., xn) - (-1)^(n+1) cor(xn, ..., x0)."""

    name = "reversal"

    def element(self, instance: Instance) -> LinComb:
        entries = instance.entries
        if len(entries) < 2:
            raise SymbolError("Reversal needs at least two entries.")
        weight = len(entries) - 1
        sign = -1 if (weight + 1) % 2 else 1
        return combine(instance.ctx, weight, [(1, normalize(entries)), (-sign, normalize(entries[::-1]))])

    def supports(self, instance: Instance) -> list[Instance]:
        weight = len(instance.entries) - 1
        return [self.make(arc) for arc in cyclic_arcs(instance.entries, 2, weight - 1)]


def shuffles(first: tuple[FieldElem, ...], second: tuple[FieldElem, ...]) -> list[tuple[FieldElem, ...]]:
    """All interleavings of two words keeping each word's order."""

    total = len(first) + len(second)
    result = []
    for positions in combinations(range(total), len(first)):
        chosen = set(positions)
        left, right = iter(first), iter(second)
        result.append(tuple(next(left) if slot in chosen else next(right) for slot in range(total)))
    return result


def _contiguous(word: tuple[FieldElem, ...]) -> list[tuple[FieldElem, ...]]:
    return [word[start:stop] for start in range(len(word)) for stop in range(start + 1, len(word) + 1)]


class Shuffle(RelationKind):
    """Sum over shuffles of cor(x0, sigma(x1..xp | xp+1..xn))."""

    name = "shuffle"

    @staticmethod
    def words(instance: Instance) -> tuple[FieldElem, tuple[FieldElem, ...], tuple[FieldElem, ...]]:
        split = instance.order
        entries = instance.entries
        if split < 1 or split >= len(entries) - 1:
            raise SymbolError(f"Shuffle split {split} must leave both words nonempty.", details={"split": split})
        return entries[0], entries[1 : split + 1], entries[split + 1 :]

    def element(self, instance: Instance) -> LinComb:
        base, first, second = self.words(instance)
        weight = len(instance.entries) - 1
        return combine(instance.ctx, weight, [(1, normalize((base,) + word)) for word in shuffles(first, second)])

    def supports(self, instance: Instance) -> list[Instance]:
        weight = len(instance.entries) - 1
        result = [Instance("reversal", arc) for arc in cyclic_arcs(instance.entries, 2, weight - 1)]
        if weight < 4:
            return result
        base, first, second = self.words(instance)
        letters = (base,) + first + second
        seen: set[Instance] = set()
        for point in letters:
            for part in _contiguous(tuple(x for x in first if x != point)):
                for other in _contiguous(tuple(x for x in second if x != point)):
                    if not 3 <= len(part) + len(other) <= weight - 1:
                        continue
                    candidate = self.make((point,) + part + other, len(part))
                    if candidate not in seen:
                        seen.add(candidate)
                        result.append(candidate)
        return result
