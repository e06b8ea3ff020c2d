"""Identity kinds whose instances can be established as relation generators."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar

from ..coalg import LinComb
from ..errors import SymbolError
from ..field import FieldContext, FieldElem


@dataclass(frozen=True)
class Instance:
    """One instance of an identity: its kind, entries, and an integer parameter.

    The parameter is the length of the first word for shuffles, the order N for
    distributions, and the weight for depth-one inversions.
    """

    kind: str
    entries: tuple[FieldElem, ...]
    order: int = 0

    @property
    def ctx(self) -> FieldContext:
        return self.entries[0].ctx

    def free_variables(self) -> set[str]:
        used: set[str] = set()
        for entry in self.entries:
            used.update(entry.free_variables())
        return used

    def replace(self, index: int, value: FieldElem) -> Instance:
        entries = self.entries[:index] + (value,) + self.entries[index + 1 :]
        return Instance(self.kind, entries, self.order)

    def __str__(self) -> str:
        entries = ", ".join(str(entry) for entry in self.entries)
        return f"{self.kind}[{self.order}]({entries})" if self.order else f"{self.kind}({entries})"


def cyclic_arcs(entries: tuple[FieldElem, ...], low: int, high: int) -> list[tuple[FieldElem, ...]]:
    """Distinct runs of consecutive entries (cyclically) with weight between low and high."""

    size = len(entries)
    seen: set[tuple[FieldElem, ...]] = set()
    arcs: list[tuple[FieldElem, ...]] = []
    for weight in range(low, min(high, size - 1) + 1):
        for start in range(size):
            arc = tuple(entries[(start + offset) % size] for offset in range(weight + 1))
            if arc not in seen:
                seen.add(arc)
                arcs.append(arc)
    return arcs


class RelationKind(ABC):
    """An identity family: instance element, its deformation, and lower-weight support."""

    name: ClassVar[str]

    def make(self, entries: tuple[FieldElem, ...], order: int = 0) -> Instance:
        return Instance(self.name, tuple(entries), order)

    @abstractmethod
    def element(self, instance: Instance) -> LinComb:
        """The combination that the identity asserts vanishes in the quotient."""

    @abstractmethod
    def supports(self, instance: Instance) -> list[Instance]:
        """Lower-weight instances whose membership makes the cobracket of ``element`` vanish."""

    def deform_index(self, instance: Instance) -> int:
        for index in range(len(instance.entries) - 1, -1, -1):
            if not instance.entries[index].is_zero:
                return index
        raise SymbolError(f"{instance} has no nonzero entry to deform.")

    def deform(self, instance: Instance, aux: str) -> Instance:
        """Multiply one nonzero entry by the auxiliary variable ``aux``."""

        index = self.deform_index(instance)
        return instance.replace(index, instance.entries[index] * instance.ctx.variable(aux))
