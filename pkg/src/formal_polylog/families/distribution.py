"""Distribution identity for N-th powers of correlator entries."""

from __future__ import annotations

from itertools import product

from ..coalg import LinComb, combine, normalize
from .base import Instance, RelationKind, cyclic_arcs


class Distribution(RelationKind):
    """cor(x0^N, ..., xn^N) - sum over roots of unity of cor(x0, z1*x1, ..., zn*xn)."""

    name = "distribution"

    def element(self, instance: Instance) -> LinComb:
        ctx = instance.ctx
        order = instance.order
        entries = instance.entries
        weight = len(entries) - 1
        roots = ctx.roots_of_unity(order)
        parts = [(1, normalize([entry**order for entry in entries]))]
        for twist in product(roots, repeat=weight):
            parts.append((-1, normalize([entries[0]] + [z * x for z, x in zip(twist, entries[1:], strict=True)])))
        return combine(ctx, weight, parts)

    def supports(self, instance: Instance) -> list[Instance]:
        weight = len(instance.entries) - 1
        return [self.make(arc, instance.order) for arc in cyclic_arcs(instance.entries, 2, weight - 1)]
