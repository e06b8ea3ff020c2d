"""Depth-one inversion: Li_n(x) + (-1)^n Li_n(1/x) in the Lie coalgebra."""

from __future__ import annotations

from ..coalg import LinComb, classical_li, normalize
from ..errors import SymbolError
from .base import Instance, RelationKind


class DepthOneInversion(RelationKind):
    """Li_n^L(x) + (-1)^n Li_n^L(1/x) plus the projection of I(0; 0^n; x)."""

    name = "inversion"

    def element(self, instance: Instance) -> LinComb:
        (argument,) = instance.entries
        weight = instance.order
        if weight < 1:
            raise SymbolError("Inversion weight must be positive.")
        combined = classical_li(weight, argument) + classical_li(weight, argument.inverse()) * (-1) ** weight
        if weight == 1:
            ctx = argument.ctx
            combined = combined + normalize([ctx.zero, argument])
        return combined

    def supports(self, instance: Instance) -> list[Instance]:
        if instance.order <= 2:
            return []
        return [self.make(instance.entries, instance.order - 1)]
