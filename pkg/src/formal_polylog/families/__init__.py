"""Identity kinds used to establish relation generators."""

from .base import Instance, RelationKind, cyclic_arcs
from .dihedral import Reversal, Shuffle, shuffles
from .distribution import Distribution
from .inversion import DepthOneInversion

KINDS: dict[str, RelationKind] = {
    kind.name: kind for kind in (Reversal(), Shuffle(), Distribution(), DepthOneInversion())
}

__all__ = [
    "Instance",
    "RelationKind",
    "KINDS",
    "Reversal",
    "Shuffle",
    "Distribution",
    "DepthOneInversion",
    "cyclic_arcs",
    "shuffles",
]
