"""Formal multiple polylogarithms: Lie coalgebra, Hopf algebra, and certified functional equations."""

from .coalg import LinComb, cobracket, cor, normalize
from .field import FieldContext, FieldElem
from .hopf import HopfElem, IISym, coproduct
from .parser import parse_element, parse_hopf
from .polylog import LiSym, QSWord, li_expand
from .relations import RelationDB, certify_family, derive_relation, seed
from .special import SpecPoint, specialize

__all__ = [
    "FieldContext",
    "FieldElem",
    "LinComb",
    "cor",
    "normalize",
    "cobracket",
    "SpecPoint",
    "specialize",
    "RelationDB",
    "certify_family",
    "derive_relation",
    "seed",
    "IISym",
    "HopfElem",
    "coproduct",
    "LiSym",
    "QSWord",
    "li_expand",
    "parse_element",
    "parse_hopf",
]
