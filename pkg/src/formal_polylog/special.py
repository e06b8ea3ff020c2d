"""Specialization of correlators at a discrete valuation of one variable."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

from sympy.polys.domains import QQ

from .coalg import CorrSym, LinComb, WedgeElem, add_pair, normalize
from .errors import FieldError
from .field import INFINITY, Atom, FieldContext, FieldElem, MultWord, Valuation, rational, residue, valuation_of

logger = logging.getLogger("formal_polylog.special")


@dataclass(frozen=True)
class SpecPoint:
    """Valuation t -> center (``None`` is infinity) with uniformizer ``unit*(t - a)`` or ``unit/t``."""

    variable: str
    center: FieldElem | None
    unit: Any = field(default_factory=lambda: QQ.one)

    @classmethod
    def parse(cls, ctx: FieldContext, variable: str, text: str, unit: Any = 1) -> SpecPoint:
        ctx.index(variable)
        stripped = text.strip()
        if stripped.lower() in {"inf", "infinity", "oo"}:
            return cls(variable, None, rational(unit))
        center = ctx.parse(stripped)
        if variable in center.free_variables():
            raise FieldError(f"Center {center} must not involve {variable}.")
        return cls(variable, center, rational(unit))

    @property
    def valuation(self) -> Valuation:
        return Valuation(self.variable, self.center)

    def uniformizer(self, ctx: FieldContext) -> FieldElem:
        generator = ctx.variable(self.variable)
        scale = ctx.constant(self.unit)
        if self.center is None:
            return scale / generator
        return scale * (generator - self.center)

    def label(self) -> str:
        return f"{self.variable}->{'inf' if self.center is None else self.center}"


def _valuation(element: FieldElem, point: SpecPoint) -> int | float:
    return valuation_of(element, point.valuation)


@lru_cache(maxsize=8192)
def specialize_symbol(symbol: CorrSym, point: SpecPoint) -> LinComb:
    """Sp of one canonical correlator of weight >= 2."""

    ctx = symbol.ctx
    entries = symbol.entries
    origin = entries[0]
    shifted = [entry - origin for entry in entries]
    orders = [_valuation(entry, point) for entry in shifted[1:]]
    lowest = min(orders)
    if lowest == INFINITY:
        return LinComb.zero(ctx, symbol.weight)
    scale = point.uniformizer(ctx) ** (-int(lowest))
    reduced = [ctx.zero] + [residue(entry * scale, point.valuation) for entry in shifted[1:]]
    return normalize(reduced)


def specialize_weight1(word: MultWord, point: SpecPoint) -> MultWord:
    """Strip the uniformizer from every atom and keep the residue of the unit part."""

    base = word.base
    ctx = base.ctx
    uniformizer = point.uniformizer(ctx)
    terms: dict[Atom, Any] = {}
    for atom, coeff in word.rebased().terms.items():
        value = base.value(atom)
        order = int(_valuation(value, point))
        unit = value * uniformizer ** (-order) if order else value
        for leaf, power in base.word(residue(unit, point.valuation)).terms.items():
            terms[leaf] = terms.get(leaf, QQ.zero) + coeff * power
    return MultWord(base, terms).rebased()


def specialize(e: LinComb, point: SpecPoint) -> LinComb:
    """Sp extended linearly over the terms of ``e``."""

    if e.weight == 1:
        return LinComb.from_word(specialize_weight1(e.word, point))
    terms: dict[Any, Any] = {}
    for symbol, coeff in e.terms.items():
        for key, value in specialize_symbol(symbol, point).terms.items():
            terms[key] = terms.get(key, QQ.zero) + coeff * value
    result = LinComb(e.ctx, e.weight, terms)
    logger.debug(
        "op=specialize point=%s weight=%s terms_in=%s terms_out=%s", point.label(), e.weight, len(e), len(result)
    )
    return result


def _specialize_leg(leg: Any, point: SpecPoint, ctx: FieldContext) -> LinComb:
    if isinstance(leg, Atom):
        return LinComb.from_word(specialize_weight1(ctx.factor_base.atom_word(leg), point))
    return specialize_symbol(leg, point)


def specialize_wedge(w: WedgeElem, point: SpecPoint) -> WedgeElem:
    """(Sp ^ Sp)(w)."""

    ctx = w.ctx
    images: dict[Any, LinComb] = {}
    terms: dict[Any, Any] = {}
    for (u, v), coeff in w.rebased().terms.items():
        for leg in (u, v):
            if leg not in images:
                images[leg] = _specialize_leg(leg, point, ctx)
        for p, cp in images[u].terms.items():
            for q, cq in images[v].terms.items():
                add_pair(terms, p, q, coeff * cp * cq)
    return WedgeElem(ctx, terms).rebased()
