"""Correlator symbols, their canonical form, and the Lie cobracket.

Weight-1 content is always carried in multiplicative coordinates (factor-base atoms),
so a weight-1 :class:`LinComb` is keyed by :class:`~formal_polylog.field.Atom` and a
higher-weight one by :class:`CorrSym`.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from functools import lru_cache
from typing import Any, Protocol

from sympy.polys.domains import QQ

from .errors import SymbolError
from .field import Atom, FieldContext, FieldElem, MultWord, Vector, format_rational, sort_key_of

logger = logging.getLogger("formal_polylog.coalg")

Weight1Elem = MultWord
"""Weight-1 values are multiplicative words."""


class CorrSym:
    """A canonical correlator ``cor(x0, ..., xn)`` of weight n >= 2."""

    __slots__ = ("entries", "weight", "sort_key", "_hash")

    def __init__(self, entries: tuple[FieldElem, ...]) -> None:
        self.entries = entries
        self.weight = len(entries) - 1
        self.sort_key = (self.weight, tuple(entry.sort_key for entry in entries))
        self._hash = hash(entries)

    @property
    def ctx(self) -> FieldContext:
        return self.entries[0].ctx

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CorrSym) and self.entries == other.entries

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: CorrSym) -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return "cor(" + ", ".join(str(entry) for entry in self.entries) + ")"

    __repr__ = __str__


Leg = Atom | CorrSym


def leg_weight(leg: Leg) -> int:
    return 1 if isinstance(leg, Atom) else leg.weight


class LinComb(Vector):
    """A graded Q-linear combination of symbols of one weight."""

    __slots__ = ("weight", "ctx")

    def __init__(self, ctx: FieldContext, weight: int, terms: Mapping[Any, Any] | None = None) -> None:
        super().__init__(terms)
        self.ctx = ctx
        self.weight = weight

    def _new(self, terms: Mapping[Any, Any]) -> LinComb:
        return LinComb(self.ctx, self.weight, terms)

    def _combine(self, other: Vector, sign: int) -> LinComb:
        if isinstance(other, LinComb) and other.weight != self.weight and other.terms and self.terms:
            raise SymbolError(
                f"Cannot combine weight {self.weight} with weight {other.weight}.",
                details={"left": self.weight, "right": other.weight},
            )
        if isinstance(other, LinComb) and not self.terms:
            result = other if sign > 0 else -other
            return result
        return super()._combine(other, sign)

    @classmethod
    def zero(cls, ctx: FieldContext, weight: int) -> LinComb:
        return cls(ctx, weight)

    @classmethod
    def of(cls, symbol: CorrSym, coeff: Any = 1) -> LinComb:
        return cls(symbol.ctx, symbol.weight, {symbol: QQ.convert(coeff) if not isinstance(coeff, int) else QQ(coeff)})

    @classmethod
    def from_word(cls, word: MultWord) -> LinComb:
        return cls(word.base.ctx, 1, word.terms)

    @property
    def word(self) -> MultWord:
        if self.weight != 1:
            raise SymbolError(f"A weight-{self.weight} combination has no multiplicative word.")
        return MultWord(self.ctx.factor_base, self.terms)

    def rebased(self) -> LinComb:
        if self.weight != 1:
            return self
        return LinComb(self.ctx, 1, self.ctx.factor_base.rebase(self.terms))

    def symbols(self) -> list[Any]:
        return [key for key, _ in self.items()]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.rebased().terms
        if not isinstance(other, LinComb):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        if self.weight != other.weight:
            return False
        return self.rebased().terms == other.rebased().terms

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return format_terms(self.rebased().items(), weight=self.weight)

    __repr__ = __str__


def format_symbol(key: Any, weight: int) -> str:
    if isinstance(key, Atom):
        return f"cor(0, {key})"
    return str(key)


def format_terms(items: Iterable[tuple[Any, Any]], *, weight: int = 2) -> str:
    pieces: list[str] = []
    for key, coeff in items:
        text = format_symbol(key, weight)
        magnitude = abs(coeff)
        body = text if magnitude == 1 else f"{format_rational(magnitude)}*{text}"
        pieces.append(("- " if coeff < 0 else "+ ") + body)
    if not pieces:
        return "0"
    joined = " ".join(pieces)
    return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------


def weight1_value(x0: FieldElem, x1: FieldElem) -> MultWord:
    """The multiplicative word of ``x1 - x0``; equal entries give the empty word."""

    base = x0.ctx.factor_base
    if x0 == x1:
        return base.empty()
    return base.word(x1 - x0)


def canonical_symbol(entries: Sequence[FieldElem]) -> CorrSym | None:
    """Least rotation after translating its first entry to 0 and scaling the first nonzero entry to 1."""

    entries = tuple(entries)
    counts = Counter(entries)
    if counts.most_common(1)[0][1] >= len(entries) - 1:
        return None
    best: tuple[FieldElem, ...] | None = None
    best_key: tuple[Any, ...] | None = None
    for shift in range(len(entries)):
        rotated = entries[shift:] + entries[:shift]
        origin = rotated[0]
        moved = [entry - origin for entry in rotated]
        pivot = next(entry for entry in moved[1:] if not entry.is_zero)
        scaled = tuple(entry / pivot for entry in moved) if not pivot.is_one else tuple(moved)
        key = tuple(entry.sort_key for entry in scaled)
        if best_key is None or key < best_key:
            best, best_key = scaled, key
    assert best is not None
    return CorrSym(best)


def normalize(raw: Sequence[FieldElem]) -> LinComb:
    """Canonical LinComb of the correlator with the given entries."""

    entries = tuple(raw)
    if len(entries) < 2:
        raise SymbolError("A correlator needs at least two entries.", details={"entries": len(entries)})
    ctx = entries[0].ctx
    if len(entries) == 2:
        return LinComb.from_word(weight1_value(entries[0], entries[1]))
    symbol = canonical_symbol(entries)
    if symbol is None:
        return LinComb.zero(ctx, len(entries) - 1)
    return LinComb.of(symbol)


def cor(*entries: FieldElem) -> LinComb:
    return normalize(entries)


def combine(ctx: FieldContext, weight: int, parts: Iterable[tuple[Any, LinComb]]) -> LinComb:
    """Sum of scaled combinations, accumulated in place."""

    terms: dict[Any, Any] = {}
    for scalar, part in parts:
        factor = QQ.convert(scalar) if not isinstance(scalar, int) else QQ(scalar)
        for key, coeff in part.terms.items():
            terms[key] = terms.get(key, QQ.zero) + factor * coeff
    return LinComb(ctx, weight, terms)


# ---------------------------------------------------------------------------
# wedge and triple tensors
# ---------------------------------------------------------------------------


class WedgeElem(Vector):
    """Antisymmetric tensors ``u ^ v`` with legs in canonical order and the sign absorbed."""

    __slots__ = ("ctx",)

    def __init__(self, ctx: FieldContext, terms: Mapping[tuple[Leg, Leg], Any] | None = None) -> None:
        super().__init__(terms)
        self.ctx = ctx

    def _new(self, terms: Mapping[Any, Any]) -> WedgeElem:
        return WedgeElem(self.ctx, terms)

    @classmethod
    def zero(cls, ctx: FieldContext) -> WedgeElem:
        return cls(ctx)

    @classmethod
    def wedge(cls, left: LinComb, right: LinComb) -> WedgeElem:
        terms: dict[tuple[Leg, Leg], Any] = {}
        for u, cu in left.terms.items():
            for v, cv in right.terms.items():
                add_pair(terms, u, v, cu * cv)
        return cls(left.ctx, terms)

    def rebased(self) -> WedgeElem:
        base = self.ctx.factor_base
        if not base.retired():
            return self
        terms: dict[tuple[Leg, Leg], Any] = {}
        for (u, v), coeff in self.terms.items():
            for u_leaf, u_power in _expand_leg(base, u):
                for v_leaf, v_power in _expand_leg(base, v):
                    add_pair(terms, u_leaf, v_leaf, coeff * u_power * v_power)
        return WedgeElem(self.ctx, terms)

    def swapped(self) -> WedgeElem:
        """Image under the flip u ^ v -> v ^ u, stored back in canonical order."""

        terms: dict[tuple[Leg, Leg], Any] = {}
        for (u, v), coeff in self.terms.items():
            add_pair(terms, v, u, coeff)
        return WedgeElem(self.ctx, terms)

    def bigradings(self) -> set[tuple[int, int]]:
        return {(leg_weight(u), leg_weight(v)) for u, v in self.terms}

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.rebased().terms
        if not isinstance(other, WedgeElem):
            return NotImplemented
        return self.rebased().terms == other.rebased().terms

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        pieces = []
        for (u, v), coeff in self.rebased().items():
            text = f"{format_symbol(u, 1)} ^ {format_symbol(v, 2)}"
            magnitude = abs(coeff)
            body = text if magnitude == 1 else f"{format_rational(magnitude)}*({text})"
            pieces.append(("- " if coeff < 0 else "+ ") + body)
        if not pieces:
            return "0"
        joined = " ".join(pieces)
        return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]

    __repr__ = __str__


def add_pair(terms: dict[tuple[Leg, Leg], Any], u: Leg, v: Leg, coeff: Any) -> None:
    if u == v or not coeff:
        return
    if sort_key_of(v) < sort_key_of(u):
        u, v, coeff = v, u, -coeff
    key = (u, v)
    total = terms.get(key, QQ.zero) + coeff
    if total:
        terms[key] = total
    else:
        terms.pop(key, None)


def _expand_leg(base: Any, leg: Leg) -> list[tuple[Leg, Any]]:
    if isinstance(leg, Atom):
        return [(leaf, QQ(power)) for leaf, power in base.expand(leg).items()]
    return [(leg, QQ.one)]


class Tensor3(Vector):
    """Elements of L (x) L (x) L keyed by leg triples."""

    __slots__ = ("ctx",)

    def __init__(self, ctx: FieldContext, terms: Mapping[tuple[Leg, Leg, Leg], Any] | None = None) -> None:
        super().__init__(terms)
        self.ctx = ctx

    def _new(self, terms: Mapping[Any, Any]) -> Tensor3:
        return Tensor3(self.ctx, terms)

    def rebased(self) -> Tensor3:
        base = self.ctx.factor_base
        terms: dict[tuple[Leg, Leg, Leg], Any] = {}
        for legs, coeff in self.terms.items():
            expansions: list[tuple[tuple[Leg, ...], Any]] = [((), coeff)]
            for leg in legs:
                expansions = [
                    (prefix + (leaf,), scale * power)
                    for prefix, scale in expansions
                    for leaf, power in _expand_leg(base, leg)
                ]
            for key, value in expansions:
                terms[key] = terms.get(key, QQ.zero) + value  # type: ignore[index]
        return Tensor3(self.ctx, terms)

    def rotated(self) -> Tensor3:
        return Tensor3(self.ctx, {(b, c, a): coeff for (a, b, c), coeff in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.rebased().terms
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.rebased().terms == other.rebased().terms

    __hash__ = None  # type: ignore[assignment]


# ---------------------------------------------------------------------------
# cobracket
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8192)
def _symbol_cobracket(symbol: CorrSym, low: int) -> WedgeElem:
    entries = symbol.entries
    size = len(entries)
    n = size - 1
    terms: dict[tuple[Leg, Leg], Any] = {}
    for j in range(size):
        for i in range(low, n - low + 1):
            left = normalize([entries[(j + k) % size] for k in range(i + 1)])
            if not left.terms:
                continue
            right = normalize([entries[j]] + [entries[(j + k) % size] for k in range(i + 1, n + 1)])
            for u, cu in left.terms.items():
                for v, cv in right.terms.items():
                    add_pair(terms, u, v, cu * cv)
    return WedgeElem(symbol.ctx, terms)


def _cobracket(e: LinComb, low: int) -> WedgeElem:
    terms: dict[tuple[Leg, Leg], Any] = {}
    if e.weight < 2:
        return WedgeElem(e.ctx)
    for symbol, coeff in e.terms.items():
        for (u, v), value in _symbol_cobracket(symbol, low).rebased().terms.items():
            add_pair(terms, u, v, coeff * value)
    result = WedgeElem(e.ctx, terms).rebased()
    logger.debug("op=cobracket weight=%s terms=%s wedge_terms=%s", e.weight, len(e), len(result))
    return result


def cobracket(e: LinComb) -> WedgeElem:
    """Sum over all cuts of the cyclically arranged entries."""

    return _cobracket(e, 1)


def truncated_cobracket(e: LinComb) -> WedgeElem:
    """The cobracket without its weight-1 legs on either side."""

    return _cobracket(e, 2)


def leg_cobracket(leg: CorrSym) -> WedgeElem:
    return _symbol_cobracket(leg, 1).rebased()


def tensor3(e: LinComb) -> Tensor3:
    """(1 (x) delta) applied to delta(e), with u ^ v read as u (x) v - v (x) u."""

    ctx = e.ctx
    terms: dict[tuple[Leg, Leg, Leg], Any] = {}
    for (u, v), coeff in cobracket(e).terms.items():
        for first, second, sign in ((u, v, 1), (v, u, -1)):
            if isinstance(second, Atom):
                continue
            for (p, q), value in leg_cobracket(second).terms.items():
                scaled = sign * coeff * value
                terms[(first, p, q)] = terms.get((first, p, q), QQ.zero) + scaled
                terms[(first, q, p)] = terms.get((first, q, p), QQ.zero) - scaled
    return Tensor3(ctx, terms).rebased()


def cojacobi(e: LinComb) -> Tensor3:
    """Cyclic symmetrization of :func:`tensor3`; vanishes identically."""

    once = tensor3(e)
    twice = once.rotated()
    return (once + twice + twice.rotated()).rebased()


# ---------------------------------------------------------------------------
# quotient tests
# ---------------------------------------------------------------------------


class SupportsReduce(Protocol):
    def reduce(self, e: LinComb) -> LinComb: ...


def project_wedge(w: WedgeElem, db: SupportsReduce) -> WedgeElem:
    """(pi ^ pi)(w) where pi is reduction modulo the relation database."""

    reduced: dict[Leg, LinComb] = {}

    def image(leg: Leg) -> LinComb:
        if leg not in reduced:
            if isinstance(leg, Atom):
                reduced[leg] = LinComb(w.ctx, 1, {leg: QQ.one})
            else:
                reduced[leg] = db.reduce(LinComb.of(leg))
        return reduced[leg]

    terms: dict[tuple[Leg, Leg], Any] = {}
    for (u, v), coeff in w.rebased().terms.items():
        for p, cp in image(u).terms.items():
            for q, cq in image(v).terms.items():
                add_pair(terms, p, q, coeff * cp * cq)
    return WedgeElem(w.ctx, terms)


def wedge_is_zero(w: WedgeElem, db: SupportsReduce | None = None) -> bool:
    """Certified vanishing of ``w`` in the wedge square of the quotient; False means not certified."""

    rebased = w.rebased()
    if not rebased.terms:
        return True
    if db is None:
        return False
    return not project_wedge(rebased, db).terms


def components_by_weight1(w: WedgeElem) -> dict[Atom, LinComb]:
    """For w = sum a ^ w_a + (terms without weight-1 legs), the map a -> w_a."""

    components: dict[Atom, dict[Any, Any]] = {}
    weights: dict[Atom, int] = {}
    for (u, v), coeff in w.rebased().terms.items():
        if isinstance(u, Atom):
            bucket = components.setdefault(u, {})
            bucket[v] = bucket.get(v, QQ.zero) + coeff
            weights[u] = leg_weight(v)
    return {atom: LinComb(w.ctx, weights[atom], terms) for atom, terms in sorted(components.items())}


def depth_of_symbol(symbol: Any) -> int:
    """Fewest nonzero entries minus one over translations of the symbol."""

    if isinstance(symbol, Atom):
        return 0
    largest = Counter(symbol.entries).most_common(1)[0][1]
    return len(symbol.entries) - largest - 1


def wedge_depths(w: WedgeElem) -> list[tuple[int, int]]:
    return [(depth_of_symbol(u), depth_of_symbol(v)) for u, v in w.terms]


def classical_li(weight: int, argument: FieldElem) -> LinComb:
    """Li_m^L(u) = -cor(1, 0, ..., 0, u) with m - 1 zeros."""

    ctx = argument.ctx
    return -normalize([ctx.one] + [ctx.zero] * (weight - 1) + [argument])


def substitute_symbols(e: LinComb, name: str, value: FieldElem) -> LinComb:
    """Replace a variable inside every entry and renormalize."""

    ctx = e.ctx
    if e.weight == 1:
        base = ctx.factor_base
        terms: dict[Any, Any] = {}
        for atom, coeff in e.rebased().terms.items():
            for leaf, power in base.word(base.value(atom).substitute(name, value)).terms.items():
                terms[leaf] = terms.get(leaf, QQ.zero) + coeff * power
        return LinComb(ctx, 1, terms)
    parts = [
        (coeff, normalize([entry.substitute(name, value) for entry in symbol.entries]))
        for symbol, coeff in e.terms.items()
    ]
    return combine(ctx, e.weight, parts)


def free_variables(e: LinComb) -> tuple[str, ...]:
    """Variables occurring in some entry (or atom) of ``e``, in context order."""

    ctx = e.ctx
    used: set[str] = set()
    for key in e.terms:
        if isinstance(key, Atom):
            used.update(ctx.factor_base.value(key).free_variables())
        else:
            for entry in key.entries:
                used.update(entry.free_variables())
    return tuple(name for name in ctx.variables if name in used)
