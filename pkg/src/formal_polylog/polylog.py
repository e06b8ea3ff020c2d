"""Multiple polylogarithms, the depth filtration, and quasi-shuffle words."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
from time import perf_counter
from typing import Any

from sympy.polys.domains import QQ

from .coalg import LinComb, cobracket, combine, cor, depth_of_symbol, truncated_cobracket
from .errors import FieldError, SymbolError
from .families import shuffles
from .field import FieldElem, Vector, valuation_of
from .hopf import HopfElem, HopfTensor, IISym, hopf_symbol, ii_to_lie, project
from .identities import make_certificate, verify_depth1_inversion
from .relations import RelationDB, certify_membership, certify_wedge
from .schemas import Certificate
from .special import SpecPoint, specialize
from .timing import Budget

logger = logging.getLogger("formal_polylog.polylog")

MAX_PRODUCT_WEIGHT = 6


@dataclass(frozen=True)
class LiSym:
    """Li_{n0; n1, ..., nk}(a1, ..., ak)."""

    n0: int
    indices: tuple[int, ...]
    args: tuple[FieldElem, ...]

    def __post_init__(self) -> None:
        if not self.indices:
            raise SymbolError("A polylogarithm needs at least one index.")
        if len(self.indices) != len(self.args):
            raise SymbolError(
                "Indices and arguments must have the same length.",
                details={"indices": len(self.indices), "args": len(self.args)},
            )
        if self.n0 < 0 or any(n < 1 for n in self.indices):
            raise SymbolError("Indices must be positive and n0 nonnegative.", details={"n0": self.n0})
        if any(arg.is_zero for arg in self.args):
            raise FieldError("Polylogarithm arguments must be nonzero.")

    @classmethod
    def of(cls, indices: Sequence[int], args: Sequence[FieldElem], n0: int = 0) -> LiSym:
        return cls(n0, tuple(indices), tuple(args))

    @property
    def depth(self) -> int:
        return len(self.indices)

    @property
    def weight(self) -> int:
        return self.n0 + sum(self.indices)

    @property
    def ctx(self) -> Any:
        return self.args[0].ctx

    def reversed(self) -> LiSym:
        return LiSym(self.n0, self.indices[::-1], self.args[::-1])

    def inverted(self) -> LiSym:
        return LiSym(self.n0, self.indices, tuple(arg.inverse() for arg in self.args))

    def __str__(self) -> str:
        indices = ",".join(str(n) for n in self.indices)
        args = ", ".join(str(arg) for arg in self.args)
        head = f"{self.n0}; {indices}" if self.n0 else indices
        return f"Li[{head}]({args})"


def li_expand(s: LiSym) -> tuple[int, IISym]:
    """(sign, I(0; 0^n0, 1, 0^(n1-1), a1, ..., 0^(nk-1); a1...ak))."""

    ctx = s.ctx
    zero = ctx.zero
    middle: list[FieldElem] = [zero] * s.n0 + [ctx.one]
    partial = ctx.one
    for index, arg in zip(s.indices[:-1], s.args[:-1], strict=True):
        partial = partial * arg
        middle += [zero] * (index - 1) + [partial]
    middle += [zero] * (s.indices[-1] - 1)
    sign = -1 if s.depth % 2 else 1
    return sign, IISym(zero, middle, partial * s.args[-1])


def li_hopf(s: LiSym) -> HopfElem:
    sign, symbol = li_expand(s)
    return hopf_symbol(symbol) * sign


def li_lie(s: LiSym) -> LinComb:
    sign, symbol = li_expand(s)
    return ii_to_lie(symbol) * sign


def depth_bound(e: LinComb) -> int:
    """Largest depth over the terms of ``e``; an upper bound for its depth filtration level."""

    if e.weight <= 1:
        return 0
    return max((depth_of_symbol(symbol) for symbol in e.rebased().terms), default=0)


def classical_reduced_coproduct(n: int, x: FieldElem) -> HopfTensor:
    """Sum over j of Li_{n-j}(x) (x) I(0; 0^j; x), the reduced coproduct of Li_n(x)."""

    ctx = x.ctx
    result = HopfTensor(ctx)
    for j in range(1, n):
        log_power = hopf_symbol(IISym(ctx.zero, (ctx.zero,) * j, x))
        result = result + HopfTensor.outer(li_hopf(LiSym.of((n - j,), (x,))), log_power)
    return result


# ---------------------------------------------------------------------------
# quasi-shuffle words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QSWord:
    """A word of letters (n, x) with n positive and x nonzero; the empty word is the unit."""

    letters: tuple[tuple[int, FieldElem], ...] = ()

    def __post_init__(self) -> None:
        for n, x in self.letters:
            if n < 1:
                raise SymbolError("Letter weights must be positive.", details={"n": n})
            if x.is_zero:
                raise FieldError("Letter arguments must be nonzero.")

    @property
    def weight(self) -> int:
        return sum(n for n, _ in self.letters)

    @property
    def sort_key(self) -> tuple[Any, ...]:
        return (len(self.letters), tuple((n, x.sort_key) for n, x in self.letters))

    def __lt__(self, other: QSWord) -> bool:
        return self.sort_key < other.sort_key

    def __len__(self) -> int:
        return len(self.letters)

    def prepend(self, letter: tuple[int, FieldElem]) -> QSWord:
        return QSWord((letter,) + self.letters)

    def li(self) -> LiSym | None:
        """Li_{n1..nk}(x1..xk); None for the empty word."""

        if not self.letters:
            return None
        return LiSym.of(tuple(n for n, _ in self.letters), tuple(x for _, x in self.letters))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "[" + "|".join(f"{n},{x}" for n, x in self.letters) + "]"

    __repr__ = __str__


@lru_cache(maxsize=8192)
def _product(left: QSWord, right: QSWord, merge: bool) -> tuple[tuple[QSWord, Any], ...]:
    if not left.letters:
        return ((right, QQ.one),)
    if not right.letters:
        return ((left, QQ.one),)
    a, b = left.letters[0], right.letters[0]
    rest_left, rest_right = QSWord(left.letters[1:]), QSWord(right.letters[1:])
    terms: dict[QSWord, Any] = {}
    steps = [(a, rest_left, right), (b, left, rest_right)]
    if merge:
        steps.append(((a[0] + b[0], a[1] * b[1]), rest_left, rest_right))
    for letter, first, second in steps:
        for word, coeff in _product(first, second, merge):
            key = word.prepend(letter)
            terms[key] = terms.get(key, QQ.zero) + coeff
    return tuple((word, coeff) for word, coeff in terms.items() if coeff)


def qshuffle(w1: QSWord, w2: QSWord) -> Vector:
    """Quasi-shuffle product with letter merge (n, x).(m, y) = (n + m, xy)."""

    return Vector(dict(_product(w1, w2, True)))


def shuffle_words(w1: QSWord, w2: QSWord) -> Vector:
    return Vector(dict(_product(w1, w2, False)))


def word_hopf(w: QSWord) -> HopfElem | None:
    s = w.li()
    return None if s is None else li_hopf(s)


def verify_li_homomorphism(
    w1: QSWord,
    w2: QSWord,
    db: RelationDB,
    *,
    membership: bool = False,
    establish: bool = True,
    budget: Budget | None = None,
    max_weight: int = MAX_PRODUCT_WEIGHT,
) -> Certificate:
    """Li(w1) * Li(w2) - Li(w1 * w2) projected to the Lie coalgebra and certified there."""

    started = perf_counter()
    before = len(db)
    weight = w1.weight + w2.weight
    if weight > max_weight:
        raise SymbolError(f"Total weight {weight} exceeds the bound {max_weight}.", details={"weight": weight})
    first, second = word_hopf(w1), word_hopf(w2)
    if first is None or second is None:
        return make_certificate("li-hom", "exact", weight=weight, started=started, details={"unit": True})
    difference = first * second
    for word, coeff in qshuffle(w1, w2).terms.items():
        merged = word.li()
        assert merged is not None
        difference = difference - li_hopf(merged) * coeff
    element = project(difference)
    details: dict[str, str | int | bool] = {"words": len(qshuffle(w1, w2)), "terms": len(element)}
    if not element.rebased().terms:
        tier: str | None = "exact"
    else:
        tier = certify_wedge(cobracket(element), db, establish=establish, budget=budget)
        if tier is not None and membership:
            member = certify_membership(element, db, budget=budget)
            details["member"] = member
            if member:
                tier = "membership"
    return make_certificate(
        "li-hom", tier, weight=weight, started=started, details=details, established=len(db) - before
    )


# ---------------------------------------------------------------------------
# depth filtration
# ---------------------------------------------------------------------------


def certify_depth(
    identity: str,
    element: LinComb,
    depth: int,
    db: RelationDB,
    *,
    establish: bool = True,
    budget: Budget | None = None,
) -> Certificate:
    """Certificate that ``element`` lies in D_{depth-1}, recording which tier fired."""

    started = perf_counter()
    before = len(db)
    bound = depth_bound(element)
    details: dict[str, str | int | bool] = {"depth": depth, "bound": bound}
    tier: str | None = None
    if not element.rebased().terms:
        tier = "exact"
    elif bound <= depth - 1:
        tier = "depth-syntactic"
    else:
        reduced = db.reduce(element)
        details["reduced_bound"] = depth_bound(reduced)
        if not reduced.rebased().terms:
            tier = "membership"
        elif depth_bound(reduced) <= depth - 1:
            tier = "depth-syntactic"
            details["reduced"] = True
        elif depth == 1:
            tier = certify_wedge(cobracket(element), db, establish=establish, budget=budget)
        else:
            w = truncated_cobracket(reduced).rebased()
            if not w.terms:
                # an empty truncation carries no depth information
                details["truncated_vacuous"] = True
                tier = certify_wedge(cobracket(reduced), db, establish=establish, budget=budget)
            else:
                details["necessary_only"] = True
                if all(depth_of_symbol(u) + depth_of_symbol(v) <= depth - 1 for u, v in w.terms):
                    tier = "truncated-depth"
    return make_certificate(
        identity, tier, weight=element.weight, started=started, details=details, established=len(db) - before
    )


def verify_stuffle_antipode(s: LiSym, db: RelationDB, *, budget: Budget | None = None) -> Certificate:
    """Li(x1..xk) + (-1)^k Li(xk..x1) with reversed indices lies in D_{k-1}."""

    sign = -1 if s.depth % 2 else 1
    element = li_lie(s) + li_lie(s.reversed()) * sign
    return certify_depth("stuffle-antipode", element, s.depth, db, budget=budget)


def verify_inversion_general(s: LiSym, db: RelationDB, *, budget: Budget | None = None) -> Certificate:
    """Li(x) - (-1)^(n+k) Li(1/x) lies in D_{k-1}."""

    if s.weight < 2:
        raise SymbolError("General inversion needs weight at least 2.", details={"weight": s.weight})
    if s.depth == 1 and s.n0 == 0:
        return verify_depth1_inversion(s.indices[0], s.args[0], db, budget=budget)
    sign = 1 if (s.weight + s.depth) % 2 else -1
    element = li_lie(s) + li_lie(s.inverted()) * sign
    return certify_depth("inversion-general", element, s.depth, db, budget=budget)


def verify_cyclic_mod_depth(x: Sequence[FieldElem], i: int, db: RelationDB) -> Certificate:
    """I(0; x1..xn; x_{n+1}) against I(0; x_{i+1}..x_{n+1}, x1..x_{i-1}; x_i) modulo lower depth.

    ``x`` holds x1, ..., x_{n+1} and ``i`` is 1-based.
    """

    started = perf_counter()
    points = tuple(x)
    n = len(points) - 1
    if n < 2:
        raise SymbolError("Cyclic symmetry needs weight at least 2.", details={"weight": n})
    if not 1 <= i <= n:
        raise SymbolError(f"Index {i} must lie between 1 and {n}.", details={"i": i})
    if points[i - 1].is_zero or points[n].is_zero:
        raise FieldError("Cyclic symmetry needs x_i and x_{n+1} nonzero.", details={"constraint": "x_i*x_{n+1} != 0"})
    zero = points[0].ctx.zero
    rotated = points[i:] + points[: i - 1]
    element = ii_to_lie(IISym(zero, points[:n], points[n])) - ii_to_lie(IISym(zero, rotated, points[i - 1]))
    expected = cor(zero, *rotated) - cor(zero, *points[:n])
    depth = sum(1 for entry in points[:n] if not entry.is_zero)
    structural = element == expected
    bound = depth_bound(element)
    details: dict[str, str | int | bool] = {"structural": structural, "depth": depth, "bound": bound}
    if not element.rebased().terms:
        tier: str | None = "exact"
    elif structural and bound <= depth - 1:
        tier = "depth-syntactic"
    else:
        tier = None
    return make_certificate("cyclic-depth", tier, weight=n, started=started, details=details)


def leading_zero_rewrite(middle: Sequence[FieldElem], b: FieldElem) -> Vector:
    """Rewrite I^L(0; 0^j, y1, ...; b) by shuffles into symbols without leading zeros.

    Returns a combination of :class:`IISym` keys; every symbol keeps the nonzero entries
    of the input.
    """

    word = tuple(middle)
    zero = b.ctx.zero
    memo: dict[tuple[FieldElem, ...], dict[tuple[FieldElem, ...], Any]] = {}

    def rewrite(current: tuple[FieldElem, ...]) -> dict[tuple[FieldElem, ...], Any]:
        if current in memo:
            return memo[current]
        lead = next((index for index, entry in enumerate(current) if not entry.is_zero), len(current))
        if lead == 0 or lead == len(current):
            memo[current] = {current: QQ.one}
            return memo[current]
        result: dict[tuple[FieldElem, ...], Any] = {}
        skipped = False
        for shuffled in shuffles(current[:lead], current[lead:]):
            if not skipped and shuffled == current:
                skipped = True
                continue
            for key, coeff in rewrite(shuffled).items():
                result[key] = result.get(key, QQ.zero) - coeff
        memo[current] = {key: coeff for key, coeff in result.items() if coeff}
        return memo[current]

    terms = {IISym(zero, key, b): coeff for key, coeff in rewrite(word).items()}
    logger.debug("op=leading_zero_rewrite weight=%s terms=%s", len(word), len(terms))
    return Vector(terms)


def rewrite_to_lie(comb: Vector, weight: int) -> LinComb:
    ctx = next(iter(comb.terms)).ctx if comb.terms else None
    if ctx is None:
        raise SymbolError("An empty rewrite has no context.")
    return combine(ctx, weight, [(coeff, ii_to_lie(symbol)) for symbol, coeff in comb.terms.items()])


def depth_drop_check(s: LiSym, point: SpecPoint, db: RelationDB | None = None) -> Certificate:
    """Specializing Li^L at a point where some argument has nonzero valuation lands in D_{k-1}.

    When exactly one argument vanishes at the point and the others are finite and
    nonzero, the specialization is 0.
    """

    started = perf_counter()
    orders = [valuation_of(arg, point.valuation) for arg in s.args]
    if all(order == 0 for order in orders):
        raise SymbolError(
            f"No argument of {s} has a zero or pole at {point.label()}.", details={"point": point.label()}
        )
    specialized = specialize(li_lie(s), point)
    bound = depth_bound(specialized)
    single = sum(1 for order in orders if order > 0) == 1 and all(order >= 0 for order in orders)
    vanishes = not specialized.rebased().terms or (db is not None and db.contains(specialized))
    details: dict[str, str | int | bool] = {
        "depth": s.depth,
        "bound": bound,
        "single_vanishing": single,
        "vanishes": vanishes,
    }
    if single:
        tier: str | None = "exact" if vanishes else None
    else:
        tier = "depth-syntactic" if vanishes or bound <= s.depth - 1 else None
    return make_certificate("depth-drop", tier, weight=s.weight, started=started, details=details)
