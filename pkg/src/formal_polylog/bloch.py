"""The weight-2 Bloch group, its maps to and from the Lie coalgebra, and the 22-term checks."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from time import perf_counter
from typing import Any

from sympy.polys.domains import QQ

from .coalg import (
    CorrSym,
    LinComb,
    Tensor3,
    WedgeElem,
    add_pair,
    classical_li,
    cobracket,
    combine,
    components_by_weight1,
    wedge_is_zero,
)
from .config import config as default_config
from .errors import FieldError
from .field import FieldContext, FieldElem, Vector, format_rational
from .relations import RelationDB, certify_membership, echelon_rows, reduce_against
from .schemas import Certificate
from .timing import Budget

logger = logging.getLogger("formal_polylog.bloch")


class BlochElem(Vector):
    """Finite combination of generators [a] keyed by field elements; [0] is dropped, [1] is kept."""

    __slots__ = ("ctx",)

    def __init__(self, ctx: FieldContext, terms: Mapping[FieldElem, Any] | None = None) -> None:
        super().__init__({key: coeff for key, coeff in (terms or {}).items() if not key.is_zero})
        self.ctx = ctx

    def _new(self, terms: Mapping[Any, Any]) -> BlochElem:
        return BlochElem(self.ctx, terms)

    @classmethod
    def of(cls, element: FieldElem, coeff: Any = 1) -> BlochElem:
        return cls(element.ctx, {element: QQ(coeff) if isinstance(coeff, int) else coeff})

    @classmethod
    def from_pairs(cls, ctx: FieldContext, pairs: Iterable[tuple[Any, FieldElem]]) -> BlochElem:
        terms: dict[FieldElem, Any] = {}
        for coeff, element in pairs:
            terms[element] = terms.get(element, QQ.zero) + (QQ(coeff) if isinstance(coeff, int) else coeff)
        return cls(ctx, terms)

    def without_one(self) -> BlochElem:
        return BlochElem(self.ctx, {key: coeff for key, coeff in self.terms.items() if not key.is_one})

    def __str__(self) -> str:
        pieces = []
        for key, coeff in self.items():
            magnitude = abs(coeff)
            body = f"{{{key}}}" if magnitude == 1 else f"{format_rational(magnitude)}*{{{key}}}"
            pieces.append(("- " if coeff < 0 else "+ ") + body)
        if not pieces:
            return "0"
        joined = " ".join(pieces)
        return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]

    __repr__ = __str__


def bloch_delta(e: BlochElem) -> WedgeElem:
    """Sum of c * a ^ (1 - a); the generators [0] and [1] contribute nothing."""

    ctx = e.ctx
    base = ctx.factor_base
    terms: dict[Any, Any] = {}
    for argument, coeff in e.terms.items():
        if argument.is_one:
            continue
        left = base.word(argument).terms
        right = base.word(1 - argument).terms
        for u, cu in left.items():
            for v, cv in right.items():
                add_pair(terms, u, v, coeff * cu * cv)
    return WedgeElem(ctx, terms).rebased()


def map_L2(e: BlochElem) -> LinComb:
    """{a} -> Li_2^L(a) = -cor(1, 0, a)."""

    return combine(e.ctx, 2, [(coeff, classical_li(2, argument)) for argument, coeff in e.terms.items()])


def map_L3(e: BlochElem) -> LinComb:
    """{a} -> Li_3^L(a) = -cor(1, 0, 0, a)."""

    return combine(e.ctx, 3, [(coeff, classical_li(3, argument)) for argument, coeff in e.terms.items()])


def cross_ratio(symbol: CorrSym) -> FieldElem | None:
    x0, x1, x2 = symbol.entries
    if len({x0, x1, x2}) < 3:
        return None
    return (x2 - x0) / (x1 - x0)


def map_M2(e: LinComb) -> BlochElem:
    """cor(x0, x1, x2) with distinct entries -> {(x2 - x0)/(x1 - x0)}; anything else -> 0.

    The ratio is read off the canonical representative of the symbol's orbit, so
    map_M2(Li2(a)) need not be {1 - a} itself; only its bloch_delta is fixed.
    """

    ctx = e.ctx
    if e.weight != 2:
        return BlochElem(ctx)
    pairs = []
    for symbol, coeff in e.terms.items():
        ratio = cross_ratio(symbol)
        if ratio is not None:
            pairs.append((coeff, ratio))
    return BlochElem.from_pairs(ctx, pairs)


def five_term(a: FieldElem, b: FieldElem) -> BlochElem:
    """[a] - [b] + [b/a] - [(1 - 1/a)/(1 - 1/b)] + [(1 - a)/(1 - b)]."""

    _check_five_term(a, b)
    ctx = a.ctx
    return BlochElem.from_pairs(
        ctx,
        [
            (1, a),
            (-1, b),
            (1, b / a),
            (-1, (1 - a.inverse()) / (1 - b.inverse())),
            (1, (1 - a) / (1 - b)),
        ],
    )


def _check_five_term(a: FieldElem, b: FieldElem) -> None:
    for name, value in (("a", a), ("b", b)):
        if value.is_zero:
            raise FieldError(f"Five-term relation needs {name} != 0.", details={"constraint": f"{name} != 0"})
        if value.is_one:
            raise FieldError(f"Five-term relation needs {name} != 1.", details={"constraint": f"{name} != 1"})
    if a == b:
        raise FieldError("Five-term relation needs a != b.", details={"constraint": "a != b"})


def verify_five_term(
    a: FieldElem,
    b: FieldElem,
    db: RelationDB | None = None,
    *,
    membership: bool = False,
    budget: Budget | None = None,
) -> Certificate:
    """Certify that the cobracket of the Li_2 image of the five-term element vanishes exactly.

    With ``membership`` the element itself is pushed into the database by descent.
    """

    started = perf_counter()
    relation = five_term(a, b)
    element = map_L2(relation)
    w = cobracket(element)
    exact = wedge_is_zero(w)
    suslin = not bloch_delta(relation).terms
    tier = "delta-exact" if exact else "none"
    details: dict[str, str | int | bool] = {"terms": len(element), "suslin_zero": suslin}
    established = 0
    if exact and membership and db is not None:
        before = len(db)
        if certify_membership(element, db, budget=budget):
            tier = "membership"
        details["member"] = tier == "membership"
        established = len(db) - before
    certificate = Certificate(
        identity="five-term",
        certified=exact,
        tier=tier,  # type: ignore[arg-type]
        weight=2,
        details=details,
        established=established,
        elapsed_ms=round((perf_counter() - started) * 1000, 3),
    )
    logger.info("op=verify identity=five-term certified=%s tier=%s", certificate.certified, certificate.tier)
    return certificate


# ---------------------------------------------------------------------------
# 22-term relation
# ---------------------------------------------------------------------------


def _check_22_term(a: FieldElem, b: FieldElem, c: FieldElem) -> None:
    for name, value in (("a", a), ("b", b), ("c", c)):
        if value.is_zero:
            raise FieldError(f"22-term relation needs {name} != 0.", details={"constraint": f"{name} != 0"})
    for name, value in (("ca-a+1", c * a - a + 1), ("ab-b+1", a * b - b + 1), ("bc-c+1", b * c - c + 1)):
        if value.is_zero:
            raise FieldError(
                f"22-term relation is degenerate: {name} vanishes.", details={"constraint": f"{name} != 0"}
            )


def twenty_two_term(a: FieldElem, b: FieldElem, c: FieldElem) -> BlochElem:
    """The 22-term element of Q[P^1(F)] in the rows of its three-fold cyclic symmetry."""

    _check_22_term(a, b, c)
    ctx = a.ctx
    pairs: list[tuple[int, FieldElem]] = []
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        # rows written for (a, b, c): big_a = ca - a + 1, big_c = bc - c + 1
        big_a = z * x - x + 1
        big_c = y * z - z + 1
        pairs.extend(
            [
                (1, big_a),
                (1, big_a / (z * x)),
                (1, big_c / (big_a * y)),
                (-1, big_a / z),
                (1, -(big_c * x) / big_a),
                (-1, big_c / (big_a * y * z)),
                (1, x),
            ]
        )
    pairs.extend([(1, -(a * b * c)), (-3, ctx.one)])
    return BlochElem.from_pairs(ctx, pairs)


def stage_one_tensor(relation: BlochElem) -> Tensor3:
    """(bloch_delta o map_M2 (x) id) applied to the (2, 1) part of delta(L_3(relation))."""

    ctx = relation.ctx
    w = cobracket(map_L3(relation))
    terms: dict[Any, Any] = {}
    for atom, component in components_by_weight1(w).items():
        if component.weight != 2:
            continue
        # a ^ w_a reads as -(w_a (x) a) in the (2, 1) order
        for (p, q), coeff in bloch_delta(map_M2(component)).terms.items():
            for key, value in (((p, q, atom), -coeff), ((q, p, atom), coeff)):
                terms[key] = terms.get(key, QQ.zero) + value
    return Tensor3(ctx, terms).rebased()


def _anharmonic(x: FieldElem) -> list[FieldElem]:
    if x.is_zero or x.is_one:
        return []
    inverse = x.inverse()
    return [x, inverse, 1 - x, (1 - x).inverse(), 1 - inverse, (1 - inverse).inverse()]


def argument_closure(
    arguments: Iterable[FieldElem],
    degree: int,
    *,
    budget: Budget | None = None,
    limit: int = 400,
) -> list[FieldElem]:
    """Anharmonic orbits of the arguments, and for degree >= 2 of products and ratios of pairs."""

    seeds = [x for x in dict.fromkeys(arguments) if not x.is_zero and not x.is_one]
    generated: list[FieldElem] = list(seeds)
    if degree >= 2:
        for index, x in enumerate(seeds):
            for y in seeds[index:]:
                generated.extend([x * y, x / y])
    closure: dict[FieldElem, None] = {}
    for x in generated:
        if len(closure) >= limit or (budget is not None and budget.expired()):
            break
        for image in _anharmonic(x):
            closure[image] = None
    return sorted(closure, key=lambda element: element.sort_key)


def _two_term_rows(closure: Iterable[FieldElem]) -> list[dict[FieldElem, Any]]:
    rows = []
    for x in closure:
        for partner in (x.inverse(), 1 - x):
            row: dict[FieldElem, Any] = {x: QQ.one}
            if not partner.is_one and not partner.is_zero:
                row[partner] = row.get(partner, QQ.zero) + QQ.one
            rows.append({key: coeff for key, coeff in row.items() if coeff})
    return rows


def five_term_rows(closure: list[FieldElem], *, budget: Budget | None = None) -> list[dict[FieldElem, Any]]:
    """Five-term instances over pairs of the closure whose five arguments all lie in the closure."""

    members = set(closure)
    rows: list[dict[FieldElem, Any]] = []
    for x in closure:
        for y in closure:
            if budget is not None and budget.expired():
                logger.info("op=five-term-rows budget=exhausted rows=%s", len(rows))
                return rows
            if x == y or (y / x) not in members:
                continue
            relation = five_term(x, y).without_one()
            if all(key in members for key in relation.terms):
                rows.append(dict(relation.terms))
    return rows


def stage_two(relation: BlochElem, *, closure_degree: int, budget: Budget | None = None) -> tuple[bool, dict[str, int]]:
    """Show every F^x coordinate of sum c [u] (x) u is a combination of five-term and two-term rows."""

    base = relation.ctx.factor_base
    components: dict[Any, dict[FieldElem, Any]] = {}
    for argument, coeff in relation.without_one().terms.items():
        for atom, power in base.word(argument).rebased().terms.items():
            bucket = components.setdefault(atom, {})
            bucket[argument] = bucket.get(argument, QQ.zero) + coeff * power
    targets = [{key: value for key, value in bucket.items() if value} for bucket in components.values()]
    targets = [target for target in targets if target]
    closure = argument_closure(relation.terms, closure_degree, budget=budget)
    rows = _two_term_rows(closure) + five_term_rows(closure, budget=budget)
    echelon = echelon_rows(rows)
    solved = sum(1 for target in targets if not reduce_against(echelon, target))
    stats = {"closure": len(closure), "rows": len(rows), "components": len(targets), "solved": solved}
    return solved == len(targets), stats


def verify_22_term(
    a: FieldElem,
    b: FieldElem,
    c: FieldElem,
    db: RelationDB | None = None,
    *,
    stage2: bool = True,
    closure_degree: int | None = None,
    budget: Budget | None = None,
) -> Certificate:
    """Stage 1 is the exact composite-differential check; stage 2 is a bounded five-term search."""

    started = perf_counter()
    relation = twenty_two_term(a, b, c)
    tensor = stage_one_tensor(relation)
    stage1 = not tensor.terms
    details: dict[str, str | int | bool] = {"stage1": stage1, "arguments": len(relation)}
    tier = "stage1" if stage1 else "none"
    if db is not None:
        details["lie_delta_modulo_db"] = wedge_is_zero(cobracket(map_L3(relation)), db)
    if stage1 and stage2:
        degree = closure_degree or default_config.closure_degree
        limit = budget or Budget(default_config.time_budget_s)
        solved, stats = stage_two(relation, closure_degree=degree, budget=limit)
        details.update(stats)
        details["stage2"] = solved
        details["budget_exhausted"] = limit.expired()
        if solved:
            tier = "stage2"
    certificate = Certificate(
        identity="twenty-two",
        certified=stage1,
        tier=tier,  # type: ignore[arg-type]
        weight=3,
        details=details,
        elapsed_ms=round((perf_counter() - started) * 1000, 3),
    )
    logger.info(
        "op=verify identity=twenty-two stage1=%s stage2=%s elapsed_ms=%s",
        stage1,
        details.get("stage2", "skipped"),
        certificate.elapsed_ms,
    )
    return certificate
