from __future__ import annotations

import pytest

from formal_polylog.coalg import LinComb, cobracket, cor
from formal_polylog.errors import FieldError, SymbolError
from formal_polylog.families import KINDS
from formal_polylog.field import FieldContext
from formal_polylog.hopf import (
    HopfElem,
    IISym,
    cobracket_via_coproduct,
    coassociator,
    coproduct,
    cor_to_ii,
    hopf_symbol,
    ii_cobracket,
    ii_to_lie,
    lie_via_infinity,
    path_compose,
    project,
    reduced_coproduct,
    shuffle_product,
    verify_distribution_hopf,
)
from formal_polylog.identities import verify_shuffle
from formal_polylog.polylog import LiSym, classical_reduced_coproduct, li_hopf
from formal_polylog.relations import RelationDB


def test_symbol_text_and_weight(ctx: FieldContext) -> None:
    t = ctx.variable("t")
    symbol = IISym.of(ctx.zero, ctx.one, t, t + 1)

    assert symbol.weight == 2
    assert str(symbol) == "II(0; 1, t; t + 1)"
    with pytest.raises(SymbolError):
        IISym.of(ctx.zero)


def test_normal_form_of_special_symbols(ctx: FieldContext) -> None:
    t = ctx.variable("t")

    assert hopf_symbol(IISym.of(ctx.zero, t)) == HopfElem.one(ctx)
    assert hopf_symbol(IISym.of(t, ctx.one, t)) == 0
    log = hopf_symbol(IISym.of(ctx.zero, ctx.zero, t))
    assert hopf_symbol(IISym.of(ctx.zero, ctx.zero, ctx.zero, t)) * 2 == log * log


def test_lie_shadow_of_weight_one(ctx: FieldContext) -> None:
    t = ctx.variable("t")

    assert ii_to_lie(IISym.of(ctx.zero, ctx.one, t)) == LinComb.from_word(ctx.factor_base.word(t - 1))
    assert ii_to_lie(IISym.of(ctx.zero, t)) == 0
    assert project(IISym.of(ctx.zero, ctx.one, t)) == ii_to_lie(IISym.of(ctx.zero, ctx.one, t))


def test_lie_shadow_is_affine_invariant(ctx: FieldContext) -> None:
    t, s = ctx.variable("t"), ctx.variable("s")
    points = (ctx.zero, ctx.one, t, s, t + 2)

    moved = IISym.of(*(point * -3 + s for point in points))

    assert ii_to_lie(moved) == ii_to_lie(IISym.of(*points))


def test_correlators_telescope_from_zero(ctx: FieldContext) -> None:
    t, s = ctx.variable("t"), ctx.variable("s")
    entries = (ctx.one, t, s, t + s)

    total = LinComb.zero(ctx, 3)
    for symbol in cor_to_ii(entries):
        total = total + ii_to_lie(symbol)

    assert len(cor_to_ii(entries)) == 4
    assert total == cor(*entries)


def test_reduced_coproduct(ctx: FieldContext) -> None:
    x = ctx.variable("x")

    assert reduced_coproduct(IISym.of(ctx.zero, ctx.one, x)) == 0
    li2 = li_hopf(LiSym.of((2,), (x,)))
    assert reduced_coproduct(li2) != 0
    assert reduced_coproduct(li2) == classical_reduced_coproduct(2, x)
    assert reduced_coproduct(li2).bigradings() == {(1, 1)}


def test_coproduct_of_the_unit(ctx: FieldContext) -> None:
    one = HopfElem.one(ctx)

    assert coproduct(one) != 0
    assert coproduct(one) == coproduct(IISym.of(ctx.zero, ctx.variable("t")))


def test_coassociativity_in_weight_two(ctx: FieldContext) -> None:
    t, s = ctx.variable("t"), ctx.variable("s")

    assert coassociator(IISym.of(ctx.zero, ctx.one, t, s)) == 0


@pytest.mark.slow
def test_coassociativity_in_weight_three(ctx: FieldContext) -> None:
    t, s = ctx.variable("t"), ctx.variable("s")

    assert coassociator(IISym.of(ctx.zero, ctx.one, t, ctx.one, s)) == 0


def test_cobracket_routes_agree(ctx: FieldContext) -> None:
    t, s = ctx.variable("t"), ctx.variable("s")

    for symbol in (IISym.of(ctx.zero, ctx.one, t, s), IISym.of(ctx.one, t, ctx.zero, t + s)):
        direct = cobracket(ii_to_lie(symbol))
        assert cobracket_via_coproduct(symbol) == direct
        assert ii_cobracket(symbol) == direct


def test_shuffle_product_matches_the_algebra_product(ctx: FieldContext) -> None:
    x = ctx.variable("x")
    symbol = IISym.of(ctx.zero, ctx.one, x)

    assert shuffle_product(symbol, symbol) == hopf_symbol(symbol) * hopf_symbol(symbol)
    with pytest.raises(SymbolError):
        shuffle_product(symbol, IISym.of(ctx.one, ctx.zero, x))


def test_path_composition(ctx: FieldContext) -> None:
    x, a = ctx.variable("x"), ctx.variable("a")
    symbol = IISym.of(ctx.zero, ctx.one, x)

    assert path_compose(symbol, a) == hopf_symbol(symbol)


def test_lower_bound_sent_to_infinity(ctx: FieldContext) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")

    assert lie_via_infinity(IISym.of(y, ctx.one, x)) == cor(ctx.one, x)
    with pytest.raises(SymbolError):
        lie_via_infinity(IISym.of(ctx.zero, ctx.one, x))
    with pytest.raises(SymbolError):
        lie_via_infinity(IISym.of(y, y + 1, x))


def test_distribution_of_iterated_integrals(ctx: FieldContext, db: RelationDB) -> None:
    x = ctx.variable("x")
    symbol = IISym.of(ctx.zero, ctx.one, x)

    assert verify_distribution_hopf(2, symbol, db).tier == "exact"
    assert verify_distribution_hopf(1, IISym.of(ctx.zero, ctx.one, x, ctx.variable("y")), db).tier == "exact"
    with pytest.raises(FieldError):
        verify_distribution_hopf(3, symbol, db)


def test_merged_and_unmerged_products_agree_after_projection(ctx: FieldContext, db: RelationDB) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")
    first, second = IISym.of(ctx.zero, ctx.one, x), IISym.of(ctx.zero, y, x)

    merged = project(shuffle_product(first, second))
    unmerged = project(hopf_symbol(first) * hopf_symbol(second))

    at_upper = KINDS["shuffle"].make((x, ctx.one, y), 1)
    at_lower = KINDS["shuffle"].make((ctx.zero, ctx.one, y), 1)
    assert unmerged == 0
    assert merged - unmerged == KINDS["shuffle"].element(at_upper) - KINDS["shuffle"].element(at_lower)
    assert verify_shuffle((x, ctx.one, y), 1, 1, db).certified
    assert verify_shuffle((ctx.zero, ctx.one, y), 1, 1, db).certified
