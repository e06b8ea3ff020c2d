from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formal_polylog.coalg import classical_li, cor
from formal_polylog.errors import FieldError, SymbolError
from formal_polylog.field import FieldContext
from formal_polylog.hopf import IISym
from formal_polylog.polylog import (
    LiSym,
    QSWord,
    certify_depth,
    depth_bound,
    depth_drop_check,
    leading_zero_rewrite,
    li_expand,
    li_lie,
    qshuffle,
    shuffle_words,
    verify_cyclic_mod_depth,
    verify_inversion_general,
    verify_li_homomorphism,
    verify_stuffle_antipode,
)
from formal_polylog.relations import RelationDB
from formal_polylog.special import SpecPoint
from formal_polylog.timing import Budget

CTX = FieldContext(("x", "y", "z"))


def test_symbol_validation(ctx: FieldContext) -> None:
    x = ctx.variable("x")

    with pytest.raises(SymbolError):
        LiSym.of((), ())
    with pytest.raises(SymbolError):
        LiSym.of((0,), (x,))
    with pytest.raises(SymbolError):
        LiSym.of((1, 2), (x,))
    with pytest.raises(FieldError):
        LiSym.of((2,), (ctx.zero,))


def test_symbol_shape(ctx: FieldContext) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")
    s = LiSym.of((2, 1), (x, y), n0=1)

    assert s.weight == 4
    assert s.depth == 2
    assert str(s) == "Li[1; 2,1](x, y)"
    assert s.reversed() == LiSym.of((1, 2), (y, x), n0=1)


def test_expansion_into_iterated_integrals(ctx: FieldContext) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")
    zero, one = ctx.zero, ctx.one

    assert li_expand(LiSym.of((1, 1), (x, y))) == (1, IISym(zero, (one, x), x * y))
    assert li_expand(LiSym.of((1,), (x,), n0=1)) == (-1, IISym(zero, (zero, one), x))
    assert li_expand(LiSym.of((3,), (x,))) == (-1, IISym(zero, (one, zero, zero), x))
    assert li_lie(LiSym.of((2,), (x,))) == classical_li(2, x)


def test_depth_bounds(ctx: FieldContext) -> None:
    t, s, x = ctx.variable("t"), ctx.variable("s"), ctx.variable("x")

    assert depth_bound(cor(ctx.zero, ctx.one, t, s)) == 2
    assert depth_bound(classical_li(3, x)) == 1
    assert depth_bound(cor(ctx.zero, t)) == 0


def test_stuffle_antipode(ctx: FieldContext, db: RelationDB) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")

    assert verify_stuffle_antipode(LiSym.of((2,), (x,)), db).tier == "exact"
    certificate = verify_stuffle_antipode(LiSym.of((1, 1), (x, y)), db)

    assert certificate.certified
    assert certificate.tier == "depth-syntactic"
    assert certificate.details["depth"] == 2


def test_general_inversion(ctx: FieldContext, db: RelationDB) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")

    assert verify_inversion_general(LiSym.of((1, 1), (x, y)), db).tier == "depth-syntactic"
    with pytest.raises(SymbolError):
        verify_inversion_general(LiSym.of((1,), (x,)), db)


def test_empty_truncation_does_not_certify_depth(ctx: FieldContext, db: RelationDB) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")

    certificate = certify_depth("li-1-2", li_lie(LiSym.of((1, 2), (x, y))), 2, db, establish=False)

    assert not certificate.certified
    assert certificate.tier == "none"
    assert certificate.details["reduced_bound"] == 2
    assert certificate.details["truncated_vacuous"] is True


def test_depth_two_in_weight_four_is_not_certified(ctx: FieldContext, db: RelationDB) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")

    certificate = certify_depth("li-2-2", li_lie(LiSym.of((2, 2), (x, y))), 2, db, establish=False)

    assert not certificate.certified
    assert certificate.tier == "none"
    assert certificate.details["necessary_only"] is True


@pytest.mark.parametrize("indices", [(1, 2), (2, 1)])
def test_stuffle_antipode_in_weight_three_needs_the_full_cobracket(
    ctx: FieldContext, db: RelationDB, indices: tuple[int, int]
) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")

    certificate = verify_stuffle_antipode(LiSym.of(indices, (x, y)), db, budget=Budget(2.0))

    assert certificate.weight == 3
    assert certificate.details["truncated_vacuous"] is True
    assert certificate.tier == "none"
    assert not certificate.certified


def test_general_inversion_in_weight_three_never_uses_the_truncated_tier(ctx: FieldContext, db: RelationDB) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")

    certificate = verify_inversion_general(LiSym.of((2, 1), (x, y)), db, budget=Budget(2.0))

    assert certificate.details["truncated_vacuous"] is True
    assert certificate.tier != "truncated-depth"
    assert certificate.certified == (certificate.tier != "none")


def test_cyclic_symmetry_modulo_depth(ctx: FieldContext, db: RelationDB) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")

    certificate = verify_cyclic_mod_depth((x, y, ctx.one), 1, db)

    assert certificate.tier == "depth-syntactic"
    assert certificate.details["structural"] is True
    with pytest.raises(SymbolError):
        verify_cyclic_mod_depth((x, y, ctx.one), 0, db)
    with pytest.raises(FieldError):
        verify_cyclic_mod_depth((ctx.zero, y, ctx.one), 1, db)


def test_leading_zero_rewrite(ctx: FieldContext) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")

    rewritten = leading_zero_rewrite((ctx.zero, x), y)

    assert dict(rewritten.terms) == {IISym(ctx.zero, (x, ctx.zero), y): -1}
    assert dict(leading_zero_rewrite((x, ctx.zero), y).terms) == {IISym(ctx.zero, (x, ctx.zero), y): 1}


def test_depth_drops_when_an_argument_vanishes(ctx: FieldContext) -> None:
    t, x = ctx.variable("t"), ctx.variable("x")

    assert depth_drop_check(LiSym.of((2,), (t,)), SpecPoint("t", ctx.zero)).tier == "exact"
    certificate = depth_drop_check(LiSym.of((1, 1), (t, x)), SpecPoint("t", ctx.zero))
    assert certificate.details["single_vanishing"] is True
    assert certificate.details["depth"] == 2
    with pytest.raises(SymbolError):
        depth_drop_check(LiSym.of((2,), (x,)), SpecPoint("t", ctx.zero))


def test_quasi_shuffle_words(ctx: FieldContext) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")
    a, b = QSWord(((1, x),)), QSWord(((1, y),))

    product = qshuffle(a, b)

    assert len(product) == 3
    assert QSWord(((2, x * y),)) in product.terms
    assert len(shuffle_words(a, b)) == 2
    assert qshuffle(QSWord(), a) == shuffle_words(a, QSWord())
    assert str(QSWord()) == "1"
    with pytest.raises(SymbolError):
        QSWord(((0, x),))


def test_li_homomorphism(ctx: FieldContext, db: RelationDB) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")

    assert verify_li_homomorphism(QSWord(), QSWord(((2, x),)), db).tier == "exact"
    certificate = verify_li_homomorphism(QSWord(((1, x),)), QSWord(((1, y),)), db)
    assert certificate.certified
    assert certificate.weight == 2
    with pytest.raises(SymbolError):
        verify_li_homomorphism(QSWord(((4, x),)), QSWord(((3, y),)), db)


_LETTER = st.tuples(
    st.integers(min_value=1, max_value=2),
    st.sampled_from(["x", "y", "z"]).map(CTX.variable),
)
_WORD = st.lists(_LETTER, max_size=2).map(lambda letters: QSWord(tuple(letters)))


@settings(max_examples=30, deadline=None)
@given(_WORD, _WORD)
def test_quasi_shuffle_is_commutative(first, second) -> None:
    assert qshuffle(first, second) == qshuffle(second, first)


@settings(max_examples=20, deadline=None)
@given(_WORD, _WORD, _WORD)
def test_quasi_shuffle_is_associative(first, second, third) -> None:
    def times(vector, word):
        total = {}
        for key, coeff in vector.terms.items():
            for product, value in qshuffle(key, word).terms.items():
                total[product] = total.get(product, 0) + coeff * value
        return {key: value for key, value in total.items() if value}

    def times_left(word, vector):
        total = {}
        for key, coeff in vector.terms.items():
            for product, value in qshuffle(word, key).terms.items():
                total[product] = total.get(product, 0) + coeff * value
        return {key: value for key, value in total.items() if value}

    assert times(qshuffle(first, second), third) == times_left(first, qshuffle(second, third))
