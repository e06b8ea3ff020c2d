from __future__ import annotations

import pytest

from formal_polylog.bloch import (
    BlochElem,
    argument_closure,
    bloch_delta,
    five_term,
    map_L2,
    map_L3,
    map_M2,
    twenty_two_term,
    verify_22_term,
    verify_five_term,
)
from formal_polylog.coalg import LinComb, classical_li, cobracket, cor
from formal_polylog.errors import FieldError
from formal_polylog.field import FieldContext
from formal_polylog.relations import RelationDB
from formal_polylog.timing import Budget


def test_bloch_delta_of_torsion_arguments(ctx: FieldContext) -> None:
    a = ctx.variable("a")

    assert bloch_delta(BlochElem.of(ctx.constant(2))) == 0
    assert bloch_delta(BlochElem.of(ctx.constant(1, 2))) == 0
    assert bloch_delta(BlochElem.of(ctx.one)) == 0
    assert bloch_delta(BlochElem.of(a)) != 0
    assert bloch_delta(BlochElem.of(a) + BlochElem.of(1 - a)) == 0


def test_zero_generator_is_dropped(ctx: FieldContext) -> None:
    assert BlochElem.of(ctx.zero) == 0
    assert len(BlochElem.from_pairs(ctx, [(1, ctx.one), (2, ctx.one)])) == 1


def test_maps_to_the_lie_coalgebra(ctx: FieldContext) -> None:
    x = ctx.variable("x")
    element = BlochElem.from_pairs(ctx, [(1, x), (-2, 1 - x)])

    assert map_L2(element) == classical_li(2, x) - classical_li(2, 1 - x) * 2
    assert map_L3(BlochElem.of(x)) == classical_li(3, x)
    assert cobracket(map_L2(BlochElem.of(x))) != 0


def test_m2_sends_distinct_entries_to_their_cross_ratio(ctx: FieldContext) -> None:
    x = ctx.variable("x")

    assert map_M2(LinComb.zero(ctx, 2)) == 0
    assert map_M2(cor(ctx.one, ctx.zero, ctx.one)) == 0
    image = map_M2(cor(ctx.zero, ctx.one, x))
    assert len(image) == 1
    assert bloch_delta(image) == bloch_delta(BlochElem.of(x))


def test_m2_inverts_l2_up_to_the_delta(ctx: FieldContext) -> None:
    x, y = ctx.variable("x"), ctx.variable("y")
    element = BlochElem.from_pairs(ctx, [(1, x), (3, x / y)])

    assert bloch_delta(map_M2(map_L2(element))) == bloch_delta(element)


def test_five_term_symbolic(ctx: FieldContext) -> None:
    a, b = ctx.variable("a"), ctx.variable("b")

    assert len(five_term(a, b)) == 5
    assert bloch_delta(five_term(a, b)) == 0

    certificate = verify_five_term(a, b)

    assert certificate.certified
    assert certificate.tier == "delta-exact"
    assert certificate.details["suslin_zero"] is True
    assert certificate.details["terms"] == 5


def test_five_term_at_integers(ctx: FieldContext) -> None:
    certificate = verify_five_term(ctx.constant(2), ctx.constant(3))

    assert certificate.certified
    assert certificate.weight == 2


def test_five_term_rejects_degenerate_arguments(ctx: FieldContext) -> None:
    t = ctx.variable("t")

    with pytest.raises(FieldError):
        verify_five_term(t, t)
    with pytest.raises(FieldError):
        verify_five_term(ctx.one, t)
    with pytest.raises(FieldError):
        five_term(t, ctx.zero)


@pytest.mark.slow
def test_five_term_membership(ctx: FieldContext, db: RelationDB) -> None:
    a, b = ctx.variable("a"), ctx.variable("b")

    certificate = verify_five_term(a, b, db, membership=True, budget=Budget(30.0))

    assert certificate.certified
    assert "member" in certificate.details


def test_twenty_two_term_shape(ctx: FieldContext) -> None:
    relation = twenty_two_term(ctx.constant(2), ctx.constant(3), ctx.constant(5))

    assert sum(relation.terms.values()) == 7
    assert len(relation) <= 22


def test_twenty_two_term_stage_one_at_integers(ctx: FieldContext) -> None:
    certificate = verify_22_term(ctx.constant(2), ctx.constant(3), ctx.constant(5), stage2=False)

    assert certificate.certified
    assert certificate.tier == "stage1"
    assert certificate.details["stage1"] is True
    assert "stage2" not in certificate.details


def test_twenty_two_term_rejects_degenerate_arguments(ctx: FieldContext) -> None:
    c = ctx.constant

    with pytest.raises(FieldError):
        verify_22_term(c(2), c(-1), c(5))
    with pytest.raises(FieldError):
        verify_22_term(c(0), c(3), c(5))


def test_argument_closure_is_closed_under_inversion(ctx: FieldContext) -> None:
    x = ctx.variable("x")
    closure = argument_closure([x], 1)

    assert len(closure) == 6
    assert all(element.inverse() in closure for element in closure)


@pytest.mark.slow
def test_twenty_two_term_symbolic_stage_one(ctx: FieldContext) -> None:
    a, b, c = ctx.variable("a"), ctx.variable("b"), ctx.variable("c")

    certificate = verify_22_term(a, b, c, stage2=False)

    assert certificate.certified
    assert certificate.tier == "stage1"
