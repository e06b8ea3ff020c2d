from __future__ import annotations

import pytest

from formal_polylog.coalg import classical_li
from formal_polylog.errors import FieldError, SymbolError
from formal_polylog.families import KINDS
from formal_polylog.field import FieldContext
from formal_polylog.identities import (
    certify_element,
    verify_depth1_inversion,
    verify_distribution,
    verify_reversal,
    verify_shuffle,
)
from formal_polylog.relations import RelationDB


def test_weight_two_shuffle(ctx: FieldContext, db: RelationDB) -> None:
    x = ctx.variable("x")

    certificate = verify_shuffle((ctx.zero, ctx.one, x), 1, 1, db)

    assert certificate.certified
    assert certificate.identity == "shuffle"
    assert certificate.tier == "delta-exact"
    assert certificate.weight == 2


def test_shuffle_lengths_must_match(ctx: FieldContext, db: RelationDB) -> None:
    x = ctx.variable("x")

    with pytest.raises(SymbolError):
        verify_shuffle((ctx.zero, ctx.one, x), 1, 2, db)
    with pytest.raises(SymbolError):
        verify_shuffle((ctx.zero, ctx.one, x), 0, 2, db)


def test_weight_two_reversal(ctx: FieldContext, db: RelationDB) -> None:
    x = ctx.variable("x")

    certificate = verify_reversal((ctx.zero, ctx.one, x), db)

    assert certificate.certified
    assert certificate.tier == "delta-exact"


def test_weight_one_distribution_is_exact(ctx: FieldContext, db: RelationDB) -> None:
    x = ctx.variable("x")

    certificate = verify_distribution(2, [ctx.one, x], db)

    assert certificate.tier == "exact"
    assert certificate.established == 0


def test_distribution_needs_the_roots_in_the_field(ctx: FieldContext, db: RelationDB) -> None:
    x = ctx.variable("x")

    with pytest.raises(FieldError):
        verify_distribution(3, [ctx.zero, ctx.one, x], db)
    with pytest.raises(SymbolError):
        verify_distribution(2, [x], db)


def test_depth_one_inversion(ctx: FieldContext, db: RelationDB) -> None:
    x = ctx.variable("x")

    assert verify_depth1_inversion(1, x, db).tier == "exact"
    assert verify_depth1_inversion(2, x, db, membership=False).tier == "delta-exact"

    certificate = verify_depth1_inversion(2, x, db)

    assert certificate.tier == "membership"
    assert certificate.details["member"] is True
    assert db.contains(classical_li(2, x) + classical_li(2, x.inverse()))


def test_inversion_needs_a_nonzero_argument(ctx: FieldContext, db: RelationDB) -> None:
    with pytest.raises(FieldError):
        verify_depth1_inversion(2, ctx.zero, db)


def test_uncertifiable_element_is_reported(ctx: FieldContext, db: RelationDB) -> None:
    t = ctx.variable("t")

    certificate = certify_element("sample", classical_li(2, t), db, establish=False)

    assert not certificate.certified
    assert certificate.tier == "none"
    assert certificate.details["terms"] == 1


def test_instances_describe_themselves(ctx: FieldContext) -> None:
    x = ctx.variable("x")
    instance = KINDS["distribution"].make((ctx.zero, x), 2)

    assert str(instance) == "distribution[2](0, x)"
    assert instance.free_variables() == {"x"}
    assert KINDS["reversal"].supports(KINDS["reversal"].make((ctx.zero, ctx.one, x))) == []
