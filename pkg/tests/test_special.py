from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formal_polylog.coalg import LinComb, classical_li, cobracket, cor
from formal_polylog.errors import FieldError
from formal_polylog.field import FieldContext
from formal_polylog.special import SpecPoint, specialize, specialize_wedge, specialize_weight1

CTX = FieldContext(("t", "s"))


def test_specialization_at_zero(ctx: FieldContext) -> None:
    t = ctx.variable("t")
    at_zero = SpecPoint("t", ctx.zero)

    assert specialize(cor(ctx.zero, t, t**2), at_zero) == 0
    assert specialize(cor(ctx.zero, ctx.one, t + 2), at_zero) == cor(ctx.zero, ctx.one, ctx.constant(2))
    assert specialize(classical_li(2, t), at_zero) == 0


def test_specialization_rescales_by_the_lowest_valuation(ctx: FieldContext) -> None:
    t, s = ctx.variable("t"), ctx.variable("s")
    at_zero = SpecPoint("t", ctx.zero)

    assert specialize(cor(ctx.zero, t, t * s, t + t**2), at_zero) == cor(ctx.zero, ctx.one, s, ctx.one)


def test_specialization_at_one_and_infinity(ctx: FieldContext) -> None:
    t, x = ctx.variable("t"), ctx.variable("x")

    assert specialize(cor(ctx.one, ctx.zero, t**2), SpecPoint("t", ctx.one)) == 0
    assert specialize(cor(t * x, ctx.zero, ctx.zero), SpecPoint("t", None)) == 0
    assert specialize(classical_li(2, t * x), SpecPoint("t", None)) == 0
    assert specialize(classical_li(2, 1 / t), SpecPoint("t", None)) == 0


def test_weight_one_specialization(ctx: FieldContext) -> None:
    base = ctx.factor_base
    t, s = ctx.variable("t"), ctx.variable("s")

    assert specialize_weight1(base.word(t * (t + s)), SpecPoint("t", ctx.zero)) == base.word(s)
    assert specialize_weight1(base.word(t - 1), SpecPoint("t", ctx.zero)) == 0
    assert specialize_weight1(base.word(t**2 + 3), SpecPoint("t", None)) == 0
    scaled = SpecPoint("t", ctx.zero, ctx.constant(3).rational_value())
    assert specialize_weight1(base.word(t), scaled) == base.word(ctx.constant(3)) * -1


def test_uniformizer_choice_does_not_matter_above_weight_one(ctx: FieldContext) -> None:
    t, s = ctx.variable("t"), ctx.variable("s")
    element = cor(ctx.zero, t, t * s, ctx.one + t) - cor(ctx.zero, ctx.one, t**2, s)

    for center in ("0", "1", "inf"):
        plain = specialize(element, SpecPoint.parse(ctx, "t", center))
        for unit in (2, -3):
            assert specialize(element, SpecPoint.parse(ctx, "t", center, unit)) == plain


def test_constants_are_fixed(ctx: FieldContext) -> None:
    s = ctx.variable("s")
    element = cor(ctx.zero, ctx.one, s, ctx.constant(3))

    assert specialize(element, SpecPoint("t", ctx.zero)) == element
    assert specialize(element, SpecPoint("t", None)) == element


def test_point_parsing(ctx: FieldContext) -> None:
    point = SpecPoint.parse(ctx, "t", "s + 1")

    assert point.center == ctx.variable("s") + 1
    assert point.label() == "t->s + 1"
    assert SpecPoint.parse(ctx, "t", "inf").center is None
    with pytest.raises(FieldError):
        SpecPoint.parse(ctx, "t", "t + 1")
    with pytest.raises(FieldError):
        SpecPoint.parse(ctx, "q", "0")


def test_weight_of_specialization_is_kept(ctx: FieldContext) -> None:
    t = ctx.variable("t")
    image = specialize(cor(ctx.zero, t, ctx.one), SpecPoint("t", ctx.zero))

    assert isinstance(image, LinComb)
    assert image.weight == 2


_ENTRY = st.one_of(
    st.sampled_from([0, 1, -1, 2]).map(CTX.constant),
    st.tuples(st.sampled_from([1, -1, 2]), st.sampled_from([0, 1, -1])).map(
        lambda pair: CTX.variable("t") * pair[0] + pair[1]
    ),
    st.sampled_from([0, 1]).map(lambda power: CTX.variable("t") ** 2 + CTX.variable("s") * power),
    st.just(CTX.variable("s")),
)
_CENTERS = st.sampled_from(["0", "1", "-1", "2", "s", "inf"])


@settings(max_examples=40, deadline=None)
@given(st.lists(_ENTRY, min_size=3, max_size=5), _CENTERS)
def test_specialization_commutes_with_the_cobracket(entries, center) -> None:
    element = cor(*entries)
    point = SpecPoint.parse(CTX, "t", center)

    assert cobracket(specialize(element, point)) == specialize_wedge(cobracket(element), point)
