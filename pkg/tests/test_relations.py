from __future__ import annotations

import json
from pathlib import Path

import pytest

from formal_polylog import relations
from formal_polylog.coalg import LinComb, classical_li, cor
from formal_polylog.errors import CertificateError
from formal_polylog.families import KINDS
from formal_polylog.field import FieldContext
from formal_polylog.relations import (
    RelationDB,
    RelFamily,
    certify_family,
    derive_relation,
    establish_instance,
    read_records,
    reduce_mod_db,
    replay,
)
from formal_polylog.schemas import Provenance
from formal_polylog.timing import Budget


def _li2(argument) -> LinComb:
    return classical_li(2, argument)


def _derive_reflection(ctx: FieldContext, db: RelationDB) -> LinComb:
    t = ctx.variable("t")
    family = certify_family(_li2(t) + _li2(1 - t), "t", db)
    return derive_relation(family, ctx.variable("s"), ctx.zero, db, identity="reflection")


def test_duplication_family_yields_li2_at_minus_one(ctx: FieldContext, db: RelationDB) -> None:
    t = ctx.variable("t")
    family = certify_family(_li2(t * t) - _li2(t) * 2 - _li2(-t) * 2, "t", db)

    assert family.certificate is not None
    assert family.certificate.tier == "delta-exact"

    generator = derive_relation(family, ctx.zero, ctx.one, db, identity="duplication")

    assert generator == cor(ctx.one, ctx.zero, ctx.constant(-1)) * -2
    assert db.contains(cor(ctx.one, ctx.zero, ctx.constant(-1)))
    assert len(db) == 1


def test_reflection_family(ctx: FieldContext, db: RelationDB) -> None:
    s = ctx.variable("s")

    generator = _derive_reflection(ctx, db)

    assert generator == _li2(s) + _li2(1 - s)
    assert db.contains(_li2(s) + _li2(1 - s))
    assert not db.contains(_li2(s))


def test_constant_family_gives_no_generator(ctx: FieldContext, db: RelationDB) -> None:
    family = certify_family(cor(ctx.one, ctx.zero, ctx.constant(-1)), "t", db)

    generator = derive_relation(family, ctx.zero, ctx.one, db)

    assert generator == 0
    assert len(db) == 0


def test_derivation_refuses_uncertified_families(ctx: FieldContext, db: RelationDB) -> None:
    t = ctx.variable("t")
    family = certify_family(_li2(t), "t", db)

    assert family.certificate is not None
    assert not family.certificate.certified
    with pytest.raises(CertificateError):
        derive_relation(family, ctx.zero, ctx.one, db)
    with pytest.raises(CertificateError):
        derive_relation(RelFamily(element=_li2(t), variable="t"), ctx.zero, ctx.one, db)


def test_reduction_is_linear_and_idempotent(ctx: FieldContext, db: RelationDB) -> None:
    s, x = ctx.variable("s"), ctx.variable("x")
    _derive_reflection(ctx, db)
    first, second = _li2(s) + cor(ctx.zero, ctx.one, x), _li2(x * x)

    combined = reduce_mod_db(first * 3 - second, db)

    assert combined == reduce_mod_db(first, db) * 3 - reduce_mod_db(second, db)
    assert reduce_mod_db(combined, db) == combined
    assert reduce_mod_db(_li2(s), db) == reduce_mod_db(-_li2(1 - s), db)


def test_manual_generator_must_be_closed_under_the_cobracket(ctx: FieldContext, db: RelationDB) -> None:
    t = ctx.variable("t")

    with pytest.raises(CertificateError):
        db.register(_li2(t), Provenance(kind="manual"))
    assert len(db) == 0

    assert db.register(cor(ctx.one, ctx.zero, ctx.constant(-1)), Provenance(kind="manual"))
    assert not db.register(cor(ctx.one, ctx.zero, ctx.constant(-1)) * 2, Provenance(kind="manual"))


def test_derived_generators_must_be_closed_under_the_cobracket(ctx: FieldContext, db: RelationDB) -> None:
    t, s = ctx.variable("t"), ctx.variable("s")
    provenance = Provenance(
        kind="derive",
        identity="bogus",
        family=[("cor(0, 1, t, s)", "1")],
        variable="t",
        from_center="0",
        to_center="1",
    )

    with pytest.raises(CertificateError) as excinfo:
        db.register(cor(ctx.zero, ctx.one, t, s), provenance)

    assert excinfo.value.error.details["kind"] == "derive"
    assert len(db) == 0
    assert not db.contains(cor(ctx.zero, ctx.one, t, s))


def test_establishment_cut_short_by_the_budget_is_retried(
    ctx: FieldContext, db: RelationDB, monkeypatch: pytest.MonkeyPatch
) -> None:
    instance = KINDS["reversal"].make((ctx.zero, ctx.one, ctx.variable("x")))
    budget = Budget(60.0)

    def out_of_time(element, variable, database, **kwargs):
        budget.seconds = 0.0
        return RelFamily(element=element, variable=variable)

    monkeypatch.setattr(relations, "certify_family", out_of_time)
    assert not establish_instance(instance, db, budget=budget)
    monkeypatch.undo()

    assert establish_instance(instance, db, budget=Budget(None))
    assert db.contains(KINDS["reversal"].element(instance))


def test_save_load_and_replay_reproduce_the_file(ctx: FieldContext, db: RelationDB, tmp_path: Path) -> None:
    t = ctx.variable("t")
    _derive_reflection(ctx, db)
    duplication = certify_family(_li2(t * t) - _li2(t) * 2 - _li2(-t) * 2, "t", db)
    derive_relation(duplication, ctx.zero, ctx.one, db, identity="duplication")
    path = tmp_path / "relations.jsonl"

    db.save(path)
    loaded = RelationDB.load(path, aux_variables=4)
    replayed = replay(path, aux_variables=4)

    assert loaded.dumps() == path.read_text(encoding="utf-8")
    assert replayed.dumps() == path.read_text(encoding="utf-8")
    assert replayed.echelon_is_consistent()
    assert len(replayed) == 2


def test_records_carry_replayable_provenance(ctx: FieldContext, db: RelationDB, tmp_path: Path) -> None:
    _derive_reflection(ctx, db)
    path = tmp_path / "relations.jsonl"
    db.save(path)

    header, records = read_records(path)

    assert header.context.variables == list(ctx.user_variables)
    (record,) = records
    assert record.weight == 2
    assert record.provenance.kind == "derive"
    assert record.provenance.variable == "t"
    assert record.provenance.from_center == "s"
    assert record.provenance.to_center == "0"


def test_invalid_database_lines_are_rejected(ctx: FieldContext, db: RelationDB, tmp_path: Path) -> None:
    path = tmp_path / "broken.jsonl"
    header = db.header().model_dump(mode="json")
    bad = {"record": "generator", "weight": 2, "terms": [["cor(0, 1, t)", "1.5"]], "provenance": {"kind": "manual"}}
    path.write_text(json.dumps(header) + "\n" + json.dumps(bad) + "\n", encoding="utf-8")

    with pytest.raises(ValueError, match="broken.jsonl:2"):
        read_records(path)


def test_loading_into_a_different_context_fails(ctx: FieldContext, db: RelationDB, tmp_path: Path) -> None:
    path = tmp_path / "relations.jsonl"
    db.save(path)

    with pytest.raises(CertificateError):
        RelationDB.load(path, FieldContext(("t",)))


def test_echelon_pivots_follow_the_span(ctx: FieldContext, db: RelationDB) -> None:
    _derive_reflection(ctx, db)
    (pivot,) = db.pivots(2)

    assert db.weights() == [2]
    assert db.echelon_is_consistent()
    assert db.reduce(LinComb.of(pivot)) != LinComb.of(pivot)


@pytest.mark.slow
def test_seed_contains_the_classical_relations(seeded_db: RelationDB) -> None:
    ctx = seeded_db.ctx
    s, x = ctx.variable("s"), ctx.variable("x")

    assert seeded_db.contains(cor(ctx.one, ctx.zero, ctx.constant(-1)))
    assert seeded_db.contains(_li2(s) + _li2(1 - s))
    assert seeded_db.contains(_li2(x) + _li2(x.inverse()))
    assert seeded_db.echelon_is_consistent()
