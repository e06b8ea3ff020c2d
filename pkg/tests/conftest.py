from __future__ import annotations

import pytest

from formal_polylog.field import FieldContext
from formal_polylog.relations import RelationDB, seed
from formal_polylog.timing import Budget

VARIABLES = ("t", "s", "x", "y", "a", "b", "c")


@pytest.fixture()
def ctx() -> FieldContext:
    return FieldContext(VARIABLES)


@pytest.fixture()
def db(ctx: FieldContext) -> RelationDB:
    return RelationDB(ctx)


@pytest.fixture(scope="session")
def seeded_db() -> RelationDB:
    database = RelationDB(FieldContext(("t", "s", "x")))
    seed(database, budget=Budget(120.0))
    return database
