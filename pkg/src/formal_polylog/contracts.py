"""JSON schema helpers for validating persisted relation-database records."""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path
from typing import Any

import jsonschema

_SCHEMA_FILENAME = "relation_db_record.schema.json"


def validate_db_record(record: dict[str, Any]) -> None:
    """Validate one header or generator record against the published JSON schema."""

    try:
        jsonschema.validate(instance=record, schema=_load_record_schema())
    except jsonschema.ValidationError as exc:
        raise ValueError(f"Relation database record failed validation: {exc.message}") from exc


@lru_cache(maxsize=1)
def _load_record_schema() -> dict[str, Any]:
    repo_root = Path(__file__).resolve().parents[2]
    schema_path = repo_root / "contracts" / _SCHEMA_FILENAME
    if not schema_path.exists():  # pragma: no cover
        raise FileNotFoundError(f"Record schema not found at {schema_path}")
    return json.loads(schema_path.read_text(encoding="utf-8"))
