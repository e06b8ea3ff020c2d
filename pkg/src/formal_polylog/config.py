"""Runtime configuration and environment helpers for the polylogarithm toolkit."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

_DEFAULT_VARIABLES = ("t", "s", "x", "y", "a", "b", "c")
_DEFAULT_DB_PATH = Path("relations.jsonl")
_DEFAULT_AUX_VARIABLES = 4
_DEFAULT_CLOSURE_DEGREE = 2
_DEFAULT_TIME_BUDGET_S = 20.0
_DEFAULT_DESCENT_CENTERS = ("0", "1", "inf", "-1")
_DEFAULT_SELFTEST_SAMPLES = 10
_OUTPUT_FORMATS = {"human", "structured"}


@dataclass(frozen=True)
class AppConfig:
    """Immutable application configuration."""

    variables: tuple[str, ...]
    cyclotomic: int
    aux_variables: int
    db_path: Path
    closure_degree: int
    time_budget_s: float
    output_format: str
    descent_centers: tuple[str, ...]
    selftest_samples: int
    seed: int


def _parse_int(value: str | None, fallback: int, *, minimum: int = 1) -> int:
    if value is None:
        return fallback
    try:
        parsed = int(value)
    except ValueError:
        return fallback
    return fallback if parsed < minimum else parsed


def _parse_float(value: str | None, fallback: float, *, minimum: float | None = None) -> float:
    if value is None:
        return fallback
    try:
        parsed = float(value)
    except ValueError:
        return fallback
    if minimum is not None and parsed < minimum:
        return fallback
    return parsed


def _parse_names(value: str | None, fallback: tuple[str, ...]) -> tuple[str, ...]:
    if value is None:
        return fallback
    names = tuple(part.strip() for part in value.split(",") if part.strip())
    if not names:
        return fallback
    if len(set(names)) != len(names):
        raise ValueError(f"Duplicate names in {value!r}.")
    return names


def load_config() -> AppConfig:
    """Load configuration from environment variables, applying defaults."""

    variables = _parse_names(os.getenv("PLG_VARIABLES"), _DEFAULT_VARIABLES)
    for name in variables:
        if name.startswith("_") or not name.isidentifier():
            raise ValueError(f"Invalid variable name {name!r}.")

    output_format = os.getenv("PLG_OUTPUT_FORMAT", "human").lower()
    if output_format not in _OUTPUT_FORMATS:
        output_format = "human"

    return AppConfig(
        variables=variables,
        cyclotomic=_parse_int(os.getenv("PLG_CYCLOTOMIC"), 1, minimum=1),
        aux_variables=_parse_int(os.getenv("PLG_AUX_VARIABLES"), _DEFAULT_AUX_VARIABLES, minimum=2),
        db_path=Path(os.getenv("PLG_DB_PATH", str(_DEFAULT_DB_PATH))),
        closure_degree=_parse_int(os.getenv("PLG_CLOSURE_DEGREE"), _DEFAULT_CLOSURE_DEGREE, minimum=1),
        time_budget_s=_parse_float(os.getenv("PLG_TIME_BUDGET_S"), _DEFAULT_TIME_BUDGET_S, minimum=0.1),
        output_format=output_format,
        descent_centers=_parse_names(os.getenv("PLG_DESCENT_CENTERS"), _DEFAULT_DESCENT_CENTERS),
        selftest_samples=_parse_int(os.getenv("PLG_SELFTEST_SAMPLES"), _DEFAULT_SELFTEST_SAMPLES, minimum=1),
        seed=_parse_int(os.getenv("PLG_SEED"), 0, minimum=0),
    )


config = load_config()
"""Singleton config loaded at import time for convenience."""
