"""Pydantic data models shared across the library, the relation store, and the CLI."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field, model_validator

FORMAT_VERSION = 1

CertificateTier = Literal[
    "exact",
    "depth-syntactic",
    "delta-exact",
    "delta-modulo-db",
    "membership",
    "truncated-depth",
    "inductive",
    "stage1",
    "stage2",
    "none",
]


class SourcePosition(BaseModel):
    """Line/column pair (1-based) inside parsed input text."""

    line: int = Field(..., ge=1)
    column: int = Field(..., ge=1)


class ErrorReport(BaseModel):
    """Standardized error payload raised by library operations and printed by the CLI."""

    error_type: str
    message: str
    stage: str | None = None
    position: SourcePosition | None = None
    details: dict[str, Any] | None = None


class FieldContextRecord(BaseModel):
    """Serializable description of the coefficient field F = Q(zeta_N)(v1, ..., vm)."""

    variables: list[str] = Field(..., description="User variables in global order.")
    cyclotomic: int = Field(1, ge=1, description="N such that F contains the N-th roots of unity.")

    @model_validator(mode="after")
    def _distinct_variables(self) -> FieldContextRecord:
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("Field variables must be distinct.")
        return self


class DBHeader(BaseModel):
    """First record of a relation database file."""

    record: Literal["header"] = "header"
    format_version: int = FORMAT_VERSION
    context: FieldContextRecord


class Provenance(BaseModel):
    """How a stored generator was obtained, with enough detail to replay it."""

    kind: Literal["derive", "descent", "establish", "seed", "manual"]
    identity: str | None = Field(default=None, description="Identity kind or seed step name.")
    family: list[tuple[str, str]] | None = Field(
        default=None,
        description="Family element over F(t) as [symbol text, coefficient text] pairs.",
    )
    variable: str | None = None
    from_center: str | None = None
    to_center: str | None = None

    @model_validator(mode="after")
    def _replayable(self) -> Provenance:
        if self.kind in {"derive", "descent", "establish", "seed"}:
            if not self.family or self.variable is None or self.from_center is None or self.to_center is None:
                raise ValueError(f"Provenance of kind {self.kind!r} needs family, variable and both centers.")
        return self


class GeneratorRecord(BaseModel):
    """One certified relation generator of weight >= 2."""

    record: Literal["generator"] = "generator"
    weight: int = Field(..., ge=2)
    terms: list[tuple[str, str]] = Field(..., min_length=1, description="[symbol text, coefficient text] pairs.")
    provenance: Provenance


class Certificate(BaseModel):
    """Outcome of a verifier: certified or honestly not certified, with the tier that fired."""

    identity: str
    certified: bool
    tier: CertificateTier
    weight: int | None = None
    details: dict[str, str | int | bool] = Field(default_factory=dict)
    established: int = Field(0, ge=0, description="Generators registered while certifying.")
    elapsed_ms: float = 0.0

    @model_validator(mode="after")
    def _tier_matches_outcome(self) -> Certificate:
        if self.certified and self.tier == "none":
            raise ValueError("A certified outcome must name the tier that fired.")
        return self


class Report(BaseModel):
    """Structured CLI output record."""

    record: Literal["report"] = "report"
    format_version: int = FORMAT_VERSION
    command: str
    payload: dict[str, Any]
