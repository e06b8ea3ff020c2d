"""Exception types carrying structured error reports."""

from __future__ import annotations

from typing import Any

from .schemas import ErrorReport, SourcePosition


class PolylogError(Exception):
    """Base error raised by library operations."""

    error_type = "polylog_error"
    stage = "library"

    def __init__(self, message: str, *, details: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.error = ErrorReport(
            error_type=self.error_type,
            message=message,
            stage=self.stage,
            details=details,
        )


class FieldError(PolylogError):
    """Invalid arithmetic in the coefficient field (division by zero, zero words, poles)."""

    error_type = "field_error"
    stage = "field"


class SymbolError(PolylogError):
    """Malformed symbol: wrong arity, mixed weights, bad indices."""

    error_type = "symbol_error"
    stage = "symbols"


class CertificateError(PolylogError):
    """A derivation was refused because its family is not certified."""

    error_type = "certificate_error"
    stage = "relations"


class ParseError(PolylogError):
    """Syntax error or unknown identifier in the expression grammar."""

    error_type = "parse_error"
    stage = "parse"

    def __init__(self, message: str, *, line: int = 1, column: int = 1) -> None:
        super().__init__(message)
        self.error.position = SourcePosition(line=line, column=column)
