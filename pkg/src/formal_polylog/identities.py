"""Verifiers for the correlator identities: shuffle, reversal, distribution, depth-one inversion."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from time import perf_counter

from .coalg import LinComb, cobracket
from .errors import FieldError, SymbolError
from .families import KINDS, Instance
from .field import FieldElem
from .relations import RelationDB, certify_membership, certify_wedge, establish_instance
from .schemas import Certificate
from .timing import Budget

logger = logging.getLogger("formal_polylog.identities")

Details = dict[str, str | int | bool]


def make_certificate(
    identity: str,
    tier: str | None,
    *,
    weight: int | None,
    started: float,
    details: Details | None = None,
    established: int = 0,
) -> Certificate:
    certificate = Certificate(
        identity=identity,
        certified=tier is not None and tier != "none",
        tier=tier or "none",  # type: ignore[arg-type]
        weight=weight,
        details=details or {},
        established=established,
        elapsed_ms=round((perf_counter() - started) * 1000, 3),
    )
    logger.info(
        "op=verify identity=%s weight=%s certified=%s tier=%s established=%s elapsed_ms=%s",
        identity,
        weight,
        certificate.certified,
        certificate.tier,
        established,
        certificate.elapsed_ms,
    )
    return certificate


def certify_element(
    identity: str,
    element: LinComb,
    db: RelationDB,
    *,
    establish: bool = True,
    budget: Budget | None = None,
    details: Details | None = None,
) -> Certificate:
    """Exact when ``element`` is zero in A, else the cobracket certificate modulo the database."""

    started = perf_counter()
    before = len(db)
    details = dict(details or {})
    details["terms"] = len(element.rebased())
    if not element.rebased().terms:
        tier: str | None = "exact"
    elif element.weight < 2:
        tier = None
    else:
        tier = certify_wedge(cobracket(element), db, establish=establish, budget=budget)
    return make_certificate(
        identity, tier, weight=element.weight, started=started, details=details, established=len(db) - before
    )


def verify_instance(
    instance: Instance,
    db: RelationDB,
    *,
    establish: bool = True,
    membership: bool = False,
    budget: Budget | None = None,
) -> Certificate:
    """Certify one identity instance; with ``membership`` also try to make it a database member."""

    started = perf_counter()
    before = len(db)
    element = KINDS[instance.kind].element(instance)
    outcome = certify_element(instance.kind, element, db, establish=establish, budget=budget)
    tier: str | None = outcome.tier if outcome.certified else None
    details = dict(outcome.details)
    if membership and tier not in (None, "exact") and element.weight >= 2:
        member = establish_instance(instance, db, budget=budget) or certify_membership(element, db, budget=budget)
        details["member"] = member
        if member:
            tier = "membership"
    return make_certificate(
        instance.kind, tier, weight=element.weight, started=started, details=details, established=len(db) - before
    )


def verify_shuffle(
    x: Sequence[FieldElem], n1: int, n2: int, db: RelationDB, *, membership: bool = False, budget: Budget | None = None
) -> Certificate:
    """Sum over (n1, n2)-shuffles of cor(x0, sigma(x1..xn))."""

    if n1 < 1 or n2 < 1:
        raise SymbolError("Shuffle word lengths must be positive.", details={"n1": n1, "n2": n2})
    if len(x) != n1 + n2 + 1:
        raise SymbolError(
            f"A ({n1}, {n2})-shuffle needs {n1 + n2 + 1} entries, got {len(x)}.",
            details={"entries": len(x)},
        )
    instance = KINDS["shuffle"].make(tuple(x), n1)
    return verify_instance(instance, db, membership=membership, budget=budget)


def verify_reversal(
    x: Sequence[FieldElem], db: RelationDB, *, membership: bool = False, budget: Budget | None = None
) -> Certificate:
    return verify_instance(KINDS["reversal"].make(tuple(x)), db, membership=membership, budget=budget)


def verify_distribution(
    order: int, x: Sequence[FieldElem], db: RelationDB, *, membership: bool = False, budget: Budget | None = None
) -> Certificate:
    if len(x) < 2:
        raise SymbolError("A correlator needs at least two entries.", details={"entries": len(x)})
    x[0].ctx.roots_of_unity(order)
    return verify_instance(KINDS["distribution"].make(tuple(x), order), db, membership=membership, budget=budget)


def verify_depth1_inversion(
    n: int, x: FieldElem, db: RelationDB, *, membership: bool | None = None, budget: Budget | None = None
) -> Certificate:
    """Li_n(x) + (-1)^n Li_n(1/x) modulo lower-depth terms; membership is attempted for n = 2 by default."""

    if x.is_zero:
        raise FieldError("Inversion needs a nonzero argument.", details={"constraint": "x != 0"})
    attempt = n == 2 if membership is None else membership
    return verify_instance(KINDS["inversion"].make((x,), n), db, membership=attempt, budget=budget)
