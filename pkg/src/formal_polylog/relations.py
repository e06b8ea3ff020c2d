"""The relation database and the pipeline that fills it.

A generator enters the database only as ``Sp_a R - Sp_b R`` for a one-parameter
family ``R`` whose cobracket is certified zero modulo the generators already present
(or by hand through ``relations add``, which is checked for coideal closure).
"""

from __future__ import annotations

import json
import logging
import threading
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from pathlib import Path
from time import perf_counter
from typing import Any

from pydantic import ValidationError
from sympy.polys.domains import QQ
from sympy.polys.matrices.sdm import sdm_irref

from .coalg import (
    CorrSym,
    LinComb,
    WedgeElem,
    classical_li,
    cobracket,
    components_by_weight1,
    free_variables,
    normalize,
    substitute_symbols,
    wedge_is_zero,
)
from .config import config as default_config
from .contracts import validate_db_record
from .errors import CertificateError, FieldError, PolylogError
from .families import KINDS, Instance
from .field import FieldContext, FieldElem, format_rational, rational, sort_key_of
from .schemas import Certificate, DBHeader, FieldContextRecord, GeneratorRecord, Provenance
from .special import SpecPoint, specialize
from .timing import Budget

logger = logging.getLogger("formal_polylog.relations")


def echelon_rows(vectors: Iterable[dict[Any, Any]]) -> dict[Any, dict[Any, Any]]:
    """Reduced row echelon form of sparse vectors over QQ, keyed by pivot.

    Columns follow the global sort order of the keys, so the result depends only on the span.
    """

    vectors = [vector for vector in vectors if vector]
    universe = sorted({key for vector in vectors for key in vector}, key=sort_key_of)
    column = {key: index for index, key in enumerate(universe)}
    matrix = {row: {column[key]: coeff for key, coeff in vector.items()} for row, vector in enumerate(vectors)}
    rows: dict[Any, dict[Any, Any]] = {}
    if matrix:
        reduced, _, _ = sdm_irref(matrix)
        for entries in reduced.values():
            rows[universe[min(entries)]] = {universe[index]: coeff for index, coeff in entries.items()}
    return rows


def reduce_against(rows: dict[Any, dict[Any, Any]], vector: dict[Any, Any]) -> dict[Any, Any]:
    """Residue of a sparse vector modulo echelon rows."""

    terms = dict(vector)
    for key in list(terms):
        row = rows.get(key)
        coeff = terms.get(key)
        if row is None or not coeff:
            continue
        for column, value in row.items():
            total = terms.get(column, QQ.zero) - coeff * value
            if total:
                terms[column] = total
            else:
                terms.pop(column, None)
    return terms


@dataclass
class _Echelon:
    universe: list[CorrSym]
    rows: dict[CorrSym, dict[CorrSym, Any]]


@dataclass
class Generator:
    element: LinComb
    provenance: Provenance


class RelationDB:
    """Certified generators of R_n per weight, with a reduced row echelon form per weight."""

    def __init__(self, ctx: FieldContext) -> None:
        self.ctx = ctx
        self._generators: dict[int, list[Generator]] = {}
        self._order: list[Generator] = []
        self._echelon: dict[int, _Echelon] = {}
        self._lock = threading.RLock()
        self._failed: set[Any] = set()

    def __len__(self) -> int:
        return len(self._order)

    def __iter__(self) -> Iterator[Generator]:
        return iter(list(self._order))

    def weights(self) -> list[int]:
        return sorted(self._generators)

    def generators(self, weight: int | None = None) -> list[Generator]:
        if weight is None:
            return list(self._order)
        return list(self._generators.get(weight, []))

    # echelon ----------------------------------------------------------
    def _build(self, weight: int) -> _Echelon:
        generators = self._generators.get(weight, [])
        vectors = [generator.element.terms for generator in generators]
        universe = sorted({symbol for vector in vectors for symbol in vector}, key=sort_key_of)
        return _Echelon(universe=universe, rows=echelon_rows(vectors))

    def echelon(self, weight: int) -> _Echelon:
        with self._lock:
            if weight not in self._echelon:
                self._echelon[weight] = self._build(weight)
            return self._echelon[weight]

    def pivots(self, weight: int) -> list[CorrSym]:
        return sorted(self.echelon(weight).rows, key=sort_key_of)

    def echelon_is_consistent(self) -> bool:
        """Rebuilding every echelon from the generator list reproduces the cached pivots and rows."""

        with self._lock:
            for weight in self.weights():
                cached = self.echelon(weight)
                fresh = self._build(weight)
                if cached.rows != fresh.rows:
                    return False
            return True

    # queries ----------------------------------------------------------
    def reduce(self, e: LinComb) -> LinComb:
        """Canonical residue of ``e`` modulo the generators of its weight."""

        if e.weight < 2 or not e.terms:
            return e
        rows = self.echelon(e.weight).rows
        if not rows:
            return e
        return LinComb(e.ctx, e.weight, reduce_against(rows, e.terms))

    def contains(self, e: LinComb) -> bool:
        return not self.reduce(e).rebased().terms

    # mutation ---------------------------------------------------------
    def register(self, element: LinComb, provenance: Provenance, *, check_coideal: bool = True) -> bool:
        """Add a generator; returns False when it already lies in the span."""

        with self._lock:
            if element.weight < 2:
                raise CertificateError("Only generators of weight >= 2 are stored.")
            if self.contains(element):
                return False
            if check_coideal and not wedge_is_zero(cobracket(element), self):
                logger.warning("op=register coideal=failed weight=%s kind=%s", element.weight, provenance.kind)
                raise CertificateError(
                    f"A {provenance.kind} generator is not closed under the cobracket modulo the database.",
                    details={"weight": element.weight, "kind": provenance.kind},
                )
            generator = Generator(element=element, provenance=provenance)
            self._generators.setdefault(element.weight, []).append(generator)
            self._order.append(generator)
            self._echelon.pop(element.weight, None)
            logger.info(
                "op=register weight=%s terms=%s kind=%s identity=%s total=%s",
                element.weight,
                len(element),
                provenance.kind,
                provenance.identity,
                len(self._order),
            )
            return True

    # persistence ------------------------------------------------------
    def header(self) -> DBHeader:
        return DBHeader(
            context=FieldContextRecord(variables=list(self.ctx.user_variables), cyclotomic=self.ctx.cyclotomic)
        )

    def records(self) -> list[dict[str, Any]]:
        records = [self.header().model_dump(mode="json")]
        for generator in self._order:
            record = GeneratorRecord(
                weight=generator.element.weight,
                terms=serialize_terms(generator.element),
                provenance=generator.provenance,
            )
            records.append(record.model_dump(mode="json"))
        return records

    def dumps(self) -> str:
        lines = []
        for record in self.records():
            validate_db_record(record)
            lines.append(json.dumps(record, sort_keys=True))
        return "\n".join(lines) + "\n"

    def save(self, path: Path) -> None:
        with self._lock:
            text = self.dumps()
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        logger.info("op=save path=%s generators=%s", path, len(self))

    @classmethod
    def load(cls, path: Path, ctx: FieldContext | None = None, *, aux_variables: int | None = None) -> RelationDB:
        """Read a JSONL database; generators are taken as stored (use :func:`replay` to re-derive)."""

        header, generators = read_records(path)
        if ctx is None:
            ctx = context_from_header(header, aux_variables=aux_variables)
        elif list(ctx.user_variables) != header.context.variables or ctx.cyclotomic != header.context.cyclotomic:
            raise CertificateError(
                f"Database {path} was written for a different field context.",
                details={"variables": ",".join(header.context.variables), "cyclotomic": header.context.cyclotomic},
            )
        db = cls(ctx)
        for record in generators:
            element = parse_terms(ctx, record.terms)
            db.register(element, record.provenance, check_coideal=False)
        logger.info("op=load path=%s generators=%s", path, len(db))
        return db


def context_from_header(header: DBHeader, *, aux_variables: int | None = None) -> FieldContext:
    return FieldContext(
        header.context.variables,
        cyclotomic=header.context.cyclotomic,
        aux_variables=default_config.aux_variables if aux_variables is None else aux_variables,
    )


def read_records(path: Path) -> tuple[DBHeader, list[GeneratorRecord]]:
    """Validate and parse every line of a database file."""

    header: DBHeader | None = None
    generators: list[GeneratorRecord] = []
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
            validate_db_record(payload)
            if payload.get("record") == "header":
                if header is not None:
                    raise ValueError("Duplicate header record.")
                header = DBHeader.model_validate(payload)
            else:
                if header is None:
                    raise ValueError("Generator record before the header.")
                generators.append(GeneratorRecord.model_validate(payload))
        except (json.JSONDecodeError, ValidationError) as exc:
            raise ValueError(f"{path}:{number}: invalid record: {exc}") from exc
        except ValueError as exc:
            raise ValueError(f"{path}:{number}: {exc}") from exc
    if header is None:
        raise ValueError(f"{path}: missing header record.")
    return header, generators


def serialize_terms(e: LinComb) -> list[tuple[str, str]]:
    return [(str(symbol), format_rational(coeff)) for symbol, coeff in e.items()]


def parse_terms(ctx: FieldContext, terms: Iterable[tuple[str, str]]) -> LinComb:
    from .parser import parse_symbol

    parts = []
    weight = 0
    for text, coeff in terms:
        entries = parse_symbol(text, ctx)
        weight = len(entries) - 1
        parts.append((rational(coeff), normalize(entries)))
    result = LinComb(ctx, weight)
    for coeff, part in parts:
        result = result + part * coeff
    return result


def center_text(center: FieldElem | None) -> str:
    return "inf" if center is None else str(center)


# ---------------------------------------------------------------------------
# families and derivation
# ---------------------------------------------------------------------------


@dataclass
class RelFamily:
    """A one-parameter element with (optionally) a cobracket certificate."""

    element: LinComb
    variable: str
    certificate: Certificate | None = None
    meta: dict[str, Any] = field(default_factory=dict)


def certify_family(
    element: LinComb, variable: str, db: RelationDB, *, establish: bool = False, budget: Budget | None = None
) -> RelFamily:
    started = perf_counter()
    before = len(db)
    tier = certify_wedge(cobracket(element), db, establish=establish, budget=budget)
    certificate = Certificate(
        identity=f"family[{variable}]",
        certified=tier is not None,
        tier=tier or "none",
        weight=element.weight,
        established=len(db) - before,
        elapsed_ms=round((perf_counter() - started) * 1000, 3),
    )
    return RelFamily(element=element, variable=variable, certificate=certificate)


def derive_relation(
    family: RelFamily,
    a: FieldElem | None,
    b: FieldElem | None,
    db: RelationDB,
    *,
    kind: str = "derive",
    identity: str | None = None,
    establish: bool = True,
    budget: Budget | None = None,
) -> LinComb:
    """Register and return Sp_{t->a} R - Sp_{t->b} R for a certified family.

    Specialized database legs need not lie in the database yet; with ``establish`` they
    are pushed in before the coideal check at registration.
    """

    if family.certificate is None or not family.certificate.certified:
        raise CertificateError("Refusing to derive from a family without a cobracket certificate.")
    with db._lock:
        if not wedge_is_zero(cobracket(family.element), db):
            raise CertificateError(
                "The family's cobracket no longer reduces to zero modulo the database.",
                details={"variable": family.variable},
            )
        first = specialize(family.element, SpecPoint(family.variable, a))
        second = specialize(family.element, SpecPoint(family.variable, b))
        generator = first - second
        if generator.terms:
            delta = cobracket(generator)
            if establish and generator.weight >= 3 and not wedge_is_zero(delta, db):
                certify_wedge(delta, db, establish=True, budget=budget)
            provenance = Provenance(
                kind=kind,  # type: ignore[arg-type]
                identity=identity,
                family=serialize_terms(family.element),
                variable=family.variable,
                from_center=center_text(a),
                to_center=center_text(b),
            )
            db.register(generator, provenance, check_coideal=True)
    logger.info(
        "op=derive variable=%s from=%s to=%s weight=%s terms=%s",
        family.variable,
        center_text(a),
        center_text(b),
        family.element.weight,
        len(generator),
    )
    return generator


def reduce_mod_db(e: LinComb, db: RelationDB) -> LinComb:
    return db.reduce(e)


# ---------------------------------------------------------------------------
# certification with establishment
# ---------------------------------------------------------------------------


def _expired(budget: Budget | None) -> bool:
    return budget is not None and budget.expired()


def certify_wedge(w: WedgeElem, db: RelationDB, *, establish: bool = False, budget: Budget | None = None) -> str | None:
    """Tier name when ``w`` vanishes modulo the database, else None.

    With ``establish`` the database may grow: weight-2 legs get their antisymmetry
    relations and every weight-1 component is pushed through descent.
    """

    if not w.rebased().terms:
        return "delta-exact"
    if wedge_is_zero(w, db):
        return "delta-modulo-db"
    if not establish or _expired(budget):
        return None
    for leg in _legs_of_weight(w, 2):
        establish_instance(KINDS["reversal"].make(leg.entries), db, budget=budget)
    if wedge_is_zero(w, db):
        return "delta-modulo-db"
    for component in components_by_weight1(w).values():
        if _expired(budget):
            return None
        if component.weight >= 2 and not db.contains(component):
            certify_membership(component, db, budget=budget)
    return "delta-modulo-db" if wedge_is_zero(w, db) else None


def _legs_of_weight(w: WedgeElem, weight: int) -> list[CorrSym]:
    legs: dict[CorrSym, None] = {}
    for u, v in w.rebased().terms:
        for leg in (u, v):
            if isinstance(leg, CorrSym) and leg.weight == weight:
                legs[leg] = None
    return sorted(legs, key=sort_key_of)


def establish_instance(
    instance: Instance, db: RelationDB, *, budget: Budget | None = None, kind: str = "establish"
) -> bool:
    """Make an identity instance a member of the database by deforming one entry by a fresh t.

    The family R(t) has Sp_{t->1} R equal to the instance and Sp_{t->inf} R = 0.
    """

    relation = KINDS[instance.kind]
    element = relation.element(instance)
    if element.weight < 2:
        return not element.rebased().terms
    if db.contains(element):
        return True
    key = (kind, instance)
    if key in db._failed or _expired(budget):
        return False
    ctx = instance.ctx
    try:
        aux = ctx.fresh_aux(instance.free_variables())
    except FieldError:
        db._failed.add(key)
        return False
    deformed = relation.deform(instance, aux)
    for support in KINDS[deformed.kind].supports(deformed):
        if _expired(budget):
            return False
        establish_instance(support, db, budget=budget)
    family = certify_family(relation.element(deformed), aux, db, establish=True, budget=budget)
    try:
        if family.certificate is None or not family.certificate.certified:
            raise CertificateError("The deformed family is not certified.")
        derive_relation(family, ctx.one, None, db, kind=kind, identity=instance.kind, budget=budget)
    except CertificateError:
        # budget failures stay retryable
        if not _expired(budget):
            db._failed.add(key)
        logger.info("op=establish instance=%s certified=false expired=%s", instance, _expired(budget))
        return False
    logger.info("op=establish instance=%s certified=true", instance)
    return db.contains(element)


def descend(
    element: LinComb, variable: str, center: FieldElem | None, db: RelationDB, *, budget: Budget | None = None
) -> LinComb:
    """Register R - Sp_{variable->center} R via the family R(s) - R(t), t fresh."""

    ctx = element.ctx
    aux = ctx.fresh_aux(free_variables(element))
    moved = substitute_symbols(element, variable, ctx.variable(aux))
    family = certify_family(element - moved, aux, db, establish=True, budget=budget)
    if family.certificate is None or not family.certificate.certified:
        raise CertificateError(
            f"Cannot descend along {variable}: the cobracket is not certified.",
            details={"variable": variable},
        )
    return derive_relation(
        family, ctx.variable(variable), center, db, kind="descent", identity=variable, budget=budget
    )


def _centers(ctx: FieldContext, names: Iterable[str]) -> list[FieldElem | None]:
    centers: list[FieldElem | None] = []
    for name in names:
        if name.strip().lower() in {"inf", "infinity", "oo"}:
            centers.append(None)
        else:
            centers.append(ctx.parse(name))
    return centers


def certify_membership(
    e: LinComb,
    db: RelationDB,
    *,
    budget: Budget | None = None,
    centers: Iterable[str] | None = None,
) -> bool:
    """Try to show ``e`` lies in R_n by descending one variable at a time."""

    if db.contains(e):
        return True
    if e.weight < 2 or _expired(budget):
        return False
    if certify_wedge(cobracket(e), db, establish=True, budget=budget) is None:
        return False
    variables = free_variables(e)
    if not variables:
        return db.contains(e)
    variable = variables[-1]
    names = tuple(centers) if centers is not None else default_config.descent_centers
    for center in _centers(e.ctx, names):
        if _expired(budget):
            break
        try:
            descend(e, variable, center, db, budget=budget)
            rest = specialize(e, SpecPoint(variable, center))
        except PolylogError as exc:
            logger.debug("op=descent variable=%s center=%s skipped=%s", variable, center_text(center), exc)
            continue
        if certify_membership(rest, db, budget=budget, centers=names) and db.contains(e):
            return True
    return db.contains(e)


# ---------------------------------------------------------------------------
# seed and replay
# ---------------------------------------------------------------------------


def _seed_variables(ctx: FieldContext) -> tuple[str, str, str]:
    names = list(ctx.user_variables) + list(ctx.aux_variables)
    if len(names) < 3:
        raise FieldError("Seeding needs at least three variables.")
    return names[0], names[1], names[2]


def seed(db: RelationDB, *, budget: Budget | None = None) -> list[LinComb]:
    """Derive the classical weight-2 relations, then weight-2 shuffles and weight-3 analogues."""

    ctx = db.ctx
    t_name, s_name, x_name = _seed_variables(ctx)
    t, s, x = ctx.variable(t_name), ctx.variable(s_name), ctx.variable(x_name)
    li2 = lambda argument: classical_li(2, argument)  # noqa: E731
    derived: list[LinComb] = []

    steps = [
        ("duplication", li2(t * t) - li2(t) * 2 - li2(-t) * 2, t_name, ctx.zero, ctx.one),
        ("reflection", li2(t) + li2(1 - t), t_name, s, ctx.zero),
        ("inversion", li2(t) + li2(t.inverse()), t_name, x, ctx.one),
    ]
    for name, element, variable, a, b in steps:
        family = certify_family(element, variable, db)
        derived.append(derive_relation(family, a, b, db, kind="seed", identity=name, budget=budget))

    instances = [
        KINDS["shuffle"].make((ctx.zero, s, x), 1),
        KINDS["shuffle"].make((t, s, x), 1),
        KINDS["reversal"].make((ctx.zero, ctx.one, s, x)),
        KINDS["inversion"].make((x,), 3),
    ]
    for instance in instances:
        establish_instance(instance, db, budget=budget, kind="seed")
        derived.append(KINDS[instance.kind].element(instance))
    logger.info("op=seed generators=%s", len(db))
    return derived


def replay(path: Path, *, aux_variables: int | None = None) -> RelationDB:
    """Re-derive every stored generator from its provenance and compare serializations."""

    header, records = read_records(path)
    ctx = context_from_header(header, aux_variables=aux_variables)
    db = RelationDB(ctx)
    for index, record in enumerate(records, start=1):
        provenance = record.provenance
        if provenance.kind == "manual":
            db.register(parse_terms(ctx, record.terms), provenance, check_coideal=True)
            continue
        assert provenance.family is not None and provenance.variable is not None
        element = parse_terms(ctx, provenance.family)
        family = certify_family(element, provenance.variable, db)
        if family.certificate is None or not family.certificate.certified:
            raise CertificateError(
                f"Replay failed at record {index}: family is not certified.",
                details={"record": index},
            )
        (a,) = _centers(ctx, [provenance.from_center or "inf"])
        (b,) = _centers(ctx, [provenance.to_center or "inf"])
        before = len(db)
        generator = derive_relation(
            family, a, b, db, kind=provenance.kind, identity=provenance.identity, establish=False
        )
        if serialize_terms(generator) != [tuple(term) for term in record.terms] or len(db) != before + 1:
            raise CertificateError(
                f"Replay mismatch at record {index}.",
                details={
                    "record": index,
                    "expected": json.dumps(record.terms),
                    "got": json.dumps(serialize_terms(generator)),
                },
            )
    logger.info("op=replay path=%s generators=%s", path, len(db))
    return db
