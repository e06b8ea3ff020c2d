"""Typer CLI for normalizing, differentiating, and certifying polylogarithm identities."""

from __future__ import annotations

import json
import logging
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import typer

from .bloch import verify_22_term, verify_five_term
from .coalg import LinComb, cobracket, format_symbol, tensor3, truncated_cobracket
from .config import AppConfig, load_config
from .errors import PolylogError, SymbolError
from .field import FieldContext, FieldElem, format_rational
from .hopf import coproduct, reduced_coproduct, verify_distribution_hopf
from .identities import verify_depth1_inversion, verify_distribution, verify_reversal, verify_shuffle
from .parser import parse_element, parse_hopf, parse_iisym, parse_lisym, parse_scalar
from .polylog import (
    LiSym,
    QSWord,
    depth_bound,
    depth_drop_check,
    li_expand,
    li_lie,
    verify_cyclic_mod_depth,
    verify_inversion_general,
    verify_li_homomorphism,
    verify_stuffle_antipode,
)
from .relations import (
    RelationDB,
    certify_family,
    context_from_header,
    derive_relation,
    read_records,
    replay,
    seed,
    serialize_terms,
)
from .schemas import Certificate, ErrorReport, Provenance, Report
from .selftest import run_selftest
from .special import SpecPoint, specialize
from .timing import Budget

logger = logging.getLogger("formal_polylog.cli")

app = typer.Typer(help="Exact symbolic computation with formal multiple polylogarithms.")
verify_app = typer.Typer(help="Certify functional equations; exit 0 when certified, 2 when not.")
relations_app = typer.Typer(help="Inspect and grow the relation database.")
app.add_typer(verify_app, name="verify")
app.add_typer(relations_app, name="relations")

_FORMATS = ("human", "structured")


@dataclass
class Session:
    """Per-invocation state shared by every subcommand."""

    settings: AppConfig
    config_file: Path | None = None
    save: bool = False
    _field: FieldContext | None = None
    _db: RelationDB | None = None

    @property
    def structured(self) -> bool:
        return self.settings.output_format == "structured"

    def field(self) -> FieldContext:
        if self._field is None:
            source = self.config_file
            if source is None and self.settings.db_path.exists():
                source = self.settings.db_path
            if source is not None:
                header, _ = read_records(source)
                self._field = context_from_header(header, aux_variables=self.settings.aux_variables)
            else:
                self._field = FieldContext(
                    self.settings.variables,
                    cyclotomic=self.settings.cyclotomic,
                    aux_variables=self.settings.aux_variables,
                )
        return self._field

    def db(self) -> RelationDB:
        if self._db is None:
            path = self.settings.db_path
            self._db = RelationDB.load(path, self.field()) if path.exists() else RelationDB(self.field())
        return self._db

    def budget(self) -> Budget:
        return Budget(self.settings.time_budget_s)

    def persist(self) -> None:
        if self._db is not None:
            self._db.save(self.settings.db_path)


@app.callback()
def main(
    ctx: typer.Context,
    db: Path | None = typer.Option(None, "--db", help="Relation database file (default from PLG_DB_PATH)."),
    output_format: str | None = typer.Option(None, "--format", help="Output format: human or structured."),
    log_level: str = typer.Option("WARNING", "--log-level", help="Logging level for library messages."),
    config_file: Path | None = typer.Option(
        None,
        "--config",
        help="JSONL file whose header record fixes the field context.",
    ),
    save: bool = typer.Option(False, "--save", help="Persist generators established while verifying.", is_flag=True),
) -> None:
    """Configure the field context, relation database, and output format."""

    level = getattr(logging, log_level.upper(), None)
    if not isinstance(level, int):
        raise typer.BadParameter(f"Unknown log level {log_level!r}.", param_hint="--log-level")
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s %(message)s")

    settings = load_config()
    if db is not None:
        settings = replace(settings, db_path=db)
    if output_format is not None:
        if output_format not in _FORMATS:
            raise typer.BadParameter(f"Expected one of {', '.join(_FORMATS)}.", param_hint="--format")
        settings = replace(settings, output_format=output_format)
    ctx.obj = Session(settings=settings, config_file=config_file, save=save)


# ---------------------------------------------------------------------------
# symbol calculus
# ---------------------------------------------------------------------------


@app.command()
def normalize(
    ctx: typer.Context,
    expression: str = typer.Argument(..., help="Combination of cor(...), II(...;...;...) or Li[...](...) symbols."),
) -> None:
    """Print the canonical form of a combination in the Lie coalgebra."""

    session = _session(ctx)
    with _reported(session):
        element = parse_element(expression, session.field())
        _emit(session, "normalize", _element_payload(element), [str(element)])


@app.command()
def weight1(
    ctx: typer.Context,
    expression: str = typer.Argument(..., help="Weight-1 combination, e.g. 'cor(0, 1-t)'."),
) -> None:
    """Print the multiplicative word of a weight-1 combination in F^x (x) Q."""

    session = _session(ctx)
    with _reported(session):
        element = parse_element(expression, session.field())
        if element.weight != 1:
            raise SymbolError(f"Expected weight 1, got weight {element.weight}.", details={"weight": element.weight})
        word = element.word.rebased()
        payload = {"word": [[str(atom), format_rational(coeff)] for atom, coeff in word.items()]}
        _emit(session, "weight1", payload, [str(word)])


@app.command(name="cobracket")
def cobracket_command(
    ctx: typer.Context,
    expression: str = typer.Argument(..., help="Combination of weight >= 2."),
    truncated: bool = typer.Option(False, "--truncated", help="Drop components with a weight-1 leg.", is_flag=True),
    iterated: bool = typer.Option(False, "--iterated", help="Print (1 (x) delta) delta instead.", is_flag=True),
) -> None:
    """Print the cobracket of a combination."""

    session = _session(ctx)
    with _reported(session):
        element = parse_element(expression, session.field())
        if iterated:
            tensor = tensor3(element)
            text = _tensor_text(tensor.items())
            _emit(session, "cobracket", {"iterated": True, "value": text, "terms": len(tensor)}, [text])
            return
        wedge = truncated_cobracket(element) if truncated else cobracket(element)
        payload = {"truncated": truncated, "value": str(wedge), "terms": len(wedge.rebased())}
        _emit(session, "cobracket", payload, [str(wedge)])


@app.command(name="specialize")
def specialize_command(
    ctx: typer.Context,
    expression: str = typer.Argument(..., help="Combination over F(t)."),
    var: str = typer.Option(..., "--var", help="Variable to specialize."),
    at: str = typer.Option(..., "--at", help="Center: an expression free of the variable, or 'inf'."),
    unit: str = typer.Option("1", "--unit", help="Rational unit c of the uniformizer c*(t-a) or c/t."),
) -> None:
    """Apply the specialization t -> center to a combination."""

    session = _session(ctx)
    with _reported(session):
        field = session.field()
        element = parse_element(expression, field)
        point = SpecPoint.parse(field, var, at, parse_scalar(unit, field).rational_value())
        result = specialize(element, point)
        payload = _element_payload(result)
        payload["point"] = point.label()
        _emit(session, "specialize", payload, [str(result)])


@app.command()
def derive(
    ctx: typer.Context,
    family: Path = typer.Option(..., "--family", help="File holding the family expression over F(t)."),
    var: str = typer.Option(..., "--var", help="Family parameter."),
    from_center: str = typer.Option(..., "--from", help="First center (expression or 'inf')."),
    to_center: str = typer.Option(..., "--to", help="Second center (expression or 'inf')."),
    establish: bool = typer.Option(True, help="Allow the database to grow while certifying the family."),
) -> None:
    """Certify a family and register Sp_{t->from} R - Sp_{t->to} R as a generator."""

    session = _session(ctx)
    with _reported(session):
        field = session.field()
        db = session.db()
        element = parse_element(family.read_text(encoding="utf-8"), field)
        certified = certify_family(element, var, db, establish=establish, budget=session.budget())
        assert certified.certificate is not None
        if not certified.certificate.certified:
            _finish(session, "derive", certified.certificate)
        a = SpecPoint.parse(field, var, from_center).center
        b = SpecPoint.parse(field, var, to_center).center
        generator = derive_relation(
            certified, a, b, db, kind="derive", identity=family.stem, establish=establish, budget=session.budget()
        )
        session.persist()
        payload = _element_payload(generator)
        payload["certificate"] = _certificate_payload(certified.certificate)
        payload["generators"] = len(db)
        _emit(session, "derive", payload, [str(generator)])


@app.command(name="coproduct")
def coproduct_command(
    ctx: typer.Context,
    expression: str = typer.Argument(..., help="Combination of II(...) and Li[...](...) symbols."),
    reduced: bool = typer.Option(False, "--reduced", help="Subtract h (x) 1 and 1 (x) h.", is_flag=True),
) -> None:
    """Print the coproduct of an element of the Hopf algebra."""

    session = _session(ctx)
    with _reported(session):
        element = parse_hopf(expression, session.field())
        tensor = reduced_coproduct(element) if reduced else coproduct(element)
        text = str(tensor)
        _emit(session, "coproduct", {"reduced": reduced, "value": text, "terms": len(tensor.rebased())}, [text])


@app.command(name="li-expand")
def li_expand_command(
    ctx: typer.Context,
    symbol: str = typer.Argument(..., help="A single Li[n1,...,nk](a1,...,ak) or Li[n0; n1,...,nk](...)."),
    lie: bool = typer.Option(False, "--lie", help="Also print the correlator image.", is_flag=True),
) -> None:
    """Print the iterated integral a polylogarithm stands for."""

    session = _session(ctx)
    with _reported(session):
        li = parse_lisym(symbol, session.field())
        sign, integral = li_expand(li)
        text = f"{'-' if sign < 0 else ''}{integral}"
        payload: dict[str, Any] = {"sign": sign, "integral": str(integral), "weight": li.weight, "depth": li.depth}
        lines = [text]
        if lie:
            image = li_lie(li)
            payload["lie"] = str(image)
            lines.append(str(image))
        _emit(session, "li-expand", payload, lines)


@app.command()
def depth(
    ctx: typer.Context,
    expression: str = typer.Argument(..., help="Combination of weight >= 1."),
) -> None:
    """Print the depth bound of a combination after normalization."""

    session = _session(ctx)
    with _reported(session):
        element = parse_element(expression, session.field())
        bound = depth_bound(element)
        _emit(session, "depth", {"weight": element.weight, "depth_bound": bound}, [f"depth <= {bound}"])


@app.command()
def selftest(
    ctx: typer.Context,
    full: bool = typer.Option(False, "--full", help="Ten times the samples and one more weight.", is_flag=True),
    samples: int | None = typer.Option(None, "--samples", min=1, help="Samples per check."),
) -> None:
    """Run coJacobi, commutation, coassociativity, and coproduct checks."""

    session = _session(ctx)
    with _reported(session):
        results = run_selftest(samples=samples, seed=session.settings.seed, full=full)
        passed = all(result.passed for result in results)
        payload = {
            "passed": passed,
            "checks": [
                {"name": r.name, "samples": r.samples, "failures": r.failures, "skipped": r.skipped} for r in results
            ],
        }
        lines = [
            f"{r.name}: {'ok' if r.passed else 'FAILED'} samples={r.samples} failures={r.failures} "
            f"skipped={r.skipped} elapsed_ms={r.elapsed_ms}"
            for r in results
        ]
        _emit(session, "selftest", payload, lines)
    if not passed:
        raise typer.Exit(code=2)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


@verify_app.command("five-term")
def verify_five_term_command(
    ctx: typer.Context,
    a: str = typer.Option("a", "--a", help="First argument."),
    b: str = typer.Option("b", "--b", help="Second argument."),
    membership: bool = typer.Option(False, "--membership", help="Also derive membership by descent.", is_flag=True),
) -> None:
    """Abel's five-term relation for Li_2."""

    session = _session(ctx)
    with _reported(session):
        field = session.field()
        certificate = verify_five_term(
            parse_scalar(a, field),
            parse_scalar(b, field),
            session.db() if membership else None,
            membership=membership,
            budget=session.budget(),
        )
    _finish(session, "verify five-term", certificate)


@verify_app.command("twenty-two")
def verify_twenty_two_command(
    ctx: typer.Context,
    a: str = typer.Option("a", "--a", help="First argument."),
    b: str = typer.Option("b", "--b", help="Second argument."),
    c: str = typer.Option("c", "--c", help="Third argument."),
    stage2: bool = typer.Option(True, help="Run the bounded five-term search after stage 1."),
    closure_degree: int | None = typer.Option(None, "--closure-degree", min=1, help="Argument closure depth."),
) -> None:
    """The 22-term relation for Li_3: exact stage 1, best-effort stage 2."""

    session = _session(ctx)
    with _reported(session):
        field = session.field()
        certificate = verify_22_term(
            parse_scalar(a, field),
            parse_scalar(b, field),
            parse_scalar(c, field),
            session.db() if session.settings.db_path.exists() else None,
            stage2=stage2,
            closure_degree=closure_degree or session.settings.closure_degree,
            budget=session.budget(),
        )
    _finish(session, "verify twenty-two", certificate)


@verify_app.command("shuffle")
def verify_shuffle_command(
    ctx: typer.Context,
    entries: str = typer.Argument(..., help="Comma-separated x0, x1, ..., xn."),
    n1: int = typer.Option(..., "--n1", min=1, help="Length of the first word."),
    n2: int = typer.Option(..., "--n2", min=1, help="Length of the second word."),
    membership: bool = typer.Option(False, "--membership", help="Also derive membership.", is_flag=True),
) -> None:
    """Sum over (n1, n2)-shuffles of cor(x0, sigma(x1..xn))."""

    session = _session(ctx)
    with _reported(session):
        x = _entries(entries, session.field())
        certificate = verify_shuffle(x, n1, n2, session.db(), membership=membership, budget=session.budget())
    _finish(session, "verify shuffle", certificate)


@verify_app.command("reversal")
def verify_reversal_command(
    ctx: typer.Context,
    entries: str = typer.Argument(..., help="Comma-separated x0, ..., xn."),
    membership: bool = typer.Option(False, "--membership", help="Also derive membership.", is_flag=True),
) -> None:
    """cor(x0, ..., xn) - (-1)^(n+1) cor(xn, ..., x0)."""

    session = _session(ctx)
    with _reported(session):
        x = _entries(entries, session.field())
        certificate = verify_reversal(x, session.db(), membership=membership, budget=session.budget())
    _finish(session, "verify reversal", certificate)


@verify_app.command("distribution")
def verify_distribution_command(
    ctx: typer.Context,
    entries: str = typer.Argument(..., help="Comma-separated x0, ..., xn."),
    order: int = typer.Option(2, "--order", min=1, help="N; the field must contain the N-th roots of unity."),
    membership: bool = typer.Option(False, "--membership", help="Also derive membership.", is_flag=True),
) -> None:
    """cor(x0^N, ..., xn^N) against the sum over twists by N-th roots of unity."""

    session = _session(ctx)
    with _reported(session):
        x = _entries(entries, session.field())
        certificate = verify_distribution(order, x, session.db(), membership=membership, budget=session.budget())
    _finish(session, "verify distribution", certificate)


@verify_app.command("inversion")
def verify_inversion_command(
    ctx: typer.Context,
    symbol: str = typer.Argument(..., help="Li[n](x) or a multiple Li[n1,...,nk](x1,...,xk)."),
    membership: bool = typer.Option(False, "--membership", help="Depth one: also derive membership.", is_flag=True),
) -> None:
    """Li(x) against Li(1/x) modulo lower depth."""

    session = _session(ctx)
    with _reported(session):
        li = parse_lisym(symbol, session.field())
        if li.depth == 1 and li.n0 == 0:
            certificate = verify_depth1_inversion(
                li.indices[0], li.args[0], session.db(), membership=membership or None, budget=session.budget()
            )
        else:
            certificate = verify_inversion_general(li, session.db(), budget=session.budget())
    _finish(session, "verify inversion", certificate)


@verify_app.command("stuffle-antipode")
def verify_stuffle_antipode_command(
    ctx: typer.Context,
    symbol: str = typer.Argument(..., help="Li[n1,...,nk](x1,...,xk)."),
) -> None:
    """Li(x1..xk) + (-1)^k Li(xk..x1) modulo depth k-1."""

    session = _session(ctx)
    with _reported(session):
        li = parse_lisym(symbol, session.field())
        certificate = verify_stuffle_antipode(li, session.db(), budget=session.budget())
    _finish(session, "verify stuffle-antipode", certificate)


@verify_app.command("cyclic-depth")
def verify_cyclic_depth_command(
    ctx: typer.Context,
    entries: str = typer.Argument(..., help="Comma-separated x1, ..., x_{n+1}."),
    index: int = typer.Option(..., "--i", min=1, help="1-based rotation index."),
) -> None:
    """Cyclic symmetry of I(0; x1..xn; x_{n+1}) modulo lower depth."""

    session = _session(ctx)
    with _reported(session):
        x = _entries(entries, session.field())
        certificate = verify_cyclic_mod_depth(x, index, session.db())
    _finish(session, "verify cyclic-depth", certificate)


@verify_app.command("li-hom")
def verify_li_hom_command(
    ctx: typer.Context,
    left: str = typer.Argument(..., help="First word as Li[n1,...](x1,...), or 1."),
    right: str = typer.Argument(..., help="Second word as Li[m1,...](y1,...), or 1."),
    membership: bool = typer.Option(False, "--membership", help="Also derive membership.", is_flag=True),
) -> None:
    """Li(w1) * Li(w2) against Li of the quasi-shuffle product."""

    session = _session(ctx)
    with _reported(session):
        field = session.field()
        certificate = verify_li_homomorphism(
            _word(left, field),
            _word(right, field),
            session.db(),
            membership=membership,
            budget=session.budget(),
        )
    _finish(session, "verify li-hom", certificate)


@verify_app.command("distribution-hopf")
def verify_distribution_hopf_command(
    ctx: typer.Context,
    symbol: str = typer.Argument(..., help="II(x0; x1,...,xn; x_{n+1})."),
    order: int = typer.Option(2, "--order", min=1, help="N; the field must contain the N-th roots of unity."),
) -> None:
    """Distribution relation for iterated integrals, certified by induction on the weight."""

    session = _session(ctx)
    with _reported(session):
        integral = parse_iisym(symbol, session.field())
        certificate = verify_distribution_hopf(order, integral, session.db(), budget=session.budget())
    _finish(session, "verify distribution-hopf", certificate)


@verify_app.command("depth-drop")
def verify_depth_drop_command(
    ctx: typer.Context,
    symbol: str = typer.Argument(..., help="Li[n1,...,nk](x1,...,xk) over F(t)."),
    var: str = typer.Option(..., "--var", help="Variable to specialize."),
    at: str = typer.Option(..., "--at", help="Center: an expression free of the variable, or 'inf'."),
) -> None:
    """Specializing where an argument degenerates lowers the depth."""

    session = _session(ctx)
    with _reported(session):
        field = session.field()
        li = parse_lisym(symbol, field)
        certificate = depth_drop_check(li, SpecPoint.parse(field, var, at), session.db())
    _finish(session, "verify depth-drop", certificate)


# ---------------------------------------------------------------------------
# relations
# ---------------------------------------------------------------------------


@relations_app.command("list")
def relations_list(
    ctx: typer.Context,
    weight: int | None = typer.Option(None, "--weight", min=2, help="Only generators of this weight."),
) -> None:
    """Print the stored generators with their provenance."""

    session = _session(ctx)
    with _reported(session):
        generators = session.db().generators(weight)
        records = [
            {
                "weight": generator.element.weight,
                "kind": generator.provenance.kind,
                "identity": generator.provenance.identity,
                "terms": serialize_terms(generator.element),
            }
            for generator in generators
        ]
        lines = [
            f"[{index}] weight={record['weight']} kind={record['kind']} identity={record['identity']}: "
            f"{generator.element}"
            for index, (record, generator) in enumerate(zip(records, generators, strict=True), start=1)
        ]
        _emit(session, "relations list", {"generators": records}, lines or ["(empty)"])


@relations_app.command("add")
def relations_add(
    ctx: typer.Context,
    expression: str = typer.Argument(..., help="Generator of weight >= 2."),
) -> None:
    """Register a manual generator; its cobracket must vanish modulo the database."""

    session = _session(ctx)
    with _reported(session):
        element = parse_element(expression, session.field())
        db = session.db()
        added = db.register(element, Provenance(kind="manual"), check_coideal=True)
        if added:
            session.persist()
        payload = {"added": added, "generators": len(db)}
        _emit(session, "relations add", payload, ["added" if added else "already in the span"])


@relations_app.command("replay")
def relations_replay(ctx: typer.Context) -> None:
    """Re-derive every generator from its provenance and compare serializations."""

    session = _session(ctx)
    with _reported(session):
        db = replay(session.settings.db_path, aux_variables=session.settings.aux_variables)
        consistent = db.echelon_is_consistent()
        payload = {"generators": len(db), "consistent": consistent}
        _emit(session, "relations replay", payload, [f"replayed {len(db)} generator(s)"])


@relations_app.command("seed")
def relations_seed(ctx: typer.Context) -> None:
    """Derive the classical weight-2 and weight-3 generators."""

    session = _session(ctx)
    with _reported(session):
        db = session.db()
        before = len(db)
        seed(db, budget=session.budget())
        session.persist()
        payload = {"added": len(db) - before, "generators": len(db)}
        _emit(session, "relations seed", payload, [f"seeded {len(db) - before} generator(s), {len(db)} total"])


def _session(ctx: typer.Context) -> Session:
    if ctx.obj is None:
        ctx.obj = Session(settings=load_config())
    session: Session = ctx.obj
    return session


@contextmanager
def _reported(session: Session) -> Iterator[None]:
    try:
        yield
    except PolylogError as exc:
        _emit_error(session, exc.error)
        raise typer.Exit(code=1) from None
    except OSError as exc:
        _emit_error(session, ErrorReport(error_type="io_error", message=str(exc), stage="cli"))
        raise typer.Exit(code=1) from None
    except ValueError as exc:
        _emit_error(session, ErrorReport(error_type="invalid_record", message=str(exc), stage="relations"))
        raise typer.Exit(code=1) from None


def _emit(session: Session, command: str, payload: dict[str, Any], lines: list[str]) -> None:
    if session.structured:
        report = Report(command=command, payload=payload)
        typer.echo(json.dumps(report.model_dump(mode="json"), sort_keys=True))
        return
    for line in lines:
        typer.echo(line)


def _emit_error(session: Session, error: ErrorReport) -> None:
    if session.structured:
        typer.echo(json.dumps(error.model_dump(mode="json", exclude_none=True), sort_keys=True))
        return
    where = f" at line {error.position.line}, column {error.position.column}" if error.position else ""
    typer.echo(f"error: {error.error_type}{where}: {error.message}", err=True)


def _certificate_payload(certificate: Certificate) -> dict[str, Any]:
    return certificate.model_dump(mode="json", exclude={"elapsed_ms"})


def _finish(session: Session, command: str, certificate: Certificate) -> None:
    if session.save and certificate.established:
        with _reported(session):
            session.persist()
    status = "certified" if certificate.certified else "not certified"
    details = " ".join(f"{key}={value}" for key, value in sorted(certificate.details.items()))
    lines = [f"{certificate.identity}: {status} tier={certificate.tier} weight={certificate.weight}"]
    if certificate.established:
        lines.append(f"established {certificate.established} generator(s)")
    if details:
        lines.append(details)
    _emit(session, command, _certificate_payload(certificate), lines)
    raise typer.Exit(code=0 if certificate.certified else 2)


def _element_payload(element: LinComb) -> dict[str, Any]:
    return {"weight": element.weight, "value": str(element), "terms": len(element.rebased())}


def _entries(text: str, field: FieldContext) -> tuple[FieldElem, ...]:
    parts = [part for part in text.split(",") if part.strip()]
    if not parts:
        raise SymbolError("Expected a comma-separated list of entries.")
    return tuple(parse_scalar(part, field) for part in parts)


def _word(text: str, field: FieldContext) -> QSWord:
    if text.strip() == "1":
        return QSWord()
    li: LiSym = parse_lisym(text, field)
    if li.n0:
        raise SymbolError("Quasi-shuffle words have no leading zero index.", details={"n0": li.n0})
    return QSWord(tuple(zip(li.indices, li.args, strict=True)))


def _tensor_text(items: list[tuple[Any, Any]]) -> str:
    pieces = []
    for legs, coeff in items:
        body = " (x) ".join(format_symbol(leg, 1) for leg in legs)
        magnitude = abs(coeff)
        text = body if magnitude == 1 else f"{format_rational(magnitude)}*({body})"
        pieces.append(("- " if coeff < 0 else "+ ") + text)
    if not pieces:
        return "0"
    joined = " ".join(pieces)
    return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]


if __name__ == "__main__":
    app()
