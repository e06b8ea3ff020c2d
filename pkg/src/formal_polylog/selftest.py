"""Reduced-size property checks for CI smoke runs (``polylog selftest``)."""

from __future__ import annotations

import logging
import random
from collections.abc import Callable
from dataclasses import dataclass

from .coalg import cobracket, cojacobi, cor
from .config import config as default_config
from .errors import PolylogError
from .field import FieldContext, FieldElem
from .hopf import IISym, cobracket_via_coproduct, coassociator, ii_cobracket, ii_to_lie, reduced_coproduct
from .polylog import LiSym, classical_reduced_coproduct, li_hopf
from .special import SpecPoint, specialize, specialize_wedge
from .timing import Budget, TimingTracker

logger = logging.getLogger("formal_polylog.selftest")

_CONSTANTS = (0, 1, -1, 2, 3, -2)
_CENTERS = ("0", "1", "-1", "2", "inf")


@dataclass
class CheckResult:
    name: str
    samples: int
    failures: int
    skipped: int = 0
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0


def random_entry(ctx: FieldContext, rng: random.Random, variable: str) -> FieldElem:
    """A small constant, or ``a*v + b`` for a variable v."""

    if rng.random() < 0.5:
        return ctx.constant(rng.choice(_CONSTANTS))
    scale = rng.choice((1, -1, 2))
    shift = rng.choice(_CONSTANTS)
    return ctx.variable(variable) * scale + shift


def random_entries(ctx: FieldContext, rng: random.Random, size: int, variable: str = "t") -> tuple[FieldElem, ...]:
    return tuple(random_entry(ctx, rng, variable) for _ in range(size))


def _run(
    name: str,
    samples: int,
    budget: Budget,
    trial: Callable[[int], bool],
) -> CheckResult:
    failures = 0
    skipped = 0
    done = 0
    for index in range(samples):
        if budget.expired():
            skipped = samples - index
            logger.info("op=selftest check=%s budget=exhausted skipped=%s", name, skipped)
            break
        try:
            ok = trial(index)
        except PolylogError as exc:
            logger.debug("op=selftest check=%s sample=%s skipped=%s", name, index, exc)
            skipped += 1
            continue
        done += 1
        if not ok:
            failures += 1
            logger.warning("op=selftest check=%s sample=%s failed=true", name, index)
    logger.info("op=selftest check=%s samples=%s failures=%s skipped=%s", name, done, failures, skipped)
    return CheckResult(name, done, failures, skipped)


def check_cojacobi(
    ctx: FieldContext, rng: random.Random, samples: int, budget: Budget, *, max_weight: int
) -> CheckResult:
    def trial(_: int) -> bool:
        weight = rng.randint(2, max_weight)
        return cojacobi(cor(*random_entries(ctx, rng, weight + 1))) == 0

    return _run("cojacobi", samples, budget, trial)


def check_commutation(
    ctx: FieldContext, rng: random.Random, samples: int, budget: Budget, *, max_weight: int
) -> CheckResult:
    """delta(Sp e) = (Sp ^ Sp)(delta e) at centers 0, 1, -1, 2 and infinity."""

    variable = ctx.user_variables[0]

    def trial(_: int) -> bool:
        weight = rng.randint(2, max_weight)
        element = cor(*random_entries(ctx, rng, weight + 1, variable))
        point = SpecPoint.parse(ctx, variable, rng.choice(_CENTERS))
        return cobracket(specialize(element, point)) == specialize_wedge(cobracket(element), point)

    return _run("commutation", samples, budget, trial)


def _random_iisym(ctx: FieldContext, rng: random.Random, weight: int) -> IISym:
    pool = (ctx.zero, ctx.one, ctx.variable(ctx.user_variables[0]), ctx.variable(ctx.user_variables[1]))
    return IISym.of(*(rng.choice(pool) for _ in range(weight + 2)))


def check_coassociativity(
    ctx: FieldContext, rng: random.Random, samples: int, budget: Budget, *, max_weight: int
) -> CheckResult:
    def trial(_: int) -> bool:
        return coassociator(_random_iisym(ctx, rng, rng.randint(1, max_weight))) == 0

    return _run("coassociativity", samples, budget, trial)


def check_cobracket_agreement(
    ctx: FieldContext, rng: random.Random, samples: int, budget: Budget, *, max_weight: int
) -> CheckResult:
    """Three routes to the cobracket of I^L agree: coproduct, double sum, correlators."""

    def trial(_: int) -> bool:
        symbol = _random_iisym(ctx, rng, rng.randint(2, max_weight))
        direct = cobracket(ii_to_lie(symbol))
        return cobracket_via_coproduct(symbol) == direct and ii_cobracket(symbol) == direct

    return _run("cobracket-agreement", samples, budget, trial)


def check_classical_coproduct(ctx: FieldContext, budget: Budget, *, max_weight: int) -> CheckResult:
    x = ctx.variable(ctx.user_variables[0])
    weights = list(range(2, max_weight + 1))

    def trial(index: int) -> bool:
        n = weights[index]
        return reduced_coproduct(li_hopf(LiSym.of((n,), (x,)))) == classical_reduced_coproduct(n, x)

    return _run("classical-coproduct", len(weights), budget, trial)


def run_selftest(
    ctx: FieldContext | None = None,
    *,
    samples: int | None = None,
    seed: int | None = None,
    full: bool = False,
    budget: Budget | None = None,
    tracker: TimingTracker | None = None,
) -> list[CheckResult]:
    """Run every check; ``full`` raises sample counts tenfold and the weight range by one.

    Each check is timed as a stage of ``tracker`` under its own name.
    """

    if ctx is None:
        ctx = FieldContext(("t", "s"), aux_variables=default_config.aux_variables)
    if len(ctx.user_variables) < 2:
        raise PolylogError("The selftest needs at least two user variables.")
    count = samples or default_config.selftest_samples
    rng = random.Random(default_config.seed if seed is None else seed)
    limit = budget or Budget(default_config.time_budget_s * (10 if full else 1))
    if full:
        count *= 10
    weight = 5 if full else 4
    timings = tracker if tracker is not None else TimingTracker()
    checks: list[tuple[str, Callable[[], CheckResult]]] = [
        ("cojacobi", lambda: check_cojacobi(ctx, rng, count, limit, max_weight=weight)),
        ("commutation", lambda: check_commutation(ctx, rng, count, limit, max_weight=weight)),
        ("coassociativity", lambda: check_coassociativity(ctx, rng, count, limit, max_weight=weight)),
        ("cobracket-agreement", lambda: check_cobracket_agreement(ctx, rng, count, limit, max_weight=weight - 1)),
        ("classical-coproduct", lambda: check_classical_coproduct(ctx, limit, max_weight=weight)),
    ]
    results = []
    for name, check in checks:
        with timings.context(name):
            results.append(check())
    durations = timings.as_dict()
    for result in results:
        result.elapsed_ms = durations[result.name]
    logger.info(
        "op=selftest passed=%s elapsed_ms=%.3f",
        all(result.passed for result in results),
        timings.total_ms(),
    )
    return results
