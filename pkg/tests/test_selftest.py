from __future__ import annotations

import random

import pytest

from formal_polylog.errors import PolylogError
from formal_polylog.field import FieldContext
from formal_polylog.selftest import random_entries, run_selftest
from formal_polylog.timing import Budget, TimingTracker


def test_selftest_passes_on_a_small_sample() -> None:
    results = run_selftest(samples=2, seed=1, budget=Budget(None))

    assert [result.name for result in results] == [
        "cojacobi",
        "commutation",
        "coassociativity",
        "cobracket-agreement",
        "classical-coproduct",
    ]
    assert all(result.passed for result in results)
    assert all(result.samples + result.skipped == 2 for result in results[:4])
    assert results[-1].samples == 3


def test_exhausted_budget_skips_samples() -> None:
    results = run_selftest(samples=3, seed=1, budget=Budget(0.0))

    assert all(result.samples == 0 for result in results)
    assert results[0].skipped == 3


def test_selftest_needs_two_variables() -> None:
    with pytest.raises(PolylogError):
        run_selftest(FieldContext(("t",)), samples=1)


def test_random_entries_use_the_requested_variable() -> None:
    ctx = FieldContext(("t", "s"))
    entries = random_entries(ctx, random.Random(3), 6, "s")

    assert len(entries) == 6
    assert all(set(entry.free_variables()) <= {"s"} for entry in entries)


def test_checks_are_timed_as_named_stages() -> None:
    tracker = TimingTracker()

    results = run_selftest(samples=1, seed=2, budget=Budget(None), tracker=tracker)

    durations = tracker.as_dict()
    assert set(durations) == {result.name for result in results}
    assert all(result.elapsed_ms == durations[result.name] for result in results)
    assert tracker.total_ms() > 0
