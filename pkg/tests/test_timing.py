from __future__ import annotations

import time

from formal_polylog.timing import Budget, TimingTracker


def test_tracker_accumulates_named_stages() -> None:
    tracker = TimingTracker()

    with tracker.context("cobracket"):
        time.sleep(0.001)
    with tracker.context("cobracket"):
        pass
    with tracker.context("reduce"):
        pass

    durations = tracker.as_dict()
    assert set(durations) == {"cobracket", "reduce"}
    assert durations["cobracket"] > 0
    assert tracker.total_ms() >= durations["cobracket"]

    tracker.reset()
    assert tracker.as_dict() == {}


def test_unlimited_budget_never_expires() -> None:
    budget = Budget.unlimited()

    assert not budget.expired()
    assert budget.remaining() == float("inf")


def test_budget_expires() -> None:
    budget = Budget(0.0)

    assert budget.expired()
    assert budget.remaining() == 0.0
    assert budget.elapsed() >= 0.0
