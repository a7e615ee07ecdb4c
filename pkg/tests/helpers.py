"""Shared builders for tests: synthetic rows, datasets, and log entries."""

from __future__ import annotations

import random

from chronoscale.ingest import IngestConfig, RawRow, TimeUnit, build_dataset
from chronoscale.logbook import LogEntry, LogKind
from chronoscale.model import Dataset


def make_rows(measures: list[float], anchors: set[float] = frozenset(),
              titles: dict[float, str] | None = None) -> list[RawRow]:
    titles = titles or {}
    return [
        RawRow(
            label=f"event-{i}",
            description="",
            image="",
            time_unit=TimeUnit.YEARS_AGO,
            time_value=m,
            anchor=m in anchors,
            timeline_title=titles.get(m, ""),
        )
        for i, m in enumerate(measures)
    ]


def make_dataset(measures: list[float], anchors: set[float] = frozenset(),
                 title: str = "fixture") -> Dataset:
    result = build_dataset(make_rows(measures, anchors), IngestConfig(), title=title)
    assert isinstance(result, Dataset), getattr(result, "errors", result)
    return result


def random_measures(rng: random.Random, max_events: int = 40) -> list[float]:
    """Log-uniform measures at four significant digits, like curated data."""
    import math

    n = rng.randint(1, max_events)
    values: set[float] = set()
    while len(values) < n:
        raw = 10.0 ** rng.uniform(0.0, 9.6)
        values.add(round(raw, 3 - math.floor(math.log10(raw))))
    return sorted(values)


def random_rows(rng: random.Random, max_events: int = 40) -> list[RawRow]:
    measures = random_measures(rng, max_events)
    anchors = {m for m in measures[:-1] if rng.random() < 0.2}
    anchors.add(measures[-1])
    shuffled = measures[:]
    rng.shuffle(shuffled)
    return make_rows(shuffled, anchors)


def random_dataset(rng: random.Random, max_events: int = 40) -> Dataset:
    result = build_dataset(random_rows(rng, max_events), IngestConfig(), title="random")
    assert isinstance(result, Dataset), getattr(result, "errors", result)
    return result


def press(ts_ms: int, deployment: str = "d", button: str = "explore") -> LogEntry:
    return LogEntry(deployment, ts_ms, LogKind.BUTTON_PRESS, button=button)


def auto(ts_ms: int, kind: LogKind = LogKind.AUTO_ADVANCE, deployment: str = "d") -> LogEntry:
    return LogEntry(deployment, ts_ms, kind)


def random_entries(rng: random.Random, count: int, deployment: str = "d") -> list[LogEntry]:
    """Entries with gap distribution straddling every session-split boundary."""
    entries: list[LogEntry] = []
    ts = rng.randint(0, 10_000)
    for _ in range(count):
        roll = rng.random()
        if roll < 0.55:
            gap = rng.randint(0, 5_000)
        elif roll < 0.75:
            gap = rng.choice([59_999, 60_000, 60_001])
        elif roll < 0.9:
            gap = rng.randint(5_000, 120_000)
        else:
            gap = rng.randint(120_000, 1_000_000)
        ts += gap
        kind_roll = rng.random()
        if kind_roll < 0.7:
            entries.append(press(ts, deployment, rng.choice(
                ("explore", "revisit", "reset", "tap_marker", "tap_background"))))
        elif kind_roll < 0.8:
            entries.append(auto(ts, LogKind.AUTO_START, deployment))
        elif kind_roll < 0.9:
            entries.append(auto(ts, LogKind.AUTO_ADVANCE, deployment))
        else:
            entries.append(auto(ts, LogKind.AUTO_PROMPT, deployment))
    return entries
