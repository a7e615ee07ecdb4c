"""Core dataset model: events, periods, and the validation rules they obey.

A dataset is a list of dated events split into contiguous periods. Periods
must be monotonic (older bounds strictly increase), contiguous (neighbouring
periods share an edge), and disjoint (half-open intervals cannot overlap).
Every period ends at the measure of its anchor event, the most ancient event
it contains.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field

from .errors import ChronoError

MIN_MEASURE = 1.0

# Curation lint thresholds. Warnings never block a dataset.
RANGE_SIZE_MIN = 3
RANGE_SIZE_MAX = 12
EVENT_COUNT_MIN = 10
EVENT_COUNT_MAX = 80
DESC_WORD_LIMIT = 30


@dataclass(frozen=True)
class Event:
    """One dated value: a named point a given number of years before present."""

    index: int
    name: str
    measure: float
    description: str = ""
    image_ref: str | None = None
    is_anchor: bool = False
    period_title: str | None = None


@dataclass(frozen=True)
class Period:
    """A contiguous half-open interval of measures, (newer_bound, older_bound].

    Period 0 additionally includes its newer bound, so an event exactly at
    the present-day edge still belongs to it.
    """

    index: int
    newer_bound: float
    older_bound: float
    title: str | None = None
    color_index: int = 0


@dataclass(frozen=True)
class Dataset:
    title: str
    subtitle: str | None
    events: tuple[Event, ...]
    periods: tuple[Period, ...]

    @property
    def max_measure(self) -> float:
        return self.events[-1].measure


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    index: int | None = None


@dataclass
class ValidationReport:
    errors: list[Violation] = field(default_factory=list)
    warnings: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error_codes(self) -> list[str]:
        return [v.code for v in self.errors]

    def warning_codes(self) -> list[str]:
        return [v.code for v in self.warnings]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "errors": [vars(v) for v in self.errors],
            "warnings": [vars(v) for v in self.warnings],
        }


def validate(dataset: Dataset) -> ValidationReport:
    """Check every structural invariant and curation lint on a candidate dataset.

    Always returns a report; the dataset is acceptable iff ``report.ok``.
    """
    report = ValidationReport()
    err = report.errors.append
    warn = report.warnings.append

    if not dataset.events:
        err(Violation("E_NO_EVENTS", "dataset contains no events"))
    if not dataset.periods:
        err(Violation("E_NO_PERIODS", "dataset contains no periods"))
    if report.errors:
        return report

    for pos, event in enumerate(dataset.events):
        if event.index != pos:
            err(Violation("E_BAD_INDEX", f"event index {event.index} at position {pos}", pos))
        if event.measure < MIN_MEASURE:
            err(Violation("E_TOO_RECENT", f"measure {event.measure} is below {MIN_MEASURE}", pos))
        if pos > 0 and event.measure < dataset.events[pos - 1].measure:
            err(Violation("E_NOT_SORTED", f"measure order breaks at position {pos}", pos))

    previous_older = None
    for pos, period in enumerate(dataset.periods):
        if period.index != pos:
            err(Violation("E_BAD_INDEX", f"period index {period.index} at position {pos}", pos))
        if period.older_bound <= period.newer_bound:
            err(Violation("E_EMPTY_RANGE", f"period {pos} has non-positive width", pos))
        if pos > 0:
            if period.newer_bound != dataset.periods[pos - 1].older_bound:
                err(Violation(
                    "E_NOT_CONTIGUOUS",
                    f"period {pos} does not share an edge with period {pos - 1}",
                    pos,
                ))
            if previous_older is not None and period.older_bound <= previous_older:
                err(Violation("E_NOT_MONOTONIC", f"older bound does not increase at period {pos}", pos))
        previous_older = period.older_bound

    if report.errors:
        return report

    # Interval membership: every event in exactly one period, anchors exactly
    # at older bounds, one anchor per period.
    counts = [0] * len(dataset.periods)
    for event in dataset.events:
        k = _period_index_of_measure(dataset, event.measure)
        if k is None:
            err(Violation("E_EVENT_OUTSIDE", f"measure {event.measure} lies in no period", event.index))
            continue
        counts[k] += 1
        at_boundary = event.measure == dataset.periods[k].older_bound
        if event.is_anchor and not at_boundary:
            err(Violation(
                "E_BAD_ANCHOR_FLAG",
                f"event {event.index} is flagged as an anchor but is not at a period's older bound",
                event.index,
            ))
        if not event.is_anchor and at_boundary:
            err(Violation(
                "E_MISSING_ANCHOR",
                f"event {event.index} sits at period {k}'s older bound but is not flagged",
                event.index,
            ))

    for period in dataset.periods:
        boundary_events = [e for e in dataset.events if e.measure == period.older_bound]
        if counts[period.index] == 0:
            err(Violation("E_EMPTY_PERIOD", f"period {period.index} contains no event", period.index))
        elif not boundary_events:
            err(Violation("E_MISSING_ANCHOR", f"period {period.index} has no anchor event", period.index))
        elif len(boundary_events) > 1:
            err(Violation(
                "E_AMBIGUOUS_ANCHOR",
                f"{len(boundary_events)} events tie at period {period.index}'s older bound",
                period.index,
            ))

    if report.errors:
        return report

    for period in dataset.periods:
        n = counts[period.index]
        if n < RANGE_SIZE_MIN or n > RANGE_SIZE_MAX:
            warn(Violation(
                "W_RANGE_SIZE",
                f"period {period.index} holds {n} events, outside {RANGE_SIZE_MIN}-{RANGE_SIZE_MAX}",
                period.index,
            ))
    total = len(dataset.events)
    if total < EVENT_COUNT_MIN or total > EVENT_COUNT_MAX:
        warn(Violation(
            "W_EVENT_COUNT",
            f"{total} events is far from the ~30 the format is tuned for",
        ))
    for event in dataset.events:
        if len(event.description.split()) > DESC_WORD_LIMIT:
            warn(Violation(
                "W_DESC_LEN",
                f"event {event.index} description exceeds {DESC_WORD_LIMIT} words",
                event.index,
            ))
    return report


def period_of(dataset: Dataset, event_index: int) -> int:
    """Return the index of the period containing the given event.

    Raises OUT_OF_BOUNDS for an event index outside the dataset.
    """
    if event_index < 0 or event_index >= len(dataset.events):
        raise ChronoError("OUT_OF_BOUNDS", f"event index {event_index} out of range")
    k = _period_index_of_measure(dataset, dataset.events[event_index].measure)
    if k is None:
        raise ChronoError("OUT_OF_BOUNDS", f"event {event_index} lies in no period")
    return k


def _period_index_of_measure(dataset: Dataset, measure: float) -> int | None:
    olders = [p.older_bound for p in dataset.periods]
    k = bisect_left(olders, measure)
    if k >= len(dataset.periods):
        return None
    period = dataset.periods[k]
    if measure > period.newer_bound or (k == 0 and measure >= period.newer_bound):
        return k
    return None
