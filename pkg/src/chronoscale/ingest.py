"""Parsing of the spreadsheet-row dataset format and dataset construction.

The accepted table is comma- or tab-delimited UTF-8 with a header row naming
seven columns (any order, case-insensitive): label, description, image,
time unit, time value, anchor, timeline title. Each data row is one event.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass

from .errors import ChronoError
from .model import Dataset, Event, Period, ValidationReport, Violation, validate

DEFAULT_REFERENCE_YEAR = 2024

COLUMNS = ("label", "description", "image", "time unit", "time value", "anchor", "timeline title")


class TimeUnit(enum.Enum):
    YEAR = "year"
    YEARS_AGO = "years ago"


class Delimiter(enum.Enum):
    COMMA = ","
    TAB = "\t"
    AUTO = "auto"


@dataclass(frozen=True)
class RawRow:
    label: str
    description: str
    image: str
    time_unit: TimeUnit
    time_value: float
    anchor: bool
    timeline_title: str


@dataclass(frozen=True)
class IngestConfig:
    reference_year: int = DEFAULT_REFERENCE_YEAR
    delimiter: Delimiter = Delimiter.AUTO


_UNIT_ALIASES = {
    "year": TimeUnit.YEAR,
    "years ago": TimeUnit.YEARS_AGO,
    "years_ago": TimeUnit.YEARS_AGO,
    "ya": TimeUnit.YEARS_AGO,
}

_BOOL_ALIASES = {"true": True, "1": True, "false": False, "0": False}


def _normalize_header(cell: str) -> str:
    return " ".join(cell.strip().lower().replace("_", " ").split())


def parse_table(data: bytes | str, config: IngestConfig = IngestConfig()) -> list[RawRow]:
    """Parse delimited text into raw rows, one per non-empty data row.

    Quoted cells may contain the delimiter and newlines (RFC-4180 style).
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ChronoError("E_ENCODING", f"input is not valid UTF-8: {exc}") from exc
    else:
        text = data

    text = text.lstrip("﻿")
    if not text.strip():
        raise ChronoError("E_HEADER_MISSING", "input is empty")

    delimiter = config.delimiter
    if delimiter is Delimiter.AUTO:
        header_line = text.splitlines()[0]
        delimiter = Delimiter.TAB if header_line.count("\t") > header_line.count(",") else Delimiter.COMMA

    reader = csv.reader(io.StringIO(text, newline=""), delimiter=delimiter.value)
    try:
        header = next(reader)
    except StopIteration:
        raise ChronoError("E_HEADER_MISSING", "input has no header row") from None

    positions: dict[str, int] = {}
    for i, cell in enumerate(header):
        name = _normalize_header(cell)
        if name in COLUMNS and name not in positions:
            positions[name] = i
    missing = [c for c in COLUMNS if c not in positions]
    if missing:
        raise ChronoError("E_HEADER_MISSING", f"missing column(s): {', '.join(missing)}")

    rows: list[RawRow] = []
    for record in reader:
        line = reader.line_num
        if not any(cell.strip() for cell in record):
            continue

        def cell(name: str) -> str:
            i = positions[name]
            return record[i].strip() if i < len(record) else ""

        unit_text = cell("time unit").lower()
        unit = _UNIT_ALIASES.get(unit_text)
        if unit is None:
            raise ChronoError("E_BAD_CELL", f"row {line}: unknown time unit {unit_text!r}",
                              row=line, column="time unit")
        try:
            value = float(cell("time value"))
        except ValueError:
            raise ChronoError("E_BAD_CELL", f"row {line}: time value {cell('time value')!r} is not a number",
                              row=line, column="time value") from None
        if value != value or value in (float("inf"), float("-inf")):
            raise ChronoError("E_BAD_CELL", f"row {line}: time value must be finite",
                              row=line, column="time value")
        anchor_text = cell("anchor").lower() or "false"
        if anchor_text not in _BOOL_ALIASES:
            raise ChronoError("E_BAD_CELL", f"row {line}: anchor {cell('anchor')!r} is not a boolean",
                              row=line, column="anchor")

        rows.append(RawRow(
            label=cell("label"),
            description=cell("description"),
            image=cell("image"),
            time_unit=unit,
            time_value=value,
            anchor=_BOOL_ALIASES[anchor_text],
            timeline_title=cell("timeline title"),
        ))
    return rows


def to_years_ago(unit: TimeUnit, value: float, reference_year: int) -> float:
    """Convert a row time to a measure in years before present.

    Calendar years convert against the configured reference year; years-ago
    values pass through. Results below one year are rejected.
    """
    if unit is TimeUnit.YEARS_AGO:
        if value < 1:
            raise ChronoError("E_NONPOSITIVE", f"years-ago value {value} is below 1")
        return value
    measure = reference_year - value
    if measure < 1:
        raise ChronoError("E_TOO_RECENT", f"year {value} is less than one year before {reference_year}")
    return measure


def build_dataset(
    rows: list[RawRow],
    config: IngestConfig = IngestConfig(),
    title: str = "",
    subtitle: str | None = None,
) -> Dataset | ValidationReport:
    """Assemble and validate a dataset from parsed rows.

    Rows are sorted ascending by measure (stable); each anchor-flagged row
    closes a period at its own measure. Events past the last anchor form a
    final period whose most ancient event is auto-flagged as its anchor.
    Returns the dataset when validation passes, otherwise the report.
    """
    report = ValidationReport()
    if not rows:
        report.errors.append(Violation("E_NO_EVENTS", "no data rows"))
        return report

    converted: list[tuple[float, RawRow]] = []
    for i, row in enumerate(rows):
        try:
            measure = to_years_ago(row.time_unit, row.time_value, config.reference_year)
        except ChronoError as exc:
            report.errors.append(Violation(exc.code, f"row {i + 1}: {exc.message}", i))
            continue
        converted.append((measure, row))
    if report.errors:
        return report

    converted.sort(key=lambda pair: pair[0])

    anchor_flags = [row.anchor for _, row in converted]
    anchor_flags[-1] = True  # the most ancient event always closes the final period

    events: list[Event] = []
    periods: list[Period] = []
    newer = 0.0
    for i, (measure, row) in enumerate(converted):
        is_anchor = anchor_flags[i]
        events.append(Event(
            index=i,
            name=row.label,
            measure=measure,
            description=row.description,
            image_ref=row.image or None,
            is_anchor=is_anchor,
            period_title=(row.timeline_title or None) if is_anchor else None,
        ))
        if is_anchor:
            k = len(periods)
            periods.append(Period(
                index=k,
                newer_bound=newer,
                older_bound=measure,
                title=row.timeline_title or None,
                color_index=k,
            ))
            newer = measure

    dataset = Dataset(title=title, subtitle=subtitle, events=tuple(events), periods=tuple(periods))
    report = validate(dataset)
    if not report.ok:
        return report
    return dataset


def dataset_to_table(dataset: Dataset) -> str:
    """Serialize a dataset back to the row format (always in years-ago units)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)
    for event in dataset.events:
        measure = event.measure
        time_value = str(int(measure)) if float(measure).is_integer() else repr(measure)
        writer.writerow([
            event.name,
            event.description,
            event.image_ref or "",
            "years ago",
            time_value,
            "true" if event.is_anchor else "false",
            event.period_title or "",
        ])
    return out.getvalue()


def dataset_to_dict(dataset: Dataset) -> dict:
    return {
        "title": dataset.title,
        "subtitle": dataset.subtitle,
        "events": [
            {
                "index": e.index,
                "name": e.name,
                "description": e.description,
                "image_ref": e.image_ref,
                "measure": e.measure,
                "is_anchor": e.is_anchor,
                "period_title": e.period_title,
            }
            for e in dataset.events
        ],
        "periods": [
            {
                "index": p.index,
                "newer_bound": p.newer_bound,
                "older_bound": p.older_bound,
                "title": p.title,
                "color_index": p.color_index,
            }
            for p in dataset.periods
        ],
    }


def dataset_from_dict(data: dict) -> Dataset:
    events = tuple(Event(
        index=e["index"],
        name=e["name"],
        measure=e["measure"],
        description=e.get("description", ""),
        image_ref=e.get("image_ref"),
        is_anchor=e.get("is_anchor", False),
        period_title=e.get("period_title"),
    ) for e in data["events"])
    periods = tuple(Period(
        index=p["index"],
        newer_bound=p["newer_bound"],
        older_bound=p["older_bound"],
        title=p.get("title"),
        color_index=p.get("color_index", p["index"]),
    ) for p in data["periods"])
    return Dataset(title=data["title"], subtitle=data.get("subtitle"), events=events, periods=periods)


def dataset_to_json(dataset: Dataset) -> str:
    return json.dumps(dataset_to_dict(dataset), ensure_ascii=False)


def load_dataset_file(path: str, config: IngestConfig = IngestConfig(),
                      title: str | None = None, subtitle: str | None = None) -> Dataset | ValidationReport:
    """Read a table file and build a dataset; the title defaults to the file stem."""
    from pathlib import Path

    p = Path(path)
    rows = parse_table(p.read_bytes(), config)
    return build_dataset(rows, config, title=title if title is not None else p.stem, subtitle=subtitle)
