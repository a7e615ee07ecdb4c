from __future__ import annotations

import csv
import io
import random

import pytest
from hypothesis import given, strategies as st

from chronoscale.errors import ChronoError
from chronoscale.ingest import (
    IngestConfig,
    Delimiter,
    TimeUnit,
    build_dataset,
    dataset_from_dict,
    dataset_to_dict,
    dataset_to_table,
    parse_table,
    to_years_ago,
)
from chronoscale.model import Dataset
from helpers import make_rows, random_rows

HEADER = "label,description,image,time unit,time value,anchor,timeline title\n"


def test_parse_basic_row():
    text = HEADER + "Moon landing,First crewed landing,http://x/img.png,year,1969,false,\n"
    rows = parse_table(text)
    assert len(rows) == 1
    row = rows[0]
    assert row.time_unit is TimeUnit.YEAR
    assert row.time_value == 1969
    assert row.anchor is False
    assert row.image == "http://x/img.png"


def test_parse_years_ago_anchor_row():
    text = HEADER + "Planet forms,,,years ago,4600000000,true,Formation era\n"
    row = parse_table(text)[0]
    assert row.time_unit is TimeUnit.YEARS_AGO
    assert row.time_value == 4.6e9
    assert row.anchor is True
    assert row.timeline_title == "Formation era"


def test_parse_bad_time_value_reports_coordinates():
    text = HEADER + "ok,,,year,1969,false,\nbad,,,year,abc,false,\n"
    with pytest.raises(ChronoError) as exc:
        parse_table(text)
    assert exc.value.code == "E_BAD_CELL"
    assert exc.value.context["row"] == 3
    assert exc.value.context["column"] == "time value"


def test_parse_missing_header_column():
    with pytest.raises(ChronoError) as exc:
        parse_table("label,description,image,time unit,time value,anchor\nx,,,year,1999,false\n")
    assert exc.value.code == "E_HEADER_MISSING"
    assert "timeline title" in exc.value.message


def test_parse_rejects_bad_encoding():
    with pytest.raises(ChronoError) as exc:
        parse_table(b"\xff\xfe broken")
    assert exc.value.code == "E_ENCODING"


def test_parse_header_any_order_case_insensitive():
    text = ("Timeline Title\tANCHOR\tTime Value\ttime unit\tIMAGE\tDescription\tLabel\n"
            "era\ttrue\t100\tyears ago\t\tdesc\tthing\n")
    row = parse_table(text)[0]
    assert row.label == "thing"
    assert row.anchor is True
    assert row.time_value == 100


def test_parse_quoted_delimiter_and_unit_aliases():
    text = HEADER + '"Big, comma event","a, b, and c",,YEARS_AGO,55,1,\n'
    row = parse_table(text)[0]
    assert row.label == "Big, comma event"
    assert row.time_unit is TimeUnit.YEARS_AGO
    assert row.anchor is True


def test_auto_sniff_prefers_tabs_when_dominant():
    text = HEADER.replace(",", "\t") + "x\t\t\tya\t42\tfalse\t\n"
    rows = parse_table(text, IngestConfig(delimiter=Delimiter.AUTO))
    assert rows[0].time_value == 42


def test_to_years_ago_examples():
    assert to_years_ago(TimeUnit.YEAR, 1969, 2024) == 55
    assert to_years_ago(TimeUnit.YEARS_AGO, 4.6e9, 2024) == 4.6e9
    with pytest.raises(ChronoError) as exc:
        to_years_ago(TimeUnit.YEAR, 2024, 2024)
    assert exc.value.code == "E_TOO_RECENT"
    with pytest.raises(ChronoError) as exc:
        to_years_ago(TimeUnit.YEARS_AGO, 0.5, 2024)
    assert exc.value.code == "E_NONPOSITIVE"


@given(st.integers(min_value=1000, max_value=2022))
def test_to_years_ago_is_monotone_in_calendar_year(year):
    newer = to_years_ago(TimeUnit.YEAR, year + 1, 2024)
    older = to_years_ago(TimeUnit.YEAR, year, 2024)
    assert newer < older


def test_build_dataset_decades6_periods(decades6):
    assert [(p.newer_bound, p.older_bound) for p in decades6.periods] == [
        (0.0, 7.0), (7.0, 70.0), (70.0, 700.0),
    ]
    assert [p.title for p in decades6.periods] == [
        "Within a decade", "Within a century", "Within a millennium",
    ]


def test_build_dataset_no_anchors_single_period(flat6):
    assert len(flat6.periods) == 1
    assert flat6.periods[0].older_bound == 700.0
    assert flat6.events[-1].is_anchor


def test_build_dataset_sorts_before_delimiting():
    # anchors supplied in the order 70 then 7; periods follow sorted measures
    rows = make_rows([70.0, 7.0, 3.0], anchors={70.0, 7.0})
    result = build_dataset(rows, IngestConfig(), title="x")
    assert isinstance(result, Dataset)
    assert [(p.newer_bound, p.older_bound) for p in result.periods] == [(0.0, 7.0), (7.0, 70.0)]


def test_build_dataset_empty_rows_reports():
    report = build_dataset([], IngestConfig(), title="x")
    assert not isinstance(report, Dataset)
    assert "E_NO_EVENTS" in report.error_codes()


def test_build_dataset_collects_conversion_errors():
    from chronoscale.ingest import RawRow

    rows = make_rows([5.0, 9.0], anchors={9.0})
    rows.append(RawRow(label="too new", description="", image="", time_unit=TimeUnit.YEAR,
                       time_value=2024, anchor=False, timeline_title=""))
    report = build_dataset(rows, IngestConfig(reference_year=2024), title="x")
    assert not isinstance(report, Dataset)
    assert "E_TOO_RECENT" in report.error_codes()


def test_round_trip_table(decades6):
    text = dataset_to_table(decades6)
    rebuilt = build_dataset(parse_table(text), IngestConfig(), title=decades6.title,
                            subtitle=decades6.subtitle)
    assert rebuilt == decades6


def test_round_trip_random_datasets():
    rng = random.Random(7)
    for _ in range(25):
        result = build_dataset(random_rows(rng), IngestConfig(), title="rt")
        assert isinstance(result, Dataset)
        rebuilt = build_dataset(parse_table(dataset_to_table(result)), IngestConfig(), title="rt")
        assert rebuilt == result


def test_round_trip_json(decades6):
    assert dataset_from_dict(dataset_to_dict(decades6)) == decades6


@given(st.lists(
    st.lists(st.text(alphabet=st.characters(blacklist_categories=("Cs",),
                                            blacklist_characters="\r\x00"),
                     max_size=12),
             min_size=7, max_size=7),
    max_size=8,
))
def test_parse_row_count_matches_nonempty_lines(cell_rows):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["label", "description", "image", "time unit", "time value",
                     "anchor", "timeline title"])
    expected = 0
    for cells in cell_rows:
        cells = list(cells)
        cells[3] = "years ago"
        cells[4] = "42"
        cells[5] = "false"
        writer.writerow(cells)
        if any(c.strip() for c in cells):
            expected += 1
    rows = parse_table(out.getvalue(), IngestConfig(delimiter=Delimiter.COMMA))
    assert len(rows) == expected
