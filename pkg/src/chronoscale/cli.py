"""Command-line driver: validate, partition, render, serve, analyze."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analytics import analyze_entries
from .choreographer import (
    ExhibitState,
    InputEvent,
    InputKind,
    Mode,
    TimingSettings,
    apply,
    interpolate,
)
from .errors import ChronoError
from .ingest import IngestConfig, load_dataset_file, parse_table, to_years_ago
from .layout import Viewport, compute_scene, scene_to_json
from .logbook import read_jsonl
from .model import Dataset, ValidationReport
from .partition import PartitionParams, auto_partition, partition_report
from .service import DeploymentConfig, serve
from .svg import Theme, render_svg

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chronoscale",
                                     description="Multiscale timeline exhibit toolchain")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a dataset table against the model rules")
    p.add_argument("file")
    p.add_argument("--reference-year", type=int, default=2024)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("partition", help="compute power-of-ten period delimiters")
    p.add_argument("file")
    p.add_argument("--min-per-range", type=int, default=3)
    p.add_argument("--max-per-range", type=int, default=12)
    p.add_argument("--write", action="store_true",
                   help="rewrite the file with the computed anchor flags")
    p.add_argument("--reference-year", type=int, default=2024)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("render", help="render one exhibit step to SVG or scene JSON")
    p.add_argument("file")
    p.add_argument("--step", type=int, required=True, help="1-based count of revealed events")
    p.add_argument("--t", type=float, default=None,
                   help="fraction of the transition into --step (0..1)")
    p.add_argument("--highlight", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=float, default=1920.0)
    p.add_argument("--height", type=float, default=1080.0)
    p.add_argument("--reference-year", type=int, default=2024)
    p.add_argument("--format", choices=("svg", "json"), default="svg")

    p = sub.add_parser("serve", help="run the exhibit HTTP service")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--dataset", default=None)
    p.add_argument("--deployment-id", default=None)
    p.add_argument("--mode", choices=tuple(m.value for m in Mode), default=None)
    p.add_argument("--idle", type=float, default=None, help="dynamic-mode idle timeout, seconds")
    p.add_argument("--interval", type=float, default=None, help="auto-advance interval, seconds")
    p.add_argument("--data-dir", default=None)
    p.add_argument("--static-dir", default=None)
    p.add_argument("--subtitle", default=None)
    p.add_argument("--reference-year", type=int, default=2024)

    p = sub.add_parser("analyze", help="sessionize trace logs and print statistics")
    p.add_argument("paths", nargs="+")
    p.add_argument("--group-by", choices=("day", "dow", "ten-min"), default="day")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--timezone", default="UTC")

    return parser


def _emit_error(code: str, message: str, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps({"error": code, "message": message}), file=sys.stderr)
    else:
        print(f"error: {code}: {message}", file=sys.stderr)


def _load_or_report(path: str, reference_year: int) -> Dataset | ValidationReport:
    return load_dataset_file(path, IngestConfig(reference_year=reference_year))


def _cmd_validate(args: argparse.Namespace) -> int:
    from .model import validate

    result = _load_or_report(args.file, args.reference_year)
    report = validate(result) if isinstance(result, Dataset) else result
    if args.format == "json":
        print(json.dumps(report.to_dict(), ensure_ascii=False))
    else:
        for v in report.errors:
            print(f"ERROR {v.code}: {v.message}")
        for v in report.warnings:
            print(f"WARNING {v.code}: {v.message}")
        print("valid" if report.ok else "invalid")
    return EXIT_OK if report.ok else EXIT_INVALID


def _cmd_partition(args: argparse.Namespace) -> int:
    config = IngestConfig(reference_year=args.reference_year)
    rows = parse_table(Path(args.file).read_bytes(), config)
    if not rows:
        raise ChronoError("E_NO_EVENTS", "no data rows to partition")
    measured = sorted(
        ((to_years_ago(r.time_unit, r.time_value, config.reference_year), r) for r in rows),
        key=lambda pair: pair[0],
    )
    measures = [m for m, _ in measured]
    params = PartitionParams(min_per_range=args.min_per_range, max_per_range=args.max_per_range)
    anchors = auto_partition(measures, params)
    report = partition_report(measures, anchors, params)

    payload = {
        "anchors": anchors,
        "anchor_measures": [measures[i] for i in anchors],
        "counts": report.counts,
        "warnings": [vars(v) for v in report.warnings],
    }
    if args.format == "json":
        print(json.dumps(payload, ensure_ascii=False))
    else:
        print("anchors at measures: " + ", ".join(str(m) for m in payload["anchor_measures"]))
        print("per-range counts: " + ", ".join(str(c) for c in report.counts))
        for v in report.warnings:
            print(f"WARNING {v.code}: {v.message}")

    if args.write:
        import csv as _csv
        import io as _io

        from .ingest import COLUMNS

        anchor_set = set(anchors)
        out = _io.StringIO()
        writer = _csv.writer(out, lineterminator="\n")
        writer.writerow(COLUMNS)
        for i, (_, row) in enumerate(measured):
            writer.writerow([
                row.label, row.description, row.image,
                "year" if row.time_unit.value == "year" else "years ago",
                str(int(row.time_value)) if float(row.time_value).is_integer() else repr(row.time_value),
                "true" if i in anchor_set else "false",
                row.timeline_title,
            ])
        Path(args.file).write_text(out.getvalue(), encoding="utf-8")
    return EXIT_OK


def _cmd_render(args: argparse.Namespace) -> int:
    result = _load_or_report(args.file, args.reference_year)
    if not isinstance(result, Dataset):
        _emit_error("E_INVALID_DATASET",
                    "; ".join(f"{v.code}: {v.message}" for v in result.errors),
                    "json" if args.format == "json" else "text")
        return EXIT_INVALID
    dataset = result
    n = len(dataset.events)
    if not 1 <= args.step <= n:
        _emit_error("E_USAGE", f"--step must be in 1..{n} (steps are 1-based)", "text")
        return EXIT_USAGE
    highlight = args.highlight if args.highlight is not None else args.step
    if not 1 <= highlight <= args.step:
        _emit_error("E_USAGE", f"--highlight must be in 1..{args.step}", "text")
        return EXIT_USAGE

    viewport = Viewport.sized(args.width, args.height)
    target = compute_scene(dataset, ExhibitState(revealed=args.step, highlight=highlight), viewport)

    if args.t is None:
        scene = target
    else:
        if not 0.0 <= args.t <= 1.0:
            _emit_error("E_USAGE", "--t must be in 0..1", "text")
            return EXIT_USAGE
        if args.step < 2:
            _emit_error("E_USAGE", "--t needs --step of at least 2 (no transition into step 1)", "text")
            return EXIT_USAGE
        before = ExhibitState(revealed=args.step - 1, highlight=args.step - 1)
        _, plan = apply(dataset, before, InputEvent(InputKind.EXPLORE_PAST))
        scene_a = compute_scene(dataset, before, viewport)
        scene = interpolate(scene_a, target, plan, args.t)

    text = scene_to_json(scene) + "\n" if args.format == "json" else render_svg(scene, Theme())
    Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def _env(name: str) -> str | None:
    return os.environ.get(f"CHRONO_{name}")


def _cmd_serve(args: argparse.Namespace) -> int:
    def pick(flag_value, env_name, default, cast):
        if flag_value is not None:
            return flag_value
        env_value = _env(env_name)
        return cast(env_value) if env_value is not None else default

    settings = TimingSettings(
        idle_timeout_s=pick(args.idle, "IDLE", 60.0, float),
        auto_interval_s=pick(args.interval, "INTERVAL", 2.0, float),
    )
    config = DeploymentConfig(
        deployment_id=pick(args.deployment_id, "DEPLOYMENT_ID", "default", str),
        dataset_source=pick(args.dataset, "DATASET", None, str),
        mode=Mode(pick(args.mode, "MODE", "dynamic", str)),
        settings=settings,
        subtitle=args.subtitle,
        data_dir=pick(args.data_dir, "DATA_DIR", "data", str),
        static_dir=pick(args.static_dir, "STATIC_DIR", None, str),
        reference_year=args.reference_year,
    )
    serve(config, port=pick(args.port, "PORT", 0, int))
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    entries = []
    for path in args.paths:
        entries.extend(read_jsonl(path))
    stats = analyze_entries(entries, tz=args.timezone)
    if args.format == "json":
        print(json.dumps(stats.to_dict(), ensure_ascii=False))
        return EXIT_OK

    print("metric,key,value")
    print(f"session_count,,{stats.session_count}")
    print(f"duration_mean_s,,{stats.duration_mean_s}")
    print(f"duration_median_s,,{stats.duration_median_s}")
    print(f"clicks_mean,,{stats.clicks_mean}")
    print(f"clicks_median,,{stats.clicks_median}")
    if args.group_by == "day":
        for day, count in stats.sessions_per_day.items():
            print(f"day,{day},{count}")
    elif args.group_by == "dow":
        for dow, mean in stats.sessions_per_weekday.items():
            print(f"dow,{dow},{mean}")
    else:
        for bucket, mean in stats.sessions_per_ten_minute.items():
            print(f"ten-min,{bucket},{mean}")
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "partition": _cmd_partition,
    "render": _cmd_render,
    "serve": _cmd_serve,
    "analyze": _cmd_analyze,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    fmt = getattr(args, "format", "text")
    try:
        return _COMMANDS[args.command](args)
    except OSError as exc:
        _emit_error("E_IO", str(exc), "json" if fmt == "json" else "text")
        return EXIT_IO
    except ChronoError as exc:
        _emit_error(exc.code, exc.message, "json" if fmt == "json" else "text")
        if exc.code in ("E_HEADER_MISSING", "E_BAD_CELL", "E_ENCODING", "E_NO_EVENTS",
                        "E_TOO_RECENT", "E_NONPOSITIVE", "E_BAD_DATASET"):
            return EXIT_INVALID
        if exc.code in ("E_BAD_PARAMS", "E_USAGE", "E_BAD_TIMEZONE"):
            return EXIT_USAGE
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
