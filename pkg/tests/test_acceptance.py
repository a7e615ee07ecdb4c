"""Acceptance criteria, one test per criterion.

Each test prints a single PASS line on success; tolerances are pinned here
and nowhere else. The suite exercises only the Python package and never
requires the kiosk frontend to be built.
"""

from __future__ import annotations

import json
import random
import subprocess
import sys
import time
import urllib.request

from chronoscale.analytics import analyze_entries, sessionize, summarize
from chronoscale.choreographer import (
    ExhibitState,
    InputEvent,
    InputKind,
    Mode,
    PlanKind,
    initial_state,
    interpolate,
)
from chronoscale.choreographer import apply as apply_input
from chronoscale.cli import main as cli_main
from chronoscale.ingest import IngestConfig, build_dataset
from chronoscale.layout import compute_scene, scene_to_dict
from chronoscale.logbook import LogEntry, LogKind, entry_to_json, read_jsonl
from chronoscale.model import Dataset, period_of, validate
from chronoscale.partition import auto_partition
from chronoscale.svg import render_svg
from conftest import GOLDEN
from helpers import make_rows, press, random_entries, random_measures, random_rows
from test_analytics import reference_sessions
from test_choreographer import dicts_close
from test_layout import check_structural_laws

TOL = 1e-9


def ok(name: str) -> None:
    print(f"[ACCEPTANCE] {name}: PASS")


def test_data_abstraction_suite():
    """1000 randomized datasets: invariants hold; auto partitions validate; < 5 s."""
    rng = random.Random(1001)
    started = time.perf_counter()
    for i in range(1_000):
        if i % 2 == 0:
            rows = random_rows(rng, max_events=30)
        else:
            measures = random_measures(rng, max_events=30)
            anchors = auto_partition(measures)
            rows = make_rows(measures, anchors={measures[k] for k in anchors})
        result = build_dataset(rows, IngestConfig(), title="fuzz")
        assert isinstance(result, Dataset), getattr(result, "errors", None)
        report = validate(result)
        assert report.errors == []
        olders = [p.older_bound for p in result.periods]
        assert olders == sorted(set(olders))
        for event in result.events:
            k = period_of(result, event.index)
            assert result.periods[k].newer_bound < event.measure <= result.periods[k].older_bound \
                or (k == 0 and event.measure <= result.periods[k].older_bound)
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    ok(f"data-abstraction suite (1000 datasets in {elapsed:.2f}s)")


def test_decades6_golden_geometry(decades6, unit_viewport):
    """Hand-derived coordinates within 1e-9; golden SVG byte-identical."""
    scene = compute_scene(decades6, ExhibitState(revealed=6, highlight=6), unit_viewport)
    active = scene.tiers[0]
    bounds = [active.segments[0].x_start] + [s.x_end for s in active.segments]
    for got, want in zip(bounds, (0.0, 0.9, 0.99, 1.0)):
        assert abs(got - want) <= TOL
    marker300 = next(m for m in active.markers if m.measure == 300.0)
    assert abs(marker300.x - (1 - 300 / 700)) <= TOL

    full = compute_scene(decades6, ExhibitState(revealed=6, highlight=6))
    first, second = render_svg(full), render_svg(full)
    assert first.encode() == second.encode()
    assert first == (GOLDEN / "decades6_step6.svg").read_text()
    ok("decades6 golden geometry and byte-identical SVG")


def test_tier_stack_structural_laws(unit_viewport):
    """200 random datasets x all reveal steps obey the tier laws; < 30 s."""
    from helpers import random_dataset, make_dataset

    rng = random.Random(2002)
    started = time.perf_counter()
    for _ in range(200):
        dataset = random_dataset(rng, max_events=18)
        for revealed in range(1, len(dataset.events) + 1):
            scene = compute_scene(
                dataset, ExhibitState(revealed=revealed, highlight=revealed), unit_viewport)
            check_structural_laws(dataset, scene, revealed)

    measures, anchors = [], set()
    for d in range(6):
        measures += [10.0 ** d, 5 * 10.0 ** d]
        anchors.add(5 * 10.0 ** d)
    six = make_dataset(measures, anchors)
    assert len(six.periods) == 6
    full = compute_scene(six, ExhibitState(revealed=12, highlight=12), unit_viewport)
    assert len(full.tiers) - 1 == 5

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"took {elapsed:.2f}s"
    ok(f"tier-stack structural laws (200 datasets, all steps, in {elapsed:.2f}s)")


def test_state_machine_conformance(decades6, unit_viewport):
    """Scripted traces, overflow count, simulated-clock timing, endpoint identity."""
    # explore to the end counts (periods - 1) overflows
    state = initial_state()
    overflows = 0
    for _ in range(5):
        state, plan = apply_input(decades6, state, InputEvent(InputKind.EXPLORE_PAST))
        overflows += plan.kind is PlanKind.OVERFLOW
    assert overflows == len(decades6.periods) - 1
    assert (state.revealed, state.highlight) == (6, 6)

    # revisit twice, then re-advance through highlights before revealing
    for _ in range(2):
        state, plan = apply_input(decades6, state, InputEvent(InputKind.REVISIT))
        assert plan.kind is PlanKind.HIGHLIGHT_ONLY
    assert (state.revealed, state.highlight) == (6, 4)
    state, plan = apply_input(decades6, state, InputEvent(InputKind.EXPLORE_PAST))
    assert plan.kind is PlanKind.HIGHLIGHT_ONLY and state.highlight == 5

    # tap and reset semantics
    state, plan = apply_input(decades6, state, InputEvent(InputKind.TAP_MARKER, event_index=2))
    assert plan.kind is PlanKind.HIGHLIGHT_ONLY and state.highlight == 2
    state, plan = apply_input(decades6, state, InputEvent(InputKind.RESET_TODAY))
    assert plan.kind is PlanKind.RESET and (state.revealed, state.highlight) == (1, 1)

    # dynamic mode on a simulated clock: first advance at 60 s, then every 2 s
    # (0.25 s ticks are exactly representable, so the clock sums without drift)
    state = initial_state(Mode.DYNAMIC)
    advances = []
    for step in range(1, 281):
        state, plan = apply_input(decades6, state, InputEvent(InputKind.TICK, dt_s=0.25))
        if plan.kind is not PlanKind.NONE:
            advances.append(step * 0.25)
        if len(advances) == 4:
            break
    assert advances == [60.0, 62.0, 64.0, 66.0]

    # interpolate endpoint identity within 1e-9, field for field
    state_a = ExhibitState(revealed=2, highlight=2)
    state_b, plan = apply_input(decades6, state_a, InputEvent(InputKind.EXPLORE_PAST))
    scene_a = compute_scene(decades6, state_a, unit_viewport)
    scene_b = compute_scene(decades6, state_b, unit_viewport)
    assert dicts_close(scene_to_dict(interpolate(scene_a, scene_b, plan, 0.0)),
                       scene_to_dict(scene_a), TOL)
    assert dicts_close(scene_to_dict(interpolate(scene_a, scene_b, plan, 1.0)),
                       scene_to_dict(scene_b), TOL)
    ok("state-machine conformance and 60s/2s dynamic timing")


def test_sessionizer_oracle():
    """Streaming and brute-force reference agree exactly on 10000 entries; < 5 s."""
    rng = random.Random(3003)
    started = time.perf_counter()
    entries = random_entries(rng, 10_000)
    assert sessionize(entries) == reference_sessions(entries)

    # boundary cases split exactly at the rule edges
    assert len(sessionize([press(0), press(60_000)])) == 2
    assert len(sessionize([press(0), press(59_999)])) == 1
    long_run = [press(t) for t in range(0, 900_001, 50_000)]
    assert len(sessionize(long_run)) == 2
    clicks = [press(t * 100) for t in range(251)]
    assert [s.click_count for s in sessionize(clicks)] == [250, 1]
    watchers = [LogEntry("d", 0, LogKind.AUTO_START), LogEntry("d", 1000, LogKind.AUTO_ADVANCE)]
    assert sessionize(watchers) == []

    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    ok(f"sessionizer oracle (10000 entries in {elapsed:.2f}s)")


def test_statistics_sanity():
    """A corpus engineered for mean 94 s / median 25 s reports exactly that."""
    # durations 10 s, 25 s and 247 s: mean (10+25+247)/3 = 94, lower median 25
    entries = []
    starts = (0, 1_000_000, 2_000_000)
    for start, duration_s in zip(starts, (10, 25, 247)):
        t = start
        while t < start + duration_s * 1000:
            entries.append(press(t))
            t += 50_000
        entries.append(press(start + duration_s * 1000))
    sessions = sessionize(entries)
    assert [s.duration_s for s in sessions] == [10.0, 25.0, 247.0]
    stats = summarize(sessions)
    assert stats.duration_mean_s == 94.0
    assert stats.duration_median_s == 25.0
    ok("statistics sanity (mean 94 s, median 25 s)")


def test_service_round_trip(tmp_path, decades6_path):
    """500 entries in 10 batches -> 500 lines; /api/stats equals offline; durability."""
    import threading

    from chronoscale.service import DeploymentConfig, create_server

    config = DeploymentConfig(deployment_id="accept", dataset_source=str(decades6_path),
                              data_dir=str(tmp_path))
    server = create_server(config, 0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{server.server_address[1]}"
    try:
        ts = 0
        for _ in range(10):
            batch = []
            for _ in range(50):
                batch.append({"deployment_id": "accept", "timestamp": ts,
                              "kind": "button_press", "button": "explore",
                              "revealed": 1, "highlight": 1, "mode": "dynamic"})
                ts += 7_000
            req = urllib.request.Request(
                base + "/api/logs", data=json.dumps({"entries": batch}).encode(),
                headers={"Content-Type": "application/json"}, method="POST")
            with urllib.request.urlopen(req) as resp:
                assert resp.status == 204
        log_file = tmp_path / "logs" / "accept.jsonl"
        assert len(log_file.read_text().splitlines()) == 500

        with urllib.request.urlopen(base + "/api/stats") as resp:
            online = json.loads(resp.read())
        offline = analyze_entries(read_jsonl(log_file)).to_dict()
        assert online == json.loads(json.dumps(offline))
    finally:
        server.shutdown()
        server.server_close()

    # kill-after-204 durability in a separate process
    proc = subprocess.Popen(
        [sys.executable, "-m", "chronoscale.cli", "serve",
         "--dataset", str(decades6_path), "--deployment-id", "durable",
         "--data-dir", str(tmp_path), "--port", "0"],
        stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True)
    try:
        line = proc.stdout.readline()
        port = int(line.rsplit(":", 1)[1])
        req = urllib.request.Request(
            f"http://127.0.0.1:{port}/api/logs",
            data=json.dumps({"entries": [{
                "deployment_id": "durable", "timestamp": 42, "kind": "button_press",
                "button": "explore", "revealed": 1, "highlight": 1, "mode": "dynamic",
            }]}).encode(), method="POST")
        with urllib.request.urlopen(req) as resp:
            assert resp.status == 204
    finally:
        proc.kill()
        proc.wait()
    lines = (tmp_path / "logs" / "durable.jsonl").read_text().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["timestamp"] == 42
    ok("service round trip, stats equivalence, kill-after-204 durability")


def test_cli_contract(decades6_path, tmp_path, capsys):
    """Exit codes and golden outputs for validate/partition/render/analyze."""
    assert cli_main(["validate", str(decades6_path)]) == 0
    capsys.readouterr()

    assert cli_main(["partition", str(decades6_path), "--min-per-range", "2",
                     "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["anchor_measures"] == [7.0, 70.0, 700.0]

    out = tmp_path / "step6.svg"
    assert cli_main(["render", str(decades6_path), "--step", "6", "--out", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / "decades6_step6.svg").read_bytes()
    assert cli_main(["render", str(decades6_path), "--step", "0", "--out", str(out)]) == 2

    log = tmp_path / "accept.jsonl"
    log.write_text("".join(
        entry_to_json(press(t * 1000)) + "\n" for t in range(5)))
    assert cli_main(["analyze", str(log)]) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["session_count"] == 1

    assert cli_main(["validate", str(tmp_path / "missing.csv")]) == 3
    ok("CLI contract (validate/partition/render/analyze)")
