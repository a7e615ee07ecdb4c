"""Telemetry log entries and their canonical JSONL wire form."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path


class LogKind(enum.Enum):
    BUTTON_PRESS = "button_press"
    AUTO_PROMPT = "auto_prompt"
    AUTO_START = "auto_start"
    AUTO_ADVANCE = "auto_advance"


BUTTONS = ("explore", "revisit", "reset", "let_me_interact", "tap_marker", "tap_background")
MODES = ("interactive", "animated", "dynamic")


@dataclass(frozen=True)
class LogEntry:
    deployment_id: str
    timestamp: int  # UTC milliseconds
    kind: LogKind
    button: str | None = None
    revealed: int = 1
    highlight: int = 1
    mode: str = "interactive"


def entry_problems(data: dict) -> list[str]:
    """Schema and invariant checks for one wire-form entry dict."""
    problems = []
    if not isinstance(data.get("deployment_id"), str) or not data.get("deployment_id"):
        problems.append("deployment_id must be a non-empty string")
    ts = data.get("timestamp")
    if not isinstance(ts, int) or isinstance(ts, bool) or ts < 0:
        problems.append("timestamp must be a non-negative integer of UTC milliseconds")
    kind = data.get("kind")
    if kind not in {k.value for k in LogKind}:
        problems.append(f"kind {kind!r} is not one of {sorted(k.value for k in LogKind)}")
    button = data.get("button")
    if button is not None and button not in BUTTONS:
        problems.append(f"button {button!r} is not one of {list(BUTTONS)}")
    if kind == LogKind.BUTTON_PRESS.value and button is None:
        problems.append("button_press entries must carry a button")
    if kind in {LogKind.AUTO_PROMPT.value, LogKind.AUTO_START.value, LogKind.AUTO_ADVANCE.value} \
            and button is not None:
        problems.append("automation entries must not carry a button")
    for field in ("revealed", "highlight"):
        v = data.get(field)
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            problems.append(f"{field} must be a positive integer")
    if data.get("mode") not in MODES:
        problems.append(f"mode {data.get('mode')!r} is not one of {list(MODES)}")
    return problems


def entry_from_dict(data: dict) -> LogEntry:
    problems = entry_problems(data)
    if problems:
        raise ValueError("; ".join(problems))
    return LogEntry(
        deployment_id=data["deployment_id"],
        timestamp=data["timestamp"],
        kind=LogKind(data["kind"]),
        button=data.get("button"),
        revealed=data["revealed"],
        highlight=data["highlight"],
        mode=data["mode"],
    )


def entry_to_dict(entry: LogEntry) -> dict:
    return {
        "deployment_id": entry.deployment_id,
        "timestamp": entry.timestamp,
        "kind": entry.kind.value,
        "button": entry.button,
        "revealed": entry.revealed,
        "highlight": entry.highlight,
        "mode": entry.mode,
    }


def entry_to_json(entry: LogEntry) -> str:
    """One canonical JSON line: fixed key order, compact separators."""
    return json.dumps(entry_to_dict(entry), ensure_ascii=False, separators=(",", ":"))


def read_jsonl(path: str | Path) -> list[LogEntry]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                entries.append(entry_from_dict(json.loads(line)))
    return entries
