"""HTTP face of the exhibit: dataset, scenes, kiosk app, telemetry, stats.

Telemetry persistence is an append-only JSONL file per deployment. Appends
are serialized through a single lock and fsynced before the 204 goes out,
so an acknowledged entry survives an immediate crash. There is no database
and no authentication; the service is a local-network appliance.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import os
import re
import threading
import urllib.request
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from .analytics import analyze_entries
from .choreographer import ExhibitState, Mode, TimingSettings
from .errors import ChronoError
from .ingest import IngestConfig, dataset_to_dict, load_dataset_file, parse_table, build_dataset
from .layout import Viewport, compute_scene, scene_to_dict
from .logbook import LogEntry, entry_from_dict, entry_problems, entry_to_dict, entry_to_json, read_jsonl
from .model import Dataset

logger = logging.getLogger(__name__)

_DEPLOYMENT_ID_RE = re.compile(r"^[A-Za-z0-9._-]+$")


@dataclass(frozen=True)
class DeploymentConfig:
    deployment_id: str = "default"
    dataset_source: str | None = None  # file path or URL; None serves the sample
    mode: Mode = Mode.DYNAMIC
    settings: TimingSettings = TimingSettings()
    subtitle: str | None = None
    data_dir: str = "data"
    static_dir: str | None = None
    reference_year: int = 2024

    def __post_init__(self) -> None:
        if not _DEPLOYMENT_ID_RE.match(self.deployment_id):
            raise ChronoError("E_BAD_PARAMS",
                              f"deployment id {self.deployment_id!r} is not filesystem-safe")


class LogStore:
    """Append-only JSONL storage, one file per deployment, single writer."""

    def __init__(self, data_dir: str | Path) -> None:
        self.root = Path(data_dir) / "logs"
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._counts: dict[str, int] = {}

    def path_for(self, deployment_id: str) -> Path:
        return self.root / f"{deployment_id}.jsonl"

    def append_log(self, entry: LogEntry) -> int:
        """Durably append one entry; returns its 1-based line position."""
        return self.append_batch([entry])[-1]

    def append_batch(self, entries: list[LogEntry]) -> list[int]:
        """Append a batch as contiguous lines, fsynced before returning."""
        if not entries:
            return []
        positions: list[int] = []
        with self._lock:
            by_deployment: dict[str, list[LogEntry]] = {}
            for entry in entries:
                by_deployment.setdefault(entry.deployment_id, []).append(entry)
            for deployment_id, group in by_deployment.items():
                path = self.path_for(deployment_id)
                base = self._counts.get(deployment_id)
                if base is None:
                    base = sum(1 for _ in open(path, encoding="utf-8")) if path.exists() else 0
                payload = "".join(entry_to_json(entry) + "\n" for entry in group)
                try:
                    with open(path, "a", encoding="utf-8") as fh:
                        fh.write(payload)  # one write per batch keeps lines contiguous
                        fh.flush()
                        os.fsync(fh.fileno())
                except OSError as exc:
                    raise ChronoError("E_STORAGE", f"append failed: {exc}") from exc
                self._counts[deployment_id] = base + len(group)
                positions.extend(range(base + 1, base + len(group) + 1))
        return positions

    def read(self, deployment_id: str, ts_from: int | None = None,
             ts_to: int | None = None) -> list[LogEntry]:
        path = self.path_for(deployment_id)
        with self._lock:  # serialize against appends for a consistent snapshot
            if not path.exists():
                return []
            entries = read_jsonl(path)
        return [e for e in entries
                if (ts_from is None or e.timestamp >= ts_from)
                and (ts_to is None or e.timestamp <= ts_to)]


def _load_source(source: str, reference_year: int) -> Dataset:
    config = IngestConfig(reference_year=reference_year)
    if source.startswith(("http://", "https://")):
        with urllib.request.urlopen(source) as resp:
            rows = parse_table(resp.read(), config)
        name = urlsplit(source).path.rsplit("/", 1)[-1] or "dataset"
        result = build_dataset(rows, config, title=Path(name).stem)
    else:
        result = load_dataset_file(source, config)
    if not isinstance(result, Dataset):
        codes = ", ".join(result.error_codes())
        raise ChronoError("E_BAD_DATASET", f"dataset failed validation: {codes}")
    return result


def sample_dataset_path() -> Path:
    return Path(__file__).parent / "data" / "sample.csv"


_WELCOME_HTML = """<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>Deep Time Exhibit</title></head>
<body>
<h1>Deep Time Exhibit</h1>
<p>Step through events across vastly different magnitudes of time.</p>
<p><a href="/?dataset=sample">Open the sample dataset</a></p>
<form action="/" method="get">
  <fieldset><legend>Custom exhibit</legend>
    <label>Dataset URL or path <input name="dataset" size="50"></label><br>
    <label>Mode <select name="mode">
      <option value="dynamic">dynamic</option>
      <option value="interactive">interactive</option>
      <option value="animated">animated</option>
    </select></label><br>
    <label>Idle timeout (s) <input name="idle" value="60" size="6"></label>
    <label>Auto interval (s) <input name="interval" value="2" size="6"></label><br>
    <label>Subtitle <input name="subtitle" size="40"></label><br>
    <label>Deployment id <input name="deployment" size="20"></label><br>
    <button type="submit">Start</button>
  </fieldset>
</form>
</body>
</html>
"""

_FALLBACK_APP_HTML = """<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>Deep Time Exhibit</title></head>
<body>
<h1>Deep Time Exhibit</h1>
<p>The kiosk frontend bundle is not installed on this server.</p>
<p>The exhibit API is live: <a href="/api/dataset">dataset</a>,
<a href="/api/scene?step=1">scene</a>, <a href="/api/stats">stats</a>.</p>
<pre id="config">{config}</pre>
</body>
</html>
"""


class ExhibitHandler(BaseHTTPRequestHandler):
    """Routes one exhibit deployment; state injected by create_server."""

    config: DeploymentConfig
    dataset: Dataset
    store: LogStore
    protocol_version = "HTTP/1.1"

    def log_message(self, format: str, *args: object) -> None:
        logger.debug(format, *args)

    def _respond(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _json(self, payload: object, status: int = 200) -> None:
        self._respond(status, json.dumps(payload, ensure_ascii=False).encode("utf-8"),
                      "application/json; charset=utf-8")

    def _error(self, status: int, message: str) -> None:
        self._json({"error": message}, status)

    def _query(self) -> dict[str, str]:
        raw = parse_qs(urlsplit(self.path).query)
        return {k: v[0] for k, v in raw.items()}

    def do_GET(self) -> None:
        route = urlsplit(self.path).path
        try:
            if route == "/api/dataset":
                self._json(dataset_to_dict(self.dataset))
            elif route == "/api/scene":
                self._scene()
            elif route == "/api/logs":
                self._logs()
            elif route == "/api/stats":
                query = self._query()
                entries = self.store.read(self.config.deployment_id)
                self._json(analyze_entries(entries, tz=query.get("tz", "UTC")).to_dict())
            elif route == "/welcome":
                self._respond(200, _WELCOME_HTML.encode("utf-8"), "text/html; charset=utf-8")
            elif route == "/" or route == "/index.html":
                self._app()
            elif route.startswith("/static/"):
                self._static(route[len("/static/"):])
            else:
                self._error(404, f"no route {route}")
        except ChronoError as exc:
            if exc.code == "E_STORAGE":
                self._error(500, str(exc))
            else:
                self._error(400, str(exc))
        except Exception as exc:  # never let a handler bug drop the connection
            logger.exception("unhandled error on %s", route)
            self._error(500, f"internal error: {exc}")

    def do_POST(self) -> None:
        route = urlsplit(self.path).path
        if route != "/api/logs":
            self._error(404, f"no route {route}")
            return
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b""
        try:
            payload = json.loads(raw.decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            self._error(400, "body is not valid JSON")
            return
        entries_data = payload.get("entries") if isinstance(payload, dict) else None
        if not isinstance(entries_data, list) or not entries_data:
            self._error(400, "body must be an object with a non-empty entries list")
            return

        problems: list[str] = []
        for i, item in enumerate(entries_data):
            if not isinstance(item, dict):
                problems.append(f"entry {i} is not an object")
                continue
            problems.extend(f"entry {i}: {p}" for p in entry_problems(item))
        if not problems:
            last_by_deployment: dict[str, int] = {}
            for i, item in enumerate(entries_data):
                prev = last_by_deployment.get(item["deployment_id"])
                if prev is not None and item["timestamp"] < prev:
                    problems.append(f"entry {i}: timestamps regress within the batch")
                last_by_deployment[item["deployment_id"]] = item["timestamp"]
        if problems:
            self._json({"error": "batch rejected", "problems": problems}, 422)
            return

        entries = [entry_from_dict(item) for item in entries_data]
        try:
            self.store.append_batch(entries)
        except ChronoError as exc:
            self._error(500, str(exc))
            return
        self.send_response(204)
        self.send_header("Content-Length", "0")
        self.end_headers()

    def _scene(self) -> None:
        query = self._query()
        n = len(self.dataset.events)
        try:
            step = int(query.get("step", n))
            highlight = int(query.get("highlight", step))
            width = float(query.get("width", 1920))
            height = float(query.get("height", 1080))
        except ValueError:
            self._error(400, "step, highlight, width and height must be numeric")
            return
        if not 1 <= step <= n or not 1 <= highlight <= step:
            self._error(400, f"need 1 <= highlight <= step <= {n}")
            return
        state = ExhibitState(revealed=step, highlight=highlight, mode=self.config.mode,
                             settings=self.config.settings)
        scene = compute_scene(self.dataset, state, Viewport.sized(width, height))
        self._json(scene_to_dict(scene))

    def _logs(self) -> None:
        query = self._query()
        try:
            ts_from = int(query["from"]) if "from" in query else None
            ts_to = int(query["to"]) if "to" in query else None
        except ValueError:
            self._error(400, "from and to must be integer milliseconds")
            return
        deployment = query.get("deployment", self.config.deployment_id)
        entries = self.store.read(deployment, ts_from, ts_to)
        self._json({"entries": [entry_to_dict(e) for e in entries]})

    def _app(self) -> None:
        if self.config.static_dir:
            index = Path(self.config.static_dir) / "index.html"
            if index.is_file():
                self._respond(200, index.read_bytes(), "text/html; charset=utf-8")
                return
        config_echo = json.dumps({
            "deployment_id": self.config.deployment_id,
            "mode": self.config.mode.value,
            "idle": self.config.settings.idle_timeout_s,
            "interval": self.config.settings.auto_interval_s,
            "subtitle": self.config.subtitle,
            "query": urlsplit(self.path).query,
        }, indent=2)
        body = _FALLBACK_APP_HTML.replace("{config}", config_echo)
        self._respond(200, body.encode("utf-8"), "text/html; charset=utf-8")

    def _static(self, name: str) -> None:
        if not self.config.static_dir:
            self._error(404, "no static bundle configured")
            return
        root = Path(self.config.static_dir).resolve()
        target = (root / name).resolve()
        if root not in target.parents or not target.is_file():
            self._error(404, f"no static file {name}")
            return
        content_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        self._respond(200, target.read_bytes(), content_type)


def create_server(config: DeploymentConfig, port: int = 0) -> ThreadingHTTPServer:
    """Build a ready-to-run server; port 0 picks a free port."""
    source = config.dataset_source or str(sample_dataset_path())
    dataset = _load_source(source, config.reference_year)
    store = LogStore(config.data_dir)

    handler = type("BoundExhibitHandler", (ExhibitHandler,), {
        "config": config, "dataset": dataset, "store": store,
    })
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve(config: DeploymentConfig, port: int = 0) -> None:
    """Run the service until interrupted, announcing the bound address."""
    server = create_server(config, port)
    host, bound_port = server.server_address[:2]
    print(f"listening on http://{host}:{bound_port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
