"""HTTP collector: serves experiment configuration, persists sessions.

A small lab-network service (no authentication). Submitted sessions are
validated with the trial-record rules and appended, one canonical JSONL line
per session, to a per-experiment store file; writes are serialized and
flushed per record, so store files always parse cleanly.

API (HTTP/1.1, JSON):
    GET  /api/v1/health                        -> 200 "ok"
    GET  /api/v1/experiments/<id>/config       -> config document or 404
    POST /api/v1/sessions[?override=true]      -> 201 canonical record echo
                                                  422 schema findings
                                                  409 duplicate session
"""

from __future__ import annotations

import json
import os
import re
import threading
import urllib.parse
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import DuplicateSubject, MalformedRecord
from .trials import TrialRecord, parse_trials, record_from_json, record_to_json, serialize_record

_ID_PATTERN = re.compile(r"^[A-Za-z0-9._-]+$")

DEFAULT_DISPLAY_MS = 3000
DEFAULT_INTER_TEST_GAP_MS = 2000
DEFAULT_RESPONSE_WINDOW_MS = 10000


@dataclass(frozen=True)
class StimulusSpec:
    image: str
    prompt: str


@dataclass(frozen=True)
class ProtocolAssignment:
    mode: str  # "fixed", "alternating", or "random"
    protocol: str | None = None  # for fixed
    seed: int | None = None  # for random


@dataclass(frozen=True)
class ExperimentConfig:
    experiment_id: str
    stimuli: dict[str, StimulusSpec] = field(default_factory=dict)
    display_ms: int = DEFAULT_DISPLAY_MS
    inter_test_gap_ms: int = DEFAULT_INTER_TEST_GAP_MS
    response_window_ms: int = DEFAULT_RESPONSE_WINDOW_MS
    protocol_assignment: ProtocolAssignment = ProtocolAssignment("alternating")

    def __post_init__(self) -> None:
        for name in ("display_ms", "inter_test_gap_ms", "response_window_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def config_to_json(config: ExperimentConfig) -> dict:
    assignment: dict = {"mode": config.protocol_assignment.mode}
    if config.protocol_assignment.protocol is not None:
        assignment["protocol"] = config.protocol_assignment.protocol
    if config.protocol_assignment.seed is not None:
        assignment["seed"] = config.protocol_assignment.seed
    return {
        "experiment_id": config.experiment_id,
        "stimuli": {
            key: {"image": spec.image, "prompt": spec.prompt}
            for key, spec in config.stimuli.items()
        },
        "display_ms": config.display_ms,
        "inter_test_gap_ms": config.inter_test_gap_ms,
        "response_window_ms": config.response_window_ms,
        "protocol_assignment": assignment,
    }


def config_from_json(obj: dict) -> ExperimentConfig:
    assignment_raw = obj.get("protocol_assignment", {"mode": "alternating"})
    assignment = ProtocolAssignment(
        mode=assignment_raw.get("mode", "alternating"),
        protocol=assignment_raw.get("protocol"),
        seed=assignment_raw.get("seed"),
    )
    stimuli = {
        key: StimulusSpec(image=value.get("image", ""), prompt=value.get("prompt", ""))
        for key, value in obj.get("stimuli", {}).items()
    }
    return ExperimentConfig(
        experiment_id=obj["experiment_id"],
        stimuli=stimuli,
        display_ms=obj.get("display_ms", DEFAULT_DISPLAY_MS),
        inter_test_gap_ms=obj.get("inter_test_gap_ms", DEFAULT_INTER_TEST_GAP_MS),
        response_window_ms=obj.get("response_window_ms", DEFAULT_RESPONSE_WINDOW_MS),
        protocol_assignment=assignment,
    )


def load_experiment_configs(path: str) -> dict[str, ExperimentConfig]:
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    entries = doc["experiments"] if isinstance(doc, dict) else doc
    configs = {}
    for entry in entries:
        config = config_from_json(entry)
        configs[config.experiment_id] = config
    return configs


class SessionStore:
    """Append-only per-experiment JSONL store with a duplicate index.

    All mutation happens under one lock, which serializes writes per file
    and keeps the duplicate index consistent. Overriding a session moves the
    replaced record (tagged, never deleted) to ``<id>.superseded.jsonl``.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._seen: set[tuple[str, str]] = set()
        self._load_index()

    def _load_index(self) -> None:
        for path in sorted(self.root.glob("*.jsonl")):
            if path.name.endswith(".superseded.jsonl"):
                continue
            with open(path, "rb") as handle:
                result = parse_trials(handle)
            for record in result.dataset.records:
                self._seen.add((record.subject_id, record.experiment_id))

    def _path(self, experiment_id: str) -> Path:
        return self.root / f"{experiment_id}.jsonl"

    def _supersede(self, record: TrialRecord) -> None:
        path = self._path(record.experiment_id)
        if not path.exists():
            return
        kept: list[str] = []
        replaced: list[str] = []
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                text = line.strip()
                if not text:
                    continue
                try:
                    obj = json.loads(text)
                except json.JSONDecodeError:
                    kept.append(text)
                    continue
                if (
                    isinstance(obj, dict)
                    and obj.get("subject_id") == record.subject_id
                    and obj.get("experiment_id") == record.experiment_id
                ):
                    obj["superseded"] = True
                    replaced.append(json.dumps(obj, separators=(",", ":")))
                else:
                    kept.append(text)
        if not replaced:
            return
        superseded_path = self.root / f"{record.experiment_id}.superseded.jsonl"
        with open(superseded_path, "a", encoding="utf-8") as handle:
            for line in replaced:
                handle.write(line + "\n")
            handle.flush()
        temp_path = path.with_suffix(".jsonl.tmp")
        with open(temp_path, "w", encoding="utf-8") as handle:
            for line in kept:
                handle.write(line + "\n")
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(temp_path, path)

    def append(self, record: TrialRecord, override: bool = False) -> str:
        """Persist one record; returns the stored canonical line."""
        key = (record.subject_id, record.experiment_id)
        line = serialize_record(record)
        with self._lock:
            if key in self._seen:
                if not override:
                    raise DuplicateSubject(record.subject_id, record.experiment_id)
                self._supersede(record)
            with open(self._path(record.experiment_id), "a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()
                os.fsync(handle.fileno())
            self._seen.add(key)
        return line


def _make_handler(
    store: SessionStore,
    configs: dict[str, ExperimentConfig],
    allow_origin: str | None,
):
    class Handler(BaseHTTPRequestHandler):
        server_version = "qontext-collector/0.1"
        protocol_version = "HTTP/1.1"

        def log_message(self, format: str, *args) -> None:  # noqa: A002
            pass  # quiet by default; the CLI prints the listen address

        def _send(self, status: int, body: bytes, content_type: str) -> None:
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            if allow_origin is not None:
                self.send_header("Access-Control-Allow-Origin", allow_origin)
            self.end_headers()
            self.wfile.write(body)

        def _send_json(self, status: int, payload: dict) -> None:
            self._send(
                status,
                json.dumps(payload).encode("utf-8"),
                "application/json; charset=utf-8",
            )

        def do_OPTIONS(self) -> None:  # CORS preflight
            self.send_response(204)
            if allow_origin is not None:
                self.send_header("Access-Control-Allow-Origin", allow_origin)
                self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self) -> None:
            path = urllib.parse.urlparse(self.path).path
            if path == "/api/v1/health":
                self._send(200, b"ok", "text/plain; charset=utf-8")
                return
            match = re.fullmatch(r"/api/v1/experiments/([^/]+)/config", path)
            if match:
                experiment_id = urllib.parse.unquote(match.group(1))
                if not _ID_PATTERN.fullmatch(experiment_id):
                    self._send_json(
                        400, {"error": f"malformed experiment id {experiment_id!r}"}
                    )
                    return
                config = configs.get(experiment_id)
                if config is None:
                    self._send_json(
                        404, {"error": f"unknown experiment {experiment_id!r}"}
                    )
                    return
                self._send_json(200, config_to_json(config))
                return
            self._send_json(404, {"error": "not found"})

        def do_POST(self) -> None:
            parsed = urllib.parse.urlparse(self.path)
            if parsed.path != "/api/v1/sessions":
                self._send_json(404, {"error": "not found"})
                return
            query = urllib.parse.parse_qs(parsed.query)
            override = query.get("override", ["false"])[0].lower() in ("1", "true", "yes")
            length = int(self.headers.get("Content-Length", "0"))
            body = self.rfile.read(length) if length else b""
            try:
                obj = json.loads(body.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                self._send_json(422, {"findings": [f"invalid JSON body: {exc}"]})
                return
            try:
                record = record_from_json(obj, line=1)
            except MalformedRecord as exc:
                self._send_json(422, {"findings": [exc.reason]})
                return
            try:
                self.store_append(record, override)
            except DuplicateSubject as exc:
                self._send_json(
                    409,
                    {
                        "error": "duplicate-session",
                        "subject_id": exc.subject_id,
                        "experiment_id": exc.experiment_id,
                    },
                )
                return
            except OSError as exc:
                self._send_json(500, {"error": f"store failure: {exc}"})
                return
            self._send_json(201, record_to_json(record))

        def store_append(self, record: TrialRecord, override: bool) -> None:
            store.append(record, override=override)

    return Handler


class CollectorServer:
    """Threaded HTTP server wrapper with explicit start/stop (used by tests)."""

    def __init__(
        self,
        addr: str = "127.0.0.1:0",
        store_dir: str | Path = "store",
        configs: dict[str, ExperimentConfig] | None = None,
        allow_origin: str | None = None,
    ):
        host, _, port = addr.partition(":")
        self.store = SessionStore(store_dir)
        handler = _make_handler(self.store, configs or {}, allow_origin)
        self._httpd = ThreadingHTTPServer((host or "127.0.0.1", int(port or 0)), handler)
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"{host}:{port}"

    def start(self) -> "CollectorServer":
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def serve_forever(self) -> None:
        self._httpd.serve_forever()


def serve(
    addr: str,
    store_dir: str,
    config_path: str | None = None,
    allow_origin: str | None = None,
) -> None:
    """Blocking entry point for the CLI ``serve`` subcommand."""
    configs = load_experiment_configs(config_path) if config_path else {}
    server = CollectorServer(
        addr=addr, store_dir=store_dir, configs=configs, allow_origin=allow_origin
    )
    print(
        f"collector listening on http://{server.address} (store: {store_dir})",
        flush=True,
    )
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.stop()
