"""Local HTTP service exposing the corpus and the clustering pipeline.

Endpoints (all bodies and responses are JSON):

* GET  /corpus            -> lemma names, statements, available levels
* POST /cluster           -> cluster report for the posted engine settings
* POST /suggest           -> suggestion for a posted partial proof text
* GET  /lemma/<name>      -> statement and proof script of one lemma
* POST /reload            -> re-read the corpus sources, swap atomically

Frequencies are serialized both as numbers and as fixed two-decimal strings;
the browser UI renders the strings verbatim. Errors carry machine-readable
codes: bad_request, parse_error, corpus_too_small, not_found.
"""
from __future__ import annotations

import json
import threading
from dataclasses import replace
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import pipeline
from .cli import encode_partial
from .model import ClusterReport, EngineConfig
from .parsing import FormatError, ParseError, merge_script_into_trace, parse_script, parse_trace_text
from .workspace import CorpusBundle, load_sources

CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".svg": "image/svg+xml",
}


def report_payload(report: ClusterReport) -> dict:
    entries = []
    for entry in report.entries:
        entries.append(
            {
                "lemmas": sorted(entry.lemma_set),
                "frequency": entry.frequency_pct,
                "frequency_str": f"{entry.frequency_pct:.2f}",
            }
        )
    return {"entries": entries, "count": len(entries)}


def config_from_body(body: dict, defaults: EngineConfig) -> EngineConfig:
    mapping = {
        "algorithm": "algorithm",
        "level": "level",
        "granularity": "granularity",
        "frequency_param": "frequency_param",
        "seed": "master_seed",
        "runs": "runs",
    }
    overrides = {}
    for key, field in mapping.items():
        if key in body:
            value = body[key]
            if field in ("granularity", "frequency_param", "master_seed", "runs"):
                value = int(value)
            overrides[field] = value
    return replace(defaults, **overrides)


class ServiceState:
    """Corpus shared across requests; reload swaps it atomically."""

    def __init__(self, bundle: CorpusBundle, sources, defaults: EngineConfig):
        self._bundle = bundle
        self.sources = list(sources)
        self.defaults = defaults
        self._lock = threading.Lock()

    @property
    def bundle(self) -> CorpusBundle:
        with self._lock:
            return self._bundle

    def reload(self) -> CorpusBundle:
        fresh = load_sources(self.sources)
        with self._lock:
            self._bundle = fresh
        return fresh


class ApiError(Exception):
    def __init__(self, status, code, message):
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


def parse_partial_text(text: str):
    """Accept either the trace format or a proof script for the partial
    development posted by the UI."""
    stripped = text.strip()
    if not stripped:
        raise ApiError(400, "bad_request", "empty partial proof")
    try:
        if stripped.startswith("library") or stripped.startswith("lemma"):
            traces = parse_trace_text(text)
            if not traces:
                raise ApiError(400, "parse_error", "no lemma in partial proof")
            return traces[0]
        scripts = parse_script(text)
        if not scripts:
            raise ApiError(400, "parse_error", "no lemma in partial proof")
        return merge_script_into_trace(scripts[0], None)
    except (ParseError, FormatError) as exc:
        raise ApiError(400, "parse_error", str(exc)) from exc


def make_handler(state: ServiceState, frontend: str | None):
    frontend_dir = Path(frontend).resolve() if frontend else None

    class Handler(BaseHTTPRequestHandler):
        server_version = "proofminer"

        def log_message(self, *args):
            pass

        def _send_json(self, payload, status=200):
            data = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def _send_error(self, exc: ApiError):
            self._send_json(
                {"error": {"code": exc.code, "message": exc.message}}, exc.status
            )

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length", 0))
            raw = self.rfile.read(length) if length else b"{}"
            try:
                body = json.loads(raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise ApiError(400, "bad_request", f"bad JSON body: {exc}") from exc
            if not isinstance(body, dict):
                raise ApiError(400, "bad_request", "body must be a JSON object")
            return body

        def do_GET(self):
            try:
                if self.path == "/corpus":
                    bundle = state.bundle
                    self._send_json(
                        {
                            "library": bundle.name,
                            "count": bundle.size(),
                            "levels": ["goal", "tactic", "tree"],
                            "lemmas": [
                                {
                                    "name": name,
                                    "statement": bundle.statements.get(name, ""),
                                }
                                for name in bundle.lemma_names
                            ],
                        }
                    )
                elif self.path.startswith("/lemma/"):
                    from urllib.parse import unquote

                    name = unquote(self.path[len("/lemma/"):])
                    bundle = state.bundle
                    if name not in bundle.statements:
                        raise ApiError(404, "not_found", f"unknown lemma {name!r}")
                    self._send_json(
                        {
                            "name": name,
                            "statement": bundle.statements.get(name, ""),
                            "script": bundle.scripts.get(name, ""),
                        }
                    )
                else:
                    self._serve_static()
            except ApiError as exc:
                self._send_error(exc)

        def _serve_static(self):
            if frontend_dir is None:
                raise ApiError(404, "not_found", f"no route {self.path!r}")
            rel = self.path.lstrip("/") or "index.html"
            target = (frontend_dir / rel).resolve()
            if not str(target).startswith(str(frontend_dir)) or not target.is_file():
                raise ApiError(404, "not_found", f"no file {self.path!r}")
            data = target.read_bytes()
            self.send_response(200)
            self.send_header(
                "Content-Type",
                CONTENT_TYPES.get(target.suffix, "application/octet-stream"),
            )
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def do_POST(self):
            try:
                if self.path == "/cluster":
                    body = self._read_body()
                    config = self._config(body)
                    bundle = state.bundle
                    report = self._run(
                        pipeline.cluster_corpus, bundle.vectors[config.level], config
                    )
                    self._send_json(report_payload(report))
                elif self.path == "/suggest":
                    body = self._read_body()
                    config = self._config(body)
                    bundle = state.bundle
                    partial = parse_partial_text(str(body.get("partial", "")))
                    current = encode_partial(partial, bundle, config)
                    suggestion = self._run(
                        pipeline.suggest_for_goal,
                        bundle.vectors[config.level],
                        current,
                        config,
                    )
                    if suggestion is None:
                        self._send_json({"found": False, "lemma": partial.lemma_name})
                    else:
                        self._send_json(
                            {
                                "found": True,
                                "lemma": partial.lemma_name,
                                "lemmas": sorted(suggestion.lemma_set),
                                "frequency": suggestion.frequency_pct,
                                "frequency_str": f"{suggestion.frequency_pct:.2f}",
                            }
                        )
                elif self.path == "/reload":
                    fresh = state.reload()
                    self._send_json({"reloaded": True, "count": fresh.size()})
                else:
                    raise ApiError(404, "not_found", f"no route {self.path!r}")
            except ApiError as exc:
                self._send_error(exc)

        def _config(self, body):
            try:
                return config_from_body(body, state.defaults)
            except (ValueError, TypeError) as exc:
                raise ApiError(400, "bad_request", str(exc)) from exc

        def _run(self, fn, *args):
            try:
                return fn(*args)
            except pipeline.CorpusTooSmall as exc:
                raise ApiError(422, "corpus_too_small", str(exc)) from exc

    return Handler


def run_service(bundle, sources, host, port, defaults, frontend=None, ready=None):
    state = ServiceState(bundle, sources, defaults)
    server = ThreadingHTTPServer((host, port), make_handler(state, frontend))
    if ready is not None:
        ready(server)
    print(
        f"serving {bundle.size()} lemmas on "
        f"http://{host}:{server.server_address[1]}/",
        flush=True,
    )
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


def start_background(bundle, sources, defaults, frontend=None, host="127.0.0.1", port=0):
    """Start the service on a background thread; returns (server, thread).
    Used by tests and the UI test harness."""
    state = ServiceState(bundle, sources, defaults)
    server = ThreadingHTTPServer((host, port), make_handler(state, frontend))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, thread
