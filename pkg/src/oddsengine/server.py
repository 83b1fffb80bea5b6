"""HTTP and stdio transports over the session protocol.

Both transports move the exact same envelopes as
:mod:`oddsengine.session`; nothing is added or renamed in transit, so a
transcript captured on one transport replays on the other.

HTTP surface:
    * ``POST /v1/rpc`` with a full request envelope in the body;
    * ``POST /v1/<op>`` with the op filled in from the path;
    * ``GET /v1/state``, ``GET /v1/network``, ``GET /v1/list_scenarios``
      with params as query strings, for read-only convenience;
    * ``GET /healthz``;
    * optional static file serving out of a UI directory.

The HTTP status code always equals the protocol error code (200 on
success), and the body is the response envelope either way.
"""

from __future__ import annotations

import json
import mimetypes
import sys
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qsl, urlsplit

from .session import PROTOCOL_FORMAT, SessionStore

__all__ = ["make_http_server", "serve_stdio", "DEFAULT_BIND"]

DEFAULT_BIND = "127.0.0.1:8787"

_GET_OPS = {"state", "network", "list_scenarios"}


def _error_envelope(code: int, kind: str, message: str) -> dict:
    return {
        "ok": False,
        "format": PROTOCOL_FORMAT,
        "error": {"code": code, "kind": kind, "message": message},
    }


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def store(self) -> SessionStore:
        return self.server.store

    def log_message(self, format: str, *args) -> None:
        # default logging writes every request to stderr; stay quiet
        pass

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, separators=(",", ":")).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _read_body(self) -> dict | None:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            parsed = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            self._send_json(400, _error_envelope(400, "BadRequest", "body is not JSON"))
            return None
        if not isinstance(parsed, dict):
            self._send_json(400, _error_envelope(400, "BadRequest", "body must be an object"))
            return None
        return parsed

    def do_POST(self) -> None:
        parts = urlsplit(self.path)
        segments = [piece for piece in parts.path.split("/") if piece]
        if len(segments) != 2 or segments[0] != "v1":
            self._send_json(404, _error_envelope(404, "NotFound", "unknown path"))
            return
        request = self._read_body()
        if request is None:
            return
        if segments[1] != "rpc":
            declared = request.get("op")
            if declared is not None and declared != segments[1]:
                self._send_json(
                    400,
                    _error_envelope(400, "BadRequest", "op in body contradicts the path"),
                )
                return
            request["op"] = segments[1]
        status, envelope = self.store.dispatch(request)
        self._send_json(status, envelope)

    def do_GET(self) -> None:
        parts = urlsplit(self.path)
        segments = [piece for piece in parts.path.split("/") if piece]
        if parts.path == "/healthz":
            self._send_json(200, {"ok": True, "format": PROTOCOL_FORMAT})
            return
        if len(segments) == 2 and segments[0] == "v1" and segments[1] in _GET_OPS:
            request = dict(parse_qsl(parts.query))
            request["op"] = segments[1]
            status, envelope = self.store.dispatch(request)
            self._send_json(status, envelope)
            return
        if self.server.ui_dir is not None:
            self._serve_static(parts.path)
            return
        self._send_json(404, _error_envelope(404, "NotFound", "unknown path"))

    def _serve_static(self, path: str) -> None:
        root: Path = self.server.ui_dir
        relative = path.lstrip("/") or "index.html"
        candidate = (root / relative).resolve()
        # never follow the path out of the UI directory
        if not str(candidate).startswith(str(root.resolve())) or not candidate.is_file():
            self._send_json(404, _error_envelope(404, "NotFound", "no such file"))
            return
        content_type = mimetypes.guess_type(candidate.name)[0] or "application/octet-stream"
        body = candidate.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_http_server(
    store: SessionStore,
    host: str = "127.0.0.1",
    port: int = 8787,
    ui_dir: str | Path | None = None,
) -> ThreadingHTTPServer:
    """Build (but do not start) the threaded HTTP server."""
    server = ThreadingHTTPServer((host, port), _Handler)
    server.store = store
    server.ui_dir = Path(ui_dir) if ui_dir is not None else None
    return server


def serve_stdio(store: SessionStore, stdin=None, stdout=None) -> None:
    """One JSON envelope per line in, one response envelope per line out.

    Blank lines are skipped; EOF ends the loop. Unparseable lines earn a
    400 envelope rather than killing the server.
    """
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
        except json.JSONDecodeError:
            envelope = _error_envelope(400, "BadRequest", "line is not JSON")
        else:
            if isinstance(request, dict):
                _, envelope = store.dispatch(request)
            else:
                envelope = _error_envelope(400, "BadRequest", "line must be an object")
        stdout.write(json.dumps(envelope, separators=(",", ":")) + "\n")
        stdout.flush()
