#!/usr/bin/env python3
"""Capture real server payloads for the dashboard's contract tests.

Starts the actual inference server on an ephemeral port, walks a fixed
script of requests over plain HTTP, and freezes every response envelope
into tests/fixtures/payloads.json. The dashboard tests then assert that
what the views render matches these payloads verbatim — so the fixtures
must come from the real server, never be hand-written.

Run from anywhere: python3 frontend/scripts/capture_fixtures.py
"""

from __future__ import annotations

import json
import threading
import urllib.error
import urllib.request
from pathlib import Path

from oddsengine.server import make_http_server
from oddsengine.session import SessionStore

FIXTURE_PATH = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "payloads.json"


def call(server, method: str, path: str, payload: dict | None = None):
    host, port = server.server_address[:2]
    body = None if payload is None else json.dumps(payload).encode("utf-8")
    request = urllib.request.Request(
        f"http://{host}:{port}{path}",
        data=body,
        method=method,
        headers={"Content-Type": "application/json"} if body else {},
    )
    try:
        with urllib.request.urlopen(request) as response:
            return response.status, json.loads(response.read().decode("utf-8"))
    except urllib.error.HTTPError as failure:
        return failure.code, json.loads(failure.read().decode("utf-8"))


def main() -> None:
    store = SessionStore()
    server = make_http_server(store, host="127.0.0.1", port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    fixtures: dict[str, dict] = {}

    def record(name: str, method: str, path: str, payload: dict | None = None) -> dict:
        status, envelope = call(server, method, path, payload)
        fixtures[name] = {"status": status, "envelope": envelope}
        return envelope

    try:
        # Manual session: the four-black-hats walkthrough.
        record(
            "create_manual",
            "POST",
            "/v1/rpc",
            {"op": "create_session", "scenario": "witches", "mode": "manual"},
        )
        record("state_fresh", "POST", "/v1/rpc", {"op": "state", "session": "s1"})
        for _ in range(4):
            record(
                "observe_step",
                "POST",
                "/v1/rpc",
                {"op": "observe", "session": "s1", "outcome": "N"},
            )
        record("state_after_nnnn", "POST", "/v1/rpc", {"op": "state", "session": "s1"})
        record("network_after_nnnn", "POST", "/v1/rpc", {"op": "network", "session": "s1"})
        record(
            "what_if_two_v",
            "POST",
            "/v1/rpc",
            {"op": "what_if", "session": "s1", "suffix": "VV"},
        )

        # A fresh session for the ten-violet hypothetical.
        record(
            "create_scratch",
            "POST",
            "/v1/rpc",
            {"op": "create_session", "scenario": "witches", "mode": "manual"},
        )
        record(
            "what_if_ten_violet",
            "POST",
            "/v1/rpc",
            {"op": "what_if", "session": "s2", "suffix": "VVVVVVVVVV"},
        )

        # Simulated session: play two days with a fixed seed.
        record(
            "create_simulated",
            "POST",
            "/v1/rpc",
            {"op": "create_session", "scenario": "witches", "mode": "simulated", "seed": 7},
        )
        record("day_one", "POST", "/v1/rpc", {"op": "next_day", "session": "s3"})
        record("state_day_open", "POST", "/v1/rpc", {"op": "state", "session": "s3"})
        record(
            "serve_day_one",
            "POST",
            "/v1/rpc",
            {"op": "serve", "session": "s3", "food": "Sweet"},
        )
        record("day_two", "POST", "/v1/rpc", {"op": "next_day", "session": "s3"})
        record(
            "serve_day_two",
            "POST",
            "/v1/rpc",
            {"op": "serve", "session": "s3", "food": "Salty"},
        )
        record("state_simulated", "POST", "/v1/rpc", {"op": "state", "session": "s3"})

        record("list_scenarios", "POST", "/v1/rpc", {"op": "list_scenarios"})

        # Error envelopes the client must classify.
        record("error_missing_session", "POST", "/v1/rpc", {"op": "state", "session": "ghost"})
        record(
            "error_nothing_to_serve",
            "POST",
            "/v1/rpc",
            {"op": "serve", "session": "s1", "food": "Sweet"},
        )
        record(
            "error_unknown_outcome",
            "POST",
            "/v1/rpc",
            {"op": "observe", "session": "s1", "outcome": "Q"},
        )
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)

    FIXTURE_PATH.parent.mkdir(parents=True, exist_ok=True)
    FIXTURE_PATH.write_text(json.dumps(fixtures, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {len(fixtures)} fixtures to {FIXTURE_PATH}")


if __name__ == "__main__":
    main()
