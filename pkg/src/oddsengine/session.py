"""Interactive day-by-day sessions behind one JSON protocol.

Requests are flat envelopes, ``{"op": <name>, ...params}``; responses are
``{"ok": true, "format": 1, "result": ...}`` or ``{"ok": false,
"format": 1, "error": {"code", "kind", "message"}}``. The same envelopes
travel over HTTP and stdio (see server.py), so transports never diverge.

Sessions are event sourced. Mutating operations (create_session,
observe, next_day, serve, reset) append one JSON line to the session's
log; session state is a pure fold over those events. Replaying a log, or
re-sending a transcript of commands, rebuilds byte-identical state and
responses: ids are assigned deterministically and every random draw
comes from the session seed through SplitMix64.

Simulated sessions hold hidden truth (the composition drawn from the
prior, and each open day's taste). The truth is re-derived from the seed
on every replay and never written to any response or log line. The
``reveal`` operation exists for debugging and is disabled unless the
store is constructed with ``allow_reveal=True``.

Error codes double as HTTP statuses: 400 malformed request, 404 unknown
session, 409 operation out of place (wrong mode, nothing to serve,
reveal disabled), 422 well-formed but unacceptable values (unknown
labels, impossible evidence).
"""

from __future__ import annotations

import json
import re
import threading
from pathlib import Path
from typing import Iterable

from .core import Distribution, decimal_string, format_rational
from .decision import (
    Strategy,
    anger_probability,
    builtin_strategies,
    marginal_anger,
    optimal_strategy,
    population_chessboard,
)
from .errors import EngineError, ImpossibleEvidence
from .inference import (
    EvidenceSequence,
    Scenario,
    builtin_scenarios,
    predictive,
    scenario_from_json,
    scenario_to_json,
    second_layer_predictive,
    sequential_posterior,
)
from .network import diagram_from_scenario, to_json as diagram_to_json
from .simulate import CategoricalSampler, SplitMix64

__all__ = [
    "ProtocolError",
    "Session",
    "SessionStore",
    "PROTOCOL_FORMAT",
    "MODE_MANUAL",
    "MODE_SIMULATED",
]

PROTOCOL_FORMAT = 1
MODE_MANUAL = "manual"
MODE_SIMULATED = "simulated"

_SESSION_ID_RE = re.compile(r"^[A-Za-z0-9_-]{1,64}$")


class ProtocolError(Exception):
    """A protocol-level failure with its numeric code and error kind."""

    def __init__(self, code: int, kind: str, message: str) -> None:
        super().__init__(message)
        self.code = code
        self.kind = kind


def _prob_payload(value) -> dict:
    return {"fraction": format_rational(value), "decimal": decimal_string(value)}


def _distribution_payload(dist: Distribution) -> dict:
    return {label: _prob_payload(p) for label, p in dist.entries}


class _Day:
    """One day of a session; taste stays None in manual mode."""

    __slots__ = ("day", "hat", "taste", "served", "angry")

    def __init__(self, day: int, hat: str, taste: str | None = None) -> None:
        self.day = day
        self.hat = hat
        self.taste = taste
        self.served: str | None = None
        self.angry: bool | None = None

    def public_json(self) -> dict:
        # taste is ground truth and never leaves the server
        return {
            "day": self.day,
            "hat": self.hat,
            "served": self.served,
            "angry": self.angry,
        }


class Session:
    """State folded from a session's event stream."""

    def __init__(self, session_id: str, scenario: Scenario, mode: str, seed: int) -> None:
        self.id = session_id
        self.scenario = scenario
        self.mode = mode
        self.seed = seed
        self.lock = threading.Lock()
        self.days: list[_Day] = []
        self.truth: str | None = None
        self._rng: SplitMix64 | None = None
        self._hat_sampler: CategoricalSampler | None = None
        self._taste_samplers: dict[str, CategoricalSampler] | None = None
        if mode == MODE_SIMULATED:
            self._start_stream()

    def _start_stream(self) -> None:
        self._rng = SplitMix64(self.seed)
        self.truth = CategoricalSampler(self.scenario.prior).draw(self._rng)
        first = self.scenario.first_layer
        self._hat_sampler = CategoricalSampler(
            Distribution.from_pairs(zip(first.outcomes, first.row(self.truth)))
        )
        second = self.scenario.second_layer
        if second is not None:
            self._taste_samplers = {
                hat: CategoricalSampler(
                    Distribution.from_pairs(zip(second.outcomes, second.row(hat)))
                )
                for hat in second.hypotheses
            }

    @property
    def hats(self) -> EvidenceSequence:
        return EvidenceSequence(tuple(day.hat for day in self.days))

    @property
    def open_day(self) -> _Day | None:
        """The latest day, if it has not been served yet."""
        if self.days and self.days[-1].served is None and self.mode == MODE_SIMULATED:
            return self.days[-1]
        return None

    # Fold step. All validation lives here so a replayed log is held to
    # exactly the rules live traffic was held to.
    def apply(self, event: dict) -> None:
        kind = event.get("event")
        if kind == "observe":
            if self.mode != MODE_MANUAL:
                raise ProtocolError(409, "WrongMode", "observe needs a manual session")
            outcome = event.get("outcome")
            if outcome not in self.scenario.outcomes:
                raise ProtocolError(422, "UnknownLabel", f"unknown outcome {outcome!r}")
            try:
                sequential_posterior(self.scenario, self.hats.extended([outcome]))
            except ImpossibleEvidence:
                raise ProtocolError(
                    422,
                    "ImpossibleEvidence",
                    f"no hypothesis allows the sequence extended by {outcome!r}",
                ) from None
            self.days.append(_Day(day=len(self.days) + 1, hat=outcome))
        elif kind == "next_day":
            if self.mode != MODE_SIMULATED:
                raise ProtocolError(409, "WrongMode", "next_day needs a simulated session")
            hat = self._hat_sampler.draw(self._rng)
            taste = None
            if self._taste_samplers is not None:
                taste = self._taste_samplers[hat].draw(self._rng)
            self.days.append(_Day(day=len(self.days) + 1, hat=hat, taste=taste))
        elif kind == "serve":
            if self.mode != MODE_SIMULATED:
                raise ProtocolError(409, "WrongMode", "serve needs a simulated session")
            day = self.open_day
            if day is None:
                raise ProtocolError(409, "NothingToServe", "no unserved day is open")
            second = self.scenario.second_layer
            if second is None:
                raise ProtocolError(409, "NothingToServe", "scenario has no taste layer")
            food = event.get("food")
            if food not in second.outcomes:
                raise ProtocolError(422, "UnknownLabel", f"unknown food {food!r}")
            day.served = food
            day.angry = food != day.taste
        elif kind == "reset":
            self.days = []
            if self.mode == MODE_SIMULATED:
                self._start_stream()
        else:
            raise ProtocolError(400, "UnknownEvent", f"unknown event kind {kind!r}")


class SessionStore:
    """Holds sessions, dispatches envelopes, and persists event logs.

    ``log_dir`` of None keeps everything in memory. With a directory,
    each session appends to ``<log_dir>/<id>.jsonl`` and existing logs
    are replayed when the store starts.
    """

    def __init__(self, log_dir: str | Path | None = None, allow_reveal: bool = False) -> None:
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._created = 0
        self._log_dir = Path(log_dir) if log_dir is not None else None
        self._allow_reveal = allow_reveal
        self._ops = {
            "create_session": self._op_create_session,
            "observe": self._op_observe,
            "next_day": self._op_next_day,
            "serve": self._op_serve,
            "state": self._op_state,
            "what_if": self._op_what_if,
            "network": self._op_network,
            "reset": self._op_reset,
            "reveal": self._op_reveal,
            "list_scenarios": self._op_list_scenarios,
        }
        if self._log_dir is not None:
            self._log_dir.mkdir(parents=True, exist_ok=True)
            self._restore_logs()

    # ------------------------------------------------------------------
    # dispatch plumbing

    def dispatch(self, request: dict) -> tuple[int, dict]:
        """Handle one envelope; returns (http_status, response_envelope)."""
        try:
            if not isinstance(request, dict):
                raise ProtocolError(400, "BadRequest", "request must be a JSON object")
            op = request.get("op")
            handler = self._ops.get(op)
            if handler is None:
                raise ProtocolError(400, "UnknownOp", f"unknown op {op!r}")
            result = handler(request)
            return 200, {"ok": True, "format": PROTOCOL_FORMAT, "result": result}
        except ProtocolError as exc:
            return exc.code, {
                "ok": False,
                "format": PROTOCOL_FORMAT,
                "error": {"code": exc.code, "kind": exc.kind, "message": str(exc)},
            }
        except EngineError as exc:
            return 422, {
                "ok": False,
                "format": PROTOCOL_FORMAT,
                "error": {"code": 422, "kind": type(exc).__name__, "message": str(exc)},
            }

    def _session(self, request: dict) -> Session:
        session_id = request.get("session")
        if not isinstance(session_id, str):
            raise ProtocolError(400, "BadRequest", "missing session id")
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise ProtocolError(404, "UnknownSession", f"no session {session_id!r}")
        return session

    def _append_log(self, session_id: str, event: dict) -> None:
        if self._log_dir is None:
            return
        path = self._log_dir / f"{session_id}.jsonl"
        with path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(event, separators=(",", ":")) + "\n")

    def _restore_logs(self) -> None:
        for path in sorted(self._log_dir.glob("*.jsonl")):
            with path.open("r", encoding="utf-8") as handle:
                lines = [line for line in handle.read().splitlines() if line.strip()]
            if not lines:
                continue
            created = json.loads(lines[0])
            if created.get("event") != "create":
                continue
            session = Session(
                session_id=created["session"],
                scenario=scenario_from_json(created["scenario"]),
                mode=created["mode"],
                seed=created["seed"],
            )
            for line in lines[1:]:
                session.apply(json.loads(line))
            self._sessions[session.id] = session
            self._created += 1

    # ------------------------------------------------------------------
    # operations

    def _op_create_session(self, request: dict) -> dict:
        mode = request.get("mode", MODE_MANUAL)
        if mode not in (MODE_MANUAL, MODE_SIMULATED):
            raise ProtocolError(422, "UnknownLabel", f"unknown mode {mode!r}")
        seed = request.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ProtocolError(400, "BadRequest", "seed must be an integer")
        scenario_spec = request.get("scenario", "witches")
        if isinstance(scenario_spec, str):
            scenarios = builtin_scenarios()
            if scenario_spec not in scenarios:
                raise ProtocolError(
                    422, "UnknownLabel", f"unknown scenario {scenario_spec!r}"
                )
            scenario = scenarios[scenario_spec]
        elif isinstance(scenario_spec, dict):
            scenario = scenario_from_json(scenario_spec)
        else:
            raise ProtocolError(400, "BadRequest", "scenario must be a name or a document")
        with self._lock:
            session_id = request.get("session")
            if session_id is None:
                # deterministic sequence that steps over explicitly taken ids
                while True:
                    self._created += 1
                    session_id = f"s{self._created}"
                    if session_id not in self._sessions:
                        break
            elif not isinstance(session_id, str) or not _SESSION_ID_RE.match(session_id):
                raise ProtocolError(400, "BadRequest", "session id must be a short slug")
            if session_id in self._sessions:
                raise ProtocolError(409, "SessionExists", f"session {session_id!r} exists")
            session = Session(session_id, scenario, mode, seed)
            self._sessions[session_id] = session
        self._append_log(
            session_id,
            {
                "format": PROTOCOL_FORMAT,
                "event": "create",
                "session": session_id,
                "mode": mode,
                "seed": seed,
                "scenario": scenario_to_json(scenario),
            },
        )
        return {
            "session": session_id,
            "mode": mode,
            "scenario": scenario.name,
            "day_count": 0,
        }

    def _mutate(self, session: Session, event: dict) -> None:
        session.apply(event)
        self._append_log(session.id, event)

    def _op_observe(self, request: dict) -> dict:
        session = self._session(request)
        with session.lock:
            self._mutate(session, {"event": "observe", "outcome": request.get("outcome")})
            day = session.days[-1]
            return {
                "session": session.id,
                "day": day.day,
                "hat": day.hat,
                "posterior": self._posterior_payload(session),
                "predictive": self._predictive_payload(session),
            }

    def _op_next_day(self, request: dict) -> dict:
        session = self._session(request)
        with session.lock:
            self._mutate(session, {"event": "next_day"})
            day = session.days[-1]
            result = {
                "session": session.id,
                "day": day.day,
                "hat": day.hat,
                "posterior": self._posterior_payload(session),
                "predictive": self._predictive_payload(session),
            }
            recommended = self._recommended(session.scenario)
            if recommended is not None:
                result["recommended"] = recommended
            return result

    def _op_serve(self, request: dict) -> dict:
        session = self._session(request)
        with session.lock:
            self._mutate(session, {"event": "serve", "food": request.get("food")})
            day = session.days[-1]
            served_days = [d for d in session.days if d.served is not None]
            return {
                "session": session.id,
                "day": day.day,
                "served": day.served,
                "angry": day.angry,
                "served_total": len(served_days),
                "angry_total": sum(1 for d in served_days if d.angry),
            }

    def _op_state(self, request: dict) -> dict:
        session = self._session(request)
        with session.lock:
            scenario = session.scenario
            result = {
                "session": session.id,
                "mode": session.mode,
                "scenario": scenario.name,
                "day_count": len(session.days),
                "hats_seen": str(session.hats),
                "history": [day.public_json() for day in session.days],
                "open_day": session.open_day.day if session.open_day else None,
                "posterior": self._posterior_payload(session),
                "predictive": self._predictive_payload(session),
            }
            if scenario.second_layer is not None:
                posterior = sequential_posterior(scenario, session.hats)
                result["taste_predictive"] = {
                    taste: _prob_payload(
                        second_layer_predictive(scenario, session.hats, taste)
                    )
                    for taste in scenario.second_layer.outcomes
                }
                result["recommended"] = self._recommended(scenario)
                strategies = dict(builtin_strategies(scenario))
                result["strategies"] = {
                    name: self._strategy_payload(scenario, strategy, posterior)
                    for name, strategy in strategies.items()
                }
                result["chessboard"] = {
                    hat: population_chessboard(scenario.second_layer, hat)
                    for hat in scenario.outcomes
                }
            return result

    def _op_what_if(self, request: dict) -> dict:
        session = self._session(request)
        with session.lock:
            scenario = session.scenario
            suffix = self._parse_suffix(request.get("suffix"), scenario)
            hats = session.hats.extended(suffix)
            try:
                posterior = sequential_posterior(scenario, hats)
            except ImpossibleEvidence:
                raise ProtocolError(
                    422, "ImpossibleEvidence", "no hypothesis allows that continuation"
                ) from None
            result = {
                "session": session.id,
                "suffix": list(suffix),
                "day_count": len(hats),
                "posterior": _distribution_payload(posterior),
                "predictive": {
                    outcome: _prob_payload(predictive(scenario, hats, outcome))
                    for outcome in scenario.outcomes
                },
            }
            if scenario.second_layer is not None:
                result["taste_predictive"] = {
                    taste: _prob_payload(second_layer_predictive(scenario, hats, taste))
                    for taste in scenario.second_layer.outcomes
                }
            return result

    def _op_network(self, request: dict) -> dict:
        session = self._session(request)
        with session.lock:
            scenario = session.scenario
            posterior = sequential_posterior(scenario, session.hats)
            evidence = session.days[-1].hat if session.days else None
            diagram = diagram_from_scenario(scenario, posterior=posterior, evidence=evidence)
            return {"session": session.id, "diagram": diagram_to_json(diagram)}

    def _op_reset(self, request: dict) -> dict:
        session = self._session(request)
        with session.lock:
            self._mutate(session, {"event": "reset"})
            return {"session": session.id, "day_count": 0}

    def _op_reveal(self, request: dict) -> dict:
        if not self._allow_reveal:
            raise ProtocolError(409, "RevealDisabled", "reveal is disabled on this store")
        session = self._session(request)
        with session.lock:
            if session.mode != MODE_SIMULATED:
                raise ProtocolError(409, "WrongMode", "manual sessions hold no truth")
            return {"session": session.id, "hypothesis": session.truth}

    def _op_list_scenarios(self, request: dict) -> dict:
        return {"scenarios": sorted(builtin_scenarios().keys())}

    # ------------------------------------------------------------------
    # payload helpers

    def _posterior_payload(self, session: Session) -> dict:
        return _distribution_payload(
            sequential_posterior(session.scenario, session.hats)
        )

    def _predictive_payload(self, session: Session) -> dict:
        scenario = session.scenario
        return {
            outcome: _prob_payload(predictive(scenario, session.hats, outcome))
            for outcome in scenario.outcomes
        }

    def _recommended(self, scenario: Scenario) -> dict | None:
        if scenario.second_layer is None:
            return None
        strategy = optimal_strategy(scenario.second_layer)
        return {
            hat: strategy.for_hat(hat).labels[0] for hat in scenario.second_layer.hypotheses
        }

    def _strategy_payload(
        self, scenario: Scenario, strategy: Strategy, posterior: Distribution
    ) -> dict:
        return {
            "choices": strategy.to_json(),
            "per_hat": {
                hat: _prob_payload(
                    anger_probability(strategy, scenario.second_layer, hat)
                )
                for hat in scenario.outcomes
            },
            "marginal": _prob_payload(marginal_anger(strategy, scenario, posterior)),
        }

    def _parse_suffix(self, raw, scenario: Scenario) -> tuple[str, ...]:
        if raw is None:
            return ()
        if isinstance(raw, str):
            try:
                return EvidenceSequence.from_text(raw, scenario.outcomes).observations
            except EngineError as exc:
                raise ProtocolError(422, "UnknownLabel", str(exc)) from None
        if isinstance(raw, Iterable):
            labels = tuple(raw)
            for label in labels:
                if label not in scenario.outcomes:
                    raise ProtocolError(422, "UnknownLabel", f"unknown outcome {label!r}")
            return labels
        raise ProtocolError(400, "BadRequest", "suffix must be a string or a list")
