"""Command line front end.

Subcommands: posterior, predict, decide, simulate, export-net,
succession, serve (HTTP), stdio. Query commands print human-readable
tables by default and JSON with ``--json``; probabilities always appear
as canonical ``num/den`` with a decimal approximation alongside.

Exit codes: 0 success, 1 domain error, 2 bad flags (with a JSON error on
stderr), 3 impossible evidence (the observations rule out every
hypothesis).

Environment: ODDSENGINE_BIND (host:port for serve), ODDSENGINE_SESSION_DIR
(event log directory), ODDSENGINE_ALLOW_REVEAL (enable the debug reveal
op), ODDSENGINE_UI_DIR (static files served at /).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .core import decimal_string, format_rational
from .decision import anger_report, builtin_strategies, optimal_strategy
from .errors import EngineError, ImpossibleEvidence
from .inference import (
    EvidenceSequence,
    Scenario,
    builtin_scenarios,
    laplace_succession,
    scenario_from_json,
    sequential_posterior,
    predictive,
    second_layer_predictive,
)
from .network import diagram_from_scenario, to_dot, to_json as diagram_to_json
from .session import SessionStore
from .server import DEFAULT_BIND, make_http_server, serve_stdio
from .simulate import SimConfig, simulation_report_lines

__all__ = ["main"]

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_IMPOSSIBLE = 3


def _print_error(code: int, kind: str, message: str) -> None:
    payload = {"ok": False, "error": {"code": code, "kind": kind, "message": message}}
    print(json.dumps(payload), file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    """argparse with machine-readable failures and a pinned exit code."""

    def error(self, message: str) -> None:
        _print_error(EXIT_USAGE, "BadArguments", message)
        raise SystemExit(EXIT_USAGE)


def _render(value) -> str:
    return f"{format_rational(value)} = {decimal_string(value)}"


def _load_scenario(args: argparse.Namespace) -> Scenario:
    if getattr(args, "scenario_file", None):
        try:
            with open(args.scenario_file, "r", encoding="utf-8") as handle:
                return scenario_from_json(json.load(handle))
        except (OSError, json.JSONDecodeError) as exc:
            _print_error(EXIT_USAGE, "BadArguments", f"cannot read scenario file: {exc}")
            raise SystemExit(EXIT_USAGE) from None
    scenarios = builtin_scenarios()
    name = args.scenario
    if name not in scenarios:
        _print_error(
            EXIT_USAGE,
            "BadArguments",
            f"unknown scenario {name!r}; builtin: {', '.join(sorted(scenarios))}",
        )
        raise SystemExit(EXIT_USAGE)
    return scenarios[name]


def _parse_sequence(scenario: Scenario, text: str) -> EvidenceSequence:
    return EvidenceSequence.from_text(text, scenario.outcomes)


def _cmd_posterior(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    sequence = _parse_sequence(scenario, args.seq)
    post = sequential_posterior(scenario, sequence)
    if args.json:
        print(json.dumps({"sequence": str(sequence), "posterior": post.to_json()}))
    else:
        for label, p in post.entries:
            print(f"{label}\t{_render(p)}")
    return EXIT_OK


def _cmd_predict(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    sequence = _parse_sequence(scenario, args.seq)
    if args.taste is not None:
        value = second_layer_predictive(scenario, sequence, args.taste)
        target = args.taste
    else:
        value = predictive(scenario, sequence, args.outcome)
        target = args.outcome
    if args.json:
        print(
            json.dumps(
                {
                    "sequence": str(sequence),
                    "outcome": target,
                    "probability": format_rational(value),
                    "decimal": decimal_string(value),
                }
            )
        )
    else:
        print(_render(value))
    return EXIT_OK


def _cmd_decide(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    sequence = _parse_sequence(scenario, args.seq)
    post = sequential_posterior(scenario, sequence)
    reports = {
        name: anger_report(strategy, scenario, post, name=name)
        for name, strategy in builtin_strategies(scenario).items()
    }
    recommended = optimal_strategy(scenario.second_layer)
    if args.json:
        print(
            json.dumps(
                {
                    "sequence": str(sequence),
                    "strategies": {name: r.to_json() for name, r in reports.items()},
                    "recommended": recommended.to_json(),
                }
            )
        )
        return EXIT_OK
    for name, report in reports.items():
        per_hat = ", ".join(f"{hat}: {_render(p)}" for hat, p in report.per_hat)
        print(f"{name}\tmarginal {_render(report.marginal)}\t({per_hat})")
    serving = ", ".join(
        f"{hat} -> {dist.labels[0]}" for hat, dist in recommended.choices
    )
    print(f"recommended\t{serving}")
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    if args.hypothesis is not None:
        hypothesis = args.hypothesis
    elif args.violet is not None:
        hypothesis = f"V{args.violet}"
    else:
        _print_error(EXIT_USAGE, "BadArguments", "give --hypothesis or --violet")
        raise SystemExit(EXIT_USAGE)
    strategies = builtin_strategies(scenario)
    if args.strategy not in strategies:
        _print_error(
            EXIT_USAGE,
            "BadArguments",
            f"unknown strategy {args.strategy!r}; builtin: {', '.join(sorted(strategies))}",
        )
        raise SystemExit(EXIT_USAGE)
    config = SimConfig(
        scenario=scenario,
        hypothesis=hypothesis,
        strategy=strategies[args.strategy],
        seed=args.seed,
        days=args.days,
        strategy_name=args.strategy,
    )
    for line in simulation_report_lines(config, include_days=args.report == "full"):
        print(line)
    return EXIT_OK


def _cmd_export_net(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    posterior = None
    evidence = None
    if args.seq is not None:
        sequence = _parse_sequence(scenario, args.seq)
        posterior = sequential_posterior(scenario, sequence)
        if len(sequence):
            evidence = sequence.observations[-1]
    diagram = diagram_from_scenario(scenario, posterior=posterior, evidence=evidence)
    if args.format == "dot":
        text = to_dot(diagram)
    else:
        text = json.dumps(diagram_to_json(diagram), indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_succession(args: argparse.Namespace) -> int:
    estimate = laplace_succession(args.x, args.n)
    if args.json:
        print(json.dumps(estimate.to_json()))
        return EXIT_OK
    print(_render(estimate.point))
    if estimate.frequency is not None:
        print(f"frequency\t{_render(estimate.frequency)}")
    return EXIT_OK


def _store_from_args(args: argparse.Namespace) -> SessionStore:
    return SessionStore(log_dir=args.session_dir, allow_reveal=args.allow_reveal)


def _cmd_serve(args: argparse.Namespace) -> int:
    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        _print_error(EXIT_USAGE, "BadArguments", f"bind must be host:port, got {args.bind!r}")
        raise SystemExit(EXIT_USAGE)
    server = make_http_server(
        _store_from_args(args), host=host, port=int(port_text), ui_dir=args.ui_dir
    )
    actual_host, actual_port = server.server_address[:2]
    print(f"listening on http://{actual_host}:{actual_port}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def _cmd_stdio(args: argparse.Namespace) -> int:
    serve_stdio(_store_from_args(args))
    return EXIT_OK


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", default="witches", help="builtin scenario name")
    parser.add_argument("--scenario-file", help="path to a scenario JSON document")


def _add_store_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--session-dir",
        default=os.environ.get("ODDSENGINE_SESSION_DIR"),
        help="directory for session event logs (default: in-memory only)",
    )
    parser.add_argument(
        "--allow-reveal",
        action="store_true",
        default=os.environ.get("ODDSENGINE_ALLOW_REVEAL", "") == "1",
        help="enable the debug reveal op",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="oddsengine", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("posterior", help="posterior over hypotheses after a sequence")
    _add_scenario_flags(sub)
    sub.add_argument("--seq", default="", help="observed outcomes, e.g. NNNN")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(func=_cmd_posterior)

    sub = commands.add_parser("predict", help="predictive probability of the next outcome")
    _add_scenario_flags(sub)
    sub.add_argument("--seq", default="")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--outcome", help="first-layer outcome label")
    group.add_argument("--taste", help="second-layer outcome label")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(func=_cmd_predict)

    sub = commands.add_parser("decide", help="compare serving strategies")
    _add_scenario_flags(sub)
    sub.add_argument("--seq", default="")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(func=_cmd_decide)

    sub = commands.add_parser("simulate", help="seeded Monte Carlo run")
    _add_scenario_flags(sub)
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--hypothesis", help="true hypothesis label")
    group.add_argument("--violet", type=int, help="violet count (shorthand for V<n>)")
    sub.add_argument("--days", type=int, required=True)
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--strategy", default="deterministic")
    sub.add_argument("--report", choices=["summary", "full"], default="summary")
    sub.set_defaults(func=_cmd_simulate)

    sub = commands.add_parser("export-net", help="diagram as DOT or JSON")
    _add_scenario_flags(sub)
    sub.add_argument("--seq", help="annotate with the posterior after this sequence")
    sub.add_argument("--format", choices=["dot", "json"], default="dot")
    sub.add_argument("--output", "-o", help="write to a file instead of stdout")
    sub.set_defaults(func=_cmd_export_net)

    sub = commands.add_parser("succession", help="rule of succession estimate")
    sub.add_argument("--x", type=int, required=True, help="successes")
    sub.add_argument("--n", type=int, required=True, help="trials")
    sub.add_argument("--json", action="store_true")
    sub.set_defaults(func=_cmd_succession)

    sub = commands.add_parser("serve", help="HTTP session service")
    sub.add_argument(
        "--bind",
        default=os.environ.get("ODDSENGINE_BIND", DEFAULT_BIND),
        help="host:port to listen on",
    )
    sub.add_argument(
        "--ui-dir",
        default=os.environ.get("ODDSENGINE_UI_DIR"),
        help="serve static files from this directory at /",
    )
    _add_store_flags(sub)
    sub.set_defaults(func=_cmd_serve)

    sub = commands.add_parser("stdio", help="session service over stdin/stdout")
    _add_store_flags(sub)
    sub.set_defaults(func=_cmd_stdio)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ImpossibleEvidence as exc:
        _print_error(EXIT_IMPOSSIBLE, "ImpossibleEvidence", str(exc))
        return EXIT_IMPOSSIBLE
    except EngineError as exc:
        _print_error(EXIT_DOMAIN, type(exc).__name__, str(exc))
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
