"""Command line front end.

    quncertainty analyze --state lz-eigenstate:m=1 --pair phi,Lz
    quncertainty domain-check --state cusp --operator p
    quncertainty sweep --state gaussian:sigma=1 --range chirp=0:2:0.25 --pair x,p --output csv
    quncertainty classical samples.csv
    quncertainty version

Exit codes: 0 every applicable bound holds, 1 usage/parse/config error,
2 an applicable bound is violated beyond tolerance, 3 nothing was applicable.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .classical import classical_relation, quadratic_discriminant_check, read_samples_csv
from .config import Config
from .errors import InapplicableError, QuncertaintyError
from .expr import compile_expression
from .grid import Kind
from .operators import angle, angular_momentum, domain_check, momentum, multiply, position
from .relations import evaluate_commutator_form, inapplicable
from .report import (EXIT_ERROR, EXIT_INAPPLICABLE, EXIT_OK, EXIT_VIOLATED, RunRecord, emit, now,
                     render_human, sweep_table)
from .states import default_topology, parse_range, parse_state_spec, realize, sweep

log = logging.getLogger("quncertainty")

_OPERATORS = {"x": position, "p": momentum, "phi": angle, "lz": angular_momentum, "l_z": angular_momentum}


def parse_operator(text: str, kind: Kind, hbar: float):
    """``x``, ``p``, ``phi``, ``Lz`` or ``f:<expression>`` (multiplication)."""
    text = text.strip()
    if text.startswith("f:"):
        variable = "phi" if kind is Kind.CIRCLE else "x"
        func = compile_expression(text[2:], variable)
        return multiply(lambda c: func(c).real, hbar=hbar, name=text)
    try:
        return _OPERATORS[text.lower()](hbar)
    except KeyError:
        raise QuncertaintyError(f"unknown operator {text!r}; use x, p, phi, Lz or f:<expr>") from None


def parse_pair(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise QuncertaintyError(f"--pair needs two comma-separated operators, got {text!r}")
    return parts


def _analyze_one(spec: str, pair, grid_n, config: Config) -> dict:
    recipe = parse_state_spec(spec)
    psi = realize(recipe, default_topology(recipe, grid_n, config), config)
    a = parse_operator(pair[0], recipe.domain, config.hbar)
    b = parse_operator(pair[1], recipe.domain, config.hbar)
    result = {"kind": "relation", "state": recipe.to_spec(), "pair": ",".join(pair),
              "n_points": psi.topology.n_points}
    try:
        report = evaluate_commutator_form(a, b, psi, config)
    except InapplicableError as exc:
        status = inapplicable(exc.report.reason)
        result.update(status="inapplicable", message=str(exc), domain_report=exc.report.to_dict(),
                      applicability={"modified": status, "commutator": status, "standard": status},
                      report=None)
        return result
    result.update(status="ok", report=report.to_dict(), applicability=dict(report.applicability))
    return result


def _exit_code(results) -> int:
    applicable = violated = False
    for r in results:
        rep = r.get("report")
        if not rep:
            continue
        for name, ok in rep["satisfied"].items():
            applicable = True
            violated |= not ok
    if violated:
        return EXIT_VIOLATED
    return EXIT_OK if applicable else EXIT_INAPPLICABLE


def load_config(args) -> Config:
    config = Config.from_file(args.config) if args.config else Config()
    overrides = {}
    if args.hbar is not None:
        overrides["hbar"] = args.hbar
    if args.output is not None:
        overrides["output"] = args.output
    return config.replace(**overrides) if overrides else config


def cmd_analyze(args, config: Config) -> RunRecord:
    pair = parse_pair(args.pair)
    result = _analyze_one(args.state, pair, args.grid_n, config)
    return RunRecord("analyze", config.to_dict(), [result], _exit_code([result]),
                     [result["state"]], pair)


def cmd_domain_check(args, config: Config) -> RunRecord:
    recipe = parse_state_spec(args.state)
    psi = realize(recipe, default_topology(recipe, args.grid_n, config), config)
    op = parse_operator(args.operator, recipe.domain, config.hbar)
    report = domain_check(op, psi, args.refinements, config)
    result = {"kind": "domain", "state": recipe.to_spec(), "operator": op.name,
              "n_points": psi.topology.n_points, "domain_report": report.to_dict(),
              "status": "ok" if report.ok else "inapplicable"}
    return RunRecord("domain-check", config.to_dict(), [result],
                     EXIT_OK if report.ok else EXIT_INAPPLICABLE, [result["state"]], [op.name])


def cmd_sweep(args, config: Config) -> RunRecord:
    pair = parse_pair(args.pair)
    base = parse_state_spec(args.state)
    ranges = dict(parse_range(r) for r in args.range)
    recipes = sweep(base, ranges)
    specs = [r.to_spec() for r in recipes]
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(lambda s: _analyze_one(s, pair, args.grid_n, config), specs))
    return RunRecord("sweep", config.to_dict(), results, _exit_code(results), specs, pair)


def cmd_classical(args, config: Config) -> RunRecord:
    samples = read_samples_csv(args.csv)
    report = classical_relation(samples)
    result = {"kind": "classical", "source": str(args.csv), "status": "ok",
              "report": report.to_dict(), "discriminant": quadratic_discriminant_check(samples)}
    return RunRecord("classical", config.to_dict(), [result],
                     EXIT_OK if report.satisfied else EXIT_VIOLATED)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override it")
    common.add_argument("--hbar", type=float, help="value of hbar (default 1)")
    common.add_argument("--grid-n", type=int, help="grid points (default from config per topology)")
    common.add_argument("--output", choices=("json", "csv", "human"), help="report format")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--deterministic", action="store_true", help="omit timestamps")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="quncertainty", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("analyze", parents=[common], help="evaluate every uncertainty bound for a pair")
    p.add_argument("--state", required=True)
    p.add_argument("--pair", required=True)
    p = sub.add_parser("domain-check", parents=[common], help="diagnose domain membership")
    p.add_argument("--state", required=True)
    p.add_argument("--operator", required=True)
    p.add_argument("--refinements", type=int, default=None)
    p = sub.add_parser("sweep", parents=[common], help="analyze a family over parameter ranges")
    p.add_argument("--state", required=True, help="base state spec")
    p.add_argument("--range", action="append", required=True,
                   help="key=start:stop:step (inclusive) or key=v1;v2; repeatable")
    p.add_argument("--pair", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p = sub.add_parser("classical", parents=[common], help="classical relation from a CSV of samples")
    p.add_argument("csv")
    sub.add_parser("version", help="print the version")
    return parser


COMMANDS = {"analyze": cmd_analyze, "domain-check": cmd_domain_check, "sweep": cmd_sweep,
            "classical": cmd_classical}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "version":
        print(__version__)
        return EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args)
        started = None if args.deterministic else now()
        record = COMMANDS[args.command](args, config)
        if not args.deterministic:
            record.started, record.finished = started, now()
    except (QuncertaintyError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    fmt = config.output
    if fmt == "csv":
        text = sweep_table(record)
    elif fmt == "human":
        text = render_human(record)
    else:
        text = emit(record)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return record.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
