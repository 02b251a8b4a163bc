"""Run records: what was computed, with which settings, serialized as JSON.

JSON is canonical.  CSV is produced for sweep tables only and the human
format is a rendering; neither is parsed back.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

from . import __version__

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATED = 2
EXIT_INAPPLICABLE = 3


@dataclass
class RunRecord:
    command: str
    config: dict
    results: list
    exit_code: int = EXIT_OK
    recipes: list = field(default_factory=list)
    operators: list = field(default_factory=list)
    version: str = __version__
    started: Optional[str] = None
    finished: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "version": self.version,
            "config": self.config,
            "recipes": list(self.recipes),
            "operators": list(self.operators),
            "results": list(self.results),
            "exit_code": self.exit_code,
            "started": self.started,
            "finished": self.finished,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        return cls(
            command=data["command"],
            config=data["config"],
            results=data["results"],
            exit_code=data["exit_code"],
            recipes=data.get("recipes", []),
            operators=data.get("operators", []),
            version=data["version"],
            started=data.get("started"),
            finished=data.get("finished"),
        )


def now() -> str:
    return datetime.now(timezone.utc).isoformat()


def emit(record: RunRecord) -> str:
    return json.dumps(record.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def parse(text: str) -> RunRecord:
    return RunRecord.from_dict(json.loads(text))


def _flatten(prefix: str, value, out: dict) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, list):
        out[prefix] = json.dumps(value)
    else:
        out[prefix] = value


def sweep_table(record: RunRecord) -> str:
    """One CSV row per result with nested fields flattened to dotted columns."""
    rows = []
    for result in record.results:
        flat = {}
        _flatten("", result, flat)
        rows.append(flat)
    columns = []
    for row in rows:
        columns.extend(c for c in row if c not in columns)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return "-" if value is None else str(value)


def render_human(record: RunRecord) -> str:
    lines = [f"{record.command} (quncertainty {record.version}), exit code {record.exit_code}"]
    for result in record.results:
        lines.append("")
        lines.append(f"state {result.get('state', '-')}  pair {result.get('pair', '-')}")
        kind = result.get("kind")
        if kind == "relation" and result.get("report"):
            rep = result["report"]
            st = rep["stats"]
            lines.append(f"  <A> = {_fmt(st['mean_a'])}   <B> = {_fmt(st['mean_b'])}")
            lines.append(f"  dA = {_fmt(st['delta_a'])}   dB = {_fmt(st['delta_b'])}   dA*dB = {_fmt(rep['lhs'])}")
            lines.append(f"  cov = {_fmt(st['covariance'])}   Im<A psi, B psi> = {_fmt(st['imag_cross'])}")
            for name in ("modified", "commutator", "standard"):
                status = rep["applicability"].get(name)
                if status is None:
                    continue
                bound = rep.get(f"{name}_bound")
                sat = rep["satisfied"].get(name)
                lines.append(f"  {name:<10} bound {_fmt(bound):>16}  {status}"
                             + ("" if sat is None else f"  satisfied={sat}"))
        elif "domain_report" in result:
            dr = result["domain_report"]
            lines.append(f"  D({dr['operator']}): {dr['in_domain']} / {dr['reason']}")
            for n, v in dr["derivative_norm_sequence"]:
                lines.append(f"    n={n:<8d} ||A psi|| = {v:.10g}")
        elif kind == "classical":
            rep = result["report"]
            lines.append(f"  da*db = {_fmt(rep['lhs'])} >= |cov| = {_fmt(rep['rhs'])}  "
                         f"satisfied={rep['satisfied']} equality={rep['equality']}")
        if result.get("status") and result["status"] != "ok":
            lines.append(f"  status: {result['status']}")
    return "\n".join(lines) + "\n"
