"""Tolerance policy and run configuration."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class Config:
    hbar: float = 1.0
    circle_n: int = 4097
    line_n: int = 16385
    norm_tol: float = 1e-9
    # relative to max(1, |<A>|)
    herm_tol: float = 1e-8
    # boundary_tol = boundary_tol_factor * h
    boundary_tol_factor: float = 10.0
    divergence_ratio: float = 0.9
    refinements: int = 4
    # relation tolerance tol(h) = relation_c * h**2 + relation_abs
    relation_c: float = 10.0
    relation_abs: float = 1e-10
    truncation_threshold: float = 1e-12
    max_widenings: int = 3
    oracle_cap: int = 2049
    output: str = "json"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("norm_tol", "herm_tol", "boundary_tol_factor", "divergence_ratio",
                     "relation_c", "relation_abs", "truncation_threshold", "hbar"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.circle_n < 3 or self.line_n < 3:
            raise ValueError("grid sizes must be >= 3")
        if self.refinements < 2:
            raise ValueError("refinements must be >= 2")
        if self.output not in ("json", "csv", "human"):
            raise ValueError(f"unknown output format {self.output!r}")

    def tol(self, h: float) -> float:
        return self.relation_c * h * h + self.relation_abs

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> "Config":
        return cls.from_dict(json.loads(Path(path).read_text()))


DEFAULT_CONFIG = Config()
