"""Classical statistics: population moments and the relation da * db >= |cov(a, b)|.

Moments are expectations under the (weighted) empirical distribution, so no
Bessel correction is applied.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import SpecParseError, StructuralError


@dataclass(frozen=True, eq=False)
class SampleSet:
    a: np.ndarray
    b: np.ndarray
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.ndim != 1 or a.shape != b.shape:
            raise StructuralError("a and b must be 1-D arrays of equal length")
        if a.size < 2:
            raise StructuralError("need at least two observations")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise StructuralError("observations must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != a.shape or np.any(w < 0) or not np.all(np.isfinite(w)):
                raise StructuralError("weights must be nonnegative, finite and match the samples")
            if abs(w.sum() - 1.0) > 1e-12:
                raise StructuralError(f"weights must sum to 1, got {w.sum()!r}")
            object.__setattr__(self, "weights", w)

    @classmethod
    def from_pairs(cls, pairs, weights=None) -> "SampleSet":
        arr = np.asarray(pairs, dtype=float)
        return cls(arr[:, 0], arr[:, 1], weights)

    @property
    def probabilities(self) -> np.ndarray:
        if self.weights is None:
            return np.full(self.a.size, 1.0 / self.a.size)
        return self.weights

    def swapped(self) -> "SampleSet":
        return SampleSet(self.b, self.a, self.weights)


@dataclass(frozen=True)
class Moments:
    mean_a: float
    mean_b: float
    delta_a: float
    delta_b: float
    sigma_ab: float


def classical_moments(s: SampleSet) -> Moments:
    p = s.probabilities
    mean_a = float(p @ s.a)
    mean_b = float(p @ s.b)
    a_bar = s.a - mean_a
    b_bar = s.b - mean_b
    return Moments(mean_a, mean_b, math.sqrt(float(p @ a_bar ** 2)), math.sqrt(float(p @ b_bar ** 2)),
                   float(p @ (a_bar * b_bar)))


@dataclass(frozen=True)
class ClassicalReport:
    moments: Moments
    lhs: float
    rhs: float
    satisfied: bool
    equality: bool
    # a_bar + lam * b_bar = 0 when equality holds
    lam: Optional[float] = None
    residual: Optional[float] = None

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in ("lhs", "rhs", "satisfied", "equality", "lam", "residual")}
        out["moments"] = dict(self.moments.__dict__)
        return out


def classical_relation(s: SampleSet, rel_tol: float = 1e-10) -> ClassicalReport:
    m = classical_moments(s)
    lhs = m.delta_a * m.delta_b
    rhs = abs(m.sigma_ab)
    p = s.probabilities
    a_bar = s.a - m.mean_a
    b_bar = s.b - m.mean_b
    # decide on sqrt(p)-weighted deviations scaled to unit max, so extreme
    # magnitudes in values or weights cannot underflow the comparison
    ua, ub = np.sqrt(p) * a_bar, np.sqrt(p) * b_bar
    ua = ua / (np.max(np.abs(ua)) or 1.0)
    ub = ub / (np.max(np.abs(ub)) or 1.0)
    lhs_u = float(np.linalg.norm(ua) * np.linalg.norm(ub))
    rhs_u = abs(float(ua @ ub))
    satisfied = lhs_u - rhs_u >= -1e-12 * lhs_u
    equality = abs(lhs_u - rhs_u) <= rel_tol * lhs_u or lhs_u == 0.0
    lam = residual = None
    if equality:
        if m.delta_b > 0:
            # weighted least squares for a_bar = -lam * b_bar
            lam = -float(p @ (a_bar * b_bar)) / float(p @ b_bar ** 2)
        else:
            lam = 0.0
        residual = math.sqrt(float(p @ (a_bar + lam * b_bar) ** 2))
    return ClassicalReport(m, lhs, rhs, bool(satisfied), bool(equality), lam, residual)


def quadratic_discriminant_check(s: SampleSet, lambdas=None, tol: float = 1e-12) -> dict:
    """<(a_bar + lam b_bar)^2> on a grid and the discriminant 4 cov^2 - 4 da^2 db^2."""
    if lambdas is None:
        pos = np.geomspace(1e-3, 1e3, 41)
        lambdas = np.concatenate([-pos[::-1], [0.0], pos])
    lambdas = np.asarray(lambdas, dtype=float)
    m = classical_moments(s)
    p = s.probabilities
    a_bar = s.a - m.mean_a
    b_bar = s.b - m.mean_b
    values = ((a_bar[None, :] + lambdas[:, None] * b_bar[None, :]) ** 2) @ p
    scale = max(m.delta_a ** 2 * m.delta_b ** 2, 1e-300)
    discriminant = 4.0 * m.sigma_ab ** 2 - 4.0 * m.delta_a ** 2 * m.delta_b ** 2
    return {
        "worst_value": float(values.min()),
        "discriminant": float(discriminant),
        "nonnegative": bool(values.min() >= -tol),
        "discriminant_ok": bool(discriminant <= tol * 4.0 * scale),
    }


def read_samples_csv(path) -> SampleSet:
    """Columns a, b[, weight]; an optional header line is skipped.

    Raises :class:`SpecParseError` listing every malformed line.
    """
    rows, weights, bad = [], [], []
    with open(Path(path), newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            cells = [c.strip() for c in row]
            if not any(cells):
                continue
            try:
                values = [float(c) for c in cells]
            except ValueError:
                if lineno == 1:
                    continue
                bad.append(lineno)
                continue
            if len(values) not in (2, 3):
                bad.append(lineno)
                continue
            rows.append(values[:2])
            weights.append(values[2] if len(values) == 3 else None)
    if bad:
        raise SpecParseError(f"{path}: malformed rows at lines {', '.join(map(str, bad))}")
    if len(rows) < 2:
        raise SpecParseError(f"{path}: need at least two rows")
    has_w = [w is not None for w in weights]
    if any(has_w) and not all(has_w):
        raise SpecParseError(f"{path}: weight column present on some rows only")
    return SampleSet.from_pairs(rows, np.array(weights, dtype=float) if all(has_w) else None)
