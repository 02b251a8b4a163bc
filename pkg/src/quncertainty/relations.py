"""Uncertainty inequalities with explicit applicability gating.

Three bounds are evaluated for a pair (A, B) and a state psi:

``modified``    sqrt(cov(A,B)^2 + Im<A psi, B psi>^2); needs psi in D(A) and D(B)
``commutator``  sqrt(cov(A,B)^2 + (i<[A,B]>)^2 / 4); also needs D(AB) and D(BA)
``standard``    |i<[A,B]>| / 2; same requirement as ``commutator``

A bound whose domain requirement fails is reported as inapplicable and is
never given a number.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import StructuralError
from .grid import GridTopology, Kind, WaveFunction
from .operators import OperatorSpec, angle, angular_momentum, momentum, position
from .stats import StatReport, centered_images, covariance, require_domain, require_normalized, stat_report

APPLIES = "Applies"


def inapplicable(reason) -> str:
    return f"InapplicableDomain({getattr(reason, 'value', reason)})"


@dataclass(frozen=True)
class TruncationCheck:
    edge_term: float
    widened_edge_term: Optional[float]
    widenings: int
    suspect: bool

    def to_dict(self) -> dict:
        return {"edge_term": self.edge_term, "widened_edge_term": self.widened_edge_term,
                "widenings": self.widenings, "suspect": self.suspect}


@dataclass(frozen=True)
class RelationReport:
    stats: StatReport
    lhs: float
    modified_bound: float
    commutator_bound: Optional[float]
    standard_bound: Optional[float]
    applicability: dict
    satisfied: dict
    margins: dict
    tolerance_used: float
    collinearity_residual: Optional[float] = None
    truncation: Optional[TruncationCheck] = None
    n_points: int = 0
    step: float = 0.0

    @property
    def all_satisfied(self) -> bool:
        return all(self.satisfied.values())

    def to_dict(self) -> dict:
        return {
            "stats": self.stats.to_dict(),
            "lhs": self.lhs,
            "modified_bound": self.modified_bound,
            "commutator_bound": self.commutator_bound,
            "standard_bound": self.standard_bound,
            "applicability": dict(self.applicability),
            "satisfied": dict(self.satisfied),
            "margins": dict(self.margins),
            "tolerance_used": self.tolerance_used,
            "collinearity_residual": self.collinearity_residual,
            "truncation": None if self.truncation is None else self.truncation.to_dict(),
            "n_points": self.n_points,
            "step": self.step,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RelationReport":
        data = dict(data)
        data["stats"] = StatReport.from_dict(data["stats"])
        if data.get("truncation") is not None:
            data["truncation"] = TruncationCheck(**data["truncation"])
        return cls(**data)


def _collinearity(a_bar: np.ndarray, b_bar: np.ndarray, weights: np.ndarray) -> float:
    """sin of the angle between the centered images; 0 means Schwarz equality."""
    na = float(np.sum(weights * np.abs(a_bar) ** 2))
    nb = float(np.sum(weights * np.abs(b_bar) ** 2))
    if na == 0.0 or nb == 0.0:
        return 0.0
    overlap = abs(np.sum(weights * np.conj(a_bar) * b_bar)) ** 2
    return math.sqrt(max(0.0, 1.0 - overlap / (na * nb)))


def check_truncation(psi: WaveFunction, config: Config = DEFAULT_CONFIG) -> TruncationCheck:
    """Size of the endpoint term x |psi(x)|^2 on a line grid.

    When the edge term is above threshold and the state can be re-evaluated,
    the box is doubled (same step) up to ``max_widenings`` times to see whether
    the term dies out.  The evaluation grid itself is left alone.
    """
    def edge(state):
        x = state.coordinates
        a = state.amplitudes
        return float(max(abs(x[0]) * abs(a[0]) ** 2, abs(x[-1]) * abs(a[-1]) ** 2))

    first = edge(psi)
    if first < config.truncation_threshold:
        return TruncationCheck(first, None, 0, False)
    if psi.resampler is None:
        return TruncationCheck(first, None, 0, True)
    topo = psi.topology
    current = None
    for k in range(1, config.max_widenings + 1):
        half = 0.5 * (topo.x_max - topo.x_min) * 2 ** k
        center = 0.5 * (topo.x_max + topo.x_min)
        wide = GridTopology.line(center - half, center + half, (topo.n_points - 1) * 2 ** k + 1)
        current = edge(psi.resample(wide))
        if current < config.truncation_threshold:
            return TruncationCheck(first, current, k, False)
    return TruncationCheck(first, current, config.max_widenings, True)


def _finish(stats: StatReport, bounds: dict, applicability: dict, psi: WaveFunction,
            a: OperatorSpec, b: OperatorSpec, config: Config) -> RelationReport:
    tol = config.tol(psi.topology.step)
    lhs = stats.delta_a * stats.delta_b
    margins = {k: lhs - v for k, v in bounds.items() if v is not None}
    satisfied = {k: m >= -tol for k, m in margins.items()}
    residual = None
    if abs(margins["modified"]) <= tol:
        a_bar, b_bar, _, _ = centered_images(a, b, psi)
        residual = _collinearity(a_bar, b_bar, psi.topology.weights)
    trunc = check_truncation(psi, config) if psi.topology.kind is Kind.LINE else None
    return RelationReport(stats, lhs, bounds["modified"], bounds.get("commutator"),
                          bounds.get("standard"), applicability, satisfied, margins, tol,
                          residual, trunc, psi.topology.n_points, psi.topology.step)


def evaluate_modified(a: OperatorSpec, b: OperatorSpec, psi: WaveFunction,
                      config: Config = DEFAULT_CONFIG) -> RelationReport:
    """dA dB >= sqrt(cov^2 + Im<A psi, B psi>^2), valid on D(A) and D(B).

    Raises :class:`InapplicableError` when psi is outside D(A) or D(B).
    """
    stats = stat_report(a, b, psi, config)
    bound = math.hypot(stats.covariance, stats.imag_cross)
    return _finish(stats, {"modified": bound}, {"modified": APPLIES}, psi, a, b, config)


def evaluate_commutator_form(a: OperatorSpec, b: OperatorSpec, psi: WaveFunction,
                             config: Config = DEFAULT_CONFIG) -> RelationReport:
    """Adds the commutator and standard bounds when psi is in D(AB) and D(BA).

    If either product domain fails the report carries the modified bound only,
    with both commutator bounds marked inapplicable and left empty.
    """
    stats = stat_report(a, b, psi, config)
    bounds = {"modified": math.hypot(stats.covariance, stats.imag_cross)}
    applicability = {"modified": APPLIES}
    if stats.commutator_expectation is None:
        failing = stats.domain_ab if not stats.domain_ab.ok else stats.domain_ba
        applicability["commutator"] = applicability["standard"] = inapplicable(failing.reason)
    else:
        k = 0.5 * stats.commutator_expectation
        bounds["commutator"] = math.hypot(stats.covariance, k)
        bounds["standard"] = abs(k)
        applicability["commutator"] = applicability["standard"] = APPLIES
    return _finish(stats, bounds, applicability, psi, a, b, config)


def _require_kind(psi: WaveFunction, kind: Kind, what: str) -> None:
    if psi.topology.kind is not kind:
        raise StructuralError(f"{what} needs a {kind.value} state")


def phi_lz_imag_closed_form(psi: WaveFunction, hbar: float = 1.0) -> float:
    """(hbar/2) (1 - 2 pi |psi(2 pi)|^2), the boundary form of Im<phi psi, Lz psi>."""
    _require_kind(psi, Kind.CIRCLE, "the phi-Lz boundary term")
    return 0.5 * hbar * (1.0 - 2.0 * np.pi * abs(psi.amplitudes[-1]) ** 2)


def phi_Lz_bound(psi: WaveFunction, config: Config = DEFAULT_CONFIG) -> float:
    """Right side of the phi-Lz relation with the imaginary term in closed form."""
    _require_kind(psi, Kind.CIRCLE, "phi_Lz_bound")
    phi, lz = angle(config.hbar), angular_momentum(config.hbar)
    require_normalized(psi, config)
    require_domain(phi, psi, config)
    require_domain(lz, psi, config)
    sigma = covariance(phi, lz, psi, config, check=False)
    return math.hypot(sigma, phi_lz_imag_closed_form(psi, config.hbar))


def xp_boundary_term(psi: WaveFunction, config: Config = DEFAULT_CONFIG) -> float:
    """(hbar/2)(1 - [x |psi|^2] between the grid ends), the boundary form of Im<x psi, p psi>."""
    _require_kind(psi, Kind.LINE, "xp_boundary_term")
    require_normalized(psi, config)
    require_domain(position(config.hbar), psi, config)
    require_domain(momentum(config.hbar), psi, config)
    x = psi.coordinates
    dens = np.abs(psi.amplitudes) ** 2
    return 0.5 * config.hbar * (1.0 - (x[-1] * dens[-1] - x[0] * dens[0]))


def default_lambda_grid() -> np.ndarray:
    pos = np.geomspace(1e-3, 1e3, 41)
    return np.concatenate([-pos[::-1], [0.0], pos])


def default_theta_grid() -> np.ndarray:
    return np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)


@dataclass(frozen=True)
class QuadraticFormReport:
    worst_grid_value: float
    grid_nonnegative: bool
    half_pi_minimum: float
    half_pi_predicted: float
    global_minimum: float
    global_predicted: float
    constant_in_lambda: bool
    tolerance_used: float
    points_checked: int = field(default=0)

    @property
    def ok(self) -> bool:
        return (self.grid_nonnegative
                and abs(self.half_pi_minimum - self.half_pi_predicted) <= self.tolerance_used
                and abs(self.global_minimum - self.global_predicted) <= self.tolerance_used)

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["ok"] = self.ok
        return out


def _form_values(a_bar, b_bar, weights, lambdas, theta, chunk: int = 16) -> np.ndarray:
    out = np.empty(len(lambdas))
    rotated = np.exp(1j * theta) * b_bar
    for start in range(0, len(lambdas), chunk):
        lam = np.asarray(lambdas[start:start + chunk])[:, None]
        out[start:start + chunk] = (np.abs(a_bar[None, :] + lam * rotated[None, :]) ** 2) @ weights
    return out


def quadratic_form_check(a: OperatorSpec, b: OperatorSpec, psi: WaveFunction,
                         lambdas: Optional[Sequence[float]] = None,
                         thetas: Optional[Sequence[float]] = None,
                         config: Config = DEFAULT_CONFIG) -> QuadraticFormReport:
    """Evaluate ||(A_bar + lam e^{i theta} B_bar) psi||^2 on a (lam, theta) grid.

    Besides nonnegativity on the grid, the minimum over lam is compared with
    its closed form: at theta = pi/2 it is dA^2 - Im<A_bar psi, B_bar psi>^2 / dB^2,
    and over all theta it is dA^2 - |<A_bar psi, B_bar psi>|^2 / dB^2.  The
    exact minimizers are added to the grid so that the comparison is sharp.
    """
    require_normalized(psi, config)
    require_domain(a, psi, config)
    require_domain(b, psi, config)
    lambdas = default_lambda_grid() if lambdas is None else np.asarray(lambdas, dtype=float)
    thetas = default_theta_grid() if thetas is None else np.asarray(thetas, dtype=float)
    a_bar, b_bar, _, _ = centered_images(a, b, psi)
    w = psi.topology.weights
    da2 = float(np.sum(w * np.abs(a_bar) ** 2))
    db2 = float(np.sum(w * np.abs(b_bar) ** 2))
    overlap = complex(np.sum(w * np.conj(a_bar) * b_bar))
    tol = config.tol(psi.topology.step)

    worst = math.inf
    for theta in thetas:
        worst = min(worst, float(np.min(_form_values(a_bar, b_bar, w, lambdas, theta))))

    constant = math.sqrt(db2) <= tol
    if constant:
        predicted_half = predicted_global = da2
        half_min = float(np.min(_form_values(a_bar, b_bar, w, lambdas, 0.5 * np.pi)))
        global_min = worst
    else:
        predicted_half = da2 - overlap.imag ** 2 / db2
        predicted_global = da2 - abs(overlap) ** 2 / db2
        lam_half = overlap.imag / db2
        half_min = float(np.min(_form_values(a_bar, b_bar, w, np.append(lambdas, lam_half), 0.5 * np.pi)))
        theta_star = np.pi - np.angle(overlap)
        global_min = min(worst, float(_form_values(a_bar, b_bar, w, [abs(overlap) / db2], theta_star)[0]))
    return QuadraticFormReport(worst, worst >= -1e-12, half_min, predicted_half, global_min,
                               predicted_global, constant, tol, len(lambdas) * len(thetas))
