"""Expectation values, uncertainties and covariances valid on the largest domain.

The uncertainty is computed as the norm ``||(A - <A>) psi||`` and the
covariance as ``Re<A psi, B psi> - <A><B>``.  Both only need ``psi`` in the
domain of each single operator.  The textbook forms ``<A^2> - <A>^2`` and
``<(AB + BA)/2> - <A><B>`` need ``psi`` in D(A^2), D(AB) and D(BA) and are
never used here.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import InapplicableError, NotNormalizedError
from .grid import WaveFunction, inner_product, norm
from .operators import DomainReport, OperatorSpec, apply, domain_check, product_report

log = logging.getLogger(__name__)


def require_normalized(psi: WaveFunction, config: Config = DEFAULT_CONFIG) -> None:
    nrm = norm(psi)
    if abs(nrm - 1.0) > config.norm_tol:
        raise NotNormalizedError(f"state norm is {nrm!r}; normalize it first")


def require_domain(op: OperatorSpec, psi: WaveFunction, config: Config = DEFAULT_CONFIG) -> DomainReport:
    report = domain_check(op, psi, config=config)
    if not report.ok:
        raise InapplicableError(
            f"state is not in D({op.name}): {report.in_domain.value}/{report.reason.value}",
            report, op.name)
    return report


def _mean(op: OperatorSpec, psi: WaveFunction, image: WaveFunction):
    value = inner_product(psi, image)
    return value.real, value.imag


def expectation(op: OperatorSpec, psi: WaveFunction, config: Config = DEFAULT_CONFIG,
                check: bool = True) -> float:
    """Re <psi, A psi>.  The imaginary residual is logged when it exceeds herm_tol."""
    if check:
        require_normalized(psi, config)
        require_domain(op, psi, config)
    mean, residual = _mean(op, psi, apply(op, psi))
    if abs(residual) > config.herm_tol * max(1.0, abs(mean)):
        log.debug("<%s> has imaginary residual %.3e", op.name, residual)
    return mean


def uncertainty(op: OperatorSpec, psi: WaveFunction, config: Config = DEFAULT_CONFIG,
                check: bool = True) -> float:
    if check:
        require_normalized(psi, config)
        require_domain(op, psi, config)
    image = apply(op, psi)
    mean, _ = _mean(op, psi, image)
    return float(np.sqrt(np.sum(psi.topology.weights * np.abs(image.amplitudes - mean * psi.amplitudes) ** 2)))


def _cross(a, b, psi, config, check):
    if check:
        require_normalized(psi, config)
        require_domain(a, psi, config)
        require_domain(b, psi, config)
    image_a, image_b = apply(a, psi), apply(b, psi)
    mean_a, _ = _mean(a, psi, image_a)
    mean_b, _ = _mean(b, psi, image_b)
    return inner_product(image_a, image_b), mean_a, mean_b


def covariance(a: OperatorSpec, b: OperatorSpec, psi: WaveFunction,
               config: Config = DEFAULT_CONFIG, check: bool = True) -> float:
    cross, mean_a, mean_b = _cross(a, b, psi, config, check)
    return cross.real - mean_a * mean_b


def imag_cross(a: OperatorSpec, b: OperatorSpec, psi: WaveFunction,
               config: Config = DEFAULT_CONFIG, check: bool = True) -> float:
    """Im <A psi, B psi>, the term that separates the quantum from the classical relation."""
    cross, _, _ = _cross(a, b, psi, config, check)
    return cross.imag


def _commutator_value(a, b, psi) -> float:
    ab = apply(a, apply(b, psi)).amplitudes
    ba = apply(b, apply(a, psi)).amplitudes
    value = 1j * np.sum(psi.topology.weights * np.conj(psi.amplitudes) * (ab - ba))
    return float(value.real)


def commutator_expectation(a: OperatorSpec, b: OperatorSpec, psi: WaveFunction,
                           config: Config = DEFAULT_CONFIG) -> float:
    """i <psi, [A, B] psi>, a real number.

    Raises :class:`InapplicableError` unless ``psi`` is verified to lie in
    both D(AB) and D(BA).
    """
    require_normalized(psi, config)
    for report in (product_report(a, b, psi, config=config), product_report(b, a, psi, config=config)):
        if not report.ok:
            raise InapplicableError(
                f"state is not in D({report.operator}): {report.reason.value}", report, report.operator)
    return _commutator_value(a, b, psi)


@dataclass(frozen=True)
class StatReport:
    operator_a: str
    operator_b: str
    mean_a: float
    mean_b: float
    delta_a: float
    delta_b: float
    covariance: float
    imag_cross: float
    commutator_expectation: Optional[float]
    mean_residual_a: float
    mean_residual_b: float
    hermiticity_warning: bool
    domain_a: Optional[DomainReport] = None
    domain_b: Optional[DomainReport] = None
    domain_ab: Optional[DomainReport] = None
    domain_ba: Optional[DomainReport] = None

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in (
            "operator_a", "operator_b", "mean_a", "mean_b", "delta_a", "delta_b", "covariance",
            "imag_cross", "commutator_expectation", "mean_residual_a", "mean_residual_b",
            "hermiticity_warning")}
        for k in ("domain_a", "domain_b", "domain_ab", "domain_ba"):
            rep = getattr(self, k)
            out[k] = None if rep is None else rep.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "StatReport":
        data = dict(data)
        for k in ("domain_a", "domain_b", "domain_ab", "domain_ba"):
            if data.get(k) is not None:
                data[k] = DomainReport.from_dict(data[k])
        return cls(**data)


def centered_images(a: OperatorSpec, b: OperatorSpec, psi: WaveFunction):
    """(A - <A>) psi and (B - <B>) psi as amplitude arrays, plus the two means."""
    image_a, image_b = apply(a, psi), apply(b, psi)
    mean_a, _ = _mean(a, psi, image_a)
    mean_b, _ = _mean(b, psi, image_b)
    return (image_a.amplitudes - mean_a * psi.amplitudes,
            image_b.amplitudes - mean_b * psi.amplitudes, mean_a, mean_b)


def stat_report(a: OperatorSpec, b: OperatorSpec, psi: WaveFunction,
                config: Config = DEFAULT_CONFIG) -> StatReport:
    """All statistics for the pair, with the commutator only when D(AB) and D(BA) hold.

    Raises :class:`InapplicableError` when ``psi`` is outside D(A) or D(B).
    """
    require_normalized(psi, config)
    rep_a = require_domain(a, psi, config)
    rep_b = require_domain(b, psi, config)
    rep_ab = product_report(a, b, psi, config=config, inner_report=rep_b)
    rep_ba = product_report(b, a, psi, config=config, inner_report=rep_a)

    image_a, image_b = apply(a, psi), apply(b, psi)
    mean_a, res_a = _mean(a, psi, image_a)
    mean_b, res_b = _mean(b, psi, image_b)
    w = psi.topology.weights
    delta_a = float(np.sqrt(np.sum(w * np.abs(image_a.amplitudes - mean_a * psi.amplitudes) ** 2)))
    delta_b = float(np.sqrt(np.sum(w * np.abs(image_b.amplitudes - mean_b * psi.amplitudes) ** 2)))
    cross = inner_product(image_a, image_b)
    comm = _commutator_value(a, b, psi) if rep_ab.ok and rep_ba.ok else None
    warn = (abs(res_a) > config.herm_tol * max(1.0, abs(mean_a))
            or abs(res_b) > config.herm_tol * max(1.0, abs(mean_b)))
    if warn:
        log.debug("hermiticity residuals <%s>: %.3e, <%s>: %.3e", a.name, res_a, b.name, res_b)
    return StatReport(a.name, b.name, mean_a, mean_b, delta_a, delta_b,
                      cross.real - mean_a * mean_b, cross.imag, comm, res_a, res_b, warn,
                      rep_a, rep_b, rep_ab, rep_ba)
