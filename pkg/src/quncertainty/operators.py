"""Observables on grid states and executable operator-domain diagnostics.

``apply`` is purely mechanical: it never asks whether the result makes sense.
``domain_check`` is the gatekeeper.  It looks for the two failure modes that
can be seen on a grid:

* a derivative operator on the circle applied to a state whose end values
  differ in magnitude (no phase ``alpha`` with ``psi(2pi) = e^{i alpha} psi(0)``
  exists, so the operator is not Hermitian there);
* an image ``A psi`` whose squared norm keeps growing under grid refinement
  instead of settling down (not square integrable in the continuum).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import StructuralError
from .grid import GridTopology, Kind, WaveFunction, norm


class OpKind(str, enum.Enum):
    POSITION = "position"
    MOMENTUM = "momentum"
    ANGLE = "angle"
    ANGULAR_MOMENTUM = "angular_momentum"
    MULTIPLY = "multiply"
    DENSE = "dense"


DERIVATIVE_KINDS = (OpKind.MOMENTUM, OpKind.ANGULAR_MOMENTUM)
MULTIPLICATION_KINDS = (OpKind.POSITION, OpKind.ANGLE, OpKind.MULTIPLY)

SampledFunction = Union[Callable[[np.ndarray], np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    """Symbolic description of an observable.

    ``function`` is used by MULTIPLY (a callable of the grid coordinate, or a
    fixed array of samples) and ``matrix`` by DENSE.
    """

    kind: OpKind
    hbar: float = 1.0
    function: Optional[SampledFunction] = field(default=None, repr=False)
    matrix: Optional[np.ndarray] = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", OpKind(self.kind))
        if not self.hbar > 0:
            raise StructuralError("hbar must be > 0")
        if self.kind is OpKind.MULTIPLY and self.function is None:
            raise StructuralError("multiplication operator needs a function")
        if self.kind is OpKind.DENSE:
            m = np.asarray(self.matrix, dtype=np.complex128)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise StructuralError(f"dense operator must be square, got shape {m.shape}")
            object.__setattr__(self, "matrix", m)
        if not self.name:
            object.__setattr__(self, "name", self.kind.value)

    @property
    def is_derivative(self) -> bool:
        return self.kind in DERIVATIVE_KINDS

    def check_topology(self, topology: GridTopology) -> None:
        if self.kind is OpKind.MOMENTUM and topology.kind is not Kind.LINE:
            raise StructuralError("momentum is defined on line grids only")
        if self.kind in (OpKind.ANGLE, OpKind.ANGULAR_MOMENTUM) and topology.kind is not Kind.CIRCLE:
            raise StructuralError(f"{self.kind.value} is defined on circle grids only")
        if self.kind is OpKind.MULTIPLY and not callable(self.function):
            if np.shape(self.function) != (topology.n_points,):
                raise StructuralError("sampled function length does not match the grid")
        if self.kind is OpKind.DENSE and self.matrix.shape[0] != topology.n_points:
            raise StructuralError("dense operator side does not match the grid")

    def samples(self, topology: GridTopology) -> np.ndarray:
        """Multiplier values for the multiplication kinds."""
        if self.kind in (OpKind.POSITION, OpKind.ANGLE):
            return topology.coordinates
        if self.kind is OpKind.MULTIPLY:
            if callable(self.function):
                values = np.asarray(self.function(topology.coordinates), dtype=float)
                return np.broadcast_to(values, (topology.n_points,)).copy()
            return np.asarray(self.function, dtype=float)
        raise StructuralError(f"{self.kind.value} is not a multiplication operator")

    def shifted(self, constant: float) -> "OperatorSpec":
        """``A + constant * identity`` as a multiplication operator."""
        if self.kind not in MULTIPLICATION_KINDS or not (callable(self.function) or self.function is None):
            raise StructuralError("only analytic multiplication operators can be shifted")
        base = self
        return multiply(lambda x: base.samples_at(x) + constant, hbar=self.hbar,
                        name=f"{self.name}+{constant:g}")

    def samples_at(self, x: np.ndarray) -> np.ndarray:
        if self.kind in (OpKind.POSITION, OpKind.ANGLE):
            return np.asarray(x, dtype=float)
        return np.asarray(self.function(x), dtype=float)


def position(hbar: float = 1.0) -> OperatorSpec:
    return OperatorSpec(OpKind.POSITION, hbar, name="x")


def momentum(hbar: float = 1.0) -> OperatorSpec:
    return OperatorSpec(OpKind.MOMENTUM, hbar, name="p")


def angle(hbar: float = 1.0) -> OperatorSpec:
    return OperatorSpec(OpKind.ANGLE, hbar, name="phi")


def angular_momentum(hbar: float = 1.0) -> OperatorSpec:
    return OperatorSpec(OpKind.ANGULAR_MOMENTUM, hbar, name="Lz")


def multiply(function: SampledFunction, hbar: float = 1.0, name: str = "f") -> OperatorSpec:
    return OperatorSpec(OpKind.MULTIPLY, hbar, function=function, name=name)


def dense(matrix, hbar: float = 1.0, name: str = "M") -> OperatorSpec:
    return OperatorSpec(OpKind.DENSE, hbar, matrix=matrix, name=name)


def derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Second-order central differences, one-sided second order at both ends."""
    d = np.empty_like(values)
    d[1:-1] = (values[2:] - values[:-2]) / (2.0 * h)
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
    d[-1] = (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * h)
    return d


def _apply_samples(op: OperatorSpec, topology: GridTopology, amps: np.ndarray) -> np.ndarray:
    if op.is_derivative:
        return -1j * op.hbar * derivative(amps, topology.step)
    if op.kind is OpKind.DENSE:
        return op.matrix @ amps
    return op.samples(topology) * amps


def apply(op: OperatorSpec, psi: WaveFunction) -> WaveFunction:
    """``A psi`` on the same grid, with no domain check."""
    op.check_topology(psi.topology)
    out = _apply_samples(op, psi.topology, psi.amplitudes)
    resampler = None
    if psi.resampler is not None and op.kind is not OpKind.DENSE and (
            op.kind is not OpKind.MULTIPLY or callable(op.function)):
        resampler = lambda topology: apply(op, psi.resample(topology))  # noqa: E731
    label = f"{op.name}({psi.label})" if psi.label else op.name
    return WaveFunction(psi.topology, out, resampler, label)


class Membership(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    MARGINAL = "Marginal"


class Reason(str, enum.Enum):
    BOUNDARY_CONDITION_VIOLATED = "BoundaryConditionViolated"
    DERIVATIVE_NOT_SQUARE_INTEGRABLE = "DerivativeNotSquareIntegrable"
    NOT_DIFFERENTIABLE = "NotDifferentiable"
    OK = "OK"


@dataclass(frozen=True)
class DomainReport:
    operator: str
    in_domain: Membership
    reason: Reason
    boundary_magnitude_mismatch: Optional[float] = None
    boundary_tol: Optional[float] = None
    derivative_norm_sequence: tuple = ()
    divergence_flag: bool = False

    def __post_init__(self):
        if self.divergence_flag and self.in_domain is Membership.YES:
            raise ValueError("a diverging sequence cannot certify domain membership")

    @property
    def ok(self) -> bool:
        return self.in_domain is Membership.YES

    def to_dict(self) -> dict:
        return {
            "operator": self.operator,
            "in_domain": self.in_domain.value,
            "reason": self.reason.value,
            "boundary_magnitude_mismatch": self.boundary_magnitude_mismatch,
            "boundary_tol": self.boundary_tol,
            "derivative_norm_sequence": [[int(n), float(v)] for n, v in self.derivative_norm_sequence],
            "divergence_flag": self.divergence_flag,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DomainReport":
        return cls(
            operator=data["operator"],
            in_domain=Membership(data["in_domain"]),
            reason=Reason(data["reason"]),
            boundary_magnitude_mismatch=data.get("boundary_magnitude_mismatch"),
            boundary_tol=data.get("boundary_tol"),
            derivative_norm_sequence=tuple((int(n), float(v)) for n, v in data.get("derivative_norm_sequence", ())),
            divergence_flag=bool(data.get("divergence_flag", False)),
        )


def _classify_increments(squares, ratio: float):
    """Cauchy test on successive increments of ||A psi||^2.

    Returns ``Membership.YES`` when each increment shrinks to at most ``ratio``
    of its predecessor (or is already at rounding level), ``NO`` when none does,
    ``MARGINAL`` otherwise.
    """
    squares = np.asarray(squares, dtype=float)
    if not np.all(np.isfinite(squares)):
        return Membership.NO
    scale = max(1.0, float(np.max(np.abs(squares))))
    floor = 1e-10 * scale
    inc = np.abs(np.diff(squares))
    verdicts = []
    for prev, cur in zip(inc[:-1], inc[1:]):
        verdicts.append(cur <= floor or cur <= ratio * prev)
    if not verdicts:
        return Membership.YES if inc.size == 0 or inc[-1] <= floor else Membership.MARGINAL
    if all(verdicts):
        return Membership.YES
    if not any(verdicts):
        return Membership.NO
    # a failure only before the last step still settles into convergence
    if verdicts[-1] and inc[-1] <= floor:
        return Membership.YES
    return Membership.MARGINAL


def domain_check(op: OperatorSpec, psi: WaveFunction, refinements: Optional[int] = None,
                 config: Config = DEFAULT_CONFIG) -> DomainReport:
    """Diagnose whether ``psi`` lies in the domain of ``op``.

    Bounded operators (multiplication on a finite grid, dense matrices) accept
    every state.  Derivative operators get the circle boundary test first and
    then the refinement sequence of ||A psi||.
    """
    refinements = config.refinements if refinements is None else refinements
    if refinements < 2:
        raise ValueError("refinements must be >= 2")
    op.check_topology(psi.topology)
    n0 = psi.topology.n_points

    if not op.is_derivative:
        return DomainReport(op.name, Membership.YES, Reason.OK,
                            derivative_norm_sequence=((n0, norm(apply(op, psi))),))

    mismatch = tol = None
    if psi.topology.is_circle:
        amps = psi.amplitudes
        mismatch = float(abs(abs(amps[-1]) - abs(amps[0])))
        tol = config.boundary_tol_factor * psi.topology.step
        if mismatch > tol:
            return DomainReport(op.name, Membership.NO, Reason.BOUNDARY_CONDITION_VIOLATED,
                                mismatch, tol, ((n0, norm(apply(op, psi))),))

    states = [psi]
    for _ in range(refinements):
        states.append(states[-1].resample(states[-1].topology.refined(2)))
    sequence = tuple((s.topology.n_points, norm(apply(op, s))) for s in states)
    verdict = _classify_increments([v * v for _, v in sequence], config.divergence_ratio)
    if verdict is Membership.NO:
        return DomainReport(op.name, Membership.NO, Reason.DERIVATIVE_NOT_SQUARE_INTEGRABLE,
                            mismatch, tol, sequence, divergence_flag=True)
    if verdict is Membership.MARGINAL:
        return DomainReport(op.name, Membership.MARGINAL, Reason.DERIVATIVE_NOT_SQUARE_INTEGRABLE,
                            mismatch, tol, sequence)
    return DomainReport(op.name, Membership.YES, Reason.OK, mismatch, tol, sequence)


def product_report(outer: OperatorSpec, inner: OperatorSpec, psi: WaveFunction,
                   refinements: Optional[int] = None, config: Config = DEFAULT_CONFIG,
                   inner_report: Optional[DomainReport] = None) -> DomainReport:
    """Membership of ``psi`` in D(outer * inner): psi in D(inner) and inner psi in D(outer)."""
    first = inner_report or domain_check(inner, psi, refinements, config)
    label = f"{outer.name}*{inner.name}"
    report = first
    if first.ok:
        report = domain_check(outer, apply(inner, psi), refinements, config)
    return DomainReport(label, report.in_domain, report.reason, report.boundary_magnitude_mismatch,
                        report.boundary_tol, report.derivative_norm_sequence, report.divergence_flag)


def composite_domain_check(a: OperatorSpec, b: OperatorSpec, psi: WaveFunction,
                           refinements: Optional[int] = None,
                           config: Config = DEFAULT_CONFIG) -> tuple:
    """Reports for ``psi in D(AB)`` and ``psi in D(BA)``, in that order."""
    return (product_report(a, b, psi, refinements, config),
            product_report(b, a, psi, refinements, config))
