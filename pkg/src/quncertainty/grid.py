"""Uniform 1-D grids, sampled wave functions and the trapezoid inner product.

Circle grids keep *both* endpoints phi = 0 and phi = 2*pi, so that a state's
values at the two ends of the angle interval can differ.  That distinction is
what the domain diagnostics in :mod:`quncertainty.operators` inspect.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DegenerateStateError, StructuralError

TWO_PI = 2.0 * np.pi


class Kind(str, enum.Enum):
    LINE = "line"
    CIRCLE = "circle"


@dataclass(frozen=True)
class GridTopology:
    """Uniform grid on a line segment or on the closed angle interval [0, 2*pi]."""

    kind: Kind
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise StructuralError(f"n_points must be an integer >= 3, got {self.n_points}")
        object.__setattr__(self, "n_points", int(self.n_points))
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)) or not self.x_min < self.x_max:
            raise StructuralError(f"need finite x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.kind is Kind.CIRCLE and (self.x_min != 0.0 or self.x_max != TWO_PI):
            raise StructuralError("circle grids always span [0, 2*pi]")

    @classmethod
    def line(cls, x_min: float, x_max: float, n_points: int) -> "GridTopology":
        return cls(Kind.LINE, float(x_min), float(x_max), n_points)

    @classmethod
    def circle(cls, n_points: int) -> "GridTopology":
        return cls(Kind.CIRCLE, 0.0, TWO_PI, n_points)

    @property
    def is_circle(self) -> bool:
        return self.kind is Kind.CIRCLE

    @property
    def step(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def coordinates(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def weights(self) -> np.ndarray:
        """Composite trapezoid quadrature weights."""
        w = np.full(self.n_points, self.step)
        w[0] = w[-1] = 0.5 * self.step
        return w

    def refined(self, factor: int) -> "GridTopology":
        if int(factor) != factor or factor < 1:
            raise StructuralError(f"refinement factor must be a positive integer, got {factor}")
        return GridTopology(self.kind, self.x_min, self.x_max, (self.n_points - 1) * int(factor) + 1)

    def shifted(self, delta: float) -> "GridTopology":
        if self.is_circle:
            raise StructuralError("circle grids cannot be shifted")
        return GridTopology.line(self.x_min + delta, self.x_max + delta, self.n_points)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "x_min": self.x_min, "x_max": self.x_max,
                "n_points": self.n_points}

    @classmethod
    def from_dict(cls, data: dict) -> "GridTopology":
        return cls(Kind(data["kind"]), float(data["x_min"]), float(data["x_max"]), int(data["n_points"]))


Resampler = Callable[[GridTopology], "WaveFunction"]


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex amplitudes sampled on a :class:`GridTopology`.

    ``resampler`` (optional) rebuilds the same state on another grid exactly;
    states from the analytic library and states derived from them by applying
    operators carry one.  Without it :meth:`resample` falls back to cubic
    spline interpolation.
    """

    topology: GridTopology
    amplitudes: np.ndarray
    resampler: Optional[Resampler] = field(default=None, repr=False)
    label: str = ""

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] != self.topology.n_points:
            raise StructuralError(
                f"expected {self.topology.n_points} amplitudes, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise StructuralError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def coordinates(self) -> np.ndarray:
        return self.topology.coordinates

    @property
    def exact_resampling(self) -> bool:
        return self.resampler is not None

    def with_amplitudes(self, amplitudes, resampler: Optional[Resampler] = None,
                        label: Optional[str] = None) -> "WaveFunction":
        return WaveFunction(self.topology, amplitudes, resampler,
                            self.label if label is None else label)

    def resample(self, topology: GridTopology) -> "WaveFunction":
        if topology.kind is not self.topology.kind:
            raise StructuralError("cannot resample across topology kinds")
        if self.resampler is not None:
            return self.resampler(topology)
        if topology == self.topology:
            return self
        x = self.coordinates
        re = CubicSpline(x, self.amplitudes.real)
        im = CubicSpline(x, self.amplitudes.imag)
        t = topology.coordinates
        # extrapolation beyond the sampled segment is not meaningful
        if t[0] < x[0] - 1e-12 * abs(x[-1] - x[0]) or t[-1] > x[-1] + 1e-12 * abs(x[-1] - x[0]):
            raise StructuralError("interpolated resampling cannot extend the grid")
        return WaveFunction(topology, re(t) + 1j * im(t), None, self.label)

    def __eq__(self, other):
        if not isinstance(other, WaveFunction):
            return NotImplemented
        return self.topology == other.topology and np.array_equal(self.amplitudes, other.amplitudes)

    __hash__ = None


def _check_same(chi: WaveFunction, psi: WaveFunction) -> None:
    if chi.topology != psi.topology:
        raise StructuralError(f"topology mismatch: {chi.topology} vs {psi.topology}")


def inner_product(chi: WaveFunction, psi: WaveFunction) -> complex:
    """<chi, psi>, conjugate-linear in ``chi``, by the composite trapezoid rule."""
    _check_same(chi, psi)
    return complex(np.sum(chi.topology.weights * np.conj(chi.amplitudes) * psi.amplitudes))


def norm(psi: WaveFunction) -> float:
    return float(np.sqrt(np.sum(psi.topology.weights * np.abs(psi.amplitudes) ** 2)))


def normalize(psi: WaveFunction) -> WaveFunction:
    nrm = norm(psi)
    if nrm == 0.0:
        raise DegenerateStateError("cannot normalize a zero-norm state")
    resampler = None
    if psi.resampler is not None:
        parent = psi.resampler
        resampler = lambda topology: normalize(parent(topology))  # noqa: E731
    return psi.with_amplitudes(psi.amplitudes / nrm, resampler)


def refine(psi: WaveFunction, factor: int) -> WaveFunction:
    """The same state on a grid with ``(n - 1) * factor + 1`` points."""
    if int(factor) != factor or factor < 2:
        raise StructuralError(f"refinement factor must be >= 2, got {factor}")
    return psi.resample(psi.topology.refined(factor))
