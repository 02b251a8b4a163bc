"""Brute-force dense-matrix path used to cross-check the vectorized pipeline.

Matrices and quadrature weights are assembled here from scratch rather than
by calling :func:`quncertainty.operators.apply`, so agreement between the two
paths is evidence, not tautology.  Everything is O(n^2) in memory, hence the
size cap.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import OracleCapExceeded, StructuralError
from .grid import GridTopology, WaveFunction
from .operators import OpKind, OperatorSpec
from .stats import StatReport


@dataclass(frozen=True, eq=False)
class DenseOperator:
    matrix: np.ndarray
    topology: GridTopology
    name: str = ""

    def hermiticity_defect(self) -> np.ndarray:
        """W M - (W M)^H, zero for an operator Hermitian in the quadrature inner product."""
        wm = _weights(self.topology)[:, None] * self.matrix
        return wm - wm.conj().T


def _weights(topology: GridTopology) -> np.ndarray:
    n = topology.n_points
    h = (topology.x_max - topology.x_min) / (n - 1)
    w = np.ones(n) * h
    w[[0, -1]] = h / 2
    return w


def _derivative_matrix(n: int, h: float) -> np.ndarray:
    d = np.zeros((n, n))
    idx = np.arange(1, n - 1)
    d[idx, idx + 1] = 1.0
    d[idx, idx - 1] = -1.0
    d[0, :3] = [-3.0, 4.0, -1.0]
    d[-1, -3:] = [1.0, -4.0, 3.0]
    return d / (2.0 * h)


def materialize(op: OperatorSpec, topology: GridTopology, config: Config = DEFAULT_CONFIG) -> DenseOperator:
    n = topology.n_points
    if n > config.oracle_cap:
        raise OracleCapExceeded(f"{n} points exceeds the oracle cap of {config.oracle_cap}")
    op.check_topology(topology)
    h = (topology.x_max - topology.x_min) / (n - 1)
    coords = topology.x_min + h * np.arange(n)
    coords[-1] = topology.x_max
    if op.kind in (OpKind.POSITION, OpKind.ANGLE):
        m = np.diag(coords).astype(np.complex128)
    elif op.kind is OpKind.MULTIPLY:
        vals = op.function(coords) if callable(op.function) else op.function
        m = np.diag(np.broadcast_to(np.asarray(vals, dtype=float), (n,))).astype(np.complex128)
    elif op.kind in (OpKind.MOMENTUM, OpKind.ANGULAR_MOMENTUM):
        m = -1j * op.hbar * _derivative_matrix(n, h)
    elif op.kind is OpKind.DENSE:
        m = np.array(op.matrix, dtype=np.complex128)
    else:
        raise StructuralError(f"no dense form for {op.kind}")
    return DenseOperator(m, topology, op.name)


def oracle_stat_report(a: OperatorSpec, b: OperatorSpec, psi: WaveFunction,
                       config: Config = DEFAULT_CONFIG) -> StatReport:
    """Every statistic by dense linear algebra.

    The commutator expectation is always returned; deciding whether it is
    meaningful is the main pipeline's job, not the oracle's.
    """
    topo = psi.topology
    ma = materialize(a, topo, config).matrix
    mb = materialize(b, topo, config).matrix
    W = np.diag(_weights(topo))
    v = psi.amplitudes.reshape(-1, 1)
    eye = np.eye(topo.n_points)

    def bracket(left, right):
        return complex((left.conj().T @ W @ right)[0, 0])

    ea = bracket(v, ma @ v)
    eb = bracket(v, mb @ v)
    abar = (ma - ea.real * eye) @ v
    bbar = (mb - eb.real * eye) @ v
    cross = bracket(ma @ v, mb @ v)
    comm = 1j * bracket(v, (ma @ mb - mb @ ma) @ v)
    return StatReport(
        a.name, b.name, ea.real, eb.real,
        float(np.sqrt(bracket(abar, abar).real)), float(np.sqrt(bracket(bbar, bbar).real)),
        cross.real - ea.real * eb.real, cross.imag, comm.real, ea.imag, eb.imag,
        False,
    )
