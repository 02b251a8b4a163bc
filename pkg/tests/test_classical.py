import numpy as np
import pytest

from quncertainty import operators as O
from quncertainty import states as S
from quncertainty import stats as Q
from quncertainty.classical import (SampleSet, classical_moments, classical_relation,
                                    quadratic_discriminant_check, read_samples_csv)
from quncertainty.errors import SpecParseError, StructuralError
from quncertainty.grid import GridTopology


def test_two_point_moments():
    # hand arithmetic: a in {0, 1}, b in {0, 2}, equal weights
    m = classical_moments(SampleSet.from_pairs([(0, 0), (1, 2)]))
    assert (m.mean_a, m.mean_b, m.delta_a, m.delta_b, m.sigma_ab) == pytest.approx((0.5, 1.0, 0.5, 1.0, 0.5))


def test_constant_a():
    m = classical_moments(SampleSet([3.0, 3.0, 3.0], [1.0, 2.0, 5.0]))
    assert m.delta_a == 0.0 and m.sigma_ab == 0.0


def test_b_equals_a(rng):
    a = rng.normal(size=100)
    m = classical_moments(SampleSet(a, a))
    assert m.sigma_ab == pytest.approx(m.delta_a ** 2, rel=1e-14)


def test_linear_equality(rng):
    a = rng.normal(size=500)
    rep = classical_relation(SampleSet(a, 2 * a + 3))
    assert rep.equality
    assert rep.lam == pytest.approx(-0.5, rel=1e-12)
    assert rep.residual <= 1e-12


def test_independent_strict(rng):
    rep = classical_relation(SampleSet(rng.uniform(size=10_000), rng.uniform(size=10_000)))
    assert rep.satisfied and not rep.equality
    assert rep.lhs - rep.rhs > 0.05


def test_point_mass():
    rep = classical_relation(SampleSet([1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [0.0, 1.0, 0.0]))
    assert rep.lhs == 0.0 and rep.rhs == 0.0
    assert rep.equality and rep.satisfied


def test_discriminant(rng):
    a = rng.normal(size=200)
    assert quadratic_discriminant_check(SampleSet(a, -a))["discriminant"] == pytest.approx(0.0, abs=1e-12)
    out = quadratic_discriminant_check(SampleSet(a, rng.normal(size=200)))
    assert out["discriminant"] < 0 and out["nonnegative"] and out["discriminant_ok"]


def test_symmetry(rng):
    s = SampleSet(rng.normal(size=50), rng.normal(size=50))
    assert classical_moments(s).sigma_ab == classical_moments(s.swapped()).sigma_ab


def test_validation():
    with pytest.raises(StructuralError):
        SampleSet([1.0], [2.0])
    with pytest.raises(StructuralError):
        SampleSet([1.0, 2.0], [2.0, 3.0], [0.3, 0.3])
    with pytest.raises(StructuralError):
        SampleSet([1.0, 2.0], [2.0, 3.0], [1.5, -0.5])


def test_quantum_classical_correspondence():
    t = GridTopology.line(-12, 12, 4097)
    psi = S.realize(S.gaussian(1.0, 0.7, x0=0.3), t)
    f, g = O.multiply(np.sin, name="sin"), O.multiply(lambda x: x ** 2, name="x2")
    rep = Q.stat_report(f, g, psi)
    w = t.weights * np.abs(psi.amplitudes) ** 2
    x = t.coordinates
    m = classical_moments(SampleSet(np.sin(x), x ** 2, w / w.sum()))
    assert rep.covariance == pytest.approx(m.sigma_ab, abs=1e-12)
    assert rep.delta_a == pytest.approx(m.delta_a, abs=1e-12)
    assert rep.delta_b == pytest.approx(m.delta_b, abs=1e-12)
    assert abs(rep.imag_cross) < 1e-15


def test_read_csv(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("a,b,weight\n0,0,0.5\n1,2,0.5\n")
    s = read_samples_csv(path)
    assert classical_moments(s).sigma_ab == pytest.approx(0.5)
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\nx,3\n4\n5,6\n")
    with pytest.raises(SpecParseError, match="lines 3, 4"):
        read_samples_csv(bad)
