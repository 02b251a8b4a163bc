import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from quncertainty import operators as O
from quncertainty import relations as R
from quncertainty import states as S
from quncertainty.classical import SampleSet, classical_relation
from quncertainty.grid import GridTopology, inner_product, norm

CIRCLE = GridTopology.circle(513)
LINE = GridTopology.line(-14, 14, 1025)

coef = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)
packets = st.builds(
    lambda c, alpha: S.circle_packet(c, alpha),
    st.dictionaries(st.integers(-3, 3), coef, min_size=1, max_size=4).filter(
        lambda d: sum(abs(v) ** 2 for v in d.values()) > 1e-3),
    st.floats(-np.pi, np.pi),
)
hermites = st.builds(
    S.hermite,
    st.dictionaries(st.integers(0, 6), coef, min_size=1, max_size=3).filter(
        lambda d: sum(abs(v) ** 2 for v in d.values()) > 1e-3),
)


@settings(max_examples=40, deadline=None)
@given(packets, packets)
def test_conjugate_symmetry_and_cauchy_schwarz(r1, r2):
    a, b = S.realize(r1, CIRCLE), S.realize(r2, CIRCLE)
    assert np.isclose(inner_product(a, b), np.conj(inner_product(b, a)), atol=1e-14)
    assert abs(inner_product(a, b)) <= norm(a) * norm(b) + 1e-12


@settings(max_examples=40, deadline=None)
@given(packets)
def test_modified_relation_on_circle(recipe):
    rep = R.evaluate_modified(O.angle(), O.angular_momentum(), S.realize(recipe, CIRCLE))
    assert rep.satisfied["modified"]
    assert rep.lhs >= abs(rep.stats.covariance) - rep.tolerance_used


@settings(max_examples=30, deadline=None)
@given(hermites)
def test_relations_on_line(recipe):
    rep = R.evaluate_commutator_form(O.position(), O.momentum(), S.realize(recipe, LINE))
    assert all(rep.satisfied.values())
    assert abs(rep.standard_bound - 0.5) <= rep.tolerance_used


finite = st.floats(-1e3, 1e3, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(finite, finite, st.floats(0.0, 1.0)), min_size=2, max_size=40))
def test_classical_relation_holds(rows):
    a, b, w = (np.array(c) for c in zip(*rows))
    if w.sum() <= 1e-6:
        w = np.ones_like(w)
    rep = classical_relation(SampleSet(a, b, w / w.sum()))
    assert rep.satisfied
