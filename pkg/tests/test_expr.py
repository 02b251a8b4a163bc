import numpy as np
import pytest

from quncertainty.errors import SpecParseError
from quncertainty.expr import compile_expression


def test_evaluates():
    x = np.linspace(-1, 1, 5)
    f = compile_expression("exp(-x*x/2) * cos(pi*x) + 2*i*x")
    np.testing.assert_allclose(f(x), np.exp(-x * x / 2) * np.cos(np.pi * x) + 2j * x)


def test_angle_variable_and_constant():
    phi = np.linspace(0, 2 * np.pi, 7)
    assert np.allclose(compile_expression("sin(phi)", "phi")(phi), np.sin(phi))
    assert compile_expression("3", "phi")(phi).shape == phi.shape


@pytest.mark.parametrize("bad", [
    "__import__('os')", "x**2", "open(x)", "x.real", "y + 1", "lambda: 1", "x if x else 1",
    "'s'", "exp(x, 2)", "x +", "[x]", "True",
])
def test_rejects(bad):
    with pytest.raises(SpecParseError):
        compile_expression(bad)


def test_wrong_variable():
    with pytest.raises(SpecParseError):
        compile_expression("phi", "x")
