"""A small, safe arithmetic expression language for custom states and multipliers.

Grammar: the coordinate (``x`` or ``phi``), numeric literals, the imaginary
unit ``i``, the constant ``pi``, ``+ - * /``, unary minus and the functions
``exp sin cos sqrt abs``.  Expressions are parsed with :mod:`ast` and only
those node types are accepted.
"""
from __future__ import annotations

import ast

import numpy as np

from .errors import SpecParseError

FUNCTIONS = {"exp": np.exp, "sin": np.sin, "cos": np.cos, "sqrt": np.sqrt, "abs": np.abs}
CONSTANTS = {"i": 1j, "pi": np.pi}
VARIABLES = ("x", "phi")

_BINOPS = {ast.Add: np.add, ast.Sub: np.subtract, ast.Mult: np.multiply, ast.Div: np.divide}


def _check(node, variable):
    if isinstance(node, ast.Expression):
        return _check(node.body, variable)
    if isinstance(node, ast.BinOp):
        if type(node.op) not in _BINOPS:
            raise SpecParseError(f"operator {type(node.op).__name__} is not allowed")
        _check(node.left, variable)
        _check(node.right, variable)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, (ast.USub, ast.UAdd)):
            raise SpecParseError("only unary + and - are allowed")
        _check(node.operand, variable)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            raise SpecParseError(f"unknown function in {ast.unparse(node)!r}")
        if len(node.args) != 1 or node.keywords:
            raise SpecParseError(f"{node.func.id} takes exactly one argument")
        _check(node.args[0], variable)
    elif isinstance(node, ast.Name):
        if node.id not in CONSTANTS and node.id != variable:
            raise SpecParseError(f"unknown identifier {node.id!r} (expected {variable!r})")
    elif isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise SpecParseError(f"bad literal {node.value!r}")
    else:
        raise SpecParseError(f"unsupported syntax: {type(node).__name__}")


def _eval(node, env):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp):
        value = _eval(node.operand, env)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.Call):
        arg = _eval(node.args[0], env)
        if node.func.id == "sqrt":
            arg = np.asarray(arg, dtype=np.complex128) if np.iscomplexobj(arg) else arg
        return FUNCTIONS[node.func.id](arg)
    if isinstance(node, ast.Name):
        return env[node.id]
    return node.value


def compile_expression(text: str, variable: str = "x"):
    """Return ``f(coords) -> ndarray`` for ``text`` in terms of ``variable``."""
    if variable not in VARIABLES:
        raise SpecParseError(f"variable must be one of {VARIABLES}")
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise SpecParseError(f"cannot parse expression {text!r}: {exc.msg}") from None
    _check(tree, variable)

    def evaluate(coords):
        coords = np.asarray(coords, dtype=float)
        env = dict(CONSTANTS)
        env[variable] = coords
        with np.errstate(all="ignore"):
            value = _eval(tree, env)
        return np.broadcast_to(np.asarray(value), coords.shape).copy()

    evaluate.source = text
    return evaluate
