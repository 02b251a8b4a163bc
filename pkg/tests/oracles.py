"""Analytic reference values, derived independently of the package.

GAUSSIAN_MOMENTS was produced by ``derive_gaussian_moments`` (sympy, exact
integrals over the real line) before the numerical pipeline existed and is
frozen here; ``test_oracles.py`` re-derives it.
"""
import math

import numpy as np


def gaussian_moments(sigma, chirp, hbar=1.0):
    """psi ~ exp(-(1 - i chirp) x^2 / (2 sigma^2))."""
    return {
        "mean_x": 0.0,
        "mean_p": 0.0,
        "delta_x": sigma / math.sqrt(2.0),
        "delta_p": hbar * math.sqrt(1.0 + chirp ** 2) / (math.sqrt(2.0) * sigma),
        "cov_xp": chirp * hbar / 2.0,
        "imag_xp": hbar / 2.0,
        "comm_xp": -hbar,  # i<[x, p]> = i * i hbar
    }


def derive_gaussian_moments():
    import sympy as sp

    x = sp.symbols("x", real=True)
    s, hb = sp.symbols("sigma hbar", positive=True)
    c = sp.symbols("c", real=True)
    psi = sp.exp(-(1 - sp.I * c) * x ** 2 / (2 * s ** 2))
    psi = psi / sp.sqrt(sp.integrate(sp.simplify(psi * sp.conjugate(psi)), (x, -sp.oo, sp.oo)))

    def ip(f, g):
        return sp.simplify(sp.integrate(sp.simplify(sp.conjugate(f) * g), (x, -sp.oo, sp.oo)))

    xp, pp = x * psi, -sp.I * hb * sp.diff(psi, x)
    mx, mp = ip(psi, xp), sp.simplify(ip(psi, pp))
    cross = ip(xp, pp)
    return {
        "mean_x": mx,
        "mean_p": mp,
        "var_x": sp.simplify(ip(xp, xp) - mx ** 2),
        "var_p": sp.simplify(ip(pp, pp) - mp ** 2),
        "cov_xp": sp.simplify(sp.re(cross) - mx * mp),
        "imag_xp": sp.simplify(sp.im(cross)),
        "symbols": (s, c, hb),
    }


def lz_eigenstate_angle_moments():
    """|psi_m|^2 = 1/(2 pi) on [0, 2 pi]: <phi> = pi, (d phi)^2 = pi^2 / 3."""
    return {"mean_phi": math.pi, "delta_phi": math.pi / math.sqrt(3.0)}


def quad_inner(f, g, a, b, n=200001):
    """Brute-force Simpson quadrature of conj(f) g on [a, b] with callables."""
    from scipy.integrate import simpson

    x = np.linspace(a, b, n)
    return simpson(np.conj(f(x)) * g(x), x=x)
