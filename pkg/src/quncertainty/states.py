"""Analytic state constructors, parameter sweeps and the state spec mini-language.

Every realized state carries a resampler that re-evaluates the closed form
on any other grid, which is what grid refinement in the domain diagnostics
relies on.

Families (spec name, parameters):

``lz-eigenstate``   m (integer); exp(i m phi) / sqrt(2 pi)
``gaussian``        x0, p0, sigma, chirp;
                    exp(-(1 - i chirp)(x - x0)^2 / (2 sigma^2) + i p0 x / hbar),
                    so that dx = sigma/sqrt(2) and cov(x, p) = chirp * hbar / 2
``cusp``            sqrt(2|x|) exp(-|x|)
``circle-packet``   c<m> coefficients, alpha; exp(i alpha phi / 2pi) sum_m c_m exp(i m phi)
``slow-decay``      power; (1 + x^2)^(-power)
``hermite``         c<n> coefficients, scale; sum_n c_n h_n(x / scale)
``custom``          expr, domain (line|circle), xmin, xmax
``file``            path, domain
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.special import eval_hermite, gammaln

from .config import DEFAULT_CONFIG, Config
from .errors import SpecParseError, StructuralError
from .expr import compile_expression
from .grid import GridTopology, Kind, WaveFunction, normalize

FAMILIES = ("lz-eigenstate", "gaussian", "cusp", "circle-packet", "slow-decay",
            "hermite", "custom", "file")
CIRCLE_FAMILIES = ("lz-eigenstate", "circle-packet")
LINE_FAMILIES = ("gaussian", "cusp", "slow-decay", "hermite")

_DEFAULTS = {
    "lz-eigenstate": {"m": 0},
    "gaussian": {"x0": 0.0, "p0": 0.0, "sigma": 1.0, "chirp": 0.0},
    "cusp": {},
    "circle-packet": {"alpha": 0.0},
    "slow-decay": {"power": 0.25},
    "hermite": {"scale": 1.0},
    "custom": {"domain": "line"},
    "file": {"domain": "line"},
}

_ALIASES = {"c": "chirp", "lz": "lz-eigenstate", "wave-packet": "circle-packet"}


@dataclass(frozen=True, eq=False)
class StateRecipe:
    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        family = _ALIASES.get(self.family, self.family)
        if family not in FAMILIES:
            raise SpecParseError(f"unknown state family {self.family!r}")
        params = dict(_DEFAULTS[family])
        params.update({_ALIASES.get(k, k): v for k, v in self.params.items()})
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", _coerce(family, params))
        _validate(self.family, self.params)

    def __eq__(self, other):
        return isinstance(other, StateRecipe) and self.to_spec() == other.to_spec()

    def __hash__(self):
        return hash(self.to_spec())

    @property
    def domain(self) -> Kind:
        if self.family in CIRCLE_FAMILIES:
            return Kind.CIRCLE
        if self.family in LINE_FAMILIES:
            return Kind.LINE
        return Kind(self.params["domain"])

    def coefficients(self) -> dict:
        return {int(k[1:]): complex(v) for k, v in self.params.items() if _is_coeff(k)}

    def to_spec(self) -> str:
        items = ",".join(f"{k}={_fmt(v)}" for k, v in sorted(self.params.items()))
        return f"{self.family}:{items}" if items else self.family


def _is_coeff(key: str) -> bool:
    return key.startswith("c") and key[1:].lstrip("-").isdigit()


def _fmt(value) -> str:
    if isinstance(value, complex):
        return repr(value).strip("()")
    return repr(value) if isinstance(value, float) else str(value)


def _coerce(family: str, params: dict) -> dict:
    out = {}
    for key, value in params.items():
        try:
            if _is_coeff(key):
                value = complex(value.replace(" ", "")) if isinstance(value, str) else complex(value)
            elif key == "m":
                fv = float(value)
                if fv != int(fv):
                    raise SpecParseError("m must be an integer")
                value = int(fv)
            elif key in ("x0", "p0", "sigma", "chirp", "alpha", "power", "scale", "xmin", "xmax"):
                value = float(value)
            elif key in ("expr", "path", "domain"):
                value = str(value)
            else:
                raise SpecParseError(f"unknown parameter {key!r} for family {family!r}")
        except (TypeError, ValueError):
            raise SpecParseError(f"bad value {value!r} for parameter {key!r}") from None
        out[key] = value
    return out


def _validate(family: str, params: dict) -> None:
    if family == "gaussian" and not params["sigma"] > 0:
        raise SpecParseError("gaussian sigma must be > 0")
    if family == "hermite" and not params["scale"] > 0:
        raise SpecParseError("hermite scale must be > 0")
    if family == "slow-decay" and not params["power"] > 0:
        raise SpecParseError("slow-decay power must be > 0")
    if family in ("circle-packet", "hermite"):
        coeffs = [k for k in params if _is_coeff(k)]
        if not coeffs:
            raise SpecParseError(f"{family} needs at least one coefficient c<n>=value")
        if family == "hermite" and any(int(k[1:]) < 0 for k in coeffs):
            raise SpecParseError("hermite orders must be >= 0")
    if family == "custom" and "expr" not in params:
        raise SpecParseError("custom states need expr=...")
    if family == "file" and "path" not in params:
        raise SpecParseError("file states need path=...")
    if family in ("custom", "file") and params["domain"] not in ("line", "circle"):
        raise SpecParseError("domain must be line or circle")


def parse_state_spec(text: str) -> StateRecipe:
    """Parse ``family:key=value,key=value`` into a recipe."""
    text = text.strip()
    if not text:
        raise SpecParseError("empty state spec")
    family, _, rest = text.partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq or not key.strip():
            raise SpecParseError(f"expected key=value, got {item!r}")
        params[key.strip()] = value.strip()
    return StateRecipe(family.strip(), params)


def lz_eigenstate(m: int) -> StateRecipe:
    return StateRecipe("lz-eigenstate", {"m": m})


def gaussian(sigma: float = 1.0, chirp: float = 0.0, x0: float = 0.0, p0: float = 0.0) -> StateRecipe:
    return StateRecipe("gaussian", {"sigma": sigma, "chirp": chirp, "x0": x0, "p0": p0})


def cusp() -> StateRecipe:
    return StateRecipe("cusp")


def circle_packet(coefficients: dict, alpha: float = 0.0) -> StateRecipe:
    params = {f"c{int(m)}": complex(c) for m, c in coefficients.items()}
    params["alpha"] = alpha
    return StateRecipe("circle-packet", params)


def slow_decay(power: float = 0.25) -> StateRecipe:
    return StateRecipe("slow-decay", {"power": power})


def hermite(coefficients: dict, scale: float = 1.0) -> StateRecipe:
    params = {f"c{int(n)}": complex(c) for n, c in coefficients.items()}
    params["scale"] = scale
    return StateRecipe("hermite", params)


def custom(expr: str, domain: str = "line", xmin: Optional[float] = None,
           xmax: Optional[float] = None) -> StateRecipe:
    params = {"expr": expr, "domain": domain}
    if xmin is not None:
        params["xmin"] = xmin
    if xmax is not None:
        params["xmax"] = xmax
    return StateRecipe("custom", params)


def default_topology(recipe: StateRecipe, n_points: Optional[int] = None,
                     config: Config = DEFAULT_CONFIG) -> GridTopology:
    """The grid a recipe is realized on when the caller does not choose one."""
    if recipe.domain is Kind.CIRCLE:
        return GridTopology.circle(n_points or config.circle_n)
    n = n_points or config.line_n
    p = recipe.params
    if recipe.family == "file":
        data = load_samples(p["path"])
        return GridTopology.line(data[0, 0], data[-1, 0], n_points or data.shape[0])
    if "xmin" in p or "xmax" in p:
        return GridTopology.line(p.get("xmin", -10.0), p.get("xmax", 10.0), n)
    if recipe.family == "gaussian":
        half = 12.0 * p["sigma"]
        return GridTopology.line(p["x0"] - half, p["x0"] + half, n)
    if recipe.family == "cusp":
        return GridTopology.line(-20.0, 20.0, n)
    if recipe.family == "slow-decay":
        return GridTopology.line(-40.0, 40.0, n)
    if recipe.family == "hermite":
        top = max(recipe.coefficients())
        half = p["scale"] * (np.sqrt(2.0 * top + 1.0) + 12.0)
        return GridTopology.line(-half, half, n)
    return GridTopology.line(-10.0, 10.0, n)


def _hermite_function(order: int, x: np.ndarray) -> np.ndarray:
    log_norm = -0.5 * (order * np.log(2.0) + gammaln(order + 1.0) + 0.5 * np.log(np.pi))
    return np.exp(log_norm - 0.5 * x * x) * eval_hermite(order, x)


def load_samples(path) -> np.ndarray:
    """Read ``coordinate re [im]`` rows (whitespace or comma separated)."""
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        try:
            values = [float(v) for v in parts]
        except ValueError:
            if not rows:
                continue  # header
            raise SpecParseError(f"{path}:{lineno}: non-numeric row") from None
        if len(values) not in (2, 3):
            raise SpecParseError(f"{path}:{lineno}: expected 2 or 3 columns")
        rows.append(values + [0.0] * (3 - len(values)))
    if len(rows) < 3:
        raise SpecParseError(f"{path}: need at least 3 samples")
    data = np.array(rows)
    steps = np.diff(data[:, 0])
    if np.any(steps <= 0) or np.ptp(steps) > 1e-8 * abs(steps.mean()) * len(steps):
        raise SpecParseError(f"{path}: coordinates must be uniform and increasing")
    return data


def _raw_amplitudes(recipe: StateRecipe, topology: GridTopology, hbar: float = 1.0) -> np.ndarray:
    p = recipe.params
    x = topology.coordinates
    fam = recipe.family
    if fam == "lz-eigenstate":
        return np.exp(1j * p["m"] * x) / np.sqrt(2.0 * np.pi)
    if fam == "circle-packet":
        total = np.zeros_like(x, dtype=np.complex128)
        for m, c in recipe.coefficients().items():
            total += c * np.exp(1j * m * x)
        return np.exp(1j * p["alpha"] * x / (2.0 * np.pi)) * total
    if fam == "gaussian":
        u = x - p["x0"]
        return np.exp(-(1.0 - 1j * p["chirp"]) * u * u / (2.0 * p["sigma"] ** 2) + 1j * p["p0"] * x / hbar)
    if fam == "cusp":
        return np.sqrt(2.0 * np.abs(x)) * np.exp(-np.abs(x))
    if fam == "slow-decay":
        return (1.0 + x * x) ** (-p["power"])
    if fam == "hermite":
        u = x / p["scale"]
        total = np.zeros_like(x, dtype=np.complex128)
        for order, c in recipe.coefficients().items():
            total += c * _hermite_function(order, u)
        return total
    if fam == "custom":
        variable = "phi" if recipe.domain is Kind.CIRCLE else "x"
        return compile_expression(p["expr"], variable)(x)
    raise StructuralError(f"family {fam!r} has no closed form")


def _needs_shift(recipe: StateRecipe, topology: GridTopology) -> bool:
    # the cusp derivative is undefined at the origin; keep nodes off it
    if recipe.family != "cusp":
        return False
    x = topology.coordinates
    return bool(np.min(np.abs(x)) < 1e-9 * topology.step)


def realize(recipe: StateRecipe, topology: Optional[GridTopology] = None,
            config: Config = DEFAULT_CONFIG) -> WaveFunction:
    """Sample ``recipe`` on ``topology`` and normalize it.

    The cusp state moves the grid by half a step when a node would sit on
    x = 0, so the returned topology can differ from the requested one.
    """
    if topology is None:
        topology = default_topology(recipe, config=config)
    if topology.kind is not recipe.domain:
        raise StructuralError(f"{recipe.family} states live on {recipe.domain.value} grids, "
                              f"not {topology.kind.value}")
    if recipe.family == "file":
        return _realize_file(recipe, topology)
    if _needs_shift(recipe, topology):
        topology = topology.shifted(0.5 * topology.step)
    amps = _raw_amplitudes(recipe, topology, config.hbar)
    raw = WaveFunction(topology, amps, label=recipe.to_spec())
    state = normalize(raw)
    return WaveFunction(state.topology, state.amplitudes,
                        lambda t: realize(recipe, t, config), recipe.to_spec())


def _realize_file(recipe: StateRecipe, topology: GridTopology) -> WaveFunction:
    data = load_samples(recipe.params["path"])
    if recipe.domain is Kind.CIRCLE:
        native = GridTopology.circle(data.shape[0])
    else:
        native = GridTopology.line(data[0, 0], data[-1, 0], data.shape[0])
    state = normalize(WaveFunction(native, data[:, 1] + 1j * data[:, 2], label=recipe.to_spec()))
    return normalize(state.resample(topology)) if topology != native else state


def sweep(base: StateRecipe, ranges: dict) -> list:
    """Cartesian product of parameter values over ``base``."""
    if not ranges:
        raise SpecParseError("sweep needs at least one parameter range")
    keys = list(ranges)
    values = [list(ranges[k]) for k in keys]
    for k, v in zip(keys, values):
        if not v:
            raise SpecParseError(f"empty range for {k!r}")
    recipes = []
    for combo in itertools.product(*values):
        params = dict(base.params)
        params.update(zip(keys, combo))
        recipes.append(StateRecipe(base.family, params))
    return recipes


def parse_range(text: str) -> tuple:
    """``key=start:stop:step`` (inclusive stop) or ``key=v1;v2;...``."""
    key, eq, body = text.partition("=")
    if not eq or not key.strip():
        raise SpecParseError(f"expected key=range, got {text!r}")
    body = body.strip()
    if ":" in body:
        try:
            start, stop, step = (float(v) for v in body.split(":"))
        except ValueError:
            raise SpecParseError(f"bad range {body!r}; expected start:stop:step") from None
        if step <= 0:
            raise SpecParseError("range step must be > 0")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        if count <= 0:
            raise SpecParseError(f"empty range {body!r}")
        values = [start + i * step for i in range(count)]
    else:
        values = [v.strip() for v in body.split(";") if v.strip()]
        if not values:
            raise SpecParseError(f"empty range for {key!r}")
    return key.strip(), values


def state_library(config: Config = DEFAULT_CONFIG) -> list:
    """Named library states used across the test and acceptance suites."""
    return [
        *(lz_eigenstate(m) for m in range(-2, 3)),
        gaussian(1.0),
        gaussian(1.0, chirp=0.5),
        gaussian(0.7, chirp=-1.0, x0=0.5, p0=0.8),
        circle_packet({0: 1.0, 1: 0.5j, -2: 0.25}, alpha=0.0),
        circle_packet({0: 1.0, 1: 0.3 - 0.2j}, alpha=1.3),
        circle_packet({0: -0.5j, 1: 0.5j}),  # sin(phi/2) e^{i phi/2}: zero at both ends
        hermite({0: 1.0, 1: 0.5, 3: 0.2j}),
    ]
