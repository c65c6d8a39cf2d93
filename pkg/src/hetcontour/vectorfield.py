"""Parametric planar vector fields and the built-in example systems.

A :class:`ParametricSystem` is a planar field ``(dx/dt, dy/dt) = (f, g)``
whose right-hand side is a list of monomial terms with coefficients that are
affine in named parameters.  Coefficients are stored as exact rationals;
evaluation is done in 64-bit floats unless Fractions are passed in.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .affine import AffineExpr, parse_affine
from .errors import ConfigError, DomainError, NotFound, ParseError

MAX_DEGREE = 6

BUILTIN_NAMES = (
    "mono_unperturbed",
    "mono_perturbed",
    "revers_base",
    "revers_gamma",
    "diss_heart",
)


@dataclass(frozen=True)
class MonomialTerm:
    """coefficient * x**px * y**py, coefficient affine in the parameters."""

    coeff: AffineExpr
    px: int
    py: int

    def __post_init__(self):
        if self.px < 0 or self.py < 0:
            raise ParseError(f"negative exponent in term ({self.px},{self.py})")
        if self.px + self.py > MAX_DEGREE:
            raise ParseError(
                f"term degree {self.px + self.py} exceeds cap {MAX_DEGREE}")


class ParametricSystem:
    """Immutable planar vector field with named parameters."""

    def __init__(self, name, parameters, x_terms, y_terms):
        self.name = name
        self.state_dim = 2
        self.parameters = tuple((n, Fraction(d)) for n, d in parameters)
        self.x_terms = tuple(x_terms)
        self.y_terms = tuple(y_terms)
        declared = {n for n, _ in self.parameters}
        for t in self.x_terms + self.y_terms:
            undeclared = t.coeff.param_names() - declared
            if undeclared:
                raise ParseError(
                    f"coefficient uses undeclared parameter(s) {sorted(undeclared)}")
        self._rhs_cache = {}
        self._jac_cache = {}

    # -- parameters -------------------------------------------------------

    def defaults(self):
        return {n: float(d) for n, d in self.parameters}

    def full_params(self, overrides=None, exact=False):
        """Defaults updated with overrides; unknown names are rejected."""
        declared = {n for n, _ in self.parameters}
        out = {n: (d if exact else float(d)) for n, d in self.parameters}
        for k, v in (overrides or {}).items():
            if k not in declared:
                raise ConfigError(f"unknown parameter {k!r} for system {self.name!r}")
            out[k] = Fraction(v) if exact else float(v)
        return out

    def _params_key(self, params):
        return tuple(float(params[n]) for n, _ in self.parameters)

    # -- evaluation -------------------------------------------------------

    def rhs(self, x, y, params=None):
        """Evaluate (dx/dt, dy/dt) at a point."""
        if not (math.isfinite(x) and math.isfinite(y)):
            raise DomainError(f"non-finite state ({x}, {y})")
        p = self._resolve(params)
        exact = isinstance(x, Fraction) and isinstance(y, Fraction)
        if exact:
            pe = {k: Fraction(v) for k, v in p.items()}
            fx = sum((t.coeff.evaluate(pe) * x**t.px * y**t.py
                      for t in self.x_terms), Fraction(0))
            fy = sum((t.coeff.evaluate(pe) * x**t.px * y**t.py
                      for t in self.y_terms), Fraction(0))
            return fx, fy
        f = self.compiled_rhs(p)
        out = f(0.0, (x, y))
        return out[0], out[1]

    def jacobian(self, x, y, params=None):
        p = self._resolve(params)
        jf = self.compiled_jacobian(p)
        return jf(x, y)

    def _resolve(self, params):
        """Accept None, partial overrides, or a full parameter mapping."""
        if params is None:
            return self.defaults()
        declared = {n for n, _ in self.parameters}
        if set(params) <= declared and set(params) != declared:
            return self.full_params(params)
        missing = declared - set(params)
        if missing:
            raise ConfigError(f"missing parameter(s) {sorted(missing)}")
        unknown = set(params) - declared
        if unknown:
            raise ConfigError(f"unknown parameter(s) {sorted(unknown)}")
        return {n: params[n] for n in declared}

    def compiled_rhs(self, params):
        """A fast ``f(t, (x, y)) -> [fx, fy]`` closure for the integrator."""
        key = self._params_key(self._resolve(params))
        fn = self._rhs_cache.get(key)
        if fn is None:
            p = dict(zip((n for n, _ in self.parameters), key))
            fx = _poly_source(self.x_terms, p)
            fy = _poly_source(self.y_terms, p)
            ns = {}
            exec(f"def _rhs(t, z):\n x = z[0]; y = z[1]\n return [{fx}, {fy}]\n", ns)
            fn = ns["_rhs"]
            self._rhs_cache[key] = fn
        return fn

    def compiled_jacobian(self, params):
        key = self._params_key(self._resolve(params))
        fn = self._jac_cache.get(key)
        if fn is None:
            p = dict(zip((n for n, _ in self.parameters), key))
            dfdx = _poly_source(_ddx(self.x_terms), p)
            dfdy = _poly_source(_ddy(self.x_terms), p)
            dgdx = _poly_source(_ddx(self.y_terms), p)
            dgdy = _poly_source(_ddy(self.y_terms), p)
            ns = {"np": np}
            exec(
                "def _jac(x, y):\n"
                f" return np.array([[{dfdx}, {dfdy}], [{dgdx}, {dgdy}]])\n", ns)
            fn = ns["_jac"]
            self._jac_cache[key] = fn
        return fn

    def finite_difference_jacobian(self, x, y, params=None, h=1e-7):
        p = self._resolve(params)
        f = self.compiled_rhs(p)
        f0 = np.asarray(f(0.0, (x, y)))
        fx = (np.asarray(f(0.0, (x + h, y))) - f0) / h
        fy = (np.asarray(f(0.0, (x, y + h))) - f0) / h
        return np.column_stack([fx, fy])

    # -- transforms -------------------------------------------------------

    def time_reversed(self):
        neg = lambda terms: [MonomialTerm(t.coeff * -1, t.px, t.py) for t in terms]
        return ParametricSystem(
            self.name + "_reversed", self.parameters,
            neg(self.x_terms), neg(self.y_terms))

    # -- serialization ----------------------------------------------------

    def to_dict(self):
        return {
            "name": self.name,
            "parameters": [{"name": n, "default": str(d)}
                           for n, d in self.parameters],
            "x_dot": [_term_dict(t) for t in self.x_terms],
            "y_dot": [_term_dict(t) for t in self.y_terms],
        }

    def __eq__(self, other):
        return (isinstance(other, ParametricSystem)
                and self.name == other.name
                and self.parameters == other.parameters
                and self.x_terms == other.x_terms
                and self.y_terms == other.y_terms)

    def __repr__(self):
        return f"ParametricSystem({self.name!r}, params={[n for n, _ in self.parameters]})"


def _term_dict(t):
    return {"coeff": t.coeff.to_string(), "px": t.px, "py": t.py}


def _ddx(terms):
    return [MonomialTerm(t.coeff * t.px, t.px - 1, t.py) for t in terms if t.px > 0]


def _ddy(terms):
    return [MonomialTerm(t.coeff * t.py, t.px, t.py - 1) for t in terms if t.py > 0]


def _poly_source(terms, params):
    """Python source for a polynomial with numeric coefficients inlined."""
    parts = []
    for t in terms:
        c = float(t.coeff.evaluate(params))
        if c == 0.0:
            continue
        mono = "*".join(["x"] * t.px + ["y"] * t.py)
        parts.append(f"({c!r})" + (f"*{mono}" if mono else ""))
    return " + ".join(parts) if parts else "0.0"


# -- construction helpers -------------------------------------------------


def _terms(spec):
    """[(coeff-string, px, py), ...] -> tuple of MonomialTerm."""
    return tuple(MonomialTerm(parse_affine(c), px, py) for c, px, py in spec)


def builtin(name):
    """Return one of the paper-scale example systems by name."""
    if name == "mono_unperturbed":
        return ParametricSystem(
            name,
            [("a", 1), ("b", -3), ("c", Fraction(3, 2))],
            _terms([("a", 1, 0), ("b", 0, 1), ("c", 1, 1), ("-a", 2, 0)]),
            _terms([("a+b", 0, 1), ("-(2*a+2*b+c)", 1, 1), ("2*c", 0, 2)]),
        )
    if name == "mono_perturbed":
        return ParametricSystem(
            name,
            [("a", 1), ("b", -3), ("c", Fraction(3, 2)),
             ("alpha", 0), ("epsilon", 0)],
            _terms([("a", 1, 0), ("b", 0, 1), ("c", 1, 1), ("-a", 2, 0),
                    ("epsilon", 0, 1)]),
            _terms([("a+b", 0, 1), ("-(2*a+2*b+c)", 1, 1), ("2*c", 0, 2),
                    ("alpha", 0, 1), ("-alpha", 1, 0), ("alpha", 2, 0)]),
        )
    if name == "revers_base":
        return ParametricSystem(
            name, [],
            _terms([("1", 0, 1)]),
            _terms([("1", 1, 0), ("1", 1, 1), ("-1", 3, 0)]),
        )
    if name == "revers_gamma":
        return ParametricSystem(
            name, [("gamma", Fraction(27, 10))],
            _terms([("1", 0, 2), ("gamma", 0, 1)]),
            _terms([("1", 1, 0), ("1", 1, 1), ("-1", 3, 0)]),
        )
    if name == "diss_heart":
        return ParametricSystem(
            name,
            [("gamma", Fraction(27, 10)), ("alpha", 0), ("epsilon", 0)],
            _terms([("epsilon", 1, 0), ("1", 0, 2), ("gamma", 0, 1)]),
            _terms([("alpha", 0, 1), ("1", 1, 0), ("1", 1, 1), ("-1", 3, 0)]),
        )
    raise NotFound(f"unknown built-in system {name!r}")


def evaluate(sys, point, params=None):
    """Evaluate the right-hand side of ``sys`` at ``point``."""
    return sys.rhs(point[0], point[1], params)


# -- JSON file format -----------------------------------------------------


def load(path_or_file):
    """Load a system from the JSON schema; see README for the grammar."""
    if hasattr(path_or_file, "read"):
        data = json.load(path_or_file)
    else:
        with open(path_or_file) as fh:
            data = json.load(fh)
    return from_dict(data)


def from_dict(data):
    if not isinstance(data, dict):
        raise ParseError("top-level value must be an object")
    for key in ("name", "parameters", "x_dot", "y_dot"):
        if key not in data:
            raise ParseError("missing field", key)
    params = []
    for i, p in enumerate(data["parameters"]):
        loc = f"parameters[{i}]"
        if not isinstance(p, dict) or "name" not in p or "default" not in p:
            raise ParseError("parameter entries need 'name' and 'default'", loc)
        try:
            params.append((p["name"], Fraction(str(p["default"]))))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad default {p['default']!r}", loc)

    def read_terms(key):
        out = []
        for i, t in enumerate(data[key]):
            loc = f"{key}[{i}]"
            if not isinstance(t, dict):
                raise ParseError("term must be an object", loc)
            for f_ in ("coeff", "px", "py"):
                if f_ not in t:
                    raise ParseError("missing field", f"{loc}.{f_}")
            px, py = t["px"], t["py"]
            if not isinstance(px, int) or not isinstance(py, int):
                raise ParseError("exponents must be integers", loc)
            if px < 0 or py < 0:
                raise ParseError("negative exponent", loc)
            if px + py > MAX_DEGREE:
                raise ParseError(f"degree above cap {MAX_DEGREE}", loc)
            out.append(MonomialTerm(parse_affine(str(t["coeff"]), loc), px, py))
        return out

    try:
        return ParametricSystem(
            data["name"], params, read_terms("x_dot"), read_terms("y_dot"))
    except ParseError:
        raise
    except Exception as exc:  # undeclared parameters etc.
        raise ParseError(str(exc))


def save(sys, path_or_file):
    payload = json.dumps(sys.to_dict(), indent=2, sort_keys=True)
    if hasattr(path_or_file, "write"):
        path_or_file.write(payload)
    else:
        with open(path_or_file, "w") as fh:
            fh.write(payload)
