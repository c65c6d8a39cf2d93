"""Synthesis of polynomial vector fields tangent to a plane algebraic curve.

Given a squarefree polynomial G and a degree budget, every field (f, g)
with  <grad G, (f, g)>  divisible by G leaves {G = 0} invariant.  The
divisibility condition is linear in the ansatz coefficients: we divide the
tangency polynomial by G (graded reverse lexicographic leading term) and
require the remainder to vanish identically.  All arithmetic is exact
rational; floating point never enters this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .affine import AffineExpr, parse_affine
from .errors import BadPerturbation, EmptyFamily, ParseError
from .vectorfield import MonomialTerm, ParametricSystem

MAX_DEGREE = 6


# -- exact bivariate polynomials ------------------------------------------
# Representation: dict {(px, py): coefficient}.  Coefficients are either
# Fractions (plain polynomials) or dicts {symbol: Fraction} (linear forms
# over ansatz coefficients, "" the constant slot).


def poly_from_string(text):
    """Parse e.g. ``"y*(y - x*(1-x))"`` into an exact polynomial."""
    import ast

    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"invalid polynomial {text!r}: {exc.msg}")

    def ev(node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                raise ParseError(f"non-numeric literal in {text!r}")
            v = (Fraction(str(node.value)) if isinstance(node.value, float)
                 else Fraction(node.value))
            return {(0, 0): v}
        if isinstance(node, ast.Name):
            if node.id == "x":
                return {(1, 0): Fraction(1)}
            if node.id == "y":
                return {(0, 1): Fraction(1)}
            raise ParseError(f"unknown variable {node.id!r} in {text!r}")
        if isinstance(node, ast.UnaryOp):
            inner = ev(node.operand)
            if isinstance(node.op, ast.USub):
                return poly_scale(inner, Fraction(-1))
            if isinstance(node.op, ast.UAdd):
                return inner
        if isinstance(node, ast.BinOp):
            l, r = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return poly_add(l, r)
            if isinstance(node.op, ast.Sub):
                return poly_add(l, poly_scale(r, Fraction(-1)))
            if isinstance(node.op, ast.Mult):
                return poly_mul(l, r)
            if isinstance(node.op, ast.Pow):
                if (isinstance(node.right, ast.Constant)
                        and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    out = {(0, 0): Fraction(1)}
                    for _ in range(node.right.value):
                        out = poly_mul(out, l)
                    return out
                raise ParseError(f"only non-negative integer powers in {text!r}")
            if isinstance(node.op, ast.Div):
                if set(r) == {(0, 0)}:
                    return poly_scale(l, Fraction(1) / r[(0, 0)])
        raise ParseError(f"unsupported syntax in {text!r}")

    return _clean(ev(tree.body))


def _clean(p):
    return {m: c for m, c in p.items() if c != 0}


def poly_add(p, q):
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, Fraction(0)) + c
    return _clean(out)


def poly_scale(p, s):
    return _clean({m: c * s for m, c in p.items()})


def poly_mul(p, q):
    out = {}
    for (ax, ay), ac in p.items():
        for (bx, by), bc in q.items():
            m = (ax + bx, ay + by)
            out[m] = out.get(m, Fraction(0)) + ac * bc
    return _clean(out)


def poly_dx(p):
    return _clean({(mx - 1, my): c * mx for (mx, my), c in p.items() if mx > 0})


def poly_dy(p):
    return _clean({(mx, my - 1): c * my for (mx, my), c in p.items() if my > 0})


def poly_degree(p):
    return max((mx + my for mx, my in p), default=-1)


def _grevlex_key(mono):
    mx, my = mono
    return (mx + my, -my)


def leading_monomial(p):
    return max(p, key=_grevlex_key)


def poly_divmod_single(p, g):
    """Remainder of p upon division by the single polynomial g, grevlex
    leading term.  Works for linear-form coefficients as well."""
    lt = leading_monomial(g)
    lc = g[lt]
    rem = dict(p)
    while True:
        divisible = [m for m in rem
                     if m[0] >= lt[0] and m[1] >= lt[1]]
        if not divisible:
            break
        m = max(divisible, key=_grevlex_key)
        shift = (m[0] - lt[0], m[1] - lt[1])
        coef = _coef_scale(rem[m], Fraction(1) / lc)
        for (gx, gy), gc in g.items():
            mm = (gx + shift[0], gy + shift[1])
            rem[mm] = _coef_sub(rem.get(mm), _coef_scale(coef, gc))
        rem = {mm: c for mm, c in rem.items() if not _coef_is_zero(c)}
    return rem


def _coef_scale(c, s):
    if isinstance(c, dict):
        return {k: v * s for k, v in c.items()}
    return c * s


def _coef_sub(c, d):
    if c is None:
        c = {} if isinstance(d, dict) else Fraction(0)
    if isinstance(c, dict) or isinstance(d, dict):
        c = dict(c) if isinstance(c, dict) else {"": c}
        d = d if isinstance(d, dict) else {"": d}
        for k, v in d.items():
            c[k] = c.get(k, Fraction(0)) - v
        return {k: v for k, v in c.items() if v != 0}
    return c - d


def _coef_is_zero(c):
    if isinstance(c, dict):
        return all(v == 0 for v in c.values())
    return c == 0


# -- tangency linear system ------------------------------------------------


@dataclass(frozen=True)
class Variety:
    """Zero set of a single bivariate polynomial with rational coefficients."""

    G: dict

    def __post_init__(self):
        if not self.G:
            raise ParseError("variety polynomial is identically zero")

    @classmethod
    def from_string(cls, text):
        return cls(poly_from_string(text))


def ansatz_symbols(degree):
    """Coefficient names a_jk, b_jk for all monomials of degree 1..degree."""
    monos = [(i, j) for d in range(1, degree + 1)
             for i in range(d + 1) for j in (d - i,)]
    return [f"a{i}{j}" for i, j in monos], [f"b{i}{j}" for i, j in monos], monos


def tangency_system(variety, degree):
    """Linear system  (rows over ansatz coefficients) = 0  expressing that
    the tangency polynomial has zero remainder modulo G.

    Returns (symbols, rows) where each row is a dict symbol -> Fraction.
    """
    if degree < 1:
        raise ParseError("degree must be at least 1")
    if degree > MAX_DEGREE:
        raise ParseError(f"degree above cap {MAX_DEGREE}")
    a_syms, b_syms, monos = ansatz_symbols(degree)
    f = {(i, j): {s: Fraction(1)} for (i, j), s in zip(monos, a_syms)}
    g = {(i, j): {s: Fraction(1)} for (i, j), s in zip(monos, b_syms)}
    Gx, Gy = poly_dx(variety.G), poly_dy(variety.G)
    tangency = poly_add_lin(poly_mul_lin(Gx, f), poly_mul_lin(Gy, g))
    rem = poly_divmod_single(tangency, variety.G)
    rows = [dict(c) for c in rem.values()]
    return a_syms + b_syms, rows


def poly_mul_lin(plain, linform_poly):
    out = {}
    for (ax, ay), ac in plain.items():
        for (bx, by), bc in linform_poly.items():
            m = (ax + bx, ay + by)
            acc = out.setdefault(m, {})
            for s, v in bc.items():
                acc[s] = acc.get(s, Fraction(0)) + ac * v
    return {m: c for m, c in out.items() if not _coef_is_zero(c)}


def poly_add_lin(p, q):
    out = {m: dict(c) for m, c in p.items()}
    for m, c in q.items():
        acc = out.setdefault(m, {})
        for s, v in c.items():
            acc[s] = acc.get(s, Fraction(0)) + v
    return {m: c for m, c in out.items() if not _coef_is_zero(c)}


def rational_nullspace(symbols, rows, prefer_free=()):
    """Exact nullspace basis of the homogeneous system; vectors as dicts.

    Symbols in ``prefer_free`` are moved to the last columns so they become
    the free parameters of the solution when the system allows it.
    """
    symbols = ([s for s in symbols if s not in prefer_free]
               + [s for s in prefer_free if s in symbols])
    n = len(symbols)
    mat = [[row.get(s, Fraction(0)) for s in symbols] for row in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = Fraction(1) / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                fac = mat[i][c]
                mat[i] = [vi - fac * vr for vi, vr in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -mat[ri][fc]
        basis.append({symbols[i]: v for i, v in enumerate(vec) if v != 0})
    return basis, [symbols[c] for c in free]


@dataclass(frozen=True)
class TangentFamily:
    variety: Variety
    degree: int
    free_parameters: tuple        # names given to the nullspace directions
    basis: tuple                  # nullspace vectors, dicts symbol -> Fraction
    field: ParametricSystem       # coefficients affine in the free parameters


def solve_family(variety, degree, parameter_names=None, free_symbols=()):
    """All degree-``degree`` polynomial fields leaving the variety invariant.

    ``free_symbols`` requests which ansatz coefficients should serve as the
    free parameters; for the parabola-union-line variety at degree 2,
    free_symbols=("a10", "a01", "a11") with names ("a", "b", "c") yields
    the familiar three-parameter quadratic family verbatim.
    """
    symbols, rows = tangency_system(variety, degree)
    basis, free = rational_nullspace(symbols, rows, prefer_free=free_symbols)
    if not basis:
        raise EmptyFamily("only the zero field is tangent to the variety")
    missing = [s for s in free_symbols if s not in free]
    if missing:
        raise ParseError(f"requested free symbols {missing} are constrained")
    if parameter_names is None:
        parameter_names = [f"p_{s}" for s in free]
    if len(parameter_names) != len(basis):
        raise ParseError(
            f"{len(basis)} free parameters, got {len(parameter_names)} names")

    a_syms, b_syms, monos = ansatz_symbols(degree)
    x_terms, y_terms = [], []
    for syms, terms in ((a_syms, x_terms), (b_syms, y_terms)):
        for (i, j), s in zip(monos, syms):
            expr = AffineExpr()
            for pname, vec in zip(parameter_names, basis):
                if s in vec:
                    expr = expr + AffineExpr.param(pname, vec[s])
            if expr.terms:
                terms.append(MonomialTerm(expr, i, j))
    field = ParametricSystem(
        f"tangent_family_deg{degree}",
        [(p, 0) for p in parameter_names], x_terms, y_terms)
    return TangentFamily(variety, degree, tuple(parameter_names),
                         tuple(basis), field)


def tangency_residual(variety, x_terms, y_terms, params):
    """Remainder of <grad G, (f,g)> mod G for a concrete member; exact."""
    f = {}
    for t in x_terms:
        val = t.coeff.evaluate(params)
        if val:
            f[(t.px, t.py)] = f.get((t.px, t.py), Fraction(0)) + Fraction(val)
    g = {}
    for t in y_terms:
        val = t.coeff.evaluate(params)
        if val:
            g[(t.px, t.py)] = g.get((t.px, t.py), Fraction(0)) + Fraction(val)
    tang = poly_add(poly_mul(poly_dx(variety.G), f),
                    poly_mul(poly_dy(variety.G), g))
    return poly_divmod_single(tang, variety.G)


@dataclass(frozen=True)
class Perturbation:
    parameter: str
    equation: str                 # "x" or "y"
    poly: dict                    # perturbing polynomial
    vanishes_on: dict             # component of G it must be divisible by


def perturb_connections(field, assignments, perturbations, name=None):
    """Fix the family parameters and add connection-breaking terms.

    Each perturbation contributes ``parameter * poly`` to one equation and
    must vanish on its claimed component of the variety (exact divisibility
    check); otherwise BadPerturbation is raised.
    """
    for pert in perturbations:
        rem = poly_divmod_single(pert.poly, pert.vanishes_on)
        if rem:
            raise BadPerturbation(
                f"{pert.parameter!r} term does not vanish on its component")
        if pert.equation not in ("x", "y"):
            raise ParseError(f"equation must be 'x' or 'y', got {pert.equation!r}")

    x_terms, y_terms = [], []
    for t in field.x_terms:
        val = Fraction(t.coeff.evaluate({k: Fraction(v) for k, v in assignments.items()}))
        if val:
            x_terms.append(MonomialTerm(AffineExpr.constant(val), t.px, t.py))
    for t in field.y_terms:
        val = Fraction(t.coeff.evaluate({k: Fraction(v) for k, v in assignments.items()}))
        if val:
            y_terms.append(MonomialTerm(AffineExpr.constant(val), t.px, t.py))

    params = []
    for pert in perturbations:
        params.append((pert.parameter, 0))
        target = x_terms if pert.equation == "x" else y_terms
        for (px, py), cval in sorted(pert.poly.items()):
            target.append(MonomialTerm(
                AffineExpr.param(pert.parameter, cval), px, py))
    return ParametricSystem(name or field.name + "_perturbed",
                            params, x_terms, y_terms)
