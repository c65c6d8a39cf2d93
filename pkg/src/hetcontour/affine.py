"""Exact affine expressions over named parameters.

Coefficients of the polynomial vector fields are affine combinations of
parameters with rational constants, e.g. ``"a + 2*b"``, ``"-(2*a+2*b+c)"``,
``"3/2"``.  They are stored exactly (``fractions.Fraction``) so that
invariance checks can be carried out without floating point.
"""
from __future__ import annotations

import ast
from fractions import Fraction

from .errors import ParseError

_CONST = ""  # key of the constant term


class AffineExpr:
    """An affine form  c0 + sum_i c_i * p_i  with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms or {})
        for k in [k for k, v in self.terms.items() if v == 0]:
            del self.terms[k]

    @classmethod
    def constant(cls, value):
        return cls({_CONST: Fraction(value)})

    @classmethod
    def param(cls, name, coeff=1):
        return cls({name: Fraction(coeff)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return AffineExpr(out)

    def __sub__(self, other):
        return self + (other * Fraction(-1))

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return AffineExpr({k: v * scalar for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, AffineExpr) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    @property
    def is_constant(self):
        return all(k == _CONST for k in self.terms)

    def param_names(self):
        return {k for k in self.terms if k != _CONST}

    def evaluate(self, params):
        """Evaluate with a mapping of parameter values (float or Fraction)."""
        total = self.terms.get(_CONST, Fraction(0))
        acc = float(total)
        exact = isinstance(total, Fraction) and all(
            isinstance(params.get(k), Fraction) for k in self.param_names())
        if exact:
            tot = total
            for k in self.param_names():
                tot += self.terms[k] * params[k]
            return tot
        for k in self.param_names():
            acc += float(self.terms[k]) * float(params[k])
        return acc

    def __repr__(self):
        return f"AffineExpr({self.to_string()!r})"

    def to_string(self):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=lambda k: (k != _CONST, k)):
            c = self.terms[key]
            if key == _CONST:
                parts.append(str(c))
            elif c == 1:
                parts.append(key)
            elif c == -1:
                parts.append(f"-{key}")
            else:
                parts.append(f"{c}*{key}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def parse_affine(text, path=None):
    """Parse an affine-expression string into an :class:`AffineExpr`.

    Only ``+ - * /`` with rational literals and parameter names are allowed;
    products of two parameters are rejected.
    """
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"invalid expression {text!r}: {exc.msg}", path)
    return _eval_node(tree.body, text, path)


def _eval_node(node, text, path):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ParseError(f"non-numeric literal in {text!r}", path)
        if isinstance(node.value, float):
            return AffineExpr.constant(Fraction(str(node.value)))
        return AffineExpr.constant(node.value)
    if isinstance(node, ast.Name):
        return AffineExpr.param(node.id)
    if isinstance(node, ast.UnaryOp):
        inner = _eval_node(node.operand, text, path)
        if isinstance(node.op, ast.USub):
            return inner * -1
        if isinstance(node.op, ast.UAdd):
            return inner
        raise ParseError(f"unsupported operator in {text!r}", path)
    if isinstance(node, ast.BinOp):
        left = _eval_node(node.left, text, path)
        right = _eval_node(node.right, text, path)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            if left.is_constant:
                return right * left.terms.get(_CONST, Fraction(0))
            if right.is_constant:
                return left * right.terms.get(_CONST, Fraction(0))
            raise ParseError(f"non-affine product in {text!r}", path)
        if isinstance(node.op, ast.Div):
            if not right.is_constant:
                raise ParseError(f"division by a parameter in {text!r}", path)
            denom = right.terms.get(_CONST, Fraction(0))
            if denom == 0:
                raise ParseError(f"division by zero in {text!r}", path)
            return left * (Fraction(1) / denom)
        raise ParseError(f"unsupported operator in {text!r}", path)
    raise ParseError(f"unsupported syntax in {text!r}", path)
