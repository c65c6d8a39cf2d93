"""Limit cycles as fixed points of a section return map.

The return map P is evaluated by event-located integration; cycles are
zeros of P(x) - x on a section coordinate bracket, their multiplier is the
central-difference derivative of P, and the fold (semi-stable) condition is
the simultaneous vanishing of P(x) - x and P'(x) - 1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import integrate as hi
from .errors import FoldBracketError, HetContourError, NoCycleInBracket

MULTIPLIER_TOL = 1e-4
MULTIPLIER_STEP = 1e-6
FIXED_POINT_TOL = 1e-9


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    SEMI_STABLE = "semi_stable"


@dataclass(frozen=True)
class LimitCycle:
    section: hi.CrossSection
    fixed_point: float
    period: float
    multiplier: float
    stability: Stability


def return_map(sys, params, section, coord, max_time=500.0,
               tol=hi.DEFAULT_TOL, direction=None):
    """P(coord): section coordinate of the first return."""
    x0 = section.point_at(coord)
    c, _ = hi.poincare_map(sys, params, section, x0, max_time,
                           tol=tol, direction=direction)
    return c


def _return_with_time(sys, params, section, coord, max_time, tol, direction):
    x0 = section.point_at(coord)
    return hi.poincare_map(sys, params, section, x0, max_time,
                           tol=tol, direction=direction)


def find_cycle(sys, params, section, bracket, max_time=500.0,
               tol=hi.DEFAULT_TOL, direction=None, xtol=1e-12,
               multiplier_tol=MULTIPLIER_TOL):
    """Cycle through the section with coordinate in ``bracket``.

    Requires a sign change of P(x) - x on the bracket; the root is located
    by bisection and polished by secant steps.
    """
    g = lambda x: return_map(sys, params, section, x, max_time, tol,
                             direction) - x
    a, b = float(bracket[0]), float(bracket[1])
    try:
        ga, gb = g(a), g(b)
    except HetContourError as exc:
        raise NoCycleInBracket(f"return map undefined on bracket: {exc}")
    if ga == 0.0:
        x_star = a
    elif gb == 0.0:
        x_star = b
    elif ga * gb > 0:
        raise NoCycleInBracket(
            f"displacement has the same sign at both ends "
            f"({ga:+.3e}, {gb:+.3e})")
    else:
        while b - a > 256 * xtol:
            m = 0.5 * (a + b)
            gm = g(m)
            if gm == 0.0:
                a = b = m
                break
            if ga * gm < 0:
                b, gb = m, gm
            else:
                a, ga = m, gm
        x0, f0, x1, f1 = a, ga, b, gb
        for _ in range(60):
            if f1 == f0 or x1 == x0:
                break
            x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
            if not (a <= x2 <= b):
                x2 = 0.5 * (a + b)
            f2 = g(x2)
            if abs(f2) <= FIXED_POINT_TOL or abs(x2 - x1) < xtol:
                x1, f1 = x2, f2
                break
            if ga * f2 < 0:
                b, gb = x2, f2
            else:
                a, ga = x2, f2
            x0, f0, x1, f1 = x1, f1, x2, f2
        x_star = x1
    coord, period = _return_with_time(sys, params, section, x_star,
                                      max_time, tol, direction)
    m = multiplier(sys, params, section, x_star, max_time, tol, direction)
    if m < 1 - multiplier_tol:
        stab = Stability.STABLE
    elif m > 1 + multiplier_tol:
        stab = Stability.UNSTABLE
    else:
        stab = Stability.SEMI_STABLE
    return LimitCycle(section, float(x_star), float(period), float(m), stab)


def multiplier(sys, params, section, x_star, max_time=500.0,
               tol=hi.DEFAULT_TOL, direction=None, h=MULTIPLIER_STEP):
    """Central-difference derivative of the return map at ``x_star``."""
    p_plus = return_map(sys, params, section, x_star + h, max_time, tol,
                        direction)
    p_minus = return_map(sys, params, section, x_star - h, max_time, tol,
                         direction)
    return (p_plus - p_minus) / (2 * h)


def fixed_points(sys, params, section, bracket, samples=40, max_time=500.0,
                 tol=hi.DEFAULT_TOL, direction=None):
    """All return-map fixed points found by scanning ``bracket``."""
    xs = np.linspace(bracket[0], bracket[1], samples)
    vals = []
    for x in xs:
        try:
            vals.append(return_map(sys, params, section, x, max_time, tol,
                                   direction) - x)
        except HetContourError:
            vals.append(math.nan)
    roots = []
    for x0, x1, g0, g1 in zip(xs[:-1], xs[1:], vals[:-1], vals[1:]):
        if math.isnan(g0) or math.isnan(g1) or g0 * g1 > 0:
            continue
        cyc = find_cycle(sys, params, section, (x0, x1), max_time, tol,
                         direction)
        roots.append(cyc)
    return roots


def fold_condition(sys, params, section, bracket, samples=40, max_time=500.0,
                   tol=hi.DEFAULT_TOL, direction=None, h=1e-5):
    """Residual pair (P(x)-x, P'(x)-1) at the near-double fixed point.

    The probe point is the extremum of the displacement P(x)-x inside the
    bracket (where the two colliding fixed points meet).  The bracket must
    isolate the colliding pair: 1 or 2 fixed points.
    """
    found = fixed_points(sys, params, section, bracket, samples, max_time,
                         tol, direction)
    if len(found) == 0 or len(found) > 2:
        raise FoldBracketError(
            f"{len(found)} fixed points in bracket, need 1 or 2")

    g = lambda x: return_map(sys, params, section, x, max_time, tol,
                             direction) - x
    # extremum of the displacement: zero of g' by bisection on a FD slope
    a, b = float(bracket[0]), float(bracket[1])
    dg = lambda x: (g(x + h) - g(x - h)) / (2 * h)
    da, db = dg(a), dg(b)
    if da * db > 0:
        x_c = found[0].fixed_point if len(found) == 1 else \
            0.5 * (found[0].fixed_point + found[1].fixed_point)
    else:
        for _ in range(50):
            m = 0.5 * (a + b)
            dm = dg(m)
            if dm == 0.0 or b - a < 1e-10:
                break
            if da * dm < 0:
                b, db = m, dm
            else:
                a, da = m, dm
        x_c = 0.5 * (a + b)
    p_prime = multiplier(sys, params, section, x_c, max_time, tol, direction)
    return float(g(x_c)), float(p_prime - 1.0)
