"""Splitting of saddle connections measured on cross-sections.

The gap of a connection is the signed difference, in the section coordinate,
between where the source's unstable branch and the target's stable branch
hit the section.  Winding counts are accumulated-angle turns around a
reference saddle, which is robust near tangencies.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import integrate as hi
from . import manifolds as mf
from .errors import InsufficientWinding, NoContour, NoIntersection

GAP_TOLERANCE = 1e-6


@dataclass(frozen=True)
class ConnectionSpec:
    source: object                 # Saddle
    target: object                 # Saddle
    section: hi.CrossSection
    source_side: int = 1
    target_side: int = 1
    winding_center: tuple | None = None   # defaults to source location
    winding_count: int = 0
    crossing_direction: int = 0    # geometric direction filter on the section
    orientation_sign: float = 1.0


@dataclass(frozen=True)
class SplittingResult:
    gap: float
    winding_count: int
    transversal: bool
    unstable_coord: float
    stable_coord: float


@dataclass(frozen=True)
class ContourClass:
    monodromic: bool
    source_sides: tuple            # (side of W^u(L) used, side of W^u(M) used)
    cross_signs: tuple             # orientation signs at (L, M)
    probe_agrees: bool | None


def _winding_at(traj, center, times, refine=4):
    """Accumulated |angle| around ``center`` at each of ``times``."""
    ts = traj.t
    fine = [ts[0]]
    for a, b in zip(ts[:-1], ts[1:]):
        fine.extend(np.linspace(a, b, refine + 1)[1:])
    fine = np.asarray(fine)
    pts = traj.interpolant(fine) if fine.size else np.empty((2, 0))
    ang = np.unwrap(np.arctan2(pts[1] - center[1], pts[0] - center[0]))
    acc = np.abs(ang - ang[0])
    order = np.argsort(fine)
    return [int(np.floor(np.interp(t, fine[order], acc[order]) / (2 * np.pi)))
            for t in times]


def _branch_hits(sys, params, saddle, kind, side, section, direction,
                 tol, arclength_cap, time_cap, avoid=()):
    branch = mf.grow_branch(
        sys, params, saddle, kind, side,
        arclength_cap=arclength_cap, events=[section],
        directions=[direction], terminal=[], tol=tol, time_cap=time_cap,
        equilibria=avoid, equilibrium_radius=1e-9)
    return branch


def splitting(sys, params, spec, tol=(1e-9, 1e-9), arclength_cap=200.0,
              time_cap=500.0, transversality_min=1e-8):
    """Measure the splitting gap of ``spec`` (at the requested winding)."""
    k = spec.winding_count
    center = spec.winding_center or spec.source.location
    p = sys.full_params(params)

    ub = _branch_hits(sys, p, spec.source, mf.Kind.UNSTABLE, spec.source_side,
                      spec.section, spec.crossing_direction, tol,
                      arclength_cap, time_cap)
    hits = ub.curve.event_hits
    if not hits:
        raise NoIntersection("unstable branch never met the section")
    times = [h[1] for h in hits]
    winds = _winding_at(ub.curve, center, times)
    chosen = next(((t, z, w) for (_, t, z), w in zip(hits, winds) if w == k), None)
    if chosen is None:
        if k == 0:
            raise NoIntersection("no section hit at winding 0")
        raise InsufficientWinding(k, max(winds))
    t_u, z_u, w_u = chosen

    sb = _branch_hits(sys, p, spec.target, mf.Kind.STABLE, spec.target_side,
                      spec.section, spec.crossing_direction, tol,
                      arclength_cap, time_cap)
    shits = sb.curve.event_hits
    if not shits:
        raise NoIntersection("stable branch never met the section")
    z_s = shits[0][2]

    u_coord = spec.section.coord(z_u)
    s_coord = spec.section.coord(z_s)
    n = spec.section.normal
    fu = sys.rhs(z_u[0], z_u[1], p)
    fs = sys.rhs(z_s[0], z_s[1], p)
    transversal = (abs(fu[0] * n[0] + fu[1] * n[1]) > transversality_min
                   and abs(fs[0] * n[0] + fs[1] * n[1]) > transversality_min)
    gap = spec.orientation_sign * (u_coord - s_coord)
    return SplittingResult(float(gap), w_u, transversal,
                           float(u_coord), float(s_coord))


def winding_connection_gap(sys, params, spec, **kw):
    """Gap of the k-turn connection; k = 0 reduces to plain splitting."""
    return splitting(sys, params, spec, **kw)


def find_connection_side(sys, params, source, target, tol=(1e-9, 1e-9),
                         radius=1e-5, arclength_cap=50.0, time_cap=200.0):
    """Which unstable side of ``source`` flows into ``target``.

    Returns (side, branch); raises NoContour if neither branch approaches.
    """
    p = sys.full_params(params)
    best = None
    for side in (1, -1):
        br = mf.grow_branch(sys, p, source, mf.Kind.UNSTABLE, side,
                            arclength_cap=arclength_cap, tol=tol,
                            time_cap=time_cap,
                            equilibria=[target.location],
                            equilibrium_radius=radius)
        d = np.min(np.linalg.norm(br.points - np.asarray(target.location),
                                  axis=1))
        if br.curve.termination is hi.Termination.EQUILIBRIUM_APPROACH \
                or d < radius:
            return side, br
        if best is None or d < best[1]:
            best = (side, d)
    raise NoContour(
        f"no unstable branch of {source.location} reaches {target.location} "
        f"(closest approach {best[1]:.2e})")


def classify_contour(sys, params, saddle_L, saddle_M, probe=True,
                     tol=(1e-9, 1e-9), radius=1e-3):
    """Monodromic vs non-monodromic decision for an existing contour.

    The primary criterion is the relative orientation of incoming and
    outgoing connection directions at each saddle (equal turning signs =
    monodromic); a limit-set probe orbit is run as a cross-check.
    """
    p = sys.full_params(params)
    side_LM, br_LM = find_connection_side(sys, p, saddle_L, saddle_M,
                                          tol=tol, radius=radius)
    side_ML, br_ML = find_connection_side(sys, p, saddle_M, saddle_L,
                                          tol=tol, radius=radius)

    def cross_sign(branch, target, out_dir):
        z = branch.points[-2] if len(branch.points) > 1 else branch.points[-1]
        v = np.asarray(sys.rhs(z[0], z[1], p))
        d_in = v / np.linalg.norm(v)
        d_out = np.asarray(out_dir) / np.linalg.norm(out_dir)
        return np.sign(d_in[0] * d_out[1] - d_in[1] * d_out[0])

    s_M = cross_sign(br_LM, saddle_M, side_ML * np.asarray(saddle_M.v_u))
    s_L = cross_sign(br_ML, saddle_L, side_LM * np.asarray(saddle_L.v_u))
    monodromic = s_M == s_L

    agrees = None
    if probe:
        contour = np.vstack([br_LM.points, br_ML.points])
        seed = contour.mean(axis=0)
        approach = _probe_accumulates(sys, p, seed, contour, tol)
        agrees = approach == monodromic
    return ContourClass(bool(monodromic), (side_LM, side_ML),
                        (float(s_L), float(s_M)), agrees)


def _probe_accumulates(sys, params, seed, contour, tol, t_max=200.0,
                       chunk=15.0, close=None):
    """True if a probe orbit ends up tracking the whole contour.

    A forward or backward chunk counts as accumulation when *all* of its
    samples lie near the contour, i.e. a full revolution hugs it; merely
    passing close to one saddle corner does not qualify.
    """
    scale = max(np.ptp(contour[:, 0]), np.ptp(contour[:, 1]))
    close = close if close is not None else 0.03 * scale
    for sign in (1.0, -1.0):
        t_now, z_now = 0.0, np.asarray(seed, float)
        while abs(t_now) < t_max:
            try:
                traj = hi.integrate(sys, params, z_now,
                                    (t_now, t_now + sign * chunk), tol=tol)
            except Exception:
                break
            d = np.min(
                np.linalg.norm(traj.xy[:, None, :] - contour[None, :, :],
                               axis=2), axis=1)
            if np.max(d) < close:
                return True
            if traj.termination is not hi.Termination.TIME_LIMIT:
                break
            t_now, z_now = float(traj.t[-1]), traj.end
    return False


def contour_exists(res_LM, res_ML, tol=GAP_TOLERANCE):
    return abs(res_LM.gap) <= tol and abs(res_ML.gap) <= tol


def with_winding(spec, k):
    return replace(spec, winding_count=k)
