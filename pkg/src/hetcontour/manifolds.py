"""One-dimensional invariant-manifold branches of planar saddles.

Branches are grown by shooting from a small offset along the corresponding
eigenvector; stable branches are integrated in backward time so every curve
is traversed away from its saddle.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import integrate as hi
from .errors import BlowupAtSeed

DEFAULT_SEED_OFFSET = 1e-7


class Kind(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"


@dataclass
class ManifoldBranch:
    saddle: object
    kind: Kind
    side: int                  # +1 or -1, sign of the eigenvector offset
    curve: hi.Trajectory
    seed_offset: float

    @property
    def points(self):
        return self.curve.xy


def seed_point(saddle, kind, side, delta=None):
    loc = np.asarray(saddle.location)
    if delta is None:
        delta = DEFAULT_SEED_OFFSET * (1.0 + np.linalg.norm(loc))
    v = np.asarray(saddle.v_u if kind is Kind.UNSTABLE else saddle.v_s)
    return loc + side * delta * v, delta


def grow_branch(sys, params, saddle, kind, side, arclength_cap=20.0,
                events=(), directions=None, terminal=None,
                tol=hi.DEFAULT_TOL, delta=None, time_cap=1e4,
                equilibria=(), equilibrium_radius=1e-8, chunk=5.0):
    """Grow one of the four branches of ``saddle`` up to ``arclength_cap``.

    Integration also stops at a terminal event hit, blowup, or on approach
    to any of the registered ``equilibria``.
    """
    x0, delta = seed_point(saddle, kind, side, delta)
    sign = 1.0 if kind is Kind.UNSTABLE else -1.0
    rate = saddle.lambda_u if kind is Kind.UNSTABLE else -saddle.lambda_s

    p = sys.full_params(params)
    pieces = []
    hits = []
    length = 0.0
    t_now = 0.0
    z_now = x0
    termination = hi.Termination.TIME_LIMIT
    terminal_index = None
    # first chunk covers the slow escape from the linear zone
    t_chunk = max(chunk, 3.0 / max(rate, 1e-6))
    while True:
        t_next = t_now + sign * t_chunk
        traj = hi.integrate(sys, p, z_now, (t_now, t_next), tol=tol,
                            events=events, directions=directions,
                            terminal=terminal, equilibria=equilibria,
                            equilibrium_radius=equilibrium_radius)
        pieces.append(traj)
        hits.extend(traj.event_hits)
        seg = float(np.sum(np.linalg.norm(np.diff(traj.xy, axis=0), axis=1)))
        length += seg
        t_now = float(traj.t[-1])
        z_now = traj.end
        if traj.termination is not hi.Termination.TIME_LIMIT:
            termination = traj.termination
            terminal_index = traj.terminal_index
            break
        if length >= arclength_cap:
            termination = hi.Termination.ARCLENGTH_CAP
            break
        if abs(t_now) >= time_cap:
            break
        t_chunk = chunk

    if termination is hi.Termination.BLOWUP and len(pieces) == 1 \
            and pieces[0].arclength() < 10 * delta:
        raise BlowupAtSeed(f"branch blew up within {pieces[0].arclength():.2e}")

    curve = _concat(pieces, termination, hits, terminal_index)
    return ManifoldBranch(saddle, kind, side, curve, delta)


def _concat(pieces, termination, hits, terminal_index):
    if len(pieces) == 1:
        tr = pieces[0]
        return hi.Trajectory(tr.t, tr.xy, tr.interpolant, termination,
                             hits, terminal_index)
    t = np.concatenate([pieces[0].t] + [p.t[1:] for p in pieces[1:]])
    xy = np.concatenate([pieces[0].xy] + [p.xy[1:] for p in pieces[1:]])
    interps = [p.interpolant for p in pieces]

    class _Chain:
        def __init__(self):
            lows = np.array([min(i.t_min, i.t_max) for i in interps])
            self.order = np.argsort(lows)
            self.lows = lows[self.order]

        def __call__(self, tq):
            tq_arr = np.atleast_1d(np.asarray(tq, float))
            idx = np.clip(np.searchsorted(self.lows, tq_arr, side="right") - 1,
                          0, len(interps) - 1)
            out = np.empty((2, tq_arr.size))
            for i in np.unique(idx):
                sel = idx == i
                out[:, sel] = interps[self.order[i]](tq_arr[sel])
            return out[:, 0] if np.isscalar(tq) or np.asarray(tq).ndim == 0 else out

    return hi.Trajectory(t, xy, _Chain(), termination, hits, terminal_index)
