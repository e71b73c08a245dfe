"""Wrapped arithmetic on the unit torus [-1/2, 1/2) and the phase-space metric.

Positions live on the torus T identified with the half-open interval
[-1/2, 1/2); velocities are ordinary reals.  Everything here is pure and
vectorized: scalars in give scalars out, arrays in give arrays out.
"""

import numpy as np

__all__ = ["wrap", "torus_diff", "torus_distance", "phase_distance"]


def wrap(r):
    """Canonical representative of r mod 1 in [-1/2, 1/2).

    The half-open convention maps an exact 1/2 to -1/2.  Raises
    ValueError on non-finite input.
    """
    r = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(r)):
        raise ValueError("wrap: input must be finite")
    out = np.mod(r + 0.5, 1.0) - 0.5
    if out.ndim == 0:
        return float(out)
    return out


def torus_diff(a, b):
    """Wrapped difference a - b on the torus, in [-1/2, 1/2)."""
    return wrap(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))


def torus_distance(a, b):
    """Geodesic distance on the torus; at most 1/2."""
    return np.abs(torus_diff(a, b))


def phase_distance(p, q):
    """Euclidean-type distance on T x R between phase points (x, v).

    ``p`` and ``q`` are (x, v) pairs; arrays broadcast componentwise.
    """
    px, pv = p
    qx, qv = q
    dx = torus_distance(px, qx)
    dv = np.asarray(pv, dtype=float) - np.asarray(qv, dtype=float)
    out = np.hypot(dx, dv)
    if np.ndim(out) == 0:
        return float(out)
    return out
