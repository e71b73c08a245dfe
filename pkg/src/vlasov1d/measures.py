"""Discrete measures on T x R and analytic initial-distribution specs.

A DiscreteMeasure is the common currency between particle states, grid
solutions, and the transport solver: weighted atoms with weights summing
to one.  InitialDistribution subclasses describe initial data
analytically, so that the density sup-norm, the nonincreasing velocity
envelope g0, moments, and samplers are exact rather than estimated.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf, erfinv

from .geometry import wrap
from .seeding import derive_rng

__all__ = [
    "DiscreteMeasure",
    "InitialDistribution",
    "UniformBox",
    "TruncatedMaxwellian",
    "TableGrid",
    "sample_initial",
    "first_v_moment",
    "subsample",
    "systematic_indices",
    "save_measure_csv",
    "load_measure_csv",
]

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weighted atoms on T x R; weights are positive and sum to one."""

    x: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        x = wrap(np.atleast_1d(np.asarray(self.x, dtype=float)))
        v = np.atleast_1d(np.asarray(self.v, dtype=float))
        w = np.atleast_1d(np.asarray(self.w, dtype=float))
        if not (x.shape == v.shape == w.shape) or x.ndim != 1:
            raise ValueError("DiscreteMeasure: x, v, w must be equal-length 1d arrays")
        if np.any(w <= 0):
            raise ValueError("DiscreteMeasure: weights must be positive")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError(f"DiscreteMeasure: weights sum to {w.sum()!r}, not 1")
        object.__setattr__(self, "x", np.atleast_1d(x))
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)

    @property
    def n(self):
        return self.x.size


def first_v_moment(mu: DiscreteMeasure):
    """Weighted first absolute velocity moment, sum_k w_k |v_k|."""
    return float(np.sum(mu.w * np.abs(mu.v)))


def systematic_indices(weights, m, rng):
    """Systematic (stratified) resampling: m indices proportional to weights."""
    weights = np.asarray(weights, dtype=float)
    cw = np.cumsum(weights)
    cw /= cw[-1]
    u = (np.arange(m) + rng.random()) / m
    idx = np.searchsorted(cw, u, side="right")
    return np.minimum(idx, weights.size - 1)


def subsample(mu: DiscreteMeasure, m, seed):
    """m equally weighted atoms drawn by systematic resampling of ``mu``."""
    if m < 1:
        raise ValueError("subsample: m must be >= 1")
    idx = systematic_indices(mu.w, int(m), derive_rng(seed))
    return DiscreteMeasure(mu.x[idx], mu.v[idx], np.full(int(m), 1.0 / m))


def save_measure_csv(mu: DiscreteMeasure, path):
    """Write atoms as ``x,v,w`` rows; floats use shortest round-trip repr."""
    with open(path, "w") as fh:
        fh.write("x,v,w\n")
        for x, v, w in zip(mu.x, mu.v, mu.w):
            fh.write(f"{float(x)!r},{float(v)!r},{float(w)!r}\n")


def load_measure_csv(path):
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "x,v,w":
            raise ValueError(f"measure CSV: expected header 'x,v,w', got {header!r}")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    data = np.array([[float(c) for c in row] for row in rows])
    return DiscreteMeasure(data[:, 0], data[:, 1], data[:, 2])


class InitialDistribution:
    """Analytic initial phase-space density on T x R with compact v-support.

    Subclasses provide the pointwise density, exact cell averages, the
    nonincreasing envelope g0(v) = sup over x and |w| >= v of f(x, w),
    its integral, the first absolute v-moment, and an inverse-CDF map
    used by both the i.i.d. and the stratified samplers.
    """

    def pdf(self, x, v):
        raise NotImplementedError

    @property
    def sup_norm(self):
        raise NotImplementedError

    def g0_envelope(self, v):
        """Envelope at speed v; negative arguments clamp to g0(0)."""
        raise NotImplementedError

    @property
    def g0_integral(self):
        raise NotImplementedError

    @property
    def first_v_moment(self):
        raise NotImplementedError

    @property
    def v_support(self):
        """Smallest V such that no mass lies beyond |v| > V."""
        raise NotImplementedError

    def v_tail_mass(self, v):
        """Mass carried by |velocity| > v."""
        raise NotImplementedError

    def cell_averages(self, x_edges, v_edges):
        """Exact cell means of the density on the given rectangular grid."""
        raise NotImplementedError

    def map_uniform(self, ux, uv):
        """Inverse-CDF transport of unit-square points onto the density."""
        raise NotImplementedError

    def _check_mass(self):
        # construction-time quadrature check via exact cell integrals
        x_edges = np.linspace(-0.5, 0.5, 257)
        vs = self.v_support
        v_edges = np.linspace(-vs, vs, 257)
        vals = self.cell_averages(x_edges, v_edges)
        mass = vals.sum() * (x_edges[1] - x_edges[0]) * (v_edges[1] - v_edges[0])
        if abs(mass - 1.0) > 1e-9:
            raise ValueError(f"initial density integrates to {mass!r}, not 1")


@dataclass(frozen=True)
class UniformBox(InitialDistribution):
    """Uniform density on the full torus times [-v_half_width, v_half_width]."""

    v_half_width: float = 0.5

    def __post_init__(self):
        if self.v_half_width <= 0:
            raise ValueError("UniformBox: v_half_width must be positive")
        self._check_mass()

    def pdf(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        h = 0.5 / self.v_half_width
        return np.where(np.abs(v) <= self.v_half_width, h, 0.0) * np.ones_like(x)

    @property
    def sup_norm(self):
        return 0.5 / self.v_half_width

    def g0_envelope(self, v):
        v = np.maximum(np.asarray(v, dtype=float), 0.0)
        return np.where(v <= self.v_half_width, self.sup_norm, 0.0)

    @property
    def g0_integral(self):
        return 0.5

    @property
    def first_v_moment(self):
        return 0.5 * self.v_half_width

    @property
    def v_support(self):
        return self.v_half_width

    def v_tail_mass(self, v):
        return max(0.0, 1.0 - max(v, 0.0) / self.v_half_width)

    def cell_averages(self, x_edges, v_edges):
        lo = np.asarray(v_edges[:-1], dtype=float)
        hi = np.asarray(v_edges[1:], dtype=float)
        w = self.v_half_width
        overlap = np.clip(np.minimum(hi, w) - np.maximum(lo, -w), 0.0, None)
        col = self.sup_norm * overlap / (hi - lo)
        return np.tile(col, (len(x_edges) - 1, 1))

    def map_uniform(self, ux, uv):
        x = np.asarray(ux, dtype=float) - 0.5
        v = self.v_half_width * (2.0 * np.asarray(uv, dtype=float) - 1.0)
        return x, v


@dataclass(frozen=True)
class TruncatedMaxwellian(InitialDistribution):
    """Gaussian velocity profile truncated at |v| = vcut, uniform in x."""

    sigma: float
    vcut: float

    def __post_init__(self):
        if self.sigma <= 0 or self.vcut <= 0:
            raise ValueError("TruncatedMaxwellian: sigma and vcut must be positive")
        self._check_mass()

    @property
    def _norm(self):
        # 1 / integral of exp(-v^2 / 2 sigma^2) over [-vcut, vcut]
        z = self.sigma * math.sqrt(2.0 * math.pi) * erf(self.vcut / (self.sigma * math.sqrt(2.0)))
        return 1.0 / z

    def pdf(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        body = self._norm * np.exp(-0.5 * (v / self.sigma) ** 2)
        return np.where(np.abs(v) <= self.vcut, body, 0.0) * np.ones_like(x)

    @property
    def sup_norm(self):
        return self._norm

    def g0_envelope(self, v):
        v = np.maximum(np.asarray(v, dtype=float), 0.0)
        body = self._norm * np.exp(-0.5 * (v / self.sigma) ** 2)
        return np.where(v <= self.vcut, body, 0.0)

    @property
    def g0_integral(self):
        return 0.5

    @property
    def first_v_moment(self):
        s2 = self.sigma * self.sigma
        return 2.0 * self._norm * s2 * (1.0 - math.exp(-0.5 * (self.vcut / self.sigma) ** 2))

    @property
    def v_support(self):
        return self.vcut

    def v_tail_mass(self, v):
        v = min(max(v, 0.0), self.vcut)
        root2 = math.sqrt(2.0)
        inner = erf(v / (self.sigma * root2)) / erf(self.vcut / (self.sigma * root2))
        return 1.0 - inner

    def _v_antiderivative(self, v):
        # integral of pdf's v-profile from 0 to v (v clipped to the support)
        v = np.clip(v, -self.vcut, self.vcut)
        return self._norm * self.sigma * math.sqrt(math.pi / 2.0) * erf(v / (self.sigma * math.sqrt(2.0)))

    def cell_averages(self, x_edges, v_edges):
        lo = np.asarray(v_edges[:-1], dtype=float)
        hi = np.asarray(v_edges[1:], dtype=float)
        col = (self._v_antiderivative(hi) - self._v_antiderivative(lo)) / (hi - lo)
        return np.tile(col, (len(x_edges) - 1, 1))

    def map_uniform(self, ux, uv):
        x = np.asarray(ux, dtype=float) - 0.5
        root2 = math.sqrt(2.0)
        span = erf(self.vcut / (self.sigma * root2))
        v = self.sigma * root2 * erfinv(span * (2.0 * np.asarray(uv, dtype=float) - 1.0))
        return x, v


class TableGrid(InitialDistribution):
    """Piecewise-constant density given by a table on T x [-vmax, vmax].

    The table is normalized to unit mass at construction.  Envelope,
    moments, and tail masses come from exact sums over the cells; the
    sampler picks cells by mass and places points uniformly inside.
    """

    def __init__(self, values, vmax):
        values = np.asarray(values, dtype=float)
        if values.ndim != 2 or values.size == 0:
            raise ValueError("TableGrid: values must be a 2d array (nx, nv)")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("TableGrid: values must be finite and nonnegative")
        if vmax <= 0:
            raise ValueError("TableGrid: vmax must be positive")
        self.nx, self.nv = values.shape
        self.vmax = float(vmax)
        self.dx = 1.0 / self.nx
        self.dv = 2.0 * self.vmax / self.nv
        mass = values.sum() * self.dx * self.dv
        if mass <= 0:
            raise ValueError("TableGrid: table has zero mass")
        self.values = values / mass
        self.x_edges = -0.5 + self.dx * np.arange(self.nx + 1)
        self.v_edges = -self.vmax + self.dv * np.arange(self.nv + 1)
        self._check_mass()

    def pdf(self, x, v):
        x = wrap(np.asarray(x, dtype=float))
        v = np.asarray(v, dtype=float)
        i = np.clip(((x + 0.5) / self.dx).astype(int), 0, self.nx - 1)
        j = ((v + self.vmax) / self.dv).astype(int)
        inside = (v >= -self.vmax) & (v <= self.vmax)
        j = np.clip(j, 0, self.nv - 1)
        out = self.values[i, j]
        return np.where(inside, out, 0.0)

    @property
    def sup_norm(self):
        return float(self.values.max())

    def _envelope_steps(self):
        # cell reach t_j = max |v| over the cell's extent, column max values
        lo, hi = self.v_edges[:-1], self.v_edges[1:]
        reach = np.maximum(np.abs(lo), np.abs(hi))
        colmax = self.values.max(axis=0)
        order = np.argsort(reach)
        # suffix max: envelope(v) = max over columns with reach >= v
        sorted_reach = reach[order]
        suffix = np.maximum.accumulate(colmax[order][::-1])[::-1]
        return sorted_reach, suffix

    def g0_envelope(self, v):
        v = np.maximum(np.asarray(v, dtype=float), 0.0)
        sorted_reach, suffix = self._envelope_steps()
        idx = np.searchsorted(sorted_reach, v, side="left")
        out = np.where(idx < sorted_reach.size, suffix[np.minimum(idx, sorted_reach.size - 1)], 0.0)
        if out.ndim == 0:
            return float(out)
        return out

    @property
    def g0_integral(self):
        sorted_reach, suffix = self._envelope_steps()
        # envelope is a step function; integrate from 0 to max reach
        pts = np.concatenate(([0.0], sorted_reach))
        total = 0.0
        for k in range(sorted_reach.size):
            seg = sorted_reach[k] - pts[k]
            if seg > 0:
                total += seg * suffix[k]
        return float(total)

    @property
    def first_v_moment(self):
        lo, hi = self.v_edges[:-1], self.v_edges[1:]
        # integral of |v| over each v-cell
        absint = 0.5 * (hi * np.abs(hi) - lo * np.abs(lo))
        return float(np.sum(self.values * self.dx * absint[None, :]))

    @property
    def v_support(self):
        nonzero = np.nonzero(self.values.max(axis=0) > 0)[0]
        if nonzero.size == 0:
            return 0.0
        lo, hi = self.v_edges[:-1], self.v_edges[1:]
        return float(np.max(np.maximum(np.abs(lo[nonzero]), np.abs(hi[nonzero]))))

    def v_tail_mass(self, v):
        lo, hi = self.v_edges[:-1], self.v_edges[1:]
        # overlap of each cell with {|w| > v}
        v = max(float(v), 0.0)
        pos = np.clip(hi - np.maximum(lo, v), 0.0, None)
        neg = np.clip(np.minimum(hi, -v) - lo, 0.0, None)
        frac = np.clip(pos + neg, 0.0, hi - lo) / (hi - lo)
        col_mass = self.values.sum(axis=0) * self.dx * self.dv
        return float(np.sum(col_mass * frac))

    @staticmethod
    def _overlap_matrix(edges_a, edges_b):
        lo = np.maximum(edges_a[:-1, None], edges_b[None, :-1])
        hi = np.minimum(edges_a[1:, None], edges_b[None, 1:])
        return np.clip(hi - lo, 0.0, None)

    def cell_averages(self, x_edges, v_edges):
        ox = self._overlap_matrix(np.asarray(x_edges, dtype=float), self.x_edges)
        ov = self._overlap_matrix(np.asarray(v_edges, dtype=float), self.v_edges)
        area = np.diff(x_edges)[:, None] * np.diff(v_edges)[None, :]
        return (ox @ self.values @ ov.T) / area

    def map_uniform(self, ux, uv):
        ux = np.asarray(ux, dtype=float)
        uv = np.asarray(uv, dtype=float)
        col_mass = self.values.sum(axis=1)  # per x-column, up to common factors
        cx = np.cumsum(col_mass)
        cx /= cx[-1]
        i = np.minimum(np.searchsorted(cx, ux, side="right"), self.nx - 1)
        prev = np.where(i > 0, cx[i - 1], 0.0)
        fx = (ux - prev) / (cx[i] - prev)
        x = self.x_edges[i] + fx * self.dx
        # conditional v given the x-column
        pv = self.values[i, :]
        cv = np.cumsum(pv, axis=1)
        cv /= cv[:, -1:]
        j = np.minimum((cv < uv[:, None]).sum(axis=1), self.nv - 1)
        rows = np.arange(i.size)
        prevv = np.where(j > 0, cv[rows, np.maximum(j - 1, 0)], 0.0)
        fv = (uv - prevv) / (cv[rows, j] - prevv)
        v = self.v_edges[j] + fv * self.dv
        return wrap(x), v


def _stratified_unit_square(n, rng):
    """Jittered k1 x k2 lattice in the unit square; k1 k2 = n, k1 <= k2."""
    k1 = int(math.isqrt(n))
    while n % k1:
        k1 -= 1
    k2 = n // k1
    a, b = np.meshgrid(np.arange(k1), np.arange(k2), indexing="ij")
    ux = (a.ravel() + rng.random(n)) / k1
    uv = (b.ravel() + rng.random(n)) / k2
    return ux, uv


def sample_initial(f0: InitialDistribution, n, seed, strategy="iid"):
    """Draw an n-particle initial state from ``f0``; deterministic per seed.

    ``strategy`` is "iid" (inverse-CDF of independent uniforms) or
    "stratified" (jittered lattice through the same inverse CDF, which
    covers the support in a low-discrepancy way).
    """
    from .particles import ParticleState

    if n < 1:
        raise ValueError("sample_initial: n must be >= 1")
    rng = derive_rng(seed)
    n = int(n)
    if strategy == "iid":
        ux, uv = rng.random(n), rng.random(n)
    elif strategy == "stratified":
        ux, uv = _stratified_unit_square(n, rng)
    else:
        raise ValueError(f"sample_initial: unknown strategy {strategy!r}")
    x, v = f0.map_uniform(ux, uv)
    return ParticleState(wrap(x), np.asarray(v, dtype=float), 0.0)
