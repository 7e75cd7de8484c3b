"""
Logarithmic grids and sampled densities for the fast multiplicative convolution.

On a fixed-sign piece x_j = σ_j e^{u_j}, and dy/|y| = du, so the
multiplicative convolution of two pieces is the additive convolution of
their log-samples.
"""
import math
from dataclasses import dataclass

import numpy as np

from hlab.distributions.reps import Density
from hlab.errors import ContainsZero
from hlab.settings import resolve

MAX_DIMENSION = 3


@dataclass(frozen=True)
class LogGrid:
    quadrant: tuple
    origin: tuple
    h: tuple
    n: tuple

    def __post_init__(self):
        for n in self.n:
            if n < 4 or n & (n - 1):
                raise ValueError('grid length {} is not a power of two'.format(n))

    @property
    def dimension(self):
        return len(self.quadrant)

    def axis(self, j):
        """Log-coordinates u_j of the grid."""
        return self.origin[j] + self.h[j] * np.arange(self.n[j])

    def points(self, j):
        return self.quadrant[j] * np.exp(self.axis(j))

    def to_json(self):
        return {'quadrant': list(self.quadrant), 'origin': list(self.origin),
                'h': list(self.h), 'n': list(self.n)}


@dataclass(frozen=True)
class Kernel1D:
    """A fixed-sign factor sampled in log-coordinates on [lower, upper]."""
    sign: int
    lower: float
    upper: float
    fn: object

    @property
    def width(self):
        return self.upper - self.lower

    def __call__(self, u):
        return self.fn(np.asarray(u, dtype=float))


@dataclass(frozen=True)
class SeparablePiece:
    weight: float
    kernels: tuple

    @property
    def quadrant(self):
        return tuple(k.sign for k in self.kernels)


def _profile_kernel(profile, sign):
    return lambda u: profile.value(sign * np.exp(u))


def _log_range(lo, hi):
    if lo < 0 < hi or lo == 0 or hi == 0:
        raise ContainsZero('interval [{:g}, {:g}] meets 0'.format(lo, hi))
    sign = 1 if lo > 0 else -1
    a, b = sorted((math.log(abs(lo)), math.log(abs(hi))))
    return sign, a, b


def density_pieces(dist, settings=None):
    """Split a density into separable fixed-sign pieces in log-coordinates."""
    settings = resolve(settings)
    if isinstance(dist, SampledDensity):
        return dist.separable_pieces()
    if not isinstance(dist, Density):
        raise ValueError('the fast path takes densities, got {}'.format(type(dist).__name__))
    if dist.dimension > MAX_DIMENSION:
        raise ValueError('the fast path supports d <= {}'.format(MAX_DIMENSION))
    radius = None
    if not dist.support.bounded:
        radius = dist.truncation_radius(1.0, 0, settings.mellin_tol * settings.tail_factor)
    out = []
    for box in dist.support.normalized().boxes:
        kernels = []
        for profile, iv in zip(dist.profiles, box):
            lo, hi = iv.as_floats()
            if radius is not None:
                lo, hi = max(lo, -radius), min(hi, radius)
            if not hi > lo:
                kernels = None
                break
            sign, a, b = _log_range(lo, hi)
            kernels.append(Kernel1D(sign, a, b, _profile_kernel(profile, sign)))
        if kernels:
            out.append(SeparablePiece(dist.weight, tuple(kernels)))
    return out


def plan_grids(s, t, n, settings=None):
    """One LogGrid per (s piece, t piece) pair, sharing a step per axis.

    The step fits the widest factor into n/2 - 2 intervals, so every pair's
    full linear convolution fits in n samples with no wrap-around.
    """
    if n < 16 or n & (n - 1):
        raise ValueError('grid size {} must be a power of two >= 16'.format(n))
    sp = density_pieces(s, settings)
    tp = density_pieces(t, settings)
    if not sp or not tp:
        return [], sp, tp
    d = len(sp[0].kernels)
    steps = []
    for j in range(d):
        width = max(p.kernels[j].width for p in sp + tp)
        steps.append(width / (n // 2 - 2))
    plans = []
    for a in sp:
        for b in tp:
            plans.append(LogGrid(
                tuple(x * y for x, y in zip(a.quadrant, b.quadrant)),
                tuple(ka.lower + kb.lower for ka, kb in zip(a.kernels, b.kernels)),
                tuple(steps), (n,) * d))
    return plans, sp, tp


@dataclass(frozen=True)
class SampledPiece:
    weight: float
    grid: LogGrid
    values: tuple
    count: tuple

    def axis_values(self, j, w):
        axis = self.grid.axis(j)[:self.count[j]]
        return np.interp(w, axis, self.values[j][:self.count[j]], left=0.0, right=0.0)


class SampledDensity:
    """Σ weight · Π_j H_j(log|z_j|) over fixed-sign pieces.

    `error` is the certified relative error estimate, None when unchecked.
    """

    def __init__(self, pieces, dimension, error=None):
        self.pieces = list(pieces)
        self.dimension = dimension
        self.error = error

    def values_at(self, z):
        z = np.asarray(z, dtype=float).reshape(-1, self.dimension)
        out = np.zeros(z.shape[0])
        with np.errstate(divide='ignore'):
            w = np.log(np.abs(z))
        for p in self.pieces:
            mask = np.all(z * np.array(p.grid.quadrant) > 0, axis=1)
            if not np.any(mask):
                continue
            v = np.full(int(mask.sum()), p.weight)
            for j in range(self.dimension):
                v = v * p.axis_values(j, w[mask, j])
            out[mask] += v
        return out

    __call__ = values_at

    def mass(self):
        """∫ over z, with dz_j = e^{w_j} dw_j, by the trapezoid rule."""
        total = []
        for p in self.pieces:
            m = p.weight
            for j in range(self.dimension):
                c = p.count[j]
                f = p.values[j][:c] * np.exp(p.grid.axis(j)[:c])
                m *= p.grid.h[j] * (math.fsum(f) - (f[0] + f[-1]) / 2)
            total.append(m)
        return math.fsum(total)

    def separable_pieces(self):
        out = []
        for p in self.pieces:
            kernels = []
            for j in range(self.dimension):
                axis = p.grid.axis(j)[:p.count[j]]
                vals = p.values[j][:p.count[j]]
                kernels.append(Kernel1D(
                    p.grid.quadrant[j], float(axis[0]), float(axis[-1]),
                    lambda u, axis=axis, vals=vals: np.interp(u, axis, vals,
                                                             left=0.0, right=0.0)))
            out.append(SeparablePiece(p.weight, tuple(kernels)))
        return out

    def grid_points(self, limit=1024):
        """Sorted sample points of every piece (d = 1), thinned to about `limit`."""
        if self.dimension != 1:
            raise ValueError('grid listing is one-dimensional')
        pts = np.unique(np.concatenate(
            [p.grid.points(0)[:p.count[0]] for p in self.pieces] or [np.zeros(0)]))
        stride = max(1, int(math.ceil(len(pts) / limit)))
        return pts[::stride]

    def to_rows(self, limit=1024):
        pts = self.grid_points(limit)
        return [(float(z), float(v)) for z, v in zip(pts, self.values_at(pts[:, None]))]
