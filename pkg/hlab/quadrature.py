"""
Adaptive tensor Gauss-Legendre quadrature over boxes.

Two calling modes share one panel tree on the reference cube [0,1]^d:

* shared box: ``lower``/``upper`` of shape (d,); ``func(x)`` gets points of
  shape (k, d) and returns (k,) or (k, m) for m integrands;
* per-component boxes: ``lower``/``upper`` of shape (m, d); ``func(x, comp)``
  gets points (k, d) plus the component index of every point and returns (k,).

Panels are accepted per component, and each component's contributions are
summed with ``math.fsum``. A component's value therefore never depends on
which other components share the batch.
"""
import logging as log
import math
from itertools import product

import numpy as np
from scipy.special import roots_legendre

from hlab.errors import QuadratureNoConvergence
from hlab.settings import resolve

_RULES = {}


def _rule(order, d):
    key = (order, d)
    if key not in _RULES:
        x, w = roots_legendre(order)
        x, w = (x + 1) / 2, w / 2
        nodes = np.array(list(product(x, repeat=d)), dtype=float).reshape(-1, d)
        weights = np.prod(np.array(list(product(w, repeat=d)), dtype=float)
                          .reshape(-1, d), axis=1)
        _RULES[key] = (nodes, weights)
    return _RULES[key]


class Integrator:

    def __init__(self, func, lower, upper, settings=None, tol=None):
        self.settings = resolve(settings)
        self.func = func
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError('quadrature boxes must be bounded')
        self.shared = lower.ndim == 1
        if self.shared:
            lower, upper = lower[None, :], upper[None, :]
        self.lower = lower
        self.width = np.maximum(upper - lower, 0.0)
        self.dimension = lower.shape[1]
        self.volume = np.prod(self.width, axis=1)
        self.tol = self.settings.quad_tol if tol is None else tol
        self.nodes, self.weights = _rule(self.settings.gauss_order, self.dimension)
        self.offsets = np.array(list(product((0.0, 1.0), repeat=self.dimension)))

    def _points(self, origins, width):
        # (K, q^d, d) reference points
        return origins[:, None, :] + width * self.nodes[None, :, :]

    def _estimate_shared(self, origins, width, comps, ncomp):
        uniq, inverse = np.unique(origins, axis=0, return_inverse=True)
        inverse = np.asarray(inverse).reshape(-1)
        q = self.nodes.shape[0]
        per_chunk = max(1, self.settings.chunk_size // q)
        est = np.empty((len(uniq), ncomp))
        ab = np.empty((len(uniq), ncomp))
        scale = width ** self.dimension * self.volume[0]
        for s in range(0, len(uniq), per_chunk):
            ref = self._points(uniq[s:s + per_chunk], width)
            x = self.lower[0] + self.width[0] * ref.reshape(-1, self.dimension)
            vals = np.asarray(self.func(x), dtype=float).reshape(len(ref), q, -1)
            est[s:s + per_chunk] = np.einsum('pqm,q->pm', vals, self.weights) * scale
            ab[s:s + per_chunk] = np.einsum(
                'pqm,q->pm', np.abs(vals), self.weights) * scale
        return est[inverse, comps], ab[inverse, comps]

    def _estimate_split(self, origins, width, comps):
        q = self.nodes.shape[0]
        per_chunk = max(1, self.settings.chunk_size // q)
        est = np.empty(len(origins))
        ab = np.empty(len(origins))
        for s in range(0, len(origins), per_chunk):
            c = comps[s:s + per_chunk]
            ref = self._points(origins[s:s + per_chunk], width)
            x = self.lower[c][:, None, :] + self.width[c][:, None, :] * ref
            vals = np.asarray(self.func(x.reshape(-1, self.dimension),
                                        np.repeat(c, q)), dtype=float)
            vals = vals.reshape(len(c), q)
            scale = width ** self.dimension * self.volume[c]
            est[s:s + per_chunk] = vals @ self.weights * scale
            ab[s:s + per_chunk] = np.abs(vals) @ self.weights * scale
        return est, ab

    def run(self, ncomp=None):
        s = self.settings
        d = self.dimension
        if self.shared:
            if ncomp is None:
                probe = np.asarray(self.func(self.lower[:1] + 0.5 * self.width[:1]))
                ncomp = 1 if probe.ndim == 1 else probe.shape[1]
            active = np.arange(ncomp) if self.volume[0] > 0 else np.arange(0)
            total = ncomp
        else:
            total = len(self.lower)
            active = np.nonzero(self.volume > 0)[0]
        tol = np.broadcast_to(np.asarray(self.tol, dtype=float), (total,))

        def estimate(origins, width, comps):
            if self.shared:
                return self._estimate_shared(origins, width, comps, total)
            return self._estimate_split(origins, width, comps)

        depth = s.min_depth
        width = 0.5 ** depth
        cells = np.array(list(product(np.arange(2 ** depth) * width, repeat=d)),
                         dtype=float).reshape(-1, d)
        origins = np.repeat(cells[None, :, :], len(active), axis=0).reshape(-1, d)
        comps = np.repeat(active, len(cells))
        est, ab = (estimate(origins, width, comps) if len(comps)
                   else (np.zeros(0), np.zeros(0)))
        done_c, done_v, done_a = [], [], []
        nchild = len(self.offsets)
        while len(comps):
            if depth >= s.max_depth:
                raise QuadratureNoConvergence(
                    '{} panels unresolved at depth {} (tol {:g})'.format(
                        len(comps), depth, float(np.max(tol[comps]))))
            half = width / 2
            child_o = (origins[:, None, :] + half * self.offsets[None, :, :]).reshape(-1, d)
            child_c = np.repeat(comps, nchild)
            cest, cab = estimate(child_o, half, child_c)
            csum = cest.reshape(-1, nchild).sum(axis=1)
            cabs = cab.reshape(-1, nchild).sum(axis=1)
            frac = max(width ** d, s.quad_min_panel)
            ok = np.abs(csum - est) <= np.maximum(tol[comps] * frac,
                                                  s.quad_rel_floor * cabs)
            done_c.append(comps[ok])
            done_v.append(csum[ok])
            done_a.append(cabs[ok])
            keep = np.repeat(~ok, nchild)
            origins, comps = child_o[keep], child_c[keep]
            est, ab = cest[keep], cab[keep]
            depth += 1
            width = half
        log.debug('quadrature finished at depth %d for %d components', depth, total)
        return _collect(done_c, done_v, total), _collect(done_c, done_a, total)


def _collect(comps, values, total):
    out = np.zeros(total)
    if not comps:
        return out
    c = np.concatenate(comps)
    v = np.concatenate(values)
    order = np.argsort(c, kind='stable')
    c, v = c[order], v[order]
    bounds = np.searchsorted(c, np.arange(total + 1))
    for i in range(total):
        if bounds[i + 1] > bounds[i]:
            out[i] = math.fsum(v[bounds[i]:bounds[i + 1]])
    return out


def integrate(func, lower, upper, settings=None, tol=None, ncomp=None,
              with_abs=False):
    """Integrate over one box (shared mode) or one box per component."""
    values, absolute = Integrator(func, lower, upper, settings, tol).run(ncomp)
    if with_abs:
        return values, absolute
    return values


def integrate_cells(func, lowers, uppers, settings=None, tol=None, ncomp=None):
    """Shared-mode integral over a list of disjoint boxes, summed with fsum."""
    lowers = np.asarray(lowers, dtype=float)
    uppers = np.asarray(uppers, dtype=float)
    n = max(len(lowers), 1)
    tol = resolve(settings).quad_tol if tol is None else tol
    parts = [integrate(func, lo, hi, settings, tol / n, ncomp)
             for lo, hi in zip(lowers, uppers)]
    if not parts:
        return np.zeros(ncomp or 1)
    stacked = np.stack(parts)
    return np.array([math.fsum(stacked[:, i]) for i in range(stacked.shape[1])])


def gauss_fixed(func, lower, upper, order=48, panels=64):
    """Fixed composite Gauss-Legendre rule on a 1-D interval (test oracle)."""
    x, w = roots_legendre(order)
    edges = np.linspace(lower, upper, panels + 1)
    total = []
    for a, b in zip(edges[:-1], edges[1:]):
        pts = (b - a) / 2 * x + (a + b) / 2
        total.append(float(np.dot(w, func(pts))) * (b - a) / 2)
    return math.fsum(total)
