"""
Hadamard operators L(S) = S⋆T through their transpose (Mφ)(y) = T_x φ(xy).
"""
import logging as log
import threading
from dataclasses import asdict, dataclass

import numpy as np

from hlab.distributions.functions import Dilated, ReciprocalMonomial, SmoothFunction, as_points
from hlab.errors import SupportTouchesHyperplane
from hlab.quadrature import integrate_cells
from hlab.regions.dilation import product_set, reciprocal
from hlab.settings import resolve


class SampledFunction(SmoothFunction):
    """Lazily evaluated function of y with a certified support.

    Points outside the support are exactly 0 without calling the evaluator.
    """

    def __init__(self, dimension, evaluator, support, max_order, cache_size=0):
        self.dimension = dimension
        self.evaluator = evaluator
        self._support = support
        self.max_derivative_order = max_order
        self.cache_size = cache_size
        self._cache = {}
        self._lock = threading.Lock()

    def support(self):
        return self._support

    def _partial(self, points, beta):
        out = np.zeros(points.shape[0])
        inside = np.nonzero(self._support.contains_array(points))[0]
        if len(inside) == 0:
            return out
        keys = [(beta, points[i].tobytes()) for i in inside]
        with self._lock:
            cached = [self._cache.get(k) for k in keys]
        missing = [i for i, c in zip(inside, cached) if c is None]
        fresh = {}
        if missing:
            values = self.evaluator(points[missing], beta)
            fresh = {(beta, points[i].tobytes()): v for i, v in zip(missing, values)}
        for i, k, c in zip(inside, keys, cached):
            out[i] = c if c is not None else fresh[k]
        if fresh and self.cache_size:
            with self._lock:
                if len(self._cache) + len(fresh) <= self.cache_size:
                    self._cache.update(fresh)
        return out


@dataclass(frozen=True)
class EigenReport:
    alpha: tuple
    eigenvalue: float
    residual: float
    scale: float
    tolerance: float
    passed: bool
    truncation_radius: float = None

    def to_dict(self):
        out = asdict(self)
        out['alpha'] = list(self.alpha)
        return out


def _require_clearance(dist):
    eps = dist.hyperplane_clearance()
    if eps <= 0:
        raise SupportTouchesHyperplane(
            'support {} meets a coordinate hyperplane'.format(dist.support_of()))
    return eps


def transpose_apply(dist, phi, settings=None):
    """ψ = Mφ, y ↦ T_x φ(xy)."""
    settings = resolve(settings)
    _require_clearance(dist)
    support = product_set(reciprocal(dist.support_of()), phi.support())

    def evaluator(ys, beta):
        return dist.dilated_partial(phi, ys, beta, settings)

    return SampledFunction(dist.dimension, evaluator, support,
                           phi.max_derivative_order - dist.max_order,
                           settings.sample_cache_size)


def _eigen(dist, alpha, settings):
    eps = _require_clearance(dist)
    return dist.integrate(ReciprocalMonomial(alpha, eps), settings)


def eigenvalue(dist, alpha, settings=None):
    """m_α = T_x(σ(x) x^{-α-𝟙})."""
    return _eigen(dist, tuple(alpha), resolve(settings)).value


def eigentable(dist, alphas, phi, settings=None):
    """Eigenvalue identity residuals ∫ξ^α(m_α φ - ψ) for every α, one integration."""
    settings = resolve(settings)
    alphas = sorted(tuple(int(a) for a in alpha) for alpha in alphas)
    eigen = [_eigen(dist, a, settings) for a in alphas]
    m = np.array([e.value for e in eigen])
    psi = transpose_apply(dist, phi, settings)
    domain = phi.support().union(psi.support()).normalized()
    powers = np.array(alphas, dtype=float)
    count = len(alphas)

    def func(x):
        f = phi.partial(x)
        g = psi.partial(x)
        mono = np.prod(x[:, None, :] ** powers[None, :, :], axis=2)
        return np.concatenate([mono * (m[None, :] * f[:, None] - g[:, None]),
                               np.abs(mono * f[:, None])], axis=1)

    lowers, uppers = domain.cells()
    values = integrate_cells(func, lowers, uppers, settings, ncomp=2 * count)
    tol = settings.resid_tol
    rows = []
    for i, a in enumerate(alphas):
        res, scale = float(values[i]), float(values[count + i])
        rows.append(EigenReport(a, float(m[i]), res, scale, tol,
                                bool(abs(res) <= tol * max(1.0, scale)),
                                eigen[i].truncation_radius))
        log.debug('alpha %s: m=%.12g residual=%.3e', a, m[i], res)
    return rows


def verify_monomial_eq(dist, alpha, phi, settings=None):
    return eigentable(dist, [alpha], phi, settings)[0]


def operator_apply(dist, s, phi, settings=None):
    """(S⋆T)φ = S_y(T_x φ(xy))."""
    settings = resolve(settings)
    return s.pair(transpose_apply(dist, phi, settings), settings)


def dilation_commutes(dist, phi, eta, y, settings=None):
    """|M(φ(η·))(y) - (Mφ)(ηy)|."""
    settings = resolve(settings)
    eta = np.asarray(eta, dtype=float)
    y = as_points(y, dist.dimension)
    left = transpose_apply(dist, Dilated(phi, eta), settings).partial(y)
    right = transpose_apply(dist, phi, settings).partial(y * eta)
    return np.abs(left - right)


def induced_density_apply(s, t, phi, settings=None):
    """∫ (s⋆t)(z) φ(z) dz with the induced density from the direct oracle."""
    from hlab.mellin.engine import convolve_oracle
    settings = resolve(settings)
    domain = phi.support().intersection(
        product_set(s.support_of(), t.support_of())).normalized()
    if domain.is_empty:
        return 0.0
    lowers, uppers = domain.cells()
    value = integrate_cells(lambda z: convolve_oracle(s, t, z, settings) * phi.partial(z),
                            lowers, uppers, settings, ncomp=1)
    return float(value[0])
