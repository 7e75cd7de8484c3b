"""
Smooth functions that distributions are paired with.

Every implementation evaluates exact partial derivatives: bump and plateau
factors differentiate through polynomial recurrences, never by differences.
"""
import math
from abc import ABCMeta, abstractmethod
from functools import lru_cache
from math import comb
from itertools import product

import numpy as np
from numpy.polynomial import Polynomial as NpPoly

from hlab.errors import UnderivableOrder
from hlab.regions import INF, Interval, Region, exact

# min of e^{-1/t} + e^{-1/(1-t)} on [0,1] is 2e^{-2} ~ 0.2707
PLATEAU_DENOMINATOR_MIN = 0.27


def falling(n, k):
    """n (n-1) ... (n-k+1)."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


def multi_indices(bound):
    """All multi-indices componentwise <= bound, lexicographic."""
    return list(product(*[range(b + 1) for b in bound]))


def as_points(points, d):
    return np.asarray(points, dtype=float).reshape(-1, d)


def _peak(j):
    # max over s >= 1 of s^j e^{-s}
    if j <= 1:
        return math.exp(-1.0)
    return j ** j * math.exp(-j)


class SmoothFunction(metaclass=ABCMeta):
    dimension = 1
    max_derivative_order = 0

    @abstractmethod
    def _partial(self, points, beta):
        pass

    @abstractmethod
    def support(self):
        pass

    def partial(self, points, beta=None):
        beta = tuple(beta) if beta is not None else (0,) * self.dimension
        self.check_order(beta)
        return self._partial(as_points(points, self.dimension), beta)

    def __call__(self, points):
        return self.partial(points)

    def check_order(self, beta):
        if sum(beta) > self.max_derivative_order:
            raise UnderivableOrder(sum(beta), self.max_derivative_order)

    def sup_bound(self, beta):
        raise NotImplementedError(
            '{} has no certified sup bound'.format(type(self).__name__))

    def growth(self, beta):
        """(C, k) with |d^beta g(x)| <= C (1+|x|)^k on the support."""
        return self.sup_bound(beta), 0

    def separable(self, beta):
        """[(coef, [AxisFactor per coordinate])] summing to d^beta g, or None."""
        return None


class Factor(metaclass=ABCMeta):
    """One-dimensional factor of a product term."""

    @abstractmethod
    def derivative(self, x, n):
        pass

    def interval(self):
        return None

    @abstractmethod
    def sup_bound(self, n, lo, hi):
        pass


class Polynomial(Factor):

    def __init__(self, coeffs):
        self.coeffs = [float(c) for c in coeffs] or [0.0]
        self.poly = NpPoly(self.coeffs)

    @classmethod
    def monomial(cls, k):
        return cls([0.0] * k + [1.0])

    def derivative(self, x, n):
        return self.poly.deriv(n)(x) if n else self.poly(x)

    def sup_bound(self, n, lo, hi):
        m = max(abs(lo), abs(hi))
        c = self.poly.deriv(n).coef if n else self.poly.coef
        return float(sum(abs(ci) * m ** i for i, ci in enumerate(c)))

    def to_json(self):
        return {'polynomial': self.coeffs}


@lru_cache(maxsize=None)
def _bump_polys(n):
    """P_k with b^{(k)}(u) = P_k(u) q^{-2k} b(u), q = 1 - u^2."""
    u = NpPoly([0.0, 1.0])
    q = NpPoly([1.0, 0.0, -1.0])
    polys = [NpPoly([1.0])]
    for k in range(n):
        p = polys[-1]
        polys.append(p.deriv() * q * q + 4 * k * u * q * p - 2 * u * p)
    return tuple(polys)


class Bump(Factor):
    """exp(-1/(1-((x-c)/r)^2)) on |x-c| < r."""

    def __init__(self, center, radius):
        if radius <= 0:
            raise ValueError('bump radius must be positive')
        self.center = float(center)
        self.radius = float(radius)

    def interval(self):
        return (exact(self.center) - exact(self.radius),
                exact(self.center) + exact(self.radius))

    def derivative(self, x, n):
        x = np.asarray(x, dtype=float)
        u = (x - self.center) / self.radius
        out = np.zeros_like(u)
        inside = np.abs(u) < 1
        ui = u[inside]
        q = 1 - ui * ui
        p = _bump_polys(n)[n]
        out[inside] = p(ui) * np.exp(-1 / q - 2 * n * np.log(q))
        return out / self.radius ** n

    def sup_bound(self, n, lo, hi):
        p = _bump_polys(n)[n]
        return float(np.sum(np.abs(p.coef))) * _peak(2 * n) / self.radius ** n

    def to_json(self):
        return {'bump': [self.center, self.radius]}


@lru_cache(maxsize=None)
def _step_polys(n):
    """R_k with (e^{-1/t})^{(k)} = R_k(1/t) e^{-1/t}."""
    s2 = NpPoly([0.0, 0.0, 1.0])
    polys = [NpPoly([1.0])]
    for _ in range(n):
        r = polys[-1]
        polys.append(s2 * (r - r.deriv()))
    return tuple(polys)


def _exp_inv_derivs(t, n):
    """Derivatives 0..n of e^{-1/t} (zero for t <= 1/700)."""
    t = np.asarray(t, dtype=float)
    out = np.zeros((n + 1,) + t.shape)
    ok = t > 1.0 / 700
    s = 1.0 / t[ok]
    e = np.exp(-s)
    for k, r in enumerate(_step_polys(n)):
        out[k][ok] = r(s) * e
    return out


def smooth_step(t, n):
    """Derivatives 0..n of S = F(t)/(F(t)+F(1-t)), F(t) = e^{-1/t}, on [0,1]."""
    f1 = _exp_inv_derivs(t, n)
    f2 = _exp_inv_derivs(1 - np.asarray(t), n)
    sign = np.array([(-1) ** k for k in range(n + 1)]).reshape(-1, *([1] * f2[0].ndim))
    den = f1 + sign * f2
    out = [f1[0] / den[0]]
    for k in range(1, n + 1):
        acc = f1[k].copy()
        for i in range(k):
            acc -= comb(k, i) * out[i] * den[k - i]
        out.append(acc / den[0])
    return out


@lru_cache(maxsize=None)
def _step_bounds(n):
    fb = [sum(abs(c) * _peak(j) for j, c in enumerate(r.coef))
          for r in _step_polys(n)]
    fb[0] = 1.0
    db = [2 * b for b in fb]
    sb = [1.0]
    for k in range(1, n + 1):
        acc = fb[k] + sum(comb(k, i) * sb[i] * db[k - i] for i in range(k))
        sb.append(acc / PLATEAU_DENOMINATOR_MIN)
    return tuple(sb)


class Plateau(Factor):
    """Equal to 1 on [lower, upper], smooth steps of width `margin` on each side."""

    def __init__(self, lower, upper, margin):
        if margin <= 0 or upper < lower:
            raise ValueError('plateau needs lower <= upper and a positive margin')
        self.lower = float(lower)
        self.upper = float(upper)
        self.margin = float(margin)

    def interval(self):
        return (exact(self.lower) - exact(self.margin),
                exact(self.upper) + exact(self.margin))

    def derivative(self, x, n):
        x = np.asarray(x, dtype=float)
        a, b, r = self.lower, self.upper, self.margin
        out = np.zeros_like(x)
        if n == 0:
            out[(x >= a) & (x <= b)] = 1.0
        left = (x > a - r) & (x < a)
        right = (x > b) & (x < b + r)
        if np.any(left):
            out[left] = smooth_step((x[left] - (a - r)) / r, n)[n] / r ** n
        if np.any(right):
            out[right] = (-1) ** n * smooth_step((b + r - x[right]) / r, n)[n] / r ** n
        return out

    def sup_bound(self, n, lo, hi):
        return _step_bounds(n)[n] / self.margin ** n

    def to_json(self):
        return {'plateau': [self.lower, self.upper, self.margin]}


def _leibniz(values, order):
    """Derivative `order` of a product given per-factor derivative lists."""
    acc = values[0]
    for v in values[1:]:
        acc = [sum(comb(k, i) * acc[i] * v[k - i] for i in range(k + 1))
               for k in range(order + 1)]
    return acc[order]


class AxisFactor:
    """x ↦ x^power · (d/dx)^order prod(factors)(x) on one coordinate."""

    def __init__(self, factors, order, interval, power=0):
        self.factors = factors
        self.order = order
        self.interval = interval
        self.power = power

    def times_power(self, k):
        return AxisFactor(self.factors, self.order, self.interval, self.power + k)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = _leibniz([[f.derivative(x, k) for k in range(self.order + 1)]
                        for f in self.factors], self.order)
        return out * x ** self.power if self.power else out


class Term:
    """coef · prod_j prod(factors[j])(x_j)."""

    def __init__(self, factors, coef=1.0):
        self.factors = [list(f) for f in factors]
        self.coef = float(coef)
        box = []
        for j, fs in enumerate(self.factors):
            lo, hi = -INF, INF
            for f in fs:
                iv = f.interval()
                if iv is not None:
                    lo, hi = max(lo, iv[0]), min(hi, iv[1])
            if math.isinf(lo) or math.isinf(hi):
                raise ValueError(
                    'coordinate {} has no compactly supported factor'.format(j + 1))
            box.append(Interval.closed(lo, hi))
        self.box = tuple(box)

    def evaluate(self, points, beta):
        out = np.full(points.shape[0], self.coef)
        for j, (fs, n) in enumerate(zip(self.factors, beta)):
            x = points[:, j]
            out = out * _leibniz([[f.derivative(x, k) for k in range(n + 1)]
                                  for f in fs], n)
        return out

    def axis_factors(self, beta):
        return [AxisFactor(fs, n, iv.as_floats())
                for fs, n, iv in zip(self.factors, beta, self.box)]

    def sup_bound(self, beta):
        total = abs(self.coef)
        for fs, n, iv in zip(self.factors, beta, self.box):
            lo, hi = iv.as_floats()
            total *= _leibniz([[f.sup_bound(k, lo, hi) for k in range(n + 1)]
                               for f in fs], n)
        return total

    def to_json(self):
        return {'coef': self.coef,
                'factors': [[f.to_json() for f in fs] for fs in self.factors]}


class TestFunction(SmoothFunction):
    """Finite sum of product terms with compact support."""

    __test__ = False

    def __init__(self, terms, max_derivative_order=12):
        terms = list(terms)
        if not terms:
            raise ValueError('a test function needs at least one term')
        self.dimension = len(terms[0].factors)
        if any(len(t.factors) != self.dimension for t in terms):
            raise ValueError('terms disagree on dimension')
        self.terms = terms
        self.max_derivative_order = int(max_derivative_order)
        self._support = Region([t.box for t in terms], self.dimension)

    @classmethod
    def bump(cls, center, radius, max_derivative_order=12, monomial=None):
        """Product of bumps, optionally times the monomial x^monomial."""
        factors = []
        for j, (c, r) in enumerate(zip(center, radius)):
            fs = [Bump(c, r)]
            if monomial is not None and monomial[j]:
                fs.append(Polynomial.monomial(monomial[j]))
            factors.append(fs)
        return cls([Term(factors)], max_derivative_order)

    @classmethod
    def plateau(cls, lower, upper, margin, max_derivative_order=12, monomial=None):
        factors = []
        for j, (a, b, r) in enumerate(zip(lower, upper, margin)):
            fs = [Plateau(a, b, r)]
            if monomial is not None and monomial[j]:
                fs.append(Polynomial.monomial(monomial[j]))
            factors.append(fs)
        return cls([Term(factors)], max_derivative_order)

    def _partial(self, points, beta):
        out = np.zeros(points.shape[0])
        for t in self.terms:
            out += t.evaluate(points, beta)
        return out

    def support(self):
        return self._support

    def sup_bound(self, beta):
        return sum(t.sup_bound(beta) for t in self.terms)

    def separable(self, beta):
        self.check_order(beta)
        return [(t.coef, t.axis_factors(beta)) for t in self.terms]

    def to_json(self):
        return {'terms': [t.to_json() for t in self.terms],
                'max_order': self.max_derivative_order}


class ReciprocalMonomial(SmoothFunction):
    """sigma(x) prod_j x_j^{-alpha_j-1}, smooth off the coordinate hyperplanes."""

    def __init__(self, alpha, clearance=None, max_derivative_order=64):
        self.alpha = tuple(int(a) for a in alpha)
        self.dimension = len(self.alpha)
        self.clearance = clearance
        self.max_derivative_order = max_derivative_order

    def _partial(self, points, beta):
        out = np.ones(points.shape[0])
        for j, (a, b) in enumerate(zip(self.alpha, beta)):
            x = points[:, j]
            safe = np.where(x == 0, 1.0, x)
            out = out * np.sign(x) * falling(-a - 1, b) * safe ** (-a - 1 - b)
        return out

    def support(self):
        return Region.nonzero(self.dimension)

    def growth(self, beta):
        if not self.clearance:
            raise NotImplementedError('growth needs a positive clearance')
        eps = float(self.clearance)
        c = 1.0
        for a, b in zip(self.alpha, beta):
            c *= abs(falling(-a - 1, b)) * eps ** (-a - 1 - b)
        return c, 0


class Dilated(SmoothFunction):
    """x -> g(eta x)."""

    def __init__(self, g, eta):
        self.g = g
        self.eta = np.asarray(eta, dtype=float)
        if np.any(self.eta == 0):
            raise ValueError('dilation factor must be invertible')
        self.dimension = g.dimension
        self.max_derivative_order = g.max_derivative_order

    def _partial(self, points, beta):
        return np.prod(self.eta ** np.array(beta)) * \
            self.g.partial(points * self.eta, beta)

    def support(self):
        return self.g.support().dilate([1 / exact(e) for e in self.eta])

    def sup_bound(self, beta):
        return float(np.prod(np.abs(self.eta) ** np.array(beta))) * \
            self.g.sup_bound(beta)


def monomial_leibniz(g, x, gamma, nu, y=None):
    """∂_x^nu [x^gamma · g^{(gamma)}(x·y)] at points x (n, d); y defaults to 𝟙."""
    x = as_points(x, g.dimension)
    arg = x if y is None else x * y
    out = np.zeros(x.shape[0])
    for mu in multi_indices(nu):
        c = 1.0
        for n_j, m_j, g_j in zip(nu, mu, gamma):
            c *= comb(n_j, m_j) * falling(g_j, n_j - m_j)
        if c == 0:
            continue
        power = np.prod(x ** np.array([g_j - n_j + m_j for g_j, n_j, m_j
                                       in zip(gamma, nu, mu)]), axis=1)
        if y is not None:
            power = power * np.prod(y ** np.array(mu), axis=1)
        order = tuple(g_j + m_j for g_j, m_j in zip(gamma, mu))
        out += c * power * g.partial(arg, order)
    return out
