"""
Euler operators P(θ), θ_j = x_j ∂/∂x_j.

Conversions between the θ-form and the x^γ∂^γ-form are exact integer
arithmetic through Stirling numbers of both kinds.
"""
from functools import lru_cache
from itertools import product
from math import comb

import numpy as np

from hlab.distributions.functions import (SmoothFunction, falling, monomial_leibniz,
                                          multi_indices)
from hlab.errors import OrderTooLarge

MAX_THETA_ORDER = 12


@lru_cache(maxsize=None)
def stirling2(n, k):
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@lru_cache(maxsize=None)
def stirling1(n, k):
    """Signed: falling(θ, n) = Σ_k s(n, k) θ^k."""
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return stirling1(n - 1, k - 1) - (n - 1) * stirling1(n - 1, k)


def theta_expand(beta):
    """θ^β = Σ_γ c_γ x^γ ∂^γ with integer c_γ."""
    beta = tuple(int(b) for b in beta)
    for b in beta:
        if b < 0:
            raise ValueError('multi-index entries must be nonnegative')
        if b > MAX_THETA_ORDER:
            raise OrderTooLarge('θ order {} exceeds {}'.format(b, MAX_THETA_ORDER))
    per_axis = [{k: stirling2(b, k) for k in range(b + 1) if stirling2(b, k)}
                for b in beta]
    out = {}
    for combo in product(*[sorted(a.items()) for a in per_axis]):
        gamma = tuple(k for k, _ in combo)
        c = 1
        for _, v in combo:
            c *= v
        out[gamma] = c
    return out


def _clean(coeffs):
    return {tuple(int(v) for v in k): c for k, c in coeffs.items() if c != 0}


class EulerPolynomial:
    """P(θ) = Σ c_β θ^β, stored as a map from multi-index to coefficient."""

    def __init__(self, coeffs, dimension=None):
        coeffs = dict(coeffs)
        if dimension is None:
            if not coeffs:
                raise ValueError('dimension needed for the zero polynomial')
            dimension = len(next(iter(coeffs)))
        self.dimension = dimension
        if any(len(k) != dimension for k in coeffs):
            raise ValueError('multi-indices disagree with dimension {}'.format(dimension))
        self.coeffs = _clean(coeffs)

    @classmethod
    def constant(cls, c, d):
        return cls({(0,) * d: c}, d)

    @classmethod
    def theta(cls, j, d):
        beta = [0] * d
        beta[j] = 1
        return cls({tuple(beta): 1}, d)

    @classmethod
    def from_falling(cls, coeffs, d):
        """Σ e_γ x^γ∂^γ rewritten in θ; x^γ∂^γ = Π_j θ_j(θ_j-1)...(θ_j-γ_j+1)."""
        out = {}
        for gamma, c in coeffs.items():
            axes = [[(k, stirling1(g, k)) for k in range(g + 1) if stirling1(g, k)]
                    for g in gamma]
            for combo in product(*axes):
                beta = tuple(k for k, _ in combo)
                v = c
                for _, s in combo:
                    v *= s
                out[beta] = out.get(beta, 0) + v
        return cls(out, d)

    # algebra

    def _coerce(self, other):
        if isinstance(other, EulerPolynomial):
            if other.dimension != self.dimension:
                raise ValueError('dimension mismatch')
            return other
        return EulerPolynomial.constant(other, self.dimension)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return EulerPolynomial(out, self.dimension)

    __radd__ = __add__

    def __neg__(self):
        return EulerPolynomial({k: -c for k, c in self.coeffs.items()}, self.dimension)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for (a, ca), (b, cb) in product(self.coeffs.items(), other.coeffs.items()):
            k = tuple(i + j for i, j in zip(a, b))
            out[k] = out.get(k, 0) + ca * cb
        return EulerPolynomial(out, self.dimension)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = EulerPolynomial.constant(1, self.dimension)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, EulerPolynomial) and \
            other.dimension == self.dimension and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    # queries

    @property
    def degree(self):
        return max((sum(k) for k in self.coeffs), default=0)

    def evaluate(self, alpha):
        """P(α) for one multi-index or an array of shape (n, d)."""
        a = np.asarray(alpha, dtype=float)
        single = a.ndim == 1
        a = a.reshape(-1, self.dimension)
        out = np.zeros(a.shape[0])
        for beta, c in sorted(self.coeffs.items()):
            out += c * np.prod(a ** np.array(beta, dtype=float), axis=1)
        return float(out[0]) if single else out

    def reflect(self):
        """Substitute θ ↦ -θ-𝟙 (the transpose of a θ-polynomial)."""
        d = self.dimension
        out = EulerPolynomial({}, d)
        for beta, c in self.coeffs.items():
            term = EulerPolynomial.constant(c, d)
            for j, n in enumerate(beta):
                axis = {}
                for k in range(n + 1):
                    idx = [0] * d
                    idx[j] = k
                    axis[tuple(idx)] = (-1) ** n * comb(n, k)
                term = term * EulerPolynomial(axis, d)
            out = out + term
        return out

    def expand(self):
        """x^γ∂^γ-form coefficients."""
        out = {}
        for beta, c in self.coeffs.items():
            for gamma, s in theta_expand(beta).items():
                out[gamma] = out.get(gamma, 0) + c * s
        return _clean(out)

    def __str__(self):
        if not self.coeffs:
            return '0'
        parts = []
        for beta, c in sorted(self.coeffs.items()):
            mono = '·'.join('θ{}{}'.format(j + 1, '' if b == 1 else '^{}'.format(b))
                            for j, b in enumerate(beta) if b)
            if not mono:
                parts.append('{:g}'.format(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append('{:g}·{}'.format(c, mono))
        return ' + '.join(parts)

    def __repr__(self):
        return 'EulerPolynomial({})'.format(self)

    def to_json(self):
        return [[list(k), c] for k, c in sorted(self.coeffs.items())]


class EulerApplied(SmoothFunction):
    """x ↦ (P(θ)g)(x) with exact derivatives."""

    def __init__(self, poly, g):
        if poly.dimension != g.dimension:
            raise ValueError('dimension mismatch')
        self.poly = poly
        self.g = g
        self.dimension = g.dimension
        self.expansion = sorted(poly.expand().items())
        self.max_derivative_order = g.max_derivative_order - poly.degree

    def _partial(self, points, beta):
        out = np.zeros(points.shape[0])
        for gamma, c in self.expansion:
            out += c * monomial_leibniz(self.g, points, gamma, beta)
        return out

    def separable(self, beta):
        # d^beta (x^γ d^γ g) = Σ_μ Π_j C(β_j, μ_j) (γ_j)_{β_j-μ_j} x_j^{γ_j-β_j+μ_j} d^{γ+μ} g
        self.check_order(beta)
        out = []
        for gamma, c in self.expansion:
            for mu in multi_indices(beta):
                k = c
                for n_j, m_j, g_j in zip(beta, mu, gamma):
                    k *= comb(n_j, m_j) * falling(g_j, n_j - m_j)
                if k == 0:
                    continue
                terms = self.g.separable(tuple(g_j + m_j for g_j, m_j in zip(gamma, mu)))
                if terms is None:
                    return None
                for coef, factors in terms:
                    out.append((k * coef, [f.times_power(g_j - n_j + m_j) for f, g_j, n_j, m_j
                                           in zip(factors, gamma, beta, mu)]))
        return out

    def support(self):
        return self.g.support()

    def sup_bound(self, beta):
        supp = self.g.support()
        if not supp.bounded:
            raise NotImplementedError('sup bound of P(θ)g needs compact support')
        m = max(float(max(abs(iv.lo), abs(iv.hi))) for b in supp.boxes for iv in b)
        total = 0.0
        for gamma, c in self.expansion:
            for mu in multi_indices(beta):
                k = 1.0
                for n_j, m_j, g_j in zip(beta, mu, gamma):
                    k *= comb(n_j, m_j) * abs(falling(g_j, n_j - m_j)) * \
                        max(m, 1.0) ** max(g_j - n_j + m_j, 0)
                if k:
                    order = tuple(g_j + m_j for g_j, m_j in zip(gamma, mu))
                    total += abs(c) * k * self.g.sup_bound(order)
        return total

    def growth(self, beta):
        if any(beta):
            raise NotImplementedError('growth of derivatives of P(θ)g')
        total, power = 0.0, 0
        for gamma, c in self.expansion:
            C, k = self.g.growth(gamma)
            total += abs(c) * C
            power = max(power, k + sum(gamma))
        return total, power


def apply_euler(poly, phi, x):
    """(P(θ)φ)(x) for one point or an array of points."""
    x = np.asarray(x, dtype=float)
    values = EulerApplied(poly, phi).partial(x)
    return float(values[0]) if x.ndim <= 1 and values.size == 1 else values


def euler_eigenvalue(poly, alpha):
    return poly.evaluate(alpha)


def euler_to_hadamard(poly):
    """Point-mass form Σ b_γ δ_𝟙^{(γ)} whose Hadamard operator is P(θ).

    (Mφ)(y) = Σ_γ b_γ (-1)^{|γ|} y^γ φ^{(γ)}(y) must equal P(-θ-𝟙)φ, so
    b_γ = (-1)^{|γ|} e_γ with e the x^γ∂^γ-expansion of P(-θ-𝟙).
    """
    from hlab.distributions.reps import PointMassCombo
    one = (1.0,) * poly.dimension
    terms = [(one, gamma, (-1) ** sum(gamma) * e)
             for gamma, e in sorted(poly.reflect().expand().items())]
    if not terms:
        raise ValueError('the zero polynomial has no point-mass form')
    return PointMassCombo(terms)


def hadamard_to_euler(dist):
    """Inverse of euler_to_hadamard for point masses anchored at 𝟙."""
    from hlab.distributions.reps import PointMassCombo
    if not isinstance(dist, PointMassCombo) or \
            any(any(a != 1 for a in anchor) for anchor, _, _ in dist.terms):
        raise ValueError('only point-mass combinations at 𝟙 are Euler operators')
    e = {}
    for _, gamma, w in dist.terms:
        e[gamma] = e.get(gamma, 0) + (-1) ** sum(gamma) * w
    return EulerPolynomial.from_falling(e, dist.dimension).reflect()
