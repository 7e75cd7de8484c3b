"""
Separable density profiles and their decay bookkeeping.

A density is weight · prod_j profile_j(x_j) restricted to a support region.
Profiles know their value, a tail bound ∫_{|x|>R} |p|(1+|x|)^k and the
matching moment over an interval, which is all the truncation logic needs.
"""
import math
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gamma, gammaincc

from hlab.distributions.functions import Bump, falling

COMPACT = 'compact'
RAPID = 'rapid'
POLYNOMIAL = 'polynomial'


@dataclass(frozen=True)
class DecayClass:
    kind: str
    order: float = None

    def __post_init__(self):
        if self.kind not in (COMPACT, RAPID, POLYNOMIAL):
            raise ValueError('unknown decay class {!r}'.format(self.kind))
        if self.kind == POLYNOMIAL and (self.order is None or self.order < 0):
            raise ValueError('polynomial decay needs an order p >= 0')

    @classmethod
    def compact(cls):
        return cls(COMPACT)

    @classmethod
    def rapid(cls):
        return cls(RAPID)

    @classmethod
    def polynomial(cls, p):
        return cls(POLYNOMIAL, float(p))

    def weakest(self, other):
        rank = {COMPACT: 0, RAPID: 1, POLYNOMIAL: 2}
        if rank[self.kind] != rank[other.kind]:
            return self if rank[self.kind] > rank[other.kind] else other
        if self.kind == POLYNOMIAL:
            return self if self.order <= other.order else other
        return self

    def __str__(self):
        if self.kind == POLYNOMIAL:
            return 'polynomial({:g})'.format(self.order)
        return self.kind

    def to_json(self):
        return str(self)


def _upper_gamma(a, x):
    return gammaincc(a, x) * gamma(a)


def _sides(R, lo, hi):
    """Half-lines of {|x| > R} that meet (lo, hi)."""
    return [s for s, ok in ((1, hi > R), (-1, lo < -R)) if ok]


class Profile(metaclass=ABCMeta):
    name = None
    params = ()

    @abstractmethod
    def value(self, x, n=0):
        """n-th derivative at x (vectorized)."""
        pass

    @abstractmethod
    def decay(self):
        pass

    @abstractmethod
    def half_tail(self, R, k):
        """Bound on ∫_R^∞ |p(±x)|(1+x)^k dx, valid for both signs."""
        pass

    def tail(self, R, k, lo=-math.inf, hi=math.inf):
        return sum(self.half_tail(R, k) for _ in _sides(R, lo, hi))

    def moment(self, k, lo=-math.inf, hi=math.inf):
        """∫_lo^hi |p(x)|(1+|x|)^k dx."""
        val, _ = integrate.quad(
            lambda x: abs(float(self.value(np.array([x]))[0])) * (1 + abs(x)) ** k,
            lo, hi, limit=200)
        return val

    def to_json(self):
        return {self.name: list(self.params)}

    def __str__(self):
        return '{}({})'.format(self.name, ','.join('{:g}'.format(p) for p in self.params))


class Constant(Profile):
    name = 'constant'

    def __init__(self, c=1.0):
        self.c = float(c)
        self.params = (self.c,)

    def value(self, x, n=0):
        x = np.asarray(x, dtype=float)
        return np.full_like(x, self.c if n == 0 else 0.0)

    def decay(self):
        return None

    def half_tail(self, R, k):
        return math.inf if self.c else 0.0

    def moment(self, k, lo=-math.inf, hi=math.inf):
        if math.isinf(lo) or math.isinf(hi):
            return math.inf if self.c else 0.0
        def prim(x):
            return math.copysign(((1 + abs(x)) ** (k + 1) - 1) / (k + 1), x)
        return abs(self.c) * (prim(hi) - prim(lo))


class Exponential(Profile):
    """exp(-rate·|x|)."""
    name = 'exponential'

    def __init__(self, rate=1.0):
        if rate <= 0:
            raise ValueError('exponential rate must be positive')
        self.rate = float(rate)
        self.params = (self.rate,)

    def value(self, x, n=0):
        x = np.asarray(x, dtype=float)
        return (-self.rate * np.sign(x)) ** n * np.exp(-self.rate * np.abs(x))

    def decay(self):
        return DecayClass.rapid()

    def half_tail(self, R, k):
        lam = self.rate
        return math.exp(lam) * lam ** (-(k + 1)) * _upper_gamma(k + 1, lam * (1 + R))


class Gaussian(Profile):
    """exp(-x²/(2·scale²))."""
    name = 'gaussian'

    def __init__(self, scale=1.0):
        if scale <= 0:
            raise ValueError('gaussian scale must be positive')
        self.scale = float(scale)
        self.params = (self.scale,)

    def value(self, x, n=0):
        x = np.asarray(x, dtype=float)
        u = x / self.scale
        # probabilists' Hermite: d^n/du^n e^{-u²/2} = (-1)^n He_n(u) e^{-u²/2}
        he = np.polynomial.hermite_e.hermeval(u, [0] * n + [1])
        return (-1) ** n * he * np.exp(-u * u / 2) / self.scale ** n

    def decay(self):
        return DecayClass.rapid()

    def _power_tail(self, R, j):
        s2 = 2 * self.scale ** 2
        a = (j + 1) / 2
        return s2 ** a / 2 * _upper_gamma(a, R * R / s2)

    def half_tail(self, R, k):
        # (1+x)^k <= 2^{k-1}(1 + x^k) for k >= 1
        if k <= 0:
            return self._power_tail(R, 0)
        return 2 ** (k - 1) * (self._power_tail(R, 0) + self._power_tail(R, k))


class Power(Profile):
    """(1+x²)^{-p/2}."""
    name = 'power'

    def __init__(self, p):
        if p < 0:
            raise ValueError('power order must be nonnegative')
        self.p = float(p)
        self.params = (self.p,)

    def value(self, x, n=0):
        x = np.asarray(x, dtype=float)
        if n == 0:
            return (1 + x * x) ** (-self.p / 2)
        out = np.zeros_like(x)
        # Faà di Bruno with h = 1+x²: sum_m c_{n,m} x^{2m-n} (1+x²)^{-p/2-m}
        for m in range((n + 1) // 2, n + 1):
            c = (math.factorial(n) / (math.factorial(n - m) * math.factorial(2 * m - n))
                 * falling(-self.p / 2, m) * 2 ** (2 * m - n))
            out += c * x ** (2 * m - n) * (1 + x * x) ** (-self.p / 2 - m)
        return out

    def decay(self):
        return DecayClass.polynomial(self.p)

    def half_tail(self, R, k):
        # (1+x²)^{-p/2} <= 2^{p/2}(1+x)^{-p} on x >= 0
        e = k - self.p + 1
        if e >= 0:
            return math.inf
        return 2 ** (self.p / 2) * (1 + R) ** e / -e


class BumpProfile(Profile):
    name = 'bump'

    def __init__(self, center, radius):
        self.bump = Bump(center, radius)
        self.params = (self.bump.center, self.bump.radius)

    def value(self, x, n=0):
        return self.bump.derivative(np.asarray(x, dtype=float), n)

    def decay(self):
        return DecayClass.compact()

    def half_tail(self, R, k):
        c, r = self.params
        if abs(c) + r <= R:
            return 0.0
        return math.exp(-1) * 2 * r * (1 + abs(c) + r) ** k


def profile_types():
    return {cls.name: cls for cls in Profile.__subclasses__()}


def make_profile(name, *params):
    types = profile_types()
    if name not in types:
        raise ValueError('unknown profile {!r}; expected one of {}'.format(
            name, sorted(types)))
    return types[name](*params)
