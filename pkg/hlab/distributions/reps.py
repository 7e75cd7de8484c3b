"""
The three distribution classes: point-mass combinations, densities and
Euler forms Σ θ^β t_β, plus finite linear combinations of them.

Every class pairs with any ``SmoothFunction`` and evaluates the dilated
derivatives ∂_y^γ T_x g(xy) that the transpose action needs.
"""
import logging as log
import math
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from hlab.distributions.functions import as_points, monomial_leibniz
from hlab.distributions.profiles import (COMPACT, POLYNOMIAL, RAPID, Constant,
                                         DecayClass)
from hlab.errors import QuadratureNoConvergence
from hlab.euler import EulerApplied, EulerPolynomial
from hlab.quadrature import Integrator, integrate_cells
from hlab.regions import INF, Region
from hlab.settings import resolve

MAX_DOUBLINGS = 60


class Membership(Enum):
    CERTIFIED = 'Certified'
    REFUTED = 'Refuted'
    UNKNOWN = 'Unknown'


def _worst(memberships):
    memberships = list(memberships)
    for m in (Membership.REFUTED, Membership.UNKNOWN):
        if m in memberships:
            return m
    return Membership.CERTIFIED


@dataclass(frozen=True)
class PairResult:
    value: float
    truncation_radius: float = None


class DistributionRep(metaclass=ABCMeta):
    dimension = 1
    kind = None

    @abstractmethod
    def integrate(self, g, settings=None):
        """⟨T, g⟩ together with the truncation radius used, if any."""
        pass

    @abstractmethod
    def support_of(self):
        pass

    @abstractmethod
    def is_OH(self):
        pass

    @abstractmethod
    def dilated_partial(self, g, ys, gamma, settings=None):
        """∂_y^γ T_x g(xy) at every row of ``ys``."""
        pass

    @abstractmethod
    def scaled(self, c):
        pass

    @property
    def max_order(self):
        return 0

    def pair(self, g, settings=None):
        return self.integrate(g, settings).value

    def hyperplane_clearance(self):
        return float(self.support_of().clearance())

    def __add__(self, other):
        return LinearCombination([self, other])

    def __rmul__(self, c):
        return self.scaled(c)

    def __sub__(self, other):
        return self + other.scaled(-1.0)


class PointMassCombo(DistributionRep):
    """Σ w · δ_a^{(β)}, pairing δ_a^{(β)}(g) = (-1)^{|β|} g^{(β)}(a)."""
    kind = 'point_mass'

    def __init__(self, terms):
        terms = [(tuple(float(v) for v in a), tuple(int(b) for b in beta), float(w))
                 for a, beta, w in terms]
        if not terms:
            raise ValueError('a point-mass combination needs at least one term')
        self.dimension = len(terms[0][0])
        for a, beta, w in terms:
            if len(a) != self.dimension or len(beta) != self.dimension:
                raise ValueError('anchor {} or order {} has the wrong dimension'.format(a, beta))
            if any(b < 0 for b in beta):
                raise ValueError('derivative orders must be nonnegative')
            if not math.isfinite(w) or w == 0:
                raise ValueError('weights must be finite and nonzero')
        self.terms = terms

    @classmethod
    def delta(cls, anchor, beta=None, weight=1.0):
        beta = beta if beta is not None else (0,) * len(anchor)
        return cls([(anchor, beta, weight)])

    @property
    def max_order(self):
        return max(sum(beta) for _, beta, _ in self.terms)

    def support_of(self):
        return Region([Region.point(a).boxes[0] for a, _, _ in self.terms],
                      self.dimension)

    def is_OH(self):
        return Membership.CERTIFIED

    def integrate(self, g, settings=None):
        supp = g.support()
        total = []
        for a, beta, w in self.terms:
            g.check_order(beta)
            if not supp.contains(a):
                continue
            total.append(w * (-1) ** sum(beta) * float(g.partial(a, beta)[0]))
        return PairResult(math.fsum(total))

    def dilated_partial(self, g, ys, gamma, settings=None):
        ys = as_points(ys, self.dimension)
        out = np.zeros(ys.shape[0])
        for a, beta, w in self.terms:
            x = np.broadcast_to(np.array(a), ys.shape)
            out += w * (-1) ** sum(beta) * monomial_leibniz(g, x, gamma, beta, ys)
        return out

    def scaled(self, c):
        return PointMassCombo([(a, beta, c * w) for a, beta, w in self.terms])

    def __add__(self, other):
        if isinstance(other, PointMassCombo):
            return PointMassCombo(self.terms + other.terms)
        return super().__add__(other)

    def to_json(self):
        return {'kind': self.kind,
                'terms': [{'anchor': list(a), 'order': list(beta), 'weight': w}
                          for a, beta, w in self.terms]}

    def __str__(self):
        return ' + '.join('{:g}·δ_{}^{}'.format(w, a, beta) for a, beta, w in self.terms)


def _bounding(region, j):
    lo = min(b[j].lo for b in region.boxes)
    hi = max(b[j].hi for b in region.boxes)
    return float(lo), float(hi)


@dataclass(frozen=True)
class Density(DistributionRep):
    """weight · Π_j profile_j(x_j) · 1_support(x)."""
    kind = 'density'

    weight: float
    profiles: tuple
    support: Region
    decay: DecayClass = None
    dimension: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'profiles', tuple(self.profiles))
        object.__setattr__(self, 'dimension', self.support.dimension)
        if len(self.profiles) != self.dimension:
            raise ValueError('{} profiles for a {}-dimensional support'.format(
                len(self.profiles), self.dimension))
        if self.support.is_empty:
            raise ValueError('density support is empty')
        if not math.isfinite(self.weight):
            raise ValueError('density weight must be finite')
        inferred = DecayClass.compact()
        for j, p in enumerate(self.profiles):
            lo, hi = _bounding(self.support, j)
            if math.isfinite(lo) and math.isfinite(hi):
                continue
            own = p.decay()
            if own is None or (own.kind == POLYNOMIAL and own.order <= 1):
                raise ValueError('profile {} is not integrable on {}'.format(
                    p, self.support.projection(j)))
            inferred = inferred.weakest(own)
        if self.decay is None:
            object.__setattr__(self, 'decay', inferred)
        elif self.decay.kind == COMPACT and not self.support.bounded:
            raise ValueError('compact decay declared for unbounded support {}'.format(
                self.support))

    @classmethod
    def indicator(cls, support, weight=1.0):
        return cls(weight, [Constant(1.0)] * support.dimension, support)

    def kernel(self, points):
        """Profile product without the support indicator."""
        points = as_points(points, self.dimension)
        out = np.full(points.shape[0], self.weight)
        for j, p in enumerate(self.profiles):
            out = out * p.value(points[:, j])
        return out

    def __call__(self, points):
        points = as_points(points, self.dimension)
        return np.where(self.support.contains_array(points), self.kernel(points), 0.0)

    def support_of(self):
        return self.support

    def is_OH(self):
        if self.support.bounded or self.decay.kind in (COMPACT, RAPID):
            return Membership.CERTIFIED
        return Membership.UNKNOWN

    def scaled(self, c):
        return Density(c * self.weight, self.profiles, self.support, self.decay)

    def __add__(self, other):
        if isinstance(other, (Density, EulerForm)):
            return EulerForm.of(self) + other
        return super().__add__(other)

    def tail_bound(self, R, C, k):
        """Bound on ∫_{|x|_∞ > R} |t(x)| C (1+|x|_∞)^k dx."""
        d = self.dimension
        bounds = [_bounding(self.support, j) for j in range(d)]
        moments = [p.moment(k, lo, hi) for p, (lo, hi) in zip(self.profiles, bounds)]
        total = 0.0
        for j in range(d):
            lo, hi = bounds[j]
            tail = self.profiles[j].tail(R, k, lo, hi)
            if tail == 0:
                continue
            rest = 1.0
            for i in range(d):
                if i != j:
                    rest *= moments[i]
            total += tail * rest
        return abs(self.weight) * C * total

    def truncation_radius(self, C, k, tol):
        """Smallest dyadic R whose tail bound is at most tol (None if bounded)."""
        if self.support.bounded:
            return None
        finite = [abs(v) for j in range(self.dimension)
                  for v in _bounding(self.support, j) if math.isfinite(v)]
        R = max([1.0] + finite)
        for _ in range(MAX_DOUBLINGS):
            if self.tail_bound(R, C, k) <= tol:
                log.debug('truncation radius %g for tail budget %g', R, tol)
                return R
            R *= 2
        raise QuadratureNoConvergence(
            'no truncation radius below {:g} meets the tail budget {:g}'.format(R, tol))

    def integrate(self, g, settings=None):
        settings = resolve(settings)
        domain = self.support.intersection(g.support())
        radius = None
        if not domain.is_empty and not domain.bounded:
            C, k = g.growth((0,) * self.dimension)
            radius = self.truncation_radius(C, k, settings.quad_tol * settings.tail_factor)
            domain = domain.intersection(Region.cube(radius, self.dimension).closure())
        if domain.is_empty:
            return PairResult(0.0, radius)
        lowers, uppers = domain.cells()
        value = integrate_cells(lambda x: self.kernel(x) * g.partial(x),
                                lowers, uppers, settings, ncomp=1)
        return PairResult(float(value[0]), radius)

    def _axis_integrals(self, j, f, yj, clo, chi, k, settings):
        """∫_{cell} p_j(x) x^k f(x y) dx for every y in yj and every cell, shape (m, cells)."""
        flo, fhi = f.interval
        y = yj[:, None]
        with np.errstate(divide='ignore', invalid='ignore'):
            a, b = flo / y, fhi / y
        zero = y == 0
        straddle = flo <= 0 <= fhi
        lo = np.where(zero, -INF if straddle else INF, np.minimum(a, b))
        hi = np.where(zero, INF if straddle else -INF, np.maximum(a, b))
        lo = np.maximum(lo, clo[None, :])
        hi = np.minimum(hi, chi[None, :])
        out = np.zeros(lo.shape)
        ok = hi > lo
        if not np.any(ok):
            return out
        rows = np.nonzero(ok)[0]
        profile = self.profiles[j]

        def func(x, comp):
            x = x[:, 0]
            return profile.value(x) * x ** k * f(x * yj[rows[comp]])

        values, _ = Integrator(func, lo[ok][:, None], hi[ok][:, None], settings).run()
        out[ok] = values
        return out

    def _separable_dilated(self, terms, ys, gamma, settings):
        # each axis integral depends on y_j alone, so it is computed once per distinct y_j
        tlo, thi = self.support.cells()
        out = np.zeros(ys.shape[0])
        for coef, factors in terms:
            acc = np.full((ys.shape[0], len(tlo)), coef)
            for j, f in enumerate(factors):
                yj, inverse = np.unique(ys[:, j], return_inverse=True)
                axis = self._axis_integrals(j, f, yj, tlo[:, j], thi[:, j], gamma[j], settings)
                acc = acc * axis[np.asarray(inverse).reshape(-1)]
            out += acc.sum(axis=1)
        return self.weight * out

    def dilated_partial(self, g, ys, gamma, settings=None):
        settings = resolve(settings)
        ys = as_points(ys, self.dimension)
        gsupp = g.support()
        if not gsupp.bounded:
            raise ValueError('dilated pairing needs a compactly supported function')
        if self.dimension > 1 and self.support.bounded:
            terms = g.separable(gamma)
            if terms is not None:
                return self._separable_dilated(terms, ys, gamma, settings)
        glo = np.array([[float(iv.lo) for iv in b] for b in gsupp.boxes])
        ghi = np.array([[float(iv.hi) for iv in b] for b in gsupp.boxes])
        tlo, thi = self.support.cells()
        # x-boxes: t cell ∩ (g box / y), shape (n, cells, boxes, d)
        y = ys[:, None, None, :]
        with np.errstate(divide='ignore', invalid='ignore'):
            a = glo[None, None, :, :] / y
            b = ghi[None, None, :, :] / y
        zero = y == 0
        straddle = (glo[None, None, :, :] <= 0) & (ghi[None, None, :, :] >= 0)
        lo = np.where(zero, np.where(straddle, -INF, INF), np.minimum(a, b))
        hi = np.where(zero, np.where(straddle, INF, -INF), np.maximum(a, b))
        lo = np.maximum(lo, tlo[None, :, None, :])
        hi = np.minimum(hi, thi[None, :, None, :])
        ok = np.all(hi > lo, axis=-1)
        owner = np.nonzero(ok)[0]
        out = np.zeros(ys.shape[0])
        if len(owner) == 0:
            return out
        lo, hi = lo[ok], hi[ok]
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            # |x^γ g^{(γ)}(xy)| <= sup|g^{(γ)}| (1+|x|)^{|γ|}
            R = self.truncation_radius(g.sup_bound(gamma), sum(gamma),
                                       settings.quad_tol * settings.tail_factor)
            lo, hi = np.maximum(lo, -R), np.minimum(hi, R)
        yrow = ys[owner]
        gamma_arr = np.array(gamma, dtype=float)

        def func(x, comp):
            yy = yrow[comp]
            return self.kernel(x) * np.prod(x ** gamma_arr, axis=1) * \
                g.partial(x * yy, gamma)

        values, _ = Integrator(func, lo, hi, settings).run()
        np.add.at(out, owner, values)
        return out

    def to_json(self):
        return {'kind': self.kind, 'weight': self.weight,
                'profiles': [p.to_json() for p in self.profiles],
                'support': self.support.to_json(), 'decay': self.decay.to_json()}

    def __str__(self):
        return '{:g}·{} on {}'.format(self.weight, '⊗'.join(str(p) for p in self.profiles),
                                      self.support)


class EulerForm(DistributionRep):
    """Σ θ^β t_β with ⟨θ^β t, g⟩ = ⟨t, (-(θ+𝟙))^β g⟩."""
    kind = 'euler_form'

    def __init__(self, terms):
        terms = [(tuple(int(b) for b in beta), t) for beta, t in terms]
        if not terms:
            raise ValueError('an Euler form needs at least one term')
        self.dimension = terms[0][1].dimension
        for beta, t in terms:
            if not isinstance(t, Density):
                raise ValueError('Euler form coefficients must be densities')
            if len(beta) != self.dimension or t.dimension != self.dimension:
                raise ValueError('Euler form term {} has the wrong dimension'.format(beta))
        self.terms = terms

    @classmethod
    def of(cls, density):
        return cls([((0,) * density.dimension, density)])

    @property
    def max_order(self):
        return max(sum(beta) for beta, _ in self.terms)

    def _transposed(self, beta):
        d = self.dimension
        mono = EulerPolynomial({beta: 1}, d)
        return mono.reflect()

    def support_of(self):
        out = self.terms[0][1].support
        for _, t in self.terms[1:]:
            out = out.union(t.support)
        return out

    def is_OH(self):
        return _worst(t.is_OH() for _, t in self.terms)

    def integrate(self, g, settings=None):
        values, radii = [], []
        for beta, t in self.terms:
            r = t.integrate(EulerApplied(self._transposed(beta), g), settings)
            values.append(r.value)
            if r.truncation_radius is not None:
                radii.append(r.truncation_radius)
        return PairResult(math.fsum(values), max(radii) if radii else None)

    def dilated_partial(self, g, ys, gamma, settings=None):
        # θ_x commutes with x ↦ xy, so T_x g(xy) = Σ ⟨t_β, (P_β g)(x y)⟩
        out = np.zeros(as_points(ys, self.dimension).shape[0])
        for beta, t in self.terms:
            out += t.dilated_partial(EulerApplied(self._transposed(beta), g),
                                     ys, gamma, settings)
        return out

    def scaled(self, c):
        return EulerForm([(beta, t.scaled(c)) for beta, t in self.terms])

    def __add__(self, other):
        if isinstance(other, Density):
            other = EulerForm.of(other)
        if isinstance(other, EulerForm):
            return EulerForm(self.terms + other.terms)
        return super().__add__(other)

    def to_json(self):
        return {'kind': self.kind,
                'terms': [{'order': list(beta), 'density': t.to_json()}
                          for beta, t in self.terms]}

    def __str__(self):
        return ' + '.join('θ^{}({})'.format(beta, t) for beta, t in self.terms)


class LinearCombination(DistributionRep):
    """Sum of representations of mixed kinds."""
    kind = 'sum'

    def __init__(self, parts):
        flat = []
        for p in parts:
            flat.extend(p.parts if isinstance(p, LinearCombination) else [p])
        self.dimension = flat[0].dimension
        if any(p.dimension != self.dimension for p in flat):
            raise ValueError('dimension mismatch in a linear combination')
        self.parts = flat

    @property
    def max_order(self):
        return max(p.max_order for p in self.parts)

    def support_of(self):
        out = self.parts[0].support_of()
        for p in self.parts[1:]:
            out = out.union(p.support_of())
        return out

    def is_OH(self):
        return _worst(p.is_OH() for p in self.parts)

    def integrate(self, g, settings=None):
        results = [p.integrate(g, settings) for p in self.parts]
        radii = [r.truncation_radius for r in results if r.truncation_radius is not None]
        return PairResult(math.fsum(r.value for r in results),
                          max(radii) if radii else None)

    def dilated_partial(self, g, ys, gamma, settings=None):
        return sum(p.dilated_partial(g, ys, gamma, settings) for p in self.parts)

    def scaled(self, c):
        return LinearCombination([p.scaled(c) for p in self.parts])

    def to_json(self):
        return {'kind': self.kind, 'parts': [p.to_json() for p in self.parts]}

    def __str__(self):
        return ' + '.join('({})'.format(p) for p in self.parts)


def distribution_types():
    return {cls.kind: cls for cls in DistributionRep.__subclasses__()}


def pair(dist, g, settings=None):
    """⟨T, g⟩."""
    return dist.pair(g, settings)


def support_of(dist):
    return dist.support_of()


def hyperplane_clearance(dist):
    return dist.hyperplane_clearance()


def is_OH(dist):
    return dist.is_OH()
