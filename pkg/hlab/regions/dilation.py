"""
Reciprocals, coordinatewise products and dilation sets V_*(M, N).
"""
import logging as log
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from hlab.errors import ContainsZero, IndeterminateProduct
from hlab.regions import INF, CellGrid, Interval, Region, _mul
from hlab.settings import resolve


def _reciprocal_interval(iv):
    if iv.is_point:
        if iv.lo == 0:
            raise ContainsZero('interval {} is the origin'.format(iv))
        return Interval.point(1 / iv.lo)
    positive = iv.lo > 0 or (iv.lo == 0 and not iv.lo_closed)
    negative = iv.hi < 0 or (iv.hi == 0 and not iv.hi_closed)
    if not (positive or negative):
        raise ContainsZero('interval {} meets 0'.format(iv))

    def inv(v, sign):
        if math.isinf(v):
            return Fraction(0)
        if v == 0:
            return sign * INF
        return 1 / v

    sign = 1 if positive else -1
    return Interval(inv(iv.hi, sign), inv(iv.lo, sign), iv.hi_closed, iv.lo_closed)


def reciprocal(region):
    """{1/y : y in region}, coordinatewise with exact flags."""
    return Region([tuple(_reciprocal_interval(iv) for iv in b)
                   for b in region.boxes], region.dimension)


def _sign_pieces(iv):
    neg = Interval(iv.lo, min(iv.hi, Fraction(0)), iv.lo_closed,
                   iv.hi_closed if iv.hi < 0 else False)
    pos = Interval(max(iv.lo, Fraction(0)), iv.hi,
                   iv.lo_closed if iv.lo > 0 else False, iv.hi_closed)
    zero = iv.contains(0)
    return [p for p in (neg, pos) if not p.empty], zero


def _piece_product(a, b):
    a_pos, b_pos = a.lo >= 0, b.lo >= 0
    if a_pos and b_pos:
        return Interval(_mul(a.lo, b.lo), _mul(a.hi, b.hi),
                        a.lo_closed and b.lo_closed, a.hi_closed and b.hi_closed)
    if not a_pos and not b_pos:
        return Interval(_mul(a.hi, b.hi), _mul(a.lo, b.lo),
                        a.hi_closed and b.hi_closed, a.lo_closed and b.lo_closed)
    if b_pos:
        n, p = a, b
    else:
        n, p = b, a
    return Interval(_mul(n.lo, p.hi), _mul(n.hi, p.lo),
                    n.lo_closed and p.hi_closed, n.hi_closed and p.lo_closed)


def interval_product(a, b):
    """Product set of two intervals as a list of intervals."""
    pa, za = _sign_pieces(a)
    pb, zb = _sign_pieces(b)
    out = [_piece_product(x, y) for x in pa for y in pb]
    if (za and any(not p.bounded for p in pb)) or \
            (zb and any(not p.bounded for p in pa)):
        raise IndeterminateProduct('0·∞ in {} · {}'.format(a, b))
    if (za and not b.empty) or (zb and not a.empty):
        out.append(Interval.point(0))
    return out


def product_set(a, k):
    """{xy : x in a, y in k} with the coordinatewise product."""
    if a.dimension != k.dimension:
        raise ValueError('dimension mismatch')
    boxes = []
    for ba, bk in product(a.boxes, k.boxes):
        per_axis = [interval_product(x, y) for x, y in zip(ba, bk)]
        boxes.extend(product(*per_axis))
    return Region(boxes, a.dimension)


@dataclass(frozen=True)
class VStar:
    region: Region
    exact: bool
    unknown: Region

    @property
    def tag(self):
        return 'exact' if self.exact else 'approximate'

    def to_json(self):
        return {'region': self.region.to_json(), 'text': str(self.region),
                'exactness': self.tag, 'unknown': self.unknown.to_json()}


def _critical_ratios(m, n, axis):
    ms, ns = set(), set()
    for b in m.boxes:
        for v in (b[axis].lo, b[axis].hi):
            if not math.isinf(v) and v != 0:
                ms.add(v)
    for b in n.boxes:
        for v in (b[axis].lo, b[axis].hi):
            if not math.isinf(v):
                ns.add(v)
    return {Fraction(0)} | {y / x for x in ms for y in ns}


def _v_star_cells(m, n, budget):
    d = m.dimension
    grid = CellGrid([_critical_ratios(m, n, j) for j in range(d)])
    zero_idx = [2 * grid.breaks[j].index(0) + 1 for j in range(d)]
    member = np.zeros(grid.shape, dtype=bool)
    unknown = np.zeros(grid.shape, dtype=bool)
    exhaustive = grid.size <= budget
    evaluated = 0
    for idx in np.ndindex(*grid.shape):
        if any(i == z for i, z in zip(idx, zero_idx)):
            continue
        if not exhaustive and (any(i % 2 == 1 for i in idx) or evaluated >= budget):
            unknown[idx] = True
            continue
        eta = grid.representative(idx)
        member[idx] = m.dilate(eta).is_subset(n)
        evaluated += 1
    if not exhaustive:
        log.warning('V_* cell count %d exceeds budget %d; result is approximate',
                    grid.size, budget)
    return VStar(grid.to_region(member), exhaustive, grid.to_region(unknown))


def v_star(m, n, settings=None):
    """{eta in (R\\0)^d : eta·m ⊂ n}.

    Containment is constant on the cells cut out by the ratios n_e/m_e of
    endpoints, so evaluating one point per cell is exact.
    """
    settings = resolve(settings)
    d = m.dimension
    if m.is_empty:
        return VStar(Region.nonzero(d), True, Region.empty_region(d))
    if d > 1:
        mf, nf = m.as_product(), (None if n.is_empty else n.as_product())
        if mf is not None and nf is not None:
            parts = [v_star(a, b, settings) for a, b in zip(mf, nf)]
            if all(p.exact for p in parts):
                return VStar(Region.cartesian([p.region for p in parts]), True,
                             Region.empty_region(d))
    return _v_star_cells(m, n, settings.vstar_max_cells)


@dataclass(frozen=True)
class DualityReport:
    left: Region
    right: Region
    equal: bool
    exact: bool
    difference: Region

    def to_json(self):
        return {'left': str(self.left), 'right': str(self.right),
                'equal': self.equal, 'exact': self.exact,
                'symmetric_difference': str(self.difference)}


def lemma3_check(m, n, settings=None):
    """Compare V_*(m^c, n^c) with 1/V_*(n, m)."""
    left = v_star(m.complement(), n.complement(), settings)
    right = v_star(n, m, settings)
    right_region = reciprocal(right.region)
    diff = left.region.difference(right_region).union(
        right_region.difference(left.region))
    return DualityReport(left.region, right_region, diff.is_empty,
                         left.exact and right.exact, diff.normalized())
