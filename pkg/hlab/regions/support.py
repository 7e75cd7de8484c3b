import logging as log
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from hlab.errors import IndeterminateProduct, SupportTouchesHyperplane
from hlab.regions import CellGrid, Interval, Region
from hlab.regions.dilation import product_set, reciprocal, v_star
from hlab.regions.strata import require_open
from hlab.settings import resolve


class Status(Enum):
    HOLDS = 'Holds'
    FAILS = 'Fails'
    UNKNOWN = 'Unknown'


@dataclass(frozen=True)
class SupportCondition:
    status: Status
    witness: Region = None
    point: tuple = None
    level: int = None
    diagnostic: str = ''

    def to_json(self):
        return {
            'status': self.status.value,
            'witness': None if self.witness is None else str(self.witness),
            'point': None if self.point is None else [str(v) for v in self.point],
            'level': self.level,
            'diagnostic': self.diagnostic,
        }


def _shrink_interval(iv, k):
    lo_inf, hi_inf = iv.lo == -np.inf, iv.hi == np.inf
    scale = Fraction(2) ** k
    if lo_inf and hi_inf:
        return Interval.closed(-scale, scale)
    if lo_inf:
        hi = iv.hi - Fraction(1, 2) / scale
        return Interval.closed(hi - scale, hi)
    if hi_inf:
        lo = iv.lo + Fraction(1, 2) / scale
        return Interval.closed(lo, lo + scale)
    margin = (iv.hi - iv.lo) / (2 * scale)
    return Interval.closed(iv.lo + margin, iv.hi - margin)


def shrink(region, k):
    """Compact box union inside an open region; cofinal as k grows."""
    return Region([tuple(_shrink_interval(iv, k) for iv in b)
                   for b in region.boxes], region.dimension)


def _escaping_point(p, omega):
    grid = CellGrid.spanning([p, omega])
    idx = np.argwhere(grid.mask(p) & ~grid.mask(omega))
    return grid.representative(tuple(idx[0]))


def support_condition(dist, omega, settings=None):
    """Check that (1/supp T)·K is compactly contained in omega for every compact K.

    A dyadic family of shrunk boxes searches for a failing K. Holds is
    certified through cl(1/supp T)·omega ⊂ omega, which is equivalent once
    1/supp T is bounded.
    """
    settings = resolve(settings)
    require_open(omega)
    if dist.hyperplane_clearance() <= 0:
        raise SupportTouchesHyperplane(
            'support {} meets a coordinate hyperplane'.format(dist.support_of()))
    inv = reciprocal(dist.support_of().closure()).closure()
    for k in range(settings.support_levels):
        compact = shrink(omega, k)
        if compact.is_empty:
            continue
        p = product_set(inv, compact)
        if not p.is_subset(omega):
            point = _escaping_point(p, omega)
            log.info('support condition fails at level {} via {}'.format(k, compact))
            return SupportCondition(
                Status.FAILS, compact, point, k,
                '(1/supp T)·K reaches {} outside the domain'.format(
                    tuple(str(v) for v in point)))
    try:
        holds = product_set(inv, omega).is_subset(omega)
    except IndeterminateProduct as e:
        return SupportCondition(Status.UNKNOWN, diagnostic=str(e))
    if holds:
        return SupportCondition(Status.HOLDS,
                                diagnostic='cl(1/supp T)·Ω ⊂ Ω')
    return SupportCondition(
        Status.UNKNOWN,
        diagnostic='no failing K within {} dyadic levels'.format(
            settings.support_levels))


def condition2_check(dist, omega, small, large, settings=None):
    """For compact boxes small ⊂⊂ Ω and large ⊂⊂ Ω: 1/supp T ⊂ V_*(large^c, small^c)."""
    vs = v_star(large.complement(), small.complement(), settings)
    return reciprocal(dist.support_of()).is_subset(vs.region)
