from dataclasses import dataclass
from itertools import chain, combinations

from hlab.errors import EmptyRegion, NotOpenRegion
from hlab.regions import INF, Interval, Region


def _subsets(items):
    items = sorted(items)
    return chain.from_iterable(combinations(items, r)
                               for r in range(len(items) + 1))


@dataclass(frozen=True)
class StratifiedSet:
    """Union of zero-pattern strata {y : y_j = 0 iff j in Z}.

    Patterns use 1-based coordinate indices, as printed in reports.
    """
    dimension: int
    patterns: frozenset

    @property
    def is_full(self):
        return len(self.patterns) == 2 ** self.dimension

    @property
    def is_nonzero(self):
        return self.patterns == frozenset([frozenset()])

    @property
    def is_punctured(self):
        every = frozenset(range(1, self.dimension + 1))
        return self.dimension > 1 and \
            len(self.patterns) == 2 ** self.dimension - 1 and \
            every not in self.patterns

    def contains(self, point):
        pattern = frozenset(j + 1 for j, v in enumerate(point) if v == 0)
        return pattern in self.patterns

    def sorted_patterns(self):
        return sorted((sorted(p) for p in self.patterns),
                      key=lambda p: (len(p), p))

    def describe(self):
        if self.is_full:
            return 'R^d (all patterns)'
        if self.is_nonzero:
            return '(R\\0)^d (no zero coordinates)'
        if self.is_punctured:
            return 'R^d \\ {0}'
        return 'union of strata ' + ', '.join(
            '{' + ','.join(str(j) for j in p) + '}'
            for p in self.sorted_patterns())

    def to_json(self):
        return {'dimension': self.dimension,
                'patterns': self.sorted_patterns(),
                'description': self.describe()}


def require_open(region):
    if region.is_empty:
        raise EmptyRegion('region is empty')
    if not region.all_open:
        raise NotOpenRegion('region {} has a closed endpoint'.format(region))


def omega_tilde(region):
    """Dilation hull of an open region as a set of zero patterns."""
    require_open(region)
    patterns = set()
    for box in region.boxes:
        zeros = [j + 1 for j, iv in enumerate(box) if iv.contains(0)]
        # remaining coordinates must admit a nonzero value
        if any(iv.is_point and iv.lo == 0 for iv in box):
            continue
        for z in _subsets(zeros):
            patterns.add(frozenset(z))
    return StratifiedSet(region.dimension, frozenset(patterns))


def w_eps(eps, d):
    """Points whose coordinates are all at least eps in absolute value."""
    if eps <= 0:
        raise ValueError('eps must be positive, got {}'.format(eps))
    halves = (Interval(-INF, -eps, False, True), Interval(eps, INF, True, False))
    boxes = [()]
    for _ in range(d):
        boxes = [b + (h,) for b in boxes for h in halves]
    return Region(boxes, d)
