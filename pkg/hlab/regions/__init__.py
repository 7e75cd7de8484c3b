"""
Finite unions of axis-aligned boxes with exact endpoints.

Endpoints are ``Fraction`` values or ``±math.inf``; every endpoint carries an
open/closed flag. Set operations run on the cell complex spanned by all finite
endpoints: on each cell membership is constant, so every answer is exact.
"""
import logging as log
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from hlab.errors import EmptyRegion

INF = math.inf

_INTERVAL = re.compile(r'^\s*([\[\(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\]\)])\s*$')
_POINT = re.compile(r'^\s*\{\s*([^,{}]+?)\s*\}\s*$')


def exact(v):
    """Convert a literal to an exact endpoint value."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise ValueError('boolean is not an endpoint')
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ('inf', '+inf', 'infinity', '+infinity'):
            return INF
        if s in ('-inf', '-infinity'):
            return -INF
        return Fraction(s)
    f = float(v)
    if math.isnan(f):
        raise ValueError('NaN is not an endpoint')
    if math.isinf(f):
        return f
    return Fraction(f)


def fmt(v):
    if v == INF:
        return 'inf'
    if v == -INF:
        return '-inf'
    if v.denominator == 1:
        return str(v.numerator)
    return '{}/{}'.format(v.numerator, v.denominator)


@dataclass(frozen=True)
class Interval:
    lo: object
    hi: object
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo, hi = exact(self.lo), exact(self.hi)
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)
        if math.isinf(lo):
            object.__setattr__(self, 'lo_closed', False)
        if math.isinf(hi):
            object.__setattr__(self, 'hi_closed', False)

    @classmethod
    def parse(cls, text):
        m = _POINT.match(text)
        if m:
            v = exact(m.group(1))
            return cls(v, v, True, True)
        m = _INTERVAL.match(text)
        if not m:
            raise ValueError('malformed interval {!r}'.format(text))
        return cls(exact(m.group(2)), exact(m.group(3)),
                   m.group(1) == '[', m.group(4) == ']')

    @classmethod
    def point(cls, v):
        return cls(v, v, True, True)

    @classmethod
    def open(cls, lo, hi):
        return cls(lo, hi, False, False)

    @classmethod
    def closed(cls, lo, hi):
        return cls(lo, hi, True, True)

    @property
    def empty(self):
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    @property
    def is_point(self):
        return self.lo == self.hi and not self.empty

    @property
    def bounded(self):
        return not (math.isinf(self.lo) or math.isinf(self.hi))

    def contains(self, v):
        v = exact(v)
        if v < self.lo or v > self.hi:
            return False
        if v == self.lo and not self.lo_closed:
            return False
        if v == self.hi and not self.hi_closed:
            return False
        return True

    def closure(self):
        return Interval(self.lo, self.hi, True, True)

    def scale(self, a):
        a = exact(a)
        if a == 0:
            raise ValueError('dilation factor must be nonzero')
        if a > 0:
            return Interval(_mul(a, self.lo), _mul(a, self.hi),
                            self.lo_closed, self.hi_closed)
        return Interval(_mul(a, self.hi), _mul(a, self.lo),
                        self.hi_closed, self.lo_closed)

    def distance_to_zero(self):
        if self.contains(0) or self.lo == 0 or self.hi == 0:
            return Fraction(0)
        if self.lo > 0:
            return self.lo
        return -self.hi

    def as_floats(self):
        return float(self.lo), float(self.hi)

    def __str__(self):
        if self.is_point:
            return '{' + fmt(self.lo) + '}'
        return '{}{},{}{}'.format('[' if self.lo_closed else '(', fmt(self.lo),
                                  fmt(self.hi), ']' if self.hi_closed else ')')


def _mul(a, b):
    if math.isinf(a) or math.isinf(b):
        if a == 0 or b == 0:
            return Fraction(0)
        return INF if (a > 0) == (b > 0) else -INF
    return a * b


REAL_LINE = Interval(-INF, INF, False, False)


class Region:
    """Finite union of boxes; a box is a tuple of ``d`` intervals."""

    def __init__(self, boxes, dimension=None):
        boxes = [tuple(b) for b in boxes]
        if dimension is None:
            if not boxes:
                raise ValueError('dimension required for an empty region')
            dimension = len(boxes[0])
        for b in boxes:
            if len(b) != dimension:
                raise ValueError('box {} is not {}-dimensional'.format(
                    _box_str(b), dimension))
        self.dimension = dimension
        seen, kept = set(), []
        for b in boxes:
            if any(iv.empty for iv in b) or b in seen:
                continue
            seen.add(b)
            kept.append(b)
        self.boxes = tuple(kept)

    @classmethod
    def empty_region(cls, d):
        return cls([], d)

    @classmethod
    def whole(cls, d):
        return cls([(REAL_LINE,) * d], d)

    @classmethod
    def box(cls, *intervals):
        return cls([tuple(intervals)])

    @classmethod
    def point(cls, coords):
        return cls([tuple(Interval.point(c) for c in coords)])

    @classmethod
    def parse(cls, boxes):
        """Parse a list of boxes, each a list of interval strings."""
        parsed = []
        for b in boxes:
            if isinstance(b, str):
                b = [b]
            parsed.append(tuple(Interval.parse(s) for s in b))
        return cls(parsed)

    @classmethod
    def cube(cls, r, d):
        return cls([(Interval.open(-exact(r), exact(r)),) * d])

    @classmethod
    def nonzero(cls, d):
        """(R\\0)^d as its 2^d open orthants."""
        halves = (Interval.open(-INF, 0), Interval.open(0, INF))
        return cls(list(product(halves, repeat=d)), d)

    @classmethod
    def punctured(cls, d):
        """R^d without the origin."""
        boxes = []
        for j in range(d):
            for half in (Interval.open(-INF, 0), Interval.open(0, INF)):
                boxes.append(tuple(half if i == j else REAL_LINE
                                   for i in range(d)))
        return cls(boxes, d)

    @classmethod
    def cartesian(cls, factors):
        """Cartesian product of regions, in order."""
        d = sum(f.dimension for f in factors)
        boxes = [sum(combo, ()) for combo in product(*[f.boxes for f in factors])]
        return cls(boxes, d)

    # queries

    @property
    def is_empty(self):
        return len(self.boxes) == 0

    @property
    def bounded(self):
        return all(iv.bounded for b in self.boxes for iv in b)

    @property
    def all_open(self):
        for b in self.boxes:
            for iv in b:
                if iv.lo_closed or iv.hi_closed:
                    return False
        return True

    def contains(self, point):
        point = [exact(v) for v in point]
        return any(all(iv.contains(v) for iv, v in zip(b, point))
                   for b in self.boxes)

    def contains_array(self, points):
        """Vectorized float membership for points of shape (n, d)."""
        points = np.asarray(points, dtype=float).reshape(-1, self.dimension)
        inside = np.zeros(points.shape[0], dtype=bool)
        for b in self.boxes:
            ok = np.ones(points.shape[0], dtype=bool)
            for j, iv in enumerate(b):
                x = points[:, j]
                lo, hi = iv.as_floats()
                ok &= (x >= lo) if iv.lo_closed else (x > lo)
                ok &= (x <= hi) if iv.hi_closed else (x < hi)
            inside |= ok
        return inside

    def clearance(self):
        """Infimum over the region of min_j |x_j| (0 when empty)."""
        if self.is_empty:
            return Fraction(0)
        return min(min(iv.distance_to_zero() for iv in b) for b in self.boxes)

    def projection(self, j):
        return Region([(b[j],) for b in self.boxes], 1).normalized()

    def as_product(self):
        """Per-axis factors when the region is a Cartesian product, else None."""
        if self.is_empty:
            return None
        factors = [self.projection(j) for j in range(self.dimension)]
        if self.equals(Region.cartesian(factors)):
            return factors
        return None

    def sample_point(self):
        grid = CellGrid.spanning([self])
        mask = grid.mask(self)
        idx = np.argwhere(mask)
        if len(idx) == 0:
            raise EmptyRegion('region is empty')
        return grid.representative(tuple(idx[0]))

    # transformations

    def closure(self):
        return Region([tuple(iv.closure() for iv in b) for b in self.boxes],
                      self.dimension)

    def interior(self):
        grid = CellGrid.spanning([self])
        return grid.to_region(grid.erode(grid.mask(self)))

    def complement(self):
        grid = CellGrid.spanning([self])
        return grid.to_region(~grid.mask(self))

    def intersection(self, other):
        self._check(other)
        grid = CellGrid.spanning([self, other])
        return grid.to_region(grid.mask(self) & grid.mask(other))

    def union(self, other):
        self._check(other)
        return Region(self.boxes + other.boxes, self.dimension)

    def difference(self, other):
        self._check(other)
        grid = CellGrid.spanning([self, other])
        return grid.to_region(grid.mask(self) & ~grid.mask(other))

    def normalized(self):
        grid = CellGrid.spanning([self])
        return grid.to_region(grid.mask(self))

    def dilate(self, a):
        a = [exact(v) for v in a]
        return Region([tuple(iv.scale(s) for iv, s in zip(b, a))
                       for b in self.boxes], self.dimension)

    def is_subset(self, other):
        self._check(other)
        if self.is_empty:
            return True
        grid = CellGrid.spanning([self, other])
        return not np.any(grid.mask(self) & ~grid.mask(other))

    def equals(self, other):
        self._check(other)
        grid = CellGrid.spanning([self, other])
        return bool(np.array_equal(grid.mask(self), grid.mask(other)))

    def cells(self):
        """Full-dimensional closed cells covering the region up to measure zero.

        Returned as float arrays ``(lower, upper)`` of shape (k, d).
        """
        grid = CellGrid.spanning([self])
        mask = grid.mask(self)
        lows, highs = [], []
        for idx in np.argwhere(mask):
            if any(i % 2 == 1 for i in idx):
                continue
            lo, hi = zip(*(grid.cell_interval(j, i).as_floats()
                           for j, i in enumerate(idx)))
            lows.append(lo)
            highs.append(hi)
        d = self.dimension
        return (np.array(lows, dtype=float).reshape(-1, d),
                np.array(highs, dtype=float).reshape(-1, d))

    def _check(self, other):
        if other.dimension != self.dimension:
            raise ValueError('dimension mismatch: {} vs {}'.format(
                self.dimension, other.dimension))

    def __eq__(self, other):
        return isinstance(other, Region) and other.dimension == self.dimension \
            and self.equals(other)

    def __hash__(self):
        return hash(self.dimension)

    def __str__(self):
        if self.is_empty:
            return '∅'
        return ' ∪ '.join(_box_str(b) for b in self.boxes)

    def __repr__(self):
        return 'Region({})'.format(self)

    def to_json(self):
        return [[str(iv) for iv in b] for b in self.boxes]


def _box_str(b):
    return '×'.join(str(iv) for iv in b)


class CellGrid:
    """Product cell complex over per-axis breakpoints.

    Along an axis with breakpoints e_0 < ... < e_{k-1} the cells are
    (-inf,e_0), {e_0}, (e_0,e_1), ..., {e_{k-1}}, (e_{k-1},inf); point cells sit
    at odd indices.
    """

    def __init__(self, breaks):
        self.breaks = [sorted(set(b)) for b in breaks]
        self.dimension = len(self.breaks)
        self.shape = tuple(2 * len(b) + 1 for b in self.breaks)

    @classmethod
    def spanning(cls, regions):
        d = regions[0].dimension
        breaks = [set() for _ in range(d)]
        for r in regions:
            for b in r.boxes:
                for j, iv in enumerate(b):
                    for v in (iv.lo, iv.hi):
                        if not math.isinf(v):
                            breaks[j].add(v)
        return cls(breaks)

    @property
    def size(self):
        return int(np.prod(self.shape))

    def cell_interval(self, axis, i):
        br = self.breaks[axis]
        if i % 2 == 1:
            return Interval.point(br[i // 2])
        lo = br[i // 2 - 1] if i > 0 else -INF
        hi = br[i // 2] if i // 2 < len(br) else INF
        return Interval(lo, hi, False, False)

    def representative_1d(self, axis, i):
        br = self.breaks[axis]
        if i % 2 == 1:
            return br[i // 2]
        if not br:
            return Fraction(0)
        if i == 0:
            return br[0] - 1
        if i // 2 >= len(br):
            return br[-1] + 1
        return (br[i // 2 - 1] + br[i // 2]) / 2

    def representative(self, idx):
        return tuple(self.representative_1d(j, i) for j, i in enumerate(idx))

    def axis_mask(self, axis, interval):
        return np.array([interval.contains(self.representative_1d(axis, i))
                         for i in range(self.shape[axis])], dtype=bool)

    def mask(self, region):
        out = np.zeros(self.shape, dtype=bool)
        for b in region.boxes:
            m = np.ones(self.shape, dtype=bool)
            for j, iv in enumerate(b):
                shape = [1] * self.dimension
                shape[j] = self.shape[j]
                m &= self.axis_mask(j, iv).reshape(shape)
            out |= m
        return out

    def _star(self, mask, op):
        out = mask.copy()
        for axis in range(self.dimension):
            cur = out.copy()
            n = self.shape[axis]
            for i in range(1, n, 2):
                sl = [slice(None)] * self.dimension
                nb = []
                for k in (i - 1, i, i + 1):
                    sl[axis] = k
                    nb.append(cur[tuple(sl)])
                sl[axis] = i
                out[tuple(sl)] = op(op(nb[0], nb[1]), nb[2])
        return out

    def erode(self, mask):
        return self._star(mask, np.logical_and)

    def dilate(self, mask):
        return self._star(mask, np.logical_or)

    def to_region(self, mask):
        """Merge member cells into boxes along each axis in turn."""
        boxes = [tuple((i, i) for i in idx) for idx in np.argwhere(mask)]
        for axis in range(self.dimension):
            groups = {}
            for b in boxes:
                key = b[:axis] + b[axis + 1:]
                groups.setdefault(key, []).append(b[axis])
            merged = []
            for key in sorted(groups):
                runs = sorted(groups[key])
                start, end = runs[0]
                for s, e in runs[1:]:
                    if s == end + 1:
                        end = e
                    else:
                        merged.append(key[:axis] + ((start, end),) + key[axis:])
                        start, end = s, e
                merged.append(key[:axis] + ((start, end),) + key[axis:])
            boxes = merged
        out = []
        for b in sorted(boxes):
            ivs = []
            for j, (s, e) in enumerate(b):
                first, last = self.cell_interval(j, s), self.cell_interval(j, e)
                ivs.append(Interval(first.lo, last.hi,
                                    first.lo_closed, last.hi_closed))
            out.append(tuple(ivs))
        log.debug('merged %d cells into %d boxes', int(mask.sum()), len(out))
        return Region(out, self.dimension)
