import math

from hlab.distributions.functions import (Bump, Dilated, Plateau, Polynomial,
                                          ReciprocalMonomial, SmoothFunction, Term,
                                          TestFunction)
from hlab.distributions.profiles import DecayClass, make_profile
from hlab.distributions.reps import (Density, DistributionRep, EulerForm,
                                     LinearCombination, Membership, PairResult,
                                     PointMassCombo, distribution_types,
                                     hyperplane_clearance, is_OH, pair, support_of)


def random_test_functions(region, count, rng, max_derivative_order=12):
    """Bumps compactly inside an open region, deterministic for a seeded rng."""
    if region.is_empty:
        raise ValueError('cannot place test functions in an empty region')
    out = []
    boxes = region.boxes
    for _ in range(count):
        box = boxes[int(rng.integers(len(boxes)))]
        center, radius = [], []
        for iv in box:
            lo, hi = iv.as_floats()
            if lo == -math.inf and hi == math.inf:
                lo, hi = -4.0, 4.0
            elif lo == -math.inf:
                lo = hi - 4.0
            elif hi == math.inf:
                hi = lo + 4.0
            c = rng.uniform(lo + 0.3 * (hi - lo), lo + 0.7 * (hi - lo))
            r = rng.uniform(0.2, 0.9) * min(c - lo, hi - c)
            center.append(float(c))
            radius.append(float(r))
        out.append(TestFunction.bump(center, radius, max_derivative_order))
    return out
