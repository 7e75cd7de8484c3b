from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlab.errors import IndeterminateProduct, NotOpenRegion
from hlab.regions import INF, Interval, Region
from hlab.regions.dilation import lemma3_check, product_set, reciprocal, v_star
from hlab.regions.strata import omega_tilde, w_eps


def R(*boxes):
    return Region.parse(list(boxes))


@st.composite
def intervals(draw, lo=-4, hi=4):
    a = draw(st.integers(lo, hi - 1))
    b = draw(st.integers(a + 1, hi))
    return Interval(a, b, draw(st.booleans()), draw(st.booleans()))


@st.composite
def unions_1d(draw):
    return Region([(iv,) for iv in draw(st.lists(intervals(), min_size=1, max_size=3))], 1)


@st.composite
def open_regions_2d(draw):
    boxes = []
    for _ in range(draw(st.integers(1, 3))):
        ivs = []
        for _ in range(2):
            a = draw(st.integers(-3, 2))
            b = draw(st.integers(a + 1, 3))
            ivs.append(Interval.open(a, b))
        boxes.append(tuple(ivs))
    return Region(boxes, 2)


def test_interval_flags():
    iv = Interval.parse('(0,1]')
    assert str(iv) == '(0,1]'
    assert iv.contains(1) and not iv.contains(0)
    assert Interval.parse('{2}').is_point
    assert Interval.parse('[1/2, inf)').lo == Fraction(1, 2)
    with pytest.raises(ValueError):
        Interval.parse('[1;2]')


def test_basic_set_algebra():
    a, b = R('[1,2]'), R('[2,3]')
    assert a.union(b).normalized().equals(R('[1,3]'))
    assert a.intersection(b).equals(Region.point([2]))
    assert a.difference(b).equals(R('[1,2)'))
    assert R('(0,1)').complement().equals(R('(-inf,0]', '[1,inf)'))
    assert R('(1,2)').is_subset(R('[1,2]'))
    assert not R('[1,2]').is_subset(R('(1,2)'))
    assert R('[1,2]').interior().equals(R('(1,2)'))
    assert R('(1,2)').closure().equals(R('[1,2]'))


def test_dilate_and_reciprocal():
    assert R('(1,2)').dilate([-2]).equals(R('(-4,-2)'))
    assert reciprocal(R('[1,2]')).equals(R('[1/2,1]'))
    assert reciprocal(R('[1,inf)')).equals(R('(0,1]'))
    assert product_set(R('[1,2]'), R('(0,1)')).equals(R('(0,2)'))
    with pytest.raises(IndeterminateProduct):
        product_set(R('[0,1]'), R('[1,inf)'))


def test_product_detection():
    square = R(['(0,1)', '(2,3)'])
    factors = square.as_product()
    assert factors is not None
    assert factors[0].equals(R('(0,1)')) and factors[1].equals(R('(2,3)'))
    ell = R(['(0,2)', '(0,1)'], ['(0,1)', '[1,2)'])
    assert ell.as_product() is None
    assert ell.projection(0).equals(R('(0,2)'))
    assert square.contains(square.sample_point())


def test_w_eps_and_cube():
    w = w_eps(1, 1)
    assert w.contains([1]) and w.contains([-3]) and not w.contains([Fraction(1, 2)])
    assert Region.cube(1, 2).contains([0, 0])
    assert Region.cube(1, 2).all_open


@settings(derandomize=True, max_examples=60, deadline=None)
@given(unions_1d(), unions_1d())
def test_de_morgan(a, b):
    assert a.union(b).complement().equals(a.complement().intersection(b.complement()))
    assert a.difference(b).equals(a.intersection(b.complement()))
    assert a.normalized().equals(a)


def test_omega_tilde_cases():
    assert omega_tilde(Region.cube(1, 2)).is_full
    assert omega_tilde(Region.cube(1, 2)).describe() == 'R^d (all patterns)'
    assert omega_tilde(R(['(0,1)', '(0,1)'])).is_nonzero
    assert omega_tilde(Region.punctured(2)).is_punctured
    with pytest.raises(NotOpenRegion):
        omega_tilde(R('[0,1)'))


@settings(derandomize=True, max_examples=50, deadline=None)
@given(open_regions_2d(),
       st.tuples(st.sampled_from([-3, -2, -1, 1, 2, 3]), st.sampled_from([-2, -1, 1, 2])))
def test_omega_tilde_is_dilation_invariant(region, eta):
    assert omega_tilde(region.dilate(eta)) == omega_tilde(region)


def test_v_star_examples():
    vs = v_star(R('(1,2)'), R('(1,2)'))
    assert vs.exact and vs.region.equals(Region.point([1]))
    assert v_star(R('(0,1)'), R('(0,1)')).region.equals(R('(0,1]'))
    assert v_star(R('[1,2]'), R('(0,4)')).region.equals(R('(0,2)'))
    square = R(['(1,2)', '(3,4)'])
    assert v_star(square, square).region.equals(Region.point([1, 1]))


@settings(derandomize=True, max_examples=100, deadline=None)
@given(unions_1d(), unions_1d())
def test_complement_duality(m, n):
    report = lemma3_check(m, n)
    assert report.exact
    assert report.equal


@settings(derandomize=True, max_examples=40, deadline=None)
@given(unions_1d(), unions_1d())
def test_v_star_matches_rational_grid(m, n):
    vs = v_star(m, n)
    for k in range(-16, 17):
        for eta in (Fraction(k, 4), Fraction(k, 3)):
            if eta == 0:
                continue
            assert vs.region.contains([eta]) == m.dilate([eta]).is_subset(n)


@st.composite
def zero_free_unions(draw):
    boxes = []
    for _ in range(draw(st.integers(1, 3))):
        a = draw(st.integers(1, 7))
        b = draw(st.integers(a + 1, 8))
        if b == 8 and draw(st.booleans()):
            iv = Interval(Fraction(a, 3), INF, draw(st.booleans()), False)
        else:
            iv = Interval(Fraction(a, 3), Fraction(b, 2), draw(st.booleans()), draw(st.booleans()))
        if draw(st.booleans()):
            iv = Interval(-iv.hi, -iv.lo, iv.hi_closed, iv.lo_closed)
        boxes.append((iv,))
    return Region(boxes, 1)


@settings(derandomize=True, max_examples=80, deadline=None)
@given(zero_free_unions(), zero_free_unions())
def test_reciprocal_is_an_involution(a, b):
    assert reciprocal(reciprocal(a)).equals(a)
    square = Region([(x[0], y[0]) for x in a.boxes for y in b.boxes], 2)
    assert reciprocal(reciprocal(square)).equals(square)
    assert not reciprocal(a).contains([0])


@settings(derandomize=True, max_examples=60, deadline=None)
@given(unions_1d(), unions_1d(), unions_1d())
def test_product_set_is_commutative_and_associative(a, b, c):
    assert product_set(a, b).equals(product_set(b, a))
    assert product_set(product_set(a, b), c).equals(product_set(a, product_set(b, c)))


@settings(derandomize=True, max_examples=30, deadline=None)
@given(open_regions_2d(), open_regions_2d())
def test_product_set_commutes_in_two_dimensions(a, b):
    assert product_set(a, b).equals(product_set(b, a))


@settings(derandomize=True, max_examples=60, deadline=None)
@given(unions_1d(), unions_1d(), unions_1d())
def test_v_star_is_monotone(m, n, extra):
    base = v_star(m, n).region
    assert base.is_subset(v_star(m, n.union(extra)).region)
    assert base.is_subset(v_star(m.intersection(extra), n).region)
