import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlab.distributions import (Bump, Dilated, Polynomial, ReciprocalMonomial, Term,
                                TestFunction, random_test_functions)
from hlab.distributions.functions import monomial_leibniz
from hlab.errors import UnderivableOrder
from hlab.regions import Region

H = 1e-5


def finite_difference(f, x, order):
    return (f.partial(x + H, (order,)) - f.partial(x - H, (order,))) / (2 * H)


def test_bump_values_and_support():
    phi = TestFunction.bump([0.0], [1.0])
    assert abs(phi([0.0])[0] - math.exp(-1)) < 1e-15
    assert phi([1.0])[0] == 0.0 and phi([-3.0])[0] == 0.0
    assert phi.support().equals(Region.parse(['[-1,1]']))
    square = TestFunction.bump([1.5, -2.0], [0.5, 0.25])
    assert abs(square([[1.5, -2.0]])[0] - math.exp(-2)) < 1e-15


@pytest.mark.parametrize('order', range(5))
def test_bump_derivatives_match_differences(order):
    phi = TestFunction.bump([0.3], [0.7])
    x = np.linspace(-0.3, 0.9, 25)[:, None]
    exact = phi.partial(x, (order + 1,))
    approx = finite_difference(phi, x, order)
    assert np.all(np.abs(exact - approx) <= 1e-5 * (1 + np.abs(exact)))


@pytest.mark.parametrize('order', range(4))
def test_plateau_derivatives_match_differences(order):
    phi = TestFunction.plateau([1.0], [2.0], [0.5])
    x = np.concatenate([np.linspace(0.55, 0.95, 9), np.linspace(2.05, 2.45, 9)])[:, None]
    exact = phi.partial(x, (order + 1,))
    approx = finite_difference(phi, x, order)
    assert np.all(np.abs(exact - approx) <= 1e-5 * (1 + np.abs(exact)))
    inside = np.linspace(1.0, 2.0, 11)[:, None]
    assert np.all(phi(inside) == 1.0)
    assert np.all(phi.partial(inside, (order + 1,)) == 0.0)


def test_bump_times_monomial():
    plain = TestFunction.bump([2.0], [0.5])
    weighted = TestFunction.bump([2.0], [0.5], monomial=[3])
    x = np.linspace(1.6, 2.4, 9)[:, None]
    assert np.allclose(weighted(x), x[:, 0] ** 3 * plain(x), rtol=1e-14)
    assert np.allclose(weighted.partial(x, (1,)),
                       3 * x[:, 0] ** 2 * plain(x) + x[:, 0] ** 3 * plain.partial(x, (1,)),
                       rtol=1e-12, atol=1e-14)


@settings(derandomize=True, max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(0.1, 2), st.integers(0, 6))
def test_bump_sup_bound_is_certified(center, radius, order):
    phi = TestFunction.bump([center], [radius])
    x = np.linspace(center - radius, center + radius, 2001)[:, None]
    assert np.max(np.abs(phi.partial(x, (order,)))) <= phi.sup_bound((order,)) * (1 + 1e-12)


@pytest.mark.parametrize('order', range(6))
def test_plateau_sup_bound_is_certified(order):
    phi = TestFunction.plateau([0.0], [1.0], [0.3])
    x = np.linspace(-0.3, 1.3, 4001)[:, None]
    assert np.max(np.abs(phi.partial(x, (order,)))) <= phi.sup_bound((order,)) * (1 + 1e-12)


def test_order_limit():
    phi = TestFunction.bump([0.0], [1.0], max_derivative_order=2)
    phi.partial([0.5], (2,))
    with pytest.raises(UnderivableOrder):
        phi.partial([0.5], (3,))


def test_term_needs_compact_factor():
    with pytest.raises(ValueError):
        Term([[Polynomial([1.0, 2.0])]])
    term = Term([[Polynomial([1.0, 2.0]), Bump(0.0, 1.0)]], coef=2.0)
    assert abs(TestFunction([term])([0.0])[0] - 2 * math.exp(-1)) < 1e-15


def test_reciprocal_monomial():
    g = ReciprocalMonomial((1,))
    assert np.allclose(g([[2.0], [-2.0]]), [0.25, -0.25], rtol=1e-15)
    assert abs(g.partial([2.0], (1,))[0] + 0.25) < 1e-15
    g2 = ReciprocalMonomial((0, 2), clearance=1.0)
    assert abs(g2([[-1.0, 2.0]])[0] - 1 / 8) < 1e-15
    assert g2.growth((0, 0)) == (1.0, 0)


def test_dilated():
    phi = TestFunction.bump([1.0], [0.5])
    g = Dilated(phi, [2.0])
    x = np.linspace(0.3, 0.7, 5)[:, None]
    assert np.allclose(g(x), phi(2 * x), rtol=1e-15)
    assert np.allclose(g.partial(x, (1,)), 2 * phi.partial(2 * x, (1,)), rtol=1e-15)
    assert g.support().equals(Region.parse(['[1/4,3/4]']))
    with pytest.raises(ValueError):
        Dilated(phi, [0.0])


def test_monomial_leibniz():
    phi = TestFunction.bump([1.0], [0.8])
    x = np.linspace(0.5, 1.5, 7)[:, None]
    got = monomial_leibniz(phi, x, (1,), (1,))
    expected = phi.partial(x, (1,)) + x[:, 0] * phi.partial(x, (2,))
    assert np.allclose(got, expected, rtol=1e-12, atol=1e-14)


def test_random_test_functions_are_inside_and_seeded():
    region = Region.parse([['(0,1)', '(2,inf)']])
    first = random_test_functions(region, 4, np.random.default_rng(7))
    again = random_test_functions(region, 4, np.random.default_rng(7))
    for a, b in zip(first, again):
        assert a.to_json() == b.to_json()
        assert a.support().is_subset(region)
