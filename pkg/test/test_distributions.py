import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sp_integrate
from scipy.special import exp1

from hlab.distributions import (Density, EulerForm, LinearCombination, Membership,
                                PointMassCombo, ReciprocalMonomial, Term, TestFunction,
                                hyperplane_clearance, is_OH, pair, support_of)
from hlab.distributions.profiles import (BumpProfile, Constant, DecayClass, Exponential,
                                         Gaussian, Power, make_profile)
from hlab.errors import UnderivableOrder
from hlab.quadrature import gauss_fixed
from hlab.regions import Region


def R(*boxes):
    return Region.parse(list(boxes))


def test_point_mass_pairing():
    phi = TestFunction.bump([2.0], [1.0])
    assert pair(PointMassCombo.delta((2.0,)), phi) == pytest.approx(math.exp(-1), abs=1e-15)
    x = np.array([[2.4]])
    dprime = PointMassCombo.delta((2.4,), (1,))
    assert dprime.pair(phi) == pytest.approx(-phi.partial(x, (1,))[0], abs=1e-15)
    far = PointMassCombo.delta((7.0,))
    assert far.pair(phi) == 0.0


def test_point_mass_validation():
    with pytest.raises(ValueError):
        PointMassCombo([((1.0,), (0,), 0.0)])
    with pytest.raises(ValueError):
        PointMassCombo([((1.0,), (0, 0), 1.0)])
    with pytest.raises(ValueError):
        PointMassCombo([])


def test_point_mass_algebra():
    a = PointMassCombo.delta((2.0,))
    b = PointMassCombo.delta((-0.5,), (1,), 2.0)
    both = a + b
    assert isinstance(both, PointMassCombo)
    assert len(both.terms) == 2 and both.max_order == 1
    assert support_of(both).equals(R('{2}', '{-1/2}'))
    assert hyperplane_clearance(both) == 0.5
    assert is_OH(both) == Membership.CERTIFIED
    tripled = 3 * a
    assert tripled.terms[0][2] == 3.0


def test_density_pairing_matches_fixed_rule():
    t = Density.indicator(R('[1,2]'))
    phi = TestFunction.bump([1.5], [0.75])
    expected = gauss_fixed(lambda x: phi(x[:, None]), 1.0, 2.0)
    assert t.pair(phi) == pytest.approx(expected, abs=1e-10)

    g = Density(2.0, [Gaussian(1.0)], Region.whole(1))
    expected = gauss_fixed(lambda x: 2.0 * np.exp(-x * x / 2) * phi(x[:, None]), 0.75, 2.25)
    assert g.pair(phi) == pytest.approx(expected, abs=1e-10)


def test_half_line_density_is_truncated():
    t = Density(1.0, [Exponential(1.0)], R('[1,inf)'))
    result = t.integrate(ReciprocalMonomial((0,), clearance=1.0))
    assert result.value == pytest.approx(exp1(1.0), abs=1e-9)
    assert result.truncation_radius is not None
    assert t.tail_bound(result.truncation_radius, 1.0, 0) <= 1e-12


def test_density_validation_and_decay():
    with pytest.raises(ValueError):
        Density.indicator(R('[1,inf)'))
    with pytest.raises(ValueError):
        Density(1.0, [Power(1.0)], R('[1,inf)'))
    with pytest.raises(ValueError):
        Density(1.0, [Exponential(1.0)], R('[1,inf)'), DecayClass.compact())
    with pytest.raises(ValueError):
        Density(1.0, [Constant(), Constant()], R('[1,2]'))
    assert Density.indicator(R('[1,2]')).decay == DecayClass.compact()
    assert Density(1.0, [Exponential(2.0)], R('[1,inf)')).is_OH() == Membership.CERTIFIED
    heavy = Density(1.0, [Power(3.0)], R('[1,inf)'))
    assert heavy.decay == DecayClass.polynomial(3.0)
    assert heavy.is_OH() == Membership.UNKNOWN
    assert Density.indicator(R('[1,2]')).truncation_radius(1.0, 0, 1e-12) is None


def test_dilated_partial_matches_direct_integral():
    t = Density.indicator(R('[1,2]'))
    phi = TestFunction.bump([1.5], [0.5])
    ys = np.array([[0.8], [1.0], [1.2]])
    got = t.dilated_partial(phi, ys, (0,))
    got1 = t.dilated_partial(phi, ys, (1,))
    for i, (y,) in enumerate(ys):
        direct = gauss_fixed(lambda x: phi((x * y)[:, None]), 1.0, 2.0)
        direct1 = gauss_fixed(lambda x: x * phi.partial((x * y)[:, None], (1,)), 1.0, 2.0)
        assert got[i] == pytest.approx(direct, abs=1e-10)
        assert got1[i] == pytest.approx(direct1, abs=1e-9)


def test_dilated_partial_at_zero():
    t = Density.indicator(R('[1,2]'))
    phi = TestFunction.bump([0.0], [1.0])
    assert t.dilated_partial(phi, [[0.0]], (0,))[0] == pytest.approx(math.exp(-1), abs=1e-12)


def test_euler_form_pairing_is_transposed():
    t = Density.indicator(R('[1,2]'))
    g = TestFunction.bump([1.5], [1.0])
    theta_t = EulerForm([((1,), t)])
    # ⟨θ t, g⟩ = -∫_1^2 (x g)' dx
    assert theta_t.pair(g) == pytest.approx(-math.exp(-4 / 3), abs=1e-10)
    assert EulerForm.of(t).pair(g) == pytest.approx(t.pair(g), abs=1e-12)
    assert isinstance(t + t, EulerForm)


def test_linear_combination():
    phi = TestFunction.bump([1.5], [0.75])
    t = Density.indicator(R('[1,2]'))
    d = PointMassCombo.delta((1.25,))
    combo = d + t
    assert isinstance(combo, LinearCombination)
    assert combo.pair(phi) == pytest.approx(d.pair(phi) + t.pair(phi), abs=1e-12)
    assert (combo - d).pair(phi) == pytest.approx(t.pair(phi), abs=1e-12)
    assert combo.support_of().equals(R('[1,2]'))


def test_profile_moments_and_tails():
    assert Constant(2.0).moment(1, -1.0, 2.0) == pytest.approx(
        sp_integrate.quad(lambda x: 2.0 * (1 + abs(x)), -1.0, 2.0)[0], rel=1e-12)
    assert Exponential(1.0).half_tail(2.0, 1) == pytest.approx(4 * math.exp(-2), rel=1e-12)
    tail = sp_integrate.quad(lambda x: (1 + x * x) ** -2.5 * (1 + x), 3.0, math.inf)[0]
    assert Power(5.0).half_tail(3.0, 1) >= tail


def test_profile_registry_and_derivatives():
    g = make_profile('gaussian', 2.0)
    assert isinstance(g, Gaussian)
    x = np.array([0.5, -1.0])
    assert np.allclose(g.value(x, 1), -x / 4 * np.exp(-x * x / 8), rtol=1e-14)
    assert isinstance(make_profile('bump', 1.0, 0.5), BumpProfile)
    with pytest.raises(ValueError):
        make_profile('lorentzian')
    assert DecayClass.rapid().weakest(DecayClass.polynomial(4)) == DecayClass.polynomial(4)


def test_point_mass_order_is_checked_before_support():
    phi = TestFunction.bump([2.0], [1.0], max_derivative_order=4)
    with pytest.raises(UnderivableOrder) as e:
        PointMassCombo.delta((7.0,), (5,)).pair(phi)
    assert e.value.requested == 5 and e.value.available == 4
    assert PointMassCombo.delta((7.0,), (4,)).pair(phi) == 0.0


nonzero = st.one_of(st.floats(0.25, 3.0), st.floats(-3.0, -0.25))


@settings(derandomize=True, max_examples=25, deadline=None)
@given(nonzero, nonzero, st.floats(1.1, 1.9), st.floats(0.2, 0.6))
def test_pairing_is_bilinear(a, b, center, radius):
    t1 = Density.indicator(R('[1,2]'))
    t2 = PointMassCombo.delta((1.5,), (1,))
    g1 = TestFunction.bump([center], [radius])
    g2 = TestFunction.bump([1.5], [0.4])
    combo = a * t1 + b * t2
    assert combo.pair(g1) == pytest.approx(a * t1.pair(g1) + b * t2.pair(g1), abs=1e-9)
    g = TestFunction([Term(g1.terms[0].factors, a), Term(g2.terms[0].factors, b)])
    for t in (t1, t2, EulerForm([((1,), t1)])):
        assert t.pair(g) == pytest.approx(a * t.pair(g1) + b * t.pair(g2), abs=1e-9)


@settings(derandomize=True, max_examples=25, deadline=None)
@given(st.floats(3.5, 8.0), st.floats(0.1, 0.9), st.integers(0, 3))
def test_pairing_is_local(center, radius, order):
    g = TestFunction.bump([center], [radius])
    t = Density.indicator(R('[1,2]'))
    for dist in (t, PointMassCombo.delta((2.5,), (order,)), EulerForm([((order,), t)]),
                 t + PointMassCombo.delta((-1.0,))):
        assert dist.pair(g) == 0.0


def test_separable_density_matches_full_quadrature():
    square = Density.indicator(R(['[1,2]', '[1,3/2]']))
    phi = TestFunction.bump([1.5, -1.0], [0.5, 0.4])
    ys = np.array([[0.9, -0.8], [1.1, -0.75], [0.8, -0.6], [0.0, 0.0], [3.0, 3.0]])
    for gamma in [(0, 0), (1, 0), (1, 2)]:
        got = square.dilated_partial(phi, ys, gamma)
        for i, y in enumerate(ys):
            def integrand(x2, x1):
                x = np.array([[x1, x2]])
                return x1 ** gamma[0] * x2 ** gamma[1] * phi.partial(x * y, gamma)[0]
            direct = sp_integrate.dblquad(integrand, 1.0, 2.0, 1.0, 1.5,
                                          epsabs=1e-12, epsrel=1e-11)[0]
            assert got[i] == pytest.approx(direct, abs=1e-8)
