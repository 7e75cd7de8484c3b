import math

import numpy as np
import pytest

from hlab.errors import QuadratureNoConvergence
from hlab.quadrature import gauss_fixed, integrate, integrate_cells
from hlab.settings import DEFAULT_SETTINGS


def test_one_dimensional():
    value = integrate(lambda x: np.exp(x[:, 0]), [0.0], [1.0])
    assert abs(value[0] - (math.e - 1)) < 1e-10


def test_two_dimensional_product():
    value = integrate(lambda x: np.sin(x[:, 0]) * np.cos(x[:, 1]), [0.0, 0.0], [1.0, 1.0])
    assert abs(value[0] - (1 - math.cos(1)) * math.sin(1)) < 1e-10


def test_several_components_share_points():
    def moments(x):
        return np.stack([x[:, 0] ** k for k in range(3)], axis=1)
    value = integrate(moments, [0.0], [1.0], ncomp=3)
    assert np.allclose(value, [1.0, 0.5, 1.0 / 3.0], atol=1e-10)


def test_per_component_boxes():
    lower = np.array([[0.0], [0.0]])
    upper = np.array([[1.0], [2.0]])
    value = integrate(lambda x, comp: x[:, 0] ** comp, lower, upper)
    assert np.allclose(value, [1.0, 2.0], atol=1e-10)


def test_component_value_does_not_depend_on_batch():
    smooth = lambda x: np.exp(-x[:, 0])
    alone = integrate(smooth, [0.0], [3.0])[0]

    def both(x):
        return np.stack([smooth(x), np.sqrt(np.abs(x[:, 0] - 1.0 / 3.0))], axis=1)
    batched = integrate(both, [0.0], [3.0], ncomp=2)[0]
    assert abs(alone - batched) <= 1e-14


def test_no_convergence_is_raised():
    s = DEFAULT_SETTINGS.replace(max_depth=3, quad_tol=1e-14)
    with pytest.raises(QuadratureNoConvergence):
        integrate(lambda x: (x[:, 0] > 1.0 / 3.0).astype(float), [0.0], [1.0], s)


def test_unbounded_box_is_rejected():
    with pytest.raises(ValueError):
        integrate(lambda x: x[:, 0], [0.0], [math.inf])


def test_cells_are_summed():
    lowers = np.array([[0.0], [1.0]])
    uppers = np.array([[1.0], [3.0]])
    value = integrate_cells(lambda x: x[:, 0], lowers, uppers, ncomp=1)
    assert abs(value[0] - 4.5) < 1e-10
    assert integrate_cells(lambda x: x[:, 0], np.zeros((0, 1)), np.zeros((0, 1)),
                           ncomp=2).tolist() == [0.0, 0.0]


def test_gauss_fixed():
    assert abs(gauss_fixed(np.exp, 0.0, 1.0) - (math.e - 1)) < 1e-13
