import numpy as np
import pytest

from nec2dqn.core.exceptions import ContractViolationError
from nec2dqn.numerics import ParamSet, finite_difference_grad, rmsprop_step


def test_rmsprop_step_by_hand():
    params = ParamSet({"w": np.array([1.0])})
    params.load_gradients({"w": np.array([2.0])})
    rmsprop_step(params, lr=0.1, momentum=0.95, eps=0.01)

    acc = 0.05 * 4.0
    assert params.square_avg["w"][0] == pytest.approx(acc)
    assert params.params["w"][0] == pytest.approx(1.0 - 0.1 * 2.0 / (np.sqrt(acc) + 0.01))


def test_rmsprop_eps_inside_sqrt():
    params = ParamSet({"w": np.array([1.0])})
    params.load_gradients({"w": np.array([2.0])})
    rmsprop_step(params, lr=0.1, momentum=0.95, eps=0.01, eps_inside_sqrt=True)
    assert params.params["w"][0] == pytest.approx(1.0 - 0.1 * 2.0 / np.sqrt(0.2 + 0.01))


def test_rmsprop_clears_gradients():
    params = ParamSet({"w": np.zeros(3)})
    params.load_gradients({"w": np.ones(3)})
    rmsprop_step(params, lr=0.1, momentum=0.9, eps=0.01)
    assert params.grads["w"] is None


def test_rmsprop_requires_gradients():
    params = ParamSet({"w": np.zeros(3)})
    with pytest.raises(ContractViolationError):
        rmsprop_step(params, lr=0.1, momentum=0.9, eps=0.01)


def test_rmsprop_zero_gradient_leaves_parameters():
    params = ParamSet({"w": np.array([0.5, -0.5])})
    params.load_gradients({"w": np.zeros(2)})
    rmsprop_step(params, lr=0.1, momentum=0.9, eps=0.01)
    np.testing.assert_array_equal(params.params["w"], [0.5, -0.5])


def test_velocity_accumulates_steps():
    params = ParamSet({"w": np.array([0.0])})
    for _ in range(2):
        params.load_gradients({"w": np.array([1.0])})
        rmsprop_step(params, lr=1.0, momentum=0.0, eps=0.0, velocity=0.5)
    # normalised step is 1 each time: buffer 1, then 1.5
    assert params.params["w"][0] == pytest.approx(-2.5)


def test_load_gradients_checks_shape():
    params = ParamSet({"w": np.zeros(3)})
    with pytest.raises(ContractViolationError):
        params.load_gradients({"w": np.zeros(2)})


def test_copy_from_is_a_hard_update():
    a = ParamSet({"w": np.zeros(2)})
    b = ParamSet({"w": np.array([1.0, 2.0])})
    a.copy_from(b)
    b.params["w"][0] = 9.0
    np.testing.assert_array_equal(a.params["w"], [1.0, 2.0])


def test_finite_difference_of_quadratic():
    params = ParamSet({"w": np.array([1.0, -2.0])})
    grads = finite_difference_grad(params, lambda p: float(np.sum(p.params["w"] ** 2)))
    np.testing.assert_allclose(grads["w"], [2.0, -4.0], atol=1e-8)
    np.testing.assert_array_equal(params.params["w"], [1.0, -2.0])


def test_finite_difference_rejects_bad_step():
    with pytest.raises(ContractViolationError):
        finite_difference_grad(ParamSet({"w": np.zeros(1)}), lambda p: 0.0, step=0.0)
