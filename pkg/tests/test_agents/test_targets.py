import numpy as np
import pytest

from nec2dqn.agents.targets import double_dqn_target, double_dqn_targets, dqn_target, dqn_targets


def fixed_net(values):
    values = np.asarray(values, dtype=np.float64)
    return lambda states: values[: len(states)]


def test_dqn_targets_by_hand():
    target_net = fixed_net([[1.0, 3.0], [2.0, 0.0]])
    y = dqn_targets([1.0, 0.0], np.zeros((2, 3)), [False, True], 0.5, target_net)
    np.testing.assert_array_equal(y, [2.5, 0.0])


def test_double_dqn_evaluates_the_online_choice():
    online = fixed_net([[5.0, 0.0], [0.0, 5.0]])
    target = fixed_net([[1.0, 3.0], [2.0, 0.0]])
    y = double_dqn_targets([0.0, 0.0], np.zeros((2, 3)), [False, False], 1.0, online, target)
    np.testing.assert_array_equal(y, [1.0, 0.0])
    np.testing.assert_array_equal(dqn_targets([0.0, 0.0], np.zeros((2, 3)), [False, False], 1.0, target), [3.0, 2.0])


def test_double_dqn_never_exceeds_dqn(rng):
    for _ in range(50):
        online_q, target_q = rng.normal(size=(2, 8, 4))
        rewards = rng.normal(size=8)
        dones = rng.random(8) < 0.2
        y_double = double_dqn_targets(rewards, np.zeros((8, 1)), dones, 0.9, fixed_net(online_q), fixed_net(target_q))
        y_dqn = dqn_targets(rewards, np.zeros((8, 1)), dones, 0.9, fixed_net(target_q))
        assert np.all(y_double <= y_dqn + 1e-12)


def test_single_transition_targets():
    target = fixed_net([[1.0, 3.0]])
    online = fixed_net([[2.0, 0.0]])
    assert dqn_target(1.0, np.zeros(3), 0.5, target) == 2.5
    assert dqn_target(1.0, np.zeros(3), 0.5, target, done=True) == 1.0
    assert double_dqn_target(1.0, np.zeros(3), 0.5, online, target) == pytest.approx(1.5)
