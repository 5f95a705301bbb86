import numpy as np
import pytest
from scipy import stats

from nec2dqn.agents.tabular import (
    TabularMdp,
    bellman_residual,
    double_q_learning_sweeps,
    double_q_update,
    polynomial_alpha,
    q_learning_sweeps,
    random_mdp,
    tabular_q_update,
    value_iteration,
)
from nec2dqn.core.exceptions import ContractViolationError
from nec2dqn.envs import ChainEnv


def test_value_iteration_single_state():
    mdp = TabularMdp(transitions=[[[1.0]]], rewards=[[1.0]], gamma=0.5)
    assert value_iteration(mdp)[0, 0] == pytest.approx(2.0, abs=1e-8)


def test_value_iteration_on_chain():
    q = value_iteration(ChainEnv(3).to_mdp(0.9))
    assert q[0, 1] == pytest.approx(0.9, abs=1e-8)
    assert q[1, 1] == pytest.approx(1.0, abs=1e-8)
    assert q[0, 0] == pytest.approx(0.81, abs=1e-8)


def test_value_iteration_residual_is_below_tolerance(rng):
    mdp = random_mdp(6, 3, rng, gamma=0.9)
    q = value_iteration(mdp, tol=1e-9)
    assert bellman_residual(mdp, q) < 1e-8


def test_value_iteration_rejects_non_positive_tolerance(rng):
    with pytest.raises(ContractViolationError):
        value_iteration(random_mdp(2, 2, rng), tol=0.0)


def test_mdp_validation():
    with pytest.raises(ContractViolationError):
        TabularMdp(transitions=[[[0.5, 0.4], [1.0, 0.0]], [[0.0, 1.0], [0.0, 1.0]]], rewards=np.zeros((2, 2)), gamma=0.9)
    with pytest.raises(ContractViolationError):
        TabularMdp(transitions=[[[1.0]]], rewards=[[0.0]], gamma=1.0)
    with pytest.raises(ContractViolationError):
        TabularMdp(transitions=[[[1.0]]], rewards=np.zeros((1, 2)), gamma=0.5)


def test_deterministic_sample_follows_the_transition(rng):
    mdp = random_mdp(5, 2, rng, deterministic=True)
    for s in range(5):
        for a in range(2):
            r, s_next = mdp.sample(s, a, rng)
            assert mdp.transitions[s, a, s_next] == 1.0
            assert r == mdp.rewards[s, a]


def test_tabular_q_update_by_hand():
    q = np.array([[0.0, 0.0], [2.0, 4.0]])
    tabular_q_update(q, 0, 1, 1.0, 1, alpha=0.5, gamma=0.9)
    assert q[0, 1] == pytest.approx(0.5 * (1.0 + 0.9 * 4.0))


def test_tabular_q_update_ignores_bootstrap_when_done():
    q = np.array([[0.0, 0.0], [2.0, 4.0]])
    tabular_q_update(q, 0, 1, 1.0, 1, alpha=0.5, gamma=0.9, done=True)
    assert q[0, 1] == 0.5


def test_double_q_with_equal_tables_matches_q_learning(rng):
    q = rng.normal(size=(4, 3))
    expected = tabular_q_update(q.copy(), 2, 1, 0.3, 3, alpha=0.2, gamma=0.9)
    qa, qb = double_q_update(q.copy(), q.copy(), 2, 1, 0.3, 3, alpha=0.2, gamma=0.9)
    np.testing.assert_array_equal(qa, expected)
    np.testing.assert_array_equal(qb, expected)


def test_double_q_reads_both_bootstraps_before_updating():
    qa = np.array([[0.0, 4.0]])
    qb = np.array([[0.0, 2.0]])
    double_q_update(qa, qb, 0, 1, 0.0, 0, alpha=1.0, gamma=0.5)
    assert qa[0, 1] == 1.0
    assert qb[0, 1] == 2.0


def test_double_q_single_side_update():
    qa = np.zeros((1, 2))
    qb = np.zeros((1, 2))
    double_q_update(qa, qb, 0, 0, 1.0, 0, alpha=0.5, gamma=0.9, done=True, which="A")
    assert qa[0, 0] == 0.5
    assert qb[0, 0] == 0.0


def test_polynomial_alpha():
    assert polynomial_alpha(0) == 1.0
    assert polynomial_alpha(3, exponent=0.5) == 0.5


@pytest.mark.parametrize("seed", range(5))
def test_q_learning_converges_to_value_iteration(seed):
    rng = np.random.default_rng(seed)
    mdp = random_mdp(5, 3, rng, gamma=0.5, deterministic=True)
    q = q_learning_sweeps(mdp, 400, rng)
    np.testing.assert_allclose(q, value_iteration(mdp), atol=1e-3)


@pytest.mark.parametrize("seed", range(3))
def test_double_q_learning_converges_to_value_iteration(seed):
    rng = np.random.default_rng(seed)
    mdp = random_mdp(4, 2, rng, gamma=0.5, deterministic=True)
    qa, qb = double_q_learning_sweeps(mdp, 1000, rng)
    q_star = value_iteration(mdp)
    np.testing.assert_allclose(qa, q_star, atol=0.05)
    np.testing.assert_allclose(qb, q_star, atol=0.05)


def test_q_learning_overestimates_where_double_q_does_not():
    """Start state leads to a state with 8 noisy actions of mean -0.1; compare the start-state estimates."""
    actions, alpha, iterations, mean = 8, 0.1, 30, -0.1
    single, double = [], []
    for seed in range(1000):
        rng = np.random.default_rng(seed)
        q = np.zeros((2, actions))
        for _ in range(iterations):
            for b in range(actions):
                tabular_q_update(q, 1, b, rng.normal(mean, 1.0), 1, alpha, 1.0, done=True)
            tabular_q_update(q, 0, 0, 0.0, 1, alpha, 1.0)
        single.append(q[0, 0])

        qa = np.zeros((2, actions))
        qb = np.zeros((2, actions))
        for _ in range(iterations):
            for b in range(actions):
                side = "A" if rng.integers(2) == 0 else "B"
                double_q_update(qa, qb, 1, b, rng.normal(mean, 1.0), 1, alpha, 1.0, done=True, which=side)
            side = "A" if rng.integers(2) == 0 else "B"
            double_q_update(qa, qb, 0, 0, 0.0, 1, alpha, 1.0, which=side)
        double.append(0.5 * (qa[0, 0] + qb[0, 0]))

    assert np.mean(single) > 0.0
    assert stats.ttest_rel(single, double, alternative="greater").pvalue < 1e-3
