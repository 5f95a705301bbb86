"""Tabular oracle layer: explicit MDPs, value iteration, Q-learning and Double Q-learning."""
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Tuple

import numpy as np

from ..core.exceptions import ContractViolationError

Which = Literal["both", "A", "B"]


@dataclass
class TabularMdp:
    transitions: np.ndarray  # P[s, a, s']
    rewards: np.ndarray      # r[s, a]
    gamma: float

    def __post_init__(self):
        self.transitions = np.asarray(self.transitions, dtype=np.float64)
        self.rewards = np.asarray(self.rewards, dtype=np.float64)
        s, a, s2 = self.transitions.shape
        if s != s2 or self.rewards.shape != (s, a):
            raise ContractViolationError(
                f"inconsistent shapes: P {self.transitions.shape}, r {self.rewards.shape}"
            )
        if not np.allclose(self.transitions.sum(axis=2), 1.0, atol=1e-12):
            raise ContractViolationError("transition rows must sum to 1")
        if not 0.0 <= self.gamma < 1.0:
            raise ContractViolationError(f"gamma must lie in [0, 1), got {self.gamma}")
        self._cumulative = np.cumsum(self.transitions, axis=2)

    @property
    def state_count(self) -> int:
        return self.transitions.shape[0]

    @property
    def action_count(self) -> int:
        return self.transitions.shape[1]

    def backup(self, q: np.ndarray) -> np.ndarray:
        """Bellman optimality operator applied to a Q table."""
        return self.rewards + self.gamma * self.transitions @ q.max(axis=1)

    def sample(self, s: int, a: int, rng: np.random.Generator) -> Tuple[float, int]:
        u = rng.random()
        s_next = min(int(np.searchsorted(self._cumulative[s, a], u, side="right")), self.state_count - 1)
        return float(self.rewards[s, a]), s_next


def random_mdp(
    n_states: int,
    n_actions: int,
    rng: np.random.Generator,
    gamma: float = 0.9,
    deterministic: bool = False
) -> TabularMdp:
    rewards = rng.uniform(-1.0, 1.0, size=(n_states, n_actions))
    if deterministic:
        transitions = np.zeros((n_states, n_actions, n_states))
        successors = rng.integers(0, n_states, size=(n_states, n_actions))
        for s in range(n_states):
            transitions[s, np.arange(n_actions), successors[s]] = 1.0
    else:
        transitions = rng.dirichlet(np.ones(n_states), size=(n_states, n_actions))
    return TabularMdp(transitions=transitions, rewards=rewards, gamma=gamma)


def value_iteration(mdp: TabularMdp, tol: float = 1e-9, max_iterations: int = 1_000_000) -> np.ndarray:
    """Iterate the Bellman optimality operator until the sup-norm residual is below ``tol``."""
    if tol <= 0:
        raise ContractViolationError(f"tol must be positive, got {tol}")
    q = np.zeros((mdp.state_count, mdp.action_count))
    for _ in range(max_iterations):
        q_next = mdp.backup(q)
        residual = float(np.max(np.abs(q_next - q)))
        q = q_next
        if residual < tol:
            break
    return q


def bellman_residual(mdp: TabularMdp, q: np.ndarray) -> float:
    return float(np.max(np.abs(mdp.backup(q) - q)))


def tabular_q_update(
    q: np.ndarray,
    s: int,
    a: int,
    r: float,
    s_next: int,
    alpha: float,
    gamma: float,
    done: bool = False
) -> np.ndarray:
    bootstrap = 0.0 if done else gamma * np.max(q[s_next])
    q[s, a] += alpha * (r + bootstrap - q[s, a])
    return q


def double_q_update(
    qa: np.ndarray,
    qb: np.ndarray,
    s: int,
    a: int,
    r: float,
    s_next: int,
    alpha: float,
    gamma: float,
    done: bool = False,
    which: Which = "both"
) -> Tuple[np.ndarray, np.ndarray]:
    """QA <- QA + alpha(r + gamma QB(s', a*) - QA),  a* = argmax QA(s', .)
    QB <- QB + alpha(r + gamma QA(s', b*) - QB),  b* = argmax QB(s', .)

    Both bootstraps are read before either table changes. ``which`` restricts the
    update to one estimator, as in the coin-flip learner.
    """
    a_star = int(np.argmax(qa[s_next]))
    b_star = int(np.argmax(qb[s_next]))
    boot_a = 0.0 if done else gamma * qb[s_next, a_star]
    boot_b = 0.0 if done else gamma * qa[s_next, b_star]
    if which in ("both", "A"):
        qa[s, a] += alpha * (r + boot_a - qa[s, a])
    if which in ("both", "B"):
        qb[s, a] += alpha * (r + boot_b - qb[s, a])
    return qa, qb


def polynomial_alpha(visits: int, exponent: float = 0.6) -> float:
    """alpha_n = 1 / (n + 1)^exponent; square-summable tails for exponent in (0.5, 1]."""
    return 1.0 / (visits + 1) ** exponent


def q_learning_sweeps(
    mdp: TabularMdp,
    sweeps: int,
    rng: np.random.Generator,
    alpha_fn: Callable[[int], float] = polynomial_alpha,
    q: Optional[np.ndarray] = None
) -> np.ndarray:
    """Q-learning from a generative model: every (s, a) pair once per sweep, in random order."""
    q = np.zeros((mdp.state_count, mdp.action_count)) if q is None else q
    visits = np.zeros_like(q, dtype=np.int64)
    pairs = np.array([(s, a) for s in range(mdp.state_count) for a in range(mdp.action_count)])
    for _ in range(sweeps):
        for s, a in pairs[rng.permutation(len(pairs))]:
            r, s_next = mdp.sample(s, a, rng)
            tabular_q_update(q, s, a, r, s_next, alpha_fn(visits[s, a]), mdp.gamma)
            visits[s, a] += 1
    return q


def double_q_learning_sweeps(
    mdp: TabularMdp,
    sweeps: int,
    rng: np.random.Generator,
    alpha_fn: Callable[[int], float] = polynomial_alpha,
    terminal: Optional[int] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Coin-flip Double Q-learning: each sample updates one estimator, chosen uniformly."""
    qa = np.zeros((mdp.state_count, mdp.action_count))
    qb = np.zeros_like(qa)
    visits = np.zeros((2, *qa.shape), dtype=np.int64)
    pairs = np.array([(s, a) for s in range(mdp.state_count) for a in range(mdp.action_count) if s != terminal])
    for _ in range(sweeps):
        for s, a in pairs[rng.permutation(len(pairs))]:
            r, s_next = mdp.sample(s, a, rng)
            side = int(rng.integers(2))
            which: Which = "A" if side == 0 else "B"
            double_q_update(
                qa, qb, s, a, r, s_next, alpha_fn(visits[side, s, a]), mdp.gamma,
                done=s_next == terminal, which=which
            )
            visits[side, s, a] += 1
    return qa, qb
