from typing import Optional, Tuple

import numpy as np

from ..agents.tabular import TabularMdp
from ..core.exceptions import ContractViolationError
from .base import Env

LEFT, RIGHT = 0, 1


class ChainEnv(Env):
    """Left/right chain of n states. Entering the right end pays +1 and ends the episode."""

    action_count = 2

    def __init__(self, n_states: int):
        super().__init__()
        if n_states < 2:
            raise ContractViolationError(f"chain needs at least 2 states, got {n_states}")
        self.n_states = n_states
        self.observation_shape = (1, 1, n_states)
        self.max_steps = 4 * n_states
        self.position = 0

    @property
    def state_count(self) -> Optional[int]:
        return self.n_states

    @property
    def state_index(self) -> Optional[int]:
        return self.position

    def _reset(self) -> None:
        self.position = 0

    def _step(self, action: int) -> Tuple[float, bool]:
        if action == RIGHT:
            self.position += 1
        else:
            self.position = max(0, self.position - 1)
        if self.position == self.n_states - 1:
            return 1.0, True
        return 0.0, False

    def observe(self) -> np.ndarray:
        obs = np.zeros(self.observation_shape, dtype=np.uint8)
        obs[0, 0, self.position] = 255
        return obs

    def to_mdp(self, gamma: float) -> TabularMdp:
        """Induced MDP; the right end is an absorbing zero-reward state."""
        n = self.n_states
        transitions = np.zeros((n, 2, n))
        rewards = np.zeros((n, 2))
        for s in range(n - 1):
            transitions[s, LEFT, max(0, s - 1)] = 1.0
            transitions[s, RIGHT, s + 1] = 1.0
            if s + 1 == n - 1:
                rewards[s, RIGHT] = 1.0
        transitions[n - 1, :, n - 1] = 1.0
        return TabularMdp(transitions=transitions, rewards=rewards, gamma=gamma)
