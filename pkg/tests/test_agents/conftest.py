from typing import Sequence, Tuple

import numpy as np
import pytest

from nec2dqn.core.exceptions import EnvFaultError
from nec2dqn.envs.base import Env


class ScriptedEnv(Env):
    """Pays ``rewards[t]`` on step t whatever the action; the observation is a one-hot step counter."""

    action_count = 2

    def __init__(self, rewards: Sequence[float], max_steps: int = None, fault_at: int = None):
        super().__init__()
        self.rewards = list(rewards)
        self.observation_shape = (1, 1, len(self.rewards) + 1)
        self.max_steps = max_steps or len(self.rewards)
        self.fault_at = fault_at
        self.t = 0

    def _reset(self) -> None:
        self.t = 0

    def _step(self, action: int) -> Tuple[float, bool]:
        if self.fault_at is not None and self.t == self.fault_at:
            raise EnvFaultError("scripted fault")
        reward = self.rewards[self.t]
        self.t += 1
        return reward, self.t == len(self.rewards)

    def observe(self) -> np.ndarray:
        obs = np.zeros(self.observation_shape, dtype=np.uint8)
        obs[0, 0, self.t] = 255
        return obs


@pytest.fixture
def scripted_env():
    return ScriptedEnv
