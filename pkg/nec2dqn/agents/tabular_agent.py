import logging
from typing import Optional

import numpy as np

from ..core.exceptions import ConfigError
from ..envs.base import Env
from ..envs.preprocessing import FrameStack
from ..numerics.network import ParamSet
from ..schemas.metrics import EpisodeStats
from .base import Agent, StepCallback
from .policy import EpsilonSchedule, epsilon_greedy
from .tabular import tabular_q_update

logger = logging.getLogger(__name__)


class TabularAgent(Agent):
    """Epsilon-greedy Q-learning over an environment's discrete state index."""

    kind = "tabular"

    def __init__(
        self,
        state_count: Optional[int],
        action_count: int,
        epsilon: EpsilonSchedule,
        rng: np.random.Generator,
        alpha: float = 0.1,
        gamma: float = 0.99
    ):
        super().__init__(epsilon, rng)
        if state_count is None:
            raise ConfigError("agent", "tabular agent needs an environment with a discrete state index")
        self.table = ParamSet({"q": np.zeros((state_count, action_count))})
        self.alpha = alpha
        self.gamma = gamma

    @property
    def q(self) -> np.ndarray:
        return self.table.params["q"]

    def observation_stack(self, env: Env) -> FrameStack:
        return FrameStack(env.observation_shape, 1)

    def encode(self, env: Env, stacked: np.ndarray) -> int:
        return env.state_index

    def greedy_q(self, state: int) -> np.ndarray:
        return self.q[state]

    def run_episode(
        self,
        env: Env,
        step_callback: Optional[StepCallback] = None,
        step_budget: Optional[int] = None
    ) -> EpisodeStats:
        env.reset()
        s = env.state_index
        total = 0.0
        t = 0
        while True:
            action = epsilon_greedy(self.q[s], self.current_epsilon(), self.rng)
            step = self._env_step(env, action, t)
            s_next = env.state_index
            terminal = step.done and env.steps < env.max_steps
            tabular_q_update(self.q, s, action, step.reward, s_next, self.alpha, self.gamma, done=terminal)
            total += step.reward
            t += 1
            self.global_step += 1
            if step_callback is not None:
                step_callback(self.global_step)
            if step.done or (step_budget is not None and self.global_step >= step_budget):
                break
            s = s_next

        self.episodes += 1
        logger.debug(f"Episode {self.episodes}: return {total} in {t} steps")
        return EpisodeStats(episode=self.episodes, steps=t, episode_return=total, global_step=self.global_step)

    def param_sets(self):
        return {"q_table": self.table}
