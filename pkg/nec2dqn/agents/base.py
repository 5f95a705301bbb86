import logging
from abc import ABC, abstractmethod
from typing import Callable, Dict, List, Optional

import numpy as np

from ..core.exceptions import EnvFaultError, EpisodeAbortedError
from ..envs.base import Env
from ..envs.preprocessing import FrameStack
from ..memory.dnd import DndTable
from ..memory.replay import ReplayBuffer
from ..numerics.network import ParamSet
from ..schemas.metrics import EpisodeStats
from .policy import EpsilonSchedule, greedy_action

logger = logging.getLogger(__name__)

StepCallback = Callable[[int], None]


class Agent(ABC):
    """Training loop plumbing shared by every agent kind.

    ``global_step`` counts environment steps. ``run_episode`` calls
    ``step_callback(global_step)`` after each step, which is where the harness
    hooks evaluation. Greedy episodes never touch networks, tables, buffer,
    counters or the agent's random stream.
    """

    kind: str

    def __init__(self, epsilon: EpsilonSchedule, rng: np.random.Generator):
        self.epsilon = epsilon
        self.rng = rng
        self.global_step = 0
        self.episodes = 0
        self.last_losses: Dict[str, List[float]] = {"dqn": [], "nec": []}

    @property
    def lam(self) -> float:
        return 0.0

    def current_epsilon(self) -> float:
        return self.epsilon(self.global_step)

    # observation handling

    @abstractmethod
    def observation_stack(self, env: Env) -> FrameStack:
        ...

    def encode(self, env: Env, stacked: np.ndarray):
        """Agent-side state for one stacked observation."""
        return stacked

    # acting

    @abstractmethod
    def greedy_q(self, state) -> np.ndarray:
        """Action values used for greedy evaluation; must not mutate the agent."""

    def greedy_episode(self, env: Env) -> float:
        frames = self.observation_stack(env)
        state = self.encode(env, frames.reset(env.reset()))
        total = 0.0
        while True:
            step = env.step(greedy_action(self.greedy_q(state)))
            total += step.reward
            if step.done:
                return total
            state = self.encode(env, frames.stack(step.observation))

    def evaluate(self, env: Env, episodes: int) -> List[float]:
        return [self.greedy_episode(env) for _ in range(episodes)]

    @abstractmethod
    def run_episode(
        self,
        env: Env,
        step_callback: Optional[StepCallback] = None,
        step_budget: Optional[int] = None
    ) -> EpisodeStats:
        ...

    def _env_step(self, env: Env, action: int, t: int):
        try:
            return env.step(action)
        except EnvFaultError as e:
            logger.error(f"Environment fault in episode {self.episodes} at step {t}: {str(e)}")
            raise EpisodeAbortedError(str(e), episode=self.episodes, step=t, action=action) from e

    def drain_losses(self) -> Dict[str, Optional[float]]:
        """Mean of the losses recorded since the previous call, per branch."""
        means = {
            name: (float(np.mean(values)) if values else None)
            for name, values in self.last_losses.items()
        }
        for values in self.last_losses.values():
            values.clear()
        return means

    # checkpoint surface

    def param_sets(self) -> Dict[str, ParamSet]:
        return {}

    def dnd_tables(self) -> List[DndTable]:
        return []

    def replay_buffer(self) -> Optional[ReplayBuffer]:
        return None

    def dnd_size(self) -> int:
        return sum(len(t) for t in self.dnd_tables())

    def dnd_sizes(self) -> Optional[str]:
        tables = self.dnd_tables()
        if not tables:
            return None
        return ";".join(str(len(t)) for t in tables)

    def scalar_state(self) -> dict:
        return {
            "kind": self.kind,
            "global_step": self.global_step,
            "episodes": self.episodes,
            "rng": self.rng.bit_generator.state,
            "pending_losses": self.last_losses,
        }

    def load_scalar_state(self, state: dict) -> None:
        self.global_step = int(state["global_step"])
        self.episodes = int(state["episodes"])
        self.rng.bit_generator.state = state["rng"]
        self.last_losses = {k: list(v) for k, v in state.get("pending_losses", {}).items()} or {"dqn": [], "nec": []}
