from abc import ABC, abstractmethod
from typing import NamedTuple, Optional, Tuple

import numpy as np

from ..core.exceptions import EnvFaultError


class StepResult(NamedTuple):
    observation: np.ndarray
    reward: float
    done: bool


class Env(ABC):
    """reset() -> observation; step(action) -> (observation, reward, done).

    Observations are uint8 occupancy planes (C, H, W) with 255 for "on".
    Rewards are always in {-1, 0, +1}. After ``done`` the env must be reset.
    """

    action_count: int
    observation_shape: Tuple[int, ...]
    max_steps: int

    def __init__(self):
        self._done = True
        self.steps = 0

    @property
    def state_count(self) -> Optional[int]:
        """Number of discrete states for tabular agents, or None."""
        return None

    @property
    def state_index(self) -> Optional[int]:
        return None

    def reset(self) -> np.ndarray:
        self._done = False
        self.steps = 0
        self._reset()
        return self.observe()

    def step(self, action: int) -> StepResult:
        if self._done:
            raise EnvFaultError("step called on a finished episode; reset first")
        if not 0 <= int(action) < self.action_count:
            raise EnvFaultError(f"action {action} outside [0, {self.action_count})")
        reward, done = self._step(int(action))
        self.steps += 1
        if self.steps >= self.max_steps:
            done = True
        self._done = done
        return StepResult(self.observe(), float(reward), bool(done))

    @abstractmethod
    def _reset(self) -> None:
        ...

    @abstractmethod
    def _step(self, action: int) -> Tuple[float, bool]:
        ...

    @abstractmethod
    def observe(self) -> np.ndarray:
        ...
