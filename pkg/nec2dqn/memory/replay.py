from dataclasses import dataclass, field
from typing import Callable, Generic, List, Optional, TypeVar

import numpy as np

from ..core.exceptions import ContractViolationError, NotReadyError

T = TypeVar("T")


@dataclass
class TransitionRecord:
    state: np.ndarray
    action: int
    target: float


@dataclass
class Transition:
    """One-step record for the target-network baselines."""
    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    done: bool


@dataclass
class Trajectory:
    """Per-episode log of (s_t, a_t, r_t), plus h_t while the DND is in use."""
    states: List[np.ndarray] = field(default_factory=list)
    actions: List[int] = field(default_factory=list)
    rewards: List[float] = field(default_factory=list)
    embeddings: List[Optional[np.ndarray]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.actions)

    def append(self, state: np.ndarray, action: int, reward: float, embedding: Optional[np.ndarray] = None) -> None:
        self.states.append(state)
        self.actions.append(int(action))
        self.rewards.append(float(reward))
        self.embeddings.append(embedding)

    def clear(self) -> None:
        self.states.clear()
        self.actions.clear()
        self.rewards.clear()
        self.embeddings.clear()


def n_step_targets(
    traj: Trajectory,
    n: int,
    gamma: float,
    bootstrap: Callable[[np.ndarray], np.ndarray]
) -> List[float]:
    """N-step returns for a finished episode.

    y_t = sum_{j<m} gamma^j r_{t+j} + gamma^N max_a bootstrap(s_{t+N})_a   if s_{t+N} was observed
    y_t = sum_{j<m} gamma^j r_{t+j}                                          otherwise

    with m = min(N, T - t). ``bootstrap`` maps a stacked batch of states to a
    (batch, |A|) array and is called once for all bootstrapped steps.
    """
    if n < 1:
        raise ContractViolationError(f"n must be positive, got {n}")
    if not 0.0 <= gamma <= 1.0:
        raise ContractViolationError(f"gamma must lie in [0, 1], got {gamma}")
    horizon = len(traj)
    if horizon == 0:
        return []

    rewards = np.asarray(traj.rewards, dtype=np.float64)
    targets = np.zeros(horizon)
    for t in range(horizon):
        m = min(n, horizon - t)
        discounts = gamma ** np.arange(m)
        targets[t] = float(discounts @ rewards[t:t + m])

    tails = [t for t in range(horizon) if t + n < horizon]
    if tails:
        successors = np.stack([traj.states[t + n] for t in tails])
        q = np.asarray(bootstrap(successors), dtype=np.float64)
        targets[tails] += (gamma ** n) * q.max(axis=1)
    return [float(y) for y in targets]


class ReplayBuffer(Generic[T]):
    """Fixed-capacity ring; the oldest record is overwritten on overflow."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ContractViolationError(f"capacity must be positive, got {capacity}")
        self.capacity = capacity
        self.buffer: List[T] = []
        self.position = 0

    def __len__(self) -> int:
        return len(self.buffer)

    def append(self, rec: T) -> None:
        if len(self.buffer) < self.capacity:
            self.buffer.append(rec)
        else:
            self.buffer[self.position] = rec
        self.position = (self.position + 1) % self.capacity

    def ready(self, size: int) -> bool:
        return len(self.buffer) >= size

    def sample_minibatch(self, size: int, rng: np.random.Generator) -> List[T]:
        """Uniform draws with replacement."""
        if size < 1:
            raise ContractViolationError(f"batch size must be positive, got {size}")
        if not self.ready(size):
            raise NotReadyError(f"buffer holds {len(self.buffer)} records, batch needs {size}")
        indices = rng.integers(0, len(self.buffer), size=size)
        return [self.buffer[i] for i in indices]

    def records(self) -> List[T]:
        """Survivors in insertion order."""
        if len(self.buffer) < self.capacity:
            return list(self.buffer)
        return self.buffer[self.position:] + self.buffer[:self.position]
