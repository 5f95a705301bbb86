from dataclasses import dataclass

import numpy as np

from ..core.exceptions import ContractViolationError


def greedy_action(q) -> int:
    """argmax with ties broken toward the lowest action id."""
    q = np.asarray(q, dtype=np.float64)
    if q.size == 0:
        raise ContractViolationError("q must be non-empty")
    return int(np.argmax(q))


def epsilon_greedy(q, eps: float, rng: np.random.Generator) -> int:
    q = np.asarray(q, dtype=np.float64)
    if q.size == 0:
        raise ContractViolationError("q must be non-empty")
    if not 0.0 <= eps <= 1.0:
        raise ContractViolationError(f"eps must lie in [0, 1], got {eps}")
    if rng.random() < eps:
        return int(rng.integers(q.size))
    return int(np.argmax(q))


@dataclass(frozen=True)
class EpsilonSchedule:
    """Linear decay from ``start`` to ``end`` over ``decay_steps`` environment steps."""
    start: float = 1.0
    end: float = 0.01
    decay_steps: int = 50_000

    def __call__(self, step: int) -> float:
        if self.decay_steps <= 0 or step >= self.decay_steps:
            return self.end
        return self.start + (self.end - self.start) * step / self.decay_steps
