from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.exceptions import ContractViolationError


@dataclass(frozen=True)
class LambdaSchedule:
    """Blend weight that hands control from the episodic branch to DQN.

    lambda(t) = 1 - t / CS for t < CS, else 0. CS = 0 means DQN from the start.
    """
    change_step: int

    def __post_init__(self):
        if self.change_step < 0:
            raise ContractViolationError(f"change_step must be non-negative, got {self.change_step}")

    def __call__(self, t: int) -> float:
        return lambda_weight(self, t)


def lambda_weight(schedule: LambdaSchedule, t: int) -> float:
    if t < 0:
        raise ContractViolationError(f"t must be non-negative, got {t}")
    if t >= schedule.change_step:
        return 0.0
    return 1.0 - t / schedule.change_step


def q_n2d(q_nec: Optional[np.ndarray], q_dqn: Optional[np.ndarray], lam: float) -> np.ndarray:
    """lam * q_nec + (1 - lam) * q_dqn, elementwise.

    Written as q_dqn + lam * (q_nec - q_dqn) so that identical inputs blend to
    themselves exactly. At lam == 0 ``q_nec`` is never read and may be None;
    at lam == 1 the same holds for ``q_dqn``.
    """
    if not 0.0 <= lam <= 1.0:
        raise ContractViolationError(f"lam must lie in [0, 1], got {lam}")
    if lam == 0.0:
        if q_dqn is None:
            raise ContractViolationError("q_dqn is required when lam < 1")
        return np.array(q_dqn, dtype=np.float64)
    if lam == 1.0:
        if q_nec is None:
            raise ContractViolationError("q_nec is required when lam > 0")
        return np.array(q_nec, dtype=np.float64)
    if q_nec is None or q_dqn is None:
        raise ContractViolationError("both branches are required for 0 < lam < 1")
    q_nec = np.asarray(q_nec, dtype=np.float64)
    q_dqn = np.asarray(q_dqn, dtype=np.float64)
    if q_nec.shape != q_dqn.shape:
        raise ContractViolationError(f"length mismatch: {q_nec.shape} vs {q_dqn.shape}")
    return q_dqn + lam * (q_nec - q_dqn)
