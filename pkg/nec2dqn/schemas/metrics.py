from pydantic import BaseModel
from typing import List, Optional

class EpisodeStats(BaseModel):
    episode: int
    steps: int
    episode_return: float
    global_step: int
    lam: float = 0.0
    loss_dqn: Optional[float] = None
    loss_nec: Optional[float] = None

class EvalResult(BaseModel):
    step: int
    returns: List[float]

    @property
    def mean(self) -> float:
        return sum(self.returns) / len(self.returns) if self.returns else 0.0

    @property
    def min(self) -> float:
        return min(self.returns) if self.returns else 0.0

    @property
    def max(self) -> float:
        return max(self.returns) if self.returns else 0.0

class MetricRow(BaseModel):
    """One evaluation point; field order is the metrics.csv column order."""
    step: int
    episodes: int
    train_return: Optional[float] = None
    eval_mean: float
    eval_min: float
    eval_max: float
    loss_dqn: Optional[float] = None
    loss_nec: Optional[float] = None
    lam: float
    epsilon: float
    dnd_size: int = 0
    # per-action table sizes joined with ";", blank for agents without a DND
    dnd_sizes: Optional[str] = None
    buffer_size: int = 0

class TimingRow(BaseModel):
    step: int
    wall_clock: float
