from pydantic import BaseModel
from typing import Dict, List, Literal, Optional

from .metrics import MetricRow

class RunResult(BaseModel):
    label: str
    seed: int
    run_dir: str
    rows: List[MetricRow]
    episodes: int
    resumed_from: Optional[int] = None

    def steps_to_threshold(self, threshold: float, budget: int) -> int:
        """First eval step whose mean score reaches ``threshold``; ``budget`` if none does."""
        for row in self.rows:
            if row.eval_mean >= threshold:
                return row.step
        return budget

class ComparisonSummaryRow(BaseModel):
    label: str
    agent: str
    seeds: int
    reached: int
    median_steps: float
    q1_steps: float
    q3_steps: float

class ComparisonResult(BaseModel):
    threshold: float
    budget: int
    summary: List[ComparisonSummaryRow]
    runs: Dict[str, List[RunResult]]
    summary_path: str
    curves_path: str
    plot_paths: List[str] = []

class SweepSnapshotRow(BaseModel):
    capacity: int
    phase: Literal["early", "final"]
    step: int
    median: float
    q1: float
    q3: float

class SweepResult(BaseModel):
    capacities: List[int]
    snapshots: List[SweepSnapshotRow]
    runs: Dict[int, List[RunResult]]
    snapshot_path: str
    curves_path: str
    plot_paths: List[str] = []

    def snapshot(self, capacity: int, phase: str) -> SweepSnapshotRow:
        for row in self.snapshots:
            if row.capacity == capacity and row.phase == phase:
                return row
        raise KeyError((capacity, phase))
