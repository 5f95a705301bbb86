from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union
import logging

import pandas as pd

from ..core.exceptions import ConfigError
from ..core.presets import EARLY_FRACTION
from ..db.client import ensure_dir, get_experiment_dir
from ..schemas.config import RunConfig
from ..schemas.experiment import RunResult, SweepResult, SweepSnapshotRow
from ..utils.curves import aggregate_curves, median_iqr
from .compare_service import compare_service
from .plot_service import plot_service

logger = logging.getLogger(__name__)

class SweepService:
    """Replay-capacity sweep: per-capacity median curves plus early/final snapshots."""

    def dedupe(self, capacities: Sequence[int]) -> List[int]:
        unique: List[int] = []
        for capacity in capacities:
            if capacity in unique:
                logger.warning(f"Duplicate buffer capacity {capacity} ignored")
                continue
            unique.append(int(capacity))
        return unique

    def early_step(self, rows_steps: Sequence[int], total_steps: int) -> Optional[int]:
        """First evaluation step at or after the early-window fraction of training."""
        cutoff = EARLY_FRACTION * total_steps
        for step in sorted(rows_steps):
            if step >= cutoff:
                return step
        return None

    def snapshot(self, capacity: int, phase: str, step: int, results: Sequence[RunResult]) -> SweepSnapshotRow:
        scores = [row.eval_mean for r in results for row in r.rows if row.step == step]
        stats = median_iqr(scores)
        return SweepSnapshotRow(capacity=capacity, phase=phase, step=step, **stats)

    def buffer_sweep(
        self,
        base: RunConfig,
        capacities: Sequence[int],
        seeds: Sequence[int],
        name: str = "sweep",
        output_root: Optional[Union[str, Path]] = None
    ) -> SweepResult:
        capacities = self.dedupe(capacities)
        if len(capacities) < 2:
            raise ConfigError("capacities", f"a sweep needs at least 2 distinct capacities, got {capacities}")
        if not seeds:
            raise ConfigError("seeds", "at least one seed is required")
        configs = [
            RunConfig(**{**base.model_dump(), "buffer_capacity": c, "label": f"{base.run_label}-buf{c}"})
            for c in capacities
        ]
        out_dir = ensure_dir(get_experiment_dir(name, output_root))
        logger.info(f"Buffer sweep over {capacities} with seeds {list(seeds)}")

        by_label, failures = compare_service.run_all(configs, seeds, output_root)
        runs: Dict[int, List[RunResult]] = {
            c: by_label.get(config.run_label, []) for c, config in zip(capacities, configs)
        }

        snapshots: List[SweepSnapshotRow] = []
        for capacity, results in runs.items():
            if not results:
                continue
            steps = sorted({row.step for r in results for row in r.rows})
            early = self.early_step(steps, base.total_steps)
            if early is not None:
                snapshots.append(self.snapshot(capacity, "early", early, results))
            snapshots.append(self.snapshot(capacity, "final", steps[-1], results))

        curves = aggregate_curves({str(c): results for c, results in runs.items()})
        snapshot_path = out_dir / "snapshots.csv"
        curves_path = out_dir / "curves.csv"
        pd.DataFrame([s.model_dump() for s in snapshots], columns=list(SweepSnapshotRow.model_fields)).to_csv(
            snapshot_path, index=False, lineterminator="\n"
        )
        curves.to_csv(curves_path, index=False, lineterminator="\n")

        plot_paths = []
        if not curves.empty:
            plot_paths.append(str(plot_service.plot_bands(curves, out_dir / "sweep_curves", title=f"{name}: buffer capacity")))
        if snapshots:
            plot_paths.append(str(plot_service.plot_snapshots(snapshots, out_dir / "sweep_snapshots", title=f"{name}: early vs final")))

        for s in snapshots:
            logger.info(f"capacity {s.capacity} {s.phase} (step {s.step}): median {s.median:.2f} IQR [{s.q1:.2f}, {s.q3:.2f}]")
        if failures:
            raise failures[0]

        return SweepResult(
            capacities=capacities,
            snapshots=snapshots,
            runs=runs,
            snapshot_path=str(snapshot_path),
            curves_path=str(curves_path),
            plot_paths=plot_paths
        )

sweep_service = SweepService()
