from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union
import logging

import pandas as pd

from ..core.config import settings
from ..core.exceptions import ConfigError
from ..db.client import ensure_dir, get_experiment_dir
from ..schemas.config import RunConfig
from ..schemas.experiment import ComparisonResult, ComparisonSummaryRow, RunResult
from ..utils.curves import aggregate_curves, median_iqr
from .plot_service import plot_service
from .run_service import execute_run, run_service

logger = logging.getLogger(__name__)

def unique_labels(configs: Sequence[RunConfig]) -> List[RunConfig]:
    """Give repeated run labels a numeric suffix so every config gets its own directory."""
    seen: Dict[str, int] = {}
    labelled = []
    for config in configs:
        label = config.run_label
        seen[label] = seen.get(label, 0) + 1
        if seen[label] > 1:
            label = f"{label}-{seen[label]}"
        labelled.append(RunConfig(**{**config.model_dump(), "label": label}))
    return labelled

class CompareService:
    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers

    def _workers(self) -> int:
        return self.max_workers if self.max_workers is not None else settings.MAX_WORKERS

    def run_all(
        self,
        configs: Sequence[RunConfig],
        seeds: Sequence[int],
        output_root: Optional[Union[str, Path]] = None
    ) -> Tuple[Dict[str, List[RunResult]], List[Exception]]:
        """Every (config, seed) pair; failed runs are logged and returned, the rest kept."""
        jobs = [RunConfig(**{**config.model_dump(), "seed": seed}) for config in configs for seed in seeds]
        runs: Dict[str, List[RunResult]] = {config.run_label: [] for config in configs}
        failures: List[Exception] = []
        root = str(output_root) if output_root is not None else None

        if self._workers() > 1:
            with ProcessPoolExecutor(max_workers=self._workers()) as executor:
                futures = [(job, executor.submit(execute_run, job.model_dump(), root)) for job in jobs]
                for job, future in futures:
                    try:
                        runs[job.run_label].append(future.result())
                    except Exception as e:
                        logger.error(f"Run {job.run_label} seed {job.seed} failed: {str(e)}")
                        failures.append(e)
        else:
            for job in jobs:
                try:
                    runs[job.run_label].append(run_service.run(job, output_root=output_root, plots=False))
                except Exception as e:
                    logger.error(f"Run {job.run_label} seed {job.seed} failed: {str(e)}")
                    failures.append(e)
        return runs, failures

    def summarize(
        self,
        configs: Sequence[RunConfig],
        runs: Dict[str, List[RunResult]],
        threshold: float
    ) -> List[ComparisonSummaryRow]:
        """Steps to the first eval mean >= threshold; a run that never gets there counts as its budget."""
        summary = []
        for config in configs:
            results = runs.get(config.run_label, [])
            if not results:
                continue
            steps = [r.steps_to_threshold(threshold, config.total_steps) for r in results]
            reached = sum(1 for r in results if any(row.eval_mean >= threshold for row in r.rows))
            stats = median_iqr(steps)
            summary.append(ComparisonSummaryRow(
                label=config.run_label,
                agent=config.agent,
                seeds=len(results),
                reached=reached,
                median_steps=stats["median"],
                q1_steps=stats["q1"],
                q3_steps=stats["q3"]
            ))
        return summary

    def compare(
        self,
        configs: Sequence[RunConfig],
        seeds: Sequence[int],
        threshold: float,
        name: str = "compare",
        output_root: Optional[Union[str, Path]] = None
    ) -> ComparisonResult:
        if len(configs) < 2:
            raise ConfigError("configs", f"compare needs at least 2 configs, got {len(configs)}")
        if not seeds:
            raise ConfigError("seeds", "at least one seed is required")
        configs = unique_labels(configs)
        out_dir = ensure_dir(get_experiment_dir(name, output_root))
        logger.info(f"Comparing {[c.run_label for c in configs]} over seeds {list(seeds)} (threshold {threshold})")

        runs, failures = self.run_all(configs, seeds, output_root)
        summary = self.summarize(configs, runs, threshold)
        curves = aggregate_curves(runs)

        summary_path = out_dir / "summary.csv"
        curves_path = out_dir / "curves.csv"
        pd.DataFrame([row.model_dump() for row in summary], columns=list(ComparisonSummaryRow.model_fields)).to_csv(
            summary_path, index=False, lineterminator="\n"
        )
        curves.to_csv(curves_path, index=False, lineterminator="\n")
        plot_paths = []
        if not curves.empty:
            plot_paths.append(str(plot_service.plot_bands(curves, out_dir / "comparison", title=name, threshold=threshold)))

        for row in summary:
            logger.info(
                f"{row.label}: median steps to {threshold:g} = {row.median_steps:.0f} "
                f"(IQR {row.q1_steps:.0f}-{row.q3_steps:.0f}, reached {row.reached}/{row.seeds})"
            )
        if failures:
            raise failures[0]

        return ComparisonResult(
            threshold=threshold,
            budget=max(c.total_steps for c in configs),
            summary=summary,
            runs=runs,
            summary_path=str(summary_path),
            curves_path=str(curves_path),
            plot_paths=plot_paths
        )

compare_service = CompareService()
