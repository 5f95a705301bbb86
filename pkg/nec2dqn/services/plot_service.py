from pathlib import Path
from typing import Optional, Sequence
import logging

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

from ..core.config import settings
from ..schemas.experiment import SweepSnapshotRow
from ..schemas.metrics import MetricRow

logger = logging.getLogger(__name__)

X_LABEL = "environment steps"

class PlotService:
    """Static learning-curve files, written once a run or experiment finishes."""

    def __init__(self, fmt: Optional[str] = None):
        self.fmt = fmt or settings.PLOT_FORMAT

    def _save(self, fig, path: Path) -> Path:
        path = path.with_suffix(f".{self.fmt}")
        try:
            fig.savefig(path, format=self.fmt, dpi=120, bbox_inches="tight")
            logger.info(f"Plot written: {path}")
            return path
        except Exception as e:
            logger.error(f"Error writing plot {path}: {str(e)}")
            raise
        finally:
            plt.close(fig)

    def plot_run(self, rows: Sequence[MetricRow], plots_dir: Path, title: str = "") -> Path:
        steps = [r.step for r in rows]
        fig, (ax_eval, ax_lam) = plt.subplots(2, 1, figsize=(8, 6), sharex=True, gridspec_kw={"height_ratios": [3, 1]})
        ax_eval.plot(steps, [r.eval_mean for r in rows], marker="o", markersize=3, label="eval mean")
        ax_eval.fill_between(steps, [r.eval_min for r in rows], [r.eval_max for r in rows], alpha=0.2, label="eval min/max")
        ax_eval.set_ylabel("greedy return")
        ax_eval.set_title(title)
        ax_eval.legend(loc="lower right")
        ax_lam.plot(steps, [r.lam for r in rows], color="tab:orange", label="lambda")
        ax_lam.plot(steps, [r.epsilon for r in rows], color="tab:green", label="epsilon")
        ax_lam.set_xlabel(X_LABEL)
        ax_lam.legend(loc="upper right")
        return self._save(fig, plots_dir / "learning_curve")

    def plot_bands(self, curves: pd.DataFrame, path: Path, title: str = "", threshold: Optional[float] = None) -> Path:
        """Median curve with an interquartile band per label."""
        fig, ax = plt.subplots(figsize=(9, 5))
        for label, curve in curves.groupby("label", sort=False):
            ax.plot(curve["step"], curve["median"], label=str(label))
            ax.fill_between(curve["step"], curve["q1"], curve["q3"], alpha=0.2)
        if threshold is not None:
            ax.axhline(threshold, color="grey", linestyle="--", linewidth=1, label=f"threshold {threshold:g}")
        ax.set_xlabel(X_LABEL)
        ax.set_ylabel("median greedy return")
        ax.set_title(title)
        ax.legend()
        return self._save(fig, path)

    def plot_snapshots(self, snapshots: Sequence[SweepSnapshotRow], path: Path, title: str = "") -> Path:
        """Grouped bars of median score per capacity, early window next to final checkpoint."""
        frame = pd.DataFrame([s.model_dump() for s in snapshots])
        capacities = sorted(frame["capacity"].unique())
        fig, ax = plt.subplots(figsize=(7, 4))
        width = 0.38
        for offset, phase in ((-width / 2, "early"), (width / 2, "final")):
            part = frame[frame["phase"] == phase].set_index("capacity").reindex(capacities)
            positions = [i + offset for i in range(len(capacities))]
            errors = [part["median"] - part["q1"], part["q3"] - part["median"]]
            ax.bar(positions, part["median"], width, yerr=errors, capsize=3, label=phase)
        ax.set_xticks(range(len(capacities)))
        ax.set_xticklabels([str(c) for c in capacities])
        ax.set_xlabel("replay buffer capacity")
        ax.set_ylabel("median greedy return")
        ax.set_title(title)
        ax.legend()
        return self._save(fig, path)

plot_service = PlotService()
