from typing import Dict, List, Sequence

import numpy as np
import pandas as pd

from ..schemas.experiment import RunResult

CURVE_COLUMNS = ["label", "step", "median", "q1", "q3", "seeds"]

def runs_frame(label: str, results: Sequence[RunResult]) -> pd.DataFrame:
    """Long table of eval means: one row per (seed, step)."""
    records = [
        {"label": label, "seed": result.seed, "step": row.step, "eval_mean": row.eval_mean}
        for result in results
        for row in result.rows
    ]
    return pd.DataFrame(records, columns=["label", "seed", "step", "eval_mean"])

def median_iqr(values: Sequence[float]) -> Dict[str, float]:
    q1, median, q3 = np.percentile(np.asarray(values, dtype=np.float64), [25, 50, 75])
    return {"median": float(median), "q1": float(q1), "q3": float(q3)}

def aggregate_curves(runs: Dict[str, List[RunResult]]) -> pd.DataFrame:
    """Median and interquartile range of the eval mean across seeds, per label and step."""
    frames = [runs_frame(str(label), results) for label, results in runs.items()]
    frames = [f for f in frames if not f.empty]
    if not frames:
        return pd.DataFrame(columns=CURVE_COLUMNS)
    long = pd.concat(frames, ignore_index=True)
    grouped = long.groupby(["label", "step"], sort=False)["eval_mean"]
    curves = grouped.agg(
        median="median",
        q1=lambda v: float(np.percentile(v, 25)),
        q3=lambda v: float(np.percentile(v, 75)),
        seeds="count",
    ).reset_index()
    return curves[CURVE_COLUMNS]
