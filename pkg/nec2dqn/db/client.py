from pathlib import Path
from typing import Optional, Union

from ..core.config import settings

def get_output_root(root: Optional[Union[str, Path]] = None) -> Path:
    return Path(root if root is not None else settings.OUTPUT_ROOT)

def get_run_dir(label: str, seed: int, root: Optional[Union[str, Path]] = None) -> Path:
    return get_output_root(root) / label / f"seed-{seed}"

def get_experiment_dir(name: str, root: Optional[Union[str, Path]] = None) -> Path:
    return get_output_root(root) / name

def ensure_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path

METRICS_FILE = "metrics.csv"
TIMING_FILE = "timing.csv"
CONFIG_FILE = "config.resolved"
CHECKPOINT_DIR = "checkpoint"
PLOTS_DIR = "plots"
