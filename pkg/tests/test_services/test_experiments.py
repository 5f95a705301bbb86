import logging

import pandas as pd
import pytest

from nec2dqn.core.exceptions import ConfigError
from nec2dqn.schemas.experiment import RunResult
from nec2dqn.schemas.metrics import MetricRow
from nec2dqn.services.compare_service import CompareService, unique_labels
from nec2dqn.services.sweep_service import SweepService
from nec2dqn.utils.curves import aggregate_curves, median_iqr


def run_result(seed, scores, label="a"):
    rows = [
        MetricRow(step=20 * i, episodes=i, eval_mean=s, eval_min=s, eval_max=s, lam=0.0, epsilon=0.1)
        for i, s in enumerate(scores)
    ]
    return RunResult(label=label, seed=seed, run_dir="", rows=rows, episodes=len(rows))


def test_steps_to_threshold_is_censored_at_the_budget():
    result = run_result(0, [-1.0, 0.0, 2.0])
    assert result.steps_to_threshold(1.0, 1000) == 40
    assert result.steps_to_threshold(5.0, 1000) == 1000


def test_median_iqr():
    assert median_iqr([1.0, 2.0, 3.0, 4.0, 5.0]) == {"median": 3.0, "q1": 2.0, "q3": 4.0}


def test_single_seed_band_collapses_to_the_curve():
    curves = aggregate_curves({"a": [run_result(0, [1.0, 2.0])]})
    assert list(curves["median"]) == [1.0, 2.0]
    assert list(curves["q1"]) == list(curves["median"]) == list(curves["q3"])


def test_curves_aggregate_over_seeds():
    curves = aggregate_curves({"a": [run_result(s, [float(s), 2.0 * s]) for s in range(3)]})
    assert list(curves["median"]) == [1.0, 2.0]
    assert list(curves["seeds"]) == [3, 3]


def test_duplicate_labels_get_a_suffix(chain_config):
    labelled = unique_labels([chain_config, chain_config, chain_config.model_copy(update={"agent": "nec"})])
    assert [c.run_label for c in labelled] == ["nec2dqn-chain", "nec2dqn-chain-2", "nec-chain"]


def test_compare_needs_two_configs(chain_config, tmp_path):
    with pytest.raises(ConfigError):
        CompareService(max_workers=1).compare([chain_config], [0], 0.5, output_root=tmp_path)


def test_compare_writes_summary_and_curves(chain_config, tmp_path):
    configs = [
        chain_config.model_copy(update={"agent": "nec2dqn", "label": "n2d"}),
        chain_config.model_copy(update={"agent": "nstep_dqn", "label": "nstep"}),
    ]
    result = CompareService(max_workers=1).compare(configs, [0, 1], 0.5, name="cmp", output_root=tmp_path)

    summary = pd.read_csv(result.summary_path)
    assert list(summary["label"]) == ["n2d", "nstep"]
    assert list(summary["seeds"]) == [2, 2]
    assert all(0 <= s <= chain_config.total_steps for s in summary["median_steps"])
    curves = pd.read_csv(result.curves_path)
    assert set(curves["label"]) == {"n2d", "nstep"}
    assert (tmp_path / "cmp" / "comparison.png").exists()
    assert (tmp_path / "n2d" / "seed-1" / "metrics.csv").exists()


def test_sweep_dedupes_capacities_and_snapshots(chain_config, tmp_path, caplog):
    with caplog.at_level(logging.WARNING):
        result = SweepService().buffer_sweep(chain_config, [10, 10, 50], [0], name="sweep", output_root=tmp_path)
    assert "Duplicate buffer capacity 10" in caplog.text
    assert result.capacities == [10, 50]
    assert result.snapshot(10, "early").step == 20
    assert result.snapshot(50, "final").step == 60
    snapshots = pd.read_csv(result.snapshot_path)
    assert len(snapshots) == 4
    assert (tmp_path / "nec2dqn-chain-buf50" / "seed-0" / "metrics.csv").exists()


def test_sweep_needs_two_capacities(chain_config, tmp_path):
    with pytest.raises(ConfigError):
        SweepService().buffer_sweep(chain_config, [10, 10], [0], output_root=tmp_path)


def test_early_step_is_the_first_eval_after_the_early_window():
    assert SweepService().early_step([0, 20, 40, 60], 60) == 20
    assert SweepService().early_step([0, 20], 1000) is None
