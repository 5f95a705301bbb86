from pathlib import Path

import pytest

from nec2dqn.db.repositories.checkpoints import checkpoint_repository
from nec2dqn.db.repositories.metrics import metrics_repository
from nec2dqn.envs import ChainEnv
from nec2dqn.schemas.config import RunConfig
import nec2dqn.services.run_service as run_module
from nec2dqn.services.run_service import run_service


class FailingChain(ChainEnv):
    """Chain that blows up on its ``fail_at``-th step, counted across episodes."""

    def __init__(self, n_states, fail_at):
        super().__init__(n_states)
        self.calls = 0
        self.fail_at = fail_at

    def step(self, action):
        self.calls += 1
        if self.calls == self.fail_at:
            raise RuntimeError("simulated crash")
        return super().step(action)


def result_dir(result):
    return Path(result.run_dir)


def metrics_text(result):
    return (result_dir(result) / "metrics.csv").read_bytes()


def test_zero_step_run_logs_the_initial_evaluation_only(chain_config, tmp_path):
    result = run_service.run(chain_config.model_copy(update={"total_steps": 0}), output_root=tmp_path, plots=False)
    lines = (result_dir(result) / "metrics.csv").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    assert [row.step for row in result.rows] == [0]
    assert result.rows[0].lam == 1.0


def test_run_writes_its_files(chain_config, tmp_path):
    result = run_service.run(chain_config, output_root=tmp_path)
    run_dir = result_dir(result)
    assert run_dir == tmp_path / "nec2dqn-chain" / "seed-0"
    assert [row.step for row in result.rows] == [0, 20, 40, 60]
    assert (run_dir / "config.resolved").exists()
    assert len(metrics_repository.read_timing(run_dir / "timing.csv")) == 4
    assert checkpoint_repository.exists(run_dir / "checkpoint")
    assert (run_dir / "plots" / "learning_curve.png").exists()
    for row in metrics_repository.read_metrics(run_dir / "metrics.csv"):
        sizes = [int(s) for s in row.dnd_sizes.split(";")]
        assert len(sizes) == 2
        assert sum(sizes) == row.dnd_size


def test_identical_runs_write_identical_metrics(chain_config, tmp_path):
    first = run_service.run(chain_config, output_root=tmp_path / "a", plots=False)
    second = run_service.run(chain_config, output_root=tmp_path / "b", plots=False)
    assert metrics_text(first) == metrics_text(second)


def test_resume_after_a_crash_matches_an_uninterrupted_run(chain_config, tmp_path, monkeypatch):
    uninterrupted = run_service.run(chain_config, output_root=tmp_path / "a", plots=False)

    envs = []

    def crashing_make_env(config):
        env = FailingChain(config.chain_states, fail_at=55) if not envs else ChainEnv(config.chain_states)
        envs.append(env)
        return env

    monkeypatch.setattr(run_module, "make_env", crashing_make_env)
    with pytest.raises(RuntimeError):
        run_service.run(chain_config, output_root=tmp_path / "b", plots=False)
    run_dir = tmp_path / "b" / "nec2dqn-chain" / "seed-0"
    assert checkpoint_repository.exists(run_dir / "checkpoint-fault")
    assert checkpoint_repository.exists(run_dir / "checkpoint")
    monkeypatch.undo()

    resumed = run_service.run(chain_config, resume=True, output_root=tmp_path / "b", plots=False)
    assert resumed.resumed_from is not None and resumed.resumed_from >= 20
    assert metrics_text(resumed) == metrics_text(uninterrupted)


def test_tabular_agent_solves_the_chain(tmp_path):
    config = RunConfig(
        agent="tabular", env="chain", chain_states=3, gamma=0.9, tabular_alpha=0.5,
        epsilon_decay_steps=200, total_steps=300, eval_period=100, eval_episodes=1
    )
    result = run_service.run(config, output_root=tmp_path, plots=False)
    assert result.rows[-1].step == 300
    assert result.rows[-1].eval_mean == 1.0
    assert result.rows[-1].dnd_sizes is None
