from pathlib import Path
from typing import List, Optional, Union
import logging
import time

from ..agents.base import Agent
from ..agents.factory import build_agent
from ..db.client import (
    CHECKPOINT_DIR,
    CONFIG_FILE,
    METRICS_FILE,
    PLOTS_DIR,
    TIMING_FILE,
    ensure_dir,
    get_run_dir,
)
from ..db.repositories.checkpoints import checkpoint_repository
from ..db.repositories.configs import config_repository
from ..db.repositories.metrics import metrics_repository
from ..envs.factory import make_env
from ..schemas.config import RunConfig
from ..schemas.experiment import RunResult
from ..schemas.metrics import MetricRow, TimingRow

logger = logging.getLogger(__name__)

FAULT_CHECKPOINT_DIR = "checkpoint-fault"

class RunService:
    """Trains one (config, seed) pair and evaluates it greedily every ``eval_period`` steps.

    Evaluation runs on its own environment instance at exact multiples of the
    eval period (including step 0) and never changes the agent. A checkpoint is
    written at the first episode end after each evaluation and at the end of
    the run; ``resume=True`` continues from it.
    """

    def run(
        self,
        config: RunConfig,
        resume: bool = False,
        output_root: Optional[Union[str, Path]] = None,
        plots: bool = True
    ) -> RunResult:
        run_dir = ensure_dir(get_run_dir(config.run_label, config.seed, output_root))
        checkpoint_dir = run_dir / CHECKPOINT_DIR
        config_repository.write_resolved(run_dir / CONFIG_FILE, config)

        env = make_env(config)
        eval_env = make_env(config)
        agent = build_agent(config, env)

        rows: List[MetricRow] = []
        timing: List[TimingRow] = []
        train_return: Optional[float] = None
        resumed_from: Optional[int] = None
        started = time.perf_counter()

        if resume and checkpoint_repository.exists(checkpoint_dir):
            extra = checkpoint_repository.load(checkpoint_dir, agent, index=config.dnd_index)
            resumed_from = agent.global_step
            train_return = extra.get("train_return")
            rows = [r for r in metrics_repository.read_metrics(run_dir / METRICS_FILE) if r.step <= resumed_from]
            timing = [r for r in metrics_repository.read_timing(run_dir / TIMING_FILE) if r.step <= resumed_from]
            logger.info(f"Resuming {config.run_label} seed {config.seed} from step {resumed_from}")
        else:
            logger.info(f"Starting {config.run_label} seed {config.seed}: {config.total_steps} steps of {config.agent} on {config.env}")

        def record_eval(step: int) -> None:
            returns = agent.evaluate(eval_env, config.eval_episodes)
            losses = agent.drain_losses()
            row = MetricRow(
                step=step,
                episodes=agent.episodes,
                train_return=train_return,
                eval_mean=sum(returns) / len(returns),
                eval_min=min(returns),
                eval_max=max(returns),
                loss_dqn=losses.get("dqn"),
                loss_nec=losses.get("nec"),
                lam=agent.lam,
                epsilon=agent.current_epsilon(),
                dnd_size=agent.dnd_size(),
                dnd_sizes=agent.dnd_sizes(),
                buffer_size=len(agent.replay_buffer()) if agent.replay_buffer() is not None else 0
            )
            rows.append(row)
            timing.append(TimingRow(step=step, wall_clock=time.perf_counter() - started))
            metrics_repository.write_metrics(run_dir / METRICS_FILE, rows)
            metrics_repository.write_timing(run_dir / TIMING_FILE, timing)
            logger.info(
                f"[{config.run_label} seed {config.seed}] step {step}: eval {row.eval_mean:.2f} "
                f"[{row.eval_min:.0f}, {row.eval_max:.0f}], lambda {row.lam:.3f}, epsilon {row.epsilon:.3f}"
            )

        def on_step(step: int) -> None:
            if step % config.eval_period == 0:
                record_eval(step)

        if not rows:
            record_eval(agent.global_step)
        last_checkpoint_row = len(rows)

        try:
            while agent.global_step < config.total_steps:
                stats = agent.run_episode(env, on_step, step_budget=config.total_steps)
                train_return = stats.episode_return
                if len(rows) > last_checkpoint_row:
                    checkpoint_repository.save(checkpoint_dir, agent, {"train_return": train_return})
                    last_checkpoint_row = len(rows)
        except Exception as e:
            logger.error(f"Run {config.run_label} seed {config.seed} failed at step {agent.global_step}: {str(e)}")
            self._save_fault_checkpoint(run_dir, agent, train_return)
            raise

        checkpoint_repository.save(checkpoint_dir, agent, {"train_return": train_return})
        metrics_repository.write_metrics(run_dir / METRICS_FILE, rows)
        metrics_repository.write_timing(run_dir / TIMING_FILE, timing)

        if plots:
            from .plot_service import plot_service
            plot_service.plot_run(rows, ensure_dir(run_dir / PLOTS_DIR), title=f"{config.run_label} seed {config.seed}")

        logger.info(f"Finished {config.run_label} seed {config.seed}: {len(rows)} eval rows in {run_dir}")
        return RunResult(
            label=config.run_label,
            seed=config.seed,
            run_dir=str(run_dir),
            rows=rows,
            episodes=agent.episodes,
            resumed_from=resumed_from
        )

    def _save_fault_checkpoint(self, run_dir: Path, agent: Agent, train_return: Optional[float]) -> None:
        """Snapshot of the faulted state, kept apart from the resumable checkpoint."""
        try:
            checkpoint_repository.save(run_dir / FAULT_CHECKPOINT_DIR, agent, {"train_return": train_return})
        except Exception as e:
            logger.error(f"Could not write fault checkpoint: {str(e)}")

def execute_run(config_data: dict, output_root: Optional[str] = None, resume: bool = False) -> RunResult:
    """Process-pool entry point."""
    return run_service.run(RunConfig(**config_data), resume=resume, output_root=output_root, plots=False)

run_service = RunService()
