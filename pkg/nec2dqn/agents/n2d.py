"""The blended episodic/DQN agent and its two single-branch relatives.

kind = "nec2dqn": acts on lambda(S) * Q_NEC + (1 - lambda(S)) * Q_DQN and trains
    both branches on the same stored N-step targets while lambda > 0.
kind = "nstep_dqn": lambda is 0 throughout; the NEC branch does not exist.
kind = "nec": lambda is 1 throughout; the DQN branch does not exist.

Neither branch keeps a target network: each stored record carries its own
scalar target computed once at episode end.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from ..core.exceptions import ContractViolationError, NotReadyError
from ..envs.base import Env
from ..envs.preprocessing import FrameStack
from ..memory.replay import ReplayBuffer, Trajectory, TransitionRecord, n_step_targets
from ..schemas.metrics import EpisodeStats
from .approximators import NecNetwork, QNetwork
from .base import Agent, StepCallback
from .policy import EpsilonSchedule, epsilon_greedy
from .schedule import LambdaSchedule, q_n2d

logger = logging.getLogger(__name__)

N2D_KINDS = ("nec2dqn", "nstep_dqn", "nec")


class N2dAgent(Agent):
    def __init__(
        self,
        kind: str,
        dqn: Optional[QNetwork],
        nec: Optional[NecNetwork],
        schedule: LambdaSchedule,
        epsilon: EpsilonSchedule,
        buffer: ReplayBuffer,
        rng: np.random.Generator,
        gamma: float = 0.99,
        n_step: int = 10,
        batch_size: int = 32,
        replay_period: int = 4,
        replay_start_size: int = 32,
        frame_stack: int = 4
    ):
        super().__init__(epsilon, rng)
        if kind not in N2D_KINDS:
            raise ContractViolationError(f"unknown agent kind {kind!r}")
        if kind != "nec" and dqn is None:
            raise ContractViolationError(f"{kind} needs a DQN branch")
        if kind != "nstep_dqn" and nec is None:
            raise ContractViolationError(f"{kind} needs an NEC branch")
        action_counts = {net.action_count for net in (dqn, nec) if net is not None}
        if len(action_counts) != 1:
            raise ContractViolationError(f"branches disagree on the action count: {sorted(action_counts)}")
        self.kind = kind
        self.dqn = dqn
        self.nec = nec if kind != "nstep_dqn" else None
        self.schedule = schedule
        self.buffer = buffer
        self.gamma = gamma
        self.n_step = n_step
        self.batch_size = batch_size
        self.replay_period = replay_period
        self.replay_start_size = max(replay_start_size, batch_size)
        self.frame_stack = frame_stack

    @property
    def action_count(self) -> int:
        return (self.dqn or self.nec).action_count

    @property
    def lam(self) -> float:
        if self.kind == "nstep_dqn":
            return 0.0
        if self.kind == "nec":
            return 1.0
        return self.schedule(self.global_step)

    @property
    def nec_queries(self) -> int:
        """DND lookups plus encoder passes made so far."""
        if self.nec is None:
            return 0
        return self.nec.lookups + self.nec.encodes

    def observation_stack(self, env: Env) -> FrameStack:
        return FrameStack(env.observation_shape, self.frame_stack)

    # action values

    def q_values(
        self,
        state,
        lam: float,
        refresh: bool = True,
        count: bool = True
    ) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        """Blended values for one state, plus the embedding when the NEC branch was queried."""
        q_dqn = self.dqn.predict(state) if lam < 1.0 else None
        h = None
        q_nec = None
        if lam > 0.0:
            h = self.nec.embed(state, count=count)
            q_nec = self.nec.q_from_embedding(h, refresh=refresh, count=count)
        return q_n2d(q_nec, q_dqn, lam), h

    def greedy_q(self, state) -> np.ndarray:
        q, _ = self.q_values(state, self.lam, refresh=False, count=False)
        return q

    def bootstrap(self, states: np.ndarray, lam: float) -> np.ndarray:
        q_dqn = self.dqn.predict(states) if lam < 1.0 else None
        q_nec = self.nec.predict(states) if lam > 0.0 else None
        return q_n2d(q_nec, q_dqn, lam)

    def shared_target(self, traj: Trajectory, lam: Optional[float] = None) -> List[float]:
        lam = self.lam if lam is None else lam
        return n_step_targets(traj, self.n_step, self.gamma, lambda states: self.bootstrap(states, lam))

    # learning

    def train_step(self, batch: List[TransitionRecord]) -> Tuple[Optional[float], Optional[float]]:
        """One optimizer step per active branch on a replayed minibatch.

        Returns (loss_nec, loss_dqn); a branch that did not train reports None.
        """
        if not batch:
            raise NotReadyError("empty batch")
        states = np.stack([record.state for record in batch])
        actions = np.array([record.action for record in batch])
        targets = np.array([record.target for record in batch])
        lam = self.lam
        loss_dqn = self.dqn.train(states, actions, targets) if self.dqn is not None else None
        loss_nec = self.nec.train(states, actions, targets) if lam > 0.0 else None
        if loss_dqn is not None:
            self.last_losses["dqn"].append(loss_dqn)
        if loss_nec is not None:
            self.last_losses["nec"].append(loss_nec)
        return loss_nec, loss_dqn

    def _maybe_train(self) -> None:
        if self.global_step % self.replay_period != 0:
            return
        if not self.buffer.ready(self.replay_start_size):
            return
        self.train_step(self.buffer.sample_minibatch(self.batch_size, self.rng))

    def finish_episode(self, traj: Trajectory) -> List[float]:
        """Targets for the finished episode, stored in the buffer and, while lambda > 0, in the DND."""
        lam = self.lam
        targets = self.shared_target(traj, lam)
        for state, action, y in zip(traj.states, traj.actions, targets):
            self.buffer.append(TransitionRecord(state=state, action=action, target=y))
        if self.nec is not None and lam > 0.0:
            for h, action, y in zip(traj.embeddings, traj.actions, targets):
                if h is not None:
                    self.nec.write(action, h, y)
        return targets

    def run_episode(
        self,
        env: Env,
        step_callback: Optional[StepCallback] = None,
        step_budget: Optional[int] = None
    ) -> EpisodeStats:
        frames = self.observation_stack(env)
        state = frames.reset(env.reset())
        traj = Trajectory()
        total = 0.0
        t = 0
        while True:
            q, h = self.q_values(state, self.lam)
            action = epsilon_greedy(q, self.current_epsilon(), self.rng)
            step = self._env_step(env, action, t)
            traj.append(state, action, step.reward, h)
            total += step.reward
            t += 1
            self.global_step += 1
            self._maybe_train()
            if step_callback is not None:
                step_callback(self.global_step)
            if step.done or (step_budget is not None and self.global_step >= step_budget):
                break
            state = frames.stack(step.observation)

        self.finish_episode(traj)
        self.episodes += 1
        stats = EpisodeStats(
            episode=self.episodes,
            steps=t,
            episode_return=total,
            global_step=self.global_step,
            lam=self.lam
        )
        logger.debug(f"Episode {stats.episode}: return {total} in {t} steps, lambda {stats.lam:.4f}")
        return stats

    # checkpoint surface

    def param_sets(self):
        sets = {}
        if self.dqn is not None:
            sets["dqn"] = self.dqn.params
        if self.nec is not None:
            sets["nec_encoder"] = self.nec.params
        return sets

    def dnd_tables(self):
        return self.nec.tables if self.nec is not None else []

    def replay_buffer(self):
        return self.buffer


def shared_target(traj: Trajectory, n: int, gamma: float, agent: N2dAgent, lam: Optional[float] = None) -> List[float]:
    """N-step targets bootstrapped from max_a Q_N2D(s_{t+N}, a) at ``agent``'s current lambda."""
    lam = agent.lam if lam is None else lam
    return n_step_targets(traj, n, gamma, lambda states: agent.bootstrap(states, lam))
