import logging
from typing import Optional

import numpy as np

from ..core.exceptions import ContractViolationError, NotReadyError
from ..envs.base import Env
from ..envs.preprocessing import FrameStack
from ..memory.replay import ReplayBuffer, Transition
from ..schemas.metrics import EpisodeStats
from .approximators import QNetwork
from .base import Agent, StepCallback
from .policy import EpsilonSchedule, epsilon_greedy
from .targets import double_dqn_targets, dqn_targets

logger = logging.getLogger(__name__)


class DqnAgent(Agent):
    """One-step DQN with a hard-copied target network; ``double`` selects the Double DQN target."""

    def __init__(
        self,
        online: QNetwork,
        epsilon: EpsilonSchedule,
        buffer: ReplayBuffer,
        rng: np.random.Generator,
        double: bool = False,
        gamma: float = 0.99,
        batch_size: int = 32,
        replay_period: int = 4,
        replay_start_size: int = 32,
        target_update_period: int = 10_000,
        frame_stack: int = 4
    ):
        super().__init__(epsilon, rng)
        if target_update_period < 1:
            raise ContractViolationError(f"target_update_period must be positive, got {target_update_period}")
        self.kind = "double_dqn" if double else "dqn"
        self.online = online
        self.target = online.clone()
        self.double = double
        self.buffer = buffer
        self.gamma = gamma
        self.batch_size = batch_size
        self.replay_period = replay_period
        self.replay_start_size = max(replay_start_size, batch_size)
        self.target_update_period = target_update_period
        self.frame_stack = frame_stack

    def observation_stack(self, env: Env) -> FrameStack:
        return FrameStack(env.observation_shape, self.frame_stack)

    def greedy_q(self, state) -> np.ndarray:
        return self.online.predict(state)

    def sync_target(self) -> None:
        self.target.params.copy_from(self.online.params)

    def targets(self, batch) -> np.ndarray:
        rewards = [t.reward for t in batch]
        next_states = np.stack([t.next_state for t in batch])
        dones = [t.done for t in batch]
        if self.double:
            return double_dqn_targets(rewards, next_states, dones, self.gamma, self.online.predict, self.target.predict)
        return dqn_targets(rewards, next_states, dones, self.gamma, self.target.predict)

    def train_step(self, batch) -> float:
        if not batch:
            raise NotReadyError("empty batch")
        states = np.stack([t.state for t in batch])
        actions = np.array([t.action for t in batch])
        loss = self.online.train(states, actions, self.targets(batch))
        self.last_losses["dqn"].append(loss)
        return loss

    def run_episode(
        self,
        env: Env,
        step_callback: Optional[StepCallback] = None,
        step_budget: Optional[int] = None
    ) -> EpisodeStats:
        frames = self.observation_stack(env)
        state = frames.reset(env.reset())
        total = 0.0
        t = 0
        while True:
            action = epsilon_greedy(self.online.predict(state), self.current_epsilon(), self.rng)
            step = self._env_step(env, action, t)
            next_state = frames.stack(step.observation)
            # a step-cap cut is not a terminal state
            terminal = step.done and env.steps < env.max_steps
            self.buffer.append(Transition(state, action, step.reward, next_state, terminal))
            total += step.reward
            t += 1
            self.global_step += 1

            if self.global_step % self.replay_period == 0 and self.buffer.ready(self.replay_start_size):
                self.train_step(self.buffer.sample_minibatch(self.batch_size, self.rng))
            if self.global_step % self.target_update_period == 0:
                self.sync_target()
            if step_callback is not None:
                step_callback(self.global_step)
            if step.done or (step_budget is not None and self.global_step >= step_budget):
                break
            state = next_state

        self.episodes += 1
        stats = EpisodeStats(episode=self.episodes, steps=t, episode_return=total, global_step=self.global_step)
        logger.debug(f"Episode {stats.episode}: return {total} in {t} steps")
        return stats

    def param_sets(self):
        return {"dqn": self.online.params, "dqn_target": self.target.params}

    def replay_buffer(self):
        return self.buffer
