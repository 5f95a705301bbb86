from typing import Tuple

import numpy as np

from ..core.exceptions import ConfigError, ShapeMismatchError
from ..envs.base import Env
from ..memory.dnd import DndTable
from ..memory.replay import ReplayBuffer
from ..numerics.network import Network, build_cnn, build_mlp
from ..schemas.config import RunConfig
from .approximators import NecNetwork, OptimizerConfig, QNetwork
from .base import Agent
from .dqn import DqnAgent
from .n2d import N2dAgent
from .policy import EpsilonSchedule
from .schedule import LambdaSchedule
from .tabular_agent import TabularAgent


def _network(config: RunConfig, input_shape: Tuple[int, ...], hidden: int, output_dim: int,
             rng: np.random.Generator, prefix: str) -> Network:
    if config.encoder == "mlp":
        return build_mlp(input_shape, [hidden], output_dim, rng, prefix=prefix)
    try:
        return build_cnn(
            input_shape, config.conv_channels, config.conv_kernels, config.conv_strides,
            [hidden], output_dim, rng, prefix=prefix
        )
    except ShapeMismatchError as e:
        raise ConfigError("conv_kernels", str(e)) from e


def build_agent(config: RunConfig, env: Env) -> Agent:
    """Fresh agent for ``config``; network init and acting draw from separate seeded streams."""
    init_seq, act_seq = np.random.SeedSequence(config.seed).spawn(2)
    init_rng = np.random.default_rng(init_seq)
    rng = np.random.default_rng(act_seq)
    epsilon = EpsilonSchedule(config.epsilon_start, config.epsilon_end, config.epsilon_decay_steps)

    if config.agent == "tabular":
        return TabularAgent(
            env.state_count, env.action_count, epsilon, rng,
            alpha=config.tabular_alpha, gamma=config.gamma
        )

    optimizer = OptimizerConfig(
        learning_rate=config.learning_rate,
        momentum=config.rmsprop_momentum,
        eps=config.rmsprop_eps,
        eps_inside_sqrt=config.eps_inside_sqrt,
        velocity=config.rmsprop_velocity
    )
    state_shape = (config.frame_stack, *env.observation_shape)
    buffer = ReplayBuffer(config.buffer_capacity)

    if config.agent in ("dqn", "double_dqn"):
        online = QNetwork(_network(config, state_shape, config.dqn_hidden, env.action_count, init_rng, "dqn"), optimizer)
        return DqnAgent(
            online, epsilon, buffer, rng,
            double=config.agent == "double_dqn",
            gamma=config.gamma,
            batch_size=config.batch_size,
            replay_period=config.replay_period,
            replay_start_size=config.replay_start_size,
            target_update_period=config.target_update_period,
            frame_stack=config.frame_stack
        )

    dqn = None
    nec = None
    if config.agent != "nec":
        dqn = QNetwork(_network(config, state_shape, config.dqn_hidden, env.action_count, init_rng, "dqn"), optimizer)
    if config.agent != "nstep_dqn":
        encoder = _network(config, state_shape, config.encoder_hidden, config.nec_embedding, init_rng, "nec")
        tables = [
            DndTable(
                config.nec_embedding, config.dnd_capacity,
                delta=config.dnd_delta, alpha=config.dnd_alpha, index=config.dnd_index
            )
            for _ in range(env.action_count)
        ]
        nec = NecNetwork(encoder, tables, config.p_neighbors, optimizer)
    return N2dAgent(
        config.agent, dqn, nec,
        schedule=LambdaSchedule(config.change_step),
        epsilon=epsilon,
        buffer=buffer,
        rng=rng,
        gamma=config.gamma,
        n_step=config.n_step,
        batch_size=config.batch_size,
        replay_period=config.replay_period,
        replay_start_size=config.replay_start_size,
        frame_stack=config.frame_stack
    )
