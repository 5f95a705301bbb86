import numpy as np
import pytest

from nec2dqn.agents.factory import build_agent
from nec2dqn.agents.n2d import N2dAgent
from nec2dqn.core.exceptions import ConfigError
from nec2dqn.envs import ChainEnv, MiniPongEnv
from nec2dqn.schemas.config import RunConfig


@pytest.mark.parametrize("kind,has_dqn,has_nec", [
    ("nec2dqn", True, True),
    ("nstep_dqn", True, False),
    ("nec", False, True),
])
def test_n2d_kinds_get_their_branches(chain_config, kind, has_dqn, has_nec):
    agent = build_agent(chain_config.model_copy(update={"agent": kind}), ChainEnv(3))
    assert isinstance(agent, N2dAgent)
    assert (agent.dqn is not None) == has_dqn
    assert (agent.nec is not None) == has_nec
    if has_nec:
        assert len(agent.nec.tables) == 2
        assert agent.nec.tables[0].dim == chain_config.nec_embedding


def test_same_seed_same_initial_networks(chain_config):
    a = build_agent(chain_config, ChainEnv(3))
    b = build_agent(chain_config, ChainEnv(3))
    for name, params in a.param_sets().items():
        for key, value in params.params.items():
            np.testing.assert_array_equal(value, b.param_sets()[name].params[key])


def test_replay_start_is_at_least_one_batch(chain_config):
    agent = build_agent(chain_config.model_copy(update={"replay_start_size": 1}), ChainEnv(3))
    assert agent.replay_start_size == chain_config.batch_size


def test_convolutional_encoder_on_minipong():
    config = RunConfig(
        agent="dqn", env="minipong", pong_grid_size=8, frame_stack=2, encoder="cnn",
        conv_channels=[4], conv_kernels=[3], conv_strides=[2], dqn_hidden=8
    )
    agent = build_agent(config, MiniPongEnv(grid_size=8))
    env = MiniPongEnv(grid_size=8)
    state = agent.observation_stack(env).reset(env.reset())
    assert agent.greedy_q(state).shape == (3,)


def test_oversized_kernel_is_a_config_error():
    config = RunConfig(
        agent="dqn", env="minipong", pong_grid_size=8, encoder="cnn",
        conv_channels=[4], conv_kernels=[9], conv_strides=[1]
    )
    with pytest.raises(ConfigError) as info:
        build_agent(config, MiniPongEnv(grid_size=8))
    assert info.value.field == "conv_kernels"
