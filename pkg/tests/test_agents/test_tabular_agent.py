import pytest

from nec2dqn.agents.factory import build_agent
from nec2dqn.agents.tabular_agent import TabularAgent
from nec2dqn.core.exceptions import ConfigError
from nec2dqn.envs import ChainEnv, MiniPongEnv
from nec2dqn.schemas.config import RunConfig


def test_tabular_agent_needs_a_discrete_state_index():
    with pytest.raises(ConfigError) as info:
        build_agent(RunConfig(agent="tabular", env="minipong"), MiniPongEnv())
    assert info.value.field == "agent"


def test_tabular_agent_learns_the_chain():
    config = RunConfig(
        agent="tabular", env="chain", chain_states=3, gamma=0.9, tabular_alpha=0.5,
        epsilon_start=1.0, epsilon_end=1.0
    )
    env = ChainEnv(3)
    agent = build_agent(config, env)
    assert isinstance(agent, TabularAgent)
    for _ in range(100):
        agent.run_episode(env)
    assert agent.q[0, 1] > agent.q[0, 0]
    assert agent.evaluate(ChainEnv(3), 2) == [1.0, 1.0]
    assert set(agent.param_sets()) == {"q_table"}


def test_tabular_episode_respects_the_step_budget():
    config = RunConfig(agent="tabular", env="chain", chain_states=10)
    env = ChainEnv(10)
    agent = build_agent(config, env)
    stats = agent.run_episode(env, step_budget=3)
    assert stats.steps == 3
    assert agent.global_step == 3
