import numpy as np
import pytest

from nec2dqn.agents.factory import build_agent
from nec2dqn.core.exceptions import ContractViolationError
from nec2dqn.db.repositories.checkpoints import checkpoint_repository
from nec2dqn.envs import ChainEnv


def trained(config, episodes=4):
    env = ChainEnv(config.chain_states)
    agent = build_agent(config, env)
    for _ in range(episodes):
        agent.run_episode(env)
    return agent, env


def assert_same_agent(a, b):
    assert a.global_step == b.global_step
    assert a.episodes == b.episodes
    assert a.rng.bit_generator.state == b.rng.bit_generator.state
    for name, params in a.param_sets().items():
        other = b.param_sets()[name]
        for key in params.params:
            np.testing.assert_array_equal(params.params[key], other.params[key])
            np.testing.assert_array_equal(params.square_avg[key], other.square_avg[key])
            np.testing.assert_array_equal(params.velocity[key], other.velocity[key])
    for ta, tb in zip(a.dnd_tables(), b.dnd_tables()):
        sa, sb = ta.state(), tb.state()
        assert sa["tick"] == sb["tick"] and sa["size"] == sb["size"]
        for key in ("keys", "values", "recency"):
            np.testing.assert_array_equal(sa[key], sb[key])


@pytest.mark.parametrize("kind", ["nec2dqn", "dqn", "tabular"])
def test_restored_agent_continues_identically(chain_config, tmp_path, kind):
    config = chain_config.model_copy(update={"agent": kind})
    original, env = trained(config)
    checkpoint_repository.save(tmp_path, original, {"train_return": 1.0})
    assert checkpoint_repository.exists(tmp_path)

    restored = build_agent(config, ChainEnv(config.chain_states))
    extra = checkpoint_repository.load(tmp_path, restored)
    assert extra == {"train_return": 1.0}
    assert_same_agent(original, restored)
    if original.replay_buffer() is not None:
        assert restored.replay_buffer().position == original.replay_buffer().position
        assert len(restored.replay_buffer()) == len(original.replay_buffer())

    first = original.run_episode(env)
    second = restored.run_episode(ChainEnv(config.chain_states))
    assert first == second
    assert_same_agent(original, restored)


def test_checkpoint_of_another_kind_is_refused(chain_config, tmp_path):
    agent, _ = trained(chain_config, episodes=1)
    checkpoint_repository.save(tmp_path, agent)
    other = build_agent(chain_config.model_copy(update={"agent": "nstep_dqn"}), ChainEnv(3))
    with pytest.raises(ContractViolationError):
        checkpoint_repository.load(tmp_path, other)


def test_state_file_is_written_last(chain_config, tmp_path):
    agent, _ = trained(chain_config, episodes=1)
    assert not checkpoint_repository.exists(tmp_path)
    checkpoint_repository.save(tmp_path, agent)
    names = {p.name for p in tmp_path.iterdir()}
    assert {"networks.csv", "replay.parquet", "state.json", "dnd-0.parquet", "dnd-1.parquet"} <= names
    assert not any(name.endswith(".tmp") for name in names)
