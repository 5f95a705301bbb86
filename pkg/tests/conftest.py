import os

import numpy as np
import pytest

from nec2dqn.schemas.config import RunConfig


def pytest_collection_modifyitems(config, items):
    if os.getenv("NEC2DQN_RUN_SLOW", "").lower() in ("1", "true", "yes"):
        return
    skip_slow = pytest.mark.skip(reason="set NEC2DQN_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def chain_config():
    """Tiny nec2dqn run on a 3-state chain, small enough for unit tests."""
    return RunConfig(
        agent="nec2dqn",
        env="chain",
        chain_states=3,
        frame_stack=1,
        nec_embedding=4,
        encoder_hidden=8,
        dqn_hidden=8,
        p_neighbors=3,
        dnd_capacity=50,
        buffer_capacity=100,
        batch_size=4,
        replay_start_size=4,
        n_step=3,
        gamma=0.9,
        change_step=200,
        epsilon_decay_steps=100,
        learning_rate=1e-3,
        total_steps=60,
        eval_period=20,
        eval_episodes=2
    )
