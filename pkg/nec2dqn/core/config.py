from typing import Literal

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()

class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="NEC2DQN_", extra="ignore")

    # Output
    OUTPUT_ROOT: str = "runs"
    PLOT_FORMAT: Literal["png", "svg"] = "png"

    # Logging
    LOG_LEVEL: str = "INFO"

    # Parallel seeds (1 = run inline)
    MAX_WORKERS: int = 1

    # Long learning-speed experiments in the test suite
    RUN_SLOW: bool = False

settings = Settings()

# full-scale reference values, noted next to the desk-scale defaults in config.resolved
REFERENCE_DEFAULTS = {
    "gamma": 0.99,
    "n_step": 10,
    "p_neighbors": 50,
    "dnd_delta": 1e-3,
    "dnd_alpha": 0.1,
    "dnd_capacity": 500_000,
    "batch_size": 32,
    "replay_period": 4,
    "buffer_capacity": 300_000,
    "change_step": 2_000_000,
    "epsilon_start": 1.0,
    "epsilon_end": 0.01,
    "epsilon_decay_steps": 1_000_000,
    "learning_rate": 0.000025,
    "rmsprop_momentum": 0.95,
    "rmsprop_eps": 0.01,
    "nec_embedding": 64,
    "dqn_hidden": 512,
    "conv_channels": "32,64,64",
    "conv_kernels": "8,4,3",
    "conv_strides": "4,2,1",
    "frame_stack": 4,
    "eval_period": 50_000,
    "eval_episodes": 5,
}
