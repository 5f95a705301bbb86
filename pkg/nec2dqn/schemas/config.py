from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import List, Literal

AgentKind = Literal["dqn", "double_dqn", "nstep_dqn", "nec", "nec2dqn", "tabular"]
EnvKind = Literal["chain", "gridworld", "minipong"]

class RunConfig(BaseModel):
    """Flat experiment configuration; defaults are the desk-scale values."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    # what to run
    agent: AgentKind = "nec2dqn"
    env: EnvKind = "minipong"
    label: str = ""
    seed: int = Field(default=0, ge=0)

    # environments
    chain_states: int = Field(default=5, ge=2)
    gridworld_layout: Literal["open", "trap", "rooms"] = "trap"
    pong_grid_size: int = Field(default=12, ge=8)
    pong_points: int = Field(default=5, ge=1)
    pong_max_steps: int = Field(default=2000, ge=1)
    frame_stack: int = Field(default=4, ge=1)

    # return and memory
    gamma: float = Field(default=0.99, ge=0.0, lt=1.0)
    n_step: int = Field(default=10, ge=1)
    p_neighbors: int = Field(default=50, ge=1)
    dnd_delta: float = Field(default=1e-3, gt=0.0)
    dnd_alpha: float = Field(default=0.1, gt=0.0, le=1.0)
    dnd_capacity: int = Field(default=5000, ge=1)
    dnd_index: Literal["scan", "kdtree"] = "scan"
    buffer_capacity: int = Field(default=10_000, ge=1)
    batch_size: int = Field(default=32, ge=1)
    replay_period: int = Field(default=4, ge=1)
    replay_start_size: int = Field(default=500, ge=1)
    change_step: int = Field(default=30_000, ge=0)
    target_update_period: int = Field(default=10_000, ge=1)
    tabular_alpha: float = Field(default=0.1, gt=0.0, le=1.0)

    # exploration
    epsilon_start: float = Field(default=1.0, ge=0.0, le=1.0)
    epsilon_end: float = Field(default=0.01, ge=0.0, le=1.0)
    epsilon_decay_steps: int = Field(default=50_000, ge=0)

    # optimizer
    learning_rate: float = Field(default=2.5e-4, gt=0.0)
    rmsprop_momentum: float = Field(default=0.95, ge=0.0, lt=1.0)
    rmsprop_eps: float = Field(default=0.01, gt=0.0)
    eps_inside_sqrt: bool = False
    rmsprop_velocity: float = Field(default=0.0, ge=0.0, lt=1.0)

    # networks
    encoder: Literal["mlp", "cnn"] = "mlp"
    nec_embedding: int = Field(default=64, ge=1)
    encoder_hidden: int = Field(default=128, ge=1)
    dqn_hidden: int = Field(default=128, ge=1)
    conv_channels: List[int] = Field(default=[16, 32])
    conv_kernels: List[int] = Field(default=[3, 3])
    conv_strides: List[int] = Field(default=[1, 1])

    # schedule
    total_steps: int = Field(default=150_000, ge=0)
    eval_period: int = Field(default=2500, ge=1)
    eval_episodes: int = Field(default=5, ge=1)

    @field_validator("conv_channels", "conv_kernels", "conv_strides", mode="before")
    @classmethod
    def split_int_list(cls, v):
        if isinstance(v, str):
            return [int(part) for part in v.split(",") if part.strip()]
        return v

    @field_validator("conv_channels", "conv_kernels", "conv_strides")
    @classmethod
    def positive_entries(cls, v: List[int]) -> List[int]:
        if not v or any(x < 1 for x in v):
            raise ValueError("must be a non-empty list of positive integers")
        return v

    @model_validator(mode="after")
    def consistent(self) -> "RunConfig":
        if self.epsilon_end > self.epsilon_start:
            raise ValueError("epsilon_end must not exceed epsilon_start")
        if not len(self.conv_channels) == len(self.conv_kernels) == len(self.conv_strides):
            raise ValueError("conv_channels, conv_kernels and conv_strides must have equal length")
        return self

    @property
    def run_label(self) -> str:
        return self.label or f"{self.agent}-{self.env}"
