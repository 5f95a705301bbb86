from ..schemas.config import RunConfig
from .base import Env
from .chain import ChainEnv
from .gridworld import GridworldEnv
from .minipong import MiniPongEnv


def make_env(config: RunConfig) -> Env:
    if config.env == "chain":
        return ChainEnv(config.chain_states)
    if config.env == "gridworld":
        return GridworldEnv.from_layout(config.gridworld_layout)
    return MiniPongEnv(
        grid_size=config.pong_grid_size,
        points_to_win=config.pong_points,
        max_steps=config.pong_max_steps
    )
