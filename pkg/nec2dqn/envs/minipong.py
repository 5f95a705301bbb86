from typing import Tuple

import numpy as np

from ..core.exceptions import ConfigError
from .base import Env

UP, STAY, DOWN = 0, 1, 2
SERVE_OFFSETS = (0, 2, -2)


class MiniPongEnv(Env):
    """Grid pong against a lag-1 tracking opponent, first to ``points_to_win``.

    The agent's paddle (length 3) sits in the right column, the opponent's
    (length 1) in the left one. Each serve starts in the centre column heading
    up and right, with both paddles re-centred. Step order: agent moves,
    opponent moves one row toward where the ball was one step earlier, ball
    moves and reflects off the top and bottom walls. A hit on the agent's paddle
    sends the ball back with vertical direction set by the hit offset (unchanged
    on a centre hit). Rewards: +1 when the opponent misses, -1 when the agent
    misses, 0 otherwise.
    """

    action_count = 3

    def __init__(self, grid_size: int = 12, points_to_win: int = 5, max_steps: int = 2000):
        super().__init__()
        if grid_size < 8:
            raise ConfigError("pong_grid_size", f"grid must be at least 8, got {grid_size}")
        if points_to_win < 1:
            raise ConfigError("pong_points", f"points to win must be positive, got {points_to_win}")
        self.size = grid_size
        self.points_to_win = points_to_win
        self.max_steps = max_steps
        self.observation_shape = (3, grid_size, grid_size)
        self.agent_score = 0
        self.opponent_score = 0
        self._serve()

    def _serve(self) -> None:
        centre = self.size // 2
        k = self.agent_score + self.opponent_score
        self.ball_row = centre + SERVE_OFFSETS[k % len(SERVE_OFFSETS)]
        self.ball_col = centre
        self.dr, self.dc = -1, 1
        self.paddle = centre
        self.opponent = centre
        self._lagged_row = self.ball_row

    def _reset(self) -> None:
        self.agent_score = 0
        self.opponent_score = 0
        self._serve()

    def _step(self, action: int) -> Tuple[float, bool]:
        g = self.size
        self.paddle = int(np.clip(self.paddle + (action - STAY), 1, g - 2))

        self.opponent += int(np.sign(self._lagged_row - self.opponent))
        self._lagged_row = self.ball_row

        row = self.ball_row + self.dr
        if row < 0 or row > g - 1:
            self.dr = -self.dr
            row = self.ball_row + self.dr
        self.ball_row = row
        self.ball_col += self.dc

        reward = 0.0
        if self.ball_col == g - 1:
            offset = row - self.paddle
            if abs(offset) <= 1:
                self.dc = -1
                if offset != 0:
                    self.dr = offset
            else:
                self.opponent_score += 1
                reward = -1.0
        elif self.ball_col == 0:
            if row == self.opponent:
                self.dc = 1
            else:
                self.agent_score += 1
                reward = 1.0

        if reward == 0.0:
            return reward, False
        done = max(self.agent_score, self.opponent_score) >= self.points_to_win
        if not done:
            self._serve()
        return reward, done

    def observe(self) -> np.ndarray:
        g = self.size
        obs = np.zeros(self.observation_shape, dtype=np.uint8)
        obs[0, self.ball_row, self.ball_col] = 255
        obs[1, self.paddle - 1:self.paddle + 2, g - 1] = 255
        obs[2, self.opponent, 0] = 255
        return obs
