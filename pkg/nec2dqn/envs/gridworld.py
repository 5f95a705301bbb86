from collections import deque
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

import numpy as np

from ..agents.tabular import TabularMdp
from ..core.exceptions import ConfigError
from .base import Env

Cell = Tuple[int, int]

UP, DOWN, LEFT, RIGHT = 0, 1, 2, 3
MOVES = {UP: (-1, 0), DOWN: (1, 0), LEFT: (0, -1), RIGHT: (0, 1)}

# named layouts selectable from a run config
LAYOUTS: Dict[str, dict] = {
    "open": {"width": 5, "height": 5, "walls": (), "goal": (4, 4), "trap": None},
    "trap": {"width": 5, "height": 5, "walls": ((1, 1), (1, 2), (1, 3)), "goal": (4, 4), "trap": (3, 4)},
    "rooms": {
        "width": 7,
        "height": 7,
        "walls": tuple((r, 3) for r in range(7) if r != 3),
        "goal": (6, 6),
        "trap": (0, 6),
    },
}


class GridworldEnv(Env):
    """Sparse-reward grid: +1 at the goal, -1 at the trap, 0 elsewhere.

    Moving into a wall or off the grid leaves the agent in place.
    Observation planes: agent, walls, goal, trap.
    """

    action_count = 4

    def __init__(
        self,
        width: int,
        height: int,
        walls: Iterable[Cell] = (),
        goal: Cell = (0, 1),
        trap: Optional[Cell] = None,
        start: Cell = (0, 0)
    ):
        super().__init__()
        self.width = width
        self.height = height
        self.walls: FrozenSet[Cell] = frozenset(tuple(w) for w in walls)
        self.goal = tuple(goal)
        self.trap = tuple(trap) if trap is not None else None
        self.start = tuple(start)
        self._validate()
        self.observation_shape = (4, height, width)
        self.max_steps = 4 * width * height
        self.position = self.start

    @classmethod
    def from_layout(cls, name: str) -> "GridworldEnv":
        if name not in LAYOUTS:
            raise ConfigError("gridworld_layout", f"unknown layout {name!r}; choose from {sorted(LAYOUTS)}")
        return cls(**LAYOUTS[name])

    def _inside(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.height and 0 <= cell[1] < self.width

    def _validate(self) -> None:
        if self.width < 1 or self.height < 1 or self.width * self.height < 2:
            raise ConfigError("gridworld", f"grid {self.height}x{self.width} is too small")
        for name, cell in (("start", self.start), ("goal", self.goal), ("trap", self.trap)):
            if cell is None:
                continue
            if not self._inside(cell):
                raise ConfigError(name, f"{cell} lies outside the {self.height}x{self.width} grid")
            if cell in self.walls:
                raise ConfigError(name, f"{cell} is a wall")
        if self.goal == self.trap:
            raise ConfigError("trap", "goal and trap coincide")
        if self.start in (self.goal, self.trap):
            raise ConfigError("start", "start must not be terminal")
        if self.shortest_path_length() is None:
            raise ConfigError("goal", f"goal {self.goal} is unreachable from {self.start}")

    def _move(self, cell: Cell, action: int) -> Cell:
        dr, dc = MOVES[action]
        nxt = (cell[0] + dr, cell[1] + dc)
        if not self._inside(nxt) or nxt in self.walls:
            return cell
        return nxt

    def shortest_path_length(self) -> Optional[int]:
        """Fewest steps from start to goal without entering the trap."""
        frontier = deque([(self.start, 0)])
        seen = {self.start}
        while frontier:
            cell, dist = frontier.popleft()
            if cell == self.goal:
                return dist
            if cell == self.trap:
                continue
            for action in MOVES:
                nxt = self._move(cell, action)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append((nxt, dist + 1))
        return None

    @property
    def state_count(self) -> Optional[int]:
        return self.width * self.height

    @property
    def state_index(self) -> Optional[int]:
        return self.position[0] * self.width + self.position[1]

    def _reset(self) -> None:
        self.position = self.start

    def _step(self, action: int) -> Tuple[float, bool]:
        self.position = self._move(self.position, action)
        if self.position == self.goal:
            return 1.0, True
        if self.position == self.trap:
            return -1.0, True
        return 0.0, False

    def observe(self) -> np.ndarray:
        obs = np.zeros(self.observation_shape, dtype=np.uint8)
        obs[0][self.position] = 255
        for cell in self.walls:
            obs[1][cell] = 255
        obs[2][self.goal] = 255
        if self.trap is not None:
            obs[3][self.trap] = 255
        return obs

    def to_mdp(self, gamma: float) -> TabularMdp:
        """Induced MDP over cells plus one absorbing terminal state (last index)."""
        n = self.width * self.height
        terminal = n
        transitions = np.zeros((n + 1, 4, n + 1))
        rewards = np.zeros((n + 1, 4))
        for r in range(self.height):
            for c in range(self.width):
                s = r * self.width + c
                if (r, c) in self.walls or (r, c) in (self.goal, self.trap):
                    transitions[s, :, terminal] = 1.0
                    continue
                for action in MOVES:
                    nxt = self._move((r, c), action)
                    if nxt == self.goal:
                        transitions[s, action, terminal] = 1.0
                        rewards[s, action] = 1.0
                    elif nxt == self.trap:
                        transitions[s, action, terminal] = 1.0
                        rewards[s, action] = -1.0
                    else:
                        transitions[s, action, nxt[0] * self.width + nxt[1]] = 1.0
        transitions[terminal, :, terminal] = 1.0
        return TabularMdp(transitions=transitions, rewards=rewards, gamma=gamma)
