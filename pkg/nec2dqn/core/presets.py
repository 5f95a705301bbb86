"""Named experiment presets for the compare and sweep commands."""
from typing import Dict, List

# learning-speed comparison on MiniPong
SPEED_AGENTS: List[str] = ["nec2dqn", "nstep_dqn", "double_dqn"]
SPEED_THRESHOLD = 3.0
SPEED_BASE: Dict[str, object] = {"env": "minipong", "pong_grid_size": 12, "pong_points": 5}

# replay buffer size sweep, scaled down from 100k / 300k / 500k
SWEEP_CAPACITIES: List[int] = [300, 3000, 30_000]
SWEEP_BASE: Dict[str, object] = {"agent": "nec2dqn", "env": "minipong", "pong_grid_size": 12, "pong_points": 5}
# first checkpoint at or after this fraction of training
EARLY_FRACTION = 0.1

SPEED_PRESET = {"base": SPEED_BASE, "agents": SPEED_AGENTS, "threshold": SPEED_THRESHOLD}
SWEEP_PRESET = {"base": SWEEP_BASE, "capacities": SWEEP_CAPACITIES}

# speed and buffer are aliases
COMPARE_PRESETS = {"fig3": SPEED_PRESET, "speed": SPEED_PRESET}
SWEEP_PRESETS = {"fig45": SWEEP_PRESET, "buffer": SWEEP_PRESET}
