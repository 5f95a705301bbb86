from typing import Sequence

import numpy as np

from ..core.exceptions import ShapeMismatchError

MAX_INTENSITY = 255.0


def preprocess(obs: np.ndarray, expected_shape: Sequence[int]) -> np.ndarray:
    """uint8 planes -> float64 in [0, 1]."""
    obs = np.asarray(obs)
    if obs.shape != tuple(expected_shape):
        raise ShapeMismatchError(f"observation shape {obs.shape} != declared {tuple(expected_shape)}")
    return obs.astype(np.float64) / MAX_INTENSITY


class FrameStack:
    """The last ``depth`` preprocessed frames, oldest first, zero-padded after reset."""

    def __init__(self, frame_shape: Sequence[int], depth: int = 4):
        self.frame_shape = tuple(frame_shape)
        self.depth = depth
        self.frames = np.zeros((depth, *self.frame_shape))

    @property
    def shape(self):
        return (self.depth, *self.frame_shape)

    def reset(self, obs: np.ndarray) -> np.ndarray:
        self.frames[...] = 0.0
        return self.stack(obs)

    def stack(self, obs: np.ndarray) -> np.ndarray:
        frame = preprocess(obs, self.frame_shape)
        self.frames[:-1] = self.frames[1:]
        self.frames[-1] = frame
        return self.frames.copy()
