from .base import Env, StepResult
from .chain import ChainEnv
from .gridworld import LAYOUTS, GridworldEnv
from .minipong import MiniPongEnv
from .preprocessing import FrameStack, preprocess
