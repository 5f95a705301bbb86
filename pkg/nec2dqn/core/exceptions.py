from typing import Optional


class Nec2DqnError(Exception):
    """Base class for every error raised by the library."""


class ContractViolationError(Nec2DqnError, ValueError):
    """A caller broke an operation's precondition."""


class ShapeMismatchError(ContractViolationError):
    """Input tensor shape does not match the declared shape."""


class EmptyTableError(Nec2DqnError, LookupError):
    """Lookup on a DND table that has never been written."""


class NotReadyError(Nec2DqnError):
    """Not enough data yet (replay warmup, empty batch). Callers skip the step."""


class EnvFaultError(Nec2DqnError, RuntimeError):
    """The environment was driven outside its contract."""


class EpisodeAbortedError(Nec2DqnError, RuntimeError):
    def __init__(self, message: str, episode: int, step: int, action: Optional[int] = None):
        super().__init__(f"{message} (episode={episode}, step={step}, action={action})")
        self.episode = episode
        self.step = step
        self.action = action


class ConfigError(Nec2DqnError, ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
