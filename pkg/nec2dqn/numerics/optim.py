import numpy as np

from ..core.exceptions import ContractViolationError
from .network import ParamSet


def rmsprop_step(
    params: ParamSet,
    lr: float,
    momentum: float,
    eps: float,
    *,
    eps_inside_sqrt: bool = False,
    velocity: float = 0.0
) -> ParamSet:
    """One RMSProp update, in place, then clear gradients.

    acc <- momentum * acc + (1 - momentum) * g^2
    theta <- theta - lr * g / (sqrt(acc) + eps)

    ``momentum`` is the squared-gradient decay rate.
    ``eps_inside_sqrt`` switches the denominator to sqrt(acc + eps).
    ``velocity`` > 0 adds a heavy-ball buffer over the normalised step.
    """
    missing = [name for name, g in params.grads.items() if g is None]
    if missing:
        raise ContractViolationError(f"gradients not populated for {missing}")

    for name, theta in params.params.items():
        g = params.grads[name]
        acc = params.square_avg[name]
        acc *= momentum
        acc += (1.0 - momentum) * g * g
        denom = np.sqrt(acc + eps) if eps_inside_sqrt else np.sqrt(acc) + eps
        step = g / denom
        if velocity > 0.0:
            buf = params.velocity[name]
            buf *= velocity
            buf += step
            step = buf
        theta -= lr * step

    params.clear_gradients()
    return params
