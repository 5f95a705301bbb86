from typing import Callable, Dict

import numpy as np

from ..core.exceptions import ContractViolationError
from .network import ParamSet


def finite_difference_grad(
    params: ParamSet,
    loss_fn: Callable[[ParamSet], float],
    step: float = 1e-5
) -> Dict[str, np.ndarray]:
    """Central differences of ``loss_fn`` w.r.t. every parameter entry.

    Parameters are perturbed in place and restored exactly.
    """
    if step <= 0:
        raise ContractViolationError(f"step must be positive, got {step}")
    grads: Dict[str, np.ndarray] = {}
    for name, theta in params.params.items():
        grad = np.zeros_like(theta)
        for idx in np.ndindex(*theta.shape):
            original = theta[idx]
            theta[idx] = original + step
            plus = float(loss_fn(params))
            theta[idx] = original - step
            minus = float(loss_fn(params))
            theta[idx] = original
            grad[idx] = (plus - minus) / (2.0 * step)
        grads[name] = grad
    return grads


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-8) -> float:
    """max |a - n| scaled by the larger of the two magnitudes."""
    scale = max(float(np.max(np.abs(analytic), initial=0.0)), float(np.max(np.abs(numeric), initial=0.0)), floor)
    return float(np.max(np.abs(analytic - numeric), initial=0.0)) / scale
