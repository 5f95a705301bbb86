"""One-step bootstrap targets for the target-network baselines.

``target_net`` and ``online_net`` are callables mapping a stacked batch of
states to a (batch, |A|) array of action values.
"""
from typing import Callable

import numpy as np

QFunction = Callable[[np.ndarray], np.ndarray]


def dqn_targets(rewards, next_states, dones, gamma: float, target_net: QFunction) -> np.ndarray:
    """r + gamma * max_a Q(s', a; theta^-), zero bootstrap on terminal steps."""
    rewards = np.asarray(rewards, dtype=np.float64)
    not_done = 1.0 - np.asarray(dones, dtype=np.float64)
    next_q = np.asarray(target_net(np.asarray(next_states)), dtype=np.float64)
    return rewards + gamma * not_done * next_q.max(axis=1)


def double_dqn_targets(
    rewards,
    next_states,
    dones,
    gamma: float,
    online_net: QFunction,
    target_net: QFunction
) -> np.ndarray:
    """r + gamma * Q(s', argmax_a Q(s', a; theta); theta^-)."""
    rewards = np.asarray(rewards, dtype=np.float64)
    not_done = 1.0 - np.asarray(dones, dtype=np.float64)
    next_states = np.asarray(next_states)
    greedy = np.argmax(np.asarray(online_net(next_states)), axis=1)
    target_q = np.asarray(target_net(next_states), dtype=np.float64)
    evaluated = target_q[np.arange(len(greedy)), greedy]
    return rewards + gamma * not_done * evaluated


def dqn_target(r: float, s_next, gamma: float, target_net: QFunction, done: bool = False) -> float:
    return float(dqn_targets([r], np.asarray(s_next)[None], [done], gamma, target_net)[0])


def double_dqn_target(
    r: float,
    s_next,
    gamma: float,
    online_net: QFunction,
    target_net: QFunction,
    done: bool = False
) -> float:
    return float(double_dqn_targets([r], np.asarray(s_next)[None], [done], gamma, online_net, target_net)[0])
