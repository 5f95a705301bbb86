"""Function approximators shared by the agents.

QNetwork is a plain state -> per-action value network. NecNetwork is an
encoder feeding one DndTable per action; its training loss differentiates
through the table lookup into the encoder, while table values only change
through ``write``.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..core.exceptions import ContractViolationError, NotReadyError
from ..memory.dnd import DndTable, LookupResult
from ..numerics.graph import backward
from ..numerics.network import Network, forward
from ..numerics.optim import rmsprop_step


@dataclass(frozen=True)
class OptimizerConfig:
    learning_rate: float = 2.5e-4
    momentum: float = 0.95
    eps: float = 0.01
    eps_inside_sqrt: bool = False
    velocity: float = 0.0


def _check_batch(states, actions, targets):
    states = np.asarray(states, dtype=np.float64)
    actions = np.asarray(actions, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.float64)
    if len(actions) == 0:
        raise NotReadyError("empty batch")
    if not (len(states) == len(actions) == len(targets)):
        raise ContractViolationError(
            f"batch lengths differ: states {len(states)}, actions {len(actions)}, targets {len(targets)}"
        )
    return states, actions, targets


class QNetwork:
    def __init__(self, net: Network, optimizer: OptimizerConfig):
        self.net = net
        self.optimizer = optimizer

    @property
    def params(self):
        return self.net.params

    @property
    def action_count(self) -> int:
        return int(self.net.output_shape[0])

    def predict(self, states) -> np.ndarray:
        """(|A|,) for one state, (B, |A|) for a batch."""
        return self.net(states)

    __call__ = predict

    def loss(self, states, actions, targets) -> float:
        states, actions, targets = _check_batch(states, actions, targets)
        q = self.net(states)[np.arange(len(actions)), actions]
        return float(np.mean((targets - q) ** 2))

    def gradients(self, states, actions, targets):
        """mean((y - Q(s, a))^2) and its parameter gradients (also loaded into the ParamSet)."""
        states, actions, targets = _check_batch(states, actions, targets)
        fp = forward(self.net, states)
        picked = fp.graph.gather(fp.output_node, actions)
        loss = fp.graph.squared_error(picked, targets)
        grads = backward(fp.graph)
        return float(loss.value), grads

    def train(self, states, actions, targets) -> float:
        loss, _ = self.gradients(states, actions, targets)
        opt = self.optimizer
        rmsprop_step(
            self.net.params, opt.learning_rate, opt.momentum, opt.eps,
            eps_inside_sqrt=opt.eps_inside_sqrt, velocity=opt.velocity
        )
        return loss

    def clone(self) -> "QNetwork":
        return QNetwork(self.net.clone(), self.optimizer)


class NecNetwork:
    """Encoder h = f(s) plus one DND per action.

    An action whose table is still empty reads as 0. ``lookups`` and
    ``encodes`` count the DND queries and encoder passes made while
    acting and training; greedy evaluation passes ``count=False``. Every
    lookup refreshes the recency of its neighbours except those made by
    ``loss`` and by greedy evaluation.
    """

    def __init__(
        self,
        encoder: Network,
        tables: Sequence[DndTable],
        p_neighbors: int,
        optimizer: OptimizerConfig
    ):
        if encoder.output_shape != (tables[0].dim,):
            raise ContractViolationError(
                f"encoder output {encoder.output_shape} does not match table dim {tables[0].dim}"
            )
        self.encoder = encoder
        self.tables: List[DndTable] = list(tables)
        self.p_neighbors = p_neighbors
        self.optimizer = optimizer
        self.lookups = 0
        self.encodes = 0

    @property
    def params(self):
        return self.encoder.params

    @property
    def action_count(self) -> int:
        return len(self.tables)

    def embed(self, states, count: bool = True) -> np.ndarray:
        if count:
            self.encodes += 1
        return self.encoder(states)

    def _lookup(self, action: int, h: np.ndarray, refresh: bool, count: bool = True) -> Optional[LookupResult]:
        table = self.tables[action]
        if len(table) == 0:
            return None
        if count:
            self.lookups += 1
        return table.lookup(h, self.p_neighbors, refresh=refresh)

    def q_from_embedding(self, h: np.ndarray, refresh: bool = True, count: bool = True) -> np.ndarray:
        q = np.zeros(self.action_count)
        for a in range(self.action_count):
            result = self._lookup(a, h, refresh, count)
            if result is not None:
                q[a] = result.q
        return q

    def q_values(self, state, refresh: bool = True) -> np.ndarray:
        return self.q_from_embedding(self.embed(state), refresh=refresh)

    def predict(self, states, refresh: bool = True) -> np.ndarray:
        """(B, |A|) action values for a stacked batch of states."""
        embeddings = self.embed(states)
        return np.stack([self.q_from_embedding(h, refresh=refresh) for h in embeddings])

    def write(self, action: int, h: np.ndarray, target: float):
        return self.tables[action].write(h, target)

    def _graph(self, states, actions, targets, refresh: bool = True):
        states, actions, targets = _check_batch(states, actions, targets)
        fp = forward(self.encoder, states)
        self.encodes += 1
        # neighbour sets are fixed at the forward point
        results = [self._lookup(int(a), h, refresh=refresh) for a, h in zip(actions, fp.output)]

        def blend(hv):
            q = np.zeros(len(results))
            for i, result in enumerate(results):
                if result is None:
                    continue
                table = self.tables[actions[i]]
                idx = result.neighbor_indices
                k = 1.0 / (np.sum((table.keys[idx] - hv[i]) ** 2, axis=1) + table.delta)
                q[i] = (k / k.sum()) @ table.values[idx]
            return q

        def blend_vjp(g, hv):
            dh = np.zeros_like(hv)
            for i, result in enumerate(results):
                if result is None:
                    continue
                dh[i] = self.tables[actions[i]].result_grad(hv[i], result, upstream=float(g[i]))
            return dh

        q_node = fp.graph.custom(fp.output_node, blend, blend_vjp, op="dnd_lookup")
        loss = fp.graph.squared_error(q_node, targets)
        return fp.graph, loss

    def loss(self, states, actions, targets) -> float:
        _, loss = self._graph(states, actions, targets, refresh=False)
        return float(loss.value)

    def gradients(self, states, actions, targets):
        graph, loss = self._graph(states, actions, targets)
        return float(loss.value), backward(graph)

    def train(self, states, actions, targets) -> float:
        loss, _ = self.gradients(states, actions, targets)
        opt = self.optimizer
        rmsprop_step(
            self.encoder.params, opt.learning_rate, opt.momentum, opt.eps,
            eps_inside_sqrt=opt.eps_inside_sqrt, velocity=opt.velocity
        )
        return loss
