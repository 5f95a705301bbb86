"""Tape-based reverse-mode differentiation over float64 numpy arrays.

A ``ComputeGraph`` records every primitive in call order, so the tape is
already topologically sorted: ``backward`` walks it in reverse and each node
pushes its upstream gradient to its parents.
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..core.exceptions import ContractViolationError

BackwardFn = Callable[..., Tuple[Optional[np.ndarray], ...]]
ForwardFn = Callable[..., np.ndarray]


@dataclass(eq=False)
class Node:
    value: np.ndarray
    op: str
    parents: Tuple["Node", ...] = ()
    param: Optional[str] = None
    grad: Optional[np.ndarray] = None
    forward_fn: Optional[ForwardFn] = field(default=None, repr=False)
    backward_fn: Optional[BackwardFn] = field(default=None, repr=False)


class ComputeGraph:
    def __init__(self, param_set=None):
        self.nodes: List[Node] = []
        self.param_set = param_set

    def _leaf(self, value, op: str, param: Optional[str] = None) -> Node:
        node = Node(value=np.asarray(value, dtype=np.float64), op=op, param=param)
        self.nodes.append(node)
        return node

    def _record(self, op: str, forward_fn: ForwardFn, backward_fn: BackwardFn, *parents: Node) -> Node:
        value = forward_fn(*(p.value for p in parents))
        node = Node(
            value=value,
            op=op,
            parents=parents,
            forward_fn=forward_fn,
            backward_fn=backward_fn
        )
        self.nodes.append(node)
        return node

    # leaves

    def constant(self, value) -> Node:
        return self._leaf(value, "input")

    def parameter(self, name: str, value: np.ndarray) -> Node:
        # no copy: the node aliases the live parameter so replay sees the same data
        node = Node(value=value, op="param", param=name)
        self.nodes.append(node)
        return node

    # primitives

    def affine(self, x: Node, w: Node, b: Node) -> Node:
        def forward(xv, wv, bv):
            return xv @ wv + bv

        def backward(g, xv, wv, bv):
            return g @ wv.T, xv.T @ g, g.sum(axis=0)

        return self._record("affine", forward, backward, x, w, b)

    def relu(self, x: Node) -> Node:
        def forward(xv):
            return np.maximum(xv, 0.0)

        def backward(g, xv):
            return (g * (xv > 0.0),)

        return self._record("relu", forward, backward, x)

    def conv2d(self, x: Node, w: Node, b: Node, stride: int) -> Node:
        """Valid cross-correlation. x: (B, C, H, W), w: (O, C, kh, kw)."""
        kh, kw = w.value.shape[2], w.value.shape[3]

        def windows(xv):
            return sliding_window_view(xv, (kh, kw), axis=(2, 3))[:, :, ::stride, ::stride]

        def forward(xv, wv, bv):
            out = np.einsum("bchwij,ocij->bohw", windows(xv), wv)
            return out + bv[None, :, None, None]

        def backward(g, xv, wv, bv):
            dw = np.einsum("bchwij,bohw->ocij", windows(xv), g)
            db = g.sum(axis=(0, 2, 3))
            dx = np.zeros_like(xv)
            out_h, out_w = g.shape[2], g.shape[3]
            for i in range(kh):
                for j in range(kw):
                    dx[:, :, i:i + stride * (out_h - 1) + 1:stride, j:j + stride * (out_w - 1) + 1:stride] += (
                        np.einsum("bohw,oc->bchw", g, wv[:, :, i, j])
                    )
            return dx, dw, db

        return self._record("conv2d", forward, backward, x, w, b)

    def reshape(self, x: Node, shape: Sequence[int]) -> Node:
        shape = tuple(shape)

        def forward(xv):
            return xv.reshape(shape)

        def backward(g, xv):
            return (g.reshape(xv.shape),)

        return self._record("reshape", forward, backward, x)

    def gather(self, x: Node, indices: np.ndarray) -> Node:
        """Pick ``x[i, indices[i]]`` for every row i."""
        indices = np.asarray(indices, dtype=np.int64)
        rows = np.arange(len(indices))

        def forward(xv):
            return xv[rows, indices]

        def backward(g, xv):
            dx = np.zeros_like(xv)
            dx[rows, indices] = g
            return (dx,)

        return self._record("gather", forward, backward, x)

    def sum(self, x: Node) -> Node:
        def forward(xv):
            return np.asarray(xv.sum())

        def backward(g, xv):
            return (np.full_like(xv, g),)

        return self._record("sum", forward, backward, x)

    def squared_error(self, pred: Node, target) -> Node:
        """Scalar mean((target - pred)^2); ``target`` is held constant."""
        target = np.asarray(target, dtype=np.float64)

        def forward(pv):
            return np.asarray(np.mean((target - pv) ** 2))

        def backward(g, pv):
            return (g * 2.0 * (pv - target) / pv.size,)

        return self._record("squared_error", forward, backward, pred)

    def custom(self, x: Node, forward_fn: ForwardFn, vjp_fn: BackwardFn, op: str = "custom") -> Node:
        """Escape hatch for ops whose value and vector-Jacobian product live elsewhere."""
        return self._record(op, forward_fn, lambda g, xv: (vjp_fn(g, xv),), x)

    # replay

    def replay(self) -> np.ndarray:
        """Recompute every node from the leaves and return the terminal value."""
        if not self.nodes:
            raise ContractViolationError("cannot replay an empty graph")
        values: Dict[int, np.ndarray] = {}
        for node in self.nodes:
            if node.forward_fn is None:
                values[id(node)] = node.value
            else:
                values[id(node)] = node.forward_fn(*(values[id(p)] for p in node.parents))
        return values[id(self.nodes[-1])]


def backward(graph: ComputeGraph, loss_seed: float = 1.0) -> Dict[str, np.ndarray]:
    """Propagate ``loss_seed`` from the terminal node back to every parameter leaf.

    Parameters recorded on the graph but unreachable from the loss get zeros.
    When the graph was recorded against a ParamSet its grads are populated too.
    """
    if not graph.nodes:
        raise ContractViolationError("graph has no nodes")
    terminal = graph.nodes[-1]
    if np.ndim(terminal.value) != 0:
        raise ContractViolationError(f"graph terminates in shape {np.shape(terminal.value)}, expected a scalar")

    for node in graph.nodes:
        node.grad = None
    terminal.grad = np.asarray(loss_seed, dtype=np.float64)

    for node in reversed(graph.nodes):
        if node.grad is None or node.backward_fn is None:
            continue
        parent_grads = node.backward_fn(node.grad, *(p.value for p in node.parents))
        for parent, g in zip(node.parents, parent_grads):
            if g is None:
                continue
            parent.grad = g if parent.grad is None else parent.grad + g

    grads: Dict[str, np.ndarray] = {}
    for node in graph.nodes:
        if node.param is None:
            continue
        g = node.grad if node.grad is not None else np.zeros_like(node.value)
        grads[node.param] = g if node.param not in grads else grads[node.param] + g

    if graph.param_set is not None:
        graph.param_set.load_gradients(grads)
    return grads
