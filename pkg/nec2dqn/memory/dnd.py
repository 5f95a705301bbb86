"""Differentiable Neural Dictionary: one key/value table per action.

Lookup weights the values of the p nearest keys by the inverse-distance kernel
k(h, h_i) = 1 / (||h - h_i||^2 + delta). Writes either move a matching value
toward the target by ``alpha`` or store a new entry, overwriting the least
recently referenced slot once the table is full.
"""
from dataclasses import dataclass
from typing import Literal, NamedTuple, Optional

import numpy as np
from scipy.spatial import cKDTree

from ..core.exceptions import ContractViolationError, EmptyTableError


MATCH_TOL = 1e-12

IndexKind = Literal["scan", "kdtree"]


def kernel(h: np.ndarray, hi: np.ndarray, delta: float) -> float:
    h = np.asarray(h, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    if h.shape != hi.shape:
        raise ContractViolationError(f"embedding shapes differ: {h.shape} vs {hi.shape}")
    if delta <= 0:
        raise ContractViolationError(f"delta must be positive, got {delta}")
    return 1.0 / (float(np.sum((h - hi) ** 2)) + delta)


@dataclass
class LookupResult:
    q: float
    neighbor_indices: np.ndarray
    weights: np.ndarray
    kernels: np.ndarray


class WriteOutcome(NamedTuple):
    index: int
    kind: Literal["update", "append", "evict"]


def scan_neighbors(keys: np.ndarray, h: np.ndarray, p: int) -> np.ndarray:
    """Exhaustive k-NN: smallest squared distances, ties to the lower index, sorted."""
    d = np.sum((keys - h) ** 2, axis=1)
    n = len(d)
    if p >= n:
        return np.lexsort((np.arange(n), d))
    kth = np.partition(d, p - 1)[p - 1]
    less = np.flatnonzero(d < kth)
    equal = np.flatnonzero(d == kth)[: p - len(less)]
    chosen = np.concatenate([less, equal])
    return chosen[np.lexsort((chosen, d[chosen]))]


class KdTreeIndex:
    """cKDTree over the live keys, rebuilt lazily after the table changes."""

    def __init__(self):
        self._tree: Optional[cKDTree] = None

    def invalidate(self) -> None:
        self._tree = None

    def query(self, keys: np.ndarray, h: np.ndarray, p: int) -> np.ndarray:
        if self._tree is None:
            self._tree = cKDTree(keys)
        k = min(p, len(keys))
        _, idx = self._tree.query(h, k=k)
        idx = np.atleast_1d(np.asarray(idx, dtype=np.int64))
        # the tree may return any of several keys tied at the k-th distance;
        # widen to every key that close and re-rank as the scan does
        reach = float(np.max(np.sum((keys[idx] - h) ** 2, axis=1)))
        radius = np.sqrt(reach) * (1.0 + 1e-9) + 1e-12
        candidates = np.asarray(self._tree.query_ball_point(h, radius), dtype=np.int64)
        d = np.sum((keys[candidates] - h) ** 2, axis=1)
        return candidates[np.lexsort((candidates, d))][:k]


class DndTable:
    def __init__(
        self,
        dim: int,
        capacity: int,
        delta: float = 1e-3,
        alpha: float = 0.1,
        match_tol: float = MATCH_TOL,
        index: IndexKind = "scan"
    ):
        if dim <= 0 or capacity <= 0:
            raise ContractViolationError(f"dim and capacity must be positive, got {dim}, {capacity}")
        if delta <= 0:
            raise ContractViolationError(f"delta must be positive, got {delta}")
        if not 0.0 < alpha <= 1.0:
            raise ContractViolationError(f"alpha must lie in (0, 1], got {alpha}")
        self.dim = dim
        self.capacity = capacity
        self.delta = delta
        self.alpha = alpha
        self.match_tol = match_tol
        self.index_kind = index
        self.size = 0
        self.tick = 0
        self._kdtree = KdTreeIndex() if index == "kdtree" else None
        allocated = min(capacity, 64)
        self._keys = np.zeros((allocated, dim))
        self._values = np.zeros(allocated)
        self._recency = np.zeros(allocated, dtype=np.int64)

    def __len__(self) -> int:
        return self.size

    @property
    def keys(self) -> np.ndarray:
        return self._keys[: self.size]

    @property
    def values(self) -> np.ndarray:
        return self._values[: self.size]

    @property
    def recency(self) -> np.ndarray:
        return self._recency[: self.size]

    def _check(self, h) -> np.ndarray:
        h = np.asarray(h, dtype=np.float64)
        if h.shape != (self.dim,):
            raise ContractViolationError(f"embedding shape {h.shape} != ({self.dim},)")
        return h

    def _next_tick(self) -> int:
        self.tick += 1
        return self.tick

    def _grow(self) -> None:
        allocated = min(self.capacity, 2 * len(self._values))
        keys = np.zeros((allocated, self.dim))
        values = np.zeros(allocated)
        recency = np.zeros(allocated, dtype=np.int64)
        keys[: self.size] = self.keys
        values[: self.size] = self.values
        recency[: self.size] = self.recency
        self._keys, self._values, self._recency = keys, values, recency

    def _changed(self) -> None:
        if self._kdtree is not None:
            self._kdtree.invalidate()

    def knn(self, h, p: int, refresh: bool = True) -> np.ndarray:
        """Indices of the min(p, size) nearest keys; stamps them as referenced."""
        h = self._check(h)
        if p < 1:
            raise ContractViolationError(f"p must be positive, got {p}")
        if self.size == 0:
            raise EmptyTableError("lookup before the first write")
        if self._kdtree is not None:
            idx = self._kdtree.query(self.keys, h, p)
        else:
            idx = scan_neighbors(self.keys, h, p)
        if refresh:
            self._recency[idx] = self._next_tick()
        return idx

    def lookup(self, h, p: int, refresh: bool = True) -> LookupResult:
        h = self._check(h)
        idx = self.knn(h, p, refresh=refresh)
        k = 1.0 / (np.sum((self._keys[idx] - h) ** 2, axis=1) + self.delta)
        weights = k / k.sum()
        neighbor_values = self._values[idx]
        q = float(weights @ neighbor_values)
        # rounding in the weighted sum may step a hair outside the hull
        q = min(max(q, float(neighbor_values.min())), float(neighbor_values.max()))
        return LookupResult(q=q, neighbor_indices=idx, weights=weights, kernels=k)

    def result_grad(self, h, result: LookupResult, upstream: float = 1.0) -> np.ndarray:
        """d q / d h with the neighbour set of ``result`` held fixed.

        dq/dh = (1/K) * sum_i (v_i - q) * dk_i/dh,  dk_i/dh = -2 k_i^2 (h - h_i)
        """
        h = self._check(h)
        idx = result.neighbor_indices
        k = result.kernels
        total = k.sum()
        v = self._values[idx]
        q = float((k / total) @ v)
        dk = -2.0 * (k ** 2)[:, None] * (h - self._keys[idx])
        return upstream * ((v - q) @ dk) / total

    def lookup_grad(self, h, p: int, upstream: float = 1.0) -> np.ndarray:
        result = self.lookup(h, p, refresh=False)
        return self.result_grad(h, result, upstream)

    def evict_index(self) -> int:
        """Slot holding the smallest recency stamp (lowest index on ties)."""
        return int(np.argmin(self.recency))

    def write(self, h, q_target: float) -> WriteOutcome:
        h = self._check(h)
        q_target = float(q_target)
        if self.size > 0:
            d = np.sum((self.keys - h) ** 2, axis=1)
            nearest = int(np.argmin(d))
            if d[nearest] <= self.match_tol:
                self._values[nearest] += self.alpha * (q_target - self._values[nearest])
                self._recency[nearest] = self._next_tick()
                return WriteOutcome(nearest, "update")

        if self.size < self.capacity:
            if self.size == len(self._values):
                self._grow()
            slot = self.size
            self.size += 1
            kind = "append"
        else:
            slot = self.evict_index()
            kind = "evict"
        self._keys[slot] = h
        self._values[slot] = q_target
        self._recency[slot] = self._next_tick()
        self._changed()
        return WriteOutcome(slot, kind)

    # snapshot support

    def state(self) -> dict:
        return {
            "dim": self.dim,
            "size": self.size,
            "capacity": self.capacity,
            "delta": self.delta,
            "alpha": self.alpha,
            "tick": self.tick,
            "keys": self.keys.copy(),
            "values": self.values.copy(),
            "recency": self.recency.copy(),
        }

    @classmethod
    def from_state(cls, state: dict, index: IndexKind = "scan") -> "DndTable":
        table = cls(
            dim=int(state["dim"]),
            capacity=int(state["capacity"]),
            delta=float(state["delta"]),
            alpha=float(state["alpha"]),
            index=index
        )
        size = int(state["size"])
        table._keys = np.zeros((max(size, 1), table.dim))
        table._values = np.zeros(max(size, 1))
        table._recency = np.zeros(max(size, 1), dtype=np.int64)
        table._keys[:size] = np.asarray(state["keys"], dtype=np.float64).reshape(size, table.dim)
        table._values[:size] = state["values"]
        table._recency[:size] = state["recency"]
        table.size = size
        table.tick = int(state["tick"])
        return table
