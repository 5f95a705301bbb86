from pathlib import Path
from typing import Dict, List, Optional
import json
import logging

import backoff
import numpy as np
import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq

from ...core.exceptions import ContractViolationError
from ...memory.dnd import DndTable
from ...memory.replay import ReplayBuffer, Transition, TransitionRecord
from ...numerics.network import ParamSet
from ..client import ensure_dir

logger = logging.getLogger(__name__)

NETWORKS_FILE = "networks.csv"
REPLAY_FILE = "replay.parquet"
STATE_FILE = "state.json"
OPTIMIZER_SLOTS = ("square_avg", "velocity")

def _encode_array(value: np.ndarray) -> Dict[str, str]:
    return {
        "shape": "x".join(str(d) for d in value.shape),
        "values": " ".join(repr(float(v)) for v in np.ravel(value)),
    }

def _decode_array(shape: str, values) -> np.ndarray:
    dims = tuple(int(d) for d in str(shape).split("x")) if isinstance(shape, str) and shape else ()
    flat = np.array([float(v) for v in str(values).split()] if isinstance(values, str) else [], dtype=np.float64)
    return flat.reshape(dims)

class CheckpointRepository:
    """Agent snapshots under a run's checkpoint/ directory.

    networks.csv holds every ParamSet (rows ``<set>/<param>`` plus
    ``<set>/<param>@square_avg`` and ``@velocity``), each DND table goes to
    ``dnd-<action>.parquet``, the replay buffer to replay.parquet and the
    scalar state to state.json, which is written last.
    """

    @backoff.on_exception(
        backoff.expo,
        OSError,
        max_tries=3,
        max_time=30
    )
    def _write_text(self, path: Path, text: str) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(text, encoding="utf-8")
        tmp.replace(path)

    @backoff.on_exception(
        backoff.expo,
        OSError,
        max_tries=3,
        max_time=30
    )
    def _write_parquet(self, table: pa.Table, path: Path) -> None:
        pq.write_table(table, path)

    # networks

    def save_params(self, path: Path, param_sets: Dict[str, ParamSet]) -> None:
        rows = []
        for set_name, params in param_sets.items():
            for name, value in params.params.items():
                rows.append({"name": f"{set_name}/{name}", **_encode_array(value)})
                for slot in OPTIMIZER_SLOTS:
                    rows.append({"name": f"{set_name}/{name}@{slot}", **_encode_array(getattr(params, slot)[name])})
        frame = pd.DataFrame(rows, columns=["name", "shape", "values"])
        self._write_text(path, frame.to_csv(index=False, lineterminator="\n"))

    def load_params(self, path: Path, param_sets: Dict[str, ParamSet]) -> None:
        """Copy saved values into the live ParamSets, in place."""
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
        arrays = {row.name: _decode_array(row.shape, row.values) for row in frame.itertuples(index=False)}
        for set_name, params in param_sets.items():
            for name in params.params:
                key = f"{set_name}/{name}"
                if key not in arrays:
                    raise ContractViolationError(f"checkpoint has no entry for {key}")
                params.params[name][...] = arrays[key]
                for slot in OPTIMIZER_SLOTS:
                    getattr(params, slot)[name][...] = arrays[f"{key}@{slot}"]

    # DND tables

    def save_dnd(self, path: Path, table: DndTable) -> None:
        state = table.state()
        arrow = pa.table({
            "key": pa.array([list(k) for k in state["keys"]], type=pa.list_(pa.float64())),
            "value": pa.array(state["values"], type=pa.float64()),
            "recency": pa.array(state["recency"], type=pa.int64()),
        })
        header = {name: str(state[name]) for name in ("dim", "size", "capacity", "delta", "alpha", "tick")}
        arrow = arrow.replace_schema_metadata({k: v.encode() for k, v in header.items()})
        self._write_parquet(arrow, path)

    def load_dnd(self, path: Path, index: str = "scan") -> DndTable:
        arrow = pq.read_table(path)
        header = {k.decode(): v.decode() for k, v in (arrow.schema.metadata or {}).items()}
        dim = int(header["dim"])
        keys = arrow.column("key").to_pylist()
        state = {
            "dim": dim,
            "size": int(header["size"]),
            "capacity": int(header["capacity"]),
            "delta": float(header["delta"]),
            "alpha": float(header["alpha"]),
            "tick": int(header["tick"]),
            "keys": np.array(keys, dtype=np.float64).reshape(len(keys), dim),
            "values": np.array(arrow.column("value").to_pylist(), dtype=np.float64),
            "recency": np.array(arrow.column("recency").to_pylist(), dtype=np.int64),
        }
        return DndTable.from_state(state, index=index)

    # replay buffer

    def save_replay(self, path: Path, buffer: ReplayBuffer) -> None:
        records = buffer.buffer
        kind = "transition" if records and isinstance(records[0], Transition) else "record"
        state_shape = list(np.shape(records[0].state)) if records else []
        columns = {
            "state": pa.array([np.ravel(r.state).tolist() for r in records], type=pa.list_(pa.float64())),
            "action": pa.array([r.action for r in records], type=pa.int64()),
        }
        if kind == "transition":
            columns["reward"] = pa.array([r.reward for r in records], type=pa.float64())
            columns["next_state"] = pa.array(
                [np.ravel(r.next_state).tolist() for r in records], type=pa.list_(pa.float64())
            )
            columns["done"] = pa.array([bool(r.done) for r in records], type=pa.bool_())
        else:
            columns["target"] = pa.array([r.target for r in records], type=pa.float64())
        header = {
            "capacity": str(buffer.capacity),
            "cursor": str(buffer.position),
            "kind": kind,
            "state_shape": json.dumps(state_shape),
        }
        arrow = pa.table(columns).replace_schema_metadata({k: v.encode() for k, v in header.items()})
        self._write_parquet(arrow, path)

    def load_replay(self, path: Path) -> ReplayBuffer:
        arrow = pq.read_table(path)
        header = {k.decode(): v.decode() for k, v in (arrow.schema.metadata or {}).items()}
        shape = tuple(json.loads(header["state_shape"]))
        buffer: ReplayBuffer = ReplayBuffer(int(header["capacity"]))
        data = arrow.to_pydict()

        def as_state(flat) -> np.ndarray:
            return np.array(flat, dtype=np.float64).reshape(shape)

        records: List = []
        for i in range(arrow.num_rows):
            if header["kind"] == "transition":
                records.append(Transition(
                    state=as_state(data["state"][i]),
                    action=int(data["action"][i]),
                    reward=float(data["reward"][i]),
                    next_state=as_state(data["next_state"][i]),
                    done=bool(data["done"][i])
                ))
            else:
                records.append(TransitionRecord(
                    state=as_state(data["state"][i]),
                    action=int(data["action"][i]),
                    target=float(data["target"][i])
                ))
        buffer.buffer = records
        buffer.position = int(header["cursor"])
        return buffer

    # whole agent

    def save(self, checkpoint_dir: Path, agent, extra: Optional[dict] = None) -> None:
        try:
            ensure_dir(checkpoint_dir)
            self.save_params(checkpoint_dir / NETWORKS_FILE, agent.param_sets())
            for action, table in enumerate(agent.dnd_tables()):
                self.save_dnd(checkpoint_dir / f"dnd-{action}.parquet", table)
            buffer = agent.replay_buffer()
            if buffer is not None:
                self.save_replay(checkpoint_dir / REPLAY_FILE, buffer)
            state = {"agent": agent.scalar_state(), "extra": extra or {}}
            self._write_text(checkpoint_dir / STATE_FILE, json.dumps(state, indent=2, sort_keys=True))
            logger.info(f"Checkpoint written at step {agent.global_step}: {checkpoint_dir}")
        except Exception as e:
            logger.error(f"Error writing checkpoint to {checkpoint_dir}: {str(e)}")
            raise

    def exists(self, checkpoint_dir: Path) -> bool:
        return (checkpoint_dir / STATE_FILE).exists()

    def load(self, checkpoint_dir: Path, agent, index: str = "scan") -> dict:
        """Restore ``agent`` in place; returns the harness state saved alongside it."""
        try:
            state = json.loads((checkpoint_dir / STATE_FILE).read_text(encoding="utf-8"))
            if state["agent"]["kind"] != agent.kind:
                raise ContractViolationError(
                    f"checkpoint holds a {state['agent']['kind']} agent, not {agent.kind}"
                )
            self.load_params(checkpoint_dir / NETWORKS_FILE, agent.param_sets())
            tables = agent.dnd_tables()
            for action in range(len(tables)):
                tables[action] = self.load_dnd(checkpoint_dir / f"dnd-{action}.parquet", index=index)
            buffer = agent.replay_buffer()
            if buffer is not None:
                saved = self.load_replay(checkpoint_dir / REPLAY_FILE)
                buffer.buffer = saved.buffer
                buffer.position = saved.position
            agent.load_scalar_state(state["agent"])
            logger.info(f"Checkpoint restored at step {agent.global_step}: {checkpoint_dir}")
            return state["extra"]
        except Exception as e:
            logger.error(f"Error restoring checkpoint from {checkpoint_dir}: {str(e)}")
            raise

checkpoint_repository = CheckpointRepository()
