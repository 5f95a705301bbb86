from .dnd import DndTable, KdTreeIndex, LookupResult, WriteOutcome, kernel, scan_neighbors
from .replay import ReplayBuffer, Trajectory, Transition, TransitionRecord, n_step_targets
