"""
Trajectory recorder for control-loop runs.
Stores one row per control window plus the window's bound sample.
"""

import logging
import math
from collections import deque
from dataclasses import astuple, dataclass, fields
from threading import Lock
from typing import List, Optional

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrajectoryRecord:
    """
    One control window.

    x and x_dot are the true state at the window start t; the estimates, fb and
    the kernel counts are the ones the controller used in this window.
    """
    t: float
    x: float
    x_dot: float
    est_x_xdot: float
    est_xdot: float
    fb: float
    u_cmd: float
    n_net_k1: float
    n_net_k2: float
    x_star: float
    xdot_star: float
    target: float

    def as_tuple(self) -> tuple:
        return astuple(self)


TRAJECTORY_HEADER = tuple(f.name for f in fields(TrajectoryRecord))


@dataclass(frozen=True)
class BoundSample:
    """
    Counts measured over one window together with the true state at its start.

    n1 / n2 are None when the pattern has no matching kernel. switched marks a
    window in which the pattern origin moved.
    """
    t: float
    x: float
    x_dot: float
    offset: float
    n1: Optional[float]
    n2: Optional[float]
    switched: bool = False


@dataclass
class MotionExtrema:
    """Running suprema of the motion, positions relative to the pattern origin."""
    v_max: float = 0.0
    a_max: float = 0.0
    x_lo: float = math.inf
    x_hi: float = -math.inf

    def update(self, rel_x: float, x_dot: float, x_ddot: float) -> None:
        self.v_max = max(self.v_max, abs(x_dot))
        self.a_max = max(self.a_max, abs(x_ddot))
        self.x_lo = min(self.x_lo, rel_x)
        self.x_hi = max(self.x_hi, rel_x)


class TrajectoryRecorder:
    """
    Thread-safe store of trajectory rows and bound samples.

    With max_rows set only the most recent rows are kept.
    """

    def __init__(self, max_rows: Optional[int] = None):
        self.max_rows = max_rows
        self.records: deque = deque(maxlen=max_rows)
        self.samples: deque = deque(maxlen=max_rows)
        self.lock = Lock()
        logger.debug(f"[RUNNER] TrajectoryRecorder initialized with max_rows={max_rows}")

    def add_record(self, record: TrajectoryRecord, sample: Optional[BoundSample] = None) -> None:
        with self.lock:
            self.records.append(record)
            if sample is not None:
                self.samples.append(sample)

    def get_records(self, limit: Optional[int] = None) -> List[TrajectoryRecord]:
        """
        Recorded rows, oldest first.

        Args:
            limit: Return only the last N rows
        """
        with self.lock:
            rows = list(self.records)
        if limit and limit < len(rows):
            rows = rows[-limit:]
        return rows

    def get_samples(self) -> List[BoundSample]:
        with self.lock:
            return list(self.samples)

    def clear(self) -> None:
        with self.lock:
            count = len(self.records)
            self.records.clear()
            self.samples.clear()
        logger.debug(f"[RUNNER] Cleared {count} trajectory rows")

    def get_stats(self) -> dict:
        with self.lock:
            return {
                "rows": len(self.records),
                "bound_samples": len(self.samples),
                "max_rows": self.max_rows,
            }
