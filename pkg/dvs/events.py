"""
Event records, canonical ordering and CSV export.

Streams are numpy structured arrays of EVENT_DTYPE so that windowing and
kernel masks stay vectorised; Event is the scalar view used in tests and logs.
"""

import csv
import logging
from pathlib import Path
from typing import Iterable, NamedTuple, Union

import numpy as np

logger = logging.getLogger(__name__)

EVENT_DTYPE = np.dtype([
    ("t_us", np.int64),
    ("u", np.int32),
    ("v", np.int32),
    ("p", np.int8),
])

EVENT_HEADER = ("t_us", "u", "v", "p")


class Event(NamedTuple):
    """One DVS event: pixel (u, v), polarity p in {-1, +1}, timestamp in microseconds."""
    u: int
    v: int
    p: int
    t_us: int


def empty_events() -> np.ndarray:
    return np.empty(0, dtype=EVENT_DTYPE)


def events_from_records(records: Iterable[Event]) -> np.ndarray:
    """Pack Event tuples into a structured array (order preserved)."""
    records = list(records)
    out = np.empty(len(records), dtype=EVENT_DTYPE)
    for i, e in enumerate(records):
        out[i] = (e.t_us, e.u, e.v, e.p)
    return out


def to_records(events: np.ndarray) -> list[Event]:
    return [Event(int(e["u"]), int(e["v"]), int(e["p"]), int(e["t_us"])) for e in events]


def concat_events(chunks: list[np.ndarray]) -> np.ndarray:
    if not chunks:
        return empty_events()
    return np.concatenate(chunks)


def canonical_sort(events: np.ndarray) -> np.ndarray:
    """
    Stable sort by (t_us, v, u, p).

    Args:
        events: Structured array of EVENT_DTYPE in any order

    Returns:
        New array in canonical order
    """
    if len(events) < 2:
        return events.copy()
    order = np.lexsort((events["p"], events["u"], events["v"], events["t_us"]))
    return events[order]


def is_canonical(events: np.ndarray) -> bool:
    return bool(np.array_equal(canonical_sort(events), events))


def write_events_csv(path: Union[str, Path], events: np.ndarray) -> Path:
    """
    Write an event stream with header t_us,u,v,p, one event per row.

    Args:
        path: Destination file
        events: Canonically sorted structured array

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EVENT_HEADER)
        writer.writerows(
            zip(events["t_us"].tolist(), events["u"].tolist(), events["v"].tolist(), events["p"].tolist())
        )
    logger.info(f"[DVS] ✓ Wrote {len(events)} events to {path}")
    return path


def read_events_csv(path: Union[str, Path]) -> np.ndarray:
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = np.empty(len(rows), dtype=EVENT_DTYPE)
    for i, row in enumerate(rows):
        out[i] = (int(row["t_us"]), int(row["u"]), int(row["v"]), int(row["p"]))
    return out
