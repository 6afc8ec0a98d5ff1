"""
Dynamic vision sensor simulation.

Usage:
    from dvs import DvsConfig, PixelLatchArray

    latches = PixelLatchArray(intr, DvsConfig(C=0.2, mode="latched"), roi=[(540, 739, 100, 199)])
    latches.reset(pattern, x0=0.0)
    events = latches.step(pattern, x_new=0.001, t_us=500)
"""

from dvs.events import (
    EVENT_DTYPE,
    EVENT_HEADER,
    Event,
    canonical_sort,
    concat_events,
    empty_events,
    events_from_records,
    is_canonical,
    read_events_csv,
    to_records,
    write_events_csv,
)
from dvs.latch import DVS_MODES, IDEAL_FRACTIONAL, LATCHED, DvsConfig, PixelLatchArray

__all__ = [
    'EVENT_DTYPE',
    'EVENT_HEADER',
    'Event',
    'canonical_sort',
    'concat_events',
    'empty_events',
    'events_from_records',
    'is_canonical',
    'read_events_csv',
    'to_records',
    'write_events_csv',
    'DVS_MODES',
    'IDEAL_FRACTIONAL',
    'LATCHED',
    'DvsConfig',
    'PixelLatchArray',
]
