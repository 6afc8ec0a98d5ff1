"""Net event counts over a kernel and a counting window."""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from estimator.kernels import Kernel

logger = logging.getLogger(__name__)

Window = Tuple[int, int]


@dataclass(frozen=True)
class NetCount:
    """
    Positive, negative and net counts of one kernel over [t_start_us, t_end_us).

    n_net is an integer in latched mode and real-valued for fractional counts.
    n_credit is the reversal credit of the window (zero for fractional counts).
    """
    n_pos: float
    n_neg: float
    n_net: float
    t_start_us: int
    t_end_us: int
    n_credit: float = 0.0

    @property
    def window(self) -> Window:
        return (self.t_start_us, self.t_end_us)

    @property
    def compensated(self) -> float:
        """Net count with the reversal credit added."""
        return self.n_net + self.n_credit

    def negated(self) -> "NetCount":
        return NetCount(self.n_neg, self.n_pos, -self.n_net, self.t_start_us, self.t_end_us, -self.n_credit)


def net_value(count: Union[NetCount, float]) -> float:
    return count.n_net if isinstance(count, NetCount) else float(count)


def compensated_value(count: Union[NetCount, float]) -> float:
    """Count used for estimation: n_net plus reversal credit."""
    return count.compensated if isinstance(count, NetCount) else float(count)


class ReversalCredit:
    """
    Last event polarity of every pixel of one kernel.

    A latched pixel that turns around has to travel its carried residual plus
    a whole threshold before it fires again, so every stroke loses one event
    on average. The first event after a polarity change is therefore counted
    twice; over a stroke the credited count equals the crossed log-intensity
    change divided by C up to a zero-mean residual term.
    """

    def __init__(self, kernel: Kernel):
        self.kernel = kernel
        self.last = np.zeros(kernel.n_pixels, dtype=np.int8)

    def reset(self) -> None:
        self.last[:] = 0

    def credit(self, events: np.ndarray) -> int:
        """
        Credit for one window of kernel events and update the polarity memory.

        Args:
            events: Events inside the kernel, canonically sorted

        Returns:
            Sum of the polarities of the events that reverse their pixel
        """
        if len(events) == 0:
            return 0
        pixel = ((events["v"] - self.kernel.v_min).astype(np.int64) * self.kernel.N_u
                 + (events["u"] - self.kernel.u_min))
        order = np.argsort(pixel, kind="stable")
        pixel = pixel[order]
        p = events["p"][order].astype(np.int64)

        first = np.ones(len(pixel), dtype=bool)
        first[1:] = pixel[1:] != pixel[:-1]
        last = np.ones(len(pixel), dtype=bool)
        last[:-1] = first[1:]

        previous = np.empty_like(p)
        previous[1:] = p[:-1]
        previous[first] = self.last[pixel[first]]
        reversal = (previous != 0) & (previous != p)

        self.last[pixel[last]] = p[last]
        return int(p[reversal].sum())


def net_event_count(events: np.ndarray, kernel: Kernel, window: Window,
                    credit: Optional[ReversalCredit] = None) -> NetCount:
    """
    Count the events of a kernel within a window.

    Args:
        events: Canonically sorted structured event array
        kernel: Kernel to count over
        window: [t_start_us, t_end_us) in microseconds
        credit: Polarity memory of the kernel; windows must be counted in order

    Returns:
        NetCount with integer counts
    """
    t_start, t_end = window
    lo = np.searchsorted(events["t_us"], t_start, side="left")
    hi = np.searchsorted(events["t_us"], t_end, side="left")
    chunk = events[lo:hi]
    inside = chunk[kernel.contains(chunk["u"], chunk["v"])]
    p = inside["p"]
    n_pos = int(np.count_nonzero(p > 0))
    n_neg = int(np.count_nonzero(p < 0))
    n_credit = credit.credit(inside) if credit is not None else 0
    return NetCount(n_pos, n_neg, n_pos - n_neg, int(t_start), int(t_end), n_credit)


def fractional_net_count(fractional: np.ndarray, u: np.ndarray, v: np.ndarray,
                         kernel: Kernel, window: Window) -> NetCount:
    """
    Net count from per-pixel fractional counts accumulated over one window.

    Args:
        fractional: Per-pixel fractional counts (PixelLatchArray.take_fractional)
        u, v: Pixel indices matching fractional
        kernel: Kernel to count over
        window: The window the counts were accumulated over

    Returns:
        NetCount with real-valued counts
    """
    values = fractional[kernel.contains(u, v)]
    n_pos = float(values[values > 0].sum())
    n_neg = float(-values[values < 0].sum())
    return NetCount(n_pos, n_neg, float(values.sum()), int(window[0]), int(window[1]))
