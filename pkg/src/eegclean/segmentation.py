"""Trial detection from the trigger channel."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, TriggerStructureError
from .model import Recording

__all__ = ["TriggerEvents", "detect_triggers", "segment"]


@dataclass(frozen=True)
class TriggerEvents:
    rising_edges: tuple[int, ...]
    threshold: float

    def __post_init__(self):
        edges = tuple(int(e) for e in self.rising_edges)
        for a, b in zip(edges, edges[1:]):
            if b <= a:
                raise TriggerStructureError(
                    f"rising edges must be strictly increasing, got {a} then {b}")
        object.__setattr__(self, "rising_edges", edges)


def detect_triggers(trigger: np.ndarray, sample_rate: float,
                    debounce_s: float = 0.1) -> TriggerEvents:
    """Upward threshold crossings of the trigger channel, debounced.

    The threshold sits at mid-range of the signal. Crossings closer than
    ``debounce_s`` to the previous accepted edge are treated as chatter on
    the same pulse and dropped.
    """
    trigger = np.asarray(trigger, dtype=np.float64)
    if trigger.size == 0:
        raise DegenerateDataError("empty trigger signal")
    lo, hi = trigger.min(), trigger.max()
    if lo == hi:
        raise DegenerateDataError("trigger signal is flat, no events to detect")
    threshold = (lo + hi) / 2.0
    above = trigger >= threshold
    crossings = np.flatnonzero(~above[:-1] & above[1:]) + 1
    if above[0]:
        crossings = np.concatenate(([0], crossings))
    gap = int(round(debounce_s * sample_rate))
    edges: list[int] = []
    for c in crossings:
        if not edges or c - edges[-1] >= gap:
            edges.append(int(c))
    return TriggerEvents(rising_edges=tuple(edges), threshold=float(threshold))


def segment(recording: Recording, events: TriggerEvents) -> Recording:
    """Assign trial bounds from consecutive edge pairs.

    An even edge count pairs up exactly; an odd count leaves one trailing
    edge, which is read as the end-of-session marker and consumed unpaired.
    """
    edges = events.rising_edges
    n = len(edges)
    if n < 2:
        raise TriggerStructureError(
            f"expected at least 2 rising edges (one trial), found {n}")
    if n % 2:
        paired = edges[:-1]
    else:
        paired = edges
    bounds = tuple((paired[i], paired[i + 1]) for i in range(0, len(paired), 2))
    for s, e in bounds:
        if e > recording.n_samples:
            raise TriggerStructureError(
                f"trial bound ({s}, {e}) beyond recording length {recording.n_samples}")
    return recording.with_data(recording.data, trial_bounds=bounds)
