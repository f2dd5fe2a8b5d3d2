"""Shared data types: recordings, artifact membership functions, annotation stats.

Intervals everywhere in this package are half-open ``[start, end)`` in samples,
so adjacent intervals touch without overlapping and lengths are plain
differences.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import SchemaError

__all__ = [
    "Recording",
    "MembershipFunction",
    "WindowedMembershipFunction",
    "AnnotationStats",
    "msf_normalize",
    "msf_stats",
    "msf_to_json_dict",
    "msf_from_json_dict",
]


Interval = tuple[int, int]


def _as_interval_tuple(intervals: Iterable[Sequence[int]]) -> tuple[Interval, ...]:
    out = []
    for iv in intervals:
        s, e = iv
        out.append((int(s), int(e)))
    return tuple(out)


@dataclass(frozen=True)
class Recording:
    """A multichannel sampled signal.

    ``data`` is channels x samples, float64. ``eog_index`` and
    ``trigger_index`` designate special channels; everything else is EEG.
    ``trial_bounds`` is empty until segmentation assigns it.
    """

    sample_rate: float
    labels: tuple[str, ...]
    data: np.ndarray
    eog_index: int | None = None
    trigger_index: int | None = None
    trial_bounds: tuple[Interval, ...] = ()

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        data = np.ascontiguousarray(np.asarray(self.data, dtype=np.float64))
        if data.ndim != 2:
            raise ValueError(f"data must be 2-D (channels x samples), got shape {data.shape}")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))
        if len(self.labels) != data.shape[0]:
            raise ValueError(f"{len(self.labels)} labels for {data.shape[0]} channels")
        for idx, name in ((self.eog_index, "eog_index"), (self.trigger_index, "trigger_index")):
            if idx is not None and not 0 <= idx < data.shape[0]:
                raise ValueError(f"{name} {idx} out of range for {data.shape[0]} channels")
        if self.eog_index is not None and self.eog_index == self.trigger_index:
            raise ValueError("eog_index and trigger_index must differ")
        bounds = _as_interval_tuple(self.trial_bounds)
        prev_end = 0
        for s, e in bounds:
            if not (0 <= s < e <= data.shape[1]):
                raise ValueError(f"trial bound ({s}, {e}) outside [0, {data.shape[1]})")
            if s < prev_end:
                raise ValueError(f"trial bounds overlap or are unsorted at ({s}, {e})")
            prev_end = e
        object.__setattr__(self, "trial_bounds", bounds)

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate

    def eeg_indices(self) -> tuple[int, ...]:
        """Channel positions that are neither EOG nor trigger."""
        skip = {self.eog_index, self.trigger_index}
        return tuple(i for i in range(self.n_channels) if i not in skip)

    def eog(self) -> np.ndarray:
        if self.eog_index is None:
            raise SchemaError("recording has no EOG channel")
        return self.data[self.eog_index]

    def trigger(self) -> np.ndarray:
        if self.trigger_index is None:
            raise SchemaError("recording has no trigger channel")
        return self.data[self.trigger_index]

    def eeg_subset(self) -> "Recording":
        """A recording containing only the EEG channels, trials preserved."""
        idx = self.eeg_indices()
        return Recording(
            sample_rate=self.sample_rate,
            labels=tuple(self.labels[i] for i in idx),
            data=self.data[list(idx)],
            trial_bounds=self.trial_bounds,
        )

    def with_data(self, data: np.ndarray, trial_bounds=None) -> "Recording":
        return replace(
            self,
            data=data,
            trial_bounds=self.trial_bounds if trial_bounds is None else trial_bounds,
        )


@dataclass(frozen=True)
class MembershipFunction:
    """Per-sample 0/1 artifact marking stored as intervals.

    Raw annotation input may contain overlapping or unsorted intervals;
    ``msf_normalize`` reduces them to the canonical sorted disjoint form.
    """

    length: int
    intervals: tuple[Interval, ...] = ()

    def __post_init__(self):
        if self.length < 0:
            raise ValueError(f"length must be non-negative, got {self.length}")
        ivs = _as_interval_tuple(self.intervals)
        for s, e in ivs:
            if not (0 <= s < e <= self.length):
                raise ValueError(f"interval ({s}, {e}) outside [0, {self.length}]")
        object.__setattr__(self, "intervals", ivs)

    def to_samples(self) -> np.ndarray:
        """Materialized per-sample view: float array of 0.0 and 1.0."""
        out = np.zeros(self.length)
        for s, e in self.intervals:
            out[s:e] = 1.0
        return out

    def marked_count(self) -> int:
        """Number of marked samples, counting overlaps once."""
        return int(msf_normalize(self).marked_total())

    def marked_total(self) -> int:
        return sum(e - s for s, e in self.intervals)


@dataclass(frozen=True)
class WindowedMembershipFunction:
    """Smoothed [0, 1] artifact weighting with transition slopes."""

    length: int
    values: np.ndarray
    slope_samples: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.length,):
            raise ValueError(f"values shape {values.shape} does not match length {self.length}")
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            raise ValueError("values must lie in [0, 1]")
        if self.slope_samples < 0:
            raise ValueError("slope_samples must be non-negative")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class AnnotationStats:
    count: int
    duration_fraction: float
    mean_s: float
    std_s: float
    median_s: float


def msf_normalize(msf: MembershipFunction) -> MembershipFunction:
    """Canonical form: sorted, disjoint, with overlapping or touching intervals merged.

    The per-sample view is preserved exactly; the operation is idempotent.
    """
    if not msf.intervals:
        return msf
    ivs = sorted(msf.intervals)
    merged = [list(ivs[0])]
    for s, e in ivs[1:]:
        if s <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], e)
        else:
            merged.append([s, e])
    return MembershipFunction(msf.length, tuple((s, e) for s, e in merged))


def msf_stats(msf: MembershipFunction, sample_rate: float) -> AnnotationStats:
    """Interval count, marked fraction, and duration stats in seconds.

    Standard deviation uses the population convention. An empty marking
    yields zeros across the board.
    """
    if sample_rate <= 0:
        raise ValueError(f"sample_rate must be positive, got {sample_rate}")
    norm = msf_normalize(msf)
    if not norm.intervals:
        return AnnotationStats(0, 0.0, 0.0, 0.0, 0.0)
    durations = np.array([e - s for s, e in norm.intervals], dtype=np.float64) / sample_rate
    marked = norm.marked_total()
    return AnnotationStats(
        count=len(norm.intervals),
        duration_fraction=marked / msf.length,
        mean_s=float(durations.mean()),
        std_s=float(durations.std()),
        median_s=float(np.median(durations)),
    )


def msf_to_json_dict(msf: MembershipFunction, sample_rate: float) -> dict:
    """The exchange form shared with the annotation tool."""
    return {
        "length": msf.length,
        "sample_rate": float(sample_rate),
        "intervals": [[s, e] for s, e in msf.intervals],
    }


def msf_from_json_dict(obj: dict) -> tuple[MembershipFunction, float]:
    try:
        length = int(obj["length"])
        sample_rate = float(obj["sample_rate"])
        intervals = _as_interval_tuple(obj["intervals"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed membership function object: {exc}") from exc
    return MembershipFunction(length, intervals), sample_rate
