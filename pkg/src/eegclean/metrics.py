"""Cleaning-quality metrics: EOG correlation per channel, reduction, SNR,
and ground-truth recovery scoring."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, SchemaError
from .model import Recording
from .rejection import DEFAULT_MAX_LAG, eog_component_correlation

__all__ = ["ReductionReport", "SnrReport", "channel_eog_cc", "reduction",
           "snr", "amari_index"]


@dataclass(frozen=True)
class ReductionReport:
    labels: tuple[str, ...]
    per_channel_before: np.ndarray
    per_channel_after: np.ndarray
    reduction_percent: float

    def to_json_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "per_channel_before": self.per_channel_before.tolist(),
            "per_channel_after": self.per_channel_after.tolist(),
            "reduction_percent": self.reduction_percent,
        }


@dataclass(frozen=True)
class SnrReport:
    per_trial: tuple[float, ...]
    overall: float
    epoch_len_s: float

    def to_json_dict(self) -> dict:
        return {
            "per_trial": list(self.per_trial),
            "overall": self.overall,
            "epoch_len_s": self.epoch_len_s,
        }


def channel_eog_cc(recording: Recording,
                   max_lag: int = DEFAULT_MAX_LAG) -> dict[str, float]:
    """Cumulative negative EOG correlation of every EEG channel.

    The same trial-wise lagged correlation used for component selection,
    with channels standing in for components. Returns label -> cc in
    channel order.
    """
    if recording.eog_index is None:
        raise SchemaError("recording has no EOG channel")
    if not recording.trial_bounds:
        raise SchemaError("recording has no trials")
    eog = recording.eog()
    out: dict[str, float] = {}
    for i in recording.eeg_indices():
        total = 0.0
        for s, e in recording.trial_bounds:
            total += abs(eog_component_correlation(
                eog[s:e], recording.data[i, s:e], max_lag))
        out[recording.labels[i]] = total
    return out


def reduction(before, after, labels: tuple[str, ...] | None = None) -> ReductionReport:
    """Mean-based percentage drop of per-channel coefficients."""
    b = np.asarray(before, dtype=np.float64)
    a = np.asarray(after, dtype=np.float64)
    if b.shape != a.shape or b.ndim != 1:
        raise SchemaError(f"mismatched channel sets: {b.shape} vs {a.shape}")
    if labels is not None and len(labels) != b.size:
        raise SchemaError(f"{len(labels)} labels for {b.size} channels")
    if (b < 0).any():
        raise ValueError("before values must be non-negative")
    if labels is None:
        labels = tuple(f"ch{i:02d}" for i in range(b.size))
    percent = 100.0 * (1.0 - a.mean() / b.mean())
    return ReductionReport(
        labels=tuple(labels),
        per_channel_before=b,
        per_channel_after=a,
        reduction_percent=float(percent),
    )


def snr(recording: Recording, epoch_len_s: float = 1.0) -> SnrReport:
    """Epoch-average signal-to-noise ratio over trials.

    Each trial is cut into fixed non-overlapping epochs; per channel, the
    signal power is the mean square of the epoch-averaged waveform and the
    noise power the mean squared deviation of individual epochs from that
    average. Ratios are averaged over channels per trial, and over all
    (channel, trial) cells globally. Zero noise yields +inf.

    EOG and trigger channels are left out when designated.
    """
    if not recording.trial_bounds:
        raise SchemaError("recording has no trials")
    epoch = int(round(epoch_len_s * recording.sample_rate))
    if epoch < 2:
        raise ValueError(f"epoch of {epoch} samples is too short")
    rows = recording.eeg_indices()
    per_trial = []
    all_cells = []
    for s, e in recording.trial_bounds:
        k = (e - s) // epoch
        if k < 2:
            raise ValueError(
                f"trial ({s}, {e}) has {k} epochs of {epoch} samples, need >= 2")
        cells = []
        for i in rows:
            segs = recording.data[i, s:s + k * epoch].reshape(k, epoch)
            avg = segs.mean(axis=0)
            sig = float((avg ** 2).mean())
            noise = float(((segs - avg) ** 2).mean())
            cells.append(sig / noise if noise > 0 else np.inf)
        per_trial.append(float(np.mean(cells)))
        all_cells.extend(cells)
    return SnrReport(
        per_trial=tuple(per_trial),
        overall=float(np.mean(all_cells)),
        epoch_len_s=epoch_len_s,
    )


def amari_index(estimated: np.ndarray, true_mixing: np.ndarray) -> float:
    """Permutation- and scale-invariant recovery error of an unmixing.

    Scores P = estimated @ true_mixing; zero means P is a scaled
    permutation, i.e. perfect separation up to the inherent ICA
    indeterminacies. Normalized by 2n(n-1).
    """
    est = np.asarray(estimated, dtype=np.float64)
    mix = np.asarray(true_mixing, dtype=np.float64)
    if est.shape != mix.shape or est.ndim != 2 or est.shape[0] != est.shape[1]:
        raise SchemaError(f"need equal square matrices, got {est.shape} and {mix.shape}")
    p = np.abs(est @ mix)
    n = p.shape[0]
    row_max = p.max(axis=1)
    col_max = p.max(axis=0)
    if (row_max == 0).any() or (col_max == 0).any():
        raise DegenerateDataError("product matrix has an all-zero row or column")
    rows = (p / row_max[:, None]).sum(axis=1) - 1.0
    cols = (p / col_max[None, :]).sum(axis=0) - 1.0
    return float((rows.sum() + cols.sum()) / (2.0 * n * (n - 1)))
