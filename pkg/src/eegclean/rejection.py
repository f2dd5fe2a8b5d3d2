"""EOG-guided component selection and artifact rejection.

Selection accumulates, per component, the trial-wise negative lagged
correlations against the EOG channel. Eye potentials appear with inverted
polarity on the scalp relative to the EOG electrode, so only negative
correlation minima count as evidence; positive minima are clamped to zero.

Rejection comes in two strengths: complete (zero the selected components
everywhere) and partial (attenuate them only inside the smoothed artifact
marking, leaving all other samples untouched).
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateDataError, SchemaError
from .ica import ComponentSet, IcaConfig, UnmixingMatrix, fit_ica
from .model import (MembershipFunction, Recording, WindowedMembershipFunction,
                    msf_normalize)

__all__ = [
    "CorrelationReport",
    "eog_component_correlation",
    "build_correlation_report",
    "select_artifactual",
    "msf_to_wmsf",
    "partial_reject",
    "complete_reject",
    "excise_artifacts",
    "fit_diminished_unmixing",
    "unmixing_difference",
]

DEFAULT_MAX_LAG = 7


@dataclass(frozen=True)
class CorrelationReport:
    """Per-(component, trial) negative correlations and their row sums."""

    c: np.ndarray
    cc: np.ndarray
    selected: tuple[int, ...]
    max_lag_samples: int

    def __post_init__(self):
        c = np.asarray(self.c, dtype=np.float64)
        cc = np.asarray(self.cc, dtype=np.float64)
        if c.ndim != 2 or cc.shape != (c.shape[0],):
            raise SchemaError(f"inconsistent report shapes {c.shape} / {cc.shape}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "cc", cc)
        object.__setattr__(self, "selected", tuple(int(i) for i in self.selected))

    def to_json_dict(self) -> dict:
        return {
            "c": self.c.tolist(),
            "cc": self.cc.tolist(),
            "selected": list(self.selected),
            "max_lag_samples": self.max_lag_samples,
        }


def eog_component_correlation(eog_trial: np.ndarray, comp_trial: np.ndarray,
                              max_lag: int = DEFAULT_MAX_LAG) -> float:
    """Most negative normalized cross-correlation over lags |tau| < max_lag.

    Both inputs are mean-removed; the correlation at each lag divides by the
    sample count and both population standard deviations, so an exact
    polarity flip scores -1. Products that would index outside the trial are
    treated as zero. Non-negative minima clamp to zero. A max_lag of zero
    degenerates to the plain zero-lag correlation.
    """
    x = np.asarray(eog_trial, dtype=np.float64)
    y = np.asarray(comp_trial, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise SchemaError(f"trial shapes differ: {x.shape} vs {y.shape}")
    if max_lag < 0:
        raise ValueError(f"max_lag must be >= 0, got {max_lag}")
    t = x.size
    x = x - x.mean()
    y = y - y.mean()
    sx = np.sqrt((x ** 2).mean())
    sy = np.sqrt((y ** 2).mean())
    if sx == 0 or sy == 0:
        raise DegenerateDataError("zero-variance input, correlation undefined")
    best = np.inf
    for tau in range(-max_lag + 1, max_lag) if max_lag > 0 else [0]:
        if tau >= 0:
            num = np.dot(x[tau:], y[:t - tau])
        else:
            num = np.dot(x[:t + tau], y[-tau:])
        best = min(best, num / (t * sx * sy))
    return min(best, 0.0)


def build_correlation_report(eog: np.ndarray, components: ComponentSet,
                             max_lag: int = DEFAULT_MAX_LAG) -> CorrelationReport:
    """Correlation matrix over every (component, trial) cell, rows summed.

    The EOG signal must share the component timeline; both are sliced by the
    component set's trial bounds. No selection is made here.
    """
    eog = np.asarray(eog, dtype=np.float64)
    if eog.shape != (components.n_samples,):
        raise SchemaError(
            f"EOG length {eog.shape} does not match components ({components.n_samples})")
    bounds = components.trial_bounds
    if not bounds:
        raise SchemaError("component set has no trials")
    n = components.n_components
    c = np.zeros((n, len(bounds)))
    for j, (s, e) in enumerate(bounds):
        eog_trial = eog[s:e]
        for i in range(n):
            c[i, j] = eog_component_correlation(
                eog_trial, components.components[i, s:e], max_lag)
    cc = np.abs(c).sum(axis=1)
    return CorrelationReport(c=c, cc=cc, selected=(), max_lag_samples=max_lag)


def select_artifactual(report: CorrelationReport, k: int = 2) -> CorrelationReport:
    """Mark the k components with the largest cumulative correlation.

    Ties go to the lower component index. The correlation data is carried
    over unchanged.
    """
    n = report.cc.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    order = np.argsort(-report.cc, kind="stable")
    selected = tuple(sorted(int(i) for i in order[:k]))
    return replace(report, selected=selected)


def msf_to_wmsf(msf: MembershipFunction, slope_samples: int) -> WindowedMembershipFunction:
    """Attach cosine-sum window slopes to the edges of each marked interval.

    The rising slope occupies the ``slope_samples`` positions before an
    interval and the falling slope the positions after it, taken from the
    two halves of an odd-length Blackman window so the plateau boundary sits
    exactly at 1. Overlapping contributions combine by pointwise maximum.
    """
    if slope_samples < 0:
        raise ValueError(f"slope_samples must be >= 0, got {slope_samples}")
    norm = msf_normalize(msf)
    values = norm.to_samples()
    if slope_samples > 0 and norm.intervals:
        window = np.blackman(2 * slope_samples + 1)
        rising, falling = window[:slope_samples], window[slope_samples + 1:]
        for s, e in norm.intervals:
            lo = max(0, s - slope_samples)
            seg = rising[slope_samples - (s - lo):]
            np.maximum(values[lo:s], seg, out=values[lo:s])
            hi = min(len(values), e + slope_samples)
            seg = falling[:hi - e]
            np.maximum(values[e:hi], seg, out=values[e:hi])
    np.clip(values, 0.0, 1.0, out=values)
    return WindowedMembershipFunction(length=msf.length, values=values,
                                      slope_samples=slope_samples)


def partial_reject(components: ComponentSet, selected: tuple[int, ...],
                   wmsf: WindowedMembershipFunction, alpha: float = 1.0) -> ComponentSet:
    """Attenuate the selected components by (1 - alpha * wmsf) pointwise."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    if wmsf.length != components.n_samples:
        raise SchemaError(
            f"weighting length {wmsf.length} does not match components "
            f"({components.n_samples})")
    if not components.selectable:
        raise SchemaError(
            "components from an artifact-diminished unmixing are diagnostic "
            "only and cannot be rejected")
    for i in selected:
        if not 0 <= i < components.n_components:
            raise ValueError(f"selected index {i} out of range")
    out = components.components.copy()
    factor = 1.0 - alpha * wmsf.values
    for i in selected:
        out[i] = out[i] * factor
    return replace(components, components=out)


def complete_reject(components: ComponentSet, selected: tuple[int, ...]) -> ComponentSet:
    """Zero the selected components everywhere.

    Defined as partial rejection at full strength with an all-ones
    weighting, and implemented that way so the equivalence is exact.
    """
    full = WindowedMembershipFunction(
        length=components.n_samples,
        values=np.ones(components.n_samples),
        slope_samples=0,
    )
    return partial_reject(components, selected, full, alpha=1.0)


def excise_artifacts(recording: Recording, msf: MembershipFunction) -> Recording:
    """Drop every marked sample from every channel simultaneously.

    Trial bounds do not survive excision; the shortened recording exists to
    refit the unmixing, not for trial-level analysis.
    """
    if msf.length != recording.n_samples:
        raise SchemaError(
            f"marking length {msf.length} does not match recording "
            f"({recording.n_samples})")
    keep = msf_normalize(msf).to_samples() == 0.0
    if not keep.any():
        raise ValueError("marking covers the entire recording, nothing left")
    return Recording(
        sample_rate=recording.sample_rate,
        labels=recording.labels,
        data=recording.data[:, keep],
        eog_index=recording.eog_index,
        trigger_index=recording.trigger_index,
        trial_bounds=(),
    )


def fit_diminished_unmixing(recording: Recording, msf: MembershipFunction,
                            config: IcaConfig = IcaConfig()) -> UnmixingMatrix:
    """Refit the unmixing on artifact-free samples only.

    The result is still a per-sample linear map, so it applies to the
    full-length recording; components derived from it are flagged as not
    selectable for rejection.
    """
    shortened = excise_artifacts(recording, msf)
    return fit_ica(shortened.data, config=config,
                   channel_labels=shortened.labels, diminished=True)


def _row_norm_sorted(m: np.ndarray) -> np.ndarray:
    order = np.argsort(-np.linalg.norm(m, axis=1), kind="stable")
    return m[order]


def unmixing_difference(w: UnmixingMatrix,
                        w_prime: UnmixingMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Elementwise and log-relative differences between two unmixings.

    Component order across two independent fits is arbitrary, so each matrix
    is first sorted by descending row norm to align rows by rank. The
    log-relative matrix is log10 |D / W|; a cell with D == 0 is -inf (no
    variation at all), and a nonzero difference against a zero reference is
    flagged as NaN rather than raising.
    """
    if w.w.shape != w_prime.w.shape:
        raise SchemaError(f"shape mismatch {w.w.shape} vs {w_prime.w.shape}")
    if w.channel_labels != w_prime.channel_labels:
        raise SchemaError("channel labels differ between the two unmixings")
    a = _row_norm_sorted(w.w)
    b = _row_norm_sorted(w_prime.w)
    d = b - a
    d_lr = np.full_like(d, -np.inf)
    with np.errstate(divide="ignore"):
        nonzero = d != 0.0
        flagged = nonzero & (a == 0.0)
        ok = nonzero & ~flagged
        d_lr[ok] = np.log10(np.abs(d[ok] / a[ok]))
        d_lr[flagged] = np.nan
    return d, d_lr
