"""Synthetic session generator with known ground truth.

Sessions carry band-limited non-Gaussian "neural" sources through a known
mixing, plus one sparse blink source projected positively onto every scalp
channel. The EOG channel sees the blink with inverted polarity and a small
neural leak. A trigger channel delimits the trials. Everything is
reproducible from the seed.

The blink is an extra source on top of a square neural mixing, so removing
the marked samples leaves an exactly square mixture. The square neural part
is the reference that unmixing recovery is scored against.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .model import MembershipFunction, Recording, msf_normalize

__all__ = ["SynthSpec", "GroundTruth", "generate", "perturb_msf"]

DEFAULT_TRIAL_DURATIONS_S = (43.3, 33.1, 47.4, 48.7, 8.0)

_MONTAGE = ("Fp1", "Fp2", "F3", "F4", "C3", "C4", "P3", "P4",
            "O1", "O2", "F7", "F8", "T7", "T8", "P7", "P8")

TRIGGER_PULSE_S = 0.1
TRIGGER_LEVEL = 5.0


@dataclass(frozen=True)
class SynthSpec:
    n_sources: int = 8
    n_channels: int = 8
    sample_rate: float = 250.0
    trial_durations_s: tuple[float, ...] = DEFAULT_TRIAL_DURATIONS_S
    inter_trial_gap_s: float = 2.0
    lead_s: float = 2.0
    blink_rate_per_min: float = 20.0
    blink_amplitude: float = 25.0
    blink_template_s: float = 0.3
    evoked_amplitude: float = 1.5
    evoked_period_s: float = 1.0
    eog_leakage: float = 0.05
    mixing: np.ndarray | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n_channels < self.n_sources:
            raise ValueError(
                f"need n_channels >= n_sources, got {self.n_channels} < {self.n_sources}")
        if not self.trial_durations_s or any(d <= 0 for d in self.trial_durations_s):
            raise ValueError(f"trial durations must be positive: {self.trial_durations_s}")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "trial_durations_s", tuple(self.trial_durations_s))
        if self.mixing is not None:
            m = np.asarray(self.mixing, dtype=np.float64)
            if m.shape != (self.n_channels, self.n_sources):
                raise ValueError(
                    f"mixing shape {m.shape}, expected ({self.n_channels}, {self.n_sources})")
            if np.linalg.matrix_rank(m) < self.n_sources:
                raise ValueError("mixing must have full column rank")
            object.__setattr__(self, "mixing", m)


@dataclass(frozen=True)
class GroundTruth:
    """Everything the generator knows that an analysis would have to infer."""

    mixing: np.ndarray
    sources: np.ndarray
    blink_source_index: int
    true_msf: MembershipFunction
    trial_bounds: tuple[tuple[int, int], ...]

    @property
    def neural_mixing(self) -> np.ndarray:
        """The square blink-free part of the mixing."""
        return self.mixing[:, :self.blink_source_index]

    @property
    def blink_source(self) -> np.ndarray:
        return self.sources[self.blink_source_index]


def _am_sources(n: int, t: int, fs: float, rng: np.random.Generator) -> np.ndarray:
    """Band-limited noise carriers under slow positive envelopes, unit variance.

    The amplitude modulation makes the marginals heavy-tailed, which is what
    the fixed-point contrast needs to separate them.
    """
    out = np.empty((n, t))
    for i in range(n):
        lo = rng.uniform(2.0, 12.0)
        hi = lo + rng.uniform(4.0, 18.0)
        band = sps.firwin(257, [lo, hi], pass_zero=False, fs=fs)
        carrier = sps.lfilter(band, 1.0, rng.standard_normal(t))
        slow = sps.firwin(513, 0.7, fs=fs)
        envelope = np.abs(sps.lfilter(slow, 1.0, rng.standard_normal(t))) + 0.05
        src = carrier * envelope
        out[i] = src / src.std()
    return out


def _blink_template(fs: float, duration_s: float) -> np.ndarray:
    """Biphasic raised-cosine pulse: a positive lobe then a smaller rebound."""
    total = int(round(duration_s * fs))
    up = int(round(total * 2 / 3))
    down = total - up
    return np.concatenate([np.hanning(up), -0.35 * np.hanning(down)])


def _trial_bounds(spec: SynthSpec) -> tuple[tuple[tuple[int, int], ...], int]:
    fs = spec.sample_rate
    pos = int(round(spec.lead_s * fs))
    bounds = []
    for d in spec.trial_durations_s:
        length = int(round(d * fs))
        bounds.append((pos, pos + length))
        pos += length + int(round(spec.inter_trial_gap_s * fs))
    total = pos + int(round(spec.lead_s * fs))
    return tuple(bounds), total


def generate(spec: SynthSpec) -> tuple[Recording, GroundTruth]:
    """Build one session and its ground truth, deterministically per seed."""
    rng = np.random.default_rng(spec.seed)
    fs = spec.sample_rate
    bounds, t = _trial_bounds(spec)

    neural = _am_sources(spec.n_sources, t, fs, rng)

    # epoch-locked repeating waveform inside trials, so epoch averaging has
    # something real to find
    period = int(round(spec.evoked_period_s * fs))
    shape = sps.firwin(65, 15.0, fs=fs)
    wave = sps.filtfilt(shape, 1.0, rng.standard_normal(period), padlen=60)
    wave = wave / wave.std()
    for s, e in bounds:
        k = np.arange(e - s)
        neural[0, s:e] += spec.evoked_amplitude * wave[k % period]

    template = _blink_template(fs, spec.blink_template_s)
    blink = np.zeros(t)
    intervals: list[tuple[int, int]] = []
    mean_gap_s = 60.0 / spec.blink_rate_per_min if spec.blink_rate_per_min > 0 else np.inf
    pos_s = 0.0
    while np.isfinite(mean_gap_s):
        pos_s += rng.exponential(mean_gap_s)
        i0 = int(round(pos_s * fs))
        if i0 + template.size >= t:
            break
        if intervals and i0 < intervals[-1][1]:
            continue
        amp = 1.0 + 0.2 * rng.standard_normal()
        blink[i0:i0 + template.size] += amp * template
        intervals.append((i0, i0 + template.size))

    if spec.mixing is not None:
        neural_mixing = spec.mixing
    else:
        neural_mixing = (rng.uniform(-1.0, 1.0, (spec.n_channels, spec.n_sources))
                         + np.eye(spec.n_channels, spec.n_sources))
    blink_projection = rng.uniform(0.3, 1.0, spec.n_channels) * spec.blink_amplitude

    mixing = np.concatenate([neural_mixing, blink_projection[:, None]], axis=1)
    sources = np.vstack([neural, blink[None, :]])
    scalp = mixing @ sources

    eog = -spec.blink_amplitude * blink + spec.eog_leakage * neural.sum(axis=0)

    trigger = np.zeros(t)
    pulse = int(round(TRIGGER_PULSE_S * fs))
    for s, e in bounds:
        trigger[s:s + pulse] = TRIGGER_LEVEL
        trigger[e:e + pulse] = TRIGGER_LEVEL
    end_marker = bounds[-1][1] + int(round(1.0 * fs))
    trigger[end_marker:end_marker + pulse] = TRIGGER_LEVEL

    labels = list(_MONTAGE[:spec.n_channels])
    labels += [f"E{i + 1:02d}" for i in range(len(labels), spec.n_channels)]
    labels += ["EOG", "TRIG"]

    recording = Recording(
        sample_rate=fs,
        labels=tuple(labels),
        data=np.vstack([scalp, eog[None, :], trigger[None, :]]),
        eog_index=spec.n_channels,
        trigger_index=spec.n_channels + 1,
    )
    truth = GroundTruth(
        mixing=mixing,
        sources=sources,
        blink_source_index=spec.n_sources,
        true_msf=msf_normalize(MembershipFunction(t, tuple(intervals))),
        trial_bounds=bounds,
    )
    return recording, truth


def perturb_msf(msf: MembershipFunction, widen_s: float,
                sample_rate: float) -> MembershipFunction:
    """Widen every interval both ways, the way a cautious annotator would."""
    if widen_s < 0:
        raise ValueError(f"widen_s must be >= 0, got {widen_s}")
    pad = int(round(widen_s * sample_rate))
    widened = tuple(
        (max(0, s - pad), min(msf.length, e + pad)) for s, e in msf.intervals)
    return msf_normalize(MembershipFunction(msf.length, widened))
