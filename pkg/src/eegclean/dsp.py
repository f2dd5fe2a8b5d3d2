"""Resampling, filter design, and zero-phase filtering.

The filter bank is fixed by the preprocessing recipe: a linear-phase FIR
highpass and lowpass designed by windowed least squares, plus a Butterworth
band-stop for line noise. Everything is applied forward and backward so the
net group delay is zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import signal as sps

from .model import Recording

__all__ = [
    "FirFilter",
    "IirBandstop",
    "design_fir",
    "design_bandstop",
    "apply_zero_phase",
    "resample",
    "preprocess",
]


@dataclass(frozen=True)
class FirFilter:
    taps: np.ndarray
    kind: str
    cutoff_hz: float
    sample_rate: float
    order: int

    def __post_init__(self):
        object.__setattr__(self, "taps", np.asarray(self.taps, dtype=np.float64))

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "cutoff_hz": self.cutoff_hz,
            "sample_rate": self.sample_rate,
            "order": self.order,
            "taps": self.taps.tolist(),
        }


@dataclass(frozen=True)
class IirBandstop:
    sos: np.ndarray
    low_hz: float
    high_hz: float
    order: int
    sample_rate: float

    def __post_init__(self):
        object.__setattr__(self, "sos", np.asarray(self.sos, dtype=np.float64))

    def to_json_dict(self) -> dict:
        return {
            "low_hz": self.low_hz,
            "high_hz": self.high_hz,
            "order": self.order,
            "sample_rate": self.sample_rate,
            "sos": self.sos.tolist(),
        }


def _least_squares_linear_phase(order: int, sample_rate: float, cutoff_hz: float,
                                kind: str) -> np.ndarray:
    """Symmetric FIR taps minimizing squared error against a brick-wall target.

    The amplitude of a symmetric length-(order+1) filter is
    A(w) = sum_k h[k] cos(w (k - order/2)), linear in the taps, so the design
    reduces to one real least-squares solve on a dense frequency grid.
    """
    n_taps = order + 1
    mid = order / 2.0
    grid = np.linspace(0.0, sample_rate / 2.0, 16 * n_taps)
    omega = 2.0 * np.pi * grid / sample_rate
    if kind == "lowpass":
        target = np.where(grid < cutoff_hz, 1.0, 0.0)
    else:
        target = np.where(grid > cutoff_hz, 1.0, 0.0)
    target[np.isclose(grid, cutoff_hz)] = 0.5

    n_free = (n_taps + 1) // 2
    cols = np.empty((grid.size, n_free))
    for j in range(n_free):
        paired = (n_taps - 1 - j) != j
        cols[:, j] = (2.0 if paired else 1.0) * np.cos(omega * (j - mid))
    coef, *_ = np.linalg.lstsq(cols, target, rcond=None)

    taps = np.empty(n_taps)
    taps[:n_free] = coef
    taps[n_taps - n_free:] = coef[::-1]
    return taps


def design_fir(kind: str, sample_rate: float, cutoff_hz: float) -> FirFilter:
    """Windowed least-squares FIR of order floor(3 * rate / cutoff).

    The least-squares solution is shaped by a Hamming window and then
    rescaled so the reference gain (DC for lowpass, Nyquist for highpass)
    is exactly one.
    """
    if kind not in ("lowpass", "highpass"):
        raise ValueError(f"kind must be lowpass or highpass, got {kind!r}")
    if not 0 < cutoff_hz < sample_rate / 2:
        raise ValueError(
            f"cutoff {cutoff_hz} Hz outside (0, {sample_rate / 2}) for rate {sample_rate}")
    order = math.floor(3.0 * sample_rate / cutoff_hz)
    if kind == "highpass" and order % 2 == 1:
        # a symmetric even-length FIR has a structural zero at Nyquist,
        # which no amount of optimization can turn into a highpass
        order += 1
    taps = _least_squares_linear_phase(order, sample_rate, cutoff_hz, kind)
    taps = taps * np.hamming(order + 1)
    if kind == "lowpass":
        taps = taps / taps.sum()
    else:
        alt = taps @ np.power(-1.0, np.arange(order + 1))
        taps = taps / alt
    return FirFilter(taps=taps, kind=kind, cutoff_hz=cutoff_hz,
                     sample_rate=sample_rate, order=order)


def design_bandstop(sample_rate: float, low_hz: float, high_hz: float,
                    order: int) -> IirBandstop:
    """Butterworth band-stop realized as second-order sections."""
    if not 0 < low_hz < high_hz < sample_rate / 2:
        raise ValueError(
            f"band ({low_hz}, {high_hz}) invalid for sample rate {sample_rate}")
    if order < 2 or order % 2:
        raise ValueError(f"order must be even and >= 2, got {order}")
    sos = sps.butter(order, [low_hz, high_hz], btype="bandstop",
                     fs=sample_rate, output="sos")
    _, poles, _ = sps.sos2zpk(sos)
    if np.abs(poles).max() >= 1.0:
        raise RuntimeError("band-stop realization is unstable")
    return IirBandstop(sos=sos, low_hz=low_hz, high_hz=high_hz,
                       order=order, sample_rate=sample_rate)


def effective_order(filt: FirFilter | IirBandstop) -> int:
    if isinstance(filt, FirFilter):
        return filt.order
    return 2 * filt.sos.shape[0]


def apply_zero_phase(x: np.ndarray, filt: FirFilter | IirBandstop) -> np.ndarray:
    """Forward-backward filtering along the last axis.

    Edges are handled by odd reflection of 3 * order samples, which the
    underlying routine trims off again, so output length equals input length
    and the effective magnitude response is the squared single-pass one.
    """
    x = np.asarray(x, dtype=np.float64)
    pad = 3 * effective_order(filt)
    if x.shape[-1] <= pad:
        raise ValueError(
            f"signal of length {x.shape[-1]} too short for padding {pad} "
            f"(needs more than 3x the filter order)")
    if isinstance(filt, FirFilter):
        return sps.filtfilt(filt.taps, [1.0], x, padtype="odd", padlen=pad)
    return sps.sosfiltfilt(filt.sos, x, padtype="odd", padlen=pad)


def _rational_ratio(from_rate: float, to_rate: float) -> tuple[int, int]:
    frac = Fraction(to_rate / from_rate).limit_denominator(2 ** 16)
    return frac.numerator, frac.denominator


def resample(x: np.ndarray, from_rate: float, to_rate: float) -> np.ndarray:
    """Polyphase rational resampling along the last axis.

    The anti-alias lowpass cuts at 0.8x the smaller Nyquist frequency, so
    content in the retained band keeps its frequency and amplitude.
    """
    if from_rate <= 0 or to_rate <= 0:
        raise ValueError(f"rates must be positive, got {from_rate} -> {to_rate}")
    x = np.asarray(x, dtype=np.float64)
    target_len = int(round(x.shape[-1] * to_rate / from_rate))
    if from_rate == to_rate:
        return x.copy()
    up, down = _rational_ratio(from_rate, to_rate)
    cutoff_hz = 0.8 * 0.5 * min(from_rate, to_rate)
    half = 10 * max(up, down)
    # resample_poly scales the window by up itself to offset zero-stuffing loss
    taps = sps.firwin(2 * half + 1, cutoff_hz, fs=from_rate * up)
    out = sps.resample_poly(x, up, down, axis=-1, window=taps)
    if out.shape[-1] < target_len:
        raise RuntimeError(
            f"resampler produced {out.shape[-1]} samples, expected {target_len}")
    return out[..., :target_len]


def preprocess(recording: Recording,
               target_rate: float = 250.0,
               highpass_hz: float = 1.0,
               lowpass_hz: float = 47.0,
               bandstop_low_hz: float = 49.0,
               bandstop_high_hz: float = 51.0,
               bandstop_order: int = 4) -> Recording:
    """Resample, then clean every non-trigger channel with the filter bank.

    The trigger channel is resampled but never filtered, so its step edges
    survive for trial detection. Channel order, labels, and the designated
    indices are preserved; trial bounds, if already present, are rescaled to
    the new rate.
    """
    data = resample(recording.data, recording.sample_rate, target_rate)
    ratio = target_rate / recording.sample_rate
    bounds = tuple(
        (int(round(s * ratio)), min(int(round(e * ratio)), data.shape[1]))
        for s, e in recording.trial_bounds
    )
    filter_rows = [i for i in range(recording.n_channels) if i != recording.trigger_index]
    if filter_rows:
        hp = design_fir("highpass", target_rate, highpass_hz)
        lp = design_fir("lowpass", target_rate, lowpass_hz)
        bs = design_bandstop(target_rate, bandstop_low_hz, bandstop_high_hz, bandstop_order)
        sub = data[filter_rows]
        for filt in (hp, lp, bs):
            sub = apply_zero_phase(sub, filt)
        data[filter_rows] = sub
    return Recording(
        sample_rate=target_rate,
        labels=recording.labels,
        data=data,
        eog_index=recording.eog_index,
        trigger_index=recording.trigger_index,
        trial_bounds=bounds,
    )
