#!/usr/bin/env python3
"""Print the preprocessing filter designs and their measured responses.

Useful when changing the sample rate or cutoffs: shows the resulting
orders and the gain at a few diagnostic frequencies, single pass and
zero phase (the pipeline always runs the filters zero phase).
"""
import argparse

import numpy as np
import scipy.signal as sps

from eegclean.dsp import apply_zero_phase, design_bandstop, design_fir


def gain_db(filt, freq_hz: float, fs: float) -> float:
    w = [2 * np.pi * freq_hz / fs]
    if hasattr(filt, "taps"):
        _, h = sps.freqz(filt.taps, worN=w)
    else:
        _, h = sps.sosfreqz(filt.sos, worN=w)
    mag = abs(h[0])
    return -np.inf if mag == 0 else 20 * np.log10(mag)


def zero_phase_gain_db(filt, freq_hz: float, fs: float, seconds: float = 60.0) -> float:
    t = np.arange(int(seconds * fs)) / fs
    x = np.sin(2 * np.pi * freq_hz * t)
    y = apply_zero_phase(x, filt)
    core = slice(int(5 * fs), -int(5 * fs))  # skip edge transients
    return 20 * np.log10(np.std(y[core]) / np.std(x[core]))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fs", type=float, default=250.0)
    ap.add_argument("--lowpass", type=float, default=47.0)
    ap.add_argument("--highpass", type=float, default=1.0)
    ap.add_argument("--bandstop", type=float, nargs=2, default=(49.0, 51.0),
                    metavar=("LOW", "HIGH"))
    ap.add_argument("--bandstop-order", type=int, default=4)
    args = ap.parse_args()

    lp = design_fir("lowpass", args.fs, args.lowpass)
    hp = design_fir("highpass", args.fs, args.highpass)
    bs = design_bandstop(args.fs, *args.bandstop, args.bandstop_order)
    print(f"lowpass  {args.lowpass:6.1f} Hz: order {lp.order}, {lp.taps.size} taps")
    print(f"highpass {args.highpass:6.1f} Hz: order {hp.order}, {hp.taps.size} taps")
    print(f"bandstop {args.bandstop[0]:.0f}-{args.bandstop[1]:.0f} Hz: "
          f"{bs.sos.shape[0]} biquad sections")

    probes = {
        "lowpass": (lp, [1.0, args.lowpass * 0.2, args.lowpass,
                         (args.lowpass + args.fs / 2) / 2]),
        "highpass": (hp, [args.highpass * 0.1, args.highpass, args.highpass * 10]),
        "bandstop": (bs, [args.bandstop[0] - 1, np.mean(args.bandstop),
                          args.bandstop[1] + 1]),
    }
    print(f"\n{'filter':<10}{'freq Hz':>9}{'single dB':>11}{'zero-phase dB':>15}")
    for name, (filt, freqs) in probes.items():
        for f in freqs:
            if not 0 < f < args.fs / 2:
                continue
            print(f"{name:<10}{f:>9.2f}{gain_db(filt, f, args.fs):>11.2f}"
                  f"{zero_phase_gain_db(filt, f, args.fs):>15.2f}")


if __name__ == "__main__":
    main()
