"""Filter design and application checks, mostly against frequency-domain oracles."""
import numpy as np
import pytest
from scipy import signal as sps

from eegclean.dsp import (FirFilter, apply_zero_phase, design_bandstop,
                          design_fir, effective_order, preprocess, resample)
from eegclean.model import Recording

FS = 250.0


def gain_db(filt, freq_hz: float) -> float:
    if isinstance(filt, FirFilter):
        _, h = sps.freqz(filt.taps, worN=[freq_hz], fs=filt.sample_rate)
    else:
        _, h = sps.sosfreqz(filt.sos, worN=[freq_hz], fs=filt.sample_rate)
    return float(20.0 * np.log10(np.abs(h[0])))


@pytest.fixture(scope="module")
def lp():
    return design_fir("lowpass", FS, 47.0)


@pytest.fixture(scope="module")
def hp():
    return design_fir("highpass", FS, 1.0)


@pytest.fixture(scope="module")
def bs():
    return design_bandstop(FS, 49.0, 51.0, 4)


class TestFirDesign:
    def test_orders(self, lp, hp):
        assert lp.order == 15
        assert hp.order == 750
        assert lp.taps.shape == (16,)
        assert hp.taps.shape == (751,)

    def test_linear_phase_symmetry(self, lp, hp):
        for f in (lp, hp):
            assert np.array_equal(f.taps, f.taps[::-1])

    def test_reference_gains_exact(self, lp, hp):
        assert lp.taps.sum() == pytest.approx(1.0, abs=1e-12)
        alternating = hp.taps @ np.power(-1.0, np.arange(hp.taps.size))
        assert alternating == pytest.approx(1.0, abs=1e-12)

    def test_passband_flat_at_10hz(self, lp, hp):
        assert abs(gain_db(lp, 10.0)) < 1.0
        assert abs(gain_db(hp, 10.0)) < 1.0

    def test_stopbands(self, lp, hp):
        assert gain_db(lp, 80.0) < -40.0
        assert gain_db(hp, 0.1) < -60.0

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            design_fir("bandpass", FS, 10.0)
        with pytest.raises(ValueError):
            design_fir("lowpass", FS, 130.0)
        with pytest.raises(ValueError):
            design_fir("lowpass", FS, 0.0)


class TestBandstopDesign:
    def test_sections_and_poles(self, bs):
        assert bs.sos.shape == (4, 6)
        _, poles, _ = sps.sos2zpk(bs.sos)
        assert poles.size == 8
        assert np.abs(poles).max() < 1.0

    def test_notch_depth(self, bs):
        assert gain_db(bs, 50.0) < -100.0

    def test_band_edges_near_3db(self, bs):
        assert gain_db(bs, 49.0) == pytest.approx(-3.01, abs=0.1)
        assert gain_db(bs, 51.0) == pytest.approx(-3.01, abs=0.1)

    def test_flat_outside_band(self, bs):
        assert gain_db(bs, 45.0) > -0.1
        assert gain_db(bs, 55.0) > -0.1

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            design_bandstop(FS, 51.0, 49.0, 4)
        with pytest.raises(ValueError):
            design_bandstop(FS, 49.0, 51.0, 3)


class TestZeroPhase:
    def test_impulse_response_symmetric(self, lp, bs):
        n = 2001
        x = np.zeros(n)
        x[n // 2] = 1.0
        # the narrow notch has poles close to the unit circle, so its
        # forward-backward response is symmetric only to roundoff scale
        for filt, tol in ((lp, 1e-12), (bs, 1e-5)):
            y = apply_zero_phase(x, filt)
            assert y.shape == x.shape
            np.testing.assert_allclose(y, y[::-1], atol=tol)

    def test_line_frequency_removed(self, lp, bs):
        t = np.arange(int(30 * FS)) / FS
        x = np.sin(2 * np.pi * 50.0 * t)
        y = apply_zero_phase(apply_zero_phase(x, lp), bs)
        core = slice(1000, -1000)
        assert np.std(y[core]) / np.std(x[core]) < 1e-6

    def test_drift_removed(self, hp):
        t = np.arange(int(60 * FS)) / FS
        x = np.sin(2 * np.pi * 0.1 * t)
        y = apply_zero_phase(x, hp)
        core = slice(3000, -3000)
        assert np.std(y[core]) / np.std(x[core]) < 1e-5

    def test_linearity(self, lp, rng):
        x = rng.standard_normal(3000)
        y = rng.standard_normal(3000)
        combined = apply_zero_phase(2.5 * x - 0.75 * y, lp)
        separate = 2.5 * apply_zero_phase(x, lp) - 0.75 * apply_zero_phase(y, lp)
        np.testing.assert_allclose(combined, separate, atol=1e-9)

    def test_rows_filtered_independently(self, lp, rng):
        x = rng.standard_normal((3, 1000))
        y = apply_zero_phase(x, lp)
        np.testing.assert_allclose(y[1], apply_zero_phase(x[1], lp), atol=1e-12)

    def test_too_short_rejected(self, hp):
        with pytest.raises(ValueError, match="too short"):
            apply_zero_phase(np.zeros(2250), hp)

    def test_effective_order(self, lp, hp, bs):
        assert effective_order(lp) == 15
        assert effective_order(hp) == 750
        assert effective_order(bs) == 8


class TestResample:
    def test_length_rule(self):
        y = resample(np.zeros(20480), 2048.0, 250.0)
        assert y.shape == (2500,)

    def test_same_rate_is_copy(self):
        x = np.arange(100.0)
        y = resample(x, 250.0, 250.0)
        assert np.array_equal(x, y) and y is not x

    def test_dc_preserved(self):
        y = resample(np.full(5000, 3.25), 500.0, 250.0)
        np.testing.assert_allclose(y[100:-100], 3.25, atol=1e-12)

    def test_sine_survives_downsampling(self):
        x = np.sin(2 * np.pi * 13.0 * np.arange(20480) / 2048.0)
        y = resample(x, 2048.0, 250.0)
        ref = np.sin(2 * np.pi * 13.0 * np.arange(y.size) / 250.0)
        assert np.abs(y[200:-200] - ref[200:-200]).max() < 0.01

    def test_sine_survives_upsampling(self):
        x = np.sin(2 * np.pi * 5.0 * np.arange(2500) / 250.0)
        y = resample(x, 250.0, 1000.0)
        assert y.shape == (10000,)
        ref = np.sin(2 * np.pi * 5.0 * np.arange(y.size) / 1000.0)
        assert np.abs(y[400:-400] - ref[400:-400]).max() < 0.01

    def test_bad_rates(self):
        with pytest.raises(ValueError):
            resample(np.zeros(100), 0.0, 250.0)


@pytest.fixture(scope="module")
def raw():
    fs = 1000.0
    t = np.arange(int(20 * fs)) / fs
    eeg = (np.sin(2 * np.pi * 10.0 * t)
           + 0.5 * np.sin(2 * np.pi * 50.0 * t)
           + 0.3 * np.sin(2 * np.pi * 0.2 * t))
    trig = np.zeros(t.size)
    for start_s in (2.0, 8.0, 14.0):
        i = int(start_s * fs)
        trig[i:i + int(0.1 * fs)] = 5.0
    return Recording(fs, ("C3", "TRIG"), np.stack([eeg, trig]),
                     trigger_index=1)


class TestPreprocess:
    def test_rate_and_shape(self, raw):
        out = preprocess(raw)
        assert out.sample_rate == 250.0
        assert out.n_samples == round(raw.n_samples * 250.0 / raw.sample_rate)
        assert out.labels == raw.labels
        assert out.trigger_index == 1

    def test_trigger_channel_unfiltered(self, raw):
        out = preprocess(raw)
        trig = out.trigger()
        # pulse plateaus survive at full amplitude, baseline stays near zero
        assert trig.max() > 4.5
        assert np.abs(trig[:400]).max() < 0.5

    def test_eeg_channel_cleaned(self, raw):
        out = preprocess(raw)
        eeg = out.data[0][1000:-1000]
        n = eeg.size
        spectrum = np.abs(np.fft.rfft(eeg * np.hanning(n))) / n
        freqs = np.fft.rfftfreq(n, 1.0 / 250.0)

        def level(f):
            return spectrum[np.argmin(np.abs(freqs - f))]

        assert level(50.0) < 1e-4 * level(10.0)
        assert level(0.2) < 0.02 * level(10.0)

    def test_trial_bounds_rescaled(self, raw):
        marked = raw.with_data(raw.data, trial_bounds=((1000, 3000), (8000, 12000)))
        out = preprocess(marked)
        assert out.trial_bounds == ((250, 750), (2000, 3000))
