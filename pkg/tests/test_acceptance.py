"""Acceptance gate: one test per release criterion, stated tolerances only.

Each test prints a single [PASS]/[FAIL] line for its criterion over the
captured output, and the -v test status mirrors it. Session-level criteria
share one module-scoped bank of synthetic sessions.
"""
import time
from dataclasses import replace

import numpy as np
import pytest

from eegclean.config import PipelineConfig
from eegclean.dsp import apply_zero_phase, design_bandstop, design_fir
from eegclean.ica import IcaConfig, fit_ica, remix, unmix
from eegclean.metrics import amari_index, channel_eog_cc, reduction, snr
from eegclean.model import MembershipFunction, Recording
from eegclean.pipeline import run_pipeline
from eegclean.rejection import (build_correlation_report, complete_reject,
                                fit_diminished_unmixing, msf_to_wmsf,
                                partial_reject, select_artifactual,
                                unmixing_difference)
from eegclean.segmentation import detect_triggers, segment
from eegclean.storage import save_msf, save_recording
from eegclean.synth import SynthSpec, generate

FS = 250.0
N_SESSIONS = 20
WMSF_SLOPE = 25  # samples: 0.1 s of transition at 250 Hz


def criterion(name: str, ok: bool, detail: str = ""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
    assert ok, f"{name}: {detail}"


def decompose(seed: int) -> dict:
    """Generate, segment, and decompose one session; no filtering stage, the
    generator already emits band-limited signals at the target rate."""
    rec, truth = generate(SynthSpec(seed=seed))
    seg = segment(rec, detect_triggers(rec.trigger(), rec.sample_rate))
    eeg = seg.eeg_subset()
    w = fit_ica(eeg.data, channel_labels=eeg.labels)
    comps = unmix(w, eeg)
    report = select_artifactual(build_correlation_report(seg.eog(), comps), k=1)
    return {"rec": rec, "truth": truth, "seg": seg, "eeg": eeg, "w": w,
            "comps": comps, "report": report}


@pytest.fixture(scope="module")
def bank():
    return [decompose(seed) for seed in range(N_SESSIONS)]


def replace_eeg(seg: Recording, cleaned: Recording) -> Recording:
    data = seg.data.copy()
    for row, idx in zip(cleaned.data, seg.eeg_indices()):
        data[idx] = row
    return seg.with_data(data)


def reduction_percent(session: dict, cleaned_eeg: Recording) -> float:
    before = channel_eog_cc(session["seg"])
    after = channel_eog_cc(replace_eeg(session["seg"], cleaned_eeg))
    return reduction(list(before.values()), list(after.values()),
                     tuple(before)).reduction_percent


def test_filter_suite():
    t0 = time.perf_counter()
    lp = design_fir("lowpass", FS, 47.0)
    hp = design_fir("highpass", FS, 1.0)
    bs = design_bandstop(FS, 49.0, 51.0, 4)
    orders_ok = lp.order == 15 and hp.order == 750

    # double-pass line rejection through the lowpass + band-stop pair
    t = np.arange(int(40 * FS)) / FS
    line = np.sin(2 * np.pi * 50.0 * t)
    residual = apply_zero_phase(apply_zero_phase(line, lp), bs)
    core = slice(3000, -3000)
    attenuation_db = -20.0 * np.log10(np.std(residual[core]) / np.std(line[core]))
    line_ok = attenuation_db >= 60.0

    # zero group delay: windowed passband sine stays aligned with its input
    probe = np.sin(2 * np.pi * 10.0 * t) * np.hanning(t.size)
    delay_ok = True
    for filt in (lp, hp, bs):
        out = apply_zero_phase(probe, filt)
        xc = np.correlate(out, probe, mode="full")
        delay_ok &= int(np.argmax(xc)) - (t.size - 1) == 0

    elapsed = time.perf_counter() - t0
    criterion(
        "filter suite",
        orders_ok and line_ok and delay_ok and elapsed < 10.0,
        f"orders ({lp.order}, {hp.order}), 50 Hz -{attenuation_db:.0f} dB, "
        f"aligned={delay_ok}, {elapsed:.1f} s")


def test_ica_oracle():
    t0 = time.perf_counter()
    t_len = 100_000
    failures = []
    worst_roundtrip = 0.0
    for seed in range(10):
        rng = np.random.default_rng(seed)
        sources = rng.laplace(size=(8, t_len))
        mixing = rng.uniform(-1.0, 1.0, (8, 8)) + np.eye(8)
        data = mixing @ sources
        w = fit_ica(data)
        if amari_index(w.w, mixing) >= 0.1:
            failures.append(seed)
        rec = Recording(FS, w.channel_labels, data)
        back = remix(w, unmix(w, rec))
        rel = np.linalg.norm(back.data - data) / np.linalg.norm(data)
        worst_roundtrip = max(worst_roundtrip, rel)
    elapsed = time.perf_counter() - t0
    criterion(
        "ICA oracle",
        len(failures) <= 1 and worst_roundtrip < 1e-8 and elapsed < 120.0,
        f"{10 - len(failures)}/10 seeds under 0.1, "
        f"round-trip {worst_roundtrip:.1e}, {elapsed:.0f} s")


def test_selection(bank):
    hits = 0
    for session in bank:
        blink = session["truth"].blink_source
        comps = session["comps"].components
        scores = [abs(np.corrcoef(c, blink)[0, 1]) for c in comps]
        blink_component = int(np.argmax(scores))
        if session["report"].selected == (blink_component,):
            hits += 1
    criterion("selection", hits >= 19, f"{hits}/{N_SESSIONS} seeds")


def test_cr_pr_reduction(bank):
    worst_cr, worst_pr, worst_gap = np.inf, np.inf, 0.0
    for session in bank[:10]:
        w, comps, report = session["w"], session["comps"], session["report"]
        cr = reduction_percent(session, remix(w, complete_reject(comps, report.selected)))
        wmsf = msf_to_wmsf(session["truth"].true_msf, WMSF_SLOPE)
        pr_comps = partial_reject(comps, report.selected, wmsf, alpha=1.0)
        pr = reduction_percent(session, remix(w, pr_comps))
        worst_cr = min(worst_cr, cr)
        worst_pr = min(worst_pr, pr)
        worst_gap = max(worst_gap, abs(cr - pr))
    criterion(
        "CR/PR reduction",
        worst_cr >= 60.0 and worst_pr >= 50.0 and worst_gap <= 15.0,
        f"CR >= {worst_cr:.1f}%, PR >= {worst_pr:.1f}%, gap <= {worst_gap:.1f} pts")


def test_pr_locality(bank):
    session = bank[0]
    w, comps, report = session["w"], session["comps"], session["report"]
    roundtrip = remix(w, comps)

    wmsf = msf_to_wmsf(session["truth"].true_msf, WMSF_SLOPE)
    pr = remix(w, partial_reject(comps, report.selected, wmsf, alpha=1.0))
    outside = wmsf.values == 0.0
    scale = np.abs(roundtrip.data).max()
    worst = np.abs(pr.data[:, outside] - roundtrip.data[:, outside]).max() / scale

    from eegclean.model import WindowedMembershipFunction
    ones = WindowedMembershipFunction(comps.n_samples, np.ones(comps.n_samples), 0)
    pr_full = partial_reject(comps, report.selected, ones, alpha=1.0)
    cr_full = complete_reject(comps, report.selected)
    identical = np.array_equal(pr_full.components, cr_full.components)

    criterion("PR locality", worst < 1e-9 and identical,
              f"outside-marking deviation {worst:.1e}, full-strength match={identical}")


def test_diminished_unmixing(bank):
    improved = 0
    for session in bank[:10]:
        truth = session["truth"]
        w_prime = fit_diminished_unmixing(session["eeg"], truth.true_msf)
        a = amari_index(session["w"].w, truth.neural_mixing)
        b = amari_index(w_prime.w, truth.neural_mixing)
        if b < a:
            improved += 1

    session = bank[0]
    empty = MembershipFunction(session["eeg"].n_samples)
    w_same = fit_diminished_unmixing(session["eeg"], empty)
    d, d_lr = unmixing_difference(session["w"], w_same)
    degenerate_ok = bool(np.all(d == 0.0) and np.all(np.isneginf(d_lr)))

    criterion("diminished unmixing", improved >= 8 and degenerate_ok,
              f"{improved}/10 seeds improved, empty-marking sentinels={degenerate_ok}")


def test_snr_direction(bank):
    cr_up, pr_up = 0, 0
    for session in bank[:10]:
        w, comps, report = session["w"], session["comps"], session["report"]
        before = snr(session["seg"]).overall
        cr_after = snr(remix(w, complete_reject(comps, report.selected))).overall
        wmsf = msf_to_wmsf(session["truth"].true_msf, WMSF_SLOPE)
        pr_after = snr(remix(w, partial_reject(comps, report.selected, wmsf))).overall
        cr_up += cr_after > before
        pr_up += pr_after > before
    criterion("SNR direction", cr_up >= 8 and pr_up >= 8,
              f"CR up on {cr_up}/10, PR up on {pr_up}/10")


# frozen reference columns: published per-channel cumulative coefficients
# (x 1e-5) before cleaning and after each rejection mode, with the quoted
# reduction percentages they are supposed to reproduce
REFERENCE_BEFORE = (2.7657, 2.4154, 1.1386, 0.9353, 0.9562, 0.8500, 2.7674,
                    1.9507, 1.4484, 1.1308, 0.5083, 0.8184, 0.8772, 0.8021)
REFERENCE_AFTER_CR = (0.3279, 0.2192, 0.4025, 0.3702, 0.2161, 0.3119, 0.3168,
                      0.3080, 0.3923, 0.3498, 0.2243, 0.4198, 0.2856, 0.2833)
REFERENCE_AFTER_PR = (0.3354, 0.2209, 0.5064, 0.4553, 0.2582, 0.3027, 0.2911,
                      0.2769, 0.4330, 0.3683, 0.2378, 0.4529, 0.3490, 0.3026)


def test_reduction_fixture_complete():
    got = reduction(REFERENCE_BEFORE, REFERENCE_AFTER_CR).reduction_percent
    criterion("reduction fixture, complete mode", abs(got - 77.13) <= 0.01,
              f"{got:.4f}% vs 77.13%")


def test_reduction_fixture_partial():
    # the mean-based formula gives 75.26% for these columns; the quoted
    # figure is 72.68% and no aggregation we tried reproduces it (see the
    # complete-mode fixture, which the same formula does reproduce)
    got = reduction(REFERENCE_BEFORE, REFERENCE_AFTER_PR).reduction_percent
    criterion("reduction fixture, partial mode", abs(got - 72.68) <= 0.01,
              f"{got:.4f}% vs 72.68%")


FULL_TRIAL_S = (433.0, 331.0, 474.0, 487.0, 80.0)  # 7:13, 5:31, 7:54, 8:07, 1:20


def test_trial_lengths_after_downsampling():
    from eegclean.dsp import preprocess
    fs = 2048.0
    lead = int(2.0 * fs)
    gap = int(2.0 * fs)
    pulse = int(0.1 * fs)
    starts, pos = [], lead
    for d in FULL_TRIAL_S:
        starts.append(pos)
        pos += int(round(d * fs)) + gap
    total = pos + lead
    trig = np.zeros(total)
    for s, d in zip(starts, FULL_TRIAL_S):
        e = s + int(round(d * fs))
        trig[s:s + pulse] = 5.0
        trig[e:e + pulse] = 5.0
    end_marker = starts[-1] + int(round(FULL_TRIAL_S[-1] * fs)) + int(1.0 * fs)
    trig[end_marker:end_marker + pulse] = 5.0

    t = np.arange(total) / fs
    rec = Recording(fs, ("Cz", "TRIG"),
                    np.stack([np.sin(2 * np.pi * 9.0 * t), trig]),
                    trigger_index=1)
    pre = preprocess(rec)
    seg = segment(pre, detect_triggers(pre.trigger(), pre.sample_rate))
    lengths = [e - s for s, e in seg.trial_bounds]
    expected = [round(d * FS) for d in FULL_TRIAL_S]
    off = max(abs(l - x) for l, x in zip(lengths, expected))
    criterion("trial lengths after downsampling",
              len(lengths) == len(expected) and off <= 1,
              f"max deviation {off} sample(s) over {lengths}")


def test_run_determinism(tmp_path):
    rec, truth = generate(SynthSpec(seed=17, trial_durations_s=(10.3, 9.2, 8.1)))
    rec_path = tmp_path / "session.eegr"
    save_recording(rec, rec_path)
    # marking drawn on the preprocessed timeline, which here keeps the length
    msf_path = tmp_path / "marks.json"
    save_msf(truth.true_msf, rec.sample_rate, msf_path)

    config = PipelineConfig(k_selected=1)
    same = True
    for mode, marks in (("cr", None), ("pr", msf_path)):
        a = run_pipeline(config, rec_path, marks, mode, tmp_path / f"{mode}_a")
        b = run_pipeline(config, rec_path, marks, mode, tmp_path / f"{mode}_b")
        for name in a:
            same &= open(a[name], "rb").read() == open(b[name], "rb").read()
    criterion("run determinism", same, "all outputs byte-identical" if same else
              "outputs differ between identical runs")
