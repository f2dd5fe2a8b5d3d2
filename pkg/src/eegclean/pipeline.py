"""End-to-end pipeline: preprocess, segment, decompose, select, reject, report.

Every stage failure is wrapped with the stage name so the CLI can report
where a run died. Outputs are deterministic for a fixed config and seed.
"""
from __future__ import annotations

from pathlib import Path

from . import dsp, metrics, rejection, segmentation, storage
from .config import PipelineConfig
from .errors import PipelineStageError, SchemaError
from .ica import fit_ica, remix, unmix
from .model import MembershipFunction, Recording
from .rejection import CorrelationReport

__all__ = ["run_pipeline", "Modes"]

Modes = ("cr", "pr", "diminished")


def _stage(name: str):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, PipelineStageError):
                raise PipelineStageError(name, exc) from exc
            return False

    return _Ctx()


def _preprocess(recording: Recording, config: PipelineConfig) -> Recording:
    return dsp.preprocess(
        recording,
        target_rate=config.target_rate,
        highpass_hz=config.highpass_hz,
        lowpass_hz=config.lowpass_hz,
        bandstop_low_hz=config.bandstop_low_hz,
        bandstop_high_hz=config.bandstop_high_hz,
        bandstop_order=config.bandstop_order,
    )


def _segment(recording: Recording) -> Recording:
    events = segmentation.detect_triggers(recording.trigger(), recording.sample_rate)
    return segmentation.segment(recording, events)


def _replace_eeg(full: Recording, cleaned_eeg: Recording) -> Recording:
    data = full.data.copy()
    for row, idx in zip(cleaned_eeg.data, full.eeg_indices()):
        data[idx] = row
    return full.with_data(data)


def _load_required_msf(msf_path, expected_length: int,
                       expected_rate: float) -> MembershipFunction:
    if msf_path is None:
        raise ValueError("this mode needs a marking file (annotate first)")
    msf, rate = storage.load_msf(msf_path)
    if rate != expected_rate:
        raise SchemaError(
            f"marking was made at {rate} Hz but the preprocessed recording "
            f"runs at {expected_rate} Hz")
    if msf.length != expected_length:
        raise SchemaError(
            f"marking covers {msf.length} samples but the preprocessed "
            f"recording has {expected_length}; annotate the preprocessed data")
    return msf


def run_pipeline(config: PipelineConfig, input_path: str | Path,
                 msf_path: str | Path | None, mode: str,
                 output_dir: str | Path) -> dict[str, str]:
    """Run one cleaning mode end to end, returning the written file paths."""
    if mode not in Modes:
        raise ValueError(f"mode must be one of {Modes}, got {mode!r}")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)

    with _stage("load"):
        raw = storage.load_recording(input_path)
    with _stage("preprocess"):
        pre = _preprocess(raw, config)
    with _stage("segment"):
        seg = _segment(pre)
    with _stage("decompose"):
        eeg = seg.eeg_subset()
        w = fit_ica(eeg.data, config=config.ica, channel_labels=eeg.labels)
        comps = unmix(w, eeg)
    with _stage("select"):
        report = rejection.build_correlation_report(seg.eog(), comps, config.max_lag)
        report = rejection.select_artifactual(report, config.k_selected)

    files: dict[str, str] = {}
    summary: dict = {
        "mode": mode,
        "config": config.to_json_dict(),
        "input_samples": raw.n_samples,
        "preprocessed_samples": pre.n_samples,
        "trial_bounds": [[s, e] for s, e in seg.trial_bounds],
        "selected_components": list(report.selected),
        "ica": {"converged": w.converged, "n_iterations": w.n_iterations},
        "warnings": [] if w.converged else ["ICA did not converge"],
    }

    def emit(name: str, writer, *args):
        path = out / name
        writer(*args, path)
        files[name] = str(path)

    emit("correlation.json", storage.write_json_report, report.to_json_dict())
    emit("correlation.csv", storage.write_csv_report, _correlation_rows(report))

    if mode in ("cr", "pr"):
        with _stage("reject"):
            if mode == "cr":
                rejected = rejection.complete_reject(comps, report.selected)
            else:
                msf = _load_required_msf(msf_path, seg.n_samples, seg.sample_rate)
                slope = int(round(config.wmsf_slope_s * seg.sample_rate))
                wmsf = rejection.msf_to_wmsf(msf, slope)
                rejected = rejection.partial_reject(comps, report.selected, wmsf,
                                                    config.alpha)
        with _stage("reconstruct"):
            cleaned = _replace_eeg(seg, remix(w, rejected))
        with _stage("evaluate"):
            before = metrics.channel_eog_cc(seg, config.max_lag)
            after = metrics.channel_eog_cc(cleaned, config.max_lag)
            red = metrics.reduction(list(before.values()), list(after.values()),
                                    tuple(before))
            snr_before = metrics.snr(seg, config.epoch_len_s)
            snr_after = metrics.snr(cleaned, config.epoch_len_s)
        with _stage("write"):
            emit("cleaned.eegr", storage.save_recording, cleaned)
            emit("reduction.json", storage.write_json_report, red.to_json_dict())
            emit("reduction.csv", storage.write_csv_report, _reduction_rows(red))
            emit("snr.json", storage.write_json_report,
                 {"before": snr_before.to_json_dict(), "after": snr_after.to_json_dict()})
        summary["reduction_percent"] = red.reduction_percent
        summary["snr_overall"] = {"before": snr_before.overall,
                                  "after": snr_after.overall}
    else:
        with _stage("refit"):
            msf = _load_required_msf(msf_path, seg.n_samples, seg.sample_rate)
            w_prime = rejection.fit_diminished_unmixing(eeg, msf, config.ica)
            d, d_lr = rejection.unmixing_difference(w, w_prime)
            comps_prime = unmix(w_prime, eeg)
            report_prime = rejection.build_correlation_report(
                seg.eog(), comps_prime, config.max_lag)
        with _stage("write"):
            emit("unmixing.json", storage.write_json_report, w.to_json_dict())
            emit("unmixing_diminished.json", storage.write_json_report,
                 w_prime.to_json_dict())
            emit("difference.json", storage.write_json_report,
                 {"d": d, "d_lr": d_lr})
            emit("difference.csv", storage.write_csv_report,
                 [list(row) for row in d_lr])
            emit("correlation_diminished.json", storage.write_json_report,
                 report_prime.to_json_dict())
        summary["ica_diminished"] = {"converged": w_prime.converged,
                                     "n_iterations": w_prime.n_iterations}
        if not w_prime.converged:
            summary["warnings"].append("diminished ICA did not converge")

    with _stage("write"):
        # names only, so the report does not depend on where it was written
        summary["files"] = sorted(files)
        path = out / "report.json"
        storage.write_json_report(summary, path)
        files["report.json"] = str(path)
    return files


def _correlation_rows(report: CorrelationReport) -> list[list]:
    n, m = report.c.shape
    header = ["component"] + [f"trial{j + 1}" for j in range(m)] + ["cc", "selected"]
    rows = [header]
    for i in range(n):
        rows.append([i] + [report.c[i, j] for j in range(m)]
                    + [report.cc[i], int(i in report.selected)])
    return rows


def _reduction_rows(red) -> list[list]:
    rows = [["channel", "before", "after"]]
    for label, b, a in zip(red.labels, red.per_channel_before, red.per_channel_after):
        rows.append([label, b, a])
    rows.append(["reduction_percent", red.reduction_percent, ""])
    return rows
