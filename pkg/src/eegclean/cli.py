"""Command line entry points."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import pipeline, segmentation, storage, synth
from .config import PipelineConfig, load_config
from .errors import PipelineStageError
from .metrics import channel_eog_cc, snr
from .model import msf_to_json_dict


def _add_config_args(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--k", type=int, dest="k_selected", help="components to reject")
    p.add_argument("--alpha", type=float, help="attenuation strength in [0, 1]")
    p.add_argument("--slope-s", type=float, dest="wmsf_slope_s",
                   help="transition slope length in seconds")
    p.add_argument("--max-lag", type=int, help="correlation lag search bound")
    p.add_argument("--epoch-s", type=float, dest="epoch_len_s",
                   help="SNR epoch length in seconds")
    p.add_argument("--seed", type=int, dest="ica_seed", help="ICA seed")


def _config_from(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    return cfg.override(
        k_selected=getattr(args, "k_selected", None),
        alpha=getattr(args, "alpha", None),
        wmsf_slope_s=getattr(args, "wmsf_slope_s", None),
        max_lag=getattr(args, "max_lag", None),
        epoch_len_s=getattr(args, "epoch_len_s", None),
        ica_seed=getattr(args, "ica_seed", None),
    )


def _cmd_synth(args) -> int:
    spec_kwargs = dict(seed=args.seed)
    if args.channels is not None:
        spec_kwargs["n_channels"] = args.channels
    if args.sources is not None:
        spec_kwargs["n_sources"] = args.sources
    if args.rate is not None:
        spec_kwargs["sample_rate"] = args.rate
    if args.blink_rate is not None:
        spec_kwargs["blink_rate_per_min"] = args.blink_rate
    if args.blink_amplitude is not None:
        spec_kwargs["blink_amplitude"] = args.blink_amplitude
    if args.trial_durations is not None:
        spec_kwargs["trial_durations_s"] = tuple(
            float(x) for x in args.trial_durations.split(","))
    spec = synth.SynthSpec(**spec_kwargs)
    recording, truth = synth.generate(spec)
    storage.save_recording(recording, args.out)
    print(f"wrote {args.out}: {recording.n_channels} channels x "
          f"{recording.n_samples} samples at {recording.sample_rate:g} Hz")
    if args.msf_out:
        storage.save_msf(truth.true_msf, recording.sample_rate, args.msf_out)
        print(f"wrote {args.msf_out}: {len(truth.true_msf.intervals)} intervals")
    if args.truth_out:
        storage.write_json_report({
            "mixing": truth.mixing,
            "blink_source_index": truth.blink_source_index,
            "trial_bounds": [[s, e] for s, e in truth.trial_bounds],
            "true_msf": msf_to_json_dict(truth.true_msf, recording.sample_rate),
            "seed": spec.seed,
        }, args.truth_out)
        print(f"wrote {args.truth_out}")
    return 0


def _cmd_preprocess(args) -> int:
    cfg = _config_from(args)
    recording = storage.load_recording(args.input)
    out = pipeline._preprocess(recording, cfg)
    storage.save_recording(out, args.out)
    print(f"wrote {args.out}: {out.n_samples} samples at {out.sample_rate:g} Hz")
    return 0


def _cmd_segment(args) -> int:
    recording = storage.load_recording(args.input)
    events = segmentation.detect_triggers(recording.trigger(), recording.sample_rate)
    out = segmentation.segment(recording, events)
    storage.save_recording(out, args.out)
    print(f"wrote {args.out}: {len(out.trial_bounds)} trials from "
          f"{len(events.rising_edges)} trigger edges")
    return 0


def _cmd_run(args) -> int:
    cfg = _config_from(args)
    files = pipeline.run_pipeline(cfg, args.input, args.msf, args.mode, args.out_dir)
    for name in sorted(files):
        print(files[name])
    return 0


def _cmd_eval(args) -> int:
    cfg = _config_from(args)
    recording = storage.load_recording(args.input)
    cc = channel_eog_cc(recording, cfg.max_lag)
    report = snr(recording, cfg.epoch_len_s)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "eval.json"
    storage.write_json_report(
        {"channel_eog_cc": cc, "snr": report.to_json_dict(),
         "config": cfg.to_json_dict()}, path)
    print(path)
    return 0


def _cmd_annotate(args) -> int:
    from .server import create_app

    recording = storage.load_recording(args.input)
    app = create_app(recording, args.msf, static_dir=args.ui_dir)
    if not args.serve:
        print(f"{recording.n_channels} channels x {recording.n_samples} samples; "
              f"pass --serve to start the annotation service")
        return 0
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eegclean",
        description="EEG eye-artifact removal with EOG-guided ICA rejection")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic session")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--channels", type=int)
    p.add_argument("--sources", type=int)
    p.add_argument("--rate", type=float)
    p.add_argument("--blink-rate", type=float)
    p.add_argument("--blink-amplitude", type=float)
    p.add_argument("--trial-durations", help="comma-separated seconds")
    p.add_argument("--msf-out", help="write the true marking here")
    p.add_argument("--truth-out", help="write ground truth JSON here")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("preprocess", help="resample and filter a recording")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    _add_config_args(p)
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("segment", help="detect triggers and set trial bounds")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("run", help="full cleaning pipeline")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--msf", help="marking JSON (required for pr and diminished)")
    p.add_argument("--mode", choices=list(pipeline.Modes), required=True)
    p.add_argument("--out-dir", required=True)
    _add_config_args(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("eval", help="EOG correlation and SNR of a recording")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-dir", required=True)
    _add_config_args(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("annotate", help="serve the annotation tool")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--msf", required=True, help="marking JSON path (created on save)")
    p.add_argument("--serve", action="store_true")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8321)
    p.add_argument("--ui-dir", help="static frontend build to serve")
    p.set_defaults(func=_cmd_annotate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PipelineStageError as exc:
        print(f"error in {exc.stage}: {exc.cause}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
