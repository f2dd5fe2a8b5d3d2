"""HTTP service backing the browser annotation tool.

Serves recording metadata and display-decimated signal windows, and owns the
marking file: reads return the current normalized state plus a revision
token, writes must quote that token and are persisted atomically. A stale
token gets 409 so two browser tabs cannot silently clobber each other.
"""
from __future__ import annotations

import threading
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .model import (MembershipFunction, Recording, msf_from_json_dict,
                    msf_normalize, msf_to_json_dict)
from .rejection import DEFAULT_MAX_LAG, eog_component_correlation
from . import storage

__all__ = ["create_app", "suggested_channels"]

MAX_WINDOW_BINS = 2000


def suggested_channels(recording: Recording, count: int = 4,
                       max_lag: int = DEFAULT_MAX_LAG) -> list[str]:
    """EOG plus the EEG channels that track it most strongly.

    Correlation strength is the absolute lagged coefficient without the
    negative-only clamp, computed over trials when present, else over the
    whole recording. Best-first, ties by channel order.
    """
    if recording.eog_index is None:
        return [recording.labels[i] for i in recording.eeg_indices()[:count]]
    eog = recording.eog()
    bounds = recording.trial_bounds or ((0, recording.n_samples),)
    scores = []
    for i in recording.eeg_indices():
        total = 0.0
        for s, e in bounds:
            neg = eog_component_correlation(eog[s:e], recording.data[i, s:e], max_lag)
            pos = eog_component_correlation(eog[s:e], -recording.data[i, s:e], max_lag)
            total += max(abs(neg), abs(pos))
        scores.append((-total, i))
    scores.sort()
    picked = [recording.labels[i] for _, i in scores[:count]]
    return [recording.labels[recording.eog_index]] + picked


def _decimate(samples: np.ndarray, bins: int) -> tuple[list[float], list[float]]:
    """Per-bin min/max envelope for display; raw copies when small enough."""
    n = samples.size
    if n <= bins:
        vals = samples.tolist()
        return vals, list(vals)
    edges = np.linspace(0, n, bins + 1).astype(int)
    mins, maxs = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        chunk = samples[a:max(b, a + 1)]
        mins.append(float(chunk.min()))
        maxs.append(float(chunk.max()))
    return mins, maxs


def create_app(recording: Recording, msf_path: str | Path,
               static_dir: str | Path | None = None) -> FastAPI:
    """Build the service around one read-only recording and one marking file."""
    app = FastAPI(title="eegclean annotation")
    msf_path = Path(msf_path)
    lock = threading.Lock()

    if msf_path.exists():
        initial, rate = storage.load_msf(msf_path)
        if rate != recording.sample_rate or initial.length != recording.n_samples:
            raise ValueError(
                f"{msf_path} was made for a different recording "
                f"({initial.length} samples at {rate} Hz)")
        state = {"msf": msf_normalize(initial), "revision": 1}
    else:
        state = {"msf": MembershipFunction(recording.n_samples), "revision": 1}

    suggestions = suggested_channels(recording)

    @app.get("/meta")
    def meta():
        return {
            "sample_rate": recording.sample_rate,
            "sample_count": recording.n_samples,
            "channel_labels": list(recording.labels),
            "eog_index": recording.eog_index,
            "trigger_index": recording.trigger_index,
            "trial_bounds": [[s, e] for s, e in recording.trial_bounds],
            "suggested_channels": suggestions,
        }

    @app.get("/window")
    def window(start: int, length: int, channels: str | None = None,
               bins: int = MAX_WINDOW_BINS):
        if start < 0 or length <= 0 or start + length > recording.n_samples:
            raise HTTPException(
                status_code=400,
                detail=f"window ({start}, {start + length}) outside "
                       f"[0, {recording.n_samples})")
        bins = min(max(1, bins), MAX_WINDOW_BINS)
        labels = channels.split(",") if channels else suggestions
        traces = []
        for label in labels:
            if label not in recording.labels:
                raise HTTPException(status_code=400, detail=f"unknown channel {label!r}")
            row = recording.data[recording.labels.index(label), start:start + length]
            mins, maxs = _decimate(row, bins)
            traces.append({"label": label, "min": mins, "max": maxs})
        return {"start": start, "length": length, "bins": len(traces[0]["min"]),
                "channels": traces}

    @app.get("/msf")
    def get_msf():
        with lock:
            body = msf_to_json_dict(state["msf"], recording.sample_rate)
            body["revision"] = state["revision"]
            return body

    @app.put("/msf")
    async def put_msf(request: Request):
        payload = await request.json()
        revision = payload.pop("revision", None)
        try:
            msf, rate = msf_from_json_dict(payload)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        if rate != recording.sample_rate or msf.length != recording.n_samples:
            raise HTTPException(
                status_code=400,
                detail=f"marking does not fit this recording "
                       f"({msf.length} samples at {rate} Hz)")
        with lock:
            if revision != state["revision"]:
                return JSONResponse(
                    status_code=409,
                    content={"detail": "marking changed since you loaded it",
                             "revision": state["revision"]})
            state["msf"] = msf_normalize(msf)
            state["revision"] += 1
            storage.save_msf(state["msf"], recording.sample_rate, msf_path)
            body = msf_to_json_dict(state["msf"], recording.sample_rate)
            body["revision"] = state["revision"]
            return body

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    return app
