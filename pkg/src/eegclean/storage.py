"""File formats: binary recordings, marking files, and report writers.

Recording files are a 4-byte magic, a little-endian uint32 header length, a
JSON header, and a channel-major float64 little-endian payload. The header
carries the channel layout and any trial bounds, so save/load round-trips
bit-exactly.

Report writers are deterministic: keys sorted, fixed float formatting rules,
no timestamps. Two identical runs produce identical bytes.
"""
from __future__ import annotations

import json
import math
import os
import struct
from pathlib import Path

import numpy as np

from .errors import (MalformedHeaderError, TruncatedPayloadError,
                     UnsupportedVersionError)
from .model import (MembershipFunction, Recording, msf_from_json_dict,
                    msf_to_json_dict)

__all__ = [
    "save_recording", "load_recording",
    "save_msf", "load_msf",
    "write_json_report", "write_csv_report",
]

MAGIC = b"EEGR"
FORMAT_VERSION = 1


def save_recording(recording: Recording, path: str | Path) -> None:
    header = {
        "version": FORMAT_VERSION,
        "sample_rate": recording.sample_rate,
        "channel_labels": list(recording.labels),
        "eog_index": recording.eog_index,
        "trigger_index": recording.trigger_index,
        "sample_count": recording.n_samples,
        "encoding": "f8-le",
        "trial_bounds": [[s, e] for s, e in recording.trial_bounds],
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    payload = np.ascontiguousarray(recording.data, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(payload)


def load_recording(path: str | Path) -> Recording:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 8 or raw[:4] != MAGIC:
        raise MalformedHeaderError(f"{path}: not a recording file (bad magic)")
    (header_len,) = struct.unpack("<I", raw[4:8])
    if len(raw) < 8 + header_len:
        raise MalformedHeaderError(f"{path}: header truncated")
    try:
        header = json.loads(raw[8:8 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedHeaderError(f"{path}: unparseable header: {exc}") from exc
    version = header.get("version")
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"{path}: format version {version!r}, supported: {FORMAT_VERSION}")
    try:
        labels = tuple(header["channel_labels"])
        sample_count = int(header["sample_count"])
        sample_rate = float(header["sample_rate"])
        eog_index = header["eog_index"]
        trigger_index = header["trigger_index"]
        encoding = header["encoding"]
        bounds = tuple((int(s), int(e)) for s, e in header["trial_bounds"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedHeaderError(f"{path}: incomplete header: {exc}") from exc
    if encoding != "f8-le":
        raise MalformedHeaderError(f"{path}: unknown payload encoding {encoding!r}")
    expected = 8 * len(labels) * sample_count
    payload = raw[8 + header_len:]
    if len(payload) != expected:
        raise TruncatedPayloadError(
            f"{path}: expected {expected} payload bytes, found {len(payload)}")
    data = np.frombuffer(payload, dtype="<f8").reshape(len(labels), sample_count)
    return Recording(
        sample_rate=sample_rate,
        labels=labels,
        data=data.copy(),
        eog_index=eog_index,
        trigger_index=trigger_index,
        trial_bounds=bounds,
    )


def save_msf(msf: MembershipFunction, sample_rate: float, path: str | Path) -> None:
    write_json_report(msf_to_json_dict(msf, sample_rate), path)


def load_msf(path: str | Path) -> tuple[MembershipFunction, float]:
    with open(path, "r", encoding="utf-8") as fh:
        return msf_from_json_dict(json.load(fh))


def _jsonable(value):
    """Recursively convert arrays and non-finite floats for strict JSON."""
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.floating, float)):
        f = float(value)
        if math.isnan(f):
            return None
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_json_report(obj: dict, path: str | Path) -> None:
    text = json.dumps(_jsonable(obj), sort_keys=True, indent=2, allow_nan=False)
    _atomic_write_text(Path(path), text + "\n")


def write_csv_report(rows: list[list], path: str | Path) -> None:
    """Small deterministic CSV writer; cells are formatted with repr for
    floats so values round-trip."""
    lines = []
    for row in rows:
        cells = []
        for cell in row:
            cell = _jsonable(cell)
            if cell is None:
                cells.append("")
            elif isinstance(cell, float):
                cells.append(repr(cell))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    _atomic_write_text(Path(path), "\n".join(lines) + "\n")


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)
