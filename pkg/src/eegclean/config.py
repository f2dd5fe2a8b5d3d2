"""Pipeline configuration with strict JSON loading."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .ica import IcaConfig

__all__ = ["PipelineConfig", "load_config"]


@dataclass(frozen=True)
class PipelineConfig:
    target_rate: float = 250.0
    highpass_hz: float = 1.0
    lowpass_hz: float = 47.0
    bandstop_low_hz: float = 49.0
    bandstop_high_hz: float = 51.0
    bandstop_order: int = 4
    max_lag: int = 7
    k_selected: int = 2
    alpha: float = 1.0
    wmsf_slope_s: float = 0.5
    epoch_len_s: float = 1.0
    ica: IcaConfig = field(default_factory=IcaConfig)

    def __post_init__(self):
        if self.target_rate <= 0:
            raise ValueError(f"target_rate must be positive, got {self.target_rate}")
        if not 0 < self.highpass_hz < self.lowpass_hz < self.target_rate / 2:
            raise ValueError(
                f"need 0 < highpass < lowpass < Nyquist, got "
                f"{self.highpass_hz} / {self.lowpass_hz} at {self.target_rate}")
        if not 0 < self.bandstop_low_hz < self.bandstop_high_hz < self.target_rate / 2:
            raise ValueError(
                f"bad stop band ({self.bandstop_low_hz}, {self.bandstop_high_hz})")
        if self.max_lag < 0:
            raise ValueError(f"max_lag must be >= 0, got {self.max_lag}")
        if self.k_selected < 1:
            raise ValueError(f"k_selected must be >= 1, got {self.k_selected}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.wmsf_slope_s < 0:
            raise ValueError(f"wmsf_slope_s must be >= 0, got {self.wmsf_slope_s}")
        if self.epoch_len_s <= 0:
            raise ValueError(f"epoch_len_s must be positive, got {self.epoch_len_s}")

    def to_json_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "ica"}
        out["ica"] = self.ica.to_json_dict()
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(obj)
        if "ica" in kwargs:
            ica_obj = kwargs["ica"]
            ica_known = {f.name for f in fields(IcaConfig)}
            ica_unknown = set(ica_obj) - ica_known
            if ica_unknown:
                raise ValueError(f"unknown ica config keys: {sorted(ica_unknown)}")
            kwargs["ica"] = IcaConfig(**ica_obj)
        return cls(**kwargs)

    def override(self, **kwargs) -> "PipelineConfig":
        """Replace selected fields, ignoring None values (unset CLI flags)."""
        ica_updates = {k[4:]: v for k, v in kwargs.items()
                       if k.startswith("ica_") and v is not None}
        updates = {k: v for k, v in kwargs.items()
                   if not k.startswith("ica_") and v is not None}
        cfg = replace(self, **updates) if updates else self
        if ica_updates:
            cfg = replace(cfg, ica=replace(cfg.ica, **ica_updates))
        return cfg


def load_config(path: str | Path) -> PipelineConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return PipelineConfig.from_json_dict(json.load(fh))
