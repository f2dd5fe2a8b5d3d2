"""Whitening and fixed-point ICA.

The unmixing matrix maps raw channels straight to components: the whitening
transform and the fitted rotation are composed once, and the channel means
removed before fitting are stored so a remix restores original baselines.

Fixed-point iteration with symmetric orthogonalization is used because it is
deterministic for a fixed seed and needs no learning-rate tuning. Component
order and sign are normalized after the fit (descending row norm, and each
mixing column's largest entry made positive) so downstream selection sees a
stable decomposition.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDataError, SchemaError
from .model import Recording

__all__ = ["IcaConfig", "UnmixingMatrix", "ComponentSet", "whiten", "fit_ica",
           "unmix", "remix"]

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class IcaConfig:
    max_iterations: int = 500
    tolerance: float = 1e-6
    seed: int = 0
    nonlinearity: str = "tanh"

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.nonlinearity not in ("tanh", "cube"):
            raise ValueError(f"nonlinearity must be tanh or cube, got {self.nonlinearity!r}")

    def to_json_dict(self) -> dict:
        return {
            "max_iterations": self.max_iterations,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "nonlinearity": self.nonlinearity,
        }


@dataclass(frozen=True)
class UnmixingMatrix:
    """Composed channels-to-components map and everything needed to undo it."""

    w: np.ndarray
    mixing: np.ndarray
    rotation: np.ndarray
    whitener: np.ndarray
    means: np.ndarray
    channel_labels: tuple[str, ...]
    config: IcaConfig
    converged: bool
    n_iterations: int
    diminished: bool = False

    def __post_init__(self):
        for name in ("w", "mixing", "rotation", "whitener", "means"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        n = self.w.shape[0]
        if self.w.shape != (n, n) or self.mixing.shape != (n, n):
            raise SchemaError(f"w and mixing must be square, got {self.w.shape} / {self.mixing.shape}")
        if len(self.channel_labels) != n:
            raise SchemaError(f"{len(self.channel_labels)} labels for {n} channels")
        if np.abs(self.w @ self.mixing - np.eye(n)).max() > 1e-8:
            raise SchemaError("mixing is not the inverse of w")
        object.__setattr__(self, "channel_labels", tuple(self.channel_labels))

    @property
    def n_components(self) -> int:
        return self.w.shape[0]

    def to_json_dict(self) -> dict:
        return {
            "channel_labels": list(self.channel_labels),
            "w": self.w.tolist(),
            "mixing": self.mixing.tolist(),
            "rotation": self.rotation.tolist(),
            "whitener": self.whitener.tolist(),
            "means": self.means.tolist(),
            "config": self.config.to_json_dict(),
            "converged": self.converged,
            "n_iterations": self.n_iterations,
            "diminished": self.diminished,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "UnmixingMatrix":
        return cls(
            w=np.array(obj["w"]),
            mixing=np.array(obj["mixing"]),
            rotation=np.array(obj["rotation"]),
            whitener=np.array(obj["whitener"]),
            means=np.array(obj["means"]),
            channel_labels=tuple(obj["channel_labels"]),
            config=IcaConfig(**obj["config"]),
            converged=bool(obj["converged"]),
            n_iterations=int(obj["n_iterations"]),
            diminished=bool(obj.get("diminished", False)),
        )


@dataclass(frozen=True)
class ComponentSet:
    """Component signals plus the trial structure they inherit.

    ``selectable`` is False for components obtained through an
    artifact-diminished unmixing; those exist for inspection and must not be
    fed back into rejection.
    """

    components: np.ndarray
    sample_rate: float
    trial_bounds: tuple[tuple[int, int], ...]
    source: UnmixingMatrix
    selectable: bool = True

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=np.float64)
        if comps.ndim != 2:
            raise SchemaError(f"components must be 2-D, got shape {comps.shape}")
        if comps.shape[0] != self.source.n_components:
            raise SchemaError(
                f"{comps.shape[0]} components for a {self.source.n_components}-row unmixing")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "trial_bounds",
                           tuple((int(s), int(e)) for s, e in self.trial_bounds))

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    @property
    def n_samples(self) -> int:
        return self.components.shape[1]


def whiten(data: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Zero-mean, identity-covariance transform via eigendecomposition.

    Returns (whitened data, whitening matrix, channel means). Eigenvalues are
    taken in descending order; a covariance condition number above 1e12 is
    rejected with the closest-to-degenerate channel named.
    """
    data = np.asarray(data, dtype=np.float64)
    n, t = data.shape
    if t <= n:
        raise DegenerateDataError(f"need more samples than channels, got {n}x{t}")
    means = data.mean(axis=1)
    centered = data - means[:, None]
    cov = centered @ centered.T / t
    evals, evecs = np.linalg.eigh(cov)
    evals, evecs = evals[::-1], evecs[:, ::-1]
    if evals[0] <= 0 or evals[-1] <= evals[0] / _COND_LIMIT:
        null_dir = np.argmax(np.abs(evecs[:, -1]))
        raise DegenerateDataError(
            f"channel covariance is rank deficient near channel {null_dir} "
            f"(eigenvalue {evals[-1]:.3e} vs largest {evals[0]:.3e})")
    whitener = (evecs / np.sqrt(evals)).T
    return whitener @ centered, whitener, means


def _symmetric_orthogonalize(w: np.ndarray) -> np.ndarray:
    # W <- (W W^T)^(-1/2) W, keeping all rows instead of favoring the first
    evals, evecs = np.linalg.eigh(w @ w.T)
    return (evecs / np.sqrt(evals)) @ evecs.T @ w


def fit_ica(data: np.ndarray, config: IcaConfig = IcaConfig(),
            channel_labels: tuple[str, ...] | None = None,
            diminished: bool = False) -> UnmixingMatrix:
    """Fixed-point ICA on channels x samples data.

    Convergence is declared when every row of the rotation stops moving
    (the largest deviation of |diag(W_new W^T)| from 1 drops below the
    tolerance). Non-convergence is reported on the result, not raised.
    """
    data = np.asarray(data, dtype=np.float64)
    n, t = data.shape
    if channel_labels is None:
        channel_labels = tuple(f"ch{i:02d}" for i in range(n))
    z, whitener, means = whiten(data)
    rng = np.random.default_rng(config.seed)
    w = _symmetric_orthogonalize(rng.standard_normal((n, n)))
    converged = False
    iterations = config.max_iterations
    for it in range(config.max_iterations):
        y = w @ z
        if config.nonlinearity == "tanh":
            g = np.tanh(y)
            g_prime_mean = (1.0 - g ** 2).mean(axis=1)
        else:
            g = y ** 3
            g_prime_mean = 3.0 * (y ** 2).mean(axis=1)
        w_new = (g @ z.T) / t - g_prime_mean[:, None] * w
        w_new = _symmetric_orthogonalize(w_new)
        delta = np.abs(np.abs((w_new * w).sum(axis=1)) - 1.0).max()
        w = w_new
        if delta < config.tolerance:
            converged = True
            iterations = it + 1
            break

    composed = w @ whitener
    mixing = np.linalg.inv(composed)
    # sign convention: the dominant channel of every component projects positively
    for j in range(n):
        i = np.argmax(np.abs(mixing[:, j]))
        if mixing[i, j] < 0:
            mixing[:, j] = -mixing[:, j]
            composed[j, :] = -composed[j, :]
            w[j, :] = -w[j, :]
    order = np.argsort(-np.linalg.norm(composed, axis=1), kind="stable")
    composed = composed[order]
    w = w[order]
    mixing = mixing[:, order]
    return UnmixingMatrix(
        w=composed,
        mixing=mixing,
        rotation=w,
        whitener=whitener,
        means=means,
        channel_labels=channel_labels,
        config=config,
        converged=converged,
        n_iterations=iterations,
        diminished=diminished,
    )


def unmix(w: UnmixingMatrix, recording: Recording) -> ComponentSet:
    """Apply the unmixing to a recording with matching channels."""
    if recording.labels != w.channel_labels:
        raise SchemaError(
            f"channel labels {recording.labels} do not match unmixing labels "
            f"{w.channel_labels}")
    comps = w.w @ (recording.data - w.means[:, None])
    return ComponentSet(
        components=comps,
        sample_rate=recording.sample_rate,
        trial_bounds=recording.trial_bounds,
        source=w,
        selectable=not w.diminished,
    )


def remix(w: UnmixingMatrix, components: ComponentSet) -> Recording:
    """Mix components back into channels, restoring the stored means."""
    if components.n_components != w.n_components:
        raise SchemaError(
            f"{components.n_components} components for a {w.n_components}-row unmixing")
    data = w.mixing @ components.components + w.means[:, None]
    return Recording(
        sample_rate=components.sample_rate,
        labels=w.channel_labels,
        data=data,
        trial_bounds=components.trial_bounds,
    )
