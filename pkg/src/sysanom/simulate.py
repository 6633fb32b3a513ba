"""Seeded stochastic generators for the controlled contamination experiment.

All randomness flows through counter-based Philox streams keyed by
``(master_seed, stream_id)``: the algorithm is fixed rather than platform
default, so a key reproduces the same sequence everywhere, and distinct
stream ids give independent streams.  Gaussian variates apply the inverse
normal CDF to open-interval uniforms; heavy-tailed variates apply the
Lomax inverse CDF ``scale * ((1 - u)**(-1/shape) - 1)``, which reproduces
the tail faithfully instead of relying on a rejection scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.signal import lfilter
from scipy.special import ndtri

from .errors import InvalidLength, NonCausalSpec
from .indices import PairedSample
from .transfer import TransferMode, apply_transfer, clamped, eval_baseline

if TYPE_CHECKING:  # pragma: no cover - import cycle is type-only
    from .experiment import ScenarioSpec

__all__ = [
    "RngStream",
    "ArmaSpec",
    "LomaxSpec",
    "GeneratedScenario",
    "normal_sample",
    "lomax_quantile",
    "lomax_sample",
    "arma_generate",
    "scenario_generate",
]

_MASK64 = (1 << 64) - 1

# Stream ids reserved per replication: input process, input contamination,
# output contamination, one spare.
_X_STREAM = 0
_DELTA_STREAM = 1
_EPS_STREAM = 2
_STREAMS_PER_REPLICATION = 4


@dataclass(frozen=True)
class RngStream:
    """Deterministic random stream addressed by (master_seed, stream_id)."""

    master_seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array(
            [int(self.master_seed) & _MASK64, int(self.stream_id) & _MASK64],
            dtype=np.uint64,
        )
        return np.random.Generator(np.random.Philox(key=key))


def _open_uniform(gen: np.random.Generator, n: int) -> np.ndarray:
    # Uniforms on the open interval (0, 1): a 53-bit grid offset by half a
    # step, keeping inverse-CDF transforms away from both endpoints.
    return (gen.integers(0, 1 << 53, size=n, dtype=np.int64).astype(np.float64) + 0.5) * 2.0**-53


def _check_length(n) -> int:
    if int(n) != n or n < 1:
        raise InvalidLength(f"need a sequence length n >= 1, got {n!r}")
    return int(n)


def _check_causal(ar_coeffs: tuple[float, ...]) -> None:
    coeffs = list(ar_coeffs)
    while coeffs and coeffs[-1] == 0.0:
        coeffs.pop()
    if not coeffs:
        return
    # Roots of 1 - a_1 z - ... - a_p z^p must lie strictly outside the unit circle.
    poly = np.array([-c for c in reversed(coeffs)] + [1.0])
    roots = np.roots(poly)
    if roots.size and float(np.min(np.abs(roots))) <= 1.0:
        raise NonCausalSpec("autoregressive polynomial has a root on or inside the unit circle")


@dataclass(frozen=True)
class ArmaSpec:
    """Causal ARMA recursion around ``mean`` with iid Gaussian innovations.

    ``(x_t - mean) = sum_i ar_coeffs[i] (x_{t-i-1} - mean) + e_t
    + sum_j ma_coeffs[j] e_{t-j-1}`` with ``e_t ~ N(0, noise_sd**2)``.  The
    recursion starts at the mean with zero noise history and discards
    ``burn_in`` steps so the retained stretch is effectively stationary.
    """

    mean: float
    ar_coeffs: tuple[float, ...] = ()
    ma_coeffs: tuple[float, ...] = ()
    noise_sd: float = 1.0
    burn_in: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "ar_coeffs", tuple(float(c) for c in self.ar_coeffs))
        object.__setattr__(self, "ma_coeffs", tuple(float(c) for c in self.ma_coeffs))
        object.__setattr__(self, "noise_sd", float(self.noise_sd))
        object.__setattr__(self, "burn_in", int(self.burn_in))
        if not math.isfinite(self.mean):
            raise ValueError("mean must be finite")
        if not math.isfinite(self.noise_sd) or self.noise_sd <= 0.0:
            raise ValueError("noise_sd must be a positive finite real")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        for c in self.ar_coeffs + self.ma_coeffs:
            if not math.isfinite(c):
                raise ValueError("ARMA coefficients must be finite")
        _check_causal(self.ar_coeffs)


@dataclass(frozen=True)
class LomaxSpec:
    """Nonnegative heavy-tailed law with survival ``(1 + x/scale)**(-shape)``.

    The mean is ``scale / (shape - 1)`` when ``shape > 1`` and infinite
    otherwise; the variance is finite only when ``shape > 2``.
    """

    shape: float
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "shape", float(self.shape))
        object.__setattr__(self, "scale", float(self.scale))
        if not math.isfinite(self.shape) or self.shape <= 0.0:
            raise ValueError("shape must be a positive finite real")
        if not math.isfinite(self.scale) or self.scale <= 0.0:
            raise ValueError("scale must be a positive finite real")

    @property
    def mean(self) -> float:
        return self.scale / (self.shape - 1.0) if self.shape > 1.0 else math.inf


def normal_sample(mean: float, sd: float, n: int, rng: RngStream) -> np.ndarray:
    """iid Gaussians via the inverse normal CDF; ``sd == 0`` gives constants."""
    n = _check_length(n)
    if sd < 0.0:
        raise ValueError("sd must be nonnegative")
    if sd == 0.0:
        return np.full(n, float(mean))
    return float(mean) + float(sd) * ndtri(_open_uniform(rng.generator(), n))


def lomax_quantile(spec: LomaxSpec, u):
    """Inverse CDF of the Lomax law, defined for u in [0, 1)."""
    u_arr = np.asarray(u, dtype=np.float64)
    if np.any((u_arr < 0.0) | (u_arr >= 1.0)):
        raise ValueError("u must lie in [0, 1)")
    out = spec.scale * ((1.0 - u_arr) ** (-1.0 / spec.shape) - 1.0)
    if u_arr.ndim == 0:
        return float(out)
    return out


def lomax_sample(spec: LomaxSpec, n: int, rng: RngStream) -> np.ndarray:
    """iid heavy-tailed nonnegative draws via the inverse CDF."""
    n = _check_length(n)
    return lomax_quantile(spec, _open_uniform(rng.generator(), n))


def arma_generate(spec: ArmaSpec, n: int, rng: RngStream) -> np.ndarray:
    """Simulate ``n`` post-burn-in values of the ARMA recursion."""
    n = _check_length(n)
    gen = rng.generator()
    eta = spec.noise_sd * ndtri(_open_uniform(gen, n + spec.burn_in))
    ar_poly = np.concatenate([[1.0], -np.asarray(spec.ar_coeffs, dtype=np.float64)])
    ma_poly = np.concatenate([[1.0], np.asarray(spec.ma_coeffs, dtype=np.float64)])
    centered = lfilter(ma_poly, ar_poly, eta)
    return spec.mean + centered[spec.burn_in :]


@dataclass(frozen=True, eq=False)
class GeneratedScenario:
    """One replication's paired sample plus the raw pieces kept for audit."""

    sample: PairedSample
    y_clean: np.ndarray
    delta: np.ndarray
    eps: np.ndarray

    def __post_init__(self):
        for name in ("y_clean", "delta", "eps"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def scenario_generate(spec: ScenarioSpec, replication: int = 0) -> GeneratedScenario:
    """Generate one contaminated paired sample for ``spec``.

    The input process and the two contamination channels draw from three
    independent streams derived from ``(spec.seed, replication)``, so any
    subset of replications can be regenerated, in any order, with identical
    results.  A channel stays at zero when the transfer mode ignores it or
    its law is None.
    """
    if replication < 0:
        raise ValueError("replication must be nonnegative")
    n = spec.n_max
    base = int(replication) * _STREAMS_PER_REPLICATION
    h = clamped(*spec.service_range)
    x = arma_generate(spec.arma, n, RngStream(spec.seed, base + _X_STREAM))
    delta = np.zeros(n)
    eps = np.zeros(n)
    if spec.mode in (TransferMode.TF1, TransferMode.TF3) and spec.input_anomaly is not None:
        delta = lomax_sample(spec.input_anomaly, n, RngStream(spec.seed, base + _DELTA_STREAM))
    if spec.mode in (TransferMode.TF2, TransferMode.TF3) and spec.output_anomaly is not None:
        eps = lomax_sample(spec.output_anomaly, n, RngStream(spec.seed, base + _EPS_STREAM))
    y_clean = np.asarray(eval_baseline(h, x))
    y = apply_transfer(spec.mode, h, x, delta, eps)
    sample = PairedSample(x, y, label=spec.name)
    return GeneratedScenario(sample, y_clean, delta, eps)
