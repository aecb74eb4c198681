"""End-to-end gains, received SNRs, and the weighted secrecy objective.

The reported secrecy capacity is max(log2(1+snr_bob) - alpha*log2(1+snr_eve), 0)
in bits per channel use. The optimizer works on the equivalent ratio form
g = (1+snr_bob) / (1+snr_eve)**alpha, which is left unclamped so its gradients
stay informative; the clamp is applied only when reporting capacity.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import TWO_PI, ChannelSet, ComplexGain


@dataclass(frozen=True)
class LinkBudget:
    """Transmit power and noise power, both in Watts."""

    p_t: float
    n_o: float

    def __post_init__(self) -> None:
        if not (self.p_t >= 0.0 and math.isfinite(self.p_t)):
            raise ValueError(f"p_t must be finite and >= 0 W, got {self.p_t}")
        if not (self.n_o > 0.0 and math.isfinite(self.n_o)):
            raise ValueError(f"n_o must be finite and > 0 W, got {self.n_o}")

    @property
    def snr_scale(self) -> float:
        return self.p_t / self.n_o


@dataclass(frozen=True)
class PhaseVector:
    """Per-element surface phases, normalized to [0, 2pi) and read-only."""

    phases: np.ndarray

    def __init__(self, phases) -> None:
        arr = np.asarray(phases, dtype=np.float64).reshape(-1).copy()
        if not np.all(np.isfinite(arr)):
            raise ValueError("phases must all be finite")
        out_of_range = (arr < 0.0) | (arr >= TWO_PI)
        if np.any(out_of_range):
            arr[out_of_range] = np.mod(arr[out_of_range], TWO_PI)
        arr.flags.writeable = False
        object.__setattr__(self, "phases", arr)

    def __len__(self) -> int:
        return self.phases.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhaseVector):
            return NotImplemented
        return self.phases.shape == other.phases.shape and bool(
            np.all(self.phases == other.phases)
        )


@dataclass(frozen=True)
class SnrPair:
    """Linear received SNRs at the legitimate receiver and the eavesdropper."""

    gamma_d: float
    gamma_e: float

    def __post_init__(self) -> None:
        for name in ("gamma_d", "gamma_e"):
            value = getattr(self, name)
            if not (value >= 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be finite and >= 0, got {value}")


@dataclass(frozen=True)
class ObjectiveConfig:
    """Weight on the eavesdropper's log term; 0 ignores it, 1 is true secrecy."""

    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be within [0, 1], got {self.alpha}")


def dbw_to_watts(p_dbw: float) -> float:
    return 10.0 ** (p_dbw / 10.0)


def watts_to_dbw(p_watts: float) -> float:
    if not p_watts > 0.0:
        raise ValueError(f"power must be positive to express in dBW, got {p_watts}")
    return 10.0 * math.log10(p_watts)


def effective_gain(
    direct: ComplexGain,
    cascade_a: Sequence[ComplexGain],
    cascade_b: Sequence[ComplexGain],
    phases: PhaseVector,
) -> complex:
    """Direct gain plus the phase-steered sum of per-element cascade products.

    Computes direct + sum_i cascade_a[i] * exp(j*phi_i) * cascade_b[i].
    """
    n = len(phases)
    if len(cascade_a) != n or len(cascade_b) != n:
        raise ValueError(
            f"cascade lengths ({len(cascade_a)}, {len(cascade_b)}) must match "
            f"phase count {n}"
        )
    total = direct.value
    phi = phases.phases
    for i in range(n):
        total += cascade_a[i].value * cmath.exp(1j * phi[i]) * cascade_b[i].value
    return total


def snr(effective: complex, budget: LinkBudget) -> float:
    """Received linear SNR (p_t/n_o) * |effective|^2."""
    return budget.snr_scale * abs(effective) ** 2


def weighted_secrecy_capacity(snrs: SnrPair, cfg: ObjectiveConfig) -> float:
    """Clamped weighted secrecy rate in bits per channel use."""
    value = math.log2(1.0 + snrs.gamma_d) - cfg.alpha * math.log2(1.0 + snrs.gamma_e)
    return max(value, 0.0)


def snr_pair(
    channels: ChannelSet, phases: PhaseVector, budget: LinkBudget
) -> SnrPair:
    """Both received SNRs for one phase configuration."""
    h_bob = effective_gain(channels.h_d, channels.h_rd, channels.h_r, phases)
    h_eve = effective_gain(channels.h_e, channels.h_re, channels.h_r, phases)
    return SnrPair(gamma_d=snr(h_bob, budget), gamma_e=snr(h_eve, budget))


def objective_g(
    channels: ChannelSet,
    phases: PhaseVector,
    budget: LinkBudget,
    cfg: ObjectiveConfig,
) -> float:
    """Unclamped ratio objective (1+snr_bob) / (1+snr_eve)**alpha.

    Strictly positive; log2 of it, clamped at zero, is the reported capacity.
    """
    if len(phases) != channels.n_elements:
        raise ValueError(
            f"phase count {len(phases)} does not match n_elements={channels.n_elements}"
        )
    snrs = snr_pair(channels, phases, budget)
    return (1.0 + snrs.gamma_d) / (1.0 + snrs.gamma_e) ** cfg.alpha
