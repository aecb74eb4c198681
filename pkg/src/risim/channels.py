"""Quasi-static flat-fading channel generation with distance-based path loss.

Every link is modeled as magnitude * exp(j * phase) where the magnitude is a
unit-mean-square Rayleigh draw scaled by d**(-chi/2) and the phase is uniform
on [0, 2pi). A realization consists of the two direct scalar links plus three
N-element vectors for the reflected paths (transmitter->surface,
surface->receiver, surface->eavesdropper).

Reproducibility contract: realization i of a run with seed s draws from the
substream keyed by (s, i), so results are independent of evaluation order and
of how realizations are distributed over workers.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# Unit mean-square Rayleigh: E[x^2] = 2*scale^2 = 1.
_RAYLEIGH_SCALE = math.sqrt(0.5)


@dataclass(frozen=True)
class Geometry:
    """Link distances in meters plus the common path-loss exponent."""

    d_br: float  # transmitter -> surface
    d_rd: float  # surface -> legitimate receiver
    d_re: float  # surface -> eavesdropper
    d_bd: float  # transmitter -> legitimate receiver (direct)
    d_be: float  # transmitter -> eavesdropper (direct)
    chi: float = 3.0

    def __post_init__(self) -> None:
        for name in ("d_br", "d_rd", "d_re", "d_bd", "d_be"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a positive finite distance, got {value}")
        if not (self.chi > 0.0 and math.isfinite(self.chi)):
            raise ValueError(f"chi must be a positive finite exponent, got {self.chi}")


@dataclass(frozen=True)
class ComplexGain:
    """One channel coefficient in polar form, phase normalized to [0, 2pi)."""

    magnitude: float
    phase: float

    def __post_init__(self) -> None:
        if not (self.magnitude >= 0.0 and math.isfinite(self.magnitude)):
            raise ValueError(f"magnitude must be finite and >= 0, got {self.magnitude}")
        if not math.isfinite(self.phase):
            raise ValueError(f"phase must be finite, got {self.phase}")
        if not 0.0 <= self.phase < TWO_PI:
            object.__setattr__(self, "phase", self.phase % TWO_PI)

    @property
    def value(self) -> complex:
        """Rectangular form magnitude * exp(j * phase)."""
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))


@dataclass(frozen=True)
class ChannelSet:
    """One fading realization of all five links.

    A blocked direct link is represented by magnitude exactly 0 (phase 0).
    """

    h_r: tuple[ComplexGain, ...]   # transmitter -> surface, per element
    h_rd: tuple[ComplexGain, ...]  # surface -> receiver, per element
    h_re: tuple[ComplexGain, ...]  # surface -> eavesdropper, per element
    h_d: ComplexGain               # direct transmitter -> receiver
    h_e: ComplexGain               # direct transmitter -> eavesdropper
    n_elements: int

    def __post_init__(self) -> None:
        if self.n_elements < 1:
            raise ValueError(f"n_elements must be >= 1, got {self.n_elements}")
        for name in ("h_r", "h_rd", "h_re"):
            vec = getattr(self, name)
            if len(vec) != self.n_elements:
                raise ValueError(
                    f"{name} has length {len(vec)}, expected n_elements={self.n_elements}"
                )


def path_loss_amplitude(d: float, chi: float) -> float:
    """Amplitude-domain path loss d**(-chi/2); power falls as d**(-chi)."""
    if not d > 0.0:
        raise ValueError(f"distance must be positive, got {d}")
    if not chi > 0.0:
        raise ValueError(f"path-loss exponent must be positive, got {chi}")
    return d ** (-chi / 2.0)


def realization_rng(seed: int, realization_index: int) -> np.random.Generator:
    """Independent substream for one realization, keyed by (seed, index)."""
    if realization_index < 0:
        raise ValueError(f"realization_index must be >= 0, got {realization_index}")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(realization_index,))
    return np.random.default_rng(ss)


def _draw_gain(rng: np.random.Generator, amplitude_scale: float) -> ComplexGain:
    magnitude = amplitude_scale * rng.rayleigh(scale=_RAYLEIGH_SCALE)
    phase = rng.uniform(0.0, TWO_PI)
    return ComplexGain(float(magnitude), float(phase))


def _draw_gain_vector(
    rng: np.random.Generator, amplitude_scale: float, n: int
) -> tuple[ComplexGain, ...]:
    magnitudes = amplitude_scale * rng.rayleigh(scale=_RAYLEIGH_SCALE, size=n)
    phases = rng.uniform(0.0, TWO_PI, size=n)
    return tuple(ComplexGain(float(m), float(p)) for m, p in zip(magnitudes, phases))


def generate_channel_set(
    geometry: Geometry, n_elements: int, rng: np.random.Generator
) -> ChannelSet:
    """Draw one independent realization of all five links.

    The two direct scalar links are drawn before the element vectors, so runs
    that differ only in element count share identical direct-link draws from
    the same substream (paired with/without-surface comparisons stay paired).
    """
    if n_elements < 1:
        raise ValueError(f"n_elements must be >= 1, got {n_elements}")
    h_d = _draw_gain(rng, path_loss_amplitude(geometry.d_bd, geometry.chi))
    h_e = _draw_gain(rng, path_loss_amplitude(geometry.d_be, geometry.chi))
    h_r = _draw_gain_vector(rng, path_loss_amplitude(geometry.d_br, geometry.chi), n_elements)
    h_rd = _draw_gain_vector(rng, path_loss_amplitude(geometry.d_rd, geometry.chi), n_elements)
    h_re = _draw_gain_vector(rng, path_loss_amplitude(geometry.d_re, geometry.chi), n_elements)
    return ChannelSet(h_r=h_r, h_rd=h_rd, h_re=h_re, h_d=h_d, h_e=h_e, n_elements=n_elements)


def block_direct_links(channels: ChannelSet) -> ChannelSet:
    """Copy with both direct links zeroed; reflected paths untouched. Idempotent."""
    zero = ComplexGain(0.0, 0.0)
    return ChannelSet(
        h_r=channels.h_r,
        h_rd=channels.h_rd,
        h_re=channels.h_re,
        h_d=zero,
        h_e=zero,
        n_elements=channels.n_elements,
    )


def draw_hash(channels: ChannelSet) -> str:
    """Stable digest of every magnitude/phase; equal iff the draws are equal."""
    parts = []
    for gain in (channels.h_d, channels.h_e, *channels.h_r, *channels.h_rd, *channels.h_re):
        parts.append(gain.magnitude)
        parts.append(gain.phase)
    payload = np.asarray(parts, dtype=np.float64).tobytes()
    return hashlib.sha256(payload).hexdigest()


def _preset_distances(bob_x: float, eve_x: float, ris_x: float = 10.0, ris_y: float = 5.0) -> dict:
    # Transmitter at the origin, receivers on the x axis, surface offset from it.
    return {
        "d_br": math.hypot(ris_x, ris_y),
        "d_rd": math.hypot(bob_x - ris_x, ris_y),
        "d_re": math.hypot(eve_x - ris_x, ris_y),
        "d_bd": bob_x,
        "d_be": eve_x,
    }


#: Named straight-line layouts. The transmitter sits at the origin, the surface
#: at (10 m, 5 m), and both receivers on the x axis; each preset moves the
#: receiver/eavesdropper positions to change which direct link is stronger.
#: All distances are assumptions (documented, overridable in config).
GEOMETRY_PRESETS: dict[str, Geometry] = {
    "bob-near": Geometry(**_preset_distances(bob_x=20.0, eve_x=40.0)),
    "eve-near": Geometry(**_preset_distances(bob_x=40.0, eve_x=12.0)),
    "comparable": Geometry(**_preset_distances(bob_x=30.0, eve_x=32.0)),
}


def preset_geometry(name: str) -> Geometry:
    """Look up a named layout; raises ValueError listing valid names."""
    try:
        return GEOMETRY_PRESETS[name]
    except KeyError:
        valid = ", ".join(sorted(GEOMETRY_PRESETS))
        raise ValueError(f"unknown geometry preset {name!r}; valid presets: {valid}") from None
