"""Element-wise alternating optimization of the surface phases.

With all phases but one frozen, both 1 + snr_bob and 1 + snr_eve reduce to
a + b*cos(phi_k) + c*sin(phi_k), so the ratio objective restricted to a single
element is a smooth ratio of sinusoids with a handful of extrema. Each element
update evaluates that ratio on a uniform candidate grid, then sharpens the best
candidate by bisecting the stationarity residual (the sign of which equals the
sign of dg/dphi) inside the bracketing grid interval, falling back to a
golden-section search when no sign change brackets the peak. Updates never
decrease the objective: the incumbent phase always stays in the candidate set.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import bisect

from .channels import TWO_PI, ChannelSet
from .metrics import LinkBudget, ObjectiveConfig, PhaseVector

_TARGETS = ("bob", "eve")
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TrigCoefficients:
    """(a, b, c) with 1 + snr at element k equal to a + b*cos(phi) + c*sin(phi)."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"coefficient {name} must be finite")
        if not self.a > 0.0:
            raise ValueError(f"constant term must be positive (1 + snr terms), got {self.a}")

    def value_at(self, phi: float) -> float:
        return self.a + self.b * math.cos(phi) + self.c * math.sin(phi)


@dataclass(frozen=True)
class ResidualTerms:
    """Real/imaginary parts of the conjugated cascade sum over the other elements."""

    c_r: float
    c_i: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.c_r) and math.isfinite(self.c_i)):
            raise ValueError("residual terms must be finite")


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for the alternating sweeps and the per-element 1-D search."""

    sweeps: int = 2
    grid_points: int = 720
    refine_tol: float = 1e-9
    init: str = "zeros"

    def __post_init__(self) -> None:
        if self.sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")
        if self.grid_points < 8:
            raise ValueError(f"grid_points must be >= 8, got {self.grid_points}")
        if not self.refine_tol > 0.0:
            raise ValueError(f"refine_tol must be positive, got {self.refine_tol}")
        if self.init not in ("zeros", "random"):
            raise ValueError(f"init must be 'zeros' or 'random', got {self.init!r}")


def _receiver_vector(channels: ChannelSet, target: str):
    if target == "bob":
        return channels.h_rd, channels.h_d
    if target == "eve":
        return channels.h_re, channels.h_e
    raise ValueError(f"target must be one of {_TARGETS}, got {target!r}")


def _check_element_index(channels: ChannelSet, k: int) -> None:
    if not 0 <= k < channels.n_elements:
        raise IndexError(
            f"element index {k} out of range for n_elements={channels.n_elements}"
        )


def residual_terms(
    channels: ChannelSet, phases: PhaseVector, k: int, target: str
) -> ResidualTerms:
    """Conjugated sum of the other elements' steered cascade products.

    Returns sum over i != k of conj(h_r[i] * exp(j*phi_i) * h_rx[i]) split into
    real and imaginary parts; empty for a single-element surface.
    """
    _check_element_index(channels, k)
    receiver, _ = _receiver_vector(channels, target)
    phi = phases.phases
    total = 0j
    for i in range(channels.n_elements):
        if i == k:
            continue
        product = channels.h_r[i].value * receiver[i].value
        total += product.conjugate() * cmath.exp(-1j * phi[i])
    return ResidualTerms(c_r=total.real, c_i=total.imag)


def trig_coefficients(
    channels: ChannelSet,
    phases: PhaseVector,
    k: int,
    budget: LinkBudget,
    target: str,
) -> TrigCoefficients:
    """Sinusoid coefficients of 1 + snr as a function of element k's phase.

    Splits the effective gain into the part that does not depend on phi_k
    (direct link plus the other elements' steered cascades) and element k's own
    cascade product, then expands the squared magnitude.
    """
    _check_element_index(channels, k)
    receiver, direct = _receiver_vector(channels, target)
    res = residual_terms(channels, phases, k, target)
    rest = direct.value + complex(res.c_r, -res.c_i)
    own = channels.h_r[k].value * receiver[k].value
    scale = budget.snr_scale
    cross = rest.conjugate() * own
    return TrigCoefficients(
        a=1.0 + scale * (abs(rest) ** 2 + abs(own) ** 2),
        b=2.0 * scale * cross.real,
        c=-2.0 * scale * cross.imag,
    )


def _derivative_product(lhs: TrigCoefficients, rhs: TrigCoefficients, phi: float) -> float:
    # lhs(phi) * d rhs(phi)/dphi, fully expanded in cos/sin.
    cos_p = math.cos(phi)
    sin_p = math.sin(phi)
    return (
        lhs.b * rhs.c * cos_p * cos_p
        - lhs.c * rhs.b * sin_p * sin_p
        + (lhs.c * rhs.c - lhs.b * rhs.b) * cos_p * sin_p
        + lhs.a * (rhs.c * cos_p - rhs.b * sin_p)
    )


def stationarity_residual(
    num: TrigCoefficients, den: TrigCoefficients, alpha: float, phi: float
) -> float:
    """den*dnum/dphi - alpha*num*dden/dphi; its sign equals the sign of dg/dphi.

    Since den(phi) >= 1 everywhere, zero crossings of the residual are exactly
    the stationary points of g(phi) = num(phi)/den(phi)**alpha.
    """
    return _derivative_product(den, num, phi) - alpha * _derivative_product(num, den, phi)


@lru_cache(maxsize=8)
def _candidate_grid(points: int):
    phi = np.arange(points, dtype=np.float64) * (TWO_PI / points)
    cos_phi = np.cos(phi)
    sin_phi = np.sin(phi)
    for arr in (phi, cos_phi, sin_phi):
        arr.flags.writeable = False
    return phi, cos_phi, sin_phi


def _g_of_phi(num: TrigCoefficients, den: TrigCoefficients, alpha: float, phi: float) -> float:
    n_val = num.value_at(phi)
    d_val = den.value_at(phi)
    if alpha == 1.0:
        return n_val / d_val
    return n_val / d_val**alpha


def _golden_section_max(objective, lo: float, hi: float, tol: float) -> float:
    left = hi - _INV_GOLDEN * (hi - lo)
    right = lo + _INV_GOLDEN * (hi - lo)
    f_left = objective(left)
    f_right = objective(right)
    while hi - lo > tol:
        if f_left >= f_right:
            hi, right, f_right = right, left, f_left
            left = hi - _INV_GOLDEN * (hi - lo)
            f_left = objective(left)
        else:
            lo, left, f_left = left, right, f_right
            right = lo + _INV_GOLDEN * (hi - lo)
            f_right = objective(right)
    return 0.5 * (lo + hi)


def _best_element_phase(
    num: TrigCoefficients,
    den: TrigCoefficients,
    alpha: float,
    old_phi: float,
    opt: OptimizerConfig,
    use_fast_path: bool = True,
) -> tuple[float, float]:
    """Best phase for one element given both coefficient triples.

    Returns (phi, g) with phi in [0, 2pi); g never below the value at old_phi.
    """
    flat_num = num.b == 0.0 and num.c == 0.0
    if alpha == 0.0 and use_fast_path:
        if flat_num:
            return old_phi, num.a
        phi = math.atan2(num.c, num.b) % TWO_PI
        return phi, _g_of_phi(num, den, alpha, phi)
    if flat_num and den.b == 0.0 and den.c == 0.0:
        # g is constant in this element's phase; keep the incumbent.
        return old_phi, _g_of_phi(num, den, alpha, old_phi)

    phi_grid, cos_grid, sin_grid = _candidate_grid(opt.grid_points)
    n_vals = num.a + num.b * cos_grid + num.c * sin_grid
    d_vals = den.a + den.b * cos_grid + den.c * sin_grid
    g_vals = n_vals / d_vals if alpha == 1.0 else n_vals / d_vals**alpha
    i_best = int(np.argmax(g_vals))
    phi_best = float(phi_grid[i_best])

    step = TWO_PI / opt.grid_points
    lo, hi = phi_best - step, phi_best + step
    res_lo = stationarity_residual(num, den, alpha, lo)
    res_mid = stationarity_residual(num, den, alpha, phi_best)
    res_hi = stationarity_residual(num, den, alpha, hi)

    residual = lambda phi: stationarity_residual(num, den, alpha, phi)
    if res_mid == 0.0:
        refined = phi_best
    elif res_mid > 0.0 and res_hi < 0.0:
        refined = bisect(residual, phi_best, hi, xtol=opt.refine_tol)
    elif res_lo > 0.0 and res_mid < 0.0:
        refined = bisect(residual, lo, phi_best, xtol=opt.refine_tol)
    else:
        refined = _golden_section_max(
            lambda phi: _g_of_phi(num, den, alpha, phi), lo, hi, opt.refine_tol
        )

    candidates = [old_phi % TWO_PI, phi_best, refined % TWO_PI]
    scores = [_g_of_phi(num, den, alpha, phi) for phi in candidates]
    best_score = max(scores)
    # Exact ties resolve to the smallest phase for determinism.
    best_phi = min(p for p, s in zip(candidates, scores) if s == best_score)
    return best_phi, best_score


def optimize_element(
    channels: ChannelSet,
    phases: PhaseVector,
    k: int,
    budget: LinkBudget,
    cfg: ObjectiveConfig,
    opt: OptimizerConfig,
) -> float:
    """Best phase in [0, 2pi) for element k with the other phases frozen."""
    num = trig_coefficients(channels, phases, k, budget, "bob")
    den = trig_coefficients(channels, phases, k, budget, "eve")
    phi, _ = _best_element_phase(num, den, cfg.alpha, float(phases.phases[k]), opt)
    return phi


def optimize_phases(
    channels: ChannelSet,
    budget: LinkBudget,
    cfg: ObjectiveConfig,
    opt: OptimizerConfig,
    rng: np.random.Generator | None = None,
    trace: list | None = None,
) -> tuple[PhaseVector, float]:
    """Alternating element-wise ascent over all phases for opt.sweeps passes.

    The objective after each single-element update is non-decreasing. If trace
    is a list, the objective value after every element update is appended to
    it. Returns the final phases and the objective value at them.
    """
    n = channels.n_elements
    if opt.init == "random":
        if rng is None:
            raise ValueError("init='random' requires an rng")
        current = rng.uniform(0.0, TWO_PI, size=n)
    else:
        current = np.zeros(n, dtype=np.float64)
    phases = PhaseVector(current)

    g_value = None
    for _ in range(opt.sweeps):
        for k in range(n):
            num = trig_coefficients(channels, phases, k, budget, "bob")
            den = trig_coefficients(channels, phases, k, budget, "eve")
            phi, g_value = _best_element_phase(
                num, den, cfg.alpha, float(phases.phases[k]), opt
            )
            if phi != phases.phases[k]:
                updated = phases.phases.copy()
                updated[k] = phi
                phases = PhaseVector(updated)
            if trace is not None:
                trace.append(g_value)
    assert g_value is not None  # sweeps >= 1 and n >= 1
    return phases, g_value
