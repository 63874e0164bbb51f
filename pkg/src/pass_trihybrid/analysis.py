"""Closed-form gain/SNR/capacity bounds, approximations, and scaling laws.

These expressions certify the simulation: the per-waveguide coherent gain of
a refined placement is sandwiched between a uniform-minimum-spacing upper
bound and a uniform-maximum-spacing lower bound, and an integral
approximation of either sum gives SNR and capacity envelopes that expose the
(ln N)^2 / N large-N decay and the linear small-N growth.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .beamforming import capacity
from .model import SystemParams, UserPosition, WaveguideLayout


class ApproximationWarning(UserWarning):
    """An approximation was evaluated outside its nominal validity range."""


def gain_kernel(x: float | np.ndarray) -> float | np.ndarray:
    """ln(sqrt(1 + x^2) + x), the closed form of the aggregate-gain integral.

    Equals asinh(x); concave, increasing, and ~x for small x.  Evaluated via
    asinh to avoid cancellation near zero.
    """
    return np.arcsinh(x)


def _check_even(n: int) -> None:
    if n < 2 or n % 2 != 0:
        raise ValueError("PA count must be a positive even integer")


def gain_upper(
    params: SystemParams, h_eff: float, n: int, spacing: float | None = None
) -> float:
    """Upper bound on one waveguide's coherent gain: N/2 antennas per side
    packed at uniform ``spacing`` (default: the minimum spacing), phases
    perfectly aligned."""
    _check_even(n)
    s = params.min_spacing_m if spacing is None else spacing
    if s <= 0 or h_eff <= 0:
        raise ValueError("spacing and effective elevation must be positive")
    k = np.arange(1, n // 2 + 1)
    terms = 2.0 * math.sqrt(params.eta_m2) / (
        math.sqrt(n) * np.sqrt((k - 0.5) ** 2 * s * s + h_eff * h_eff)
    )
    return float(np.sum(terms))


def gain_lower(params: SystemParams, h_eff: float, n: int, max_spacing: float) -> float:
    """Lower bound on the refined gain: same sum with the placement's largest
    realized spacing instead of the minimum."""
    if max_spacing < params.min_spacing_m:
        raise ValueError("largest realized spacing cannot be below the minimum spacing")
    return gain_upper(params, h_eff, n, spacing=max_spacing)


def gain_approx(
    params: SystemParams, h_eff: float, n: int, spacing: float | None = None
) -> float:
    """Integral approximation of :func:`gain_upper`, accurate for spacing << h_eff."""
    _check_even(n)
    s = params.min_spacing_m if spacing is None else spacing
    if s <= 0 or h_eff <= 0:
        raise ValueError("spacing and effective elevation must be positive")
    if s / h_eff >= 0.1:
        warnings.warn(
            f"spacing/elevation ratio {s / h_eff:.3g} >= 0.1; integral "
            "approximation degrades",
            ApproximationWarning,
            stacklevel=2,
        )
    return float(
        2.0 * math.sqrt(params.eta_m2) / (math.sqrt(n) * s) * gain_kernel(n * s / (2.0 * h_eff))
    )


def surrogate_max_spacing(params: SystemParams) -> float:
    """Worst-case largest spacing when no placement has been run: the minimum
    spacing plus one full refinement shift."""
    lam = params.wavelength_m
    if params.n_eff == 1.0:
        return params.min_spacing_m + 2.0 * lam
    return params.min_spacing_m + lam / (params.n_eff - 1.0)


@dataclass(frozen=True)
class BoundsReport:
    """Closed-form certificates for one (user, N) scenario.

    Single-RF quantities carry a 1/M power split; the multi-RF defaults keep
    the full power budget, with ``snr2_*_alt`` giving the alternate
    normalization that divides by the waveguide count (the two differ by a
    factor M; the default brackets the matched-filter simulation).
    ``max_spacing_is_surrogate`` marks reports built without a placement.
    """

    n: int
    min_spacing_m: float
    max_spacing_m: np.ndarray
    max_spacing_is_surrogate: bool
    gain_upper_per_wg: np.ndarray
    gain_approx_per_wg: np.ndarray
    gain_lower_per_wg: np.ndarray
    snr1_upper: float | None = None
    snr1_lower: float | None = None
    snr1_linear: float | None = None
    capacity1_upper: float | None = None
    capacity1_lower: float | None = None
    snr2_upper: float | None = None
    snr2_lower: float | None = None
    snr2_linear: float | None = None
    capacity2_upper: float | None = None
    capacity2_lower: float | None = None
    snr2_upper_alt: float | None = None
    snr2_lower_alt: float | None = None


def snr_bounds(
    params: SystemParams,
    layout: WaveguideLayout,
    user: UserPosition,
    n: int,
    max_spacing: float | np.ndarray | None = None,
    mode: str = "both",
) -> BoundsReport:
    """SNR and capacity envelopes from the integral-form gain bounds.

    ``max_spacing`` is each waveguide's largest realized spacing (scalar or
    per-waveguide array); when omitted the worst-case surrogate is used and
    flagged.  ``mode`` selects which system-level fields are filled.
    """
    _check_even(n)
    if mode not in ("single", "multi", "both"):
        raise ValueError("mode must be 'single', 'multi', or 'both'")
    m = len(layout)
    surrogate = max_spacing is None
    if surrogate:
        max_spacing = surrogate_max_spacing(params)
    dmax = np.broadcast_to(np.asarray(max_spacing, dtype=float), (m,)).copy()
    if np.any(dmax < params.min_spacing_m):
        raise ValueError("largest realized spacing cannot be below the minimum spacing")

    h = layout.elevations(user)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ApproximationWarning)
        ub = np.array([gain_approx(params, h[i], n, params.min_spacing_m) for i in range(m)])
        lb = np.array([gain_approx(params, h[i], n, dmax[i]) for i in range(m)])
    sum_ub = np.array([gain_upper(params, h[i], n) for i in range(m)])
    lower_sum = np.array([gain_upper(params, h[i], n, dmax[i]) for i in range(m)])

    p, s2 = params.power_w, params.noise_w
    report = {
        "n": n,
        "min_spacing_m": params.min_spacing_m,
        "max_spacing_m": dmax,
        "max_spacing_is_surrogate": surrogate,
        "gain_upper_per_wg": sum_ub,
        "gain_approx_per_wg": ub,
        "gain_lower_per_wg": lower_sum,
    }
    if mode in ("single", "both"):
        up = p / (m * s2) * float(np.sum(ub)) ** 2
        lo = p / (m * s2) * float(np.sum(lb)) ** 2
        report.update(
            snr1_upper=up,
            snr1_lower=lo,
            snr1_linear=snr_linear(params, layout, user, n, mode="single", warn=False),
            capacity1_upper=capacity(up),
            capacity1_lower=capacity(lo),
        )
    if mode in ("multi", "both"):
        up = p / s2 * float(np.sum(ub**2))
        lo = p / s2 * float(np.sum(lb**2))
        report.update(
            snr2_upper=up,
            snr2_lower=lo,
            snr2_linear=snr_linear(params, layout, user, n, mode="multi", warn=False),
            capacity2_upper=capacity(up),
            capacity2_lower=capacity(lo),
            snr2_upper_alt=up / m,
            snr2_lower_alt=lo / m,
        )
    return BoundsReport(**report)


def snr_linear(
    params: SystemParams,
    layout: WaveguideLayout,
    user: UserPosition,
    n: int,
    mode: str = "single",
    warn: bool = True,
) -> float:
    """Small-N scaling law: SNR grows linearly in N, independent of spacing.

    Single-RF: (P N eta / M sigma^2) (sum_m 1/H_m)^2.
    Multi-RF:  (P N eta / sigma^2) sum_m 1/H_m^2.
    """
    _check_even(n)
    h = layout.elevations(user)
    ratio = float(np.max(n * params.min_spacing_m / (2.0 * h)))
    if warn and ratio > 0.05:
        warnings.warn(
            f"N*spacing/(2 H) = {ratio:.3g} exceeds 0.05; linear scaling law "
            "loses accuracy",
            ApproximationWarning,
            stacklevel=2,
        )
    p, s2, eta = params.power_w, params.noise_w, params.eta_m2
    if mode == "single":
        return p * n * eta / (len(layout) * s2) * float(np.sum(1.0 / h)) ** 2
    if mode == "multi":
        return p * n * eta / s2 * float(np.sum(1.0 / h**2))
    raise ValueError("mode must be 'single' or 'multi'")


@dataclass(frozen=True)
class EnvelopeReport:
    """Upper/lower SNR envelopes over a sweep of PA counts."""

    n_values: np.ndarray
    upper: np.ndarray
    lower: np.ndarray
    argmax_n_upper: int
    argmax_n_lower: int

    @property
    def decays(self) -> bool:
        """True when both envelopes peak strictly inside the sweep and have
        fallen off at its far end."""
        interior = (
            self.argmax_n_upper not in (self.n_values[0], self.n_values[-1])
            and self.argmax_n_lower not in (self.n_values[0], self.n_values[-1])
        )
        return bool(
            interior
            and self.upper[-1] < self.upper.max()
            and self.lower[-1] < self.lower.max()
        )


def asymptotic_envelope(
    params: SystemParams,
    layout: WaveguideLayout,
    user: UserPosition,
    n_values,
    mode: str = "single",
    max_spacing: float | np.ndarray | None = None,
) -> EnvelopeReport:
    """Evaluate the SNR bounds over a range of even PA counts."""
    ns = np.asarray(list(n_values), dtype=int)
    upper = np.empty(len(ns))
    lower = np.empty(len(ns))
    for i, n in enumerate(ns):
        rep = snr_bounds(params, layout, user, int(n), max_spacing=max_spacing, mode=mode)
        upper[i] = rep.snr1_upper if mode == "single" else rep.snr2_upper
        lower[i] = rep.snr1_lower if mode == "single" else rep.snr2_lower
    return EnvelopeReport(
        n_values=ns,
        upper=upper,
        lower=lower,
        argmax_n_upper=int(ns[int(np.argmax(upper))]),
        argmax_n_lower=int(ns[int(np.argmax(lower))]),
    )
