"""Result records shared by the baseline and the experiment runner."""

from __future__ import annotations

import math
from dataclasses import dataclass


def to_db(linear: float) -> float:
    if linear <= 0:
        return -math.inf
    return 10.0 * math.log10(linear)


@dataclass(frozen=True)
class CapacityReport:
    """SNR, capacity, and optional certificates for one evaluated scenario.

    Bound and placement-diagnostic fields stay ``None`` when they do not
    apply (e.g. the fixed-array baseline, or Monte-Carlo averages).  For
    averaged scenarios ``snr`` is the mean linear SNR over the counted draws
    and ``draws`` / ``infeasible_draws`` record the accounting.
    """

    scenario: str
    mode: str
    case: int
    snr: float
    capacity_bits: float
    snr_lower: float | None = None
    snr_upper: float | None = None
    capacity_lower: float | None = None
    capacity_upper: float | None = None
    snr_linear_law: float | None = None
    max_spacing_m: float | None = None
    alignment_residual_m: float | None = None
    draws: int | None = None
    infeasible_draws: int | None = None

    @property
    def snr_db(self) -> float:
        return to_db(self.snr)
