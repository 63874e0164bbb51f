"""Independent brute-force verifiers.

Nothing here shares a code path with the closed forms it checks: the grid
search enumerates every feasible position tuple on a uniform grid and takes
a literal maximum, and the phase-chain check redoes the alignment arithmetic
in high-precision (50-digit) floating point.  Exponential enumeration cost
is accepted; the search is scoped to 2 or 4 antennas on a single waveguide.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

from .model import (
    FeasibilityError,
    SystemParams,
    UserPosition,
    Waveguide,
    los_coefficient,
    waveguide_vector,
)


def _grid_values(
    params: SystemParams, waveguide: Waveguide, user: UserPosition, n: int, resolution: float
) -> tuple[np.ndarray, np.ndarray]:
    """Search grid and the per-position complex summand h(x) g(x)."""
    lo = max(user.x - 2 * n * params.min_spacing_m, waveguide.feed_x)
    hi = min(user.x + 2 * n * params.min_spacing_m, waveguide.max_x)
    if hi - lo < (n - 1) * params.min_spacing_m:
        raise FeasibilityError("search window too narrow for the requested antenna count")
    count = int(math.floor((hi - lo) / resolution + 1e-9)) + 1
    xs = lo + resolution * np.arange(count)
    pa_xyz = np.stack(
        [xs, np.full_like(xs, waveguide.y), np.full_like(xs, waveguide.height)], axis=-1
    )
    h = los_coefficient(params, pa_xyz, user)
    # waveguide_vector splits the feed power over the row it is given; the
    # grid holds len(xs) candidates for an n-antenna placement, so rescale
    # each candidate's entry back to the 1/sqrt(n) split.
    g = waveguide_vector(params, waveguide, xs) * math.sqrt(len(xs) / n)
    return xs, h * g


def grid_search_gain(
    params: SystemParams,
    waveguide: Waveguide,
    user: UserPosition,
    n: int,
    resolution: float,
) -> tuple[float, np.ndarray]:
    """Exhaustive maximum of the coherent gain over an n-antenna grid.

    Enumerates all sorted position tuples with pairwise spacing at least the
    minimum, within the window of 2n minimum spacings around the user
    (clipped to the deployment range).  Returns the best gain and positions.
    """
    if n not in (2, 4):
        raise ValueError("grid search is scoped to 2 or 4 antennas")
    if resolution > params.wavelength_m / 32 + 1e-15:
        raise ValueError("resolution must be at most 1/32 wavelength")
    xs, summand = _grid_values(params, waveguide, user, n, resolution)
    gap = int(math.ceil(params.min_spacing_m / resolution - 1e-9))
    g = len(xs)
    if g <= (n - 1) * gap:
        raise FeasibilityError("grid too small for the spacing constraint")

    if n == 2:
        re, im = summand.real, summand.imag
        best = -1.0
        best_idx = (0, 0)
        for i in range(g - gap):
            a = re[i + gap :] + re[i]
            b = im[i + gap :] + im[i]
            mag = a * a + b * b
            j = int(np.argmax(mag))
            if mag[j] > best:
                best = float(mag[j])
                best_idx = (i, i + gap + j)
        return math.sqrt(best), xs[list(best_idx)]

    # n == 4: pre-pair the two outer antennas.  pair_sum[k] holds the summand
    # sums of every feasible (x3, x4) pair, grouped in ascending x3 so the
    # pairs compatible with a given x2 form a suffix.
    i3, i4 = np.nonzero(
        (np.arange(g)[None, :] - np.arange(g)[:, None]) >= gap
    )
    order = np.argsort(i3, kind="stable")
    i3, i4 = i3[order], i4[order]
    pair_re = summand.real[i3] + summand.real[i4]
    pair_im = summand.imag[i3] + summand.imag[i4]
    # suffix_start[b] = first pair whose x3 index is >= b
    suffix_start = np.searchsorted(i3, np.arange(g + 1))

    best = -1.0
    best_tuple = None
    re, im = summand.real, summand.imag
    for a1 in range(g - 3 * gap):
        for a2 in range(a1 + gap, g - 2 * gap):
            k = suffix_start[a2 + gap]
            if k >= len(i3):
                continue
            s_re = re[a1] + re[a2]
            s_im = im[a1] + im[a2]
            ar = pair_re[k:] + s_re
            ai = pair_im[k:] + s_im
            mag = ar * ar + ai * ai
            j = int(np.argmax(mag))
            if mag[j] > best:
                best = float(mag[j])
                best_tuple = (a1, a2, int(i3[k + j]), int(i4[k + j]))
    if best_tuple is None:
        raise FeasibilityError("no feasible 4-antenna tuple in the search window")
    return math.sqrt(best), xs[list(best_tuple)]


def direct_phase_chain(
    positions: np.ndarray,
    user: UserPosition,
    waveguide: Waveguide,
    params: SystemParams,
) -> float:
    """Recompute the alignment residual with 50-digit arithmetic.

    Returns the maximum circular deviation (meters) of
    (r + n_eff x) mod lambda across the antennas, relative to the first.
    """
    with mpmath.workdps(50):
        lam = mpmath.mpf(params.wavelength_m)
        n_eff = mpmath.mpf(params.n_eff)
        h2 = (mpmath.mpf(waveguide.y) - mpmath.mpf(user.y)) ** 2 + mpmath.mpf(
            waveguide.height
        ) ** 2
        residues = []
        for x in positions:
            xm = mpmath.mpf(float(x))
            r = mpmath.sqrt((xm - mpmath.mpf(user.x)) ** 2 + h2)
            total = r + n_eff * xm
            residues.append(total - lam * mpmath.floor(total / lam))
        worst = mpmath.mpf(0)
        for res in residues[1:]:
            dev = abs(res - residues[0])
            dev = min(dev, lam - dev)
            worst = max(worst, dev)
        return float(worst)
