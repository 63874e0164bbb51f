"""Physical constants, geometry, and the free-space / in-waveguide channel math.

Geometry convention: waveguides run parallel to the x-axis at height ``H``,
feeds sit at the left edge of the service region, users live in the z = 0
plane.  All lengths are in meters and all powers in watts; dB / dBm
conversions happen only at the configuration boundary.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 2.99792458e8  # m/s


class FeasibilityError(ValueError):
    """A pinching-antenna placement violates spacing or deployment-range limits."""


@dataclass(frozen=True)
class SystemParams:
    """Static system configuration (defaults reproduce the reference setup).

    ``min_spacing_m`` defaults to half the free-space wavelength when left
    unset.  ``num_pas`` is the number of active pinching antennas per
    waveguide and must be even.
    """

    fc_hz: float = 28e9
    n_eff: float = 1.4
    kappa_db_per_m: float = 0.08
    power_w: float = 0.01
    noise_w: float = 1e-12
    min_spacing_m: float | None = None
    dx_m: float = 50.0
    dy_m: float = 20.0
    height_m: float = 3.0
    num_waveguides: int = 4
    num_pas: int = 4
    num_rf_chains: int = 2

    def __post_init__(self) -> None:
        if self.fc_hz <= 0:
            raise ValueError("carrier frequency must be positive")
        if self.n_eff < 1.0:
            raise ValueError("effective refractive index must be >= 1")
        if self.kappa_db_per_m < 0:
            raise ValueError("waveguide loss must be >= 0 dB/m")
        if self.power_w <= 0 or self.noise_w <= 0:
            raise ValueError("power budget and noise power must be positive")
        if self.dx_m <= 0 or self.dy_m <= 0 or self.height_m <= 0:
            raise ValueError("region dimensions and height must be positive")
        if self.num_waveguides < 1:
            raise ValueError("need at least one waveguide")
        if self.num_pas < 2 or self.num_pas % 2 != 0:
            raise ValueError("number of PAs per waveguide must be a positive even integer")
        if self.num_rf_chains < 1:
            raise ValueError("need at least one RF chain")
        if self.min_spacing_m is None:
            object.__setattr__(self, "min_spacing_m", self.wavelength_m / 2.0)
        if self.min_spacing_m <= 0:
            raise ValueError("minimum PA spacing must be positive")
        if self.wavelength_m >= self.height_m:
            raise ValueError("wavelength must be small compared to the deployment height")

    @property
    def wavelength_m(self) -> float:
        """Free-space wavelength c / f_c."""
        return SPEED_OF_LIGHT / self.fc_hz

    @property
    def guided_wavelength_m(self) -> float:
        """In-waveguide wavelength, free-space wavelength divided by n_eff."""
        return self.wavelength_m / self.n_eff

    @property
    def eta_m2(self) -> float:
        """Channel-gain constant c^2 / (16 pi^2 f_c^2); |h| = sqrt(eta)/r."""
        return SPEED_OF_LIGHT**2 / (16.0 * math.pi**2 * self.fc_hz**2)

    @property
    def feed_x_m(self) -> float:
        return -self.dx_m / 2.0

    @property
    def max_x_m(self) -> float:
        return self.dx_m / 2.0

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class UserPosition:
    """Ground-level user location (z = 0)."""

    x: float = 0.0
    y: float = 0.0


def check_user_in_region(params: SystemParams, user: UserPosition) -> None:
    if abs(user.x) > params.dx_m / 2.0 or abs(user.y) > params.dy_m / 2.0:
        raise ValueError(
            f"user ({user.x}, {user.y}) outside service region "
            f"[{-params.dx_m / 2}, {params.dx_m / 2}] x [{-params.dy_m / 2}, {params.dy_m / 2}]"
        )


@dataclass(frozen=True)
class Waveguide:
    """One waveguide: feed point, transverse offset, height, deployment limit."""

    feed_x: float
    y: float
    height: float
    max_x: float

    def __post_init__(self) -> None:
        if self.max_x <= self.feed_x:
            raise ValueError("deployment range must extend beyond the feed point")
        if self.height <= 0:
            raise ValueError("waveguide height must be positive")

    def effective_elevation(self, user: UserPosition) -> float:
        """Distance from the user to the waveguide axis in the plane orthogonal to x."""
        return math.hypot(self.y - user.y, self.height)


@dataclass(frozen=True)
class WaveguideLayout:
    """All waveguides of one deployment."""

    waveguides: tuple[Waveguide, ...]

    @classmethod
    def from_params(cls, params: SystemParams) -> "WaveguideLayout":
        m = params.num_waveguides
        if m == 1:
            ys = [0.0]  # degenerate single-waveguide layout sits on the region axis
        else:
            ys = [-params.dy_m / 2.0 + (i / (m - 1)) * params.dy_m for i in range(m)]
        return cls(
            tuple(
                Waveguide(params.feed_x_m, y, params.height_m, params.max_x_m) for y in ys
            )
        )

    def __len__(self) -> int:
        return len(self.waveguides)

    def __getitem__(self, m: int) -> Waveguide:
        return self.waveguides[m]

    def elevations(self, user: UserPosition) -> np.ndarray:
        return np.array([w.effective_elevation(user) for w in self.waveguides])


@dataclass(frozen=True)
class PinchingConfig:
    """PA x-coordinates, one row per waveguide (the pinching beamformer).

    Construction validates the pairwise spacing and deployment-range
    constraints; a small float slack absorbs rounding in positions that were
    built to sit exactly on a constraint boundary.
    """

    positions: np.ndarray  # (M, N)
    min_spacing_m: float
    feed_x: float
    max_x: float

    _SLACK = 1e-9

    def __post_init__(self) -> None:
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2:
            raise ValueError("positions must be an M x N matrix")
        object.__setattr__(self, "positions", pos)
        if np.any(pos < self.feed_x - self._SLACK) or np.any(pos > self.max_x + self._SLACK):
            raise FeasibilityError(
                f"PA positions outside deployment range [{self.feed_x}, {self.max_x}]"
            )
        for m, row in enumerate(pos):
            gaps = np.diff(np.sort(row))
            if len(gaps) and gaps.min() < self.min_spacing_m - self._SLACK:
                raise FeasibilityError(
                    f"waveguide {m}: PA spacing {gaps.min():.6g} m below the "
                    f"{self.min_spacing_m:.6g} m minimum"
                )

    @property
    def num_waveguides(self) -> int:
        return self.positions.shape[0]

    @property
    def num_pas(self) -> int:
        return self.positions.shape[1]


@dataclass(frozen=True)
class EffectiveChannel:
    """Per-PA channels, in-waveguide vectors, and their per-waveguide products.

    ``inner[m]`` is the plain (unconjugated) inner product of waveguide m's
    free-space channel row with its in-waveguide vector; stacking the M inner
    products gives the effective 1 x M row seen by the analog/digital stages.
    """

    channel: np.ndarray  # (M, N) complex, free-space coefficients
    guide: np.ndarray  # (M, N) complex, in-waveguide propagation
    inner: np.ndarray  # (M,) complex

    @property
    def gains(self) -> np.ndarray:
        """Per-waveguide coherent combining magnitudes |inner|."""
        return np.abs(self.inner)


def los_coefficient(
    params: SystemParams, pa_position: np.ndarray, user: UserPosition
) -> complex | np.ndarray:
    """Free-space line-of-sight coefficient sqrt(eta) e^{-j 2 pi r / lambda} / r.

    ``pa_position`` is a 3-vector [x, y, z] or an array of them (leading
    dimensions broadcast).  Magnitude is sqrt(eta)/r with r the Euclidean
    distance to the user at [x_u, y_u, 0].
    """
    pos = np.asarray(pa_position, dtype=float)
    ref = np.array([user.x, user.y, 0.0])
    r = np.linalg.norm(pos - ref, axis=-1)
    if np.any(r <= 0):
        raise ValueError("PA/user distance must be positive")
    out = np.sqrt(params.eta_m2) * np.exp(-2j * np.pi / params.wavelength_m * r) / r
    return complex(out) if out.ndim == 0 else out


def waveguide_vector(
    params: SystemParams, waveguide: Waveguide, positions_row: np.ndarray
) -> np.ndarray:
    """In-waveguide propagation vector for one waveguide.

    Entry n is sqrt(alpha_n) e^{-j 2 pi (x_n - x_0) / lambda_g} where
    alpha_n = 10^(-kappa (x_n - x_0) / 10) / N splits the feed power equally
    across the N active PAs and applies the per-meter dielectric loss.
    """
    xs = np.asarray(positions_row, dtype=float)
    run = xs - waveguide.feed_x
    if np.any(run < -PinchingConfig._SLACK):
        raise FeasibilityError("PA positions must not precede the waveguide feed point")
    run = np.maximum(run, 0.0)
    alpha = 10.0 ** (-params.kappa_db_per_m * run / 10.0) / xs.size
    return np.sqrt(alpha) * np.exp(-2j * np.pi / params.guided_wavelength_m * run)


def effective_channel(
    params: SystemParams,
    layout: WaveguideLayout,
    pinching: PinchingConfig,
    user: UserPosition,
) -> EffectiveChannel:
    """Assemble the full channel state for one placement and user."""
    m_count, n_count = pinching.positions.shape
    if m_count != len(layout):
        raise ValueError("pinching matrix row count must match the waveguide count")
    channel = np.empty((m_count, n_count), dtype=complex)
    guide = np.empty((m_count, n_count), dtype=complex)
    for m, wg in enumerate(layout.waveguides):
        xs = pinching.positions[m]
        pa_xyz = np.stack([xs, np.full_like(xs, wg.y), np.full_like(xs, wg.height)], axis=-1)
        channel[m] = los_coefficient(params, pa_xyz, user)
        guide[m] = waveguide_vector(params, wg, xs)
    inner = np.sum(channel * guide, axis=1)
    return EffectiveChannel(channel=channel, guide=guide, inner=inner)
