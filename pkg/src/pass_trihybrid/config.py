"""Experiment configuration: flat key = value files, units at the boundary.

Configs accept dBm for powers, dB/m for the waveguide loss, GHz for the
carrier, and either meters or wavelength multiples for the minimum PA
spacing; everything is converted to SI on load.  Unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import hashlib
import math
from dataclasses import dataclass, fields

from .model import SPEED_OF_LIGHT, SystemParams

SCHEMA_VERSION = "pass-trihybrid v1"


class ConfigError(ValueError):
    """Malformed configuration file or invalid parameter combination."""


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) / 1000.0


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts * 1000.0)


_SWEEP_ALIASES = {
    "n": "N",
    "dx": "Dx",
    "d_x": "Dx",
    "m": "M",
    "min_spacing": "min_spacing",
    "delta_min": "min_spacing",
    "dmin": "min_spacing",
}
_MODES = ("single", "multi", "baseline")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a batch run needs: system, sweep, user model, RNG, modes."""

    fc_ghz: float = 28.0
    n_eff: float = 1.4
    kappa_db_per_m: float = 0.08
    power_dbm: float = 10.0
    noise_dbm: float = -90.0
    min_spacing_m: float | None = None  # None: half a wavelength
    dx_m: float = 50.0
    dy_m: float = 20.0
    height_m: float = 3.0
    num_waveguides: int = 4
    num_pas: int = 4
    num_rf_chains: int = 2
    baseline_elements: int | None = None
    sweep: str = "N"
    sweep_values: tuple[float, ...] = (2, 4, 8, 16, 32, 64)
    user: str = "fixed"
    user_x: float = 0.0
    user_y: float = 0.0
    draws: int = 10_000
    seed: int = 424242
    case: int = 1
    modes: tuple[str, ...] = _MODES

    def __post_init__(self) -> None:
        if self.sweep not in ("N", "Dx", "M", "min_spacing"):
            raise ConfigError(f"unknown sweep variable {self.sweep!r}")
        if not self.sweep_values:
            raise ConfigError("sweep_values must not be empty")
        if any(v <= 0 for v in self.sweep_values):
            raise ConfigError("sweep values must be positive")
        if self.sweep == "N" and any(int(v) != v or int(v) % 2 for v in self.sweep_values):
            raise ConfigError("PA-count sweep values must be even integers")
        if self.sweep == "M" and any(int(v) != v for v in self.sweep_values):
            raise ConfigError("waveguide-count sweep values must be integers")
        if self.user not in ("fixed", "uniform"):
            raise ConfigError("user model must be 'fixed' or 'uniform'")
        if self.draws < 1:
            raise ConfigError("draws must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")
        if self.case not in (1, 2):
            raise ConfigError("case must be 1 (lossless waveguides) or 2 (configured loss)")
        bad = [m for m in self.modes if m not in _MODES]
        if bad:
            raise ConfigError(f"unknown modes {bad}; valid: {_MODES}")

    def system_params(self, sweep_value: float | None = None) -> SystemParams:
        """Base system parameters, optionally with the sweep variable applied."""
        kw = dict(
            fc_hz=self.fc_ghz * 1e9,
            n_eff=self.n_eff,
            kappa_db_per_m=self.kappa_db_per_m,
            power_w=dbm_to_watts(self.power_dbm),
            noise_w=dbm_to_watts(self.noise_dbm),
            min_spacing_m=self.min_spacing_m,
            dx_m=self.dx_m,
            dy_m=self.dy_m,
            height_m=self.height_m,
            num_waveguides=self.num_waveguides,
            num_pas=self.num_pas,
            num_rf_chains=self.num_rf_chains,
        )
        if sweep_value is not None:
            key = {
                "N": "num_pas",
                "Dx": "dx_m",
                "M": "num_waveguides",
                "min_spacing": "min_spacing_m",
            }[self.sweep]
            kw[key] = int(sweep_value) if key in ("num_pas", "num_waveguides") else sweep_value
        try:
            return SystemParams(**kw)
        except ValueError as err:
            raise ConfigError(str(err)) from err

    def params_for_case(self, sweep_value: float | None = None) -> SystemParams:
        """System parameters with the case's waveguide-loss convention applied."""
        params = self.system_params(sweep_value)
        return params.replace(kappa_db_per_m=0.0) if self.case == 1 else params

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def canonical_text(self) -> str:
        pairs = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(str(v) for v in value)
            pairs.append(f"{f.name}={value}")
        return "\n".join(sorted(pairs)) + "\n"

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:12]


def _parse_scalar(key: str, raw: str, kind: type):
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
    except ValueError as err:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind.__name__}") from err
    return raw


_INT_KEYS = {"num_waveguides", "num_pas", "num_rf_chains", "baseline_elements", "draws", "seed", "case"}
_FLOAT_KEYS = {
    "fc_ghz", "n_eff", "kappa_db_per_m", "power_dbm", "noise_dbm", "min_spacing_m",
    "min_spacing_wavelengths", "dx_m", "dy_m", "height_m", "user_x", "user_y",
}
_STR_KEYS = {"sweep", "sweep_values", "user", "modes"}


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse one ``key = value`` per line; ``#`` starts a comment."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value

    known = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "min_spacing_m" in raw and "min_spacing_wavelengths" in raw:
        raise ConfigError("give min_spacing_m or min_spacing_wavelengths, not both")

    kw: dict = {}
    for key, value in raw.items():
        if key in _INT_KEYS:
            kw[key] = _parse_scalar(key, value, int)
        elif key in _FLOAT_KEYS:
            kw[key] = _parse_scalar(key, value, float)
        elif key == "sweep":
            norm = _SWEEP_ALIASES.get(value.lower())
            if norm is None:
                raise ConfigError(f"unknown sweep variable {value!r}")
            kw["sweep"] = norm
        elif key == "sweep_values":
            try:
                kw["sweep_values"] = tuple(float(v) for v in value.split(",") if v.strip())
            except ValueError as err:
                raise ConfigError(f"sweep_values: cannot parse {value!r}") from err
        elif key == "user":
            kw["user"] = value.lower()
        elif key == "modes":
            if value.strip().lower() == "all":
                kw["modes"] = _MODES
            else:
                kw["modes"] = tuple(m.strip().lower() for m in value.split(",") if m.strip())

    spacing_wl = kw.pop("min_spacing_wavelengths", None)
    if spacing_wl is not None:
        fc_ghz = kw.get("fc_ghz", ExperimentConfig.fc_ghz)
        kw["min_spacing_m"] = spacing_wl * SPEED_OF_LIGHT / (fc_ghz * 1e9)
    return ExperimentConfig(**kw)


def load_config(path: str | None) -> ExperimentConfig:
    """Read a config file, or return the defaults when no path is given."""
    if path is None:
        return ExperimentConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    return parse_config_text(text)
