"""System parameters shared by every model component."""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from typing import Tuple

Grid2 = Tuple[Tuple[float, float], Tuple[float, float]]

_ZERO_GRID: Grid2 = ((0.0, 0.0), (0.0, 0.0))


class ConfigError(ValueError):
    """Raised for an invalid parameter. ``key`` names the offending field."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class PolarizationMode(enum.Enum):
    DUAL = "dp"
    SINGLE = "sp"

    @classmethod
    def parse(cls, value) -> "PolarizationMode":
        if isinstance(value, cls):
            return value
        v = str(value).strip().lower()
        if v in ("dp", "dual", "dual-polarized", "dualpolarized"):
            return cls.DUAL
        if v in ("sp", "single", "single-polarized", "singlepolarized"):
            return cls.SINGLE
        raise ConfigError("mode", f"unknown polarization mode {value!r}")


DP = PolarizationMode.DUAL
SP = PolarizationMode.SINGLE


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def _as_grid(key: str, value) -> Grid2:
    try:
        rows = [[float(v) for v in row] for row in value]
    except TypeError as exc:
        raise ConfigError(key, "expected a 2x2 grid of radians") from exc
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ConfigError(key, "expected a 2x2 grid of radians")
    if not all(math.isfinite(v) for r in rows for v in r):
        raise ConfigError(key, "phase offsets must be finite")
    return ((rows[0][0], rows[0][1]), (rows[1][0], rows[1][1]))


@dataclass(frozen=True)
class SystemConfig:
    """Scalar model parameters.

    ``nt`` counts dual-polarized BS antennas (the SP array has ``2*nt``
    elements) and ``l`` counts dual-polarized RIS elements (``2*l`` SP
    elements). ``psi1``/``psi2`` are indexed ``[p][q]``: from polarization
    ``q`` into polarization ``p``. Transmit power is relative to unit noise.
    """

    nt: int = 4
    l: int = 20
    beta0: float = 0.2
    beta1: float = 0.2
    beta2: float = 0.2
    alpha: float = 0.14
    alpha_f1: float = 0.1
    alpha_f2: float = 0.13
    psi1: Grid2 = _ZERO_GRID
    psi2: Grid2 = _ZERO_GRID
    psi1_sp: float = 0.0
    psi2_sp: float = 0.0
    theta_aoa1: float = math.pi / 6
    theta_aod1: float = math.pi / 4
    theta_aod2: float = -math.pi / 6
    theta_aoa2: float = math.pi / 3
    spacing_ratio: float = 0.5
    power_db: float = 10.0

    def __post_init__(self):
        if isinstance(self.nt, bool) or int(self.nt) != self.nt or self.nt < 1:
            raise ConfigError("nt", f"must be a positive integer, got {self.nt!r}")
        if isinstance(self.l, bool) or int(self.l) != self.l or self.l < 0:
            raise ConfigError("l", f"must be a nonnegative integer, got {self.l!r}")
        object.__setattr__(self, "nt", int(self.nt))
        object.__setattr__(self, "l", int(self.l))
        for key in ("beta0", "beta1", "beta2", "alpha", "alpha_f1", "alpha_f2"):
            v = float(getattr(self, key))
            if not (0.0 <= v <= 1.0):
                raise ConfigError(key, f"must lie in [0, 1], got {v!r}")
            object.__setattr__(self, key, v)
        object.__setattr__(self, "psi1", _as_grid("psi1", self.psi1))
        object.__setattr__(self, "psi2", _as_grid("psi2", self.psi2))
        for key in ("psi1_sp", "psi2_sp", "power_db"):
            v = float(getattr(self, key))
            if not math.isfinite(v):
                raise ConfigError(key, "must be finite")
            object.__setattr__(self, key, v)
        for key in ("theta_aoa1", "theta_aod1", "theta_aod2", "theta_aoa2"):
            v = float(getattr(self, key))
            if not (-math.pi / 2 < v < math.pi / 2):
                raise ConfigError(key, f"must lie in (-pi/2, pi/2), got {v!r}")
            object.__setattr__(self, key, v)
        s = float(self.spacing_ratio)
        if not (s > 0 and math.isfinite(s)):
            raise ConfigError("spacing_ratio", f"must be positive, got {s!r}")
        object.__setattr__(self, "spacing_ratio", s)

    @property
    def p_linear(self) -> float:
        return db_to_linear(self.power_db)

    @property
    def cascade_phase_step(self) -> float:
        """Per-element phase advance of the BS->RIS->user LoS path."""
        return 2 * math.pi * self.spacing_ratio * (
            math.sin(self.theta_aoa1) + math.sin(self.theta_aod2))

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes)


def reference_config(**overrides) -> SystemConfig:
    """Reference scenario: beta=0.2, 2Nt=8, L=20, alpha=0.14, alpha_f=(0.1, 0.13)."""
    return SystemConfig(**overrides)


CONFIG_FIELDS = tuple(f.name for f in dataclasses.fields(SystemConfig))
