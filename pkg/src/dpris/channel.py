"""Channel synthesis for the DP and SP RIS-aided links.

Matrices use polarization-major block ordering: for DP, rows and columns are
``[pol-0 ports, pol-1 ports]``. Both modes share identical dimensions:
``H0`` is ``2 x 2Nt``, ``H1`` is ``2L x 2Nt`` and ``H2`` is ``2 x 2L``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .config import PolarizationMode, SystemConfig

TWO_PI = 2 * math.pi


def steering_vector(n: int, theta: float, spacing_ratio: float = 0.5) -> np.ndarray:
    """ULA response ``exp(j*2*pi*k*d/lambda*sin(theta))`` for ``k = 0..n-1``."""
    if n < 1:
        raise ValueError(f"steering vector needs n >= 1, got {n}")
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    k = np.arange(n)
    return np.exp(1j * TWO_PI * spacing_ratio * math.sin(theta) * k)


def _wrap_phase(x) -> np.ndarray:
    x = np.mod(np.asarray(x, dtype=float), TWO_PI)
    # mod of tiny negatives rounds up to exactly 2*pi
    x[x >= TWO_PI] = 0.0
    return x


@dataclass(frozen=True, eq=False)
class PhaseSetting:
    """RIS phase state.

    DP: ``phases_v`` and ``phases_h`` each hold ``L`` phases (polarization 0
    and 1). SP: ``phases_v`` holds ``2L`` phases, ``phases_h`` is empty.
    Phases are wrapped into ``[0, 2*pi)`` on construction.
    """

    mode: PolarizationMode
    phases_v: np.ndarray
    phases_h: np.ndarray

    def __post_init__(self):
        mode = PolarizationMode.parse(self.mode)
        v = np.atleast_1d(np.asarray(self.phases_v, dtype=float)).ravel()
        h = np.atleast_1d(np.asarray(self.phases_h, dtype=float)).ravel()
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(h))):
            raise ValueError("phase shifts must be finite")
        if mode is PolarizationMode.DUAL and v.size != h.size:
            raise ValueError(f"DP setting needs equal-length vectors, got {v.size} and {h.size}")
        if mode is PolarizationMode.SINGLE and h.size:
            raise ValueError("SP setting carries a single length-2L vector")
        if mode is PolarizationMode.SINGLE and v.size % 2:
            raise ValueError(f"SP setting needs an even number of phases, got {v.size}")
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "phases_v", _wrap_phase(v))
        object.__setattr__(self, "phases_h", _wrap_phase(h))

    @classmethod
    def dual(cls, phases_v, phases_h) -> "PhaseSetting":
        return cls(PolarizationMode.DUAL, phases_v, phases_h)

    @classmethod
    def single(cls, phases) -> "PhaseSetting":
        return cls(PolarizationMode.SINGLE, phases, np.empty(0))

    @property
    def l(self) -> int:
        if self.mode is PolarizationMode.DUAL:
            return self.phases_v.size
        return self.phases_v.size // 2

    @property
    def diagonal(self) -> np.ndarray:
        """All ``2L`` phases in port order."""
        return np.concatenate([self.phases_v, self.phases_h])

    def check(self, config: SystemConfig, mode: PolarizationMode | None = None) -> None:
        if mode is not None and PolarizationMode.parse(mode) is not self.mode:
            raise ValueError(f"setting is {self.mode.value}, expected {PolarizationMode.parse(mode).value}")
        if self.l != config.l:
            raise ValueError(f"setting has L={self.l}, config has L={config.l}")


def build_phase_matrix(setting: PhaseSetting) -> np.ndarray:
    """Diagonal ``2L x 2L`` reflection matrix (block-diagonal ``[Phi0, Phi1]`` for DP)."""
    return np.diag(np.exp(1j * setting.diagonal))


def _pol_coupling(alpha_f: float, psi) -> np.ndarray:
    """2x2 amplitude/phase weights of one LoS hop, indexed [to-pol, from-pol]."""
    co, cross = math.sqrt(1.0 - alpha_f), math.sqrt(alpha_f)
    mag = np.array([[co, cross], [cross, co]])
    return mag * np.exp(1j * np.asarray(psi, dtype=float))


def hop_couplings(config: SystemConfig) -> tuple[np.ndarray, np.ndarray]:
    """Polarization weight grids of the BS->RIS and RIS->user hops (without path loss)."""
    return _pol_coupling(config.alpha_f1, config.psi1), _pol_coupling(config.alpha_f2, config.psi2)


def direct_channel_variances(config: SystemConfig, mode: PolarizationMode) -> np.ndarray:
    """Per-entry variance of ``H0``, shape ``2 x 2Nt``."""
    nt, a, b0 = config.nt, config.alpha, config.beta0
    if PolarizationMode.parse(mode) is PolarizationMode.SINGLE:
        return np.full((2, 2 * nt), b0 * (1.0 - a))
    row0 = np.concatenate([np.full(nt, 1.0 - a), np.full(nt, a)])
    return b0 * np.stack([row0, row0[::-1]])


def sample_direct_channel(config: SystemConfig, mode: PolarizationMode,
                          rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Draw the Rayleigh direct link ``H0``.

    Returns ``2 x 2Nt`` or, with ``size``, a stack ``size x 2 x 2Nt``.
    """
    sigma = np.sqrt(direct_channel_variances(config, mode) / 2.0)
    shape = sigma.shape if size is None else (size,) + sigma.shape
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return sigma * (re + 1j * im)


def build_cascade_channels(config: SystemConfig, mode: PolarizationMode) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic LoS channels ``(H1, H2)``; empty when ``L = 0``."""
    mode = PolarizationMode.parse(mode)
    nt, l, d = config.nt, config.l, config.spacing_ratio
    if l == 0:
        return np.zeros((0, 2 * nt), complex), np.zeros((2, 0), complex)
    g1 = math.sqrt(config.beta1)
    g2 = math.sqrt(config.beta2)
    if mode is PolarizationMode.SINGLE:
        h1 = (g1 * math.sqrt(1 - config.alpha_f1) * np.exp(1j * config.psi1_sp)
              * np.outer(steering_vector(2 * l, config.theta_aoa1, d),
                         steering_vector(2 * nt, config.theta_aod1, d)))
        h2 = (g2 * math.sqrt(1 - config.alpha_f2) * np.exp(1j * config.psi2_sp)
              * np.outer(steering_vector(2, config.theta_aoa2, d),
                         steering_vector(2 * l, config.theta_aod2, d)))
        return h1, h2
    c1, c2 = hop_couplings(config)
    shared1 = np.outer(steering_vector(l, config.theta_aoa1, d),
                       steering_vector(nt, config.theta_aod1, d))
    shared2 = steering_vector(l, config.theta_aod2, d)[None, :]
    return g1 * np.kron(c1, shared1), g2 * np.kron(c2, shared2)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    h0: np.ndarray
    h1: np.ndarray
    h2: np.ndarray

    def __post_init__(self):
        h0, h1, h2 = (np.asarray(m, dtype=complex) for m in (self.h0, self.h1, self.h2))
        if h0.shape[-2] != 2 or h2.shape[-2] != 2:
            raise ValueError("direct and RIS->user channels must have 2 rows")
        if h1.shape[-1] != h0.shape[-1] or h2.shape[-1] != h1.shape[-2]:
            raise ValueError(f"inconsistent shapes {h0.shape}, {h1.shape}, {h2.shape}")
        object.__setattr__(self, "h0", h0)
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)

    @property
    def l(self) -> int:
        return self.h1.shape[-2] // 2


def sample_realization(config: SystemConfig, mode: PolarizationMode,
                       rng: np.random.Generator) -> ChannelRealization:
    h1, h2 = build_cascade_channels(config, mode)
    return ChannelRealization(sample_direct_channel(config, mode, rng), h1, h2)


def effective_channel(realization: ChannelRealization, phi: np.ndarray) -> np.ndarray:
    """``H2 @ Phi @ H1 + H0``; ``H0`` may be a stack of draws."""
    r = realization
    phi = np.asarray(phi)
    if phi.shape != (r.h1.shape[0], r.h1.shape[0]):
        raise ValueError(f"phase matrix {phi.shape} does not match H1 {r.h1.shape}")
    return r.h2 @ phi @ r.h1 + r.h0


def empirical_xpd(samples: Iterable[np.ndarray] | np.ndarray) -> float:
    """Co- to cross-polarized energy ratio of DP direct-channel draws.

    Energies are pooled over both polarization pairs before dividing.
    Returns ``inf`` when no cross-polarized energy is present.
    """
    h = np.asarray(samples if isinstance(samples, np.ndarray) else list(samples))
    if h.ndim == 2:
        h = h[None]
    if h.size == 0:
        raise ValueError("need at least one sample")
    nt = h.shape[-1] // 2
    e = np.abs(h) ** 2
    co = e[:, 0, :nt].sum() + e[:, 1, nt:].sum()
    cross = e[:, 1, :nt].sum() + e[:, 0, nt:].sum()
    if cross == 0:
        return math.inf
    return float(co / cross)
