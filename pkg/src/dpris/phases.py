"""RIS phase designs and the scalar cascade sums they produce."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .capacity import bound_coefficients
from .channel import PhaseSetting
from .config import PolarizationMode, SystemConfig


@dataclass(frozen=True)
class CascadeFactors:
    """RIS sums ``a_L^T(aod2) Phi_p a_L(aoa1)``; ``x`` is the SP sum over ``2L`` elements."""

    x0: complex = 0j
    x1: complex = 0j
    x: complex = 0j


def _coherent_sum(phases: np.ndarray, step: float) -> complex:
    n = np.arange(phases.size)
    return complex(np.sum(np.exp(1j * (phases + step * n))))


def cascade_factors(setting: PhaseSetting, config: SystemConfig) -> CascadeFactors:
    setting.check(config)
    step = config.cascade_phase_step
    if setting.mode is PolarizationMode.DUAL:
        return CascadeFactors(x0=_coherent_sum(setting.phases_v, step),
                              x1=_coherent_sum(setting.phases_h, step))
    return CascadeFactors(x=_coherent_sum(setting.phases_v, step))


def _matched(n: int, target: float, step: float) -> np.ndarray:
    return target - step * np.arange(n)


def optimal_phases(config: SystemConfig, mode: PolarizationMode) -> PhaseSetting:
    """Phase design attaining the closed-form bound.

    Each polarization is co-phased to make ``|x_p| = L``. DP additionally
    rotates polarization 1 by ``angle(r(P))`` so ``r(P) x0 x1*`` is real and
    nonnegative; polarization 0 is anchored at zero. ``r(P) = 0`` leaves
    both targets at zero.
    """
    mode = PolarizationMode.parse(mode)
    step = config.cascade_phase_step
    l = config.l
    if mode is PolarizationMode.SINGLE:
        return PhaseSetting.single(_matched(2 * l, 0.0, step))
    r = bound_coefficients(config).r_of_p
    theta1 = cmath.phase(r) if r != 0 else 0.0
    return PhaseSetting.dual(_matched(l, 0.0, step), _matched(l, theta1, step))


def random_phases(config: SystemConfig, mode: PolarizationMode, seed: int) -> PhaseSetting:
    """I.i.d. uniform phases on ``[0, 2*pi)``, reproducible from ``seed``."""
    mode = PolarizationMode.parse(mode)
    rng = np.random.default_rng(seed)
    ph = rng.uniform(0.0, 2 * math.pi, size=2 * config.l)
    if mode is PolarizationMode.SINGLE:
        return PhaseSetting.single(ph)
    return PhaseSetting.dual(ph[: config.l], ph[config.l:])
