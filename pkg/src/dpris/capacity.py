"""Ergodic capacity: Monte Carlo estimators and closed-form bounds.

The capacity of the ``2 x 2Nt`` link is ``E log2 det(I + P/(2Nt) H H^H)``.
For a 2x2 Gram matrix the determinant expands to
``1 + c*trace + c**2*det`` with ``c = P/(2Nt)``, so the Monte Carlo paths
only need the two Gram moments per draw. ``W`` is the expectation of that
polynomial and ``log2 W`` upper-bounds the capacity.

Only the direct link ``H0`` is random; the cascade is fixed LoS.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import streams
from .channel import (PhaseSetting, build_cascade_channels, build_phase_matrix,
                      hop_couplings, sample_direct_channel)
from .config import PolarizationMode, SystemConfig

DEFAULT_TRIALS = 100_000


class ConsistencyError(RuntimeError):
    """A closed form produced a value its derivation rules out."""


@dataclass(frozen=True)
class MomentPair:
    expected_trace: float
    expected_det: float


@dataclass(frozen=True)
class CapacityEstimate:
    mean: float
    std_error: float
    trials: int
    seed: int

    @classmethod
    def from_samples(cls, samples: np.ndarray, seed: int) -> "CapacityEstimate":
        n = samples.size
        se = float(samples.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(float(samples.mean()), se, n, int(seed))


@dataclass(frozen=True, eq=False)
class BoundCoefficients:
    """Scalars of the closed-form DP/SP moments.

    ``a[p, q]`` and ``b[p, q]`` weight the polarization-0 and polarization-1
    RIS sums in the ``q -> p`` block of the reflected channel.
    """

    a: np.ndarray
    b: np.ndarray
    c_sp: complex
    r1: complex
    r2: complex
    t0: float
    t1: float
    r_of_p: complex

    @property
    def coupling(self) -> complex:
        """``a00 b11 + b00 a11 - a01 b10 - a10 b01``; drives the L^4 term."""
        a, b = self.a, self.b
        return a[0, 0] * b[1, 1] + b[0, 0] * a[1, 1] - a[0, 1] * b[1, 0] - a[1, 0] * b[0, 1]


class Bound(NamedTuple):
    w: float
    capacity: float


def eigen_moments(h: np.ndarray) -> tuple:
    """Trace and determinant of the Gram matrix ``H H^H`` of a 2-row channel.

    Accepts a single ``2 x n`` matrix or a stack ``(..., 2, n)``. The cofactor
    expansion is accumulated in extended precision; the determinant is
    clipped at zero since the Gram matrix is PSD.
    """
    h = np.asarray(h)
    if h.shape[-2] != 2:
        raise ValueError(f"expected 2 rows, got shape {h.shape}")
    hl = h.astype(np.clongdouble)
    r0, r1 = hl[..., 0, :], hl[..., 1, :]
    g00 = np.sum(r0.real ** 2 + r0.imag ** 2, axis=-1)
    g11 = np.sum(r1.real ** 2 + r1.imag ** 2, axis=-1)
    g01 = np.sum(r0 * np.conj(r1), axis=-1)
    tr = g00 + g11
    det = g00 * g11 - (g01.real ** 2 + g01.imag ** 2)
    tr = tr.astype(float)
    det = np.maximum(det, 0).astype(float)
    if tr.ndim == 0:
        return float(tr), float(det)
    return tr, det


# ---------------------------------------------------------------- closed forms

def bound_coefficients(config: SystemConfig, p_linear: float | None = None) -> BoundCoefficients:
    p = config.p_linear if p_linear is None else float(p_linear)
    nt, al = config.nt, config.alpha
    c1, c2 = hop_couplings(config)
    g = math.sqrt(config.beta1 * config.beta2)
    # the q->p block through RIS polarization k carries c2[p, k] * c1[k, q]
    a = g * np.outer(c2[:, 0], c1[0, :])
    b = g * np.outer(c2[:, 1], c1[1, :])
    ab = a * np.conj(b)
    co = ab[0, 0] + ab[1, 1]
    cross = ab[1, 0] + ab[0, 1]
    r1 = 2 * nt * (co + cross)
    r2 = 2 * nt * config.beta0 * (nt * (co + cross) - (al * co + (1 - al) * cross))

    def leak_weighted(m):
        e = np.abs(m) ** 2
        return float(al * (e[0, 0] + e[1, 1]) + (1 - al) * (e[1, 0] + e[0, 1]))

    c_sp = (math.sqrt(config.beta1 * config.beta2 * (1 - config.alpha_f1) * (1 - config.alpha_f2))
            * np.exp(1j * (config.psi1_sp + config.psi2_sp)))
    r_of_p = p ** 2 / (4 * nt ** 2) * r2 + p / (2 * nt) * r1
    return BoundCoefficients(a=a, b=b, c_sp=complex(c_sp), r1=complex(r1), r2=complex(r2),
                             t0=leak_weighted(a), t1=leak_weighted(b), r_of_p=complex(r_of_p))


def expected_moments_dp(config: SystemConfig, x0: complex, x1: complex) -> MomentPair:
    """Expected Gram trace/det of the DP channel for RIS sums ``x0``, ``x1``."""
    k = bound_coefficients(config)
    nt, b0, al = config.nt, config.beta0, config.alpha
    bb = config.beta1 * config.beta2
    e0, e1 = abs(x0) ** 2, abs(x1) ** 2
    cross = x0 * np.conj(x1)
    tr = nt * bb * (e0 + e1) + (k.r1 * cross).real + 2 * nt * b0
    det = (nt ** 2 * abs(k.coupling) ** 2 * e0 * e1
           + nt ** 2 * b0 * bb * (e0 + e1)
           + nt * b0 ** 2 * (nt - 2 * al + 2 * al ** 2)
           - nt * b0 * k.t0 * e0 - nt * b0 * k.t1 * e1
           + (k.r2 * cross).real)
    return MomentPair(float(tr), float(det))


def expected_moments_sp(config: SystemConfig, x: complex) -> MomentPair:
    """Expected Gram trace/det of the SP channel for RIS sum ``x``."""
    nt, b0 = config.nt, config.beta0
    keep = 1 - config.alpha
    casc = config.beta1 * config.beta2 * (1 - config.alpha_f1) * (1 - config.alpha_f2)
    e = abs(x) ** 2
    m = 2 * nt ** 2 - nt
    tr = 4 * nt * b0 * keep + 4 * nt * casc * e
    det = 2 * m * b0 ** 2 * keep ** 2 + 4 * m * b0 * keep * casc * e
    return MomentPair(float(tr), float(det))


def _excess_dp(config: SystemConfig, l, p: float, coeffs: BoundCoefficients | None = None):
    """``W_DP^max - 1``, vectorized over ``l``."""
    k = coeffs or bound_coefficients(config, p)
    nt, b0, al = config.nt, config.beta0, config.alpha
    bb = config.beta1 * config.beta2
    l2 = np.asarray(l, dtype=float) ** 2
    bracket = (abs(k.coupling) ** 2 * nt * l2 ** 2
               + b0 ** 2 * (nt - 2 * al + 2 * al ** 2)
               + 2 * nt * l2 * b0 * bb
               - b0 * l2 * (k.t0 + k.t1))
    return p * (bb * l2 + b0) + abs(k.r_of_p) * l2 + p ** 2 / (4 * nt) * bracket


def _excess_sp(config: SystemConfig, l, p: float):
    """``W_SP^max - 1``, vectorized over ``l``."""
    nt, b0 = config.nt, config.beta0
    keep = 1 - config.alpha
    casc = config.beta1 * config.beta2 * (1 - config.alpha_f1) * (1 - config.alpha_f2)
    l2 = np.asarray(l, dtype=float) ** 2
    return (p * (2 * b0 * keep + 8 * casc * l2)
            + p ** 2 / (2 * nt) * (8 * (2 * nt - 1) * b0 * casc * keep * l2
                                   + (2 * nt - 1) * keep ** 2 * b0 ** 2))


def _as_bound(excess) -> Bound:
    if np.any(np.asarray(excess) < -1e-12):
        raise ConsistencyError(f"bound below 1 (excess {np.min(excess)!r})")
    excess = np.maximum(excess, 0.0)
    w = 1.0 + excess
    cap = np.log1p(excess) / math.log(2)
    if np.ndim(w) == 0:
        return Bound(float(w), float(cap))
    return Bound(w, cap)


def w_max_dp(config: SystemConfig, l=None, p_linear: float | None = None) -> Bound:
    """DP capacity bound at optimal phases; ``l`` may be an array of sizes."""
    p = config.p_linear if p_linear is None else float(p_linear)
    return _as_bound(_excess_dp(config, config.l if l is None else l, p))


def w_max_sp(config: SystemConfig, l=None, p_linear: float | None = None) -> Bound:
    """SP capacity bound at the coherent phase design; ``l`` may be an array."""
    p = config.p_linear if p_linear is None else float(p_linear)
    return _as_bound(_excess_sp(config, config.l if l is None else l, p))


# ----------------------------------------------------------------- Monte Carlo

def _snr_per_stream(config: SystemConfig) -> float:
    return config.p_linear / (2 * config.nt)


def mc_gram_moments(config: SystemConfig, mode: PolarizationMode, setting: PhaseSetting | None,
                    trials: int = DEFAULT_TRIALS, seed: int = 0,
                    workers: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Per-trial Gram trace and determinant, in trial order.

    With ``setting=None`` the RIS phases are redrawn uniformly on every
    trial (the random-phase baseline); otherwise they stay fixed.
    """
    mode = PolarizationMode.parse(mode)
    h1, h2 = build_cascade_channels(config, mode)
    fixed = None
    if setting is not None:
        setting.check(config, mode)
        fixed = h2 @ build_phase_matrix(setting) @ h1
    n_ports = 2 * config.l

    def run_block(args):
        block, size = args
        rng = streams.block_rng(seed, block)
        if fixed is None:
            phases = rng.uniform(0.0, 2 * math.pi, size=(size, n_ports))
            reflected = (h2[None, :, :] * np.exp(1j * phases)[:, None, :]) @ h1
        else:
            reflected = fixed
        h = reflected + sample_direct_channel(config, mode, rng, size=size)
        return eigen_moments(h)

    sizes = streams.block_sizes(trials)
    parts = streams.ordered_map(run_block, list(enumerate(sizes)), workers)
    tr = np.concatenate([p[0] for p in parts])
    det = np.concatenate([p[1] for p in parts])
    return tr, det


def mc_ergodic_capacity(config: SystemConfig, mode: PolarizationMode, setting: PhaseSetting | None,
                        trials: int = DEFAULT_TRIALS, seed: int = 0,
                        workers: int | None = None) -> CapacityEstimate:
    """Monte Carlo ergodic capacity in bits/s/Hz (``setting=None``: random phases)."""
    tr, det = mc_gram_moments(config, mode, setting, trials, seed, workers)
    c = _snr_per_stream(config)
    return CapacityEstimate.from_samples(np.log1p(c * tr + c * c * det) / math.log(2), seed)


def mc_w_factor(config: SystemConfig, mode: PolarizationMode, setting: PhaseSetting | None,
                trials: int = DEFAULT_TRIALS, seed: int = 0,
                workers: int | None = None) -> CapacityEstimate:
    """Monte Carlo estimate of ``W = E[1 + c*trace + c^2*det]``."""
    tr, det = mc_gram_moments(config, mode, setting, trials, seed, workers)
    c = _snr_per_stream(config)
    return CapacityEstimate.from_samples(1.0 + c * tr + c * c * det, seed)
