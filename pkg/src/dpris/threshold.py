"""Minimum RIS size at which the DP bound overtakes the SP bound.

``W_DP^max(L) - W_SP^max(L)`` is a biquadratic ``d1 L^4 + d2 L^2 + d3``;
the threshold is the ceiling of its positive root, snapped to the smallest
integer with a strictly positive gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

import numpy as np

from .capacity import _excess_dp, _excess_sp, bound_coefficients
from .config import SystemConfig

TIE_SLACK = 1e-9
DEFAULT_L_MAX = 10_000
ZERO_TOL = 1e-12

ALREADY_SUPERIOR = "DP never requires an RIS (already superior)"
NO_CROSSING = "no crossing in model"


@dataclass(frozen=True)
class GapCoefficients:
    d1: float
    d2: float
    d3: float

    def gap(self, l):
        l2 = np.asarray(l, dtype=float) ** 2
        return self.d1 * l2 ** 2 + self.d2 * l2 + self.d3


@dataclass(frozen=True)
class ThresholdResult:
    l_req: Optional[int]
    continuous_root: float
    asymptotic_l: Optional[int]
    coefficients: GapCoefficients
    reason: Optional[str] = None


def _g(config: SystemConfig) -> float:
    nt, al = config.nt, config.alpha
    return (nt - 2 * al + 2 * al ** 2) - 2 * (2 * nt - 1) * (1 - al) ** 2


def gap_coefficients(config: SystemConfig, p_linear: float | None = None) -> GapCoefficients:
    p = config.p_linear if p_linear is None else float(p_linear)
    k = bound_coefficients(config, p)
    nt, b0, al = config.nt, config.beta0, config.alpha
    bb = config.beta1 * config.beta2
    casc = (1 - config.alpha_f1) * (1 - config.alpha_f2)
    d1 = (p / 2) ** 2 * abs(k.coupling) ** 2
    d2 = (abs(k.r_of_p) + p * bb - 8 * p * bb * casc
          - 4 * p ** 2 / nt * (2 * nt - 1) * b0 * bb * (1 - al) * casc
          + p ** 2 / (4 * nt) * b0 * (2 * nt * bb - (k.t0 + k.t1)))
    # factored so that alpha = 1/2 gives exactly zero
    d3 = p * b0 * (2 * al - 1) + p ** 2 / (4 * nt) * b0 ** 2 * _g(config)
    return GapCoefficients(float(d1), float(d2), float(d3))


def _asymptotic_coefficients(config: SystemConfig) -> GapCoefficients:
    """Leading P^2 parts of d1, d2, d3 divided by P^2."""
    k = bound_coefficients(config, 1.0)
    nt, b0, al = config.nt, config.beta0, config.alpha
    bb = config.beta1 * config.beta2
    casc = (1 - config.alpha_f1) * (1 - config.alpha_f2)
    d1 = abs(k.coupling) ** 2 / 4
    d2 = (abs(k.r2) / (4 * nt ** 2)
          - 4 / nt * (2 * nt - 1) * b0 * bb * (1 - al) * casc
          + b0 / (4 * nt) * (2 * nt * bb - (k.t0 + k.t1)))
    d3 = b0 ** 2 / (4 * nt) * _g(config)
    return GapCoefficients(float(d1), float(d2), float(d3))


def _positive_root(c: GapCoefficients) -> Tuple[Optional[float], Optional[str]]:
    d1, d2, d3 = c.d1, c.d2, c.d3
    if d3 > 0:
        return 0.0, ALREADY_SUPERIOR
    if d1 > 0:
        if d3 == 0:
            return math.sqrt(max(-d2, 0.0) / d1), None
        s = math.sqrt(d2 * d2 - 4 * d1 * d3)
        # second form avoids cancellation when d2 > 0
        sq = (-d2 + s) / (2 * d1) if d2 <= 0 else -2 * d3 / (d2 + s)
        return math.sqrt(sq), None
    if d2 > 0:
        return math.sqrt(-d3 / d2), None
    return None, NO_CROSSING


def dp_beats_sp(config: SystemConfig, l, p_linear: float | None = None):
    """Strict DP-over-SP bound comparison with a relative tie slack."""
    p = config.p_linear if p_linear is None else float(p_linear)
    k = bound_coefficients(config, p)
    ex_dp = _excess_dp(config, l, p, k)
    ex_sp = _excess_sp(config, l, p)
    scale = np.maximum(np.maximum(ex_dp, ex_sp), np.finfo(float).tiny)
    return (ex_dp - ex_sp) > TIE_SLACK * scale


def asymptotic_required_size(config: SystemConfig) -> int:
    """Threshold size in the infinite-power limit (independent of ``power_db``)."""
    c = _asymptotic_coefficients(config)
    if c.d1 <= 0:
        raise ValueError("no quartic growth: L^4 coefficient vanishes")
    root, _ = _positive_root(c)
    return int(math.ceil(root))


def required_size(config: SystemConfig) -> ThresholdResult:
    coeffs = gap_coefficients(config)
    try:
        asym = asymptotic_required_size(config)
    except ValueError:
        asym = None
    root, reason = _positive_root(coeffs)
    if root is None:
        return ThresholdResult(None, math.nan, asym, coeffs, reason)
    l_req = int(math.ceil(root))
    # snap to the strict crossing; moves at most a few steps on ties
    for _ in range(4):
        if not dp_beats_sp(config, l_req):
            l_req += 1
        elif l_req > 0 and dp_beats_sp(config, l_req - 1):
            l_req -= 1
        else:
            break
    return ThresholdResult(l_req, root, asym, coeffs, reason)


def required_size_bruteforce(config: SystemConfig, l_max: int = DEFAULT_L_MAX,
                             chunk: int = 65_536) -> Optional[int]:
    """Smallest ``L`` in ``[0, l_max]`` whose DP bound beats the SP bound, by scanning."""
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    for start in range(0, l_max + 1, chunk):
        ls = np.arange(start, min(start + chunk, l_max + 1))
        hit = np.flatnonzero(dp_beats_sp(config, ls))
        if hit.size:
            return int(ls[hit[0]])
    return None


@dataclass
class Proposition1Report:
    passed: bool
    checked: int
    counterexamples: List[Tuple[SystemConfig, float]] = field(default_factory=list)


def proposition1_check(configs: Iterable[SystemConfig]) -> Proposition1Report:
    """Check ``sign(d3) == sign(2*alpha - 1)`` over a grid (zero allowed at 1/2)."""
    bad = []
    n = 0
    for cfg in configs:
        n += 1
        d3 = gap_coefficients(cfg).d3
        s = 2 * cfg.alpha - 1
        if s == 0:
            ok = abs(d3) <= ZERO_TOL
        else:
            ok = math.copysign(1.0, s) == math.copysign(1.0, d3) and d3 != 0
        if not ok:
            bad.append((cfg, d3))
    return Proposition1Report(not bad, n, bad)
