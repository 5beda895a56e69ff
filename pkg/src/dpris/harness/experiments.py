"""The three figure experiments: capacity vs power, vs RIS size, and threshold vs power."""

from __future__ import annotations

import math
from typing import Dict, List

from .. import streams
from ..capacity import _excess_dp, _excess_sp, bound_coefficients, mc_ergodic_capacity, w_max_dp, w_max_sp
from ..config import DP, SP
from ..phases import optimal_phases
from ..threshold import required_size
from .spec import ExperimentKind, ExperimentSpec

POWER_COLUMNS = (
    "power_db", "cap_bound_dp", "cap_bound_sp",
    "mc_cap_dp_opt", "mc_cap_sp_opt", "mc_cap_dp_rand", "mc_cap_sp_rand",
    "mc_stderr_dp_opt", "mc_stderr_sp_opt", "mc_stderr_dp_rand", "mc_stderr_sp_rand",
)
SIZE_COLUMNS = (
    "l", "cap_bound_dp", "cap_bound_sp", "w_gap",
    "mc_cap_dp_opt", "mc_cap_sp_opt", "mc_stderr_dp_opt", "mc_stderr_sp_opt",
    "is_required_size",
)
THRESHOLD_COLUMNS = ("power_db", "alpha", "l_req", "continuous_root", "asymptotic_l")

Row = Dict[str, object]


def _expect(spec: ExperimentSpec, kind: ExperimentKind) -> None:
    if spec.kind is not kind:
        raise ValueError(f"spec is a {spec.kind.value}, expected {kind.value}")


def _mc(cfg, mode, setting, spec: ExperimentSpec, tag: str, point):
    seed = streams.derive_seed(spec.seed, tag, point)
    return mc_ergodic_capacity(cfg, mode, setting, spec.trials, seed, workers=1)


def run_power_sweep(spec: ExperimentSpec, workers: int | None = None) -> List[Row]:
    _expect(spec, ExperimentKind.POWER_SWEEP)

    def point(p_db: float) -> Row:
        cfg = spec.config_at(p_db)
        dp_opt = _mc(cfg, DP, optimal_phases(cfg, DP), spec, "dp-opt", p_db)
        sp_opt = _mc(cfg, SP, optimal_phases(cfg, SP), spec, "sp-opt", p_db)
        dp_rand = _mc(cfg, DP, None, spec, "dp-rand", p_db)
        sp_rand = _mc(cfg, SP, None, spec, "sp-rand", p_db)
        return {
            "power_db": p_db,
            "cap_bound_dp": w_max_dp(cfg).capacity,
            "cap_bound_sp": w_max_sp(cfg).capacity,
            "mc_cap_dp_opt": dp_opt.mean,
            "mc_cap_sp_opt": sp_opt.mean,
            "mc_cap_dp_rand": dp_rand.mean,
            "mc_cap_sp_rand": sp_rand.mean,
            "mc_stderr_dp_opt": dp_opt.std_error,
            "mc_stderr_sp_opt": sp_opt.std_error,
            "mc_stderr_dp_rand": dp_rand.std_error,
            "mc_stderr_sp_rand": sp_rand.std_error,
        }

    return streams.ordered_map(point, spec.sweep_values, workers)


def run_size_sweep(spec: ExperimentSpec, workers: int | None = None) -> List[Row]:
    _expect(spec, ExperimentKind.SIZE_SWEEP)
    flagged = required_size(spec.config).l_req
    p = spec.config.p_linear
    coeffs = bound_coefficients(spec.config, p)

    def point(l: int) -> Row:
        cfg = spec.config_at(l)
        dp_opt = _mc(cfg, DP, optimal_phases(cfg, DP), spec, "dp-opt", l)
        sp_opt = _mc(cfg, SP, optimal_phases(cfg, SP), spec, "sp-opt", l)
        return {
            "l": l,
            "cap_bound_dp": w_max_dp(cfg).capacity,
            "cap_bound_sp": w_max_sp(cfg).capacity,
            "w_gap": float(_excess_dp(cfg, l, p, coeffs) - _excess_sp(cfg, l, p)),
            "mc_cap_dp_opt": dp_opt.mean,
            "mc_cap_sp_opt": sp_opt.mean,
            "mc_stderr_dp_opt": dp_opt.std_error,
            "mc_stderr_sp_opt": sp_opt.std_error,
            "is_required_size": int(flagged is not None and l == flagged),
        }

    return streams.ordered_map(point, spec.sweep_values, workers)


def run_threshold_sweep(spec: ExperimentSpec, workers: int | None = None) -> List[Row]:
    """One row per (alpha, P); a listed alpha is applied to alpha, alpha_f1 and alpha_f2."""
    _expect(spec, ExperimentKind.THRESHOLD_SWEEP)
    bases = ([spec.config] if spec.alphas is None else
             [spec.config.replace(alpha=a, alpha_f1=a, alpha_f2=a) for a in spec.alphas])
    points = [(base, p_db) for base in bases for p_db in spec.sweep_values]

    def point(item) -> Row:
        base, p_db = item
        res = required_size(base.replace(power_db=p_db))
        root = res.continuous_root
        return {
            "power_db": p_db,
            "alpha": base.alpha,
            "l_req": res.l_req,
            "continuous_root": None if math.isnan(root) else root,
            "asymptotic_l": res.asymptotic_l,
        }

    return streams.ordered_map(point, points, workers)


RUNNERS = {
    ExperimentKind.POWER_SWEEP: (run_power_sweep, POWER_COLUMNS),
    ExperimentKind.SIZE_SWEEP: (run_size_sweep, SIZE_COLUMNS),
    ExperimentKind.THRESHOLD_SWEEP: (run_threshold_sweep, THRESHOLD_COLUMNS),
}
