"""Quick property suite behind ``dpris verify``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List

from ..capacity import mc_ergodic_capacity, mc_w_factor, w_max_dp, w_max_sp
from ..config import DP, SP, SystemConfig
from ..phases import optimal_phases
from ..streams import derive_seed
from ..threshold import (asymptotic_required_size, gap_coefficients, proposition1_check,
                         required_size, required_size_bruteforce)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def check_gap_identity(cfg: SystemConfig) -> CheckResult:
    c = gap_coefficients(cfg)
    worst = 0.0
    for l in (1, 5, 20, 100):
        direct = w_max_dp(cfg, l).w - w_max_sp(cfg, l).w
        scale = max(abs(direct), w_max_dp(cfg, l).w)
        worst = max(worst, abs(c.gap(l) - direct) / scale)
    return CheckResult("gap identity", worst <= 1e-10, f"max relative error {worst:.2e}")


def check_threshold_bruteforce(cfg: SystemConfig) -> CheckResult:
    bad = []
    for p_db in range(0, 31, 2):
        c = cfg.replace(power_db=float(p_db))
        formula = required_size(c).l_req
        brute = required_size_bruteforce(c)
        if formula != brute:
            bad.append((p_db, formula, brute))
    return CheckResult("threshold vs brute force", not bad,
                       "16 powers agree" if not bad else f"mismatches {bad}")


def check_proposition1(cfg: SystemConfig) -> CheckResult:
    grid = [cfg.replace(alpha=k / 100) for k in range(1, 100)]
    rep = proposition1_check(grid)
    return CheckResult("leakage sign rule", rep.passed,
                       f"{rep.checked} alphas, {len(rep.counterexamples)} counterexamples")


def check_proposition2(cfg: SystemConfig) -> CheckResult:
    seq = [required_size(cfg.replace(power_db=float(p))).l_req for p in range(0, 91, 5)]
    try:
        asym = asymptotic_required_size(cfg)
    except ValueError as exc:
        return CheckResult("high-power limit", False, str(exc))
    if any(v is None for v in seq):
        return CheckResult("high-power limit", False, f"undefined threshold in {seq}")
    monotone = all(b <= a for a, b in zip(seq, seq[1:]))
    close = abs(seq[-1] - asym) <= 1
    return CheckResult("high-power limit", monotone and close,
                       f"L_req {seq[0]}->{seq[-1]}, asymptote {asym}")


def check_bound_vs_mc(cfg: SystemConfig, trials: int, seed: int) -> CheckResult:
    worst = 0.0
    for mode, bound in ((DP, w_max_dp), (SP, w_max_sp)):
        est = mc_w_factor(cfg, mode, optimal_phases(cfg, mode), trials, derive_seed(seed, "w", mode.value))
        worst = max(worst, abs(est.mean - bound(cfg).w) / est.std_error)
    return CheckResult("bound vs MC W", worst <= 3.0, f"max deviation {worst:.2f} std errors")


def check_jensen(cfg: SystemConfig, trials: int, seed: int) -> CheckResult:
    gaps = []
    ok = True
    for mode, bound in ((DP, w_max_dp), (SP, w_max_sp)):
        est = mc_ergodic_capacity(cfg, mode, optimal_phases(cfg, mode), trials,
                                  derive_seed(seed, "c", mode.value))
        g = bound(cfg).capacity - est.mean
        ok &= g >= -3 * est.std_error
        gaps.append(g)
    return CheckResult("Jensen ordering", ok, "gaps " + ", ".join(f"{g:.4f}" for g in gaps))


def run_checks(cfg: SystemConfig, trials: int = 20_000, seed: int = 0) -> List[CheckResult]:
    checks: List[Callable[[], CheckResult]] = [
        lambda: check_gap_identity(cfg),
        lambda: check_threshold_bruteforce(cfg),
        lambda: check_proposition1(cfg),
        lambda: check_proposition2(cfg),
        lambda: check_bound_vs_mc(cfg, trials, seed),
        lambda: check_jensen(cfg, trials, seed),
    ]
    return [c() for c in checks]
