import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpris import (DP, SP, PhaseSetting, SystemConfig, bound_coefficients, cascade_factors,
                   mc_w_factor, optimal_phases, random_phases)

from oracles import coherent_sum

phase = st.floats(-math.pi, math.pi)
angle = st.floats(-1.5, 1.5)


@st.composite
def configs(draw):
    grid = lambda: ((draw(phase), draw(phase)), (draw(phase), draw(phase)))
    return SystemConfig(
        nt=draw(st.integers(1, 8)), l=draw(st.integers(1, 32)),
        alpha=draw(st.floats(0.01, 0.99)), alpha_f1=draw(st.floats(0, 1)), alpha_f2=draw(st.floats(0, 1)),
        psi1=grid(), psi2=grid(), theta_aoa1=draw(angle), theta_aod2=draw(angle),
        spacing_ratio=draw(st.floats(0.1, 1.0)), power_db=draw(st.floats(-10, 40)))


def test_single_element_sum_is_one():
    cfg = SystemConfig(l=1, theta_aoa1=0.7, theta_aod2=-1.2)
    f = cascade_factors(PhaseSetting.dual([0.0], [0.0]), cfg)
    assert f.x0 == pytest.approx(1) and f.x1 == pytest.approx(1)


def test_destructive_pair():
    cfg = SystemConfig(l=2, theta_aoa1=0.0, theta_aod2=0.0)
    f = cascade_factors(PhaseSetting.dual([0.0, math.pi], [0.0, 0.0]), cfg)
    assert abs(f.x0) < 1e-15
    assert f.x1 == pytest.approx(2)


def test_matched_phases_are_coherent():
    cfg = SystemConfig(l=4)
    f = cascade_factors(optimal_phases(cfg, DP), cfg)
    assert abs(f.x0) == pytest.approx(4, abs=1e-12)


def test_sum_matches_oracle(reference):
    s = random_phases(reference, SP, seed=4)
    f = cascade_factors(s, reference)
    assert f.x == pytest.approx(coherent_sum(s.phases_v, reference.cascade_phase_step), abs=1e-12)


def test_zero_offsets_give_zero_targets(reference):
    k = bound_coefficients(reference)
    assert k.r_of_p.imag == 0 and k.r_of_p.real > 0
    s = optimal_phases(reference, DP)
    np.testing.assert_array_equal(s.phases_v, s.phases_h)


@given(configs())
@settings(max_examples=60)
def test_optimal_design_certificate(cfg):
    s = optimal_phases(cfg, DP)
    f = cascade_factors(s, cfg)
    assert abs(f.x0) == pytest.approx(cfg.l, rel=1e-9)
    assert abs(f.x1) == pytest.approx(cfg.l, rel=1e-9)
    z = bound_coefficients(cfg).r_of_p * f.x0 * np.conj(f.x1)
    assert z.real >= 0 and abs(z.imag) <= 1e-9 * max(1.0, abs(z))
    assert np.all((s.phases_v >= 0) & (s.phases_v < 2 * math.pi))
    assert np.all((s.phases_h >= 0) & (s.phases_h < 2 * math.pi))
    sp = optimal_phases(cfg, SP)
    assert abs(cascade_factors(sp, cfg).x) == pytest.approx(2 * cfg.l, rel=1e-9)


@given(configs(), st.floats(-10, 40))
@settings(max_examples=30)
def test_zero_offsets_make_design_power_independent(cfg, other_db):
    cfg = cfg.replace(psi1=((0, 0), (0, 0)), psi2=((0, 0), (0, 0)))
    a = optimal_phases(cfg, DP)
    b = optimal_phases(cfg.replace(power_db=other_db), DP)
    np.testing.assert_array_equal(a.phases_h, b.phases_h)


def test_vanishing_r_tie_break():
    # alpha_f1 = 0 and alpha_f2 = 0 make every a*b^* product vanish
    cfg = SystemConfig(alpha_f1=0.0, alpha_f2=0.0, psi1=((0, 1), (2, 3)))
    assert bound_coefficients(cfg).r_of_p == 0
    s = optimal_phases(cfg, DP)
    np.testing.assert_array_equal(s.phases_v, s.phases_h)


def test_random_phases_deterministic(reference):
    a, b = random_phases(reference, DP, 7), random_phases(reference, DP, 7)
    np.testing.assert_array_equal(a.diagonal, b.diagonal)
    c = random_phases(reference, DP, 8)
    assert not np.array_equal(a.diagonal, c.diagonal)
    assert random_phases(reference, SP, 7).phases_v.size == 2 * reference.l


def test_incoherent_sum_power(reference):
    e = np.array([abs(cascade_factors(random_phases(reference, DP, s), reference).x0) ** 2
                  for s in range(10_000)])
    se = e.std(ddof=1) / math.sqrt(e.size)
    assert abs(e.mean() - reference.l) <= 3 * se


def test_optimal_dominates_random_settings(reference):
    opt = mc_w_factor(reference, DP, optimal_phases(reference, DP), 20_000, seed=1)
    for k in range(100):
        est = mc_w_factor(reference, DP, random_phases(reference, DP, seed=1000 + k), 2_000, seed=k)
        assert est.mean <= opt.mean + 3 * math.hypot(est.std_error, opt.std_error)
