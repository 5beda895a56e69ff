import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpris import (DP, SP, ChannelRealization, PhaseSetting, build_cascade_channels,
                   build_phase_matrix, effective_channel, empirical_xpd, sample_direct_channel,
                   steering_vector)
from dpris.config import ConfigError, SystemConfig

angles = st.floats(-1.5, 1.5)


class TestSteeringVector:
    @pytest.mark.parametrize("n, theta, expected", [
        (2, 0.0, [1, 1]),
        (2, math.pi / 2, [1, -1]),
        (4, math.pi / 6, [1, 1j, -1, -1j]),
    ])
    def test_examples(self, n, theta, expected):
        np.testing.assert_allclose(steering_vector(n, theta, 0.5), expected, atol=1e-12)

    def test_zero_length_rejected(self):
        with pytest.raises(ValueError):
            steering_vector(0, 0.1)

    @given(n=st.integers(1, 64), theta=angles, d=st.floats(0.05, 2.0))
    def test_unit_modulus_and_conjugate_symmetry(self, n, theta, d):
        a = steering_vector(n, theta, d)
        assert a[0] == 1
        np.testing.assert_allclose(np.abs(a), 1.0, atol=1e-12)
        np.testing.assert_allclose(steering_vector(n, -theta, d), np.conj(a), atol=1e-12)


class TestPhaseMatrix:
    def test_dp_single_element(self):
        phi = build_phase_matrix(PhaseSetting.dual([0.0], [math.pi]))
        np.testing.assert_allclose(phi, np.diag([1, -1]), atol=1e-12)

    def test_sp_identity(self):
        np.testing.assert_array_equal(build_phase_matrix(PhaseSetting.single([0.0, 0.0])), np.eye(2))

    def test_dp_zero_phases_identity(self):
        np.testing.assert_array_equal(build_phase_matrix(PhaseSetting.dual([0, 0], [0, 0])), np.eye(4))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            PhaseSetting.dual([0.0, 1.0], [0.0])
        with pytest.raises(ValueError):
            PhaseSetting.single([0.0, 1.0, 2.0])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            PhaseSetting.single([0.0, np.nan])

    def test_setting_checked_against_config(self, reference):
        with pytest.raises(ValueError):
            PhaseSetting.dual([0.0], [0.0]).check(reference)

    @given(st.lists(st.floats(-100, 100), min_size=2, max_size=40).filter(lambda v: len(v) % 2 == 0))
    def test_unitary_and_normalized(self, phases):
        s = PhaseSetting.single(phases)
        assert np.all((0 <= s.phases_v) & (s.phases_v < 2 * math.pi))
        phi = build_phase_matrix(s)
        np.testing.assert_allclose(phi @ phi.conj().T, np.eye(len(phases)), atol=1e-12)
        np.testing.assert_array_equal(phi - np.diag(np.diag(phi)), 0)

    def test_tiny_negative_wraps_below_two_pi(self):
        s = PhaseSetting.single([-1e-18, 2 * math.pi])
        assert np.all(s.phases_v < 2 * math.pi)


def _block_variances(h, nt):
    e = np.abs(h) ** 2
    co = np.concatenate([e[:, 0, :nt].ravel(), e[:, 1, nt:].ravel()])
    cross = np.concatenate([e[:, 1, :nt].ravel(), e[:, 0, nt:].ravel()])
    return co, cross


def _within(sample, target, k=3.0):
    se = sample.std(ddof=1) / math.sqrt(sample.size)
    return abs(sample.mean() - target) <= k * se


class TestDirectChannel:
    def test_dp_block_variances(self, reference):
        h = sample_direct_channel(reference, DP, np.random.default_rng(1), size=100_000)
        assert h.shape == (100_000, 2, 8)
        co, cross = _block_variances(h, reference.nt)
        assert _within(co, 0.2 * 0.86)
        assert _within(cross, 0.2 * 0.14)

    def test_dp_full_leakage_zeroes_copol(self):
        cfg = SystemConfig(alpha=1.0)
        h = sample_direct_channel(cfg, DP, np.random.default_rng(2), size=10)
        co, cross = _block_variances(h, cfg.nt)
        assert np.all(co == 0)
        assert np.all(cross > 0)

    def test_sp_unit_variance(self):
        cfg = SystemConfig(alpha=0.0, beta0=1.0)
        h = sample_direct_channel(cfg, SP, np.random.default_rng(3), size=100_000)
        assert _within((np.abs(h) ** 2).ravel(), 1.0)

    def test_circular_symmetry(self, reference):
        h = sample_direct_channel(reference, SP, np.random.default_rng(4), size=100_000)[:, 0, 0]
        # E[h^2] vanishes and real/imag parts carry half the power each
        assert abs(np.mean(h ** 2)) < 5 * 0.172 / math.sqrt(100_000) * 2
        assert _within(h.real ** 2, 0.172 / 2)
        assert _within(h.imag ** 2, 0.172 / 2)

    @pytest.mark.parametrize("mode, per_entry", [(DP, None), (SP, 0.86)])
    def test_fair_power(self, reference, mode, per_entry):
        h = sample_direct_channel(reference, mode, np.random.default_rng(5), size=100_000)
        total = (np.abs(h) ** 2).sum(axis=(1, 2))
        if mode is DP:
            # each (co, cross) entry pair carries (1 - alpha) + alpha = 1
            target = reference.nt * 2 * reference.beta0
        else:
            target = 2 * reference.nt * 2 * reference.beta0 * per_entry
        assert _within(total, target)

    def test_single_draw_shape(self, reference):
        assert sample_direct_channel(reference, DP, np.random.default_rng(0)).shape == (2, 8)


class TestCascade:
    def test_no_cross_coupling_gives_block_diagonal(self):
        cfg = SystemConfig(alpha_f1=0.0, alpha_f2=0.0, l=3)
        h1, h2 = build_cascade_channels(cfg, DP)
        np.testing.assert_array_equal(h1[:3, 4:], 0)
        np.testing.assert_array_equal(h1[3:, :4], 0)
        np.testing.assert_array_equal(h2[0, 3:], 0)

    def test_scalar_case(self):
        cfg = SystemConfig(nt=1, l=1, beta1=1.0, alpha_f1=0.1, theta_aoa1=0.0, theta_aod1=0.0)
        h1, _ = build_cascade_channels(cfg, DP)
        s, c = math.sqrt(0.9), math.sqrt(0.1)
        np.testing.assert_allclose(h1, [[s, c], [c, s]], atol=1e-15)

    @given(nt=st.integers(1, 4), l=st.integers(1, 6), a1=angles, a2=angles, a3=angles, a4=angles,
           f1=st.floats(0.01, 0.99), f2=st.floats(0.01, 0.99))
    @settings(max_examples=40)
    def test_ranks(self, nt, l, a1, a2, a3, a4, f1, f2):
        cfg = SystemConfig(nt=nt, l=l, theta_aoa1=a1, theta_aod1=a2, theta_aod2=a3, theta_aoa2=a4,
                           alpha_f1=f1, alpha_f2=f2)
        h1, h2 = build_cascade_channels(cfg, SP)
        assert h1.shape == (2 * l, 2 * nt) and h2.shape == (2, 2 * l)
        assert np.linalg.matrix_rank(h1) == 1
        assert np.linalg.matrix_rank(h2) == 1
        h1, h2 = build_cascade_channels(cfg, DP)
        assert h1.shape == (2 * l, 2 * nt) and h2.shape == (2, 2 * l)
        if abs(f1 - 0.5) > 0.01:
            assert np.linalg.matrix_rank(h1) == 2

    def test_deterministic(self, reference):
        a = build_cascade_channels(reference, DP)
        b = build_cascade_channels(reference, DP)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    def test_matches_blockwise_construction(self):
        from oracles import reflected_channel_dp
        cfg = SystemConfig(nt=2, l=3, psi1=((0.1, 0.7), (1.3, -0.4)), psi2=((2.0, 0.3), (-1.0, 0.5)))
        ph = np.random.default_rng(6).uniform(0, 2 * math.pi, 6)
        h1, h2 = build_cascade_channels(cfg, DP)
        phi = build_phase_matrix(PhaseSetting.dual(ph[:3], ph[3:]))
        np.testing.assert_allclose(h2 @ phi @ h1, reflected_channel_dp(cfg, ph[:3], ph[3:]), atol=1e-14)

    def test_empty_without_ris(self):
        h1, h2 = build_cascade_channels(SystemConfig(l=0), DP)
        assert h1.shape == (0, 8) and h2.shape == (2, 0)


class TestEffectiveChannel:
    def test_dead_ris_path(self, reference):
        cfg = reference.replace(beta1=0.0)
        h0 = sample_direct_channel(cfg, DP, np.random.default_rng(7))
        h1, h2 = build_cascade_channels(cfg, DP)
        h = effective_channel(ChannelRealization(h0, h1, h2), np.eye(2 * cfg.l))
        np.testing.assert_array_equal(h, h0)

    def test_no_ris(self):
        cfg = SystemConfig(l=0)
        h0 = sample_direct_channel(cfg, SP, np.random.default_rng(8))
        h1, h2 = build_cascade_channels(cfg, SP)
        np.testing.assert_array_equal(effective_channel(ChannelRealization(h0, h1, h2), np.eye(0)), h0)

    def test_hand_multiplied_single_element(self):
        # Nt = L = 1, all angles and offsets zero: H = H2 H1 with 2x2 blocks
        cfg = SystemConfig(nt=1, l=1, beta1=0.5, beta2=0.25, alpha_f1=0.1, alpha_f2=0.2,
                           theta_aoa1=0.0, theta_aod1=0.0, theta_aod2=0.0, theta_aoa2=0.0)
        h1, h2 = build_cascade_channels(cfg, DP)
        real = ChannelRealization(np.zeros((2, 2)), h1, h2)
        h = effective_channel(real, np.eye(2))
        g = math.sqrt(0.5 * 0.25)
        c1, x1 = math.sqrt(0.9), math.sqrt(0.1)
        c2, x2 = math.sqrt(0.8), math.sqrt(0.2)
        expected = g * np.array([[c2 * c1 + x2 * x1, c2 * x1 + x2 * c1],
                                 [x2 * c1 + c2 * x1, x2 * x1 + c2 * c1]])
        np.testing.assert_allclose(h, expected, atol=1e-15)

    def test_dimension_mismatch(self, reference):
        h1, h2 = build_cascade_channels(reference, DP)
        real = ChannelRealization(np.zeros((2, 8)), h1, h2)
        with pytest.raises(ValueError):
            effective_channel(real, np.eye(3))
        with pytest.raises(ValueError):
            ChannelRealization(np.zeros((2, 6)), h1, h2)


class TestXPD:
    @pytest.mark.parametrize("alpha", [0.5, 0.14])
    def test_converges(self, alpha):
        cfg = SystemConfig(alpha=alpha)
        h = sample_direct_channel(cfg, DP, np.random.default_rng(9), size=100_000)
        co, cross = _block_variances(h, cfg.nt)
        est = empirical_xpd(h)
        # delta-method standard error of a ratio of means
        se = est * math.sqrt((co.std() / co.mean()) ** 2 / co.size + (cross.std() / cross.mean()) ** 2 / cross.size)
        assert abs(est - (1 - alpha) / alpha) <= 3 * se

    def test_all_ones(self):
        assert empirical_xpd([np.ones((2, 8))]) == 1.0

    def test_no_leakage_is_infinite(self):
        h = sample_direct_channel(SystemConfig(alpha=0.0), DP, np.random.default_rng(10), size=5)
        assert empirical_xpd(h) == math.inf


class TestConfigValidation:
    @pytest.mark.parametrize("key, value", [
        ("alpha", 1.5), ("beta0", -0.1), ("alpha_f2", 2.0), ("nt", 0), ("l", -1),
        ("theta_aoa1", 2.0), ("spacing_ratio", 0.0), ("power_db", math.inf),
    ])
    def test_range_errors_name_the_key(self, key, value):
        with pytest.raises(ConfigError) as err:
            SystemConfig(**{key: value})
        assert err.value.key == key

    def test_linear_power(self):
        assert SystemConfig(power_db=10).p_linear == pytest.approx(10.0)
