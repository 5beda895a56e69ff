"""Capacity analysis of RIS-aided dual- vs single-polarized MIMO links."""

from .config import DP, SP, ConfigError, PolarizationMode, SystemConfig, reference_config
from .channel import (ChannelRealization, PhaseSetting, build_cascade_channels,
                      build_phase_matrix, effective_channel, empirical_xpd,
                      sample_direct_channel, sample_realization, steering_vector)
from .capacity import (BoundCoefficients, CapacityEstimate, MomentPair, bound_coefficients,
                       eigen_moments, expected_moments_dp, expected_moments_sp,
                       mc_ergodic_capacity, mc_w_factor, w_max_dp, w_max_sp)
from .phases import CascadeFactors, cascade_factors, optimal_phases, random_phases
from .threshold import (GapCoefficients, ThresholdResult, asymptotic_required_size,
                        gap_coefficients, proposition1_check, required_size,
                        required_size_bruteforce)

__version__ = "0.1.0"
