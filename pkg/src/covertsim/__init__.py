"""covertsim: design and verification toolkit for covert uplink communication
with opportunistically selected cooperative interferers.

Closed-form design quantities (detector threshold, minimum cooperator count,
activation threshold, covert rate, throughput, energy-efficient power) with
independent Monte-Carlo and brute-force cross-checks.
"""

from ._backend import DEFAULT_BACKEND, available_backends
from .allocation import (PowerProfile, dep_gaussian, lp_bruteforce_grid,
                         lp_optimal_profile, min_dep_gaussian, omega_floor,
                         onoff_profile)
from .design import (DerivedCoefficients, DesignSolution, connection_probability,
                     cross_point, derived_coefficients, energy_efficiency,
                     k_star_closed_form, max_covert_rate, max_throughput,
                     numeric_rate_argmax, optimize_pa_energy,
                     optimize_pa_throughput, pa_star_closed_form,
                     throughput_simplified, upsilon)
from .detection import (DetectorPoint, activation_threshold, c_epsilon,
                        dep_analytic, k_min, k_min_real, min_dep, min_dep_exact,
                        optimal_threshold, theorem_regime_valid)
from .errors import (ConfigError, CovertSimError, DomainError, InfeasibleCover,
                     NoSolution)
from .mc import (GammaGrid, McEstimate, SimulationParams, default_gamma_grid,
                 simulate_connection, simulate_dep, simulate_dep_curve,
                 simulate_min_dep, simulate_throughput_curve)
from .model import (ChannelDraw, OrderMoments, SystemConfig,
                    sample_channel_draw, sample_sum_k_smallest, substream_rng,
                    order_stat_moments)

__version__ = "0.1.0"

__all__ = [
    "ChannelDraw", "ConfigError", "CovertSimError", "DEFAULT_BACKEND",
    "DerivedCoefficients", "DesignSolution", "DetectorPoint", "DomainError",
    "GammaGrid", "InfeasibleCover", "McEstimate", "NoSolution", "OrderMoments",
    "PowerProfile", "SimulationParams", "SystemConfig",
    "activation_threshold", "available_backends", "c_epsilon",
    "connection_probability", "cross_point", "dep_analytic", "dep_gaussian",
    "derived_coefficients", "default_gamma_grid", "energy_efficiency",
    "k_min", "k_min_real", "k_star_closed_form", "lp_bruteforce_grid",
    "lp_optimal_profile", "max_covert_rate", "max_throughput",
    "min_dep", "min_dep_exact", "min_dep_gaussian", "numeric_rate_argmax",
    "omega_floor", "onoff_profile", "optimal_threshold", "optimize_pa_energy",
    "optimize_pa_throughput", "order_stat_moments", "pa_star_closed_form",
    "sample_channel_draw", "sample_sum_k_smallest", "simulate_connection",
    "simulate_dep", "simulate_dep_curve", "simulate_min_dep",
    "simulate_throughput_curve", "substream_rng", "theorem_regime_valid",
    "throughput_simplified", "upsilon",
]
