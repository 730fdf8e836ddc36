"""Receiver/covert-user side design: connection probability under the
Gaussian order-statistics approximation, covert-rate and throughput
maximization, the one-dimensional transmit-power search, the
energy-efficiency variant, and the closed-form approximations of the
optimal operating point (including the saturation point of the covert
constraint).
"""

import math
from dataclasses import dataclass, field

from .detection import (c_epsilon, k_min, min_dep, optimal_threshold,
                        theorem_regime_valid)
from .errors import DomainError, InfeasibleCover
from .model import SystemConfig, order_stat_moments_cached
from .special import qfunc

_LN2 = math.log(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

PA_GRID_POINTS = 2001
RATE_GRID_POINTS = 10_000


@dataclass(frozen=True)
class DerivedCoefficients:
    """Intermediates of the rate/throughput closed forms, for K active
    interferers: interference-sum moments (mu, xi), normalized noise+mean
    level theta, normalized covert SNR kappa, log curvature term psi, and
    the covertness coefficient c_eps."""

    mu: float
    xi: float
    theta: float
    kappa: float
    psi: float
    c_eps: float


@dataclass(frozen=True)
class DesignSolution:
    """A solved operating point of the covert link."""

    P_a_star: float
    K_min: int
    tau: float | None          # per-draw activation threshold, when realized
    gamma_star: float          # adversary's best threshold (report)
    zeta_min: float
    R_max: float               # bits per channel use
    eta_max: float             # throughput R * P_c
    E_eff: float               # throughput per unit total power
    method_tags: dict = field(default_factory=dict)


def derived_coefficients(P_a: float, kmin: int,
                         config: SystemConfig) -> DerivedCoefficients:
    """Coefficients for K = kmin active interferers. The interference-sum
    moments are scaled by the receiver-side channel variance so the closed
    forms stay consistent with simulation for lambda_b != 1."""
    if kmin < 1:
        raise DomainError("derived coefficients need at least one interferer")
    moments = order_stat_moments_cached(config.M, kmin)
    mu = config.lambda_b * moments.mu
    xi = config.lambda_b * math.sqrt(moments.xi2)
    theta = (mu * config.P_max + config.sigma_b2) / (config.P_max * xi)
    kappa = P_a * config.h_ab2 / (config.P_max * xi)
    psi = 2.0 * math.log(_SQRT_2PI / (2.0 * theta))
    return DerivedCoefficients(mu=mu, xi=xi, theta=theta, kappa=kappa,
                               psi=psi, c_eps=c_epsilon(config.epsilon))


def connection_probability(R: float, P_a: float, kmin: int,
                           config: SystemConfig) -> float:
    """Probability that the covert link sustains rate R under quasi-static
    fading, with the kmin weakest users interfering at full power.

    kmin = 0 degenerates to a deterministic SNR test against pure noise.
    """
    if R < 0:
        raise DomainError(f"rate must be nonnegative, got {R!r}")
    r = math.expm1(R * _LN2)      # 2^R - 1
    if r == 0.0:
        return 1.0
    if kmin == 0:
        return 1.0 if P_a * config.h_ab2 / config.sigma_b2 >= r else 0.0
    c = derived_coefficients(P_a, kmin, config)
    arg = (c.mu * config.P_max + config.sigma_b2 - P_a * config.h_ab2 / r) \
        / (c.xi * config.P_max)
    return qfunc(arg)


def max_covert_rate(P_a: float, kmin: int, config: SystemConfig) -> float:
    """Throughput-maximizing rate for a given transmit power and cooperator
    count: log2(1 + kappa / (theta + sqrt(-psi))).

    Valid in the strong-covertness regime psi < 0 (theta > sqrt(2 pi)/2);
    outside it a DomainError is raised and numeric_rate_argmax applies.
    """
    c = derived_coefficients(P_a, kmin, config)
    if c.psi >= 0:
        raise DomainError(
            "closed-form rate needs psi < 0 (theta > sqrt(2*pi)/2); "
            f"got theta={c.theta:.6g}")
    r = c.kappa / (c.theta + math.sqrt(-c.psi))
    return math.log2(1.0 + r)


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def numeric_rate_argmax(P_a: float, kmin: int, config: SystemConfig,
                        grid=None) -> tuple[float, float]:
    """Grid argmax of the throughput R * P_c(R) with one golden-section
    refinement pass around the best cell; serves as the oracle for the
    closed-form rate and as the fallback outside its validity region.
    Ties broken toward smaller R."""
    if kmin == 0:
        # deterministic link: throughput is R up to the SNR-supported rate
        snr = P_a * config.h_ab2 / config.sigma_b2
        r_star = math.log2(1.0 + snr)
        return r_star, r_star
    if grid is None:
        n = RATE_GRID_POINTS
        grid = [(i + 1) / n for i in range(n)]
    etas = [R * connection_probability(R, P_a, kmin, config) for R in grid]
    best = max(range(len(grid)), key=lambda i: (etas[i], -grid[i]))
    lo = grid[best - 1] if best > 0 else grid[0] / 2.0
    hi = grid[best + 1] if best + 1 < len(grid) else grid[-1]
    x, fx = _golden_max(
        lambda R: R * connection_probability(R, P_a, kmin, config),
        lo, hi, tol=1e-12)
    if fx > etas[best]:
        return x, fx
    return grid[best], etas[best]


def max_throughput(P_a: float, config: SystemConfig) -> float:
    """Maximum throughput at transmit power P_a with the minimum compliant
    cooperator count: R_max * Q(-sqrt(-psi))."""
    if P_a == 0:
        return 0.0
    kk = k_min(P_a, config.P_max, config.epsilon)
    if kk > config.M:
        raise InfeasibleCover(
            f"covert constraint needs {kk} cooperators, only {config.M} users")
    c = derived_coefficients(P_a, kk, config)
    if c.psi >= 0:
        raise DomainError(
            "closed-form throughput needs psi < 0; use numeric_rate_argmax")
    sq = math.sqrt(-c.psi)
    rate = math.log2(1.0 + c.kappa / (c.theta + sq))
    pc = qfunc(-sq)
    # exact algebraic identity of the construction
    assert abs(connection_probability(rate, P_a, kk, config) - pc) < 1e-9
    return rate * pc


def energy_efficiency(P_a: float, config: SystemConfig) -> float:
    """Throughput per unit total power (interferers at full power plus the
    covert transmitter)."""
    kk = k_min(P_a, config.P_max, config.epsilon)
    return max_throughput(P_a, config) / (kk * config.P_max + P_a)


def _objective_parts(P_a: float, config: SystemConfig):
    """(eta, rate, kmin, tag) at P_a, falling back to the grid argmax when
    the closed form's validity condition fails. None when infeasible."""
    kk = k_min(P_a, config.P_max, config.epsilon)
    if kk > config.M:
        return None
    if kk == 0:
        return 0.0, 0.0, 0, "degenerate"
    try:
        rate = max_covert_rate(P_a, kk, config)
        c = derived_coefficients(P_a, kk, config)
        eta = rate * qfunc(-math.sqrt(-c.psi))
        return eta, rate, kk, "closed-form"
    except DomainError:
        rate, eta = numeric_rate_argmax(P_a, kk, config)
        return eta, rate, kk, "grid-argmax"


def _optimize_pa(config: SystemConfig, objective) -> DesignSolution:
    """Shared search: uniform grid of PA_GRID_POINTS on (0, P_max] plus a
    golden-section refinement around the best cell. The cooperator count is
    a step function of P_a, so the objective is piecewise-smooth with jumps;
    the dense grid keeps the refinement honest. Ties go to smaller P_a."""
    n = PA_GRID_POINTS
    pmax = config.P_max
    best_val, best_pa, best_parts = -math.inf, None, None
    feasible = False
    for i in range(1, n + 1):
        pa = pmax * i / n
        parts = _objective_parts(pa, config)
        if parts is None:
            continue
        feasible = True
        val = objective(pa, parts)
        if val > best_val:
            best_val, best_pa, best_parts = val, pa, parts
    if not feasible:
        raise InfeasibleCover(
            "covert constraint infeasible for every transmit power on the grid")

    lo = max(best_pa - pmax / n, pmax / (2.0 * n))
    hi = min(best_pa + pmax / n, pmax)

    def f(pa):
        parts = _objective_parts(pa, config)
        return -math.inf if parts is None else objective(pa, parts)

    x, fx = _golden_max(f, lo, hi, tol=1e-10 * pmax)
    if fx > best_val:
        best_val, best_pa, best_parts = fx, x, _objective_parts(x, config)

    eta, rate, kk, tag = best_parts
    zeta = min_dep(kk, best_pa, config.P_max)
    tags = {"rate": tag,
            "zeta_min": "tail-bound" if theorem_regime_valid(kk, best_pa, config.P_max)
                        else "tail-bound-approximate-regime"}
    return DesignSolution(
        P_a_star=best_pa,
        K_min=kk,
        tau=None,
        gamma_star=optimal_threshold(kk, config.P_max, config.sigma_w2),
        zeta_min=zeta,
        R_max=rate,
        eta_max=eta,
        E_eff=eta / (kk * config.P_max + best_pa),
        method_tags=tags,
    )


def optimize_pa_throughput(config: SystemConfig) -> DesignSolution:
    """One-dimensional search for the transmit power maximizing throughput."""
    return _optimize_pa(config, lambda pa, parts: parts[0])


def optimize_pa_energy(config: SystemConfig) -> DesignSolution:
    """Same search with throughput-per-total-power as the objective."""
    return _optimize_pa(
        config,
        lambda pa, parts: parts[0] / (parts[2] * config.P_max + pa))


def upsilon(config: SystemConfig) -> float:
    """Scale constant of the closed-form power optimum:
    (sqrt(24 M sigma_b2 / P_max + 1) - 1) / 6."""
    return (math.sqrt(24.0 * config.M * config.sigma_b2 / config.P_max + 1.0)
            - 1.0) / 6.0


def pa_star_closed_form(config: SystemConfig) -> float:
    """Approximate throughput-optimal transmit power
    P_max * sqrt(upsilon / c_eps), capped at P_max."""
    ups = upsilon(config)
    ce = c_epsilon(config.epsilon)
    return min(config.P_max * math.sqrt(ups / ce), config.P_max)


def k_star_closed_form(config: SystemConfig) -> int:
    """Approximate optimal cooperator count: ceil(upsilon) below the power
    cap, ceil(c_eps) once the transmit power saturates."""
    ups = upsilon(config)
    ce = c_epsilon(config.epsilon)
    return math.ceil(ups) if ups <= ce else math.ceil(ce)


def cross_point(config: SystemConfig) -> float:
    """Covert-constraint level 1 - eps at which the approximate optimal
    transmit power saturates at P_max:
    1 - (-rho + sqrt(rho^2 + 16)) / 8 with rho = sqrt(2 pi upsilon)."""
    rho = math.sqrt(2.0 * math.pi * upsilon(config))
    return 1.0 - (-rho + math.sqrt(rho * rho + 16.0)) / 8.0


def throughput_simplified(P_a: float, config: SystemConfig) -> float:
    """Simplified throughput P_a h^2 / (2 ln2 (P_max K(1+K)/(2M) + sigma_b2))
    with K the minimum compliant cooperator count. Valid for K much smaller
    than M; used to sanity-check the closed-form optimizer chain, not as a
    quantitative throughput estimate."""
    kk = k_min(P_a, config.P_max, config.epsilon)
    mu_approx = kk * (1.0 + kk) / (2.0 * config.M)
    return P_a * config.h_ab2 / (
        2.0 * _LN2 * (config.P_max * mu_approx + config.sigma_b2))
