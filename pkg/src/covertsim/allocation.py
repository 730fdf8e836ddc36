"""Interference power allocation: the all-Gaussian DEP route, its inversion
into a floor on total squared interference power, the relaxed linear program
for the power profile, and the deployed on-off rule.

The linear program (minimize received interference at Bob subject to a floor
on total interference power) is solved exactly by a greedy fill in ascending
gain order; brute-force grid oracles for small instances live here too so the
on-off structure can be verified independently.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleCover, NoSolution
from .model import MAX_EPSILON
from .special import qfunc, qfunc_inv

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PowerProfile:
    """Per-user interference powers with their summary statistics."""

    powers: np.ndarray
    omega: float    # sum of squared powers
    omega1: float   # sum of powers

    @classmethod
    def from_powers(cls, powers) -> "PowerProfile":
        p = np.asarray(powers, dtype=float)
        p.setflags(write=False)
        return cls(powers=p, omega=float(p @ p), omega1=float(p.sum()))


def dep_gaussian(alpha: float, Omega: float, P_a: float) -> float:
    """DEP at false-alarm level alpha when both hypotheses are modelled as
    Gaussian: alpha + Q((P_a - sqrt(Omega) Qinv(alpha)) / sqrt(Omega + P_a^2)).

    At Omega = 0 the threshold term is taken as its limit 0.
    """
    if not 0 <= alpha <= 1:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    if Omega < 0:
        raise DomainError(f"Omega must be nonnegative, got {Omega!r}")
    term = 0.0 if Omega == 0 else math.sqrt(Omega) * qfunc_inv(alpha)
    return alpha + qfunc((P_a - term) / math.sqrt(Omega + P_a * P_a))


def _dep_gaussian_vec(alpha: np.ndarray, Omega: float, P_a: float) -> np.ndarray:
    term = 0.0 if Omega == 0 else math.sqrt(Omega) * qfunc_inv(alpha)
    return alpha + qfunc((P_a - term) / math.sqrt(Omega + P_a * P_a))


def min_dep_gaussian(Omega: float, P_a: float,
                     grid_points: int = 10_000) -> tuple[float, float]:
    """Minimize the all-Gaussian DEP over the false-alarm level.

    Golden-section search on [1e-9, 1 - 1e-9] (empirically unimodal),
    guarded by a dense-grid scan; returns (zeta_min, alpha_star).
    """
    lo, hi = 1e-9, 1.0 - 1e-9
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = dep_gaussian(c, Omega, P_a)
    fd = dep_gaussian(d, Omega, P_a)
    while abs(b - a) > 1e-9:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = dep_gaussian(c, Omega, P_a)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = dep_gaussian(d, Omega, P_a)
    alpha_g = 0.5 * (a + b)
    zeta_g = dep_gaussian(alpha_g, Omega, P_a)

    grid = np.linspace(lo, hi, grid_points)
    vals = _dep_gaussian_vec(grid, Omega, P_a)
    i = int(np.argmin(vals))
    if vals[i] < zeta_g:
        return float(vals[i]), float(grid[i])
    return zeta_g, alpha_g


def omega_floor(P_a: float, epsilon: float) -> float:
    """Smallest total squared interference power Omega whose minimum
    all-Gaussian DEP reaches 1 - epsilon; bisection to relative 1e-6
    (monotonicity of the minimum DEP in Omega makes the root unique)."""
    if not 0 < epsilon < MAX_EPSILON:
        raise DomainError(
            f"epsilon must lie in (0, {MAX_EPSILON}), got {epsilon!r}")
    target = 1.0 - epsilon
    if min_dep_gaussian(0.0, P_a)[0] >= target:
        raise NoSolution("target DEP already met with zero interference")
    hi = max(P_a * P_a, 1.0)
    for _ in range(200):
        if min_dep_gaussian(hi, P_a)[0] >= target:
            break
        hi *= 2.0
    else:
        raise NoSolution(f"DEP target {target} unreachable")
    lo = 0.0
    while hi - lo > 1e-6 * hi:
        mid = 0.5 * (lo + hi)
        if min_dep_gaussian(mid, P_a)[0] >= target:
            hi = mid
        else:
            lo = mid
    return hi


def lp_optimal_profile(gains_mb, delta_tilde: float,
                       P_max: float) -> PowerProfile:
    """Exact optimum of: minimize sum P_m g_m subject to sum P_m >= budget,
    0 <= P_m <= P_max. Greedy fill in ascending gain order; the marginal
    user gets the fractional remainder."""
    gains = np.asarray(gains_mb, dtype=float)
    m = gains.size
    if delta_tilde > m * P_max + 1e-12:
        raise InfeasibleCover(
            f"budget {delta_tilde} exceeds M * P_max = {m * P_max}")
    powers = np.zeros(m)
    remaining = delta_tilde
    for idx in np.argsort(gains, kind="stable"):
        if remaining <= 0:
            break
        take = min(P_max, remaining)
        powers[idx] = take
        remaining -= take
    return PowerProfile.from_powers(powers)


def onoff_profile(gains_mb, tau: float, P_max: float) -> PowerProfile:
    """Deployed rule: full power iff the user's gain is at or below tau.
    (The fractional marginal assignment of the LP needs knowledge of other
    users' gains, which individual users do not have.)"""
    gains = np.asarray(gains_mb, dtype=float)
    return PowerProfile.from_powers(np.where(gains <= tau, P_max, 0.0))


def lp_bruteforce_grid(gains_mb, delta_tilde: float, P_max: float,
                       step: float = 1e-2) -> PowerProfile:
    """Brute-force oracle: exact optimum over per-user powers restricted to
    the grid {0, step, 2 step, ..., P_max} (dynamic program over the budget,
    quantized upward so feasibility is preserved). Small instances only."""
    gains = np.asarray(gains_mb, dtype=float)
    m = gains.size
    levels = np.round(np.arange(0.0, P_max + step / 2, step), 12)
    budget_units = max(int(math.ceil(delta_tilde / step - 1e-9)), 0)
    if budget_units > m * (levels.size - 1):
        raise InfeasibleCover("quantized budget exceeds quantized capacity")

    inf = math.inf
    # cost[b] = min cost with accumulated power of b grid units (capped)
    cost = np.full(budget_units + 1, inf)
    cost[0] = 0.0
    choice = np.zeros((m, budget_units + 1), dtype=np.int64)
    for u in range(m):
        new = np.full(budget_units + 1, inf)
        pick = np.zeros(budget_units + 1, dtype=np.int64)
        for li, p in enumerate(levels):
            add = p * gains[u]
            shifted = np.empty(budget_units + 1)
            if li == 0:
                shifted[:] = cost
            else:
                idx = np.maximum(np.arange(budget_units + 1) - li, 0)
                shifted = cost[idx]
            cand = shifted + add
            better = cand < new
            new[better] = cand[better]
            pick[better] = li
        cost = new
        choice[u] = pick
    powers = np.zeros(m)
    b = budget_units
    for u in range(m - 1, -1, -1):
        li = choice[u, b]
        powers[u] = levels[li]
        b = max(b - li, 0)
    return PowerProfile.from_powers(powers)


def is_sorted_prefix_profile(gains_mb, powers, P_max: float,
                             tol: float = 1e-9) -> bool:
    """True when, in ascending gain order, the profile is P_max on a prefix,
    at most one intermediate value, then zeros."""
    gains = np.asarray(gains_mb, dtype=float)
    p = np.asarray(powers, dtype=float)[np.argsort(gains, kind="stable")]
    fractional = 0
    seen_gap = False
    for v in p:
        if v >= P_max - tol:
            if seen_gap:
                return False
        elif v <= tol:
            seen_gap = True
        else:
            fractional += 1
            if fractional > 1 or seen_gap:
                return False
            seen_gap = True
    return True
