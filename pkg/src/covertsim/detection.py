"""Warden-side closed forms: detection error probability of the energy
detector, its minimizing threshold, the minimum DEP, the minimum number of
cooperative interferers meeting a covertness target, and the activation
threshold the receiver broadcasts.

Conventions: the interference sum at the warden is treated as Gaussian
(central limit step); the covert signal term stays exactly exponential.
All closed forms below take powers already scaled by the warden-side channel
variance (the defaults in SystemConfig make that variance 1).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx

from .errors import DomainError, InfeasibleCover
from .model import MAX_EPSILON
from .special import log_qfunc

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DetectorPoint:
    """One evaluated operating point of the warden's detector."""

    gamma: float   # detection threshold
    K: int         # number of active cooperative interferers
    P_a: float     # covert transmit power
    zeta: float    # detection error probability (false alarm + missed detection)


def c_epsilon(epsilon: float) -> float:
    """Covertness coefficient (1/eps^2 - 8 + 16 eps^2) / (2 pi).

    Strictly positive and strictly decreasing on the admissible range
    (0, 0.25); the minimum cooperator count is proportional to it.
    """
    if not 0 < epsilon < MAX_EPSILON:
        raise DomainError(
            f"epsilon must lie in (0, {MAX_EPSILON}), got {epsilon!r}")
    e2 = epsilon * epsilon
    return (1.0 / e2 - 8.0 + 16.0 * e2) / _TWO_PI


def dep_analytic(gamma: float, K: int, P_a: float, P_max: float,
                 sigma_w2: float) -> float:
    """Closed-form detection error probability at threshold gamma.

    zeta = 1 - exp(K (P_max^2 + 2 P_a P_max) / (2 P_a^2) - gbar / P_a)
             * Q(sqrt(K) (P_max + P_a) / P_a - gbar / (P_max sqrt(K)))

    with gbar = gamma - sigma_w2. The product is evaluated in log space;
    the exponent alone overflows double precision for small P_a.
    """
    if K < 1 or int(K) != K:
        raise DomainError(f"K must be a positive integer, got {K!r}")
    if not P_a > 0:
        raise DomainError(f"P_a must be strictly positive, got {P_a!r}")
    if not (P_max > 0 and sigma_w2 > 0 and gamma >= 0):
        raise DomainError("gamma must be >= 0 and P_max, sigma_w2 > 0")
    gbar = gamma - sigma_w2
    sk = math.sqrt(K)
    a = K * (P_max * P_max + 2.0 * P_a * P_max) / (2.0 * P_a * P_a) - gbar / P_a
    q = sk * (P_max + P_a) / P_a - gbar / (P_max * sk)
    log_term = a + log_qfunc(q)
    if log_term >= 0.0:       # only reachable through rounding noise
        return 0.0
    return min(-math.expm1(log_term), 1.0)


def optimal_threshold(K: int, P_max: float, sigma_w2: float) -> float:
    """Threshold minimizing the closed-form DEP: K * P_max + sigma_w2."""
    return K * P_max + sigma_w2


def theorem_regime_valid(K: int, P_a: float, P_max: float) -> bool:
    """True inside the validity region K P_max^2 > 2 P_a^2 of the tail bound
    behind min_dep; outside it the value is an uncontrolled approximation."""
    return K * P_max * P_max > 2.0 * P_a * P_a


def min_dep(K: int, P_a: float, P_max: float) -> float:
    """Minimum detection error probability over thresholds.

    1 - 1 / (sqrt(pi) (sqrt(X) + sqrt(X + 4/pi))) with
    X = K P_max^2 / (2 P_a^2). K = 0 returns 0: with no interference and an
    asymptotically long observation the warden separates the hypotheses
    perfectly. Callers can consult theorem_regime_valid to flag results
    outside the bound's validity region.
    """
    if not P_a > 0:
        raise DomainError(f"P_a must be strictly positive, got {P_a!r}")
    if K < 0:
        raise DomainError(f"K must be nonnegative, got {K!r}")
    if K == 0:
        return 0.0
    x = K * P_max * P_max / (2.0 * P_a * P_a)
    return 1.0 - 1.0 / (math.sqrt(math.pi)
                        * (math.sqrt(x) + math.sqrt(x + 4.0 / math.pi)))


def min_dep_exact(K: int, P_a: float, P_max: float) -> float:
    """Minimum DEP without the final tail-bound step: the closed-form DEP
    evaluated exactly at the optimal threshold, 1 - erfcx(sqrt(X)) / 2."""
    if not P_a > 0:
        raise DomainError(f"P_a must be strictly positive, got {P_a!r}")
    if K == 0:
        return 0.0
    x = K * P_max * P_max / (2.0 * P_a * P_a)
    return 1.0 - 0.5 * float(erfcx(math.sqrt(x)))


def k_min_real(P_a: float, P_max: float, epsilon: float) -> float:
    """Un-ceiled minimum cooperator count P_a^2 c_eps / P_max^2 (exactly
    quadratic in P_a); exposed for scaling checks."""
    if P_a == 0:
        return 0.0
    return P_a * P_a * c_epsilon(epsilon) / (P_max * P_max)


def k_min(P_a: float, P_max: float, epsilon: float) -> int:
    """Minimum number of cooperative interferers so the minimum DEP stays
    at or above 1 - epsilon. Zero when the covert user is silent."""
    if P_a < 0:
        raise DomainError(f"P_a must be nonnegative, got {P_a!r}")
    if P_a == 0:
        return 0
    return math.ceil(k_min_real(P_a, P_max, epsilon))


def activation_threshold(gains_mb, k_min: int) -> float:
    """Gain cutoff broadcast by the receiver: the k_min-th smallest user->Bob
    gain, so exactly k_min users (ties broken by index) fall at or below it.

    k_min = 0 returns -inf (nobody activates).
    """
    gains = np.asarray(gains_mb, dtype=float)
    if k_min == 0:
        return -math.inf
    if k_min < 0 or k_min > gains.size:
        raise InfeasibleCover(
            f"k_min={k_min} outside [0, {gains.size}] available users")
    return float(np.partition(gains, k_min - 1)[k_min - 1])
