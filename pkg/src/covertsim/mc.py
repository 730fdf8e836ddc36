"""Monte-Carlo oracles: empirical detection error probability for the
warden's energy detector and empirical connection probability / throughput
for the covert link. These are deliberately independent of the closed forms
they validate: detector statistics are built from raw exponential gain draws
and the connection simulation sums the k smallest of M drawn gains by
selection.

Common random numbers: threshold sweeps and rate sweeps reuse one set of
draws across the grid, so empirical curves are smooth in the grid variable
and argmin/argmax locations are stable.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _backend
from .errors import ConfigError, DomainError
from .model import SystemConfig, order_stat_moments_cached, substream_rng, \
    pretty_seed_tag

MIN_TRIALS = 1_000

# finite-observation mode: below this codeword length the chi-square factor
# is built from raw normal draws, above it from gamma sampling (runtime)
_CHI2_DIRECT_LIMIT = 1_000
_NORMAL_CHUNK = 4096


class GammaGrid(NamedTuple):
    """Detection-threshold grid specification."""

    min: float
    max: float
    points: int


@dataclass(frozen=True)
class SimulationParams:
    """Monte-Carlo controls: trial count, optional threshold grid, and the
    optional finite codeword length (None = asymptotic statistics)."""

    trials: int = 1_000_000
    gamma_grid: GammaGrid | None = None
    finite_N: int | None = None

    def __post_init__(self):
        if self.trials < MIN_TRIALS:
            raise ConfigError(f"trials must be >= {MIN_TRIALS}, got {self.trials}")
        if self.gamma_grid is not None:
            g = GammaGrid(*self.gamma_grid)
            object.__setattr__(self, "gamma_grid", g)
            if g.points < 2:
                raise ConfigError("gamma_grid needs at least 2 points")
            if not g.max > g.min:
                raise ConfigError("gamma_grid needs max > min")
        if self.finite_N is not None and self.finite_N < 1:
            raise ConfigError(f"finite_N must be >= 1, got {self.finite_N}")


@dataclass(frozen=True)
class McEstimate:
    """A Monte-Carlo point estimate with its binomial standard error."""

    estimate: float
    std_error: float
    trials: int
    seed: int
    substream_base: int


def _bernoulli_estimate(successes: int, trials: int, seed: int,
                        substream: int) -> McEstimate:
    p = successes / trials
    se = math.sqrt(max(p * (1.0 - p), 0.0) / trials)
    return McEstimate(estimate=p, std_error=se, trials=trials, seed=seed,
                      substream_base=substream)


def default_gamma_grid(K: int, config: SystemConfig,
                       points: int = 200) -> GammaGrid:
    """Grid bracketing the DEP dip: [sigma_w2, sigma_w2 + 3 K P_max]."""
    return GammaGrid(config.sigma_w2, config.sigma_w2 + 3 * K * config.P_max,
                     points)


def _chi2_over_dof(rng, n_samples: int, N: int) -> np.ndarray:
    """Samples of chi-square with 2N degrees of freedom divided by 2N."""
    if N <= _CHI2_DIRECT_LIMIT:
        out = np.empty(n_samples)
        for lo in range(0, n_samples, _NORMAL_CHUNK):
            hi = min(lo + _NORMAL_CHUNK, n_samples)
            z = rng.standard_normal((hi - lo, 2 * N))
            out[lo:hi] = (z * z).sum(axis=1) / (2.0 * N)
        return out
    return rng.gamma(shape=N, scale=1.0 / N, size=n_samples)


def _detector_samples(K: int, P_a: float, config: SystemConfig,
                      params: SimulationParams, rng):
    """Statistic samples under both hypotheses; one row of draws per trial
    (K interferer gains then the covert-link gain), then the finite-length
    factors when requested."""
    n = params.trials
    t0, t1 = _backend.detector_stat_samples(
        rng, n, K,
        jam_scale=config.P_max * config.lambda_w,
        alice_scale=P_a * config.lambda_w,
        noise=config.sigma_w2)
    if params.finite_N is not None:
        t0 *= _chi2_over_dof(rng, n, params.finite_N)
        t1 *= _chi2_over_dof(rng, n, params.finite_N)
    return t0, t1


def simulate_dep(gamma: float, K: int, P_a: float, config: SystemConfig,
                 params: SimulationParams, seed: int,
                 substream: int = 0) -> McEstimate:
    """Empirical DEP at threshold gamma: false-alarm rate of the
    interference-only statistic plus miss rate of the signal-bearing one."""
    if K < 0:
        raise DomainError(f"K must be nonnegative, got {K}")
    if P_a < 0:
        raise DomainError(f"P_a must be nonnegative, got {P_a}")
    rng = substream_rng(seed, substream)
    t0, t1 = _detector_samples(K, P_a, config, params, rng)
    hits = int((t0 > gamma).sum()) + int((t1 <= gamma).sum())
    return _bernoulli_estimate(hits, params.trials, seed, substream)


def simulate_dep_curve(K: int, P_a: float, config: SystemConfig,
                       params: SimulationParams, seed: int,
                       substream: int = 0):
    """Empirical DEP over the threshold grid with common random numbers:
    one set of statistic draws evaluated at every threshold. Returns
    (grid, list of McEstimate)."""
    if params.gamma_grid is None:
        raise ConfigError("simulate_dep_curve needs params.gamma_grid")
    g = params.gamma_grid
    grid = np.linspace(g.min, g.max, g.points)
    rng = substream_rng(seed, substream)
    t0, t1 = _detector_samples(K, P_a, config, params, rng)
    t0.sort()
    t1.sort()
    n = params.trials
    fa = n - np.searchsorted(t0, grid, side="right")
    md = np.searchsorted(t1, grid, side="right")
    ests = [_bernoulli_estimate(int(a + b), n, seed, substream)
            for a, b in zip(fa, md)]
    return grid, ests


def simulate_min_dep(K: int, P_a: float, config: SystemConfig,
                     params: SimulationParams, seed: int,
                     substream: int = 0) -> tuple[float, float]:
    """Empirical minimum of the DEP curve: (argmin threshold, min DEP).
    Common random numbers keep the curve smooth, so the argmin is a
    meaningful location estimate; ties resolve to the smallest threshold."""
    grid, ests = simulate_dep_curve(K, P_a, config, params, seed, substream)
    vals = np.array([e.estimate for e in ests])
    i = int(np.argmin(vals))
    return float(grid[i]), float(vals[i])


def _connection_thresholds(R, P_a: float, config: SystemConfig):
    """Map rates to thresholds on the interference sum: the link sustains R
    iff sum of active gains <= (P_a h^2 / r - sigma_b2) / P_max."""
    r = np.expm1(np.multiply(R, math.log(2.0)))
    with np.errstate(divide="ignore"):
        t = (P_a * config.h_ab2 / r - config.sigma_b2) / config.P_max
    return np.where(r == 0.0, np.inf, t)


def simulate_connection(R: float, P_a: float, k_min: int,
                        config: SystemConfig, params: SimulationParams,
                        seed: int, substream: int = 0) -> McEstimate:
    """Empirical connection probability: per trial draw all M user->Bob
    gains, let the k_min smallest interfere at full power, and test whether
    the covert link's SINR supports rate R."""
    if not 1 <= k_min <= config.M:
        raise DomainError(f"k_min must lie in [1, M], got {k_min}")
    rng = substream_rng(seed, substream)
    s = config.lambda_b * _backend.sum_k_smallest_samples(
        rng, params.trials, config.M, k_min)
    thr = float(_connection_thresholds(R, P_a, config))
    hits = params.trials if math.isinf(thr) else int((s <= thr).sum())
    return _bernoulli_estimate(hits, params.trials, seed, substream)


def simulate_throughput_curve(P_a: float, k_min: int, config: SystemConfig,
                              R_grid, params: SimulationParams, seed: int,
                              substream: int = 0):
    """Empirical throughput R * Pc_hat(R) over a rate grid with common
    random numbers (one gain-sum sample set reused for every rate).
    Returns a list of (R, McEstimate of the throughput)."""
    if not 1 <= k_min <= config.M:
        raise DomainError(f"k_min must lie in [1, M], got {k_min}")
    rng = substream_rng(seed, substream)
    s = np.sort(config.lambda_b * _backend.sum_k_smallest_samples(
        rng, params.trials, config.M, k_min))
    n = params.trials
    out = []
    for R in R_grid:
        thr = float(_connection_thresholds(R, P_a, config))
        hits = n if math.isinf(thr) else int(np.searchsorted(s, thr, side="right"))
        p = hits / n
        se = math.sqrt(max(p * (1.0 - p), 0.0) / n)
        out.append((float(R), McEstimate(estimate=float(R) * p,
                                         std_error=float(R) * se,
                                         trials=n, seed=seed,
                                         substream_base=substream)))
    return out


def mc_tag(seed: int, substream: int) -> str:
    return pretty_seed_tag(seed, substream)
