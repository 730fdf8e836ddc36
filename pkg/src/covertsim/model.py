"""Scenario configuration, seeded channel generation, and the order-statistics
machinery shared by the analytic and Monte-Carlo layers.

Channel model: quasi-static Rayleigh fading, so every power gain |h|^2 is an
independent exponential variate with mean equal to the configured channel
variance. Gains are sampled directly as exponentials; nothing downstream ever
needs the complex amplitudes.

RNG contract: one master 64-bit seed; every stochastic operation takes a
substream index. Substreams are derived as
``SeedSequence(entropy=seed, spawn_key=(substream,))`` feeding PCG64, which
gives reproducible, statistically independent streams.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import ConfigError, DomainError, InfeasibleCover

MAX_EPSILON = 0.25


@dataclass(frozen=True)
class SystemConfig:
    """Global scenario parameters.

    M          -- number of non-covert users
    P_max      -- maximum per-user transmit power (linear units)
    sigma_b2   -- receiver (Bob) noise variance
    sigma_w2   -- warden (Willie) noise variance
    lambda_b   -- variance of user->Bob channel gains
    lambda_w   -- variance of user->Willie channel gains
    epsilon    -- covertness slack, in (0, 0.25)
    h_ab2      -- covert-link power gain used for design (known to Alice)
    """

    M: int
    P_max: float = 1.0
    sigma_b2: float = 1.0
    sigma_w2: float = 1.0
    lambda_b: float = 1.0
    lambda_w: float = 1.0
    epsilon: float = 0.05
    h_ab2: float = 1.0

    def __post_init__(self):
        if not isinstance(self.M, (int, np.integer)) or self.M < 1:
            raise ConfigError(f"M must be a positive integer, got {self.M!r}")
        for name in ("P_max", "sigma_b2", "sigma_w2", "lambda_b", "lambda_w"):
            v = getattr(self, name)
            if not (v > 0):
                raise ConfigError(f"{name} must be strictly positive, got {v!r}")
        if not 0 < self.epsilon < MAX_EPSILON:
            raise ConfigError(
                f"epsilon must lie in (0, {MAX_EPSILON}), got {self.epsilon!r}")
        if self.h_ab2 < 0:
            raise ConfigError(f"h_ab2 must be nonnegative, got {self.h_ab2!r}")


@dataclass(frozen=True)
class ChannelDraw:
    """One quasi-static realization of the power gains seen by Bob and Willie."""

    gains_mb: np.ndarray   # user->Bob gains on the covert band, length M
    gains_mw: np.ndarray   # user->Willie gains, length M
    gain_aw: float         # Alice->Willie gain
    seed_tag: str = ""     # RNG substream identifier for provenance


@dataclass(frozen=True)
class OrderMoments:
    """Mean and variance of the sum of the K smallest of M unit exponentials,
    plus the weights of its representation as an independent weighted sum."""

    mu: float
    xi2: float
    deltas: np.ndarray = field(repr=False)


def substream_rng(seed: int, substream: int = 0) -> np.random.Generator:
    """PCG64 generator for (seed, substream); the documented mixing function
    is numpy's SeedSequence with the substream index as spawn key."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(substream,))
    return np.random.Generator(np.random.PCG64(ss))


def sample_channel_draw(config: SystemConfig, rng: np.random.Generator,
                        seed_tag: str = "") -> ChannelDraw:
    """Draw one channel realization.

    Draw order (fixed for reproducibility): M user->Bob gains, M
    user->Willie gains, then the Alice->Willie gain.
    """
    m = config.M
    gains_mb = config.lambda_b * _backend._std_exp(rng, m)
    gains_mw = config.lambda_w * _backend._std_exp(rng, m)
    gain_aw = config.lambda_w * float(_backend._std_exp(rng, ()))
    gains_mb.setflags(write=False)
    gains_mw.setflags(write=False)
    return ChannelDraw(gains_mb, gains_mw, gain_aw, seed_tag)


def order_stat_moments(M: int, K: int) -> OrderMoments:
    """Moments of the sum of the K smallest of M unit-exponential variates.

    The sum equals, in distribution, sum_j Delta_j * E_j with independent
    standard exponentials E_j and Delta_j = (K+1-j)/(M+1-j), hence
    mu = sum Delta_j and xi2 = sum Delta_j^2.
    """
    if K < 0:
        raise DomainError(f"K must be nonnegative, got {K}")
    if M < 1:
        raise DomainError(f"M must be positive, got {M}")
    if K > M:
        raise InfeasibleCover(f"K={K} exceeds the number of users M={M}")
    j = np.arange(K, dtype=float)
    deltas = (K - j) / (M - j)
    deltas.setflags(write=False)
    return OrderMoments(mu=float(deltas.sum()), xi2=float(deltas @ deltas),
                        deltas=deltas)


_moments_cache: dict = {}


def order_stat_moments_cached(M: int, K: int) -> OrderMoments:
    """Memoized order_stat_moments; the optimizer sweeps hit few distinct K."""
    key = (M, K)
    got = _moments_cache.get(key)
    if got is None:
        got = _moments_cache[key] = order_stat_moments(M, K)
    return got


def sample_sum_k_smallest(M: int, K: int, rng: np.random.Generator,
                          size: int | None = None, backend: str | None = None):
    """Sample the sum of the K smallest of M unit exponentials via the
    weighted-independent-exponentials representation (K draws, no sorting).

    Returns a scalar when size is None, else a length-size array.
    """
    moments = order_stat_moments(M, K)   # validates K <= M
    if K == 0:
        return 0.0 if size is None else np.zeros(size)
    n = 1 if size is None else int(size)
    out = _backend.weighted_exp_sum_samples(rng, moments.deltas, n, backend)
    return float(out[0]) if size is None else out


def sum_k_smallest_brute(M: int, K: int, rng: np.random.Generator,
                         size: int) -> np.ndarray:
    """Oracle sampler: draw M exponentials and sum the K smallest by selection.
    Independent of the weighted-sum route; used to cross-validate it."""
    if K == 0:
        return np.zeros(size)
    return _backend.sum_k_smallest_samples(rng, size, M, K, backend="python")


def active_user_set(gains_mb: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k users with the smallest gains; ties broken by
    ascending user index (stable sort)."""
    order = np.argsort(gains_mb, kind="stable")
    return order[:k]


def pretty_seed_tag(seed: int, substream: int) -> str:
    return f"seed={seed}/sub={substream}"
