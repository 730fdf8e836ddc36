"""Scenario config, channel sampling, and order-statistics machinery."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covertsim import (ConfigError, InfeasibleCover, SystemConfig,
                       order_stat_moments, sample_channel_draw,
                       sample_sum_k_smallest, substream_rng)
from covertsim.model import sum_k_smallest_brute

# mpmath, exact rational sums for M=500, K=43
MU_500_43 = 1.9473786444190123
XI2_500_43 = 0.11454152067945914


class TestSystemConfig:
    def test_defaults_valid(self):
        cfg = SystemConfig(M=10)
        assert cfg.lambda_b == cfg.lambda_w == 1.0

    @pytest.mark.parametrize("kwargs", [
        {"M": 0}, {"M": -3}, {"M": 2.5},
        {"M": 5, "P_max": 0.0}, {"M": 5, "sigma_b2": -1.0},
        {"M": 5, "sigma_w2": 0.0}, {"M": 5, "lambda_b": 0.0},
        {"M": 5, "epsilon": 0.0}, {"M": 5, "epsilon": 0.25},
        {"M": 5, "epsilon": 0.3}, {"M": 5, "h_ab2": -0.1},
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            SystemConfig(**kwargs)


class TestOrderStatMoments:
    def test_k_equals_m(self):
        m = order_stat_moments(2, 2)
        assert m.mu == pytest.approx(2.0, rel=1e-15)
        assert m.xi2 == pytest.approx(2.0, rel=1e-15)
        np.testing.assert_allclose(m.deltas, [1.0, 1.0])

    def test_k_zero_empty_sum(self):
        m = order_stat_moments(7, 0)
        assert m.mu == 0.0 and m.xi2 == 0.0 and m.deltas.size == 0

    def test_against_exact_sum_and_quadratic_approx(self):
        m = order_stat_moments(500, 43)
        assert m.mu == pytest.approx(MU_500_43, rel=1e-13)
        assert m.xi2 == pytest.approx(XI2_500_43, rel=1e-13)
        # coarse closed-form approximation K(K+1)/(2M) stays within 5%
        assert abs(m.mu - 43 * 44 / 1000) / m.mu < 0.05

    def test_k_above_m_infeasible(self):
        with pytest.raises(InfeasibleCover):
            order_stat_moments(5, 6)

    def test_delta_ordering(self):
        d = order_stat_moments(10, 6).deltas
        assert (np.diff(d) < 0).all() and d[0] <= 1.0 and d[-1] > 0

    @given(st.integers(2, 60), st.integers(1, 59))
    @settings(max_examples=60, deadline=None)
    def test_mu_monotone(self, m, k):
        k = min(k, m - 1)
        mu = order_stat_moments(m, k).mu
        assert order_stat_moments(m, k + 1).mu > mu       # increasing in K
        assert order_stat_moments(m + 1, k).mu < mu       # decreasing in M


class TestChannelDraw:
    def test_shapes_and_tag(self):
        cfg = SystemConfig(M=1)
        draw = sample_channel_draw(cfg, substream_rng(1, 0), seed_tag="s1/0")
        assert draw.gains_mb.shape == (1,) and draw.gains_mw.shape == (1,)
        assert draw.gain_aw >= 0 and draw.seed_tag == "s1/0"

    def test_deterministic_per_seed_and_substream(self):
        cfg = SystemConfig(M=20)
        a = sample_channel_draw(cfg, substream_rng(42, 0))
        b = sample_channel_draw(cfg, substream_rng(42, 0))
        np.testing.assert_array_equal(a.gains_mb, b.gains_mb)
        np.testing.assert_array_equal(a.gains_mw, b.gains_mw)
        assert a.gain_aw == b.gain_aw
        c = sample_channel_draw(cfg, substream_rng(42, 1))
        assert not np.array_equal(a.gains_mb, c.gains_mb)

    def test_exponential_mean(self):
        # 1e6 gains: sample mean of unit-mean exponentials within 0.01
        cfg = SystemConfig(M=1_000_000)
        draw = sample_channel_draw(cfg, substream_rng(3, 0))
        assert abs(draw.gains_mb.mean() - 1.0) < 0.01
        cfg2 = SystemConfig(M=200_000, lambda_w=2.5)
        d2 = sample_channel_draw(cfg2, substream_rng(3, 1))
        assert abs(d2.gains_mw.mean() - 2.5) < 4 * 2.5 / math.sqrt(200_000)


class TestSumKSmallest:
    def test_k_equals_m_is_plain_sum(self):
        # sum of 5 unit exponentials: mean 5, var 5
        s = sample_sum_k_smallest(5, 5, substream_rng(11, 0), size=100_000)
        assert abs(s.mean() - 5.0) < 4 * math.sqrt(5 / 100_000)

    def test_minimum_of_two(self):
        s = sample_sum_k_smallest(2, 1, substream_rng(12, 0), size=200_000)
        assert abs(s.mean() - 0.5) < 4 * 0.5 / math.sqrt(200_000)

    def test_scalar_return(self):
        v = sample_sum_k_smallest(10, 3, substream_rng(13, 0))
        assert isinstance(v, float) and v > 0

    def test_against_sort_based_oracle_large(self):
        # independent oracle: draw all 500 gains and select the 43 smallest
        n = 300_000
        s = sample_sum_k_smallest(500, 43, substream_rng(14, 0), size=n)
        o = sum_k_smallest_brute(500, 43, substream_rng(14, 1), size=n)
        se = math.sqrt(s.var() / n + o.var() / n)
        assert abs(s.mean() - o.mean()) < 4 * se
        assert s.mean() == pytest.approx(MU_500_43, abs=3 * math.sqrt(XI2_500_43 / n))

    @pytest.mark.parametrize("m,k", [(5, 5), (12, 4), (50, 17), (30, 1)])
    def test_representation_equivalence(self, m, k):
        # weighted-sum route vs sort-based route: mean and variance
        # within 4 standard errors at 1e5 trials
        n = 100_000
        a = sample_sum_k_smallest(m, k, substream_rng(15, 0), size=n)
        b = sum_k_smallest_brute(m, k, substream_rng(15, 1), size=n)
        se_mean = math.sqrt(a.var() / n + b.var() / n)
        assert abs(a.mean() - b.mean()) < 4 * se_mean
        # variance of the sample variance ~ (m4 - var^2)/n
        va, vb = a.var(ddof=1), b.var(ddof=1)
        m4 = ((a - a.mean()) ** 4).mean() + ((b - b.mean()) ** 4).mean()
        se_var = math.sqrt((m4 - va ** 2 - vb ** 2) / n)
        assert abs(va - vb) < 4 * se_var

    def test_k_above_m(self):
        with pytest.raises(InfeasibleCover):
            sample_sum_k_smallest(4, 5, substream_rng(16, 0))


def test_substreams_do_not_share_state():
    r0, r1 = substream_rng(99, 0), substream_rng(99, 1)
    a = r0.random(1000)
    b = r1.random(1000)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.1
    assert not np.array_equal(a, b)
