"""Monte-Carlo sampling backends.

Two interchangeable implementations of the hot sampling kernels:

* ``compiled`` -- Cython extension (``covertsim._kernels``), streaming with
  O(1) memory per trial;
* ``python``   -- chunked numpy, used automatically when the extension is
  not built.

Both consume uniforms from the same numpy bit generator in the same
trial-major order and apply the same inverse-CDF transform, so a given
(seed, substream) produces the same variates under either backend; results
agree up to floating-point summation order. Selection happens at import via
the ``COVERTSIM_BACKEND`` environment variable ("compiled" or "python"),
defaulting to compiled when available.
"""

import os

import numpy as np

try:
    from . import _kernels
except ImportError:
    _kernels = None

# trials per numpy block; fixed so the draw stream is independent of memory
_CHUNK = 1 << 16


def _env_default() -> str:
    forced = os.environ.get("COVERTSIM_BACKEND", "").strip().lower()
    if forced == "python":
        return "python"
    if forced == "compiled":
        if _kernels is None:
            raise ImportError(
                "COVERTSIM_BACKEND=compiled but covertsim._kernels is not built")
        return "compiled"
    return "compiled" if _kernels is not None else "python"


DEFAULT_BACKEND = _env_default()


def available_backends() -> tuple:
    return ("python", "compiled") if _kernels is not None else ("python",)


def _resolve(backend):
    b = DEFAULT_BACKEND if backend is None else backend
    if b not in ("python", "compiled"):
        raise ValueError(f"unknown backend {b!r}")
    if b == "compiled" and _kernels is None:
        raise ValueError("compiled backend requested but extension not built")
    return b


def _std_exp(rng, shape):
    # inverse CDF on U[0,1): 1-u in (0,1] keeps the log finite
    return -np.log1p(-rng.random(shape))


def detector_stat_samples(rng, n, k, jam_scale, alice_scale, noise,
                          backend=None):
    """n samples of the energy-detector statistic under both hypotheses.

    Per trial the stream yields k interferer gains then one covert-link
    gain; returns (t_h0, t_h1) with t_h0 = jam_scale * sum(k exps) + noise
    and t_h1 = t_h0 + alice_scale * exp.
    """
    t0 = np.empty(n)
    t1 = np.empty(n)
    if _resolve(backend) == "compiled":
        _kernels.detector_stat_fill(rng.bit_generator, k, jam_scale,
                                    alice_scale, noise, t0, t1)
        return t0, t1
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        e = _std_exp(rng, (hi - lo, k + 1))
        t0[lo:hi] = jam_scale * e[:, :k].sum(axis=1) + noise
        t1[lo:hi] = t0[lo:hi] + alice_scale * e[:, k]
    return t0, t1


def sum_k_smallest_samples(rng, n, m, k, backend=None):
    """n samples of the sum of the k smallest of m standard exponentials,
    drawn by sorting (selection), not by any order-statistics shortcut."""
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    out = np.empty(n)
    if _resolve(backend) == "compiled":
        _kernels.sum_k_smallest_fill(rng.bit_generator, m, k, out)
        return out
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        g = _std_exp(rng, (hi - lo, m))
        if k == m:
            out[lo:hi] = g.sum(axis=1)
        else:
            out[lo:hi] = np.partition(g, k - 1, axis=1)[:, :k].sum(axis=1)
    return out


def weighted_exp_sum_samples(rng, weights, n, backend=None):
    """n samples of sum_j weights[j] * E_j with E_j iid standard exponential."""
    w = np.ascontiguousarray(weights, dtype=float)
    out = np.empty(n)
    if _resolve(backend) == "compiled":
        _kernels.weighted_exp_sum_fill(rng.bit_generator, w, out)
        return out
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        out[lo:hi] = _std_exp(rng, (hi - lo, w.size)) @ w
    return out
