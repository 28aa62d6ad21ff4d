"""Scalar probability helpers and the seeded random source.

All Monte Carlo code in the package draws through :class:`RandomSource`,
which wraps NumPy's PCG64 bit generator. Streams for parallel trials are
derived from ``(seed, trial_index)`` through :class:`numpy.random.SeedSequence`
so that results never depend on scheduling order.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

SQRT2 = math.sqrt(2.0)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class NumericalError(RuntimeError):
    """Raised on non-convergence or degenerate numerical input."""


def q_function(x):
    """Standard normal tail probability Q(x) = 1 - Phi(x).

    Evaluated through ``erfc`` so the upper tail keeps full relative
    precision. Accepts scalars or arrays.
    """
    out = 0.5 * special.erfc(np.asarray(x, dtype=float) / SQRT2)
    return float(out) if np.ndim(out) == 0 else out


def q_inverse(p):
    """Inverse of :func:`q_function` on the open interval (0, 1).

    Starts from the inverse normal CDF and polishes with guarded Newton
    steps on ``Q(x) - p``; the bracket is kept so a bad step falls back to
    bisection.
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any(~(p_arr > 0.0)) or np.any(~(p_arr < 1.0)):
        raise ValueError(f"q_inverse requires 0 < p < 1, got {p!r}")
    out = np.vectorize(_q_inverse_scalar, otypes=[float])(p_arr)
    return float(out) if out.ndim == 0 else out


def _q_inverse_scalar(p: float) -> float:
    x = -float(special.ndtri(p))
    lo, hi = x - 1e-3 - 1e-6 * abs(x), x + 1e-3 + 1e-6 * abs(x)
    # widen until the root is bracketed (Q is decreasing)
    while q_function(lo) < p:
        lo -= 2.0 * (hi - lo)
    while q_function(hi) > p:
        hi += 2.0 * (hi - lo)
    for _ in range(50):
        f = q_function(x) - p
        if f == 0.0:
            break
        if f > 0.0:
            lo = x
        else:
            hi = x
        step = f / (INV_SQRT_2PI * math.exp(-0.5 * x * x))
        nxt = x + step
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= 1e-15 * max(1.0, abs(x)):
            x = nxt
            break
        x = nxt
    return x


def gaussian_pdf(x, mu, var):
    """Normal density with mean ``mu`` and variance ``var``."""
    var_arr = np.asarray(var, dtype=float)
    if np.any(~(var_arr > 0.0)):
        raise ValueError("variance must be positive")
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * (x - mu) ** 2 / var_arr) / np.sqrt(2.0 * math.pi * var_arr)
    return float(out) if np.ndim(out) == 0 else out


def binomial_stderr(p: float, n: int) -> float:
    """Standard error of a proportion estimated from ``n`` Bernoulli trials."""
    if n <= 0 or not math.isfinite(p):
        return float("nan")
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


class RandomSource:
    """Seeded source of uniform and standard-normal draws.

    The generator is PCG64 seeded through ``SeedSequence``; equal seeds
    (and equal ``spawn`` keys) give bitwise-identical sequences.
    """

    def __init__(self, seed: int | tuple[int, ...] = 0):
        key = tuple(seed) if isinstance(seed, (tuple, list)) else (int(seed),)
        if any(k < 0 or k >= 2**64 for k in key):
            raise ValueError("seed components must be unsigned 64-bit integers")
        self.key = key
        self._gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(list(key))))

    def spawn(self, index: int) -> "RandomSource":
        """Independent child stream for trial ``index``."""
        return RandomSource(self.key + (int(index),))

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self._gen.uniform(low, high, size)

    def normal(self, size=None):
        return self._gen.standard_normal(size)

    def integers(self, high: int, size=None):
        return self._gen.integers(0, high, size)

    def choice(self, n: int, p, size=None):
        """Indices in ``range(n)`` drawn with probabilities ``p``."""
        return self._gen.choice(n, size=size, p=p)

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.key!r})"
