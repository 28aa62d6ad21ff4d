"""Two-step hypothesis-test authentication on path-loss fingerprints.

Step one finds the nearest stored fingerprint; step two compares the
residual ``T* = min_i |z - l_i|`` with a threshold ``epsilon``. ``H1``
(impersonation) is declared when ``T* >= epsilon``; an exact tie goes to
``H1``.

SNR convention: ``SNR = 1 / sigma^2`` with ``sigma`` in dB of path loss,
so ``sigma = 10 ** (-snr_db / 20)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import q_function, q_inverse


def sigma_from_snr_db(snr_db: float) -> float:
    return 10.0 ** (-snr_db / 20.0)


def snr_db_from_sigma(sigma: float) -> float:
    return -20.0 * math.log10(sigma)


@dataclass(frozen=True)
class AuthConfig:
    sigma: float
    epsilon: float
    fingerprints: np.ndarray

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        l = np.asarray(self.fingerprints, dtype=float).reshape(-1)
        if l.size == 0:
            raise ValueError("ground truth is empty")
        object.__setattr__(self, "fingerprints", l)

    @classmethod
    def for_pfa(cls, pfa: float, sigma: float, fingerprints) -> "AuthConfig":
        return cls(sigma, threshold_for_pfa(pfa, sigma), fingerprints)


@dataclass(frozen=True)
class AuthDecision:
    hypothesis: str  # "H0" or "H1"
    index: int  # nearest fingerprint, 0-based
    statistic: float

    @property
    def impersonation(self) -> bool:
        return self.hypothesis == "H1"


class NearestFingerprint:
    """Nearest-neighbour lookup on a 1-D fingerprint vector.

    Ties (equal values or equidistant neighbours) resolve to the lowest
    original index. Built once, queried with arrays of measurements.
    """

    def __init__(self, fingerprints):
        l = np.asarray(fingerprints, dtype=float).reshape(-1)
        if l.size == 0:
            raise ValueError("fingerprint vector is empty")
        order = np.argsort(l, kind="stable")
        self.values = l[order]
        # lowest original index among entries sharing a value
        rep = order.copy()
        for k in range(1, rep.size):
            if self.values[k] == self.values[k - 1]:
                rep[k] = rep[k - 1]
        self._rep = rep

    def query(self, z) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(index, distance)`` arrays for measurements ``z``."""
        z = np.asarray(z, dtype=float)
        v = self.values
        pos = np.searchsorted(v, z, side="left")
        right = np.clip(pos, 0, v.size - 1)
        left = np.clip(pos - 1, 0, v.size - 1)
        dr = np.abs(z - v[right])
        dl = np.abs(z - v[left])
        idx_r = self._rep[right]
        idx_l = self._rep[left]
        take_left = (dl < dr) | ((dl == dr) & (idx_l < idx_r))
        return np.where(take_left, idx_l, idx_r), np.where(take_left, dl, dr)


def decide(z, fingerprints, epsilon: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batch test: ``(is_h1, nearest_index, statistic)`` for each measurement."""
    idx, t = NearestFingerprint(fingerprints).query(z)
    return t >= epsilon, idx, t


def authenticate(z: float, cfg: AuthConfig) -> AuthDecision:
    h1, idx, t = decide(np.array([z]), cfg.fingerprints, cfg.epsilon)
    return AuthDecision("H1" if h1[0] else "H0", int(idx[0]), float(t[0]))


def threshold_for_pfa(pfa: float, sigma: float) -> float:
    """Threshold giving false-alarm probability ``pfa``: sigma Q^-1(pfa/2)."""
    if not 0.0 < pfa < 1.0:
        raise ValueError(f"pfa must lie in (0, 1), got {pfa!r}")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    return sigma * q_inverse(pfa / 2.0)


def analytic_pfa(epsilon: float, sigma: float) -> float:
    """2 Q(epsilon / sigma).

    Only counts the distance to the sender's own fingerprint, so it is exact
    when fingerprints are far apart relative to ``sigma`` and ``epsilon``.
    """
    if not sigma > 0 or not epsilon >= 0:
        raise ValueError("need sigma > 0 and epsilon >= 0")
    return 2.0 * q_function(epsilon / sigma)


def _window_sum(fingerprints, eve_loss, epsilon, sigma):
    l = np.asarray(fingerprints, dtype=float).reshape(-1)
    le = np.asarray(eve_loss, dtype=float)
    diff = l[None, :] - le.reshape(-1, 1)
    s = np.sum(q_function((diff - epsilon) / sigma) - q_function((diff + epsilon) / sigma), axis=1)
    return np.clip(s, 0.0, 1.0).reshape(le.shape)


def analytic_pmd(fingerprints, eve_loss, epsilon: float, sigma: float, weights=None):
    """Missed-detection probability for Eve path loss(es) ``eve_loss``.

    Per Eve value: ``sum_i [Q((l_i - L_E - eps)/sigma) - Q((l_i - L_E + eps)/sigma)]``
    clamped to [0, 1]. With an array of Eve losses the per-Eve values are
    averaged with ``weights`` (uniform by default).
    """
    if not sigma > 0 or not epsilon >= 0:
        raise ValueError("need sigma > 0 and epsilon >= 0")
    if np.asarray(fingerprints).size == 0:
        raise ValueError("ground truth is empty")
    per_eve = _window_sum(fingerprints, eve_loss, epsilon, sigma)
    if np.ndim(per_eve) == 0:
        return float(per_eve)
    if per_eve.size == 0:
        return float("nan")
    w = np.full(per_eve.size, 1.0 / per_eve.size) if weights is None else np.asarray(weights, float)
    return float(np.dot(w, per_eve) / w.sum())


def expected_pmd(fingerprints, epsilon: float, sigma: float, l_min: float, l_max: float,
                 tol: float = 1e-8) -> float:
    """Missed detection averaged over an Eve loss uniform on ``[l_min, l_max]``.

    Every Eve shares the same loss law, so the uniform 1/N aggregation over
    Eves collapses to this single average.
    """
    if not l_max > l_min:
        raise ValueError("need l_max > l_min")
    if not sigma > 0 or not epsilon >= 0:
        raise ValueError("need sigma > 0 and epsilon >= 0")
    l = np.asarray(fingerprints, dtype=float).reshape(-1)
    if l.size == 0:
        raise ValueError("ground truth is empty")
    if epsilon == 0.0:
        return 0.0
    breaks = np.concatenate(([l_min, l_max], l - epsilon, l + epsilon, l))
    breaks = np.unique(breaks[(breaks >= l_min) & (breaks <= l_max)])
    integral = adaptive_simpson(lambda x: _window_sum(l, x, epsilon, sigma), breaks, tol)
    return float(integral / (l_max - l_min))


def adaptive_simpson(fn, breakpoints, tol: float = 1e-8, max_depth: int = 60, initial_split: int = 4):
    """Adaptive Simpson quadrature of a vectorised ``fn`` over sorted breakpoints.

    All pending intervals at one refinement level are evaluated together.
    The error budget is shared across intervals in proportion to width.
    """
    bp = np.asarray(breakpoints, dtype=float)
    total_width = bp[-1] - bp[0]
    if total_width <= 0:
        return 0.0
    edges = np.concatenate([np.linspace(a, b, initial_split + 1)[:-1] for a, b in zip(bp[:-1], bp[1:])]
                           + [bp[-1:]])
    a, b = edges[:-1], edges[1:]
    keep = b > a
    a, b = a[keep], b[keep]
    total = 0.0
    for depth in range(max_depth + 1):
        if a.size == 0:
            break
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        fa, fb, fm, flm, frm = (fn(x) for x in (a, b, m, lm, rm))
        whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
        halves = (m - a) / 6.0 * (fa + 4.0 * flm + fm) + (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        err = np.abs(halves - whole)
        ok = err <= 15.0 * tol * (b - a) / total_width
        if depth == max_depth:
            ok[:] = True
        total += float(np.sum(halves[ok] + (halves[ok] - whole[ok]) / 15.0))
        a, b, m = a[~ok], b[~ok], m[~ok]
        a, b = np.concatenate([a, m]), np.concatenate([m, b])
    return total


def acceptance_probability(mean, fingerprints, epsilon: float, sigma: float):
    """Exact P(T* < epsilon) for z ~ N(mean, sigma^2).

    The acceptance region is the union of the windows ``(l_i - eps, l_i + eps)``;
    overlapping windows are merged before integrating the Gaussian.
    """
    l = np.sort(np.asarray(fingerprints, dtype=float).reshape(-1))
    lo, hi = l - epsilon, l + epsilon
    starts, ends = [lo[0]], [hi[0]]
    for a, b in zip(lo[1:], hi[1:]):
        if a <= ends[-1]:
            ends[-1] = max(ends[-1], b)
        else:
            starts.append(a)
            ends.append(b)
    mu = np.asarray(mean, dtype=float)[..., None]
    s, e = np.array(starts), np.array(ends)
    p = np.sum(q_function((s - mu) / sigma) - q_function((e - mu) / sigma), axis=-1)
    return float(p) if np.ndim(p) == 0 else p


def exact_pfa(fingerprints, epsilon: float, sigma: float, priors=None) -> float:
    """False-alarm probability accounting for every stored fingerprint."""
    l = np.asarray(fingerprints, dtype=float).reshape(-1)
    pri = np.full(l.size, 1.0 / l.size) if priors is None else np.asarray(priors, float)
    return float(np.dot(pri, 1.0 - acceptance_probability(l, l, epsilon, sigma)))


def exact_pmd(fingerprints, eve_losses, epsilon: float, sigma: float) -> float:
    """Missed-detection probability averaged uniformly over the given Eve losses."""
    le = np.asarray(eve_losses, dtype=float).reshape(-1)
    if le.size == 0:
        return float("nan")
    return float(np.mean(acceptance_probability(le, fingerprints, epsilon, sigma)))
