"""Transmitter identification among legitimate nodes.

Two classifiers are provided: nearest stored fingerprint (maximum
likelihood under equal-variance Gaussian noise) and a one-dimensional
Gaussian mixture fitted by expectation-maximisation on unlabelled
training measurements.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import logsumexp

from .auth import NearestFingerprint
from .numerics import NumericalError, q_function

VARIANCE_FLOOR = 1e-6
EM_TOL = 1e-8
EM_MAX_ITER = 500
_LOG_2PI = math.log(2.0 * math.pi)


def ml_identify(z, fingerprints):
    """Index of the nearest fingerprint (0-based, ties to the lowest index)."""
    idx, _ = NearestFingerprint(fingerprints).query(np.asarray(z, dtype=float))
    return int(idx) if np.ndim(idx) == 0 else idx


@dataclass(frozen=True)
class SortedFingerprints:
    """Fingerprints in increasing order with their ML decision-region edges.

    Equal fingerprints are merged into one region; the ML rule sends that
    region to the lowest original index of the group.
    """

    values: np.ndarray  # distinct fingerprints, increasing
    lower: np.ndarray  # lower region edge per distinct value
    upper: np.ndarray  # upper region edge per distinct value
    owner: np.ndarray  # original index that wins each region
    group: np.ndarray  # region id for each original fingerprint
    l_min: float
    l_max: float

    @classmethod
    def build(cls, fingerprints, l_min: float = -math.inf, l_max: float = math.inf) -> "SortedFingerprints":
        l = np.asarray(fingerprints, dtype=float).reshape(-1)
        if l.size == 0:
            raise ValueError("fingerprint vector is empty")
        values, group = np.unique(l, return_inverse=True)
        owner = np.array([np.flatnonzero(group == g).min() for g in range(values.size)])
        mids = 0.5 * (values[:-1] + values[1:])
        lower = np.concatenate(([l_min], mids))
        upper = np.concatenate((mids, [l_max]))
        return cls(values, lower, upper, owner, group.reshape(-1), float(l_min), float(l_max))


def analytic_pmc(sf: SortedFingerprints, sigma: float, priors=None) -> float:
    """Probability that a legitimate transmission is attributed to another Alice.

    Sender ``i`` is identified correctly when its measurement falls in its own
    region ``[lower, upper]`` around its fingerprint; the outermost regions
    end at ``l_min`` and ``l_max``.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    m = sf.group.size
    pri = np.full(m, 1.0 / m) if priors is None else np.asarray(priors, dtype=float)
    if pri.shape != (m,):
        raise ValueError("priors must have one entry per fingerprint")
    v = sf.values
    p_in = q_function((sf.lower - v) / sigma) - q_function((sf.upper - v) / sigma)
    correct = np.zeros(m)
    correct[sf.owner] = p_in
    return float(np.clip(np.dot(pri, 1.0 - correct), 0.0, 1.0))


# ---------------------------------------------------------------- GMM


@dataclass(frozen=True)
class GmmModel:
    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    n_iter: int = 0
    log_likelihood: float = float("nan")
    converged: bool = False
    history: tuple[float, ...] = field(default=(), repr=False)
    seed: int | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        mu = np.asarray(self.means, dtype=float)
        var = np.asarray(self.variances, dtype=float)
        if not (w.shape == mu.shape == var.shape) or w.ndim != 1 or w.size == 0:
            raise ValueError("weights, means and variances must be equal-length vectors")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("mixture weights must form a probability vector")
        if np.any(~(var > 0)):
            raise ValueError("variances must be positive")
        for name, a in (("weights", w), ("means", mu), ("variances", var)):
            object.__setattr__(self, name, a)

    @property
    def n_components(self) -> int:
        return self.weights.size

    def log_joint(self, x) -> np.ndarray:
        """log(pi_q phi_q(x)) with shape ``(len(x), Q)``."""
        return _log_joint(np.asarray(x, dtype=float).reshape(-1), self.weights, self.means, self.variances)

    def responsibilities(self, x) -> np.ndarray:
        lj = self.log_joint(x)
        return np.exp(lj - logsumexp(lj, axis=1, keepdims=True))

    def total_log_likelihood(self, x) -> float:
        return float(np.sum(logsumexp(self.log_joint(x), axis=1)))

    def to_dict(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
            "iterations": self.n_iter,
            "log_likelihood": self.log_likelihood,
            "converged": self.converged,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "GmmModel":
        return cls(
            np.asarray(d["weights"], float),
            np.asarray(d["means"], float),
            np.asarray(d["variances"], float),
            n_iter=int(d.get("iterations", 0)),
            log_likelihood=float(d.get("log_likelihood", float("nan"))),
            converged=bool(d.get("converged", False)),
            seed=d.get("seed"),
        )

    @classmethod
    def from_json(cls, text: str) -> "GmmModel":
        return cls.from_dict(json.loads(text))


def _log_joint(x, w, mu, var):
    with np.errstate(divide="ignore"):
        log_w = np.log(w)
    return log_w - 0.5 * (_LOG_2PI + np.log(var) + (x[:, None] - mu) ** 2 / var)


def _e_step(x, w, mu, var):
    """Responsibilities and total log-likelihood at the given parameters."""
    lj = _log_joint(x, w, mu, var)
    top = lj.max(axis=1, keepdims=True)
    resp = np.exp(lj - top)
    norm = resp.sum(axis=1, keepdims=True)
    resp /= norm
    return resp, float(np.sum(top) + np.sum(np.log(norm)))


def quantile_init(samples, q: int) -> np.ndarray:
    """Initial means at the ``(k + 1/2)/q`` sample quantiles."""
    return np.quantile(np.asarray(samples, float), (np.arange(q) + 0.5) / q)


def bin_variances(samples, q: int, floor: float = VARIANCE_FLOOR) -> np.ndarray:
    """Sample variance inside each of ``q`` equal-count bins of the sorted data."""
    chunks = np.array_split(np.sort(np.asarray(samples, float)), q)
    return np.array([max(float(np.var(c)), floor) for c in chunks])


def gmm_fit(samples, q: int, means_init=None, var_init=None, tol: float = EM_TOL, max_iter: int = EM_MAX_ITER,
            variance_floor: float = VARIANCE_FLOOR, seed: int | None = None) -> GmmModel:
    """Fit a ``q``-component 1-D Gaussian mixture by EM.

    Starts from quantile means, per-bin variances (see :func:`bin_variances`)
    and uniform weights; ``means_init``/``var_init`` override the first two. Iterates until the total log-likelihood
    gain drops below ``tol`` or ``max_iter`` is reached. A component whose
    responsibility mass vanishes keeps its previous mean and variance.
    """
    x = np.asarray(samples, dtype=float).reshape(-1)
    if q < 1:
        raise ValueError("need at least one component")
    if x.size < q:
        raise ValueError(f"need at least {q} samples, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError("samples must be finite")
    n = x.size
    mu = quantile_init(x, q) if means_init is None else np.asarray(means_init, dtype=float).copy()
    if mu.shape != (q,):
        raise ValueError("means_init must have q entries")
    var = bin_variances(x, q, variance_floor) if var_init is None else np.asarray(var_init, float).copy()
    if var.shape != (q,) or np.any(~(var > 0)):
        raise ValueError("var_init must have q positive entries")
    w = np.full(q, 1.0 / q)
    resp, ll = _e_step(x, w, mu, var)
    history = [ll]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        nk = resp.sum(axis=0)
        alive = nk > 1e-12 * n
        new_mu = mu.copy()
        new_var = var.copy()
        new_mu[alive] = (x @ resp[:, alive]) / nk[alive]
        dev2 = (x[:, None] - new_mu) ** 2
        spread = np.einsum("nq,nq->q", resp, dev2)
        new_var[alive] = np.maximum(spread[alive] / nk[alive], variance_floor)
        mu, var, w = new_mu, new_var, nk / nk.sum()
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(var))):
            raise NumericalError("EM produced non-finite parameters")
        resp, new_ll = _e_step(x, w, mu, var)
        history.append(new_ll)
        gain = new_ll - ll
        ll = new_ll
        if gain < tol:
            converged = True
            break
    return GmmModel(w, mu, var, n_iter=it, log_likelihood=ll, converged=converged,
                    history=tuple(history), seed=seed)


def gmm_identify(z, model: GmmModel):
    """Component with the largest ``pi_q phi_q(z)`` (ties to the lowest index)."""
    out = np.argmax(model.log_joint(z), axis=1)
    return int(out[0]) if np.ndim(z) == 0 else out


def label_components(model: GmmModel, samples, labels, n_labels: int) -> np.ndarray:
    """Map each mixture component to a training label.

    Training happens over a secure channel, so the sender of every training
    measurement is known. Components and labels are matched one-to-one to
    maximise the total responsibility mass agreeing with the labels; when
    there are more components than labels the leftovers take their
    majority label.
    """
    resp = model.responsibilities(samples)
    votes = np.zeros((model.n_components, n_labels))
    np.add.at(votes.T, np.asarray(labels, dtype=int), resp)
    out = votes.argmax(axis=1)
    rows, cols = linear_sum_assignment(votes, maximize=True)
    out[rows] = cols
    return out
