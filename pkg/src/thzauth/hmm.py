"""Two-state hidden Markov model over {no impersonation, impersonation}.

State 0 is ``s0`` (legitimate sender), state 1 is ``s1`` (impersonation).
``transition[i, j] = P(s[k] = j | s[k-1] = i)`` (rows sum to one) and
``emission[i, j] = P(x[k] = i | s[k] = j)`` (columns sum to one), where
``x[k]`` is the per-slot hypothesis-test output.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import NumericalError

UNIFORM_TRANSITIONS = np.full((2, 2), 0.5)


def _check_prob(a, name):
    if not np.all(np.isfinite(a)) or np.any(a < 0) or np.any(a > 1):
        raise ValueError(f"{name} entries must lie in [0, 1]")


@dataclass(frozen=True)
class Hmm:
    transition: np.ndarray = field(default_factory=lambda: UNIFORM_TRANSITIONS.copy())
    emission: np.ndarray = field(default_factory=lambda: np.eye(2))
    initial: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0]))

    def __post_init__(self):
        p = np.asarray(self.transition, dtype=float)
        r = np.asarray(self.emission, dtype=float)
        x0 = np.asarray(self.initial, dtype=float)
        n = p.shape[0]
        if p.shape != (n, n) or r.ndim != 2 or r.shape[1] != n or x0.shape != (n,):
            raise ValueError("inconsistent HMM dimensions")
        for a, name in ((p, "transition"), (r, "emission"), (x0, "initial")):
            _check_prob(a, name)
        if not np.allclose(p.sum(axis=1), 1.0, atol=1e-9):
            raise ValueError("transition rows must sum to 1")
        if not np.allclose(r.sum(axis=0), 1.0, atol=1e-9):
            raise ValueError("emission columns must sum to 1")
        if abs(x0.sum() - 1.0) > 1e-9:
            raise ValueError("initial distribution must sum to 1")
        object.__setattr__(self, "transition", p)
        object.__setattr__(self, "emission", r)
        object.__setattr__(self, "initial", x0)

    @property
    def n_states(self) -> int:
        return self.transition.shape[0]

    def sample(self, length: int, rng) -> tuple[np.ndarray, np.ndarray]:
        """Draw ``(states, observations)``; the first state follows ``initial``."""
        u = rng.uniform(size=(length, 2))
        states = np.empty(length, dtype=int)
        cum_p = np.cumsum(self.transition, axis=1)
        s = int(np.searchsorted(np.cumsum(self.initial), u[0, 0], side="right"))
        for k in range(length):
            if k:
                s = int(np.searchsorted(cum_p[s], u[k, 0], side="right"))
            states[k] = min(s, self.n_states - 1)
            s = states[k]
        cum_r = np.cumsum(self.emission, axis=0)
        obs = np.array([np.searchsorted(cum_r[:, s], v, side="right") for s, v in zip(states, u[:, 1])])
        return states, np.minimum(obs, self.emission.shape[0] - 1)


def emission_from_errors(pfa: float, pmd: float) -> np.ndarray:
    """Emission matrix of a detector with the given error rates.

    ``[[1 - pfa, pmd], [pfa, 1 - pmd]]``: column 0 is the no-impersonation
    state, row 1 the "impersonation declared" observation.
    """
    if not (0.0 <= pfa <= 1.0 and 0.0 <= pmd <= 1.0):
        raise ValueError(f"error rates must lie in [0, 1], got pfa={pfa!r}, pmd={pmd!r}")
    return np.array([[1.0 - pfa, pmd], [pfa, 1.0 - pmd]])


def predict(x0, transition, k: int) -> np.ndarray:
    """State distribution after ``k`` steps from ``x0``.

    With row-stochastic ``transition`` the update is ``x[k] = x[k-1] @ P``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    x = np.asarray(x0, dtype=float)
    return x @ np.linalg.matrix_power(np.asarray(transition, dtype=float), k)


def _log(a):
    with np.errstate(divide="ignore"):
        return np.log(a)


def viterbi_batch(observations, hmm: Hmm) -> np.ndarray:
    """Most likely state paths for a batch of equal-length sequences.

    ``observations`` has shape ``(B, K)``. Work is in log-space. Ties pick
    ``s0`` for the final state and, when tracing back, the predecessor that
    continues the current state.
    """
    obs = np.asarray(observations)
    if obs.ndim != 2 or obs.shape[1] == 0:
        raise ValueError("need a non-empty (batch, length) observation array")
    if np.any(obs < 0) or np.any(obs >= hmm.emission.shape[0]):
        raise ValueError("observation symbol out of range")
    n_b, n_k = obs.shape
    n = hmm.n_states
    log_p = _log(hmm.transition)
    log_r = _log(hmm.emission)  # (symbols, states)
    diag = np.arange(n)

    delta = _log(hmm.initial)[None, :] + log_r[obs[:, 0]]
    back = np.empty((n_k, n_b, n), dtype=np.int8 if n < 128 else np.int64)
    back[0] = diag
    for k in range(1, n_k):
        scores = delta[:, :, None] + log_p[None, :, :]  # (B, from, to)
        best = scores.max(axis=1)
        arg = scores.argmax(axis=1)
        stay = scores[:, diag, diag] == best
        arg = np.where(stay, diag[None, :], arg)
        back[k] = arg
        delta = best + log_r[obs[:, k]]

    final = delta.max(axis=1)
    if np.any(np.isneginf(final)) or np.any(np.isnan(final)):
        raise NumericalError("observation sequence has zero probability under the model")
    path = np.empty((n_b, n_k), dtype=int)
    path[:, -1] = delta.argmax(axis=1)
    rows = np.arange(n_b)
    for k in range(n_k - 1, 0, -1):
        path[:, k - 1] = back[k][rows, path[:, k]]
    return path


def viterbi(observations, hmm: Hmm) -> np.ndarray:
    """Maximum-likelihood hidden state sequence for one observation sequence."""
    obs = np.asarray(observations).reshape(-1)
    if obs.size == 0:
        raise ValueError("observation sequence is empty")
    return viterbi_batch(obs[None, :], hmm)[0]


def path_log_likelihood(states, observations, hmm: Hmm) -> float:
    """log P(states, observations) under ``hmm``."""
    s = np.asarray(states)
    x = np.asarray(observations)
    lp = _log(hmm.initial[s[0]]) + np.sum(_log(hmm.transition[s[:-1], s[1:]]))
    return float(lp + np.sum(_log(hmm.emission[x, s])))
