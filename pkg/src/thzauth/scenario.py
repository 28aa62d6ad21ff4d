"""Node deployment, ground-truth fingerprints and slot occupancy.

Bob sits at the corner ``(0, 0)`` of the square ``[0, side]^2``. Alice and
Eve positions are i.i.d. uniform over the square, resampled while closer
than ``d_min`` to Bob.

Slot model: each slot belongs to Alice ``i`` with probability ``pi(i)``.
With probability ``alpha`` the owner is idle and a uniformly chosen Eve
transmits in its place. Alice ``i`` therefore transmits in a fraction
``(1 - alpha) pi(i)`` of slots and Eve ``j`` in ``alpha / N``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import AbsorptionModel, Medium, k_for, absorption_loss_db, spreading_loss_db
from .numerics import RandomSource

DEFAULT_D_MIN = 1e-3


@dataclass(frozen=True)
class Deployment:
    alice_xy: np.ndarray  # (M, 2)
    eve_xy: np.ndarray  # (N, 2)
    map_side_m: float = 1.0
    d_min_m: float = DEFAULT_D_MIN

    @property
    def m(self) -> int:
        return len(self.alice_xy)

    @property
    def n(self) -> int:
        return len(self.eve_xy)

    @property
    def alice_distances(self) -> np.ndarray:
        return np.hypot(self.alice_xy[:, 0], self.alice_xy[:, 1])

    @property
    def eve_distances(self) -> np.ndarray:
        return np.hypot(self.eve_xy[:, 0], self.eve_xy[:, 1]) if self.n else np.empty(0)


@dataclass(frozen=True)
class GroundTruth:
    """Fingerprints in dB. ``l_eve`` is simulator-only knowledge."""

    l: np.ndarray
    l_eve: np.ndarray
    l_min: float
    l_max: float

    def __post_init__(self):
        l = np.asarray(self.l, dtype=float)
        le = np.asarray(self.l_eve, dtype=float).reshape(-1)
        if l.ndim != 1 or l.size == 0:
            raise ValueError("ground truth needs at least one Alice fingerprint")
        if not (np.all(np.isfinite(l)) and np.all(np.isfinite(le))):
            raise ValueError("fingerprints must be finite")
        if not self.l_max > self.l_min:
            raise ValueError("l_max must exceed l_min")
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "l_eve", le)

    @property
    def m(self) -> int:
        return self.l.size

    @property
    def n(self) -> int:
        return self.l_eve.size

    @property
    def span_db(self) -> float:
        return self.l_max - self.l_min

    def with_eve_losses(self, l_eve) -> "GroundTruth":
        return GroundTruth(self.l, np.asarray(l_eve, dtype=float), self.l_min, self.l_max)


@dataclass(frozen=True)
class OccupancyModel:
    priors: np.ndarray
    alpha: float
    n_eve: int

    def __post_init__(self):
        pri = np.asarray(self.priors, dtype=float)
        if pri.ndim != 1 or pri.size == 0 or np.any(pri < 0) or abs(pri.sum() - 1.0) > 1e-9:
            raise ValueError("Alice priors must form a probability vector")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if self.n_eve < 0:
            raise ValueError("n_eve must be non-negative")
        object.__setattr__(self, "priors", pri)

    @classmethod
    def uniform(cls, m: int, n: int, alpha: float) -> "OccupancyModel":
        return cls(np.full(m, 1.0 / m), alpha, n)

    @property
    def m(self) -> int:
        return self.priors.size

    @property
    def eve_fraction(self) -> float:
        return self.alpha if self.n_eve > 0 else 0.0


class SlotTruth(NamedTuple):
    is_eve: bool
    index: int


def _draw_positions(count: int, side: float, d_min: float, rng: RandomSource) -> np.ndarray:
    xy = rng.uniform(0.0, side, size=(count, 2))
    bad = np.hypot(xy[:, 0], xy[:, 1]) < d_min
    while np.any(bad):
        xy[bad] = rng.uniform(0.0, side, size=(int(bad.sum()), 2))
        bad = np.hypot(xy[:, 0], xy[:, 1]) < d_min
    return xy


def deploy(m: int, n: int, map_side_m: float, d_min_m: float, rng: RandomSource) -> Deployment:
    """Uniform random placement of ``m`` Alices and ``n`` Eves."""
    if m < 1 or n < 0:
        raise ValueError(f"need m >= 1 and n >= 0, got m={m}, n={n}")
    if not 0.0 < d_min_m < map_side_m:
        raise ValueError(f"need 0 < d_min < map side, got d_min={d_min_m}, side={map_side_m}")
    alice = _draw_positions(m, map_side_m, d_min_m, rng)
    eve = _draw_positions(n, map_side_m, d_min_m, rng) if n else np.empty((0, 2))
    return Deployment(alice, eve, float(map_side_m), float(d_min_m))


def loss_bounds(model: AbsorptionModel, medium: Medium, f_hz: float, map_side_m: float,
                d_min_m: float) -> tuple[float, float]:
    """Path loss at the nearest (``d_min``) and farthest (map diagonal) allowed distances."""
    k = k_for(model, medium, f_hz)
    d = np.array([d_min_m, math.sqrt(2.0) * map_side_m])
    lo, hi = spreading_loss_db(f_hz, d) + absorption_loss_db(k, d)
    return float(lo), float(hi)


def ground_truth(dep: Deployment, model: AbsorptionModel, medium: Medium, f_hz: float) -> GroundTruth:
    """Path-loss fingerprints of every node as seen by Bob."""
    k = k_for(model, medium, f_hz)

    def pl(d):
        return spreading_loss_db(f_hz, d) + absorption_loss_db(k, d) if d.size else np.empty(0)

    lo, hi = loss_bounds(model, medium, f_hz, dep.map_side_m, dep.d_min_m)
    return GroundTruth(np.atleast_1d(pl(dep.alice_distances)), np.atleast_1d(pl(dep.eve_distances)), lo, hi)


def uniform_eve_losses(gt: GroundTruth, n: int, rng: RandomSource) -> GroundTruth:
    """Replace Eve fingerprints by i.i.d. U(l_min, l_max) draws in dB."""
    return gt.with_eve_losses(rng.uniform(gt.l_min, gt.l_max, size=n))


def sample_slots(occ: OccupancyModel, rng: RandomSource, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised slot draws: returns ``(is_eve, index)`` arrays of length ``size``.

    Draw order is fixed (owner, idle flag, Eve choice) so the result only
    depends on the source state.
    """
    owner = rng.choice(occ.m, occ.priors, size=size)
    idle = rng.uniform(size=size) < occ.alpha
    eve = rng.integers(max(occ.n_eve, 1), size=size)
    if occ.n_eve == 0:
        idle[:] = False
    index = np.where(idle, eve, owner)
    return idle, index


def sample_slot(occ: OccupancyModel, rng: RandomSource) -> SlotTruth:
    is_eve, index = sample_slots(occ, rng, 1)
    return SlotTruth(bool(is_eve[0]), int(index[0]))
