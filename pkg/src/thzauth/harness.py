"""Monte Carlo experiments: error rates vs SNR, ROC, HT vs HMM, and ML vs GMM.

Every realization draws from its own stream ``RandomSource(seed).spawn(r)``
and results are reduced in realization order, so a run is reproducible
byte-for-byte regardless of ``workers``. Within a realization the same
unit-normal noise draws are reused across the sweep (common random
numbers), so curves are smooth and the ROC is monotone by construction.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import auth, channel, hmm, scenario, txid
from .numerics import RandomSource, binomial_stderr

PAPER_REALIZATIONS = 100_000
DEFAULT_ROC_PFA = (0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)
CSV_HEADER = ("sweep", "metric", "estimate", "stderr", "n")
EVE_LOSS_MODES = ("geometric", "uniform")
HMM_EMISSION_MODES = ("exact", "paper")


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    m: int = 10
    n: int = 10
    map_side_m: float = 1.0
    d_min_m: float = scenario.DEFAULT_D_MIN
    alpha: float = 0.5
    frequency_hz: float = 1e12
    temperature_k: float = 285.0
    pressure_atm: float = 1.0
    absorption: str | None = None  # CSV path; None selects the bundled catalog
    seed: int = 0
    realizations: int = 1000
    slots: int = 1000
    snr_db: tuple[float, ...] = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
    pfa: tuple[float, ...] | None = None
    epsilon: tuple[float, ...] | None = None
    eve_loss_mode: str = "geometric"
    # HT vs HMM
    hmm_slots: int = 100_000
    block_length: int = 1000
    hmm_epsilon: float = 1.0
    transition: tuple[tuple[float, float], tuple[float, float]] = ((0.5, 0.5), (0.5, 0.5))
    hmm_emission: str = "exact"
    # ML vs GMM
    sigma2: tuple[float, ...] = (0.01, 0.1, 0.5, 1.0, 2.0)
    txid_realizations: int = 20
    train_size: int = 10_000
    test_size: int = 100_000
    workers: int = 1
    out: str | None = None

    def __post_init__(self):
        for name in ("snr_db", "pfa", "epsilon", "sigma2"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, tuple(float(x) for x in np.atleast_1d(v)))
        object.__setattr__(self, "transition", tuple(tuple(float(x) for x in row) for row in self.transition))
        self.validate()

    def validate(self) -> None:
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        need(self.m >= 1 and self.n >= 0, "need m >= 1 and n >= 0")
        need(0 < self.d_min_m < self.map_side_m, "need 0 < d_min_m < map_side_m")
        need(0 < self.alpha < 1, "alpha must lie in (0, 1)")
        need(self.frequency_hz > 0, "frequency_hz must be positive")
        need(self.temperature_k > 0 and self.pressure_atm > 0, "temperature and pressure must be positive")
        need(self.realizations >= 1 and self.slots >= 1, "realizations and slots must be >= 1")
        need(len(self.snr_db) > 0, "snr_db grid is empty")
        need(self.pfa is None or (len(self.pfa) > 0 and all(0 < p < 1 for p in self.pfa)),
             "pfa values must lie in (0, 1)")
        need(self.epsilon is None or (len(self.epsilon) > 0 and all(e > 0 for e in self.epsilon)),
             "epsilon values must be positive")
        need(self.eve_loss_mode in EVE_LOSS_MODES, f"eve_loss_mode must be one of {EVE_LOSS_MODES}")
        need(self.hmm_emission in HMM_EMISSION_MODES, f"hmm_emission must be one of {HMM_EMISSION_MODES}")
        need(self.hmm_slots >= 1 and self.block_length >= 1, "hmm_slots and block_length must be >= 1")
        need(self.hmm_epsilon > 0, "hmm_epsilon must be positive")
        need(len(self.sigma2) > 0 and all(s > 0 for s in self.sigma2), "sigma2 values must be positive")
        need(self.txid_realizations >= 1, "txid_realizations must be >= 1")
        need(self.train_size >= self.m and self.test_size >= 1, "train_size must be >= m")
        need(self.workers >= 1, "workers must be >= 1")
        need(0 <= self.seed < 2**64, "seed must be an unsigned 64-bit integer")
        p = np.asarray(self.transition)
        need(p.shape == (2, 2) and np.all(p >= 0) and np.allclose(p.sum(axis=1), 1.0),
             "transition must be a 2x2 row-stochastic matrix")
        if self.absorption is not None:
            need(Path(self.absorption).is_file(), f"absorption file not found: {self.absorption}")

    @classmethod
    def from_dict(cls, d: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        d = dict(d)
        if d.get("absorption") and base_dir is not None and not Path(d["absorption"]).is_absolute():
            d["absorption"] = str(base_dir / d["absorption"])
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be an object")
        return cls.from_dict(data, base_dir=path.parent)

    def to_dict(self) -> dict:
        return asdict(self)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def full_scale(self) -> "ExperimentConfig":
        return replace(self, realizations=PAPER_REALIZATIONS)

    # -- derived objects

    def medium(self) -> channel.Medium:
        return channel.Medium(self.temperature_k, self.pressure_atm)

    def absorption_model(self) -> channel.AbsorptionModel:
        if self.absorption is None:
            return channel.default_catalog()
        return channel.load_absorption(self.absorption)

    def occupancy(self) -> scenario.OccupancyModel:
        return scenario.OccupancyModel.uniform(self.m, self.n, self.alpha)


class Row(NamedTuple):
    sweep: float
    metric: str
    estimate: float
    stderr: float
    n: int


@dataclass
class ResultTable:
    rows: list[Row] = field(default_factory=list)
    label: str = ""

    def add(self, sweep, metric, estimate, stderr, n) -> None:
        self.rows.append(Row(float(sweep), str(metric), float(estimate), float(stderr), int(n)))

    def add_proportion(self, sweep, metric, successes: int, trials: int) -> None:
        if trials <= 0:
            self.add(sweep, metric, float("nan"), float("nan"), 0)
            return
        p = successes / trials
        self.add(sweep, metric, p, binomial_stderr(p, trials), trials)

    def add_mean(self, sweep, metric, values) -> None:
        v = np.asarray(values, dtype=float)
        v = v[np.isfinite(v)]
        if v.size == 0:
            self.add(sweep, metric, float("nan"), float("nan"), 0)
            return
        se = float(np.std(v, ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0
        self.add(sweep, metric, float(np.mean(v)), se, v.size)

    def get(self, metric: str, sweep: float | None = None) -> Row:
        for r in self.rows:
            if r.metric == metric and (sweep is None or math.isclose(r.sweep, sweep, rel_tol=1e-12, abs_tol=1e-12)):
                return r
        raise KeyError((metric, sweep))

    def series(self, metric: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(sweep, estimate, stderr)`` arrays for one metric in row order."""
        rows = [r for r in self.rows if r.metric == metric]
        if not rows:
            raise KeyError(metric)
        return (np.array([r.sweep for r in rows]), np.array([r.estimate for r in rows]),
                np.array([r.stderr for r in rows]))

    @property
    def metrics(self) -> list[str]:
        return list(dict.fromkeys(r.metric for r in self.rows))

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([_fmt(r.sweep), r.metric, _fmt(r.estimate), _fmt(r.stderr), r.n])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, path) -> "ResultTable":
        t = cls()
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            if tuple(next(reader)) != CSV_HEADER:
                raise ValueError(f"{path}: not a result table")
            for s, m, e, se, n in reader:
                t.add(float(s), m, float(e), float(se), int(n))
        return t


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.12g}"


def _run_map(fn: Callable, args: Sequence, workers: int) -> list:
    if workers <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, args, chunksize=max(1, len(args) // (4 * workers))))


@dataclass(frozen=True)
class _Context:
    cfg: ExperimentConfig
    model: channel.AbsorptionModel
    medium: channel.Medium


def _context(cfg: ExperimentConfig) -> _Context:
    return _Context(cfg, cfg.absorption_model(), cfg.medium())


def _realize(ctx: _Context, rng: RandomSource, with_eves: bool = True) -> scenario.GroundTruth:
    cfg = ctx.cfg
    n = cfg.n if with_eves else 0
    dep = scenario.deploy(cfg.m, n, cfg.map_side_m, cfg.d_min_m, rng)
    gt = scenario.ground_truth(dep, ctx.model, ctx.medium, cfg.frequency_hz)
    if with_eves and cfg.eve_loss_mode == "uniform":
        gt = scenario.uniform_eve_losses(gt, n, rng)
    return gt


def _slot_draws(ctx: _Context, rng: RandomSource, gt: scenario.GroundTruth):
    is_eve, idx = scenario.sample_slots(ctx.cfg.occupancy(), rng, ctx.cfg.slots)
    true_loss = np.empty(idx.size)
    true_loss[~is_eve] = gt.l[idx[~is_eve]]
    true_loss[is_eve] = gt.l_eve[idx[is_eve]]
    noise = rng.normal(ctx.cfg.slots)
    return is_eve, idx, true_loss, noise


def _thresholds(cfg: ExperimentConfig, default_pfa: Sequence[float]) -> list[tuple[str, str, float]]:
    """``(label, kind, value)`` triples; kind is ``"pfa"`` or ``"eps"``."""
    if cfg.epsilon is not None:
        return [(f"eps={e:g}", "eps", e) for e in cfg.epsilon]
    return [(f"pfa={p:g}", "pfa", p) for p in (cfg.pfa if cfg.pfa is not None else default_pfa)]


def _epsilon(kind: str, value: float, sigma: float) -> float:
    return auth.threshold_for_pfa(value, sigma) if kind == "pfa" else value


# ------------------------------------------------------------ error vs SNR


def _error_vs_snr_worker(job):
    ctx, r = job
    cfg = ctx.cfg
    rng = RandomSource(cfg.seed).spawn(r)
    gt = _realize(ctx, rng)
    is_eve, _, true_loss, noise = _slot_draws(ctx, rng, gt)
    thr = _thresholds(cfg, (0.2,))
    counts = np.zeros((len(cfg.snr_db), len(thr), 4), dtype=np.int64)
    analytic = np.full((len(cfg.snr_db), len(thr), 3), np.nan)
    n_alice, n_eve = int(np.sum(~is_eve)), int(np.sum(is_eve))
    for a, snr in enumerate(cfg.snr_db):
        sigma = auth.sigma_from_snr_db(snr)
        z = true_loss + sigma * noise
        for b, (_, kind, value) in enumerate(thr):
            eps = _epsilon(kind, value, sigma)
            h1, _, _ = auth.decide(z, gt.l, eps)
            counts[a, b] = (np.sum(h1 & ~is_eve), n_alice, np.sum(~h1 & is_eve), n_eve)
            analytic[a, b, 0] = auth.analytic_pfa(eps, sigma)
            analytic[a, b, 2] = auth.exact_pfa(gt.l, eps, sigma, ctx.cfg.occupancy().priors)
            if gt.n:
                if cfg.eve_loss_mode == "uniform":
                    analytic[a, b, 1] = auth.expected_pmd(gt.l, eps, sigma, gt.l_min, gt.l_max)
                else:
                    analytic[a, b, 1] = auth.analytic_pmd(gt.l, gt.l_eve, eps, sigma)
    return counts, analytic


def run_error_vs_snr(cfg: ExperimentConfig) -> ResultTable:
    """False-alarm and missed-detection rates, empirical and analytic, per SNR.

    ``pfa_analytic`` is the single-window value ``2 Q(eps/sigma)``;
    ``pfa_exact`` also credits acceptance by neighbouring fingerprints,
    which matters when fingerprints are packed closer than a few sigma.
    """
    ctx = _context(cfg)
    parts = _run_map(_error_vs_snr_worker, [(ctx, r) for r in range(cfg.realizations)], cfg.workers)
    counts = np.sum([p[0] for p in parts], axis=0)
    analytic = np.stack([p[1] for p in parts])
    thr = _thresholds(cfg, (0.2,))
    table = ResultTable(label="error_vs_snr")
    for a, snr in enumerate(cfg.snr_db):
        for b, (label, _, _) in enumerate(thr):
            sfx = "" if len(thr) == 1 else f"@{label}"
            fa, na, md, ne = (int(v) for v in counts[a, b])
            table.add_proportion(snr, "pfa_empirical" + sfx, fa, na)
            table.add_mean(snr, "pfa_analytic" + sfx, analytic[:, a, b, 0])
            table.add_mean(snr, "pfa_exact" + sfx, analytic[:, a, b, 2])
            table.add_proportion(snr, "pmd_empirical" + sfx, md, ne)
            table.add_mean(snr, "pmd_analytic" + sfx, analytic[:, a, b, 1])
    return table


# ------------------------------------------------------------------- ROC


def _roc_worker(job):
    ctx, r, snr_list, pfa_grid = job
    cfg = ctx.cfg
    rng = RandomSource(cfg.seed).spawn(r)
    gt = _realize(ctx, rng)
    is_eve, idx, true_loss, noise = _slot_draws(ctx, rng, gt)
    sf = txid.SortedFingerprints.build(gt.l, gt.l_min, gt.l_max)
    alice = ~is_eve
    counts = np.zeros((len(snr_list), len(pfa_grid), 4), dtype=np.int64)
    mc = np.zeros((len(snr_list), 2), dtype=np.int64)
    pmc_an = np.zeros(len(snr_list))
    for a, snr in enumerate(snr_list):
        sigma = auth.sigma_from_snr_db(snr)
        z = true_loss + sigma * noise
        nearest, stat = auth.NearestFingerprint(gt.l).query(z)
        mc[a] = (np.sum(alice & (nearest != idx)), np.sum(alice))
        pmc_an[a] = txid.analytic_pmc(sf, sigma, cfg.occupancy().priors)
        for b, pfa in enumerate(pfa_grid):
            h1 = stat >= auth.threshold_for_pfa(pfa, sigma)
            counts[a, b] = (np.sum(h1 & alice), np.sum(alice), np.sum(h1 & is_eve), np.sum(is_eve))
    return counts, mc, pmc_an


def run_roc(cfg: ExperimentConfig) -> dict[float, ResultTable]:
    """ROC families: one table per SNR with Pd, empirical Pfa and Pmc per Pfa target."""
    ctx = _context(cfg)
    pfa_grid = tuple(cfg.pfa) if cfg.pfa is not None else DEFAULT_ROC_PFA
    jobs = [(ctx, r, cfg.snr_db, pfa_grid) for r in range(cfg.realizations)]
    parts = _run_map(_roc_worker, jobs, cfg.workers)
    counts = np.sum([p[0] for p in parts], axis=0)
    mc = np.sum([p[1] for p in parts], axis=0)
    pmc_an = np.stack([p[2] for p in parts])
    out = {}
    for a, snr in enumerate(cfg.snr_db):
        table = ResultTable(label=f"roc_m{cfg.m}_n{cfg.n}_alpha{cfg.alpha:g}_snr{snr:g}")
        for b, pfa in enumerate(pfa_grid):
            fa, na, det, ne = (int(v) for v in counts[a, b])
            table.add_proportion(pfa, "pd", det, ne)
            table.add_proportion(pfa, "pfa_empirical", fa, na)
            table.add_proportion(pfa, "pmc", int(mc[a, 0]), int(mc[a, 1]))
            table.add_mean(pfa, "pmc_analytic", pmc_an[:, a])
        out[snr] = table
    return out


# ------------------------------------------------------------- HT vs HMM


def _hidden_states(transition: np.ndarray, length: int, rng: RandomSource) -> np.ndarray:
    """Markov chain started from s0 one step before the first slot."""
    u = rng.uniform(size=length)
    p_to_1 = transition[:, 1]
    states = np.empty(length, dtype=np.int64)
    s = 0
    for k in range(length):
        s = int(u[k] < p_to_1[s])
        states[k] = s
    return states


def _hmm_worker(job):
    ctx, b, length = job
    cfg = ctx.cfg
    rng = RandomSource(cfg.seed).spawn(b)
    gt = _realize(ctx, rng)
    trans = np.asarray(cfg.transition)
    states = _hidden_states(trans, length, rng)
    occ = cfg.occupancy()
    alice_idx = rng.choice(cfg.m, occ.priors, size=length)
    eve_idx = rng.integers(max(cfg.n, 1), size=length)
    noise = rng.normal(length)
    if gt.n:
        true_loss = np.where(states == 1, gt.l_eve[eve_idx], gt.l[alice_idx])
    else:
        true_loss = gt.l[alice_idx]
    initial = hmm.predict(np.array([1.0, 0.0]), trans, 1)
    eps = cfg.hmm_epsilon
    res = np.zeros((len(cfg.snr_db), 5))
    for a, snr in enumerate(cfg.snr_db):
        sigma = auth.sigma_from_snr_db(snr)
        obs, _, _ = auth.decide(true_loss + sigma * noise, gt.l, eps)
        obs = obs.astype(np.int64)
        if cfg.hmm_emission == "exact":
            pfa = auth.exact_pfa(gt.l, eps, sigma, occ.priors)
            pmd = auth.exact_pmd(gt.l, gt.l_eve, eps, sigma) if gt.n else 0.0
        else:
            pfa = auth.analytic_pfa(eps, sigma)
            if not gt.n:
                pmd = 0.0
            elif cfg.eve_loss_mode == "uniform":
                pmd = auth.expected_pmd(gt.l, eps, sigma, gt.l_min, gt.l_max)
            else:
                pmd = auth.analytic_pmd(gt.l, gt.l_eve, eps, sigma)
        pfa, pmd = (float(np.clip(v, 1e-12, 1.0 - 1e-12)) for v in (pfa, pmd))
        model = hmm.Hmm(trans, hmm.emission_from_errors(pfa, pmd), initial)
        decoded = hmm.viterbi(obs, model)
        ht_ok = obs == states
        hmm_ok = decoded == states
        res[a] = (ht_ok.sum(), hmm_ok.sum(), np.sum((hmm_ok.astype(float) - ht_ok) ** 2), pfa, pmd)
    return res


def run_hmm_compare(cfg: ExperimentConfig) -> ResultTable:
    """Slot accuracy of the raw hypothesis test vs Viterbi decoding, per SNR.

    ``hmm_slots`` hidden states are split into blocks of ``block_length``;
    each block is decoded independently and uses its own deployment.
    """
    ctx = _context(cfg)
    n_blocks = math.ceil(cfg.hmm_slots / cfg.block_length)
    lengths = [min(cfg.block_length, cfg.hmm_slots - b * cfg.block_length) for b in range(n_blocks)]
    parts = _run_map(_hmm_worker, [(ctx, b, k) for b, k in enumerate(lengths)], cfg.workers)
    res = np.stack(parts)  # (blocks, snr, 5)
    total = cfg.hmm_slots
    table = ResultTable(label="hmm_compare")
    for a, snr in enumerate(cfg.snr_db):
        ht, hm, sq = (res[:, a, k].sum() for k in range(3))
        table.add_proportion(snr, "ht_accuracy", int(ht), total)
        table.add_proportion(snr, "hmm_accuracy", int(hm), total)
        gain = (hm - ht) / total
        var = max(sq / total - gain**2, 0.0)
        table.add(snr, "accuracy_gain", gain, math.sqrt(var / total), total)
        table.add_mean(snr, "emission_pfa", res[:, a, 3])
        table.add_mean(snr, "emission_pmd", res[:, a, 4])
    return table


# ------------------------------------------------------------- ML vs GMM


def _txid_worker(job):
    ctx, r = job
    cfg = ctx.cfg
    rng = RandomSource(cfg.seed).spawn(r)
    gt = _realize(ctx, rng, with_eves=False)
    pri = cfg.occupancy().priors
    lab_tr = rng.choice(cfg.m, pri, size=cfg.train_size)
    lab_te = rng.choice(cfg.m, pri, size=cfg.test_size)
    n_tr = rng.normal(cfg.train_size)
    n_te = rng.normal(cfg.test_size)
    n_gt = rng.normal(cfg.m)
    sf = txid.SortedFingerprints.build(gt.l, gt.l_min, gt.l_max)
    res = np.zeros((len(cfg.sigma2), 6))
    for a, s2 in enumerate(cfg.sigma2):
        sigma = math.sqrt(s2)
        x_tr = gt.l[lab_tr] + sigma * n_tr
        z = gt.l[lab_te] + sigma * n_te
        model = txid.gmm_fit(x_tr, cfg.m)
        labels = txid.label_components(model, x_tr, lab_tr, cfg.m)
        gmm_err = np.sum(labels[txid.gmm_identify(z, model)] != lab_te)
        ml_err = np.sum(txid.ml_identify(z, gt.l) != lab_te)
        ml_noisy_err = np.sum(txid.ml_identify(z, gt.l + sigma * n_gt) != lab_te)
        res[a] = (ml_err, gmm_err, ml_noisy_err, txid.analytic_pmc(sf, sigma, pri), model.n_iter,
                  float(model.converged))
    return res


def run_txid(cfg: ExperimentConfig) -> ResultTable:
    """Misclassification of ML and GMM identification over a noise-variance sweep.

    The GMM is trained on ``train_size`` noisy measurements of the Alice
    nodes, so it is the same model in the noiseless and noisy ground-truth
    cases; only the ML reference fingerprints differ.
    """
    ctx = _context(cfg)
    parts = _run_map(_txid_worker, [(ctx, r) for r in range(cfg.txid_realizations)], cfg.workers)
    res = np.stack(parts)
    n = cfg.test_size * cfg.txid_realizations
    table = ResultTable(label="txid")
    for a, s2 in enumerate(cfg.sigma2):
        ml, gm, mln = (int(res[:, a, k].sum()) for k in range(3))
        table.add_proportion(s2, "pmc_ml_noiseless", ml, n)
        table.add_proportion(s2, "pmc_gmm_noiseless", gm, n)
        table.add_proportion(s2, "pmc_ml_noisy", mln, n)
        table.add_proportion(s2, "pmc_gmm_noisy", gm, n)
        table.add_mean(s2, "pmc_analytic", res[:, a, 3])
        table.add_mean(s2, "gmm_iterations", res[:, a, 4])
        table.add_mean(s2, "gmm_converged", res[:, a, 5])
    return table


# ------------------------------------------------------------- path loss


def pathloss_grid(cfg: ExperimentConfig, frequencies_hz, distances_m) -> str:
    """CSV of spreading, absorption and total loss over a frequency x distance grid."""
    model, medium = cfg.absorption_model(), cfg.medium()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("frequency_hz", "distance_m", "k_per_m", "spreading_db", "absorption_db", "path_loss_db"))
    for f in frequencies_hz:
        k = channel.k_for(model, medium, f)
        for d in distances_m:
            ls = channel.spreading_loss_db(f, d)
            la = channel.absorption_loss_db(k, d)
            w.writerow([_fmt(f), _fmt(d), _fmt(k), _fmt(ls), _fmt(la), _fmt(ls + la)])
    return buf.getvalue()
