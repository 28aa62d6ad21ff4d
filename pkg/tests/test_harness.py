import json
import math

import numpy as np
import pytest

from thzauth import harness
from thzauth.harness import ConfigError, ExperimentConfig, ResultTable

SMALL = ExperimentConfig(realizations=20, slots=300, snr_db=(0.0, 10.0), hmm_slots=2000, block_length=500,
                         txid_realizations=2, train_size=500, test_size=2000, sigma2=(0.01, 1.0))


def test_config_defaults_and_full_scale():
    cfg = ExperimentConfig()
    assert (cfg.m, cfg.n, cfg.alpha, cfg.realizations, cfg.slots) == (10, 10, 0.5, 1000, 1000)
    assert cfg.full_scale().realizations == 100_000


@pytest.mark.parametrize("bad", [
    dict(m=0), dict(alpha=1.0), dict(snr_db=()), dict(pfa=(0.0,)), dict(eve_loss_mode="x"),
    dict(hmm_emission="y"), dict(transition=((0.5, 0.6), (0.5, 0.5))), dict(seed=-1),
    dict(sigma2=(0.0,)), dict(absorption="/no/such/file.csv"), dict(d_min_m=2.0),
])
def test_config_rejects(bad):
    with pytest.raises(ConfigError):
        ExperimentConfig(**bad)


def test_config_json(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"seed": 5, "snr_db": [1, 2], "m": 4}))
    cfg = ExperimentConfig.from_json(p)
    assert cfg.seed == 5 and cfg.snr_db == (1.0, 2.0) and cfg.m == 4
    assert ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg
    p.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ConfigError, match="bogus"):
        ExperimentConfig.from_json(p)
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_json(p)


def test_config_relative_absorption_path(tmp_path):
    from thzauth.channel import default_table, save_table_csv

    save_table_csv(default_table(), tmp_path / "k.csv")
    (tmp_path / "cfg.json").write_text(json.dumps({"absorption": "k.csv"}))
    cfg = ExperimentConfig.from_json(tmp_path / "cfg.json")
    assert cfg.absorption == str(tmp_path / "k.csv")
    assert cfg.absorption_model().k_at(1e12) == pytest.approx(default_table().k_at(1e12))


def test_result_table_csv_round_trip(tmp_path):
    t = ResultTable()
    t.add_proportion(1.0, "p", 3, 10)
    t.add_proportion(2.0, "p", 0, 0)
    t.add_mean(1.0, "m", [1.0, 2.0, 3.0])
    text = t.to_csv(tmp_path / "t.csv")
    assert text.splitlines()[0] == "sweep,metric,estimate,stderr,n"
    assert text.splitlines()[1] == f"1,p,0.3,{math.sqrt(0.21 / 10):.12g},10"
    assert text.splitlines()[2] == "2,p,nan,nan,0"
    back = ResultTable.from_csv(tmp_path / "t.csv")
    assert back.to_csv() == text
    assert t.get("m").stderr == pytest.approx(1 / math.sqrt(3))
    assert t.metrics == ["p", "m"]
    with pytest.raises(KeyError):
        t.get("zzz")


def test_error_vs_snr_table_shape_and_values():
    t = harness.run_error_vs_snr(SMALL)
    assert t.metrics == ["pfa_empirical", "pfa_analytic", "pfa_exact", "pmd_empirical", "pmd_analytic"]
    assert len(t.rows) == 5 * len(SMALL.snr_db)
    for r in t.rows:
        assert 0 <= r.estimate <= 1 and r.n > 0
        if r.metric.endswith("empirical"):
            assert r.stderr == pytest.approx(math.sqrt(r.estimate * (1 - r.estimate) / r.n))
    for snr in SMALL.snr_db:
        assert t.get("pfa_analytic", snr).estimate == pytest.approx(0.2, abs=1e-9)
        r, ex = t.get("pfa_empirical", snr), t.get("pfa_exact", snr)
        assert abs(r.estimate - ex.estimate) < 3 * r.stderr


def test_error_vs_snr_pfa_reaches_target_when_resolved():
    # once sigma is far below the fingerprint spacing the single-window formula holds
    t = harness.run_error_vs_snr(SMALL.with_overrides(snr_db=(60.0,), slots=2000))
    r = t.get("pfa_empirical")
    assert abs(r.estimate - 0.2) < 3 * r.stderr


def test_error_vs_snr_without_eves():
    cfg = SMALL.with_overrides(n=0, realizations=1, snr_db=(5.0,))
    t = harness.run_error_vs_snr(cfg)
    assert t.get("pfa_empirical").n == 300
    pmd = t.get("pmd_empirical")
    assert math.isnan(pmd.estimate) and pmd.n == 0
    assert math.isnan(t.get("pmd_analytic").estimate)


def test_error_vs_snr_multiple_thresholds():
    t = harness.run_error_vs_snr(SMALL.with_overrides(epsilon=(0.5, 1.0), snr_db=(0.0,)))
    assert "pfa_empirical@eps=0.5" in t.metrics and "pmd_analytic@eps=1" in t.metrics
    a = t.get("pmd_empirical@eps=0.5").estimate
    b = t.get("pmd_empirical@eps=1").estimate
    assert a <= b  # wider acceptance windows miss more


def test_uniform_mode_pmd_agreement():
    cfg = SMALL.with_overrides(eve_loss_mode="uniform", realizations=40, slots=2000, snr_db=(0.0,))
    t = harness.run_error_vs_snr(cfg)
    emp, an = t.get("pmd_empirical"), t.get("pmd_analytic")
    assert abs(emp.estimate - an.estimate) < 3 * emp.stderr + 2 * an.stderr


def test_roc_structure_and_shape():
    cfg = SMALL.with_overrides(snr_db=(5.0,), pfa=(0.05, 0.5, 0.99))
    tables = harness.run_roc(cfg)
    assert list(tables) == [5.0]
    t = tables[5.0]
    _, pd, _ = t.series("pd")
    _, pmc, _ = t.series("pmc")
    assert np.all(np.diff(pd) >= 0)
    assert np.all(pmc == pmc[0])
    assert pd[-1] > 0.95
    assert t.label == "roc_m10_n10_alpha0.5_snr5"


def test_hmm_compare_noiseless_limit():
    cfg = SMALL.with_overrides(snr_db=(60.0,), hmm_epsilon=1e-2)
    t = harness.run_hmm_compare(cfg)
    assert t.get("ht_accuracy").estimate > 0.99
    assert t.get("hmm_accuracy").estimate > 0.99
    assert t.get("ht_accuracy").n == cfg.hmm_slots


def test_hmm_compare_paper_emission_runs():
    t = harness.run_hmm_compare(SMALL.with_overrides(hmm_emission="paper", snr_db=(0.0,)))
    assert set(t.metrics) == {"ht_accuracy", "hmm_accuracy", "accuracy_gain", "emission_pfa", "emission_pmd"}


def test_txid_low_noise():
    t = harness.run_txid(SMALL.with_overrides(sigma2=(1e-6,)))
    assert t.get("pmc_ml_noiseless").estimate < 0.01
    assert t.get("pmc_gmm_noiseless").estimate < 0.01


def test_workers_do_not_change_results():
    cfg = SMALL.with_overrides(realizations=6, snr_db=(0.0,))
    assert harness.run_error_vs_snr(cfg).to_csv() == harness.run_error_vs_snr(cfg.with_overrides(workers=3)).to_csv()


def test_pathloss_grid():
    text = harness.pathloss_grid(ExperimentConfig(), [1e12], [0.5, 1.0])
    lines = text.splitlines()
    assert lines[0] == "frequency_hz,distance_m,k_per_m,spreading_db,absorption_db,path_loss_db"
    assert len(lines) == 3
    assert float(lines[1].split(",")[3]) == pytest.approx(86.42718330860375, abs=1e-9)


@pytest.mark.parametrize("m,n", [(20, 10), (3, 12), (5, 0)])
def test_unequal_node_counts(m, n):
    cfg = SMALL.with_overrides(m=m, n=n, realizations=3, snr_db=(5.0,))
    t = harness.run_roc(cfg)[5.0]
    assert t.get("pmc").n > 0
    assert harness.run_error_vs_snr(cfg).get("pfa_empirical").n > 0
