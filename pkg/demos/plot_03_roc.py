"""
ROC families from the experiment harness
========================================

Sweeping the target false-alarm rate moves the threshold; detection
improves monotonically while the misclassification rate among Alices does
not depend on the threshold at all.
"""

from thzauth import harness

cfg = harness.ExperimentConfig(realizations=100, slots=500, snr_db=(0.0, 10.0),
                               pfa=(0.01, 0.05, 0.2, 0.5, 0.9))
tables = harness.run_roc(cfg)

for snr, table in tables.items():
    print(f"\n{table.label}")
    _, pfa_emp, _ = table.series("pfa_empirical")
    pfa, pd, se = table.series("pd")
    pmc = table.get("pmc").estimate
    for p, pe, d, s in zip(pfa, pfa_emp, pd, se):
        print(f"  target Pfa {p:4.2f} (measured {pe:.3f})  Pd {d:.3f} +- {s:.3f}  Pmc {pmc:.3f}")

###############################################################################
# The CSV form is what the CLI writes (``thzauth roc --out roc.csv``)
print(tables[10.0].to_csv())
