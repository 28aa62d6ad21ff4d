"""
Smoothing per-slot decisions with a hidden Markov model
=======================================================

The per-slot hypothesis test is a noisy sensor of a hidden
{legitimate, impersonation} state. Viterbi decoding with the detector's
error rates as emission probabilities helps when the state is persistent;
with memoryless (uniform 0.5) transitions it can only act as a per-slot
MAP decision.
"""

import numpy as np

from thzauth import hmm

rng = np.random.default_rng(3)
emission = hmm.emission_from_errors(pfa=0.25, pmd=0.35)

for stay in (0.5, 0.9, 0.99):
    p = np.array([[stay, 1 - stay], [1 - stay, stay]])
    model = hmm.Hmm(p, emission, hmm.predict([1.0, 0.0], p, 1))
    states, obs = model.sample(20_000, rng)
    decoded = hmm.viterbi(obs, model)
    print(f"P(stay) = {stay:4.2f}  test accuracy {np.mean(obs == states):.3f}  "
          f"Viterbi accuracy {np.mean(decoded == states):.3f}")

###############################################################################
# The full pipeline on simulated deployments (``thzauth hmm-compare``)
from thzauth import harness

cfg = harness.ExperimentConfig(hmm_slots=20_000, block_length=1000, snr_db=(-5.0, 5.0))
print(harness.run_hmm_compare(cfg).to_csv())
