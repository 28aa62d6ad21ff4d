"""
Identifying the transmitter: nearest fingerprint vs Gaussian mixture
====================================================================

With the true fingerprints known, the nearest-fingerprint rule is optimal.
When only noisy estimates of the fingerprints are available, a mixture
model fitted to a batch of training measurements recovers cleaner centres.
"""

import numpy as np

from thzauth import channel, scenario, txid
from thzauth.numerics import RandomSource

rng = RandomSource(11)
dep = scenario.deploy(6, 0, 1.0, 1e-3, rng)
gt = scenario.ground_truth(dep, channel.default_catalog(), channel.Medium(), 1e12)
print("fingerprints (dB):", np.round(gt.l, 2))

sigma2 = 0.5
sigma = np.sqrt(sigma2)
labels = rng.integers(gt.m, size=5000)
train = gt.l[labels] + sigma * rng.normal(labels.size)

###############################################################################
# Fit one component per node; the training labels pin components to nodes
model = txid.gmm_fit(train, gt.m)
mapping = txid.label_components(model, train, labels, gt.m)
print(f"EM: {model.n_iter} iterations, converged={model.converged}, log-likelihood {model.log_likelihood:.1f}")
order = np.argsort(mapping)
print("fitted means (dB):", np.round(model.means[order], 2))

###############################################################################
# Test on fresh measurements
test_labels = rng.integers(gt.m, size=50_000)
z = gt.l[test_labels] + sigma * rng.normal(test_labels.size)
noisy_l = gt.l + sigma * rng.normal(gt.m)
sf = txid.SortedFingerprints.build(gt.l, gt.l_min, gt.l_max)
print(f"Pmc ML, true fingerprints   {np.mean(txid.ml_identify(z, gt.l) != test_labels):.4f}"
      f"  (analytic {txid.analytic_pmc(sf, sigma):.4f})")
print(f"Pmc ML, noisy fingerprints  {np.mean(txid.ml_identify(z, noisy_l) != test_labels):.4f}")
print(f"Pmc GMM                     {np.mean(mapping[txid.gmm_identify(z, model)] != test_labels):.4f}")
