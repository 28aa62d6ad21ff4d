"""
Two-step authentication on path-loss fingerprints
=================================================

Bob stores one path-loss fingerprint per legitimate node. A measurement is
matched to its nearest fingerprint and rejected when the residual exceeds
a threshold picked for a target false-alarm rate.
"""

import numpy as np

from thzauth import auth, channel, scenario
from thzauth.numerics import RandomSource

rng = RandomSource(7)
model, medium = channel.default_catalog(), channel.Medium()

# Ten Alices and ten Eves dropped on a 1 m x 1 m map, Bob at the corner.
dep = scenario.deploy(10, 10, 1.0, 1e-3, rng)
gt = scenario.ground_truth(dep, model, medium, 1e12)
print("Alice fingerprints (dB):", np.round(np.sort(gt.l), 2))
print("Eve path losses (dB):   ", np.round(np.sort(gt.l_eve), 2))

###############################################################################
# Threshold from the target false-alarm probability
snr_db = 10.0
sigma = auth.sigma_from_snr_db(snr_db)
cfg = auth.AuthConfig.for_pfa(0.2, sigma, gt.l)
print(f"SNR {snr_db} dB -> sigma {sigma:.3f} dB, epsilon {cfg.epsilon:.3f} dB")

###############################################################################
# A few measurements from both sides
for who, true in (("Alice 0", gt.l[0]), ("Alice 1", gt.l[1]), ("Eve 0", gt.l_eve[0]), ("Eve 1", gt.l_eve[1])):
    z = true + sigma * rng.normal()
    d = auth.authenticate(float(z), cfg)
    print(f"{who:8s} z = {z:7.3f}  nearest #{d.index}  T* = {d.statistic:.3f}  -> {d.hypothesis}")

###############################################################################
# Batch error rates vs their closed forms. Fingerprints here sit within a
# few sigma of each other, so the exact merged-window rates are the fair
# reference; the single-window formula assumes well-separated fingerprints.
n = 200_000
owner = rng.integers(gt.m, size=n)
h1, _, _ = auth.decide(gt.l[owner] + sigma * rng.normal(n), gt.l, cfg.epsilon)
print(f"Pfa empirical {h1.mean():.4f}  exact {auth.exact_pfa(gt.l, cfg.epsilon, sigma):.4f}  "
      f"single-window {auth.analytic_pfa(cfg.epsilon, sigma):.4f}")
eve = rng.integers(gt.n, size=n)
h1e, _, _ = auth.decide(gt.l_eve[eve] + sigma * rng.normal(n), gt.l, cfg.epsilon)
print(f"Pmd empirical {(~h1e).mean():.4f}  exact {auth.exact_pmd(gt.l, gt.l_eve, cfg.epsilon, sigma):.4f}")
