"""
Path loss at terahertz frequencies
==================================

Spreading loss grows with frequency and distance; molecular absorption adds
a term linear in distance whose slope k(f) peaks at the water-vapour-like
lines of the bundled catalog.
"""

import numpy as np

from thzauth import channel

# The bundled catalog is illustrative: a handful of invented lines with a
# water-vapour-like layout, not HITRAN data. Swap in your own catalog or
# k-table with channel.load_absorption("my.csv").
catalog = channel.default_catalog()
medium = channel.Medium(temperature_k=285.0, pressure_atm=1.0)
print(f"{len(catalog)} lines, medium {medium}")

###############################################################################
# Absorption coefficient across the band
freqs = np.linspace(0.75e12, 1.25e12, 11)
k = channel.absorption_coefficient(catalog, medium, freqs)
for f, kf in zip(freqs, k):
    bar = "#" * int(min(60, 4 * kf))
    print(f"{f / 1e12:5.2f} THz  k = {kf:8.4f} 1/m  {bar}")

###############################################################################
# Loss budget at 1 THz: the spreading term dominates over a 1 m map
f0 = 1e12
for d in (0.01, 0.1, 0.5, 1.0, 1.4):
    ls = channel.spreading_loss_db(f0, d)
    la = channel.absorption_loss_db(channel.k_for(catalog, medium, f0), d)
    print(f"d = {d:4.2f} m  spreading {ls:7.2f} dB  absorption {la:6.3f} dB  total {ls + la:7.2f} dB")

###############################################################################
# A precomputed table gives the same answer without evaluating every line
table = channel.default_table()
print("table vs catalog at 1 THz:", table.k_at(f0), channel.k_for(catalog, medium, f0))
