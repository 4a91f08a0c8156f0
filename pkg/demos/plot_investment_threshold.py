"""
=================================
Investment cost and the contract
=================================

Sweep the firm's investment cost. Below the threshold the contract buys
high security and the provider pays for it one-for-one. Above it the
provider sells at full value and leaves security low.
"""
import numpy as np

from cyberins import fig1_default_params, investment_threshold, sweep_psi

p = fig1_default_params()
star = investment_threshold(p).psi_star
psis = np.linspace(0.5, 1.5 * star, 16)
s = sweep_psi(p, psis)

print(f"{'psi':>6} {'i':>2} {'phi':>7} {'t':>7} {'CE':>8}")
for psi, i, phi, t, ce in zip(psis, s.regime, s.columns["phi"], s.columns["t"], s.columns["certainty_equivalent"]):
    print(f"{psi:6.2f} {int(i):2d} {phi:7.3f} {t:7.3f} {ce:8.3f}")
