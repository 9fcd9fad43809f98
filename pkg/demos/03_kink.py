"""
Single-frequency dynamics at a kink
===================================

When the two gaps of the symmetric spin-1/2 pair coincide, every observable
oscillates at one frequency alpha g_d. The equal-gap condition fixes beta_perp
once beta_z and Omega are chosen.
"""

import math

import numpy as np

from spinrot import kink_criterion, kink_eigensystem
from spinrot.kink import kink_entropy, kink_populations

beta_z, omega = 3.0, 4.5
beta_perp = kink_criterion(beta_z, omega)
sol = kink_eigensystem(beta_z, omega)
print(f"beta_perp = {beta_perp}, alpha = {sol.alpha:.6f} (sqrt 7 = {math.sqrt(7):.6f})")

period = 2 * math.pi / sol.alpha
t = np.linspace(0, period, 9)
p_dd, p_plus, p_uu = kink_populations(t)
for row in zip(t, p_dd, p_plus, p_uu, kink_entropy(t)):
    print("t = {:6.3f}  P_dd = {:.3f}  P_+ = {:.3f}  P_uu = {:.3f}  S_A = {:.3f}".format(*row))

# the spectrum of P_dd over whole periods has power only at harmonics of alpha
n = 1024
p = kink_populations(np.arange(n) * (4 * period / n))[0]
power = np.abs(np.fft.rfft(p)) ** 2
print("non-DC power in bins 4 and 8:", (power[4] + power[8]) / power[1:].sum())
