"""
Population transfer in a single large spin
==========================================

A spin J starting in |m = -J> under a static field plus a resonant rotating
field behaves like 2J independent spin-1/2 particles. Each flips with the
same probability, so the sublevel populations are binomial.
"""

import math

import numpy as np

from spinrot import FieldConfig, InitialSpec, SpinJ
from spinrot.propagate import lab_series
from spinrot.single import p2j_max, populations_stretched

# omega_z = 1 sets the unit; a weak transverse field rotating at resonance
f = FieldConfig(omega_z=1.0, omega_perp=0.1, omega_rot=1.0)
spin = SpinJ(16)  # J = 8

t = np.linspace(0, 2 * math.pi / f.omega_eff, 9)
pops = populations_stretched(spin, f, t)
for time, row in zip(t, pops):
    print(f"t = {time:7.2f}   P_0 = {row[0]:.3f}   P_8 = {row[8]:.3f}   P_16 = {row[16]:.3f}")

# the closed form against brute-force propagation of the 17-level system
psi = lab_series(spin, f, InitialSpec.z_sublevel().state(spin, f), t)
print("max |closed form - numeric| =", np.abs(np.abs(psi) ** 2 - pops).max())

# off resonance the largest P_2J falls off as a Lorentzian raised to 2J,
# so a larger spin has a much narrower resonance
for two_j in (1, 4, 16):
    detunings = np.linspace(-0.3, 0.3, 7)
    row = [p2j_max(SpinJ(two_j), FieldConfig(1.0, 0.1, 1.0 + d)) for d in detunings]
    print(f"J = {SpinJ(two_j)!s:>4}: " + " ".join(f"{v:.3f}" for v in row))
