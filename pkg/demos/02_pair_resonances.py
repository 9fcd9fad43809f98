"""
Entanglement resonances of a dipolar spin pair
==============================================

Two spins along z with dipolar coupling g_d = 1 start in |-J,-J>. A rotating
transverse field at one of the level-crossing frequencies drives them into an
entangled state; away from these frequencies they barely move.
"""

import math

import numpy as np

from spinrot import SpinJ, TwoSpinConfig, evolve_two_spin, resonance_catalog, scan_samax
from spinrot.twospin import product_state

# spin-1/2 pair: the two resonances at beta_z and beta_z + 3/2
for pred in resonance_catalog(SpinJ(1), beta_z=3.0):
    print(f"({pred.id}) Omega/g_d = {pred.omega_over_gd:.3f}  target {pred.label}  S_A = {pred.target_entropy:.3f}")

t = np.linspace(0, 60, 3001)
init = product_state(SpinJ(1), 0, 0)
for omega in (3.0, 4.5):
    s = evolve_two_spin(TwoSpinConfig(3.0, 0.5, omega, SpinJ(1)), init, t)
    k = int(np.argmax(s["S_A"]))
    print(f"Omega = {omega}: max S_A = {s['S_A'][k]:.4f} at t = {t[k]:.2f}; "
          f"max P_uu = {s['P_uu'].max():.3f}, max P_plus = {s['P_plus'].max():.3f}")

# a short frequency scan for J = 1 shows the first- and second-order peaks
spin = SpinJ(2)
grid = np.linspace(0.4, 3.2, 57)
res = scan_samax(spin, 0.0, 0.1, grid, samples=2000)
predicted = {p.id: p.omega_over_gd for p in resonance_catalog(spin, 0.0)}
print("catalog:", ", ".join(f"{k}={v:.3f}" for k, v in predicted.items()))
for r in res:
    bar = "#" * int(40 * r.samax)
    print(f"{r.omega_over_gd:5.2f} {bar}")
print("log_3 2 =", math.log(2) / math.log(3))
