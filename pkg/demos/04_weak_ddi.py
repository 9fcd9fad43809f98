"""
Tuning the averaged dipolar interaction
=======================================

For weakly coupled moments that precess in step, only the time-averaged
dipolar energy matters. It factorizes into a tilt factor, the usual
(1 - 3 cos^2 theta') geometry, and a factor set by the effective field angle.
"""

import math

import numpy as np

from spinrot import FieldConfig, Geometry, SpinJ, vdd_time_average
from spinrot.weakddi import vdd_instantaneous

f = FieldConfig(omega_z=1.0, omega_perp=0.8, omega_rot=2.3)
print(f"theta_B = {f.theta_b:.4f} rad, omega' = {f.omega_eff:.4f}")

# head-to-tail separation; the tilt of the initial moment changes sign of V
for theta0 in np.linspace(0, math.pi / 2, 5):
    geom = Geometry(r=1.0, theta_prime=0.0, theta0=theta0, j=SpinJ(2))
    print(f"theta0 = {theta0:.3f}: V_avg = {vdd_time_average(geom, f):+.4f}")

# a brute-force long-time mean with a smooth window agrees with the closed form
geom = Geometry(r=1.0, theta_prime=1.1, theta0=0.4, j=SpinJ(2))
T = 1000 * max(2 * math.pi / f.omega_eff, 2 * math.pi / f.omega_rot)
s = (np.arange(400_000) + 0.5) / 400_000
w = np.exp(-1 / (s * (1 - s)))
numeric = w @ vdd_instantaneous(geom, f, s * T) / w.sum()
print(f"closed form {vdd_time_average(geom, f):.10f}, numeric {numeric:.10f}")
