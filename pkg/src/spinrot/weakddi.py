"""
Mean-field dipolar energy between two identical precessing moments.

Energies are returned as ``coupling * mu^2 * geometry / r^3`` where
``coupling`` carries ``mu_0 / 4 pi`` and the moment unit squared. With the
default ``coupling = 1`` and ``mu`` in units of ``g_J mu_B`` the result is in
units of ``mu_0 (g_J mu_B)^2 / (4 pi r_unit^3)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants

from .errors import ValidationError
from .halfspin import FieldConfig
from .single import InitialSpec, dipole_moment
from .spin import SpinJ, as_spin

COMMENSURATE_RTOL = 1e-6
MU_B = constants.physical_constants["Bohr magneton"][0]
SI_COUPLING_PER_GJ2 = constants.mu_0 / (4 * math.pi) * MU_B**2


@dataclass(frozen=True)
class Geometry:
    r: float
    theta_prime: float
    phi_prime: float = 0.0
    theta0: float = 0.0
    n: int = 0
    j: SpinJ = SpinJ(1)

    def __post_init__(self):
        if not (np.isfinite(self.r) and self.r > 0):
            raise ValidationError(f"r must be > 0, got {self.r}")
        spin = as_spin(self.j)
        object.__setattr__(self, "j", spin)
        if not 0 <= self.n <= spin.two_j:
            raise ValidationError(f"n must lie in [0, {spin.two_j}], got {self.n}")

    @property
    def mu(self) -> float:
        """Moment magnitude ``J - n`` in units of ``g_J mu_B``."""
        return self.j.j - self.n

    @property
    def r_hat(self) -> np.ndarray:
        st = math.sin(self.theta_prime)
        return np.array([st * math.cos(self.phi_prime), st * math.sin(self.phi_prime), math.cos(self.theta_prime)])


def vdd_instantaneous(geom: Geometry, f: FieldConfig, t, coupling: float = 1.0):
    """``V(t)`` for two moments both following the tilted-sublevel precession."""
    mu = dipole_moment(geom.j, InitialSpec("tilted", geom.n, geom.theta0), f, t)
    along = mu @ geom.r_hat
    return coupling * (np.sum(mu * mu, axis=-1) - 3 * along * along) / geom.r**3


def check_commensurate(f: FieldConfig):
    """Reject drives where the long-time average picks up extra secular terms."""
    w = f.omega_eff
    big_omega = abs(f.omega_rot)
    if big_omega == 0:
        raise ValidationError("omega_rot must be non-zero for the rotating-field average")
    if w == 0:
        raise ValidationError("omega' = 0: the moment does not precess, the average is undefined")
    for k in (1.0, 2.0, 0.5):
        if abs(big_omega - k * w) <= COMMENSURATE_RTOL * k * w:
            raise ValidationError(
                f"commensurate drive: Omega/omega' = {big_omega / w:.9g} is within {COMMENSURATE_RTOL} of {k:g}"
            )


def vdd_time_average(geom: Geometry, f: FieldConfig, coupling: float = 1.0) -> float:
    """Long-time average of :func:`vdd_instantaneous`; independent of ``phi_prime``."""
    check_commensurate(f)
    tb = f.theta_b
    tilt = (3 * math.cos(geom.theta0 - tb) ** 2 - 1) / 2
    field = (3 * math.cos(tb) ** 2 - 1) / 2
    radial = 1 - 3 * math.cos(geom.theta_prime) ** 2
    return coupling * geom.mu**2 * tilt * radial * field / geom.r**3


def vdd_time_average_si(geom: Geometry, f: FieldConfig, g_j: float) -> float:
    """SI wrapper: ``r`` in metres, energy in joules."""
    return vdd_time_average(geom, f, coupling=SI_COUPLING_PER_GJ2 * g_j * g_j)
