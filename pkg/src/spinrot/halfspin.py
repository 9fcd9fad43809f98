"""
Spin-J as a gas of 2J non-interacting spin-1/2 particles.

A product of 2J identical single-particle states lives in the fully symmetric
(maximal total spin) sector, so the spin-J amplitudes follow from one
two-component spinor.  Rotating-frame evolution of that spinor is a 2x2 SU(2)
rotation about the effective field ``((omega_perp, 0, omega_z - Omega))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .spin import as_spin

NORM_TOL = 1e-12


@dataclass(frozen=True)
class FieldConfig:
    """Single-spin drive, angular frequencies with hbar = 1.

    ``omega_z`` is the static Zeeman frequency, ``omega_perp`` the amplitude of
    the transverse field rotating in the xy-plane at ``omega_rot``.
    """

    omega_z: float
    omega_perp: float
    omega_rot: float = 0.0

    def __post_init__(self):
        for name in ("omega_z", "omega_perp", "omega_rot"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, float(value))
        if self.omega_perp < 0:
            raise ValidationError(f"omega_perp must be >= 0, got {self.omega_perp}")

    @property
    def detuning(self) -> float:
        """``omega_z - Omega``, the rotating-frame longitudinal field."""
        return self.omega_z - self.omega_rot

    @property
    def omega_eff(self) -> float:
        """Generalized Rabi frequency omega'."""
        return math.hypot(self.detuning, self.omega_perp)

    @property
    def omega_total(self) -> float:
        """Larmor frequency of the total lab field, omega = |B| g_J mu_B."""
        return math.hypot(self.omega_z, self.omega_perp)

    @property
    def phi0(self) -> float:
        """Tilt of the t=0 lab field from the z axis."""
        return math.atan2(self.omega_perp, self.omega_z)

    @property
    def theta_b(self) -> float:
        """Polar angle of the rotating-frame effective field, in (-pi, pi]."""
        return math.atan2(self.omega_perp, self.detuning)


@dataclass(frozen=True)
class HalfSpinAmplitudes:
    up: complex
    down: complex

    def __post_init__(self):
        object.__setattr__(self, "up", complex(self.up))
        object.__setattr__(self, "down", complex(self.down))

    @classmethod
    def spin_down(cls) -> "HalfSpinAmplitudes":
        return cls(0.0, 1.0)

    @classmethod
    def spin_up(cls) -> "HalfSpinAmplitudes":
        return cls(1.0, 0.0)

    @classmethod
    def tilted_down(cls, theta0: float) -> "HalfSpinAmplitudes":
        """``|down'>``: spin-down along an axis tilted by ``theta0`` about y."""
        return cls(-math.sin(theta0 / 2), math.cos(theta0 / 2))

    @classmethod
    def tilted_up(cls, theta0: float) -> "HalfSpinAmplitudes":
        return cls(math.cos(theta0 / 2), math.sin(theta0 / 2))

    @property
    def norm(self) -> float:
        return math.sqrt(abs(self.up) ** 2 + abs(self.down) ** 2)

    def as_array(self) -> np.ndarray:
        """``[c_down, c_up]``, matching the ascending-m ordering of spin-1/2."""
        return np.array([self.down, self.up])


def _check_normalized(amp: HalfSpinAmplitudes):
    if abs(amp.norm - 1.0) > NORM_TOL:
        raise ValidationError(f"half-spin amplitudes not normalized (norm = {amp.norm!r})")


def propagate_halfspin_arrays(up, down, f: FieldConfig, t):
    """Vectorised rotating-frame propagator; ``t`` may be an array."""
    t = np.asarray(t, dtype=float)
    w = f.omega_eff
    if w == 0.0:
        shape = np.broadcast(t, up).shape
        return np.broadcast_to(up, shape).astype(complex), np.broadcast_to(down, shape).astype(complex)
    c = np.cos(0.5 * w * t)
    s = np.sin(0.5 * w * t)
    nz = f.detuning / w
    nx = f.omega_perp / w
    new_up = up * c - 1j * s * (nz * up + nx * down)
    new_down = down * c + 1j * s * (nz * down - nx * up)
    return new_up, new_down


def propagate_halfspin(init: HalfSpinAmplitudes, f: FieldConfig, t: float) -> HalfSpinAmplitudes:
    """Evolve one spin-1/2 for time ``t`` under the rotating-frame Hamiltonian.

    Returns the rotating-frame amplitudes. ``omega' = 0`` is the trivial case
    (no effective field) and returns ``init`` unchanged.
    """
    _check_normalized(init)
    up, down = propagate_halfspin_arrays(init.up, init.down, f, t)
    return HalfSpinAmplitudes(complex(up), complex(down))


def to_lab_frame(amp: HalfSpinAmplitudes, omega_rot: float, t: float) -> HalfSpinAmplitudes:
    phase = np.exp(-0.5j * omega_rot * t)
    return HalfSpinAmplitudes(amp.up * phase, amp.down / phase)


def binomial_sqrt(two_j: int) -> np.ndarray:
    """``sqrt(C(2J, n))`` for n = 0..2J, from exact integer binomials."""
    return np.sqrt(np.array([math.comb(two_j, n) for n in range(two_j + 1)], dtype=float))


def assemble_spinj_arrays(up, down, j) -> np.ndarray:
    """Spin-J amplitudes from (possibly array-valued) spinor amplitudes.

    Output has the sublevel index as its last axis.
    """
    spin = as_spin(j)
    n = np.arange(spin.dim)
    up = np.asarray(up, dtype=complex)[..., None]
    down = np.asarray(down, dtype=complex)[..., None]
    return binomial_sqrt(spin.two_j) * up**n * down ** (spin.two_j - n)


def assemble_spinJ_state(single: HalfSpinAmplitudes, j) -> np.ndarray:
    """Symmetric product state of 2J copies of ``single`` in the ``|m_j>`` basis."""
    _check_normalized(single)
    return assemble_spinj_arrays(single.up, single.down, j)
