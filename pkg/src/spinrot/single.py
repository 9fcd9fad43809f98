"""
Closed-form dynamics of a single spin J in a static + rotating field.

All results come from the spin-1/2 gas picture: an initial state that is a
stretched state along some axis is a product of identical spinors, so every
observable reduces to a single precessing spinor raised to the power 2J or
scaled by ``J - n``.

Angles
------
``phi0``     tilt of the t=0 lab field, ``atan2(omega_perp, omega_z)``.
``theta_b``  tilt of the rotating-frame effective field,
             ``atan2(omega_perp, omega_z - Omega)``.
``theta0``   tilt of the quantization axis of the initial sublevel.

Every function accepts scalar or array ``t`` and broadcasts.  Dipole moments
are in units of ``g_J mu_B`` with ``mu = -<J>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .halfspin import FieldConfig, binomial_sqrt
from .spin import as_spin, basis_state, rotate_about_y

INITIAL_KINDS = ("z", "tilted", "ground")


@dataclass(frozen=True)
class InitialSpec:
    """Initial sublevel ``|m' = -J + n>`` along an axis tilted by ``theta0``.

    ``kind="z"`` pins ``theta0 = 0``; ``kind="ground"`` is the ground state of
    ``H(t=0)``, i.e. ``n = 0`` along the initial field direction ``phi0``.
    """

    kind: str = "z"
    n: int = 0
    theta0: float = 0.0

    def __post_init__(self):
        if self.kind not in INITIAL_KINDS:
            raise ValidationError(f"kind must be one of {INITIAL_KINDS}, got {self.kind!r}")
        if self.n < 0:
            raise ValidationError(f"sublevel index n must be >= 0, got {self.n}")
        if self.kind == "ground" and self.n != 0:
            raise ValidationError("the ground state of H(0) has n = 0")

    @classmethod
    def z_sublevel(cls, n: int = 0) -> "InitialSpec":
        return cls("z", n, 0.0)

    @classmethod
    def tilted(cls, theta0: float, n: int = 0) -> "InitialSpec":
        return cls("tilted", n, float(theta0))

    @classmethod
    def ground(cls) -> "InitialSpec":
        return cls("ground", 0, 0.0)

    def angle(self, f: FieldConfig) -> float:
        if self.kind == "ground":
            return f.phi0
        return 0.0 if self.kind == "z" else self.theta0

    def state(self, j, f: FieldConfig) -> np.ndarray:
        """The initial state vector ``exp(-i theta0 Jy) |-J + n>``."""
        spin = as_spin(j)
        if self.n > spin.two_j:
            raise ValidationError(f"sublevel index n must lie in [0, {spin.two_j}], got {self.n}")
        return rotate_about_y(basis_state(spin, self.n), self.angle(f), spin)


@dataclass(frozen=True)
class DipoleTrajectoryPoint:
    t: float
    mu: np.ndarray
    frame: str = "lab"


def _half_angles(f: FieldConfig, t):
    t = np.asarray(t, dtype=float)
    half = 0.5 * f.omega_eff * t
    return np.sin(half) ** 2, np.cos(half) ** 2


def _binomial_populations(two_j: int, p, q):
    n = np.arange(two_j + 1)
    p = np.asarray(p)[..., None]
    q = np.asarray(q)[..., None]
    return binomial_sqrt(two_j) ** 2 * p**n * q ** (two_j - n)


def transfer_ratio(f: FieldConfig) -> float:
    """``omega_perp^2 / omega'^2``; zero when there is no effective field."""
    w2 = f.omega_eff**2
    return 0.0 if w2 == 0 else f.omega_perp**2 / w2


def populations_stretched(j, f: FieldConfig, t) -> np.ndarray:
    """Sublevel populations for the initial state ``|m_j = -J>``.

    Binomial in ``n`` with single-particle flip probability
    ``p(t) = (omega_perp/omega')^2 sin^2(omega' t / 2)``.  Last axis is ``n``.
    """
    spin = as_spin(j)
    s2, c2 = _half_angles(f, t)
    r = transfer_ratio(f)
    p = r * s2
    q = c2 + (1 - r) * s2
    return _binomial_populations(spin.two_j, p, q)


def populations_tilted(j, theta0: float, f: FieldConfig, t) -> np.ndarray:
    """Sublevel populations (along z) for the stretched state ``|m' = -J>`` tilted by ``theta0``."""
    spin = as_spin(j)
    s2, c2 = _half_angles(f, t)
    tb = f.theta_b
    p = math.sin(theta0 / 2) ** 2 * c2 + s2 * math.sin(tb - theta0 / 2) ** 2
    q = math.cos(theta0 / 2) ** 2 * c2 + s2 * math.cos(tb - theta0 / 2) ** 2
    return _binomial_populations(spin.two_j, p, q)


def survival_min_stretched(j, f: FieldConfig) -> float:
    return (1.0 - transfer_ratio(f)) ** as_spin(j).two_j


def p2j_max(j, f: FieldConfig) -> float:
    """Largest population ever reached in ``|m_j = +J>`` from ``|m_j = -J>``."""
    return transfer_ratio(f) ** as_spin(j).two_j


def pn_max(j, n: int, f: FieldConfig) -> float:
    """Largest population ever reached in sublevel ``n`` from ``|m_j = -J>``.

    ``P_n`` is binomial in the flip probability ``p``, which sweeps
    ``[0, omega_perp^2/omega'^2]``; the binomial peak ``p = n/2J`` is used when
    it is reachable, otherwise the upper end of the range.
    """
    spin = as_spin(j)
    if not 0 <= n <= spin.two_j:
        raise ValidationError(f"sublevel index n must lie in [0, {spin.two_j}], got {n}")
    two_j = spin.two_j
    r = transfer_ratio(f)
    p = r if r <= n / two_j else n / two_j
    return math.comb(two_j, n) * p**n * (1 - p) ** (two_j - n)


def survival_general(j, theta0: float, f: FieldConfig, t):
    """Lab-frame survival probability of the stretched state tilted by ``theta0``."""
    spin = as_spin(j)
    t = np.asarray(t, dtype=float)
    wp = f.omega_eff
    w = f.omega_rot
    tb = f.theta_b
    s_half, c_half = _half_angles(f, t)
    s_rot, c_rot = np.sin(0.5 * w * t) ** 2, np.cos(0.5 * w * t) ** 2
    bracket = (
        1.0
        + 0.5 * (math.cos(theta0) * math.cos(theta0 - tb) - math.cos(tb)) * np.sin(wp * t) * np.sin(w * t)
        - math.sin(theta0) ** 2 * c_half * s_rot
        - s_half * (math.sin(tb) ** 2 * s_rot + math.sin(theta0 - tb) ** 2 * c_rot)
    )
    return np.clip(bracket, 0.0, 1.0) ** spin.two_j


def survival_ground_init(j, f: FieldConfig, t):
    """Survival probability starting from the ground state of ``H(t=0)``.

    Same physics as ``survival_general`` at ``theta0 = phi0``, written in terms
    of the field frequencies instead of angles.
    """
    spin = as_spin(j)
    t = np.asarray(t, dtype=float)
    wp = f.omega_eff
    w = f.omega_rot
    s_half, c_half = _half_angles(f, t)
    s_rot, c_rot = np.sin(0.5 * w * t) ** 2, np.cos(0.5 * w * t) ** 2
    sin2phi = math.sin(f.phi0) ** 2
    if wp == 0:
        inner = c_half * s_rot
    else:
        inner = (
            c_half * s_rot
            + s_half * (f.omega_total**2 / wp**2 * s_rot + w**2 / wp**2 * c_rot)
            - w / (2 * wp) * np.sin(wp * t) * np.sin(w * t)
        )
    return np.clip(1.0 - sin2phi * inner, 0.0, 1.0) ** spin.two_j


def survival_rotating_frame(j, theta0: float, f: FieldConfig, t):
    s_half, _ = _half_angles(f, t)
    bracket = 1.0 - math.sin(theta0 - f.theta_b) ** 2 * s_half
    return np.clip(bracket, 0.0, 1.0) ** as_spin(j).two_j


def pgs(j, f: FieldConfig, t):
    """Overlap with the instantaneous ground state of ``H(t)``, starting from it."""
    s_half, _ = _half_angles(f, t)
    wp2 = f.omega_eff**2
    coeff = 0.0 if wp2 == 0 else f.omega_rot**2 * math.sin(f.phi0) ** 2 / wp2
    return np.clip(1.0 - coeff * s_half, 0.0, 1.0) ** as_spin(j).two_j


def pgs_min(j, f: FieldConfig) -> float:
    wp2 = f.omega_eff**2
    coeff = 0.0 if wp2 == 0 else f.omega_rot**2 * math.sin(f.phi0) ** 2 / wp2
    return max(0.0, 1.0 - coeff) ** as_spin(j).two_j


def p2j_ground_init(j, f: FieldConfig, t):
    """Population of ``|m_j = +J>`` starting from the ground state of ``H(t=0)``."""
    s_half, _ = _half_angles(f, t)
    wp2 = f.omega_eff**2
    coeff = 0.0 if wp2 == 0 else f.omega_rot * f.omega_total * math.sin(f.phi0) ** 2 / wp2
    p = math.sin(f.phi0 / 2) ** 2 + coeff * s_half
    return np.clip(p, 0.0, 1.0) ** as_spin(j).two_j


def p2j_ground_init_max(j, f: FieldConfig) -> float:
    """Maximum over t of ``p2j_ground_init``; the drive term peaks at ``sin^2 = 1``."""
    wp2 = f.omega_eff**2
    coeff = 0.0 if wp2 == 0 else f.omega_rot * f.omega_total * math.sin(f.phi0) ** 2 / wp2
    p = math.sin(f.phi0 / 2) ** 2 + max(coeff, 0.0)
    return min(max(p, 0.0), 1.0) ** as_spin(j).two_j


def sigma_down_prime(theta0: float, f: FieldConfig, t) -> np.ndarray:
    """Lab-frame Bloch vector ``<sigma>`` of one tilted spin-down particle, shape ``(..., 3)``."""
    t = np.asarray(t, dtype=float)
    tb = f.theta_b
    a = math.cos(theta0 - tb)
    b = math.sin(theta0 - tb)
    cw, sw = np.cos(f.omega_eff * t), np.sin(f.omega_eff * t)
    co, so = np.cos(f.omega_rot * t), np.sin(f.omega_rot * t)
    sx = -a * math.sin(tb) * co - b * (cw * math.cos(tb) * co - sw * so)
    sy = -a * math.sin(tb) * so - b * (cw * math.cos(tb) * so + sw * co)
    sz = -a * math.cos(tb) + b * math.sin(tb) * cw
    return np.stack(np.broadcast_arrays(sx, sy, sz), axis=-1)


def angular_momentum(j, init: InitialSpec, f: FieldConfig, t) -> np.ndarray:
    """Lab-frame ``<J>`` for a (tilted) sublevel initial state, shape ``(..., 3)``."""
    spin = as_spin(j)
    if init.n > spin.two_j:
        raise ValidationError(f"sublevel index n must lie in [0, {spin.two_j}], got {init.n}")
    return (spin.j - init.n) * sigma_down_prime(init.angle(f), f, t)


def angular_momentum_stretched(j, f: FieldConfig, t, n: int = 0) -> np.ndarray:
    """``<J>`` for the z-sublevel ``|-J + n>``, written out component by component."""
    spin = as_spin(j)
    t = np.asarray(t, dtype=float)
    wp = f.omega_eff
    if wp == 0:
        zero = np.zeros_like(t)
        return np.stack([zero, zero, zero - (spin.j - n)], axis=-1)
    sh, ch = np.sin(0.5 * wp * t), np.cos(0.5 * wp * t)
    co, so = np.cos(f.omega_rot * t), np.sin(f.omega_rot * t)
    scale = -2 * (spin.j - n) * f.omega_perp / wp * sh
    cb = f.detuning / wp
    jx = scale * (cb * sh * co + ch * so)
    jy = scale * (cb * sh * so - ch * co)
    jz = -(spin.j - n) * (1 - 2 * (f.omega_perp / wp) ** 2 * sh**2)
    return np.stack([jx, jy, jz], axis=-1)


def angular_momentum_ground_init(j, f: FieldConfig, t) -> np.ndarray:
    """``<J>`` starting from the ground state of ``H(t=0)``, written out explicitly."""
    spin = as_spin(j)
    J = spin.j
    t = np.asarray(t, dtype=float)
    wp = f.omega_eff
    w = f.omega_rot
    sphi = math.sin(f.phi0)
    co, so = np.cos(w * t), np.sin(w * t)
    if wp == 0:
        amp = np.ones_like(t)
        cross = np.zeros_like(t)
        jz = -J * math.cos(f.phi0) + np.zeros_like(t)
    else:
        sh2 = np.sin(0.5 * wp * t) ** 2
        amp = 1 - sh2 + (f.omega_total**2 - w**2) / wp**2 * sh2
        cross = w / wp * np.sin(wp * t)
        jz = -J * math.cos(f.phi0) + 2 * J * f.omega_perp * w / wp**2 * sphi * sh2
    jx = -J * sphi * (amp * co + cross * so)
    jy = -J * sphi * (amp * so - cross * co)
    return np.stack([jx, jy, jz], axis=-1)


def field_frame(f: FieldConfig, t):
    """Unit vectors ``(e, theta_hat, phi_hat)`` of the effective field in the lab frame.

    ``e`` points along the instantaneous effective field, tilted by
    ``theta_b`` and rotating about z at ``Omega``.
    """
    t = np.asarray(t, dtype=float)
    tb = f.theta_b
    co, so = np.cos(f.omega_rot * t), np.sin(f.omega_rot * t)
    zero = np.zeros_like(co)
    e = np.stack([math.sin(tb) * co, math.sin(tb) * so, zero + math.cos(tb)], axis=-1)
    theta_hat = np.stack([math.cos(tb) * co, math.cos(tb) * so, zero - math.sin(tb)], axis=-1)
    # sin(theta_b) >= 0 because omega_perp >= 0, so this is d e / d(Omega t) normalized
    phi_hat = np.stack([-so, co, zero], axis=-1)
    return e, theta_hat, phi_hat


def dipole_moment(j, init: InitialSpec, f: FieldConfig, t) -> np.ndarray:
    """Lab-frame ``<mu>`` in units of ``g_J mu_B``: precession about the effective field."""
    spin = as_spin(j)
    if init.n > spin.two_j:
        raise ValidationError(f"sublevel index n must lie in [0, {spin.two_j}], got {init.n}")
    mu = spin.j - init.n
    t = np.asarray(t, dtype=float)
    tilt = init.angle(f) - f.theta_b
    e, theta_hat, phi_hat = field_frame(f, t)
    cw = np.cos(f.omega_eff * t)[..., None]
    sw = np.sin(f.omega_eff * t)[..., None]
    return mu * math.cos(tilt) * e + mu * math.sin(tilt) * (cw * theta_hat + sw * phi_hat)


def dipole_trajectory(j, init: InitialSpec, f: FieldConfig, t_grid) -> list[DipoleTrajectoryPoint]:
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    mus = dipole_moment(j, init, f, t_grid)
    return [DipoleTrajectoryPoint(float(t), mu) for t, mu in zip(t_grid, mus)]


def spread_mj_general(j, theta0: float, f: FieldConfig, t):
    """Width ``sqrt(<Jz^2> - <Jz>^2)`` of the tilted stretched state in the z basis."""
    sz = sigma_down_prime(theta0, f, t)[..., 2]
    return np.sqrt(np.clip(0.5 * as_spin(j).j * (1 - sz**2), 0.0, None))


def spread_mj(j, f: FieldConfig, t):
    """``Delta m_j(t)`` starting from the ground state of ``H(t=0)``."""
    t = np.asarray(t, dtype=float)
    wp2 = f.omega_eff**2
    base = math.sqrt(0.5 * as_spin(j).j) * math.sin(f.phi0)
    if wp2 == 0:
        return base + np.zeros_like(t)
    one_minus_cos = 1 - np.cos(f.omega_eff * t)
    inner = (
        1
        - f.omega_perp**2 * f.omega_rot**2 / wp2**2 * one_minus_cos**2
        + 2 * f.omega_z * f.omega_rot / wp2 * one_minus_cos
    )
    return base * np.sqrt(np.clip(inner, 0.0, None))


def rotated_frame_hamiltonian_coeffs(f: FieldConfig) -> tuple[float, float]:
    """Coefficients of ``Jz'`` and ``Jx'`` once ``H'`` is written along the t=0 field axis."""
    if f.omega_z == 0:
        raise ValidationError("omega_z must be non-zero: the t=0 field axis is undefined for B_z = 0 (cos(phi0) = 0)")
    c, s = math.cos(f.phi0), math.sin(f.phi0)
    return f.detuning * c + f.omega_z * s * s / c, f.omega_rot * s
