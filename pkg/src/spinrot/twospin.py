"""
Two dipolar-coupled spins separated along z, in units of the coupling g_d.

Product basis index is ``n1 * (2J+1) + n2`` with ``n = m + J``. Subsystem A
is always the first spin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NumericalContractError, ValidationError
from .parallel import pmap
from .series import TimeSeries
from .spin import SpinJ, as_spin, eig_hermitian, spin_operators

EIG_FLOOR = 1e-14
DEGENERACY_GAP = 1e-9


@dataclass(frozen=True)
class TwoSpinConfig:
    beta_z: float
    beta_perp: float
    omega_over_gd: float = 0.0
    j: SpinJ = SpinJ(1)

    def __post_init__(self):
        for name in ("beta_z", "beta_perp", "omega_over_gd"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, float(value))
        if self.beta_perp < 0:
            raise ValidationError(f"beta_perp must be >= 0, got {self.beta_perp}")
        object.__setattr__(self, "j", as_spin(self.j))

    @property
    def delta(self) -> float:
        return self.beta_z - self.omega_over_gd


@lru_cache(maxsize=None)
def _pair_operators(two_j: int):
    jx, jy, jz = spin_operators(SpinJ(two_j))
    eye = np.eye(two_j + 1)
    total = [np.kron(a, eye) + np.kron(eye, a) for a in (jx, jy, jz)]
    ddi = -2 * np.kron(jz, jz) + np.kron(jx, jx) + np.kron(jy, jy)
    for m in (*total, ddi):
        m.setflags(write=False)
    return total, ddi


def total_spin_operators(j):
    """``(J1x+J2x, J1y+J2y, J1z+J2z)`` on the pair space."""
    total, _ = _pair_operators(as_spin(j).two_j)
    return tuple(m.copy() for m in total)


def ddi_operator(j) -> np.ndarray:
    """``-2 J1z J2z + J1x J2x + J1y J2y``."""
    return _pair_operators(as_spin(j).two_j)[1].copy()


def build_hrot(cfg: TwoSpinConfig) -> np.ndarray:
    (sx, _, sz), ddi = _pair_operators(cfg.j.two_j)
    return cfg.delta * sz + cfg.beta_perp * sx + ddi


def build_hlab(cfg: TwoSpinConfig, t: float) -> np.ndarray:
    (sx, sy, sz), ddi = _pair_operators(cfg.j.two_j)
    wt = cfg.omega_over_gd * t
    return cfg.beta_z * sz + cfg.beta_perp * (math.cos(wt) * sx + math.sin(wt) * sy) + ddi


@lru_cache(maxsize=None)
def _swap(two_j: int) -> np.ndarray:
    d = two_j + 1
    p = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            p[b * d + a, a * d + b] = 1.0
    p.setflags(write=False)
    return p


def swap_operator(j) -> np.ndarray:
    return _swap(as_spin(j).two_j).copy()


def product_state(j, n1: int, n2: int) -> np.ndarray:
    spin = as_spin(j)
    d = spin.dim
    if not (0 <= n1 < d and 0 <= n2 < d):
        raise ValidationError(f"sublevel indices must lie in [0, {d - 1}], got ({n1}, {n2})")
    psi = np.zeros(d * d, dtype=complex)
    psi[n1 * d + n2] = 1.0
    return psi


def symmetric_state(j, n1: int, n2: int) -> np.ndarray:
    """``(|n1,n2> + |n2,n1>)/sqrt 2``, or ``|n,n>`` when the labels coincide."""
    if n1 == n2:
        return product_state(j, n1, n1)
    return (product_state(j, n1, n2) + product_state(j, n2, n1)) / math.sqrt(2)


def symmetric_basis(j) -> np.ndarray:
    """Orthonormal columns spanning the exchange-symmetric subspace."""
    d = as_spin(j).dim
    cols = [symmetric_state(j, a, b) for a in range(d) for b in range(a, d)]
    return np.column_stack(cols)


def antisymmetric_weight(states, j) -> np.ndarray:
    """Squared norm of the antisymmetric component of each state (last axis)."""
    states = np.asarray(states, dtype=complex)
    anti = 0.5 * (states - states @ _swap(as_spin(j).two_j).T)
    return np.sum(np.abs(anti) ** 2, axis=-1)


def reduced_density(states, j) -> np.ndarray:
    """Partial trace over spin 2; accepts a single state or a stack."""
    d = as_spin(j).dim
    states = np.asarray(states, dtype=complex)
    m = states.reshape(*states.shape[:-1], d, d)
    return m @ np.swapaxes(m, -1, -2).conj()


def entropy_from_eigs(eigs, d: int) -> np.ndarray:
    eigs = np.where(eigs < EIG_FLOOR, 0.0, eigs)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(eigs > 0, -eigs * np.log(eigs), 0.0)
    return np.clip(terms.sum(axis=-1) / math.log(d), 0.0, 1.0)


def entanglement_entropy(states, j) -> np.ndarray:
    """S_A with logarithm base 2J+1 for one state or a stack of states."""
    d = as_spin(j).dim
    eigs = np.linalg.eigvalsh(reduced_density(states, j))
    return entropy_from_eigs(eigs, d)


def reduce_and_entropy(state, j):
    spin = as_spin(j)
    state = np.asarray(state, dtype=complex)
    if state.shape != (spin.dim**2,):
        raise ValidationError(f"state must have shape ({spin.dim ** 2},), got {state.shape}")
    norm = np.linalg.norm(state)
    if abs(norm - 1) > 1e-12:
        raise ValidationError(f"state not normalized (norm = {norm!r})")
    rho = reduced_density(state, spin)
    eigs = np.linalg.eigvalsh(rho)
    if eigs.min() < -1e-12 or abs(np.trace(rho).real - 1) > 1e-12:
        raise NumericalContractError("reduced density matrix is not a unit-trace PSD matrix")
    return rho, float(entropy_from_eigs(eigs, spin.dim))


@dataclass(frozen=True)
class GroundState:
    energy: float
    state: np.ndarray
    gap: float
    degenerate: bool


def ground_state(cfg: TwoSpinConfig) -> GroundState:
    if cfg.omega_over_gd != 0:
        raise ValidationError(f"ground states are defined for omega_over_gd = 0, got {cfg.omega_over_gd}")
    energies, vecs = eig_hermitian(build_hrot(cfg))
    gap = float(energies[1] - energies[0])
    return GroundState(float(energies[0]), vecs[:, 0], gap, gap < DEGENERACY_GAP)


def _gs_cell(args):
    two_j, beta_z, beta_perp = args
    spin = SpinJ(two_j)
    gs = ground_state(TwoSpinConfig(beta_z, beta_perp, 0.0, spin))
    if gs.degenerate:
        return math.nan, math.nan, True
    sx = _pair_operators(two_j)[0][0]
    jx = float(np.real(gs.state.conj() @ sx @ gs.state))
    return jx / spin.two_j, float(entanglement_entropy(gs.state, spin)), False


def gs_phase_maps(j, beta_z_grid, beta_perp_grid, workers: int | None = None) -> dict:
    """Ground-state ``<J1x+J2x>/2J`` and S_A on a (beta_z, beta_perp) grid.

    Arrays are indexed ``[i_beta_z, i_beta_perp]``. Degenerate cells are set
    to NaN and flagged in ``degenerate``.
    """
    spin = as_spin(j)
    bz = np.asarray(beta_z_grid, dtype=float)
    bp = np.asarray(beta_perp_grid, dtype=float)
    if bz.ndim != 1 or bp.ndim != 1 or bz.size == 0 or bp.size == 0:
        raise ValidationError("beta grids must be non-empty 1-d arrays")
    if not (np.all(np.isfinite(bz)) and np.all(np.isfinite(bp))):
        raise ValidationError("beta grids must be finite")
    if np.any(bp < 0):
        raise ValidationError("beta_perp grid must be >= 0")
    cells = [(spin.two_j, float(a), float(b)) for a in bz for b in bp]
    out = np.array(pmap(_gs_cell, cells, workers, chunksize=max(1, len(cells) // 64)), dtype=float)
    shape = (bz.size, bp.size)
    return {
        "beta_z": bz,
        "beta_perp": bp,
        "jx": out[:, 0].reshape(shape),
        "sa": out[:, 1].reshape(shape),
        "degenerate": out[:, 2].reshape(shape).astype(bool),
    }


def spectral_states(cfg: TwoSpinConfig, init, times) -> np.ndarray:
    """Rotating-frame states, shape ``(len(times), (2J+1)^2)``."""
    d2 = cfg.j.dim**2
    init = np.asarray(init, dtype=complex)
    if init.shape != (d2,):
        raise ValidationError(f"initial state must have shape ({d2},), got {init.shape}")
    if abs(np.linalg.norm(init) - 1) > 1e-12:
        raise ValidationError("initial state not normalized")
    energies, vecs = np.linalg.eigh(build_hrot(cfg))
    coeffs = vecs.conj().T @ init
    phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), energies))
    return (phases * coeffs) @ vecs.T


def to_lab(states, cfg: TwoSpinConfig, times) -> np.ndarray:
    """``exp(-i Omega t (J1z+J2z))`` applied to a time series of states."""
    d = cfg.j.dim
    m = np.arange(d) - cfg.j.j
    mtot = (m[:, None] + m[None, :]).ravel()
    t = np.asarray(times, dtype=float)[:, None]
    return np.asarray(states) * np.exp(-1j * cfg.omega_over_gd * t * mtot)


def population_channels(states, j) -> dict[str, np.ndarray]:
    """Named populations: symmetric-sector labels plus the extremal products."""
    spin = as_spin(j)
    d = spin.dim
    probs = np.abs(states) ** 2
    amp = np.asarray(states)
    if spin.two_j == 1:
        plus = (amp[..., 1] + amp[..., 2]) / math.sqrt(2)
        minus = (amp[..., 1] - amp[..., 2]) / math.sqrt(2)
        return {
            "P_dd": probs[..., 0],
            "P_plus": np.abs(plus) ** 2,
            "P_minus": np.abs(minus) ** 2,
            "P_uu": probs[..., 3],
        }
    low = np.abs(amp @ symmetric_state(spin, 0, 1).conj()) ** 2
    high = np.abs(amp @ symmetric_state(spin, d - 1, d - 2).conj()) ** 2
    return {
        "P_low": probs[..., 0],
        "P_low_plus1": low,
        "P_high_minus1": high,
        "P_high": probs[..., d * d - 1],
    }


def evolve_two_spin(cfg: TwoSpinConfig, init, t_grid, products: bool = False) -> TimeSeries:
    """Spectral evolution; channels hold populations, S_A and <H_rot>.

    With ``products=True`` every ``|m1,m2>`` population is added as
    ``P[n1,n2]`` (sublevel indices).
    """
    t = np.asarray(t_grid, dtype=float)
    series = TimeSeries(t)
    states = spectral_states(cfg, init, t)
    norms = np.linalg.norm(states, axis=1)
    if np.max(np.abs(norms - 1)) > 1e-10:
        raise NumericalContractError(f"norm drift {np.max(np.abs(norms - 1)):.3e} during evolution")

    lab = to_lab(states, cfg, t)
    if np.max(np.abs(np.abs(lab) - np.abs(states))) > 1e-12:
        raise NumericalContractError("lab and rotating frame populations differ")

    for name, values in population_channels(states, cfg.j).items():
        series.add(name, values)
    series.add("S_A", entanglement_entropy(states, cfg.j))
    h = build_hrot(cfg)
    series.add("energy", np.real(np.einsum("ti,ij,tj->t", states.conj(), h, states)))
    if products:
        d = cfg.j.dim
        probs = np.abs(states) ** 2
        for a in range(d):
            for b in range(d):
                series.add(f"P[{a},{b}]", probs[:, a * d + b])
    return series
