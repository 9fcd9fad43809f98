"""
Angular-momentum operators for arbitrary spin J.

Basis convention: the standard ``|m_j>`` basis in ascending order, so index 0
is ``m_j = -J`` and index ``n`` is ``m_j = -J + n``.  Two-spin product states
use ``index = n1 * (2J+1) + n2`` (``np.kron`` ordering).

J is stored as the integer ``2J`` so half-integer spins compare exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import NumericalContractError, ValidationError

MAX_TWO_J = 32
DEGENERACY_GAP = 1e-9
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class SpinJ:
    """Total spin quantum number, held losslessly as ``two_j = 2J``."""

    two_j: int

    def __post_init__(self):
        if isinstance(self.two_j, bool) or not isinstance(self.two_j, (int, np.integer)):
            raise ValidationError(f"two_j must be an integer, got {self.two_j!r}")
        if not 0 <= self.two_j <= MAX_TWO_J:
            raise ValidationError(f"two_j must lie in [0, {MAX_TWO_J}], got {self.two_j}")
        object.__setattr__(self, "two_j", int(self.two_j))

    @classmethod
    def parse(cls, value) -> "SpinJ":
        """Build from ``0.5``, ``"1/2"``, ``"3.5"``, ``2`` ... (must be a multiple of 1/2)."""
        if isinstance(value, SpinJ):
            return value
        try:
            frac = Fraction(str(value).strip()) if not isinstance(value, Fraction) else value
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"cannot parse spin value {value!r}") from None
        twice = 2 * frac
        if twice.denominator != 1:
            raise ValidationError(f"spin must be a multiple of 1/2, got {value!r}")
        return cls(int(twice))

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(self.dim) - self.j

    def __str__(self):
        return str(self.two_j // 2) if self.two_j % 2 == 0 else f"{self.two_j}/2"


def as_spin(j) -> SpinJ:
    return j if isinstance(j, SpinJ) else SpinJ.parse(j)


@lru_cache(maxsize=None)
def _operators(two_j: int):
    spin = SpinJ(two_j)
    m = spin.m_values
    jj = spin.j * (spin.j + 1)
    # J_+ |m> = sqrt(J(J+1) - m(m+1)) |m+1>
    raising = np.diag(np.sqrt(jj - m[:-1] * (m[:-1] + 1)), k=-1).astype(complex)
    jx = 0.5 * (raising + raising.T)
    jy = -0.5j * (raising - raising.T)
    jz = np.diag(m).astype(complex)
    for op in (jx, jy, jz):
        op.flags.writeable = False
    return jx, jy, jz


def build_jx(j) -> np.ndarray:
    return _operators(as_spin(j).two_j)[0].copy()


def build_jy(j) -> np.ndarray:
    return _operators(as_spin(j).two_j)[1].copy()


def build_jz(j) -> np.ndarray:
    return _operators(as_spin(j).two_j)[2].copy()


def spin_operators(j):
    """Return ``(Jx, Jy, Jz)`` as fresh arrays."""
    return build_jx(j), build_jy(j), build_jz(j)


def basis_state(j, n: int) -> np.ndarray:
    """``|m_j = -J + n>`` as a complex vector."""
    spin = as_spin(j)
    if not 0 <= n <= spin.two_j:
        raise ValidationError(f"sublevel index n must lie in [0, {spin.two_j}], got {n}")
    psi = np.zeros(spin.dim, dtype=complex)
    psi[n] = 1.0
    return psi


def expm_hermitian(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """``exp(-i t h)`` for Hermitian ``h`` via its eigendecomposition."""
    energies, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(-1j * t * energies)) @ vecs.conj().T


def rotate_about_y(state: np.ndarray, angle: float, j) -> np.ndarray:
    """Apply ``exp(-i angle J_y)`` to ``state``."""
    state = np.asarray(state, dtype=complex)
    return expm_hermitian(build_jy(j), angle) @ state


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, first factor is the slow (outer) index."""
    return np.kron(a, b)


def hermiticity_defect(h: np.ndarray) -> float:
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    k = np.argmax(np.abs(vec) - 1e-12 * np.arange(vec.size))
    phase = vec[k] / abs(vec[k])
    return vec / phase


def eig_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL):
    """Ascending eigenvalues and orthonormal eigenvectors (as columns).

    Every eigenvector is rotated so its largest-magnitude component is real and
    positive; ties are broken towards the lowest index. This makes results
    reproducible, which matters inside degenerate clusters.

    Raises
    ------
    NumericalContractError
        If ``h`` deviates from Hermiticity by more than ``tol`` entrywise.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {h.shape}")
    defect = hermiticity_defect(h)
    if defect > tol:
        raise NumericalContractError(f"matrix is not Hermitian: max |H - H^dagger| = {defect:.3e}")
    energies, vecs = np.linalg.eigh(0.5 * (h + h.conj().T))
    vecs = np.column_stack([_fix_phase(vecs[:, k]) for k in range(vecs.shape[1])]) if vecs.size else vecs
    return energies, vecs


def degenerate_clusters(energies: np.ndarray, gap: float = DEGENERACY_GAP) -> list[list[int]]:
    """Group indices of sorted eigenvalues whose neighbours differ by less than ``gap``."""
    clusters: list[list[int]] = []
    for k, e in enumerate(energies):
        if clusters and e - energies[clusters[-1][-1]] < gap:
            clusters[-1].append(k)
        else:
            clusters.append([k])
    return clusters
