"""
Closed-form spin-1/2 pair dynamics at the equal-gap (kink) point.

At the kink the symmetric-sector energies are ``-alpha, 0, +alpha`` so every
observable oscillates at the single frequency ``alpha g_d``. States are
written over ``(|dd>, |+>, |uu>)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .twospin import entropy_from_eigs

CRITERION_TOL = 1e-9
LIMIT_TOL = 1e-12
SQRT2 = math.sqrt(2)

# the explicit trace below is only derived at this point
KINK_POINT = (3.0, 2.0, 4.5)
KINK_ALPHA = math.sqrt(7)


@dataclass(frozen=True)
class KinkSolution:
    delta: float
    beta_perp: float
    alpha: float
    energies: tuple[float, float, float]
    states: dict[int, np.ndarray] = field(repr=False)
    limit: bool = False

    def product_basis(self, k: int) -> np.ndarray:
        """Eigenstate ``|k>`` over the ordered product basis dd, du, ud, uu."""
        return symmetric_to_product(self.states[k])


def symmetric_to_product(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    return np.stack([c[..., 0], c[..., 1] / SQRT2, c[..., 1] / SQRT2, c[..., 2]], axis=-1)


def product_to_symmetric(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.stack([psi[..., 0], (psi[..., 1] + psi[..., 2]) / SQRT2, psi[..., 3]], axis=-1)


def _normalized(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def kink_eigensystem(beta_z: float, omega_over_gd: float, beta_perp: float | None = None) -> KinkSolution:
    """Eigensystem at a kink point.

    ``beta_perp`` defaults to the value fixed by the kink criterion; when it
    is given it must satisfy the criterion.
    """
    delta = beta_z - omega_over_gd
    radicand = 2 * delta * delta - 0.5
    if radicand < -CRITERION_TOL:
        raise ValidationError(
            f"no kink for beta_z - omega = {delta}: 2*delta^2 - 1/2 = {radicand} < 0"
        )
    if beta_perp is None:
        beta_perp = math.sqrt(max(radicand, 0.0))
    else:
        residual = abs(beta_perp**2 - radicand)
        if residual > CRITERION_TOL:
            raise ValidationError(
                f"kink criterion violated: |beta_perp^2 - 2 delta^2 + 1/2| = {residual:.3e}"
            )
    alpha = math.sqrt(0.25 + 3 * delta * delta)
    energies = (-alpha, 0.0, alpha)

    if 4 * delta * delta - 1 < LIMIT_TOL:
        # beta_perp -> 0: the block is diagonal, states are the bare product states
        diag = {0: -delta - 0.5, 1: 1.0, 2: delta - 0.5}
        states = {}
        for k, e in zip((1, 3, 4), energies):
            idx = min(diag, key=lambda i: abs(diag[i] - e))
            states[k] = np.eye(3)[idx]
        return KinkSolution(delta, beta_perp, alpha, energies, states, limit=True)

    b = SQRT2 * beta_perp
    s1 = _normalized([b / (2 * (delta - alpha) + 1), 1.0, -b / (2 * (delta + alpha) - 1)])
    s3 = np.array([b * (2 * delta - 1), 4 * delta * delta - 1, -b * (2 * delta + 1)]) / math.sqrt(
        (4 * delta * delta - 1) * (12 * delta * delta + 1)
    )
    s4 = _normalized([b / (2 * (delta + alpha) + 1), 1.0, -b / (2 * (delta - alpha) - 1)])
    return KinkSolution(delta, beta_perp, alpha, energies, {1: s1, 3: s3, 4: s4})


def kink_state(sol: KinkSolution, t) -> np.ndarray:
    """Rotating-frame state from ``|dd>`` over ``(|dd>, |+>, |uu>)``; ``t`` may be an array."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape + (3,), dtype=complex)
    for k, e in zip((1, 3, 4), sol.energies):
        v = sol.states[k]
        out += (np.conj(v[0]) * np.exp(-1j * e * t))[..., None] * v
    return out


def kink_state_closed_form(t) -> np.ndarray:
    """Explicit trace at beta_z=3, beta_perp=2, Omega/g_d=4.5."""
    t = np.asarray(t, dtype=float)
    c = np.cos(KINK_ALPHA * t)
    s = np.sin(KINK_ALPHA * t)
    dd = (4 + 3 * c) / 7 - 1j * s / KINK_ALPHA
    plus = 2 * SQRT2 * (c - 1) / 7 - 1j * SQRT2 * s / KINK_ALPHA
    uu = 2 * (c - 1) / 7 + 0j
    return np.stack([dd, plus, uu], axis=-1)


def kink_populations(t):
    """``(P_dd, P_plus, P_uu)`` at the explicit kink point."""
    c = np.cos(KINK_ALPHA * np.asarray(t, dtype=float))
    s2 = 1 - c * c
    p_dd = (9 * c * c + 24 * c + 16) / 49 + s2 / 7
    p_plus = 8 * (c * c - 2 * c + 1) / 49 + 2 * s2 / 7
    p_uu = 4 * (c * c - 2 * c + 1) / 49
    return p_dd, p_plus, p_uu


def kink_lambdas(t):
    """Reduced-density eigenvalues ``(lambda_+, lambda_-)`` at the explicit kink point."""
    c = np.cos(KINK_ALPHA * np.asarray(t, dtype=float))
    radicand = 2189 + 624 * c - 600 * c**2 + 176 * c**3 + 12 * c**4
    root = np.sqrt(np.maximum(radicand, 0.0)) / 98
    return 0.5 + root, 0.5 - root


def kink_entropy(t):
    lp, lm = kink_lambdas(t)
    return entropy_from_eigs(np.stack([lp, lm], axis=-1), 2)


def lambdas_from_amplitudes(c_dd, c_plus, c_uu):
    """Reduced-density eigenvalues of ``c_dd|dd> + c_plus|+> + c_uu|uu>``."""
    c_dd, c_plus, c_uu = (np.asarray(x, dtype=complex) for x in (c_dd, c_plus, c_uu))
    p_dd, p_plus, p_uu = (np.abs(x) ** 2 for x in (c_dd, c_plus, c_uu))
    cross = 2 * np.real(c_plus**2 * np.conj(c_dd) * np.conj(c_uu))
    radicand = (p_dd - p_uu) ** 2 + 2 * p_plus * (p_dd + p_uu) + 2 * cross
    root = np.sqrt(np.maximum(radicand, 0.0)) / 2
    return 0.5 + root, 0.5 - root
