"""
Level crossings of the beta_perp = 0 two-spin Hamiltonian seen from
``|-J,-J>``, the equal-gap kink condition, and numerical scans of the
maximum entanglement entropy versus drive frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from .errors import NumericalContractError, ValidationError
from .parallel import pmap
from .spin import SpinJ, as_spin
from .twospin import (
    TwoSpinConfig,
    build_hrot,
    entanglement_entropy,
    entropy_from_eigs,
    product_state,
    spectral_states,
    symmetric_state,
)

CROSSING_TOL = 1e-10
DEFAULT_SCAN_SAMPLES = 4000
DEFAULT_SCAN_PERIODS = 15


@dataclass(frozen=True)
class ResonancePrediction:
    id: str
    omega_over_gd: float
    target_state: np.ndarray
    target_entropy: float
    order: int
    label: str = ""


@dataclass(frozen=True)
class ScanResult:
    omega_over_gd: float
    samax: float
    t_at_max: float


def radical(j) -> float:
    """``sqrt(64J^4 - 64J^3 + 36J^2 - 10J + 1)``."""
    J = as_spin(j).j
    return math.sqrt(64 * J**4 - 64 * J**3 + 36 * J**2 - 10 * J + 1)


def gamma_j(j) -> float:
    """Mixing angle of the ``M = +-(2J-2)`` doublet; needs J >= 1."""
    J = as_spin(j).j
    if J < 1:
        raise ValidationError(f"gamma_J needs J >= 1, got J = {J}")
    return math.atan(3 * math.sqrt(2 * J * (2 * J - 1)) / (8 * J * J - 4 * J - 1))


def lambda_pm(j) -> tuple[float, float]:
    J = as_spin(j).j
    shift = (4 * J - 1) / (4 * radical(j))
    return 0.25 + shift, 0.25 - shift


def doublet_state(j, branch: int, top: bool) -> np.ndarray:
    """``|M = -(2J-2)>_+-`` (``top=False``) or ``|M = 2J-2>_+-`` (``top=True``)."""
    spin = as_spin(j)
    J = spin.j
    g = gamma_j(spin)
    c, s = math.cos(g / 2), math.sin(g / 2)
    r1, r2 = math.sqrt(2 * J - 1), math.sqrt(2 * J)
    if branch > 0:
        a = r1 * c + r2 * s
        b = 2 * math.sqrt(J) * c - math.sqrt(2 * (2 * J - 1)) * s
    else:
        a = r1 * s - r2 * c
        b = 2 * math.sqrt(J) * s + math.sqrt(2 * (2 * J - 1)) * c
    d = spin.dim
    outer, inner, mid = (d - 1, d - 3, d - 2) if top else (0, 2, 1)
    pair = product_state(spin, outer, inner) + product_state(spin, inner, outer)
    return (a * pair + b * product_state(spin, mid, mid)) / math.sqrt(2 * (4 * J - 1))


def _two_level_entropy(lam: float, d: int) -> float:
    return float(entropy_from_eigs(np.array([lam, lam, 1 - 2 * lam]), d))


def crossing_energies(j, delta: float) -> dict[str, float]:
    """Closed-form beta_perp = 0 energies of the labelled symmetric states.

    Keys: ``E_+2J``, ``E_-2J``, ``E_+(2J-1)``, ``E_-(2J-1)`` and, for J >= 1,
    ``E_+(2J-2),+`` and friends (second sign is the doublet branch).
    """
    spin = as_spin(j)
    J = spin.j
    out = {
        "E_+2J": 2 * J * delta - 2 * J * J,
        "E_-2J": -2 * J * delta - 2 * J * J,
        "E_+(2J-1)": (2 * J - 1) * delta - 2 * J * J + 3 * J,
        "E_-(2J-1)": -(2 * J - 1) * delta - 2 * J * J + 3 * J,
    }
    if J >= 1:
        k = (8 * J**3 - 18 * J**2 + 8 * J - 1) / (4 * J - 1)
        split = radical(spin) / (4 * J - 1)
        for sign, tag in ((1, "+"), (-1, "-")):
            for branch, btag in ((1, "+"), (-1, "-")):
                out[f"E_{tag}(2J-2),{btag}"] = sign * (2 * J - 2) * delta - k + branch * split
    return out


def _verify(spin: SpinJ, beta_z: float, pred: ResonancePrediction):
    h = build_hrot(TwoSpinConfig(beta_z, 0.0, pred.omega_over_gd, spin))
    init = product_state(spin, 0, 0)
    v = pred.target_state
    e_init = float(np.real(init.conj() @ h @ init))
    e_target = float(np.real(v.conj() @ h @ v))
    residual = float(np.linalg.norm(h @ v - e_target * v))
    if residual > CROSSING_TOL or abs(e_target - e_init) > CROSSING_TOL:
        raise NumericalContractError(
            f"resonance ({pred.id}) failed verification: eigen residual {residual:.3e}, "
            f"energy mismatch {abs(e_target - e_init):.3e}"
        )


def resonance_catalog(j, beta_z: float) -> list[ResonancePrediction]:
    """Frequencies at which ``|-J,-J>`` crosses an entangled symmetric state.

    Items (iv)-(vii) need J >= 1. Each returned prediction has been checked
    to be an exact crossing of the beta_perp = 0 Hamiltonian.
    """
    spin = as_spin(j)
    if spin.two_j < 1:
        raise ValidationError("resonances need J >= 1/2")
    J = spin.j
    d = spin.dim
    log2 = math.log(2) / math.log(d)
    items = [
        ResonancePrediction("i", beta_z, product_state(spin, d - 1, d - 1), 0.0, int(4 * J), "|J,J>"),
        ResonancePrediction(
            "ii", beta_z + 3 * J / (4 * J - 1), symmetric_state(spin, d - 1, d - 2), log2, int(4 * J - 1), "|2J;2J-1>"
        ),
        ResonancePrediction("iii", beta_z + 3 * J, symmetric_state(spin, 0, 1), log2, 1, "|2J;-2J+1>"),
    ]
    if J >= 1:
        r = radical(spin)
        lam_p, lam_m = lambda_pm(spin)
        s_p, s_m = _two_level_entropy(lam_p, d), _two_level_entropy(lam_m, d)
        low = (4 * J - 1) / 2
        high = (4 * J - 1) / (2 * (2 * J - 1))
        items += [
            ResonancePrediction(
                "iv", beta_z + low + r / (2 * (4 * J - 1)), doublet_state(spin, 1, False), s_p, 2, "|-2J+2>_+"
            ),
            ResonancePrediction(
                "v", beta_z + low - r / (2 * (4 * J - 1)), doublet_state(spin, -1, False), s_m, 2, "|-2J+2>_-"
            ),
            ResonancePrediction(
                "vi",
                beta_z + high + r / (2 * (2 * J - 1) * (4 * J - 1)),
                doublet_state(spin, 1, True),
                s_p,
                int(4 * J - 2),
                "|2J-2>_+",
            ),
            ResonancePrediction(
                "vii",
                beta_z + high - r / (2 * (2 * J - 1) * (4 * J - 1)),
                doublet_state(spin, -1, True),
                s_m,
                int(4 * J - 2),
                "|2J-2>_-",
            ),
        ]
    for pred in items:
        _verify(spin, beta_z, pred)
    return items


def kink_criterion(beta_z: float, omega_over_gd: float) -> float | None:
    """beta_perp at which E3 - E1 = E4 - E3 (spin-1/2 pair), or None if no kink."""
    delta = beta_z - omega_over_gd
    radicand = 2 * delta * delta - 0.5
    if radicand < 0:
        return None
    return math.sqrt(radicand)


def kink_omegas(beta_z: float, beta_perp: float) -> tuple[float, float]:
    """Both drive frequencies satisfying the kink criterion, ascending."""
    if beta_perp < 0:
        raise ValidationError(f"beta_perp must be >= 0, got {beta_perp}")
    delta = math.sqrt((beta_perp * beta_perp + 0.5) / 2)
    return beta_z - delta, beta_z + delta


def default_horizon(beta_perp: float) -> float:
    if not beta_perp > 0:
        raise ValidationError(f"beta_perp must be > 0 for the default scan horizon, got {beta_perp}")
    return DEFAULT_SCAN_PERIODS * 2 * math.pi / beta_perp


def _scan_point(omega, two_j, beta_z, beta_perp, times):
    spin = SpinJ(two_j)
    cfg = TwoSpinConfig(beta_z, beta_perp, omega, spin)
    sa = entanglement_entropy(spectral_states(cfg, product_state(spin, 0, 0), times), spin)
    k = int(np.argmax(sa))
    return ScanResult(float(omega), float(sa[k]), float(times[k]))


def scan_samax(
    j,
    beta_z: float,
    beta_perp: float,
    omega_grid,
    horizon: float | None = None,
    samples: int = DEFAULT_SCAN_SAMPLES,
    workers: int | None = None,
) -> list[ScanResult]:
    """Max over ``t in [0, T]`` of S_A starting from ``|-J,-J>``, per drive frequency."""
    spin = as_spin(j)
    if not beta_perp > 0:
        raise ValidationError(f"beta_perp must be > 0 for a scan, got {beta_perp}")
    horizon = default_horizon(beta_perp) if horizon is None else float(horizon)
    if not horizon > 0:
        raise ValidationError(f"horizon must be > 0, got {horizon}")
    if samples < 2:
        raise ValidationError(f"samples must be >= 2, got {samples}")
    grid = np.asarray(omega_grid, dtype=float).ravel()
    if grid.size == 0 or not np.all(np.isfinite(grid)):
        raise ValidationError("omega grid must be non-empty and finite")
    times = np.linspace(0.0, horizon, samples)
    task = partial(_scan_point, two_j=spin.two_j, beta_z=beta_z, beta_perp=beta_perp, times=times)
    return pmap(task, grid.tolist(), workers, chunksize=max(1, grid.size // 32))


def superposed_entropy(j, p: float) -> tuple[float, float]:
    """S_A of ``sqrt(p)|-J,-J> + sqrt(1-p)|-2J+2>_+-`` for both branches."""
    spin = as_spin(j)
    if spin.j < 1:
        raise ValidationError("superposed_entropy needs J >= 1")
    if not 0 <= p <= 1:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    out = []
    for lam in lambda_pm(spin):
        mean = (p + 2 * (1 - p) * lam) / 2
        half = math.sqrt(max(p * p + 4 * p * (1 - p) * lam, 0.0)) / 2
        l1, l2 = mean + half, mean - half
        out.append(float(entropy_from_eigs(np.array([l1, l2, 1 - l1 - l2]), spin.dim)))
    return out[0], out[1]
