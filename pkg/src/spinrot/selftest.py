"""Analytic-versus-numeric and invariant checks runnable without pytest."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .halfspin import FieldConfig
from .kink import kink_eigensystem, kink_populations, product_to_symmetric
from .propagate import PropagatorPlan, evolve, lab_series, spectral_series
from .resonance import resonance_catalog
from .single import InitialSpec, angular_momentum, populations_tilted, survival_general
from .spin import SpinJ, build_jx, build_jy, build_jz, expm_hermitian, hermiticity_defect
from .twospin import (
    TwoSpinConfig,
    antisymmetric_weight,
    build_hrot,
    entanglement_entropy,
    product_state,
    reduced_density,
    spectral_states,
    swap_operator,
    to_lab,
)


@dataclass
class Check:
    name: str
    error: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tol)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.error:.3e} (tol {self.tol:.0e})"


def _commutators():
    worst = 0.0
    for two_j in (1, 2, 3, 8, 16, 32):
        jx, jy, jz = build_jx(SpinJ(two_j)), build_jy(SpinJ(two_j)), build_jz(SpinJ(two_j))
        scale = max(1.0, two_j / 2)
        worst = max(
            worst,
            np.abs(jx @ jy - jy @ jx - 1j * jz).max() / scale,
            np.abs(jy @ jz - jz @ jy - 1j * jx).max() / scale,
            np.abs(jz @ jx - jx @ jz - 1j * jy).max() / scale,
        )
    return worst


def _casimir():
    worst = 0.0
    for two_j in (1, 2, 5, 16):
        s = SpinJ(two_j)
        jx, jy, jz = build_jx(s), build_jy(s), build_jz(s)
        c = jx @ jx + jy @ jy + jz @ jz - s.j * (s.j + 1) * np.eye(s.dim)
        worst = max(worst, np.abs(c).max() / (s.j * (s.j + 1)))
    return worst


def _hermiticity():
    worst = 0.0
    for two_j in (1, 3, 16):
        s = SpinJ(two_j)
        for m in (build_jx(s), build_jy(s), build_jz(s)):
            worst = max(worst, hermiticity_defect(m))
    h = build_hrot(TwoSpinConfig(0.7, 1.3, 2.1, SpinJ(4)))
    return max(worst, hermiticity_defect(h))


def _unitarity():
    h = build_hrot(TwoSpinConfig(0.7, 1.3, 2.1, SpinJ(3)))
    u = expm_hermitian(h, 2.7)
    return float(np.abs(u @ u.conj().T - np.eye(len(u))).max())


def _single_analytic(rng):
    worst = 0.0
    for two_j in (1, 2, 4, 16):
        spin = SpinJ(two_j)
        for _ in range(5):
            f = FieldConfig(rng.uniform(-2, 2), rng.uniform(0, 2), rng.uniform(-3, 3))
            theta0 = rng.uniform(0, math.pi)
            times = rng.uniform(0, 20, 10)
            init = InitialSpec.tilted(theta0)
            rot = spectral_series(spin, f, init.state(spin, f), times)
            lab = lab_series(spin, f, init.state(spin, f), times)
            worst = max(worst, np.abs(np.abs(rot) ** 2 - populations_tilted(spin, theta0, f, times)).max())
            surv = np.abs(lab @ init.state(spin, f).conj()) ** 2
            worst = max(worst, np.abs(surv - survival_general(spin, theta0, f, times)).max())
            jz = np.einsum("ti,ij,tj->t", lab.conj(), build_jz(spin), lab).real
            worst = max(worst, np.abs(jz - angular_momentum(spin, init, f, times)[:, 2]).max())
    return worst


def _rk4_lab():
    spin = SpinJ(4)
    f = FieldConfig(1.0, 0.4, 1.7)
    init = InitialSpec.tilted(0.6).state(spin, f)
    a = evolve(spin, f, init, PropagatorPlan("lab", "rk4"), 7.3)
    b = lab_series(spin, f, init, [7.3])[0]
    return float(np.abs(a - b).max())


def _two_spin_invariants():
    out = {}
    cfg = TwoSpinConfig(1.1, 0.8, 2.3, SpinJ(4))
    times = np.linspace(0, 30, 301)
    states = spectral_states(cfg, product_state(cfg.j, 0, 0), times)
    out["norm conservation (two-spin)"] = (np.abs(np.linalg.norm(states, axis=1) - 1).max(), 1e-12)
    out["exchange symmetry preserved"] = (antisymmetric_weight(states, cfg.j).max(), 1e-10)
    h = build_hrot(cfg)
    p = swap_operator(cfg.j)
    out["[H_rot, swap] = 0"] = (np.abs(h @ p - p @ h).max(), 1e-12)
    energy = np.einsum("ti,ij,tj->t", states.conj(), h, states).real
    out["energy conservation"] = (np.ptp(energy), 1e-10)
    rho = reduced_density(states, cfg.j)
    eigs = np.linalg.eigvalsh(rho)
    trace = np.abs(np.trace(rho, axis1=1, axis2=2).real - 1).max()
    out["reduced density PSD + unit trace"] = (max(trace, -eigs.min(), 0.0), 1e-12)
    lab = to_lab(states, cfg, times)
    out["S_A frame independence"] = (
        np.abs(entanglement_entropy(lab, cfg.j) - entanglement_entropy(states, cfg.j)).max(),
        1e-12,
    )
    # partial trace over either spin gives the same spectrum for symmetric states
    d = cfg.j.dim
    m = states.reshape(-1, d, d)
    rho_b = np.swapaxes(m, 1, 2) @ m.conj()
    out["subsystem choice immaterial"] = (
        np.abs(np.linalg.eigvalsh(rho_b) - eigs).max(),
        1e-12,
    )
    free = TwoSpinConfig(1.1, 0.0, 2.3, SpinJ(4))
    s0 = spectral_states(free, product_state(free.j, 0, 0), times)
    out["beta_perp = 0 conserves M"] = (1 - np.min(np.abs(s0[:, 0]) ** 2), 1e-12)
    return out


def _kink_trace():
    t = np.linspace(0, 4 * math.pi / math.sqrt(7), 201)
    states = spectral_states(TwoSpinConfig(3, 2, 4.5, SpinJ(1)), product_state(SpinJ(1), 0, 0), t)
    sym = np.abs(product_to_symmetric(states)) ** 2
    return max(np.abs(sym[:, i] - kink_populations(t)[i]).max() for i in range(3))


def _kink_eig():
    sol = kink_eigensystem(3.0, 4.5)
    h = build_hrot(TwoSpinConfig(3, sol.beta_perp, 4.5, SpinJ(1)))
    return max(np.linalg.norm(h @ sol.product_basis(k) - e * sol.product_basis(k)) for k, e in zip((1, 3, 4), sol.energies))


def _catalog():
    worst = 0.0
    for two_j in (2, 3, 4, 6):
        for beta_z in (-1.3, 0.0, 2.2):
            spin = SpinJ(two_j)
            for pred in resonance_catalog(spin, beta_z):
                h = build_hrot(TwoSpinConfig(beta_z, 0.0, pred.omega_over_gd, spin))
                e0 = h[0, 0].real
                v = pred.target_state
                worst = max(worst, abs((v.conj() @ h @ v).real - e0))
    return worst


def run_selftest(seed: int = 20240613) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = [
        Check("angular momentum commutators", _commutators(), 1e-12),
        Check("Casimir J^2 = J(J+1)", _casimir(), 1e-12),
        Check("Hermiticity of operators", _hermiticity(), 1e-14),
        Check("unitarity of propagator", _unitarity(), 1e-12),
        Check("single-spin closed forms vs spectral", _single_analytic(rng), 1e-9),
        Check("lab-frame RK4 vs rotating spectral", _rk4_lab(), 1e-6),
    ]
    for name, (err, tol) in _two_spin_invariants().items():
        checks.append(Check(name, float(err), tol))
    checks += [
        Check("kink closed-form populations", _kink_trace(), 1e-10),
        Check("kink eigenvectors", _kink_eig(), 1e-10),
        Check("resonance crossings", _catalog(), 1e-10),
    ]
    return checks
