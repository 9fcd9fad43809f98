import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from spinrot.errors import ValidationError
from spinrot.halfspin import (
    FieldConfig,
    HalfSpinAmplitudes,
    assemble_spinJ_state,
    propagate_halfspin,
    to_lab_frame,
)
from spinrot.propagate import spectral_series
from spinrot.spin import SpinJ

from conftest import random_field

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def _expm_oracle(amp, f, t):
    # (up, down) ordering: sigma_z = diag(+1, -1)
    h = 0.5 * f.omega_perp * SX + 0.5 * f.detuning * SZ
    return expm(-1j * t * h) @ np.array([amp.up, amp.down])


def test_field_config_validation():
    with pytest.raises(ValidationError):
        FieldConfig(1.0, -0.1)
    with pytest.raises(ValidationError):
        FieldConfig(math.nan, 0.1)
    f = FieldConfig(1.0, 1.0, 3.0)
    assert f.omega_eff == pytest.approx(math.sqrt(5))
    assert f.phi0 == pytest.approx(math.pi / 4)
    # theta_B lands in (pi/2, pi) when Omega > omega_z
    assert math.pi / 2 < f.theta_b < math.pi


def test_t_zero_is_identity():
    amp = HalfSpinAmplitudes(0.6, 0.8j)
    out = propagate_halfspin(amp, FieldConfig(1.0, 0.3, 0.4), 0.0)
    assert out == amp


def test_resonant_flip():
    f = FieldConfig(1.3, 0.2, 1.3)
    out = propagate_halfspin(HalfSpinAmplitudes.spin_down(), f, math.pi / f.omega_perp)
    assert abs(out.up - (-1j)) < 1e-12
    assert abs(out.down) < 1e-12


def test_against_expm(rng):
    for _ in range(50):
        f = random_field(rng)
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        amp = HalfSpinAmplitudes(v[0], v[1])
        t = rng.uniform(0, 30)
        out = propagate_halfspin(amp, f, t)
        np.testing.assert_allclose([out.up, out.down], _expm_oracle(amp, f, t), atol=1e-12)


def test_zero_effective_field():
    amp = HalfSpinAmplitudes.tilted_down(0.4)
    assert propagate_halfspin(amp, FieldConfig(2.0, 0.0, 2.0), 5.0) == amp


def test_rejects_unnormalized():
    with pytest.raises(ValidationError):
        propagate_halfspin(HalfSpinAmplitudes(1.0, 1.0), FieldConfig(1, 1), 1.0)


def test_to_lab_identities(rng):
    amp = HalfSpinAmplitudes(0.6, 0.8j)
    assert to_lab_frame(amp, 1.7, 0.0) == amp
    assert to_lab_frame(amp, 0.0, 4.2) == amp
    for _ in range(10):
        out = to_lab_frame(amp, rng.uniform(-3, 3), rng.uniform(0, 10))
        assert abs(abs(out.up) ** 2 - 0.36) < 1e-15
        assert abs(abs(out.down) ** 2 - 0.64) < 1e-15


def test_assemble_examples():
    for two_j in (1, 2, 7):
        psi = assemble_spinJ_state(HalfSpinAmplitudes.spin_down(), SpinJ(two_j))
        expected = np.zeros(two_j + 1)
        expected[0] = 1
        np.testing.assert_array_equal(psi, expected)
    r = 1 / math.sqrt(2)
    psi = assemble_spinJ_state(HalfSpinAmplitudes(r, r), SpinJ(2))
    np.testing.assert_allclose(psi, [0.5, r, 0.5], atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 20), st.floats(0, math.pi), st.floats(-math.pi, math.pi))
def test_assemble_normalized(two_j, theta, phase):
    amp = HalfSpinAmplitudes(math.cos(theta / 2) * np.exp(1j * phase), math.sin(theta / 2))
    assert abs(np.linalg.norm(assemble_spinJ_state(amp, SpinJ(two_j))) - 1) < 1e-12


def test_composition_law(rng):
    for _ in range(20):
        f = random_field(rng)
        amp = HalfSpinAmplitudes.tilted_down(rng.uniform(0, math.pi))
        t1, t2 = rng.uniform(0, 10, 2)
        a = propagate_halfspin(amp, f, t1 + t2)
        b = propagate_halfspin(propagate_halfspin(amp, f, t1), f, t2)
        assert abs(a.up - b.up) < 1e-12 and abs(a.down - b.down) < 1e-12


@pytest.mark.parametrize("two_j", [1, 2, 3, 8, 16])
def test_mapping_commutes_with_numeric_evolution(rng, two_j):
    spin = SpinJ(two_j)
    for _ in range(5):
        f = random_field(rng)
        amp = HalfSpinAmplitudes.tilted_down(rng.uniform(0, math.pi))
        t = rng.uniform(0, 15)
        via_gas = assemble_spinJ_state(propagate_halfspin(amp, f, t), spin)
        numeric = spectral_series(spin, f, assemble_spinJ_state(amp, spin), [t])[0]
        assert np.abs(via_gas - numeric).max() <= 1e-10
