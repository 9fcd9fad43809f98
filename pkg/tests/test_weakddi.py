import math

import numpy as np
import pytest

from spinrot.errors import ValidationError
from spinrot.halfspin import FieldConfig
from spinrot.spin import SpinJ
from spinrot.weakddi import (
    SI_COUPLING_PER_GJ2,
    Geometry,
    check_commensurate,
    vdd_instantaneous,
    vdd_time_average,
    vdd_time_average_si,
)

MAGIC = math.acos(1 / math.sqrt(3))


def smooth_time_average(geom, f, periods=1000):
    """Window-weighted long-time average; converges much faster than a plain mean."""
    horizon = periods * max(2 * math.pi / f.omega_eff, 2 * math.pi / abs(f.omega_rot))
    fastest = 2 * f.omega_eff + 2 * abs(f.omega_rot)
    n = int(horizon * fastest / (2 * math.pi) * 20)
    s = (np.arange(n) + 0.5) / n
    w = np.exp(-1 / (s * (1 - s)))
    w /= w.sum()
    return float(w @ vdd_instantaneous(geom, f, s * horizon))


def random_config(rng):
    while True:
        f = FieldConfig(rng.uniform(0.2, 3), rng.uniform(0.1, 2), rng.uniform(0.2, 4) * rng.choice([-1, 1]))
        r = abs(f.omega_rot) / f.omega_eff
        if min(abs(r - 1), abs(r - 2), abs(r - 0.5)) > 0.05:
            break
    geom = Geometry(rng.uniform(0.5, 2), rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi), rng.uniform(0, math.pi), 0, SpinJ(3))
    return geom, f


def test_geometry_validation():
    with pytest.raises(ValidationError):
        Geometry(0.0, 0.3)
    with pytest.raises(ValidationError):
        Geometry(1.0, 0.3, n=3, j=SpinJ(2))
    assert Geometry(1.0, 0.3, n=1, j=SpinJ(4)).mu == 1.0
    assert Geometry(1.0, 0.3, j="3/2").j == SpinJ(3)


def test_instantaneous_static_configurations():
    static = FieldConfig(1.0, 0.0, 0.0)
    assert vdd_instantaneous(Geometry(1.0, 0.0, j=SpinJ(2)), static, 0.3) == pytest.approx(-2.0)
    assert vdd_instantaneous(Geometry(1.0, math.pi / 2, j=SpinJ(2)), static, 0.3) == pytest.approx(1.0)
    assert vdd_instantaneous(Geometry(1.0, MAGIC, j=SpinJ(2)), static, 0.3) == pytest.approx(0.0, abs=1e-15)
    assert vdd_instantaneous(Geometry(2.0, 0.0, j=SpinJ(4)), static, 0.0, coupling=3.0) == pytest.approx(-3 * 2 * 4 / 8)


def test_average_examples():
    # omega_perp = 0 and omega_z > Omega: theta_B = 0, static aligned moments
    f = FieldConfig(1.0, 0.0, 0.37)
    geom = Geometry(1.0, 0.0, theta0=0.0, j=SpinJ(2))
    assert vdd_time_average(geom, f) == pytest.approx(-2.0)
    f = FieldConfig(1.3, 0.5 * math.sqrt(2), 0.8)
    assert f.theta_b == pytest.approx(MAGIC)
    for tp in (0.0, 0.4, 1.2):
        for theta0 in (0.0, 0.9):
            assert abs(vdd_time_average(Geometry(1.0, tp, theta0=theta0), f)) <= 1e-15


def test_spec_example_against_oracle():
    geom = Geometry(1.0, 1.1, theta0=0.4, j=SpinJ(2))
    f = FieldConfig(1.0, 0.8, 2.3)
    exact = vdd_time_average(geom, f)
    assert abs(smooth_time_average(geom, f) - exact) <= 1e-3 * abs(exact)


def test_random_against_oracle(rng):
    for _ in range(6):
        geom, f = random_config(rng)
        exact = vdd_time_average(geom, f)
        assert abs(smooth_time_average(geom, f, periods=300) - exact) <= 1e-3 * abs(exact)


def test_phi_independence_and_factorization(rng):
    geom, f = random_config(rng)
    values = [vdd_time_average(Geometry(geom.r, geom.theta_prime, phi, geom.theta0, 0, geom.j), f) for phi in np.linspace(0, 2 * math.pi, 17)]
    assert np.ptp(values) <= 1e-12
    base = vdd_time_average(Geometry(1.0, 0.0, 0.0, geom.theta0, 0, geom.j), f)
    for tp in np.linspace(0.1, 3.0, 7):
        ratio = vdd_time_average(Geometry(1.0, tp, 0.0, geom.theta0, 0, geom.j), f) / base
        assert ratio == pytest.approx((1 - 3 * math.cos(tp) ** 2) / -2, abs=1e-14)


def test_adiabatic_limit():
    f = FieldConfig(1.0, 0.6, 1e-5)
    assert f.theta_b == pytest.approx(f.phi0, abs=1e-4)
    geom = Geometry(1.0, 0.0, theta0=f.phi0, j=SpinJ(2))
    field = (3 * math.cos(f.phi0) ** 2 - 1) / 2
    assert vdd_time_average(geom, f) == pytest.approx(-2 * field, rel=1e-4)


def test_commensurate_rejection():
    f = FieldConfig(1.0, 0.5, 0.0)
    with pytest.raises(ValidationError, match="non-zero"):
        check_commensurate(f)
    with pytest.raises(ValidationError, match="omega' = 0"):
        check_commensurate(FieldConfig(1.0, 0.0, 1.0))
    base = FieldConfig(1.0, 0.5, 3.0)
    for k in (1.0, 2.0, 0.5):
        # pick omega_z so that |Omega| = k * omega'
        omega = 3.0
        w = omega / k
        wz = omega + math.sqrt(w * w - 0.25) if w > 0.5 else None
        if wz is None:
            continue
        with pytest.raises(ValidationError, match="commensurate"):
            vdd_time_average(Geometry(1.0, 0.3), FieldConfig(wz, 0.5, omega))
    vdd_time_average(Geometry(1.0, 0.3), base)


def test_si_wrapper():
    geom = Geometry(1e-6, 0.3, theta0=0.2, j=SpinJ(12))
    f = FieldConfig(1.0, 0.5, 3.0)
    assert vdd_time_average_si(geom, f, 1.25) == pytest.approx(SI_COUPLING_PER_GJ2 * 1.25**2 * vdd_time_average(geom, f))
    assert SI_COUPLING_PER_GJ2 == pytest.approx(1e-7 * 9.2740100783e-24**2, rel=1e-9)
