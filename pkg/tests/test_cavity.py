import json
import warnings

import numpy as np
import pytest
import sympy as sp

from dipolewave.cavity import (
    CODATA,
    Cavity,
    PhysicalConstants,
    cavity_report,
    dumps_report,
    f_g,
    f_omega,
    p_abs_cav,
    single_pass_probability,
)
from dipolewave.dipole import FULL_WEIGHTED_SOLID_ANGLE, DipoleKind, weighted_solid_angle
from dipolewave.errors import DomainError
from dipolewave.mirror import AngularDomain
from dipolewave.temporal import TwoLevelAtom


def test_single_pass_example():
    cav = Cavity(0.0, 0.01, 10e-6)
    assert single_pass_probability(1e-6, cav) == pytest.approx(3 / (8 * np.pi**2 * 100), rel=1e-12)
    assert single_pass_probability(1e-6, Cavity(0.0, 0.01, 1e3)) < 1e-17


@pytest.mark.parametrize("half_angle", [0.01, 0.03, 0.05])
def test_single_pass_matches_equatorial_cap(half_angle):
    # cone of half-angle theta around the dipole maximum, as a thin polar band
    # of equal solid angle pi theta^2 centred on the equator
    wavelength = 1e-6
    w0 = wavelength / (np.pi * half_angle)
    band = np.arcsin(half_angle**2 / 4)  # 2 pi * 2 sin(band) = pi theta^2
    dom = AngularDomain(np.pi / 2 - band, np.pi / 2 + band)
    geometric = weighted_solid_angle(DipoleKind.LINEAR_PI, dom) / FULL_WEIGHTED_SOLID_ANGLE
    assert single_pass_probability(wavelength, Cavity(0.0, 0.01, w0)) == pytest.approx(geometric, rel=0.01)


def test_f_omega_examples():
    cav = Cavity(0.99999, 0.01, 10e-6)
    assert f_omega(1e-6, cav) == pytest.approx(37.995, abs=1e-3)
    zero_r = Cavity(0.0, 0.01, 10e-6)
    assert f_omega(1e-6, zero_r) == single_pass_probability(1e-6, zero_r)
    wide = Cavity(0.99999, 0.01, 20e-6)
    assert f_omega(1e-6, wide) == pytest.approx(f_omega(1e-6, cav) / 4, rel=1e-14)


def test_unit_reflectivity_is_domain_error():
    with pytest.raises(DomainError):
        Cavity(1.0, 0.01, 1e-5)
    with pytest.raises(ValueError):
        Cavity(1.2, 0.01, 1e-5)


@pytest.mark.parametrize("value, expected", [(0.5, 0.5), (38.0, 1.0), (1.0, 1.0), (0.0, 0.0)])
def test_p_abs_cav(value, expected):
    assert p_abs_cav(value) == expected


def test_p_abs_cav_negative_rejected():
    with pytest.raises(ValueError):
        p_abs_cav(-0.1)


def test_p_abs_cav_monotone():
    xs = np.linspace(0, 5, 501)
    ys = [p_abs_cav(x) for x in xs]
    assert np.all(np.diff(ys) >= 0) and max(ys) <= 1.0


@pytest.mark.filterwarnings("ignore:beam divergence")
def test_identity_randomized():
    rng = np.random.default_rng(1)
    for _ in range(100):
        lam = rng.uniform(0.2e-6, 2e-6)
        cav = Cavity(rng.uniform(0, 1 - 1e-8), rng.uniform(0.1e-3, 0.1), rng.uniform(2e-6, 100e-6))
        figs = f_g(TwoLevelAtom(lam, 10 ** rng.uniform(4, 9)), cav)
        assert figs.F_g / figs.F_Omega == pytest.approx(1.0, rel=1e-10)
        assert figs.passes == pytest.approx(1 / (1 - cav.reflectivity))
        assert min(figs.g, figs.kappa, figs.gamma) > 0


def test_gamma_and_length_cancel():
    cav = Cavity(0.9995, 0.05, 30e-6)
    base = f_g(TwoLevelAtom(780e-9, 3.8e7), cav).F_g
    assert f_g(TwoLevelAtom(780e-9, 7.6e7), cav).F_g == pytest.approx(base, rel=1e-12)
    assert f_g(TwoLevelAtom(780e-9, 3.8e7), Cavity(0.9995, 0.5, 30e-6)).F_g == pytest.approx(base, rel=1e-12)


def test_identity_independent_of_constants():
    odd = PhysicalConstants(speed_of_light=1.0, hbar=3.0, epsilon_0=0.2)
    figs = f_g(TwoLevelAtom(1.3, 0.1), Cavity(0.9, 2.0, 5.0), constants=odd)
    assert figs.F_g == pytest.approx(f_omega(1.3, Cavity(0.9, 2.0, 5.0)), rel=1e-12)


def test_identity_symbolic():
    lam, w0, L, R, gamma, c, hbar, eps0 = sp.symbols("lambda w0 L R gamma c hbar epsilon0", positive=True)
    omega = 2 * sp.pi * c / lam
    mu2 = 3 * sp.pi * eps0 * hbar * c**3 * gamma / omega**3
    g2 = mu2 * omega / (2 * hbar * eps0 * sp.pi * w0**2 * L)
    kappa = (1 - R) * c / L
    F_g = g2 / (kappa * gamma)
    F_omega = 3 * lam**2 / (8 * sp.pi**2 * w0**2 * (1 - R))
    assert sp.simplify(F_g - F_omega) == 0


def test_paraxial_warning():
    cav = Cavity(0.9, 0.01, 1e-6)
    with pytest.warns(UserWarning):
        single_pass_probability(1e-6, cav)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        single_pass_probability(1e-6, Cavity(0.9, 0.01, 1e-5))


def test_report_json():
    rep = cavity_report(1e-6, Cavity(0.99999, 0.01, 1e-5))
    data = json.loads(dumps_report(rep))
    assert data["p_abs_cav"] == 1.0
    assert data["identity_ratio"] == 1.0
    assert {"N", "F_Omega", "F_g", "g", "kappa", "gamma"} <= set(data["figures"])
    assert data["inputs"]["reflectivity"] == 0.99999
    assert CODATA.speed_of_light == 299792458.0
