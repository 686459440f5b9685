import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dipolewave.errors import TruncationError
from dipolewave.temporal import (
    PulseShape,
    TwoLevelAtom,
    excite,
    make_envelope,
    sweep_bandwidth,
)

ATOM = TwoLevelAtom(657e-9, 2 * np.pi * 400.0)
FOUR_OVER_E2 = 4 / np.e**2


def rk4_max_probability(envelope, eta, t0, t1, n=200_000, detuning=0.0):
    """Fixed-step RK4 oracle for db/dt = -(1/2 + i detuning) b + sqrt(eta) xi(t)."""
    h = (t1 - t0) / n
    b = 0j
    best = 0.0
    t = t0
    c = 0.5 + 1j * detuning
    for _ in range(n):
        k1 = -c * b + np.sqrt(eta) * envelope(t)
        k2 = -c * (b + 0.5 * h * k1) + np.sqrt(eta) * envelope(t + 0.5 * h)
        k3 = -c * (b + 0.5 * h * k2) + np.sqrt(eta) * envelope(t + 0.5 * h)
        k4 = -c * (b + h * k3) + np.sqrt(eta) * envelope(t + h)
        b += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        best = max(best, abs(b) ** 2)
    return best


# ---------------------------------------------------------------- envelopes

@pytest.mark.parametrize("shape", ["rising", "falling", "gaussian"])
def test_envelope_unit_norm(shape):
    assert make_envelope(shape).norm() == pytest.approx(1.0, abs=1e-9)


def test_rising_envelope_form():
    env = make_envelope("rising", 1.0, window=(-40.0, 0.0))
    t = np.linspace(-5, 0, 11)
    assert np.allclose(env(t), np.exp(t / 2), rtol=1e-12)
    assert env(0.5) == 0.0


@given(st.floats(0.0, 30.0), st.floats(0.2, 5.0))
def test_falling_is_time_mirror_of_rising(t, T):
    rise = make_envelope("rising", T)
    fall = make_envelope("falling", T)
    assert fall(t) == pytest.approx(rise(-t), rel=1e-12)


def test_short_window_raises_with_missing_norm():
    with pytest.raises(TruncationError) as info:
        make_envelope("rising", 1.0, window=(-5.0, 0.0))
    assert info.value.missing_norm == pytest.approx(np.exp(-5.0), rel=1e-9)


def test_envelope_argument_checks():
    with pytest.raises(ValueError):
        make_envelope("rising", 0.0)
    with pytest.raises(ValueError):
        make_envelope("custom")
    assert PulseShape.parse("Gaussian") is PulseShape.GAUSSIAN


# ---------------------------------------------------------------- excitation

def test_matched_rising_pulse_full_excitation():
    res = excite(ATOM, make_envelope("rising"), 1.0)
    assert res.max_probability == pytest.approx(1.0, abs=1e-4)
    assert res.t_max == pytest.approx(0.0, abs=1e-9)


def test_matched_falling_pulse_closed_form():
    res = excite(ATOM, make_envelope("falling"), 1.0)
    assert res.max_probability == pytest.approx(FOUR_OVER_E2, abs=1e-4)
    assert res.t_max == pytest.approx(2.0, abs=1e-3)
    t = res.t
    assert np.allclose(res.probability, t**2 * np.exp(-t), atol=1e-8)


def test_falling_pulse_against_rk4_oracle():
    env = make_envelope("falling")
    oracle = rk4_max_probability(env, 1.0, 0.0, 10.0, n=20_000)
    assert excite(ATOM, env, 1.0).max_probability == pytest.approx(oracle, abs=1e-8)


def test_gaussian_pulse_against_rk4_oracle():
    env = make_envelope("gaussian", 0.7)
    oracle = rk4_max_probability(env, 0.8, env.t_start, env.t_end, n=40_000)
    assert excite(ATOM, env, 0.8).max_probability == pytest.approx(oracle, abs=1e-7)


@pytest.mark.parametrize("eta", [0.1, 0.5, 0.94, 1.0])
def test_scaling_with_spatial_efficiency(eta):
    assert excite(ATOM, make_envelope("rising"), eta).max_probability == pytest.approx(eta, abs=1e-4)


def test_zero_efficiency_gives_zero_trajectory():
    res = excite(ATOM, make_envelope("gaussian"), 0.0)
    assert np.all(res.probability == 0.0)
    assert res.max_probability == 0.0


@pytest.mark.parametrize("eta", [-0.1, 1.1])
def test_efficiency_range_checked(eta):
    with pytest.raises(ValueError):
        excite(ATOM, make_envelope("rising"), eta)


def test_custom_samples_reproduce_rising_case():
    t = np.linspace(-40.0, 0.0, 8001)
    env = make_envelope("custom", samples=(t, 3.0 * np.exp(t / 2)))
    assert excite(ATOM, env, 1.0).max_probability == pytest.approx(1.0, abs=1e-6)
    t = np.linspace(0.0, 40.0, 8001)
    env = make_envelope("custom", samples=(t, np.exp(-t / 2)))
    assert excite(ATOM, env, 0.5).max_probability == pytest.approx(0.5 * FOUR_OVER_E2, abs=1e-6)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["rising", "falling", "gaussian"]), st.floats(0.1, 10.0),
       st.floats(0.0, 1.0), st.floats(-3.0, 3.0))
def test_probability_bounds(shape, T, eta, detuning):
    res = excite(ATOM, make_envelope(shape, T), eta, detuning=detuning, n_points=401)
    assert np.all(res.probability >= 0.0)
    assert np.all(res.probability <= 1.0 + 1e-9)


@pytest.mark.parametrize("shape", ["rising", "falling", "gaussian"])
def test_step_halving_converged(shape):
    env = make_envelope(shape)
    width = env.t_end - env.t_start
    coarse = excite(ATOM, env, 1.0, max_step=width / 500).max_probability
    fine = excite(ATOM, env, 1.0, max_step=width / 1000).max_probability
    assert abs(coarse - fine) < 1e-8


@pytest.mark.parametrize("detuning", [0.1, -0.3, 1.0])
def test_detuning_reduces_excitation(detuning):
    env = make_envelope("rising")
    res = excite(ATOM, env, 1.0, detuning=detuning)
    # closed form for the matched rising pulse: b(0) = 1 / (1 + i detuning)
    assert res.max_probability == pytest.approx(1 / (1 + detuning**2), abs=1e-8)
    assert res.max_probability < excite(ATOM, env, 1.0).max_probability


def test_atom_units():
    atom = TwoLevelAtom(657e-9, 2.0e3)
    assert atom.lifetime == pytest.approx(5e-4)
    assert atom.to_seconds(2.0) == pytest.approx(1e-3)
    with pytest.raises(ValueError):
        TwoLevelAtom(-1.0, 1.0)


# ---------------------------------------------------------------- sweeps

def test_rising_sweep_peaks_at_lifetime():
    T = np.geomspace(0.1, 10.0, 41)
    table = sweep_bandwidth(ATOM, "rising", T)
    # closed form P_max = 4 T / (1 + T)^2 for a rising pulse of time constant T
    assert np.allclose(table[:, 1], 4 * T / (1 + T) ** 2, atol=1e-8)
    k = int(np.argmax(table[:, 1]))
    assert table[k, 0] == pytest.approx(1.0, rel=1e-9)
    assert np.all(np.diff(table[: k + 1, 1]) > 0)
    assert np.all(np.diff(table[k:, 1]) < 0)


def test_falling_sweep_bounded():
    table = sweep_bandwidth(ATOM, "falling", np.geomspace(0.1, 10.0, 21))
    assert table[:, 1].max() < 0.56


@pytest.mark.parametrize("eta", [1e-300, 1e-12, 1e-6])
def test_tiny_efficiency_scales_exactly(eta):
    # amplitudes far below atol must not lose accuracy
    res = excite(ATOM, make_envelope("rising"), eta)
    assert res.max_probability / eta == pytest.approx(1.0, abs=1e-8)
