import dataclasses

import numpy as np
import pytest
import scipy.fft
from scipy.linalg import expm

from src.comb.grid import CouplingProfile, RingGrid
from src.comb.lle import (DimerField, EvolutionConfig, LLEParams, evolve, flat_state,
                          homogeneous_steady_states, seeded_initial_field)
from src.errors import BlowupError, InvalidParameterError


def smooth_field(grid, a=0.6, b=0.3):
    theta = grid.theta
    return DimerField(a + 0.1 * np.cos(theta) + 0.05j * np.sin(2 * theta),
                      b * np.exp(1j * theta) + 0.02 * np.cos(3 * theta))


# --- grid and coupling profiles -----------------------------------------------------

def test_ring_grid_modes():
    grid = RingGrid(16)
    assert list(grid.modes[:3]) == [0, 1, 2]
    assert grid.modes[8] == -8
    assert list(grid.centered_modes) == list(range(-8, 8))
    assert np.array_equal(grid.centered(grid.modes), grid.centered_modes)


@pytest.mark.parametrize('m', [0, 8, 24, 100, 17.5])
def test_ring_grid_rejects_bad_sizes(m):
    with pytest.raises(InvalidParameterError):
        RingGrid(m)


def test_coupling_profile_values():
    grid = RingGrid(32)
    cos = CouplingProfile.cosine(8.0, 2.0)
    assert cos.values(grid)[0] == pytest.approx(10.0)
    assert cos.centered_values(grid)[0] == pytest.approx(6.0)
    assert cos.mean(grid) == pytest.approx(8.0)

    table = CouplingProfile.from_table(cos.centered_values(grid))
    assert np.allclose(table.values(grid), cos.values(grid))
    # linear interpolation between integer modes, periodic across the zone edge
    assert table.evaluate(0.5, 32) == pytest.approx(0.5 * (cos.evaluate(0, 32) + cos.evaluate(1, 32)))
    assert table.evaluate(15.5, 32) == pytest.approx(0.5 * (cos.evaluate(15, 32) + cos.evaluate(-16, 32)))


def test_coupling_with_modulus():
    grid = RingGrid(16)
    assert CouplingProfile.constant(1.0).with_modulus(3.0) == CouplingProfile.constant(3.0)
    assert CouplingProfile.cosine(8.0, 2.0).with_modulus(6.0).a1 == 2.0
    table = CouplingProfile.from_table(np.arange(16.0))
    assert table.with_modulus(0.0).mean(grid) == pytest.approx(0.0)


def test_table_length_must_match_grid():
    with pytest.raises(InvalidParameterError):
        CouplingProfile.from_table([1.0, 2.0]).values(RingGrid(16))
    with pytest.raises(InvalidParameterError):
        CouplingProfile('sawtooth')


# --- flat states ----------------------------------------------------------------------

def test_homogeneous_steady_states_double_root():
    roots = homogeneous_steady_states(2.0, 2.0)
    assert roots == pytest.approx([1.0, 1.0, 2.0], abs=1e-6)
    for rho in roots:
        assert abs(rho * (1.0 + (2.0 - rho) ** 2) - 2.0) < 1e-10


def test_homogeneous_steady_states_zero_power():
    assert homogeneous_steady_states(1.5, 0.0) == [0.0]
    assert len(homogeneous_steady_states(0.0, 0.5)) == 1
    with pytest.raises(InvalidParameterError):
        homogeneous_steady_states(1.0, -1.0)


def test_flat_state_solves_steady_equation():
    params = LLEParams(detuning=3.0, pump_amplitude=1.6)
    for rho in homogeneous_steady_states(3.0, params.power):
        psi = flat_state(params, rho, 3.0)
        assert abs(psi) ** 2 == pytest.approx(rho)
        assert abs(-(1 + 3j) * psi + 1j * abs(psi) ** 2 * psi + params.pump_amplitude) < 1e-9


def test_seeded_initial_field():
    grid = RingGrid(32)
    params = LLEParams(detuning=1.0, pump_amplitude=0.9)
    f1 = seeded_initial_field(params, grid, seed=5)
    f2 = seeded_initial_field(params, grid, seed=5)
    assert np.array_equal(f1.A, f2.A) and np.array_equal(f1.B, f2.B)
    assert not np.array_equal(f1.A, seeded_initial_field(params, grid, seed=6).A)
    assert np.max(np.abs(f1.B)) < 1e-3

    zero = seeded_initial_field(params.replace(pump_amplitude=0.0), grid, seed=5)
    assert not np.any(zero.A) and not np.any(zero.B)


# --- integrator -----------------------------------------------------------------------

def test_zero_field_stays_zero():
    grid = RingGrid(16)
    params = LLEParams(detuning=1.0, pump_amplitude=0.0, dispersion_d2=0.1,
                       coupling=CouplingProfile.cosine(1.0, 0.5))
    traj = evolve(DimerField.zeros(grid), params, EvolutionConfig(dt=0.01, steps=200, record_every=50))
    assert len(traj) == 5
    assert list(traj.times) == pytest.approx([0.0, 0.5, 1.0, 1.5, 2.0])
    assert not np.any(traj.snapshots)
    assert not traj.flagged


def test_dimer_field_is_read_only():
    grid = RingGrid(16)
    values = np.full(16, 0.5 + 0j)
    field = DimerField(values, np.zeros(16))
    values[0] = 9.0
    assert field.A[0] == 0.5
    with pytest.raises(ValueError):
        field.A[0] = 1.0
    with pytest.raises(dataclasses.FrozenInstanceError):
        field.A = np.zeros(16)

    start = smooth_field(grid)
    before = start.A.copy(), start.B.copy()
    evolve(start, LLEParams(detuning=1.0, pump_amplitude=0.8, coupling=CouplingProfile.cosine(1.0, 0.5)),
           EvolutionConfig(dt=0.01, steps=50, record_every=10))
    assert np.array_equal(start.A, before[0]) and np.array_equal(start.B, before[1])


def test_flat_state_is_stationary():
    grid = RingGrid(16)
    params = LLEParams(detuning=0.0, pump_amplitude=np.sqrt(0.5))
    rho = homogeneous_steady_states(0.0, params.power)[-1]
    psi = flat_state(params, rho, 0.0)
    start = DimerField(np.full(16, psi), np.zeros(16))
    traj = evolve(start, params, EvolutionConfig(dt=1e-4, steps=10000, record_every=10000))
    drift = np.max(np.abs(traj.final.A - psi)) / abs(psi)
    assert drift < 1e-8
    assert not np.any(traj.final.B)


def test_conservative_limit_preserves_norm():
    grid = RingGrid(32)
    params = LLEParams(detuning=0.7, pump_amplitude=0.0, dispersion_d2=0.05, loss=0.0,
                       coupling=CouplingProfile.cosine(1.0, 0.4))
    start = smooth_field(grid)
    traj = evolve(start, params, EvolutionConfig(dt=1e-3, steps=10000, record_every=2500))
    norms = np.array([traj.field(i).norm() for i in range(len(traj))])
    assert np.max(np.abs(norms - start.norm())) / start.norm() < 1e-8


def test_strang_splitting_is_second_order():
    grid = RingGrid(32)
    params = LLEParams(detuning=1.0, pump_amplitude=0.8, dispersion_d2=0.02,
                       coupling=CouplingProfile.cosine(0.6, 0.3))
    start = smooth_field(grid, a=0.9)

    def endpoint(dt):
        steps = int(round(1.0 / dt))
        return evolve(start, params, EvolutionConfig(dt=dt, steps=steps, record_every=steps)).snapshots[-1]

    reference = endpoint(0.00125)
    coarse = np.max(np.abs(endpoint(0.02) - reference))
    fine = np.max(np.abs(endpoint(0.01) - reference))
    assert 3.5 <= coarse / fine <= 4.5


def test_linear_regime_matches_matrix_exponential():
    grid = RingGrid(16)
    params = LLEParams(detuning=0.5, pump_amplitude=0.7, dispersion_d2=0.1, kerr=False,
                       coupling=CouplingProfile.cosine(1.0, 0.5))
    start = smooth_field(grid)
    steps, dt = 200, 0.01
    traj = evolve(start, params, EvolutionConfig(dt=dt, steps=steps, record_every=steps))

    t = steps * dt
    a_hat = scipy.fft.fft(start.A, norm='forward')
    b_hat = scipy.fft.fft(start.B, norm='forward')
    k = grid.modes.astype(float)
    a_k = params.coupling.values(grid)
    expected_a = np.empty(16, complex)
    expected_b = np.empty(16, complex)
    for i in range(16):
        lam = -1.0 - 1j * (0.5 + 0.05 * k[i] ** 2)
        gen = np.zeros((3, 3), complex)
        gen[:2, :2] = [[lam, 1j * a_k[i]], [1j * a_k[i], lam]]
        if i == 0:
            gen[0, 2] = params.pump_amplitude
        out = expm(t * gen) @ np.array([a_hat[i], b_hat[i], 1.0])
        expected_a[i], expected_b[i] = out[0], out[1]

    final = traj.final
    assert np.allclose(scipy.fft.fft(final.A, norm='forward'), expected_a, atol=1e-10)
    assert np.allclose(scipy.fft.fft(final.B, norm='forward'), expected_b, atol=1e-10)


def test_symmetric_dimer_keeps_fields_identical():
    grid = RingGrid(32)
    params = LLEParams(detuning=1.5, pump_amplitude=1.2, dispersion_d2=0.03, symmetric_pump=True,
                       coupling=CouplingProfile.cosine(0.8, 0.2))
    theta = grid.theta
    same = 0.5 + 0.1 * np.cos(theta) + 0.03j * np.sin(3 * theta)
    traj = evolve(DimerField(same, same.copy()), params, EvolutionConfig(dt=0.005, steps=2000, record_every=400))
    for snap in traj.snapshots:
        assert np.array_equal(snap[0], snap[1])


def test_zero_coupling_decouples_fields():
    grid = RingGrid(16)
    params = LLEParams(detuning=1.0, pump_amplitude=1.0, dispersion_d2=0.05)
    start = DimerField(smooth_field(grid).A, np.zeros(16))
    traj = evolve(start, params, EvolutionConfig(dt=0.01, steps=300, record_every=100))
    assert not np.any(traj.snapshots[:, 1, :])
    assert np.any(traj.final.A != start.A)


def test_blowup_raises_with_flagged_trajectory():
    grid = RingGrid(16)
    params = LLEParams(detuning=0.0, pump_amplitude=10.0)
    config = EvolutionConfig(dt=0.01, steps=100, record_every=10, blowup_bound=1.0)
    with pytest.raises(BlowupError) as info:
        evolve(DimerField.zeros(grid), params, config)
    traj = info.value.trajectory
    assert traj.flagged
    assert traj.blowup_step == info.value.step
    assert 0 < traj.blowup_step < 100


@pytest.mark.parametrize('kwargs', [
    {'dt': 0.0}, {'dt': -1e-3}, {'steps': 0}, {'record_every': 0}, {'method': 'rk4'},
])
def test_evolution_config_validation(kwargs):
    with pytest.raises(InvalidParameterError):
        EvolutionConfig(**kwargs)


@pytest.mark.parametrize('kwargs', [
    {'pump_amplitude': -1.0}, {'loss': -0.5}, {'kerr_sign': 2}, {'detuning': float('nan')},
])
def test_lle_params_validation(kwargs):
    base = {'detuning': 1.0, 'pump_amplitude': 1.0}
    base.update(kwargs)
    with pytest.raises(InvalidParameterError):
        LLEParams(**base)
