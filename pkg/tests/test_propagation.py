import numpy as np
import pytest

from ocpulse import propagation as prop
from ocpulse.pulses import EnsembleDistribution, PulseWaveform, hard_pulse, waveform_template
from ocpulse.su2 import SIGMA_X, SIGMA_Y, SIGMA_Z, expm_su2, rotation_matrices

A_MAX = 2 * np.pi * 5000.0


def test_step_hamiltonian_components():
    H = prop.step_hamiltonian(A_MAX, 0.0, 0.0)
    assert np.allclose(H, 0.5 * A_MAX * SIGMA_X)
    H = prop.step_hamiltonian(A_MAX, np.pi / 2, 0.0)
    assert np.allclose(H, 0.5 * A_MAX * SIGMA_Y, atol=1e-12 * A_MAX)
    H = prop.step_hamiltonian(0.0, 0.0, 2 * np.pi * 800.0)
    assert np.allclose(H, 0.5 * 2 * np.pi * 800.0 * SIGMA_Z)
    # rf scale multiplies only the transverse part
    H = prop.step_hamiltonian(A_MAX, 0.0, 1e3, omega1_scale=0.5)
    assert np.allclose(H, 0.25 * A_MAX * SIGMA_X + 0.5e3 * SIGMA_Z)


def test_free_propagator_matches_z_rotation():
    dw = 2 * np.pi * 1234.0
    t = 3.7e-4
    assert np.allclose(
        prop.free_propagator(dw, t), expm_su2([0, 0, 1], dw * t), atol=1e-14
    )
    batch = prop.free_propagator([0.0, dw, -dw], t)
    assert batch.shape == (3, 2, 2)
    assert np.allclose(batch[0], np.eye(2))
    assert np.allclose(batch[2], batch[1].conj())


def test_hard_pulse_propagator_on_resonance():
    p = hard_pulse(np.pi, np.pi / 2, A_MAX)
    U = prop.pulse_propagator(p, 0.0)
    assert np.allclose(U, expm_su2([0, 1, 0], np.pi), atol=1e-12)
    # half rf amplitude gives half the nutation
    U = prop.pulse_propagator(p, 0.0, omega1_scale=0.5)
    assert np.allclose(U, expm_su2([0, 1, 0], np.pi / 2), atol=1e-12)


def test_hard_pulse_propagator_off_resonance_closed_form():
    # offset equal to the rf amplitude: effective field along (y+z)/sqrt(2),
    # nutation angle sqrt(2) * pi over the nominal 100 us
    p = hard_pulse(np.pi, np.pi / 2, A_MAX)
    U = prop.pulse_propagator(p, A_MAX)
    expect = expm_su2([0, 1 / np.sqrt(2), 1 / np.sqrt(2)], np.sqrt(2) * np.pi)
    assert np.allclose(U, expect, atol=1e-12)


def test_guards_are_free_precession():
    dw = 2 * np.pi * 2000.0
    p = waveform_template(3, 1e-5, A_MAX, pre_delay=4e-5, post_delay=2e-5)  # zero amplitude
    U = prop.pulse_propagator(p, dw)
    assert np.allclose(U, prop.free_propagator(dw, p.total_duration), atol=1e-13)


def test_pulse_propagator_is_ordered_step_product():
    rng = np.random.default_rng(5)
    p = PulseWaveform(
        2e-6, rng.uniform(0, A_MAX, 6), rng.uniform(0, 2 * np.pi, 6), A_MAX,
        pre_delay=1e-5, post_delay=3e-5,
    )
    offs = np.array([0.0, 2 * np.pi * 3e3, -2 * np.pi * 7e3])
    steps = prop.step_propagators(p, offs, np.ones(3))
    assert steps.shape == (6, 3, 2, 2)
    U = prop.free_propagator(offs, p.pre_delay)
    for j in range(6):
        U = steps[j] @ U  # later steps multiply from the left
    U = prop.free_propagator(offs, p.post_delay) @ U
    assert np.allclose(prop.pulse_propagators(p, offs, np.ones(3)), U, atol=1e-13)


def test_offset_sign_symmetry_for_x_phase_pulses():
    # sigma_x H(dw) sigma_x = H(-dw) when all phases are 0
    rng = np.random.default_rng(6)
    p = PulseWaveform(2e-6, rng.uniform(0, A_MAX, 5), np.zeros(5), A_MAX)
    dw = 2 * np.pi * 4.2e3
    Up = prop.pulse_propagator(p, dw)
    Um = prop.pulse_propagator(p, -dw)
    assert np.allclose(Um, SIGMA_X @ Up @ SIGMA_X, atol=1e-12)


def test_ideal_pulse_sentinel():
    offs = 2 * np.pi * np.array([-5e3, 0.0, 1e3])
    U = prop.pulse_propagators(None, offs, np.ones(3))
    for i in range(3):
        assert np.allclose(U[i], prop.IDEAL_PI_Y)
    assert np.allclose(prop.IDEAL_PI_Y, expm_su2([0, 1, 0], np.pi))


def test_ideal_cycle_is_minus_identity_everywhere():
    offs = 2 * np.pi * np.array([-8e3, -1.3e3, 0.0, 0.4e3, 8e3])
    C = prop.cycle_propagators(None, 1e-3, offs, np.ones(5))
    for i in range(5):
        assert np.allclose(C[i], -np.eye(2), atol=1e-12)


def test_hard_cycle_on_resonance_is_minus_identity():
    p = hard_pulse(np.pi, np.pi / 2, A_MAX)
    C = prop.cycle_propagator(p, 1e-3, 0.0)
    assert np.allclose(C, -np.eye(2), atol=1e-12)


def test_cycle_is_square_of_half_cycle():
    # f(tau) U f(2 tau) U f(tau) == (f(tau) U f(tau))^2
    p = hard_pulse(np.pi, np.pi / 2, A_MAX)
    offs = 2 * np.pi * np.array([-6e3, 1.7e3])
    scales = np.array([1.05, 0.92])
    half = prop.half_cycle_propagators(p, 1e-3, offs, scales)
    full = prop.cycle_propagators(p, 1e-3, offs, scales)
    assert np.allclose(full, half @ half, atol=1e-13)


def test_negative_tau_rejected():
    with pytest.raises(ValueError, match="tau"):
        prop.cycle_propagators(None, -1e-3, [0.0], [1.0])
    with pytest.raises(ValueError, match="tau"):
        prop.half_cycle_propagators(None, -1e-3, [0.0], [1.0])


def test_ensemble_propagators_pointwise():
    p = hard_pulse(np.pi, np.pi / 2, A_MAX)
    d = EnsembleDistribution.product(2 * np.pi * np.array([-2e3, 0.0, 5e3]), [0.9, 1.1])
    ens = prop.ensemble_propagators(p, d)
    assert len(ens) == 6
    for i, (dw, s, w, U) in enumerate(ens):
        assert dw == d.offsets[i] and s == d.rf_scales[i] and w == d.weights[i]
        assert np.allclose(U, prop.pulse_propagator(p, dw, s), atol=1e-14)


def test_trajectory_times_layout():
    p = waveform_template(4, 1e-5, A_MAX, pre_delay=2e-5, post_delay=3e-5)
    t = prop.trajectory_times(p)
    assert t.shape == (7,)
    assert np.allclose(t, [0.0, 2e-5, 3e-5, 4e-5, 5e-5, 6e-5, 9e-5])


def test_bloch_trajectory_hard_90_about_y():
    p = hard_pulse(np.pi / 2, np.pi / 2, A_MAX)
    traj = prop.bloch_trajectory(p, 0.0)
    assert traj.shape == (4, 3)
    assert np.allclose(traj[0], [0, 0, 1])
    assert np.allclose(traj[-1], [1, 0, 0], atol=1e-12)  # y rotation tips z onto x
    assert np.allclose(np.linalg.norm(traj, axis=1), 1.0, atol=1e-12)


def test_bloch_trajectory_matches_propagator_endpoint():
    rng = np.random.default_rng(7)
    p = PulseWaveform(
        2e-6, rng.uniform(0, A_MAX, 8), rng.uniform(0, 2 * np.pi, 8), A_MAX,
        pre_delay=5e-6, post_delay=1e-5,
    )
    m_in = np.array([0.6, -0.48, 0.64])
    m_in /= np.linalg.norm(m_in)
    dw, s = 2 * np.pi * 3.1e3, 1.07
    traj = prop.bloch_trajectory(p, dw, s, m_in)
    R = rotation_matrices(prop.pulse_propagator(p, dw, s))
    assert np.allclose(traj[-1], R @ m_in, atol=1e-12)
    assert np.allclose(np.linalg.norm(traj, axis=1), 1.0, atol=1e-10)


def test_bloch_trajectory_free_precession_sense():
    # pure guard at offset dw for time t rotates the Bloch vector by
    # +dw*t about z (x toward y), same convention as expm_su2
    p = waveform_template(1, 1e-9, A_MAX, pre_delay=0.25 / 1000.0)
    dw = 2 * np.pi * 1000.0  # quarter turn over the pre guard
    traj = prop.bloch_trajectory(p, dw, m_in=(1.0, 0.0, 0.0))
    assert np.allclose(traj[1], [0, 1, 0], atol=1e-5)


def test_bloch_trajectory_input_validation():
    p = hard_pulse(np.pi, 0.0, A_MAX)
    with pytest.raises(ValueError, match="3-vector"):
        prop.bloch_trajectory(p, 0.0, m_in=(1.0, 0.0))
    with pytest.raises(ValueError, match="unit"):
        prop.bloch_trajectory(p, 0.0, m_in=(0.5, 0.0, 0.0))
