import math

import numpy as np
import pytest

from conftest import random_phases
from phasesynth.errors import ConfigError, DimensionError, MalformedStateError, ResourceCapError
from phasesynth.phasecore import PhaseImage
from phasesynth.statevec import (
    StateVector,
    apply_diagonal,
    extract_phases_exact,
    image_state_amplitudes,
    prepare_frqi_angle_state,
    prepare_image_state,
    reindex_to_mpe_form,
    relative_phases,
)
from phasesynth.synthesis import DiagonalUnitary

H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def _dense_reference(phases, n):
    """Kronecker-product circuit: H on every qubit, then diag(1, e^{i t_k}) per pixel."""
    q = 2 * n + 1
    psi = np.zeros(2 ** q, dtype=complex)
    psi[0] = 1.0
    layer = np.array([[1.0]])
    for _ in range(q):
        layer = np.kron(layer, H)
    psi = layer @ psi
    npix = 1 << (2 * n)
    for k, t in enumerate(phases):
        diag = np.ones(2 ** q, dtype=complex)
        diag[npix + k] = np.exp(1j * t)
        psi = diag * psi
    return psi


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_circuit_matches_closed_form_and_dense(rng, n):
    ph = random_phases(rng, 1 << (2 * n))
    state, trace = prepare_image_state(PhaseImage(n, ph))
    assert trace.hadamard_count == 2 * n + 1
    assert trace.controlled_rotation_count == 4 ** n
    np.testing.assert_allclose(state.amps, image_state_amplitudes(ph, n), rtol=0, atol=1e-12)
    np.testing.assert_allclose(state.amps, _dense_reference(ph, n), rtol=0, atol=1e-12)
    assert state.is_normalized()


def test_amplitude_scale():
    state, _ = prepare_image_state(PhaseImage(1, [0.2, 0.4, 0.6, 0.8]))
    assert state.amps[0] == pytest.approx(1 / (2 * math.sqrt(2)))
    assert state.amps[4] == pytest.approx(np.exp(0.2j) / (2 * math.sqrt(2)))


def test_prepare_rejects_bad_inputs():
    with pytest.raises(ConfigError):
        prepare_image_state(PhaseImage(0, [0.0]))
    with pytest.raises(ResourceCapError):
        prepare_image_state(PhaseImage(7, np.full(4 ** 7, 0.5)))


def test_extract_round_trip(rng):
    ph = random_phases(rng, 64)
    state, _ = prepare_image_state(PhaseImage(3, ph))
    back = extract_phases_exact(state)
    assert back.n == 3
    np.testing.assert_allclose(back.phases, ph, atol=1e-13)


def test_reindex_example():
    state, _ = prepare_image_state(PhaseImage(1, [0.1, 0.2, 0.3, 0.4]))
    mpe = reindex_to_mpe_form(state)
    assert mpe.dim == 5
    expected = np.concatenate([[1.0], np.exp(1j * np.array([0.1, 0.2, 0.3, 0.4]))]) / math.sqrt(5)
    np.testing.assert_allclose(mpe.amps, expected, atol=1e-14)


def test_apply_diagonal_and_inverse(rng):
    ph = random_phases(rng, 16)
    state, _ = prepare_image_state(PhaseImage(2, ph))
    U = DiagonalUnitary(np.concatenate([np.zeros(16), rng.uniform(-3, 3, 16)]))
    out = apply_diagonal(U, state)
    assert abs(out.norm - 1) < 1e-12
    np.testing.assert_allclose(apply_diagonal(U.inverse(), out).amps, state.amps, atol=1e-15)
    np.testing.assert_allclose(
        relative_phases(out), np.mod(ph + U.angle[16:], 2 * math.pi), atol=1e-12)
    with pytest.raises(DimensionError):
        apply_diagonal(DiagonalUnitary(np.zeros(8)), state)


def test_malformed_states():
    with pytest.raises(MalformedStateError):
        relative_phases(StateVector(np.ones(4) / 2))  # dim 4 is not 2**odd
    bad = image_state_amplitudes(np.full(4, 0.3), 1).copy()
    bad[0] *= -1
    with pytest.raises(MalformedStateError):
        relative_phases(StateVector(bad))
    skew = image_state_amplitudes(np.full(4, 0.3), 1).copy()
    skew[5] *= 1.1
    skew /= np.linalg.norm(skew)
    with pytest.raises(MalformedStateError):
        reindex_to_mpe_form(StateVector(skew))


def test_frqi_examples():
    state, trace = prepare_frqi_angle_state([0.0, math.pi / 2, math.pi / 4, math.pi / 6], 1)
    assert (trace.hadamard_count, trace.controlled_rotation_count) == (2, 4)
    a = state.amps
    np.testing.assert_allclose(a[:4], 0.5 * np.cos([0, math.pi / 2, math.pi / 4, math.pi / 6]), atol=1e-15)
    np.testing.assert_allclose(a[4:], 0.5 * np.sin([0, math.pi / 2, math.pi / 4, math.pi / 6]), atol=1e-15)
    assert abs(state.norm - 1) < 1e-12
    with pytest.raises(ConfigError):
        prepare_frqi_angle_state([2.0], 0)
    with pytest.raises(DimensionError):
        prepare_frqi_angle_state([0.1, 0.2, 0.3])
