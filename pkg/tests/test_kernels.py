import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import _kernels_cy
from phasesynth import _kernels_py
from phasesynth.mpe import povm_table

# Philox4x32-10 known-answer vectors: (counter, key, output)
KAT = [
    ((0, 0, 0, 0), (0, 0), (0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8)),
    ((0xFFFFFFFF,) * 4, (0xFFFFFFFF, 0xFFFFFFFF),
     (0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD)),
    ((0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344), (0xA4093822, 0x299F31D0),
     (0xD16CFE09, 0x94FDCCEB, 0x5001E420, 0x24126EA1)),
]

needs_cython = pytest.mark.skipif(_kernels_cy is None, reason="extension not built")


@pytest.mark.parametrize("ctr,key,expected", KAT)
def test_philox_known_answers(backend, ctr, key, expected):
    out = backend.philox4x32(np.array([ctr], dtype=np.uint32), np.array(key, dtype=np.uint32))
    assert tuple(int(v) for v in np.asarray(out).reshape(-1)) == expected


def test_uniforms_open_interval(backend):
    u = np.asarray(backend.philox_uniforms(7, 1, np.uint64(0), np.arange(200_000, dtype=np.uint64)))
    assert u.min() > 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.005


def test_uniforms_depend_on_every_counter_field(backend):
    base = np.asarray(backend.philox_uniforms(1, 1, np.uint64(0), np.arange(8, dtype=np.uint64)))
    for args in [(2, 1, 0), (1, 2, 0), (1, 1, 1)]:
        seed, stream, slot = args
        other = backend.philox_uniforms(seed, stream, np.uint64(slot), np.arange(8, dtype=np.uint64))
        assert not np.any(base == np.asarray(other))


def test_inverse_cdf_linear_interpolation(backend):
    grid = np.array([0.0, 1.0, 2.0])
    cdf = np.array([0.0, 0.25, 1.0])
    u = np.array([0.0, 0.125, 0.25, 0.625, 1.0])
    out = np.asarray(backend.inverse_cdf(u, grid, cdf))
    np.testing.assert_allclose(out, [0.0, 0.5, 1.0, 1.5, 2.0], atol=1e-15)


def test_inverse_cdf_flat_segment(backend):
    grid = np.array([0.0, 1.0, 2.0, 3.0])
    cdf = np.array([0.0, 0.5, 0.5, 1.0])
    out = np.asarray(backend.inverse_cdf(np.array([0.5]), grid, cdf))
    assert np.isfinite(out[0]) and 1.0 <= out[0] <= 2.0


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_phase_state_counts(backend, n):
    ph = np.linspace(0.1, 1.4, 1 << (2 * n))
    amps, h, r = backend.prepare_phase_state(ph, n)
    assert (int(h), int(r)) == (2 * n + 1, 1 << (2 * n))
    assert np.asarray(amps).size == 2 ** (2 * n + 1)


@needs_cython
def test_backends_bitwise_equal(rng):
    slots = np.arange(64, dtype=np.uint64)[:, None]
    draws = np.arange(100, dtype=np.uint64)[None, :]
    a = _kernels_py.philox_uniforms(2 ** 63 + 5, 3, slots, draws)
    b = _kernels_cy.philox_uniforms(2 ** 63 + 5, 3, slots, draws)
    assert np.array_equal(np.asarray(a), np.asarray(b))

    grid, cdf = povm_table(8)
    u = rng.random(50_000)
    assert np.array_equal(np.asarray(_kernels_py.inverse_cdf(u, grid, cdf)),
                          np.asarray(_kernels_cy.inverse_cdf(u, grid, cdf)))

    for n in range(4):
        ph = rng.uniform(0.01, 1.56, 1 << (2 * n))
        for fn in ("prepare_phase_state", "prepare_frqi_state"):
            pa = getattr(_kernels_py, fn)(ph, n)
            pc = getattr(_kernels_cy, fn)(ph, n)
            assert np.array_equal(np.asarray(pa[0]), np.asarray(pc[0]))
            assert (int(pa[1]), int(pa[2])) == (int(pc[1]), int(pc[2]))


def test_env_forces_python_backend():
    env = dict(os.environ, QIMG_BACKEND="python")
    out = subprocess.run(
        [sys.executable, "-c", "import phasesynth; print(phasesynth.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
