"""Pure numpy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable, and as the
reference the extension is tested against. Signatures must stay in sync
with ``_kernels.pyx``.
"""
import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_LO = np.uint64(0xFFFFFFFF)
_32 = np.uint64(32)

_INV_SQRT2 = 0.7071067811865476


def philox4x32(ctr, key):
    """Philox4x32-10 block function, vectorised over the leading axis.

    ``ctr`` has shape (m, 4) and ``key`` shape (2,) or (m, 2); all words are
    32-bit values stored as uint64. Returns an (m, 4) uint64 array.
    """
    c0, c1, c2, c3 = (np.asarray(ctr[:, i], dtype=np.uint64) for i in range(4))
    key = np.asarray(key, dtype=np.uint64)
    k0 = key[..., 0].copy()
    k1 = key[..., 1].copy()
    for r in range(10):
        if r:
            k0 = (k0 + _W0) & _LO
            k1 = (k1 + _W1) & _LO
        p0 = _M0 * c0
        p1 = _M1 * c2
        c0, c1, c2, c3 = (
            (p1 >> _32) ^ c1 ^ k0,
            p1 & _LO,
            (p0 >> _32) ^ c3 ^ k1,
            p0 & _LO,
        )
    return np.stack([c0, c1, c2, c3], axis=1)


def philox_uniforms(seed, stream, slots, draws):
    """Uniform doubles in the open interval (0, 1), one per (slot, draw) pair.

    The Philox counter is (draw low word, draw high word, slot, stream) and
    the key is the 64-bit seed split into two words. Words 0 and 1 of the
    output block give a 53-bit mantissa.
    """
    slots = np.asarray(slots, dtype=np.uint64)
    draws = np.asarray(draws, dtype=np.uint64)
    slots, draws = np.broadcast_arrays(slots, draws)
    shape = slots.shape
    m = slots.size
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    key = np.array([seed & 0xFFFFFFFF, seed >> 32], dtype=np.uint64)
    ctr = np.empty((m, 4), dtype=np.uint64)
    ctr[:, 0] = draws.ravel() & _LO
    ctr[:, 1] = draws.ravel() >> _32
    ctr[:, 2] = slots.ravel() & _LO
    ctr[:, 3] = np.uint64(int(stream) & 0xFFFFFFFF)
    out = philox4x32(ctr, key)
    hi = (out[:, 0] >> np.uint64(5)).astype(np.float64)
    lo = (out[:, 1] >> np.uint64(6)).astype(np.float64)
    u = (hi * 67108864.0 + lo + 0.5) * (1.0 / 9007199254740992.0)
    return u.reshape(shape)


def inverse_cdf(u, grid, cdf):
    """Piecewise-linear inverse of a tabulated CDF.

    ``cdf`` must be non-decreasing with ``cdf[0] == 0`` and ``cdf[-1] == 1``.
    """
    u = np.asarray(u, dtype=np.float64)
    grid = np.asarray(grid, dtype=np.float64)
    cdf = np.asarray(cdf, dtype=np.float64)
    i = np.searchsorted(cdf, u, side="right") - 1
    i = np.clip(i, 0, cdf.size - 2)
    c0 = cdf[i]
    dc = cdf[i + 1] - c0
    x0 = grid[i]
    dx = grid[i + 1] - x0
    flat = dc <= 0.0
    safe = np.where(flat, 1.0, dc)
    return np.where(flat, x0, x0 + (u - c0) * (dx / safe))


def _hadamard(amps, qubit):
    s = 1 << qubit
    v = amps.reshape(-1, 2, s)
    a = v[:, 0, :].copy()
    b = v[:, 1, :]
    v[:, 0, :] = (a + b) * _INV_SQRT2
    v[:, 1, :] = (a - b) * _INV_SQRT2


def prepare_phase_state(phases, n):
    """Gate-by-gate preparation of the phase-encoded image state.

    Hadamard on every one of the 2n+1 qubits, then one controlled phase
    rotation per pixel on the grey qubit. Returns (amps, hadamards, rotations).
    """
    phases = np.asarray(phases, dtype=np.float64)
    npix = 1 << (2 * n)
    amps = np.zeros(2 * npix, dtype=np.complex128)
    amps[0] = 1.0
    hadamards = 0
    for q in range(2 * n + 1):
        _hadamard(amps, q)
        hadamards += 1
    rotations = 0
    for k in range(npix):
        t = phases[k]
        amps[npix + k] *= complex(np.cos(t), np.sin(t))
        rotations += 1
    return amps, hadamards, rotations


def prepare_frqi_state(angles, n):
    """Gate-by-gate FRQI preparation: Hadamards on the 2n coordinate qubits,
    then a controlled R_y(2*beta_k) on the grey qubit per pixel."""
    angles = np.asarray(angles, dtype=np.float64)
    npix = 1 << (2 * n)
    amps = np.zeros(2 * npix, dtype=np.complex128)
    amps[0] = 1.0
    hadamards = 0
    for q in range(2 * n):
        _hadamard(amps, q)
        hadamards += 1
    rotations = 0
    for k in range(npix):
        c, s = np.cos(angles[k]), np.sin(angles[k])
        a, b = amps[k], amps[npix + k]
        amps[k] = c * a - s * b
        amps[npix + k] = s * a + c * b
        rotations += 1
    return amps, hadamards, rotations
