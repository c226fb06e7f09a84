"""Dense statevector engine for phase-encoded images.

Layout: the grey qubit is the most significant bit, so ``amps[:4**n]`` is the
``|0>`` branch and ``amps[4**n:]`` the ``|1>`` branch, pixel-ordered.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ._backend import kernels
from .errors import ConfigError, DimensionError, MalformedStateError
from .phasecore import HALF_PI, TWO_PI, PhaseImage, check_n, log2_side

if TYPE_CHECKING:
    from .synthesis import DiagonalUnitary

NORM_TOL = 1e-12
STRUCTURE_TOL = 1e-10


@dataclass(frozen=True)
class StateVector:
    amps: np.ndarray

    def __post_init__(self):
        a = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if a.size == 0:
            raise DimensionError("empty state")
        a.flags.writeable = False
        object.__setattr__(self, "amps", a)

    @property
    def dim(self) -> int:
        return self.amps.size

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol


@dataclass(frozen=True)
class GateTrace:
    hadamard_count: int
    controlled_rotation_count: int


def image_state_amplitudes(phases: np.ndarray, n: int) -> np.ndarray:
    """Closed-form amplitudes of the phase-encoded image state (unit norm)."""
    scale = 1.0 / ((1 << n) * math.sqrt(2.0))
    phases = np.asarray(phases, dtype=np.float64)
    return np.concatenate([np.full(phases.size, scale, dtype=np.complex128),
                           scale * np.exp(1j * phases)])


def prepare_image_state(img: PhaseImage) -> tuple[StateVector, GateTrace]:
    """Build the image state gate by gate from ``|0...0>``.

    A Hadamard layer on all 2n+1 qubits, then one controlled phase rotation
    ``diag(1, e^{i theta_k})`` on the grey qubit per pixel ``k``.
    """
    check_n(img.n)
    img.require_open_range()
    amps, h, r = kernels.prepare_phase_state(img.phases, img.n)
    return StateVector(amps), GateTrace(int(h), int(r))


def prepare_frqi_angle_state(angles, n: int | None = None) -> tuple[StateVector, GateTrace]:
    """FRQI reference encoding: ``cos b_j |0> + sin b_j |1>`` per pixel."""
    if isinstance(angles, PhaseImage):
        n, beta = angles.n, angles.phases
    else:
        beta = np.asarray(angles, dtype=np.float64).reshape(-1)
        if n is None:
            n = log2_side(beta.size) // 2 if beta.size else 0
            if 1 << (2 * n) != beta.size:
                raise DimensionError(f"{beta.size} angles is not a 4**n count")
    check_n(n)
    if beta.size != 1 << (2 * n):
        raise DimensionError(f"n={n} needs {1 << (2 * n)} angles, got {beta.size}")
    if not (np.all(np.isfinite(beta)) and np.all(beta >= 0.0) and np.all(beta <= HALF_PI)):
        raise ConfigError("FRQI angles must lie in [0, pi/2]")
    amps, h, r = kernels.prepare_frqi_state(beta, n)
    return StateVector(amps), GateTrace(int(h), int(r))


def _image_n(state: StateVector) -> int:
    dim = state.dim
    if dim < 2 or dim & (dim - 1):
        raise MalformedStateError(f"dimension {dim} is not 2**(2n+1)")
    q = dim.bit_length() - 1
    if q % 2 != 1:
        raise MalformedStateError(f"dimension {dim} is not 2**(2n+1)")
    return (q - 1) // 2


def _check_image_structure(state: StateVector) -> tuple[int, np.ndarray, np.ndarray]:
    n = _image_n(state)
    half = state.dim // 2
    zero, one = state.amps[:half], state.amps[half:]
    ref = zero[0]
    r = abs(ref)
    if r <= STRUCTURE_TOL:
        raise MalformedStateError("|0> branch amplitude vanishes")
    if np.max(np.abs(zero - ref)) > STRUCTURE_TOL:
        raise MalformedStateError("|0> branch amplitudes are not all equal")
    if np.max(np.abs(np.abs(one) - r)) > STRUCTURE_TOL:
        raise MalformedStateError("|1> branch moduli differ from the |0> branch")
    return n, zero, one


def reindex_to_mpe_form(state: StateVector) -> StateVector:
    """Recode an image state into the d = 4**n + 1 single-register form.

    The whole ``|0>`` branch becomes basis state 0 (the phase reference) and
    pixel ``j`` moves to basis index ``j + 1``.
    """
    _, zero, one = _check_image_structure(state)
    rel = one * np.conj(zero[0]) / abs(zero[0]) ** 2
    d = one.size + 1
    out = np.empty(d, dtype=np.complex128)
    out[0] = 1.0
    out[1:] = rel / np.abs(rel)
    return StateVector(out / math.sqrt(d))


def apply_diagonal(U: DiagonalUnitary, state: StateVector) -> StateVector:
    if U.dim != state.dim:
        raise DimensionError(f"operator dim {U.dim} != state dim {state.dim}")
    return StateVector(np.exp(1j * U.angle) * state.amps)


def relative_phases(state: StateVector) -> np.ndarray:
    """Grey-branch phase minus reference-branch phase per pixel, in [0, 2pi)."""
    _, zero, one = _check_image_structure(state)
    return np.mod(np.angle(one) - np.angle(zero), TWO_PI)


def extract_phases_exact(state: StateVector) -> PhaseImage:
    """Noiseless read-out of every pixel phase (inverse of preparation)."""
    n = _image_n(state)
    return PhaseImage(n, relative_phases(state))
