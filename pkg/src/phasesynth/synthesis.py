"""Rotation operators and the three-step synthesis pipeline.

Step 1 estimates phases, step 2 builds a diagonal rotation from them and
step 3 applies it to a fresh copy of the carrier state. Two operators are
available:

corrected
    grey-branch angle ``(pi/2) tanh(theta'_j + phi'_j) - phi'_j``; the carrier
    phase is cancelled and replaced by the squashed sum.
naive
    grey-branch angle ``theta'_j``; only the embedder is estimated and the sum
    ``theta'_j + phi_j`` is left unbounded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import ConfigError, DimensionError
from .mpe import PhaseEstimate, estimate_phases, normalize_mode
from .phasecore import DEFAULT_EPSILON, HALF_PI, TWO_PI, PhaseImage, check_n
from .statevec import StateVector, apply_diagonal, prepare_image_state, relative_phases

OPERATOR_KINDS = ("corrected", "naive")


@dataclass(frozen=True)
class DiagonalUnitary:
    """Diagonal operator ``diag(e^{i angle[k]})``."""

    angle: np.ndarray

    def __post_init__(self):
        a = np.array(self.angle, dtype=np.float64).reshape(-1)
        if a.size == 0 or not np.all(np.isfinite(a)):
            raise ConfigError("operator angles must be a non-empty finite sequence")
        a.flags.writeable = False
        object.__setattr__(self, "angle", a)

    @property
    def dim(self) -> int:
        return self.angle.size

    @property
    def diagonal(self) -> np.ndarray:
        return np.exp(1j * self.angle)

    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal)

    def inverse(self) -> DiagonalUnitary:
        return DiagonalUnitary(-self.angle)

    def unitarity_error(self) -> float:
        """``max |U U^dagger - I|`` evaluated on the diagonal."""
        return float(np.max(np.abs(np.abs(self.diagonal) ** 2 - 1.0)))

    def identity_block_is_zero(self) -> bool:
        return bool(np.all(self.angle[: self.dim // 2] == 0.0))


def squash(x):
    """Overflow control map ``(pi/2) tanh(x)``; sends (0, pi) into (0, pi/2)."""
    out = HALF_PI * np.tanh(np.asarray(x, dtype=np.float64))
    return float(out) if out.ndim == 0 else out


def _as_array(est) -> np.ndarray:
    if isinstance(est, PhaseEstimate):
        return est.estimates
    return np.asarray(est, dtype=np.float64).reshape(-1)


def _check_len(a: np.ndarray, n: int, what: str) -> None:
    if a.size != 1 << (2 * n):
        raise DimensionError(f"{what} has {a.size} entries; n={n} needs {1 << (2 * n)}")


def build_corrected_operator(embedder_est, carrier_est, n: int) -> DiagonalUnitary:
    theta = _as_array(embedder_est)
    phi = _as_array(carrier_est)
    _check_len(theta, n, "embedder estimate")
    _check_len(phi, n, "carrier estimate")
    angle = np.zeros(2 * theta.size)
    angle[theta.size:] = squash(theta + phi) - phi
    return DiagonalUnitary(angle)


def build_naive_operator(embedder_est, n: int) -> DiagonalUnitary:
    theta = _as_array(embedder_est)
    _check_len(theta, n, "embedder estimate")
    angle = np.zeros(2 * theta.size)
    angle[theta.size:] = theta
    return DiagonalUnitary(angle)


def to_reporting_interval(phases):
    """Map phases from [0, 2pi) to the reporting interval [-pi/2, 3pi/2)."""
    p = np.asarray(phases, dtype=np.float64)
    return np.where(p >= 1.5 * math.pi, p - TWO_PI, p)


def closed_form_phases(kind: str, carrier: np.ndarray, embedder_est: np.ndarray,
                       carrier_est: np.ndarray | None) -> np.ndarray:
    """Synthesised phases predicted without the statevector."""
    if kind == "corrected":
        return squash(embedder_est + carrier_est) + (carrier - carrier_est)
    return embedder_est + carrier


@dataclass(frozen=True)
class SynthesisRun:
    carrier: PhaseImage
    embedder: PhaseImage
    carrier_estimate: PhaseEstimate | None
    embedder_estimate: PhaseEstimate
    operator_kind: str
    operator: DiagonalUnitary
    result_state: StateVector
    result_image: PhaseImage
    expected_phases: np.ndarray
    metrics: object = None

    @property
    def n(self) -> int:
        return self.carrier.n

    @property
    def input_sums(self) -> np.ndarray:
        """Phase sums fed to the rotation: estimated for corrected, mixed for naive."""
        theta = self.embedder_estimate.estimates
        if self.carrier_estimate is None:
            return theta + self.carrier.phases
        return theta + self.carrier_estimate.estimates

    @property
    def deltas(self) -> np.ndarray | None:
        if self.carrier_estimate is None:
            return None
        return self.carrier.phases - self.carrier_estimate.estimates


def synthesize(carrier: PhaseImage, embedder: PhaseImage,
               resource_carrier: int = 64, resource_embedder: int = 64,
               mode: str = "analytic", seed: int = 0,
               operator_kind: str = "corrected",
               epsilon: float = DEFAULT_EPSILON,
               uncertainty_samples: int = 10_000) -> SynthesisRun:
    """Embed ``embedder`` into ``carrier``.

    The naive operator skips carrier estimation. Estimates for a given seed
    are shared between both kinds, so corrected and naive runs with the same
    arguments are paired trials.
    """
    from .analysis import build_metrics

    if operator_kind not in OPERATOR_KINDS:
        raise ConfigError(f"operator_kind must be one of {OPERATOR_KINDS}, got {operator_kind!r}")
    if carrier.n != embedder.n:
        raise DimensionError(f"carrier n={carrier.n} != embedder n={embedder.n}")
    n = check_n(carrier.n)
    carrier.require_open_range()
    embedder.require_open_range()
    mode = normalize_mode(mode)

    emb_est = estimate_phases(embedder, resource_embedder, mode, seed, rng.EMBEDDER, epsilon)
    if operator_kind == "corrected":
        car_est = estimate_phases(carrier, resource_carrier, mode, seed, rng.CARRIER, epsilon)
        op = build_corrected_operator(emb_est, car_est, n)
    else:
        car_est = None
        op = build_naive_operator(emb_est, n)

    state, _ = prepare_image_state(carrier)
    result = apply_diagonal(op, state)
    phases = to_reporting_interval(relative_phases(result))
    expected = closed_form_phases(
        operator_kind, carrier.phases, emb_est.estimates,
        None if car_est is None else car_est.estimates,
    )
    run = SynthesisRun(
        carrier=carrier,
        embedder=embedder,
        carrier_estimate=car_est,
        embedder_estimate=emb_est,
        operator_kind=operator_kind,
        operator=op,
        result_state=result,
        result_image=PhaseImage(n, phases),
        expected_phases=expected,
    )
    metrics = build_metrics(run, uncertainty_samples=uncertainty_samples, epsilon=epsilon)
    object.__setattr__(run, "metrics", metrics)
    return run
