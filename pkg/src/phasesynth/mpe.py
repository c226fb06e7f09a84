"""Simulated multiple phase estimation.

Each pixel phase is estimated independently. Two noise laws are provided:

``analytic``
    wrapped normal error with standard deviation ``1/sqrt(N)``.
``povm-oracle``
    exact sampling of the canonical covariant phase measurement applied to an
    N-qubit symmetric probe, whose number distribution is Binomial(N, 1/2).

A third mode, ``exact``, returns the true phases and is used for noiseless
reference runs. The number-operator spread of the probe is ``sqrt(N)/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from . import rng
from ._backend import kernels
from .errors import ConfigError, DegenerateDistributionError, DimensionError
from .phasecore import DEFAULT_EPSILON, PhaseImage, restrict_phases

MODES = ("analytic", "povm-oracle", "exact")
GRID_POINTS = 1 << 14
# beyond this the error spread approaches the grid spacing
MAX_POVM_RESOURCE = 4096

_MODE_ALIASES = {"povm": "povm-oracle", "povm_oracle": "povm-oracle"}


def normalize_mode(mode: str) -> str:
    m = _MODE_ALIASES.get(mode, mode)
    if m not in MODES:
        raise ConfigError(f"unknown estimation mode {mode!r}; expected one of {MODES}")
    return m


def _check_resource(N) -> int:
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise ConfigError(f"resource N must be a positive integer, got {N!r}")
    return int(N)


def delta_n(N: int) -> float:
    """Number-operator spread of the Binomial(N, 1/2) probe."""
    return math.sqrt(_check_resource(N)) / 2.0


def probe_amplitudes(N: int) -> np.ndarray:
    """``c_m = sqrt(binom(N, m) / 2**N)`` for m = 0..N."""
    N = _check_resource(N)
    m = np.arange(N + 1)
    logc = 0.5 * (gammaln(N + 1) - gammaln(m + 1) - gammaln(N - m + 1) - N * math.log(2.0))
    return np.exp(logc)


def povm_density(N: int, delta):
    """Density of the estimation error ``delta`` on (-pi, pi]."""
    c = probe_amplitudes(N)
    d = np.asarray(delta, dtype=np.float64)
    amp = np.exp(1j * np.multiply.outer(d, np.arange(c.size))) @ c
    out = np.abs(amp) ** 2 / (2 * math.pi)
    return float(out) if out.ndim == 0 else out


def _lag_sums(N: int) -> np.ndarray:
    """``a_k = sum_m c_m c_{m+k}`` for k = 1..N, truncated once negligible."""
    c = probe_amplitudes(N)
    a = np.correlate(c, c, mode="full")[N + 1:]
    keep = np.nonzero(a >= 1e-18)[0]
    return a[: keep[-1] + 1] if keep.size else a[:0]


def povm_cdf(N: int, delta):
    """Closed-form CDF of :func:`povm_density` from -pi."""
    a = _lag_sums(N)
    k = np.arange(1, a.size + 1)
    d = np.asarray(delta, dtype=np.float64)
    out = (d + math.pi) / (2 * math.pi) + np.sin(np.multiply.outer(d, k)) @ (a / k) / math.pi
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=64)
def povm_table(N: int) -> tuple[np.ndarray, np.ndarray]:
    """(grid, cdf) on ``GRID_POINTS`` equispaced nodes over [-pi, pi]."""
    grid = np.linspace(-math.pi, math.pi, GRID_POINTS)
    cdf = povm_cdf(N, grid)
    cdf[0], cdf[-1] = 0.0, 1.0
    cdf = np.maximum.accumulate(np.clip(cdf, 0.0, 1.0))
    grid.flags.writeable = False
    cdf.flags.writeable = False
    return grid, cdf


def errors_from_uniforms(u: np.ndarray, N: int, mode: str) -> np.ndarray:
    """Map uniforms in (0, 1) to estimation errors under ``mode``."""
    mode = normalize_mode(mode)
    N = _check_resource(N)
    u = np.asarray(u, dtype=np.float64)
    if mode == "exact":
        return np.zeros_like(u)
    if mode == "analytic":
        return rng.standard_normal(u) / math.sqrt(N)
    if N > MAX_POVM_RESOURCE:
        raise ConfigError(
            f"povm-oracle sampling supports N <= {MAX_POVM_RESOURCE}; use analytic mode"
        )
    grid, cdf = povm_table(N)
    return kernels.inverse_cdf(u, grid, cdf)


def sample_errors(N: int, mode: str, seed: int, stream: int, size: int,
                  slot: int = 0) -> np.ndarray:
    """``size`` independent estimation errors from one (stream, slot)."""
    u = rng.draw_uniforms(seed, stream, slot, size)
    return errors_from_uniforms(u, N, mode)


@dataclass(frozen=True)
class PhaseEstimate:
    """Restricted estimates plus the raw measurement outcomes behind them."""

    estimates: np.ndarray
    raw: np.ndarray
    floored: np.ndarray
    resource: int
    mode: str
    seed: int
    stream: int = 0

    def __len__(self):
        return self.estimates.size


def estimate_phases(img: PhaseImage, resource: int, mode: str = "analytic",
                    seed: int = 0, stream: int = 0,
                    epsilon: float = DEFAULT_EPSILON) -> PhaseEstimate:
    """Estimate every pixel phase of ``img``.

    Pixel ``j`` uses the variate at (seed, stream, slot=j, draw=0), so each
    estimate is independent of the others and of evaluation order.
    """
    mode = normalize_mode(mode)
    resource = _check_resource(resource)
    if mode == "exact":
        raw = img.phases.copy()
    else:
        u = rng.slot_uniforms(seed, stream, img.num_pixels)
        raw = img.phases + errors_from_uniforms(u, resource, mode)
    est, floored = restrict_phases(raw, epsilon)
    for a in (est, raw, floored):
        a.flags.writeable = False
    return PhaseEstimate(est, raw, floored, resource, mode, int(seed), stream)


def holevo_variance(samples) -> float:
    """Holevo phase variance ``D{e^{i phi}} / |E{e^{i phi}}|^2``."""
    s = np.asarray(samples, dtype=np.float64).reshape(-1)
    if s.size < 2:
        raise DegenerateDistributionError("need at least 2 samples")
    z = np.exp(1j * s)
    mean = z.mean()
    r = abs(mean)
    if r <= 1e-9:
        raise DegenerateDistributionError("resultant length is ~0; phase is uniformly spread")
    disp = np.mean(np.abs(z - mean) ** 2)
    return float(disp / r ** 2)


@dataclass(frozen=True)
class VarianceStats:
    circular_variance: float
    delta_n: float
    product: float
    product_se: float
    num_samples: int

    @property
    def delta_phi(self) -> float:
        return math.sqrt(self.circular_variance)


def holevo_spread_se(samples) -> float:
    """Delta-method standard error of ``sqrt(holevo_variance(samples))``."""
    s = np.asarray(samples, dtype=np.float64).reshape(-1)
    z = np.exp(1j * s)
    mean = z.mean()
    r = abs(mean)
    proj = np.cos(s - np.angle(mean))
    se_r = float(np.std(proj, ddof=1)) / math.sqrt(s.size)
    one_minus = max(1.0 - r * r, 0.0)
    if one_minus == 0.0:
        return 0.0
    return float(se_r / (r * r * math.sqrt(one_minus)))


def variance_stats(samples, N: int) -> VarianceStats:
    """Holevo variance of ``samples`` combined with the probe spread for N."""
    var = holevo_variance(samples)
    dn = delta_n(N)
    return VarianceStats(
        circular_variance=var,
        delta_n=dn,
        product=math.sqrt(var) * dn,
        product_se=holevo_spread_se(samples) * dn,
        num_samples=int(np.size(samples)),
    )


def mpe_fidelity(true_phases, est_phases, d: int | None = None) -> float:
    """Fidelity between probe states carrying the true and estimated phases.

    With residuals ``r_j = est_j - true_j`` this is ``|1 + sum e^{i r_j}|^2 / d^2``,
    which expands to the cosine-sum form.
    """
    t = np.asarray(true_phases, dtype=np.float64).reshape(-1)
    e = np.asarray(est_phases, dtype=np.float64).reshape(-1)
    if t.size != e.size:
        raise DimensionError(f"length mismatch: {t.size} true vs {e.size} estimated")
    if d is None:
        d = t.size + 1
    if t.size != d - 1:
        raise DimensionError(f"d={d} needs {d - 1} phases, got {t.size}")
    s = 1.0 + np.sum(np.exp(1j * (e - t)))
    return float(min(abs(s) ** 2 / d ** 2, 1.0))
