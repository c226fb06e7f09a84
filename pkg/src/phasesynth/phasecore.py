"""Phase images, the grey-level/phase codec and the phase restriction rule.

Grey levels 0..255 are mapped affinely onto ``[eps, pi/2 - eps]`` so that an
encoded phase never touches the open-interval boundaries 0 and pi/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionError, ResourceCapError

HALF_PI = math.pi / 2
TWO_PI = 2 * math.pi
DEFAULT_EPSILON = 0.01
MAX_N = 6


def check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not (0.0 < epsilon < math.pi / 8):
        raise ConfigError(f"epsilon must lie in (0, pi/8), got {epsilon!r}")
    return epsilon


def check_n(n: int) -> int:
    if n < 0:
        raise DimensionError(f"n must be non-negative, got {n}")
    if n > MAX_N:
        raise ResourceCapError(
            f"n={n} exceeds the desk-scale cap n <= {MAX_N} "
            f"(statevector dim {2 ** (2 * n + 1)})"
        )
    return n


def log2_side(size: int) -> int:
    """Return n with ``size == 2**n``; raise DimensionError otherwise."""
    if size < 1 or size & (size - 1):
        raise DimensionError(f"{size} is not a power of two")
    return size.bit_length() - 1


def gray_to_phase(g, epsilon: float = DEFAULT_EPSILON):
    """Map grey level(s) 0..255 to phase(s) in ``[eps, pi/2 - eps]``.

    Works on scalars and arrays; strictly increasing in ``g``.
    """
    epsilon = check_epsilon(epsilon)
    ga = np.asarray(g)
    if ga.size and (np.any(ga < 0) or np.any(ga > 255)):
        raise ConfigError("grey levels must lie in 0..255")
    out = epsilon + (ga / 255.0) * (HALF_PI - 2.0 * epsilon)
    return float(out) if out.ndim == 0 else out


def phase_to_gray(theta, epsilon: float = DEFAULT_EPSILON):
    """Inverse of :func:`gray_to_phase` with clamping and half-to-even rounding."""
    epsilon = check_epsilon(epsilon)
    t = np.clip(np.asarray(theta, dtype=np.float64), epsilon, HALF_PI - epsilon)
    g = np.rint((t - epsilon) / (HALF_PI - 2.0 * epsilon) * 255.0)
    g = np.clip(g, 0, 255).astype(np.int64)
    return int(g) if g.ndim == 0 else g


def gray_clamped(theta, epsilon: float = DEFAULT_EPSILON):
    """Mask of phases that :func:`phase_to_gray` had to clamp."""
    t = np.asarray(theta, dtype=np.float64)
    return (t < epsilon) | (t > HALF_PI - epsilon)


def restrict_phases(phi, epsilon: float = DEFAULT_EPSILON):
    """Vectorised phase restriction.

    Returns ``(restricted, floored)``: values in (0, pi/2], and a mask of
    entries that reduced to exactly 0 and were lifted to ``epsilon``.
    """
    x = np.asarray(phi, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ConfigError("phases must be finite")
    x = np.where(x < 0.0, np.mod(x, TWO_PI), x)
    x = np.where(x > HALF_PI, np.mod(x, HALF_PI), x)
    floored = x <= 0.0
    return np.where(floored, epsilon, x), floored


def restrict_phase(phi: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """Reduce an estimated phase into (0, pi/2].

    Phases above pi/2 are taken mod pi/2, negative phases are first wrapped
    into [0, 2pi), and an exact zero is replaced by ``epsilon``.
    """
    out, _ = restrict_phases(phi, epsilon)
    return float(out)


@dataclass(frozen=True)
class GrayImage:
    width: int
    height: int
    pixels: np.ndarray  # uint8, row-major, length width*height

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8).reshape(-1)
        if px.size != self.width * self.height:
            raise DimensionError(
                f"expected {self.width * self.height} pixels, got {px.size}"
            )
        if self.width != self.height:
            raise DimensionError(f"image must be square, got {self.width}x{self.height}")
        log2_side(self.width)
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def n(self) -> int:
        return log2_side(self.width)

    @classmethod
    def from_array(cls, arr) -> GrayImage:
        a = np.asarray(arr)
        if a.ndim != 2:
            raise DimensionError("expected a 2-D array")
        return cls(width=a.shape[1], height=a.shape[0], pixels=a.reshape(-1))

    def to_array(self) -> np.ndarray:
        return self.pixels.reshape(self.height, self.width).copy()


@dataclass(frozen=True)
class PhaseImage:
    """Pixel phases of a 2^n x 2^n image, row-major.

    Construction only checks the length; inputs to state preparation are
    additionally held to the open interval (0, pi/2) by
    :meth:`require_open_range`. Synthesised images may legitimately leave it.
    """

    n: int
    phases: np.ndarray

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError(f"n must be non-negative, got {self.n}")
        ph = np.array(self.phases, dtype=np.float64).reshape(-1)
        if ph.size != 1 << (2 * self.n):
            raise DimensionError(
                f"n={self.n} needs {1 << (2 * self.n)} phases, got {ph.size}"
            )
        ph.flags.writeable = False
        object.__setattr__(self, "phases", ph)

    @property
    def num_pixels(self) -> int:
        return self.phases.size

    @property
    def in_open_range(self) -> bool:
        p = self.phases
        return bool(np.all(np.isfinite(p)) and np.all(p > 0.0) and np.all(p < HALF_PI))

    def require_open_range(self) -> PhaseImage:
        if not self.in_open_range:
            raise ConfigError("pixel phases must lie strictly inside (0, pi/2)")
        return self

    @classmethod
    def from_gray(cls, img: GrayImage, epsilon: float = DEFAULT_EPSILON) -> PhaseImage:
        return cls(n=img.n, phases=gray_to_phase(img.pixels.astype(np.float64), epsilon))

    def to_gray(self, epsilon: float = DEFAULT_EPSILON) -> GrayImage:
        side = 1 << self.n
        return GrayImage(side, side, phase_to_gray(self.phases, epsilon).astype(np.uint8))
