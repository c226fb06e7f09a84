"""Diagnostics of synthesis runs: compression ratios, exception phases and
uncertainty products.

Two compression ratios are reported because they answer different
questions. ``interval_ratio`` compares the lengths of the output and input
phase ranges; ``pointwise_ratio`` is the per-pixel quotient of output phase
over input sum. They agree in the large-interval limit (1/2) but not near the
origin, where the pointwise quotient tends to pi/2.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from . import rng
from .errors import ConfigError, DegenerateDistributionError
from .mpe import (
    mpe_fidelity,
    normalize_mode,
    sample_errors,
    variance_stats,
)
from .phasecore import DEFAULT_EPSILON, HALF_PI, gray_clamped, phase_to_gray, restrict_phases

if TYPE_CHECKING:
    from .synthesis import SynthesisRun

UNDERFLOW, OK, OVERFLOW = "underflow", "ok", "overflow"
JOINT_BOUND = math.tanh(1.0) + 0.5
MIN_UNCERTAINTY_SAMPLES = 1000
SE_MULTIPLIER = 3.0


def classify_overflow(phase: float) -> str:
    if phase <= 0.0:
        return UNDERFLOW
    if phase >= HALF_PI:
        return OVERFLOW
    return OK


def classify_phases(phases) -> np.ndarray:
    p = np.asarray(phases, dtype=np.float64)
    return np.where(p <= 0.0, UNDERFLOW, np.where(p >= HALF_PI, OVERFLOW, OK))


def exception_mask(phases) -> np.ndarray:
    p = np.asarray(phases, dtype=np.float64)
    return (p <= 0.0) | (p >= HALF_PI)


def pointwise_ratio(theta_e, phi_e, delta) -> float:
    """``((pi/2) tanh(theta' + phi') + delta) / (theta' + phi')``."""
    s = float(theta_e) + float(phi_e)
    if s <= 1e-9:
        raise DegenerateDistributionError(f"input sum {s!r} too small for a ratio")
    return (HALF_PI * math.tanh(s) + float(delta)) / s


def compressed_length(theta_e, phi_e, delta) -> float:
    """Input sum minus output phase; zero exactly when the pointwise ratio is 1."""
    s = float(theta_e) + float(phi_e)
    return s - (HALF_PI * math.tanh(s) + float(delta))


def interval_ratio_from(input_sums, output_phases) -> float:
    """Output range length over input range length, exception pixels excluded."""
    s = np.asarray(input_sums, dtype=np.float64).reshape(-1)
    out = np.asarray(output_phases, dtype=np.float64).reshape(-1)
    keep = ~exception_mask(out)
    s, out = s[keep], out[keep]
    if s.size < 2:
        raise DegenerateDistributionError("fewer than 2 non-exception pixels")
    span = float(s.max() - s.min())
    if span <= 0.0:
        raise DegenerateDistributionError("input sums are constant")
    return float(out.max() - out.min()) / span


def interval_ratio(run: SynthesisRun) -> float:
    return interval_ratio_from(run.input_sums, run.result_image.phases)


def joint_lhs(product1: float, product2: float) -> float:
    return math.tanh(product1 + product2) + product1


def joint_lhs_se(product1, product2, se1, se2) -> float:
    sech2 = 1.0 / math.cosh(product1 + product2) ** 2
    return math.hypot((sech2 + 1.0) * se1, sech2 * se2)


@dataclass(frozen=True)
class UncertaintyBlock:
    delta_phi: float | None = None
    delta_theta: float | None = None
    delta_n1: float | None = None
    delta_n2: float | None = None
    product1: float | None = None
    product2: float | None = None
    product1_se: float | None = None
    product2_se: float | None = None
    joint_lhs: float | None = None
    joint_lhs_se: float | None = None
    joint_bound: float = JOINT_BOUND

    def to_dict(self) -> dict:
        return asdict(self)


def uncertainty_report(samples_phi, samples_theta, N1: int, N2: int) -> UncertaintyBlock:
    """Uncertainty products for carrier (phi, N1) and embedder (theta, N2).

    Either sample stream may be None, in which case its entries (and the joint
    left-hand side when the carrier is missing) are null.
    """
    vals = {}
    for key, samples, N in (("1", samples_phi, N1), ("2", samples_theta, N2)):
        if samples is None:
            continue
        if np.size(samples) < MIN_UNCERTAINTY_SAMPLES:
            raise ConfigError(
                f"uncertainty needs >= {MIN_UNCERTAINTY_SAMPLES} samples per stream"
            )
        vals[key] = variance_stats(samples, N)
    s1, s2 = vals.get("1"), vals.get("2")
    lhs = lhs_se = None
    if s1 is not None and s2 is not None:
        lhs = joint_lhs(s1.product, s2.product)
        lhs_se = joint_lhs_se(s1.product, s2.product, s1.product_se, s2.product_se)
    return UncertaintyBlock(
        delta_phi=None if s1 is None else s1.delta_phi,
        delta_theta=None if s2 is None else s2.delta_phi,
        delta_n1=None if s1 is None else s1.delta_n,
        delta_n2=None if s2 is None else s2.delta_n,
        product1=None if s1 is None else s1.product,
        product2=None if s2 is None else s2.product,
        product1_se=None if s1 is None else s1.product_se,
        product2_se=None if s2 is None else s2.product_se,
        joint_lhs=lhs,
        joint_lhs_se=lhs_se,
    )


@dataclass(frozen=True)
class PixelRecord:
    pixel: int
    input_sum: float
    output_phase: float
    expected_phase: float
    delta: float | None
    pointwise_ratio: float | None
    overflow_class: str
    gray: int
    clamped: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MetricsReport:
    operator_kind: str
    per_pixel: list = field(default_factory=list)
    interval_ratio: float | None = None
    overflow_rate: float = 0.0
    underflow_rate: float = 0.0
    ok_rate: float = 1.0
    mean_pointwise_ratio: float | None = None
    fidelity_carrier: float | None = None
    fidelity_embedder: float | None = None
    closure_max_error: float = 0.0
    floored_estimates: int = 0
    clamped_pixels: int = 0
    uncertainty: UncertaintyBlock = field(default_factory=UncertaintyBlock)

    @property
    def exception_rate(self) -> float:
        return self.overflow_rate + self.underflow_rate

    def aggregate_dict(self) -> dict:
        return {
            "operator_kind": self.operator_kind,
            "interval_ratio": self.interval_ratio,
            "overflow_rate": self.overflow_rate,
            "underflow_rate": self.underflow_rate,
            "ok_rate": self.ok_rate,
            "exception_rate": self.exception_rate,
            "mean_pointwise_ratio": self.mean_pointwise_ratio,
            "fidelity": {"carrier": self.fidelity_carrier, "embedder": self.fidelity_embedder},
            "closure_max_error": self.closure_max_error,
            "floored_estimates": self.floored_estimates,
            "clamped_pixels": self.clamped_pixels,
            "uncertainty": self.uncertainty.to_dict(),
        }


def _rate(mask: np.ndarray) -> float:
    return math.fsum(mask.astype(np.float64)) / mask.size


def build_metrics(run: SynthesisRun, uncertainty_samples: int = 10_000,
                  epsilon: float = DEFAULT_EPSILON) -> MetricsReport:
    out = run.result_image.phases
    sums = run.input_sums
    deltas = run.deltas
    classes = classify_phases(out)
    gray = phase_to_gray(out, epsilon)
    clamped = gray_clamped(out, epsilon)

    if deltas is None:
        ratios = np.where(sums > 1e-9, out / np.where(sums > 1e-9, sums, 1.0), np.nan)
    else:
        theta_e = run.embedder_estimate.estimates
        phi_e = run.carrier_estimate.estimates
        ratios = np.array([
            pointwise_ratio(t, p, d) if t + p > 1e-9 else np.nan
            for t, p, d in zip(theta_e, phi_e, deltas)
        ])

    records = [
        PixelRecord(
            pixel=j,
            input_sum=float(sums[j]),
            output_phase=float(out[j]),
            expected_phase=float(run.expected_phases[j]),
            delta=None if deltas is None else float(deltas[j]),
            pointwise_ratio=None if np.isnan(ratios[j]) else float(ratios[j]),
            overflow_class=str(classes[j]),
            gray=int(gray[j]),
            clamped=bool(clamped[j]),
        )
        for j in range(out.size)
    ]

    try:
        iratio = interval_ratio(run)
    except DegenerateDistributionError:
        iratio = None
    keep = ~exception_mask(out) & ~np.isnan(ratios)
    mean_ratio = math.fsum(ratios[keep]) / int(keep.sum()) if keep.any() else None

    over = out >= HALF_PI
    under = out <= 0.0
    emb = run.embedder_estimate
    car = run.carrier_estimate
    floored = int(emb.floored.sum()) + (0 if car is None else int(car.floored.sum()))

    return MetricsReport(
        operator_kind=run.operator_kind,
        per_pixel=records,
        interval_ratio=iratio,
        overflow_rate=_rate(over),
        underflow_rate=_rate(under),
        ok_rate=_rate(~(over | under)),
        mean_pointwise_ratio=mean_ratio,
        fidelity_carrier=None if car is None else mpe_fidelity(run.carrier.phases, car.estimates),
        fidelity_embedder=mpe_fidelity(run.embedder.phases, emb.estimates),
        closure_max_error=float(np.max(np.abs(out - run.expected_phases))),
        floored_estimates=floored,
        clamped_pixels=int(clamped.sum()),
        uncertainty=_run_uncertainty(run, uncertainty_samples),
    )


def _run_uncertainty(run: SynthesisRun, samples: int) -> UncertaintyBlock:
    emb = run.embedder_estimate
    if samples <= 0 or emb.mode == "exact":
        return UncertaintyBlock()
    theta = sample_errors(emb.resource, emb.mode, emb.seed, rng.UNCERTAINTY_EMBEDDER, samples)
    car = run.carrier_estimate
    phi = None
    n1 = None
    if car is not None:
        phi = sample_errors(car.resource, car.mode, car.seed, rng.UNCERTAINTY_CARRIER, samples)
        n1 = car.resource
    return uncertainty_report(phi, theta, n1, emb.resource)


def _uniform_truths(seed: int, slot: int, size: int, epsilon: float) -> np.ndarray:
    u = rng.draw_uniforms(seed, rng.TREND_TRUTH, slot, size)
    return epsilon + u * (HALF_PI - 2.0 * epsilon)


def trend_table(resources, trials: int = 10_000, seed: int = 0,
                mode: str = "povm-oracle", epsilon: float = DEFAULT_EPSILON) -> dict:
    """Precision trends against the estimation resource.

    ``single`` has one row per N with the Holevo spread of the raw
    estimation error and its uncertainty product. ``joint`` has one row per
    (N1, N2) pair with the RMS error of the synthesised phase against the
    noiseless result and the joint uncertainty left-hand side.

    Rows are keyed by N rather than by list position, so a given N yields the
    same numbers whatever else is in ``resources``.
    """
    resources = [int(N) for N in resources]
    if not resources:
        raise ConfigError("need at least one resource")
    mode = normalize_mode(mode)
    if mode == "exact":
        raise ConfigError("trend_table needs a noisy estimation mode")
    if trials < MIN_UNCERTAINTY_SAMPLES:
        raise ConfigError(f"trend_table needs >= {MIN_UNCERTAINTY_SAMPLES} trials")

    single = []
    errs = {}
    for N in resources:
        e = sample_errors(N, mode, seed, rng.TREND_SINGLE, trials, slot=N)
        errs[N] = e
        st = variance_stats(e, N)
        single.append({
            "resource": N,
            "spread": st.delta_phi,
            "delta_n": st.delta_n,
            "product": st.product,
            "product_se": st.product_se,
            "spread_bound_ok": bool(st.product >= 0.5 - SE_MULTIPLIER * st.product_se),
        })

    theta = _uniform_truths(seed, 0, trials, epsilon)
    phi = _uniform_truths(seed, 1, trials, epsilon)
    ideal = HALF_PI * np.tanh(theta + phi)
    joint = []
    for N1 in resources:
        e_phi = sample_errors(N1, mode, seed, rng.TREND_JOINT_CARRIER, trials, slot=N1)
        phi_e, _ = restrict_phases(phi + e_phi, epsilon)
        for N2 in resources:
            e_theta = sample_errors(N2, mode, seed, rng.TREND_JOINT_EMBEDDER, trials, slot=N2)
            theta_e, _ = restrict_phases(theta + e_theta, epsilon)
            synth = HALF_PI * np.tanh(theta_e + phi_e) + (phi - phi_e)
            err = synth - ideal
            block = uncertainty_report(e_phi, e_theta, N1, N2)
            joint.append({
                "n1": N1,
                "n2": N2,
                "joint_rms_error": math.sqrt(math.fsum(err * err) / err.size),
                "exception_rate": _rate(exception_mask(synth)),
                "joint_lhs": block.joint_lhs,
                "joint_lhs_se": block.joint_lhs_se,
                "joint_bound": JOINT_BOUND,
                "joint_bound_ok": bool(
                    block.joint_lhs >= JOINT_BOUND - SE_MULTIPLIER * block.joint_lhs_se
                ),
            })
    return {"mode": mode, "trials": trials, "single": single, "joint": joint}
