"""Command-line front end.

Every flag can also be set through an environment variable named
``QIMG_<FLAG>`` (upper case, dashes as underscores), e.g. ``QIMG_N1=256``.

Exit codes: 0 success, 1 I/O error, 2 validation error, 3 resource cap.
"""
from __future__ import annotations

import math
import os
import sys
from dataclasses import asdict, dataclass, field

import click
import numpy as np

from . import analysis, statevec
from .errors import PhaseSynthError, ResourceCapError
from .mpe import normalize_mode
from .pgm import read_pgm, write_pgm
from .phasecore import (
    DEFAULT_EPSILON,
    GrayImage,
    PhaseImage,
    check_epsilon,
    check_n,
    phase_to_gray,
)
from .report import write_report
from .synthesis import squash, synthesize

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_CAP = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    carrier_path: str | None = None
    embedder_path: str | None = None
    output_path: str | None = None
    report_path: str | None = None
    n1: int = 64
    n2: int = 64
    mode: str = "analytic"
    operator_kind: str = "corrected"
    seed: int = 0
    epsilon: float = DEFAULT_EPSILON
    samples: int = 10_000
    resources: list = field(default_factory=list)
    trials: int = 100_000
    ascii: bool = False

    def validate(self) -> RunConfig:
        check_epsilon(self.epsilon)
        normalize_mode(self.mode)
        for name in ("n1", "n2"):
            if getattr(self, name) < 1:
                raise PhaseSynthError(f"{name} must be >= 1")
        return self


def _load_phase_image(path: str, epsilon: float) -> PhaseImage:
    img = read_pgm(path)
    check_n(img.n)
    return PhaseImage.from_gray(img, epsilon)


def _output_paths(path: str, kinds: list[str]) -> dict[str, str]:
    if len(kinds) == 1:
        return {kinds[0]: path}
    stem, ext = os.path.splitext(path)
    return {k: f"{stem}.{k}{ext or '.pgm'}" for k in kinds}


def _pixel_dicts(run, extra: dict | None = None) -> list[dict]:
    rows = []
    car_est = run.carrier_estimate
    for rec in run.metrics.per_pixel:
        j = rec.pixel
        row = {"operator_kind": run.operator_kind}
        if extra:
            row.update(extra)
        row.update({
            "carrier_phase": float(run.carrier.phases[j]),
            "embedder_phase": float(run.embedder.phases[j]),
            "carrier_estimate": None if car_est is None else float(car_est.estimates[j]),
            "embedder_estimate": float(run.embedder_estimate.estimates[j]),
        })
        row.update(rec.to_dict())
        rows.append(row)
    return rows


def run_encode(cfg: RunConfig) -> dict:
    img = read_pgm(cfg.carrier_path)
    check_n(img.n)
    phases = PhaseImage.from_gray(img, cfg.epsilon)
    state, trace = statevec.prepare_image_state(phases)
    recovered = statevec.extract_phases_exact(state)
    gray_back = phase_to_gray(recovered.phases, cfg.epsilon)
    mpe_state = statevec.reindex_to_mpe_form(state)
    if cfg.output_path:
        write_pgm(cfg.output_path, recovered.to_gray(cfg.epsilon), binary=not cfg.ascii)
    closed = statevec.image_state_amplitudes(phases.phases, phases.n)
    per_pixel = [
        {
            "pixel": j,
            "gray": int(img.pixels[j]),
            "phase": float(phases.phases[j]),
            "recovered_phase": float(recovered.phases[j]),
            "recovered_gray": int(gray_back[j]),
        }
        for j in range(phases.num_pixels)
    ]
    aggregate = {
        "n": phases.n,
        "state_dim": state.dim,
        "mpe_dim": mpe_state.dim,
        "hadamard_count": trace.hadamard_count,
        "controlled_rotation_count": trace.controlled_rotation_count,
        "state_norm": state.norm,
        "circuit_vs_closed_form_max_error": float(np.max(np.abs(state.amps - closed))),
        "roundtrip_max_phase_error": float(np.max(np.abs(recovered.phases - phases.phases))),
        "roundtrip_gray_exact": bool(np.array_equal(gray_back, img.pixels)),
    }
    return {"per_pixel": per_pixel, "aggregate": aggregate}


def _kinds(operator_kind: str) -> list[str]:
    return ["corrected", "naive"] if operator_kind == "both" else [operator_kind]


def run_synthesize(cfg: RunConfig) -> dict:
    carrier = _load_phase_image(cfg.carrier_path, cfg.epsilon)
    embedder = _load_phase_image(cfg.embedder_path, cfg.epsilon)
    runs = {}
    for kind in _kinds(cfg.operator_kind):
        runs[kind] = synthesize(
            carrier, embedder, cfg.n1, cfg.n2, cfg.mode, cfg.seed, kind,
            cfg.epsilon, uncertainty_samples=cfg.samples,
        )
    if cfg.output_path:
        for kind, path in _output_paths(cfg.output_path, list(runs)).items():
            out = runs[kind].result_image.phases
            side = 1 << carrier.n
            write_pgm(path, GrayImage(side, side, phase_to_gray(out, cfg.epsilon)),
                      binary=not cfg.ascii)
    per_pixel = []
    for run in runs.values():
        per_pixel.extend(_pixel_dicts(run))
    aggregate = {
        k: (runs[k].metrics.aggregate_dict() if k in runs else None)
        for k in ("corrected", "naive")
    }
    if len(runs) == 2:
        c = runs["corrected"].metrics.exception_rate
        n = runs["naive"].metrics.exception_rate
        aggregate["comparison"] = {
            "corrected_exception_rate": c,
            "naive_exception_rate": n,
            "corrected_le_naive": bool(c <= n),
        }
    else:
        aggregate["comparison"] = None
    aggregate["outputs"] = (
        _output_paths(cfg.output_path, list(runs)) if cfg.output_path else None
    )
    return {"per_pixel": per_pixel, "aggregate": aggregate}


GRID_POINTS = 10_000
GRID_LO, GRID_HI = 0.05, math.pi - 0.05


def run_analyze(cfg: RunConfig) -> dict:
    carrier = _load_phase_image(cfg.carrier_path, cfg.epsilon)
    embedder = _load_phase_image(cfg.embedder_path, cfg.epsilon)
    exact = synthesize(carrier, embedder, cfg.n1, cfg.n2, "exact", cfg.seed,
                       "corrected", cfg.epsilon, uncertainty_samples=0)
    noisy = synthesize(carrier, embedder, cfg.n1, cfg.n2, cfg.mode, cfg.seed,
                       "corrected", cfg.epsilon, uncertainty_samples=cfg.samples)
    naive = synthesize(carrier, embedder, cfg.n1, cfg.n2, cfg.mode, cfg.seed,
                       "naive", cfg.epsilon, uncertainty_samples=0)
    sums = np.linspace(GRID_LO, GRID_HI, GRID_POINTS)
    theoretical = {
        "grid_lo": GRID_LO,
        "grid_hi": GRID_HI,
        "grid_points": GRID_POINTS,
        "grid_interval_ratio": analysis.interval_ratio_from(sums, squash(sums)),
        "limit_interval_ratio": 0.5,
        "pointwise_ratio_at_grid_lo": analysis.pointwise_ratio(GRID_LO, 0.0, 0.0),
        "pointwise_ratio_at_grid_hi": analysis.pointwise_ratio(GRID_HI, 0.0, 0.0),
        "pointwise_ratio_limit_at_zero": math.pi / 2,
    }
    per_pixel = _pixel_dicts(exact, {"run": "exact"}) + _pixel_dicts(noisy, {"run": "noisy"})
    aggregate = {
        "exact": exact.metrics.aggregate_dict(),
        "noisy": noisy.metrics.aggregate_dict(),
        "naive": naive.metrics.aggregate_dict(),
        "theoretical": theoretical,
    }
    return {"per_pixel": per_pixel, "aggregate": aggregate}


def run_mpe_bench(cfg: RunConfig) -> dict:
    resources = cfg.resources or [cfg.n1]
    table = analysis.trend_table(resources, cfg.trials, cfg.seed, cfg.mode, cfg.epsilon)
    aggregate = {
        "trend": table,
        "spread_bound_ok": all(r["spread_bound_ok"] for r in table["single"]),
        "joint_bound_ok": all(r["joint_bound_ok"] for r in table["joint"]),
        "equality_corner_joint_lhs": analysis.joint_lhs(0.5, 0.5),
        "joint_bound": analysis.JOINT_BOUND,
    }
    return {"per_pixel": [], "aggregate": aggregate}


RUNNERS = {
    "encode": run_encode,
    "synthesize": run_synthesize,
    "analyze": run_analyze,
    "mpe-bench": run_mpe_bench,
}


def execute(cfg: RunConfig) -> int:
    """Run one command; returns the process exit status."""
    try:
        cfg.validate()
        body = RUNNERS[cfg.command](cfg)
        report = {"config": asdict(cfg), **body}
        if cfg.report_path:
            write_report(cfg.report_path, report)
    except ResourceCapError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CAP
    except PhaseSynthError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_VALIDATION
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_IO
    return EXIT_OK


def _env(flag: str) -> str:
    return "QIMG_" + flag.upper().replace("-", "_")


def _opt(flag, **kw):
    return click.option(f"--{flag}", envvar=_env(flag), show_envvar=True, **kw)


_carrier = _opt("carrier", type=click.Path(dir_okay=False), required=True,
                help="Carrier (host) image, 8-bit PGM.")
_embedder = _opt("embedder", type=click.Path(dir_okay=False), required=True,
                 help="Image embedded into the carrier, 8-bit PGM.")
_out = _opt("out", type=click.Path(dir_okay=False), default=None, help="Output PGM path.")
_report = _opt("report", type=click.Path(dir_okay=False), required=True,
               help="JSON report path.")
_n1 = _opt("n1", type=click.IntRange(min=1), default=64, show_default=True,
           help="Carrier estimation resource N1.")
_n2 = _opt("n2", type=click.IntRange(min=1), default=64, show_default=True,
           help="Embedder estimation resource N2.")
_mode = _opt("mode", type=click.Choice(["analytic", "povm", "exact"]), default="analytic",
             show_default=True, help="Phase estimation noise model.")
_seed = _opt("seed", type=click.IntRange(0, 2 ** 64 - 1), default=0, show_default=True)
_epsilon = _opt("epsilon", type=float, default=DEFAULT_EPSILON, show_default=True,
                help="Guard band keeping encoded phases inside (0, pi/2).")
_samples = _opt("samples", type=click.IntRange(min=0), default=10_000, show_default=True,
                help="Draws per stream for the uncertainty block (0 disables).")
_ascii = _opt("ascii", is_flag=True, default=False, help="Write P2 instead of P5.")


@click.group()
def main():
    """Phase-rotation synthesis of quantum images."""


def _finish(cfg: RunConfig):
    sys.exit(execute(cfg))


@main.command()
@_carrier
@_out
@_report
@_epsilon
@_ascii
def encode(carrier, out, report, epsilon, ascii):
    """Encode an image as a phase state and verify the round trip."""
    _finish(RunConfig("encode", carrier_path=carrier, output_path=out,
                      report_path=report, epsilon=epsilon, ascii=ascii))


@main.command(name="synthesize")
@_carrier
@_embedder
@_out
@_report
@_n1
@_n2
@_mode
@_opt("operator", type=click.Choice(["corrected", "naive", "both"]), default="corrected",
      show_default=True, help="Rotation operator.")
@_seed
@_epsilon
@_samples
@_ascii
def synthesize_cmd(carrier, embedder, out, report, n1, n2, mode, operator, seed,
                   epsilon, samples, ascii):
    """Embed EMBEDDER into CARRIER."""
    _finish(RunConfig("synthesize", carrier, embedder, out, report, n1, n2, mode,
                      operator, seed, epsilon, samples, ascii=ascii))


@main.command()
@_carrier
@_embedder
@_report
@_n1
@_n2
@_mode
@_seed
@_epsilon
@_samples
def analyze(carrier, embedder, report, n1, n2, mode, seed, epsilon, samples):
    """Compression-ratio, overflow and uncertainty diagnostics for an image pair."""
    _finish(RunConfig("analyze", carrier, embedder, None, report, n1, n2, mode,
                      "corrected", seed, epsilon, samples))


def _parse_resources(ctx, param, value):
    if value is None or value == "":
        return []
    try:
        out = [int(v) for v in str(value).split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter("expected a comma-separated list of integers")
    if any(v < 1 for v in out):
        raise click.BadParameter("resources must be >= 1")
    return out


@main.command(name="mpe-bench")
@_report
@_opt("resources", default="1,2,4,8,16,32", show_default=True, callback=_parse_resources,
      help="Comma-separated estimation resources N.")
@_opt("trials", type=click.IntRange(min=1000), default=100_000, show_default=True,
      help="Draws per resource.")
@_n1
@_opt("mode", type=click.Choice(["analytic", "povm"]), default="povm", show_default=True,
      help="Phase estimation noise model.")
@_seed
@_epsilon
def mpe_bench(report, resources, trials, n1, mode, seed, epsilon):
    """Benchmark phase-estimation precision against the uncertainty bounds."""
    _finish(RunConfig("mpe-bench", report_path=report, n1=n1, mode=mode, seed=seed,
                      epsilon=epsilon, resources=resources, trials=trials))


if __name__ == "__main__":
    main()
