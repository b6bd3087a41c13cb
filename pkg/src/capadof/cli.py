"""Command-line interface: scenario runs, sweeps, and water-filling.

Subcommands
-----------
spectrum   compute the singular spectrum, write CSV + DofReport JSON sidecar
sweep      run a parameter sweep, one CSV row per value
dof        run the pipeline and write only the DofReport JSON
waterfill  allocate power over a previously computed spectrum CSV

Exit codes: 0 ok, 2 config error, 3 numerical error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .capacity import water_fill
from .config import (
    ScenarioConfig,
    SweepSpec,
    apply_sweep_value,
    load_scenario,
    load_sweep,
)
from .errors import ConfigError, DomainError, NumericalError
from .kernels import KernelKind
from .landau import DofReport, analyze_polarization, dof_closed_form
from .nystrom import SingularSpectrum, refine_until_converged

__all__ = ["main", "run_scenario", "SPECTRUM_CSV_HEADER", "SWEEP_CSV_HEADER"]

log = logging.getLogger(__name__)

SPECTRUM_CSV_HEADER = "index,sigma,sigma_norm,eps_norm"
SWEEP_CSV_HEADER = "param_value,D_over_lambda,det_eprime,dof_formula,edof_count,plateau_sv"


def run_scenario(cfg: ScenarioConfig) -> tuple[SingularSpectrum, DofReport]:
    """Compute a convergence-audited spectrum and its DoF report.

    Refinement starts at half the configured grid so the returned spectrum
    is never coarser than ``numerics.n_per_dim`` and carries an audited
    convergence flag.
    """
    dof = dof_closed_form(cfg.medium, cfg.geometry)
    k_track = max(2 * round(dof), 10)
    n_start = max(4, cfg.numerics.n_per_dim // 2)
    spectrum = refine_until_converged(
        cfg.kernel_kind,
        cfg.medium,
        cfg.geometry,
        n_start=n_start,
        tol=cfg.numerics.tol,
        k_track=k_track,
        n_cap=cfg.numerics.n_cap,
    )
    if not spectrum.converged:
        log.warning(
            "spectrum not converged to tol=%g within n_cap=%d nodes per dimension",
            cfg.numerics.tol,
            cfg.numerics.n_cap,
        )
    report = analyze_polarization(spectrum, cfg.medium, cfg.geometry, cfg.numerics.threshold)
    return spectrum, report


def _fmt(x: float) -> str:
    """Decimal-point float formatting with round-trip-safe precision."""
    return format(float(x), ".17g")


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    log.info("wrote %s", path)


def spectrum_csv_text(spectrum: SingularSpectrum) -> str:
    norm = spectrum.normalized()
    lines = [SPECTRUM_CSV_HEADER]
    for i, (s, sn) in enumerate(zip(spectrum.values, norm), start=1):
        lines.append(f"{i},{_fmt(s)},{_fmt(sn)},{_fmt(sn * sn)}")
    return "\n".join(lines) + "\n"


def _report_json_text(report: DofReport, converged: bool) -> str:
    payload = report.to_json_dict()
    payload["converged"] = converged
    return json.dumps(payload, indent=2) + "\n"


def _apply_overrides(cfg: ScenarioConfig, args) -> ScenarioConfig:
    from dataclasses import replace

    if getattr(args, "kernel", None) is not None:
        cfg = replace(cfg, kernel_kind=KernelKind(args.kernel))
    numerics = cfg.numerics
    if getattr(args, "n", None) is not None:
        if args.n < 4:
            raise ConfigError(f"--n must be >= 4, got {args.n}")
        # an explicit grid request pins the refinement cap to that grid
        numerics = replace(numerics, n_per_dim=args.n, n_cap=args.n)
    if getattr(args, "threshold", None) is not None:
        if not 0.0 < args.threshold < 1.0:
            raise ConfigError(f"--threshold must lie in (0, 1), got {args.threshold}")
        numerics = replace(numerics, threshold=args.threshold)
    return replace(cfg, numerics=numerics)


def _cmd_spectrum(args) -> None:
    cfg = _apply_overrides(load_scenario(args.config), args)
    spectrum, report = run_scenario(cfg)
    out = Path(args.out)
    _write_text(out, spectrum_csv_text(spectrum))
    _write_text(out.with_suffix(".json"), _report_json_text(report, spectrum.converged))


def _cmd_dof(args) -> None:
    cfg = _apply_overrides(load_scenario(args.config), args)
    spectrum, report = run_scenario(cfg)
    _write_text(Path(args.out), _report_json_text(report, spectrum.converged))


def _cmd_sweep(args) -> None:
    sweep = load_sweep(args.config)
    base = _apply_overrides(sweep.fixed, args)
    rows = [SWEEP_CSV_HEADER]
    for value in sweep.values:
        cfg = apply_sweep_value(base, sweep.parameter, value)
        spectrum, report = run_scenario(cfg)
        d_over_lambda = cfg.geometry.distance / cfg.medium.wavelength
        plateau = "" if report.plateau_sv is None else _fmt(report.plateau_sv)
        rows.append(
            f"{_fmt(value)},{_fmt(d_over_lambda)},{_fmt(report.det_eprime)},"
            f"{_fmt(report.dof_formula)},{report.edof_count},{plateau}"
        )
    _write_text(Path(args.out), "\n".join(rows) + "\n")


def read_spectrum_csv(path) -> np.ndarray:
    """Singular values from a spectrum CSV; raises ConfigError naming the row."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError:
        raise
    if not lines or lines[0] != SPECTRUM_CSV_HEADER:
        raise ConfigError(
            f"{path}: expected header {SPECTRUM_CSV_HEADER!r}, got {lines[0] if lines else 'empty file'!r}"
        )
    sigmas = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ConfigError(f"{path}: row {lineno}: expected 4 columns, got {len(parts)}")
        try:
            sigmas.append(float(parts[1]))
        except ValueError:
            raise ConfigError(f"{path}: row {lineno}: cannot parse sigma {parts[1]!r}") from None
    if not sigmas:
        raise ConfigError(f"{path}: no data rows")
    return np.array(sigmas)


def _cmd_waterfill(args) -> None:
    if not args.noise > 0:
        raise ConfigError(f"--noise must be positive, got {args.noise}")
    sigmas = read_spectrum_csv(args.input)
    gains = sigmas**2 / args.noise
    result = water_fill(gains, args.power)
    _write_text(Path(args.out), json.dumps(result.to_json_dict(), indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capadof",
        description="Singular spectrum and spatial degrees of freedom of "
        "continuous-aperture line-of-sight channels.",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress progress logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_quiet_flag(p):
        # SUPPRESS keeps a subcommand-level flag from clobbering the
        # top-level value when the flag is given before the subcommand
        p.add_argument(
            "--quiet", action="store_true", default=argparse.SUPPRESS,
            help="suppress progress logging",
        )

    def add_scenario_flags(p):
        p.add_argument("--config", required=True, help="scenario config file (TOML)")
        p.add_argument("--out", required=True, help="output path")
        p.add_argument(
            "--kernel",
            choices=[k.value for k in KernelKind],
            help="override kernel_kind from the config",
        )
        p.add_argument("--n", type=int, help="override numerics.n_per_dim")
        p.add_argument("--threshold", type=float, help="override numerics.threshold")
        add_quiet_flag(p)

    p_spec = sub.add_parser("spectrum", help="singular spectrum CSV + DofReport sidecar")
    add_scenario_flags(p_spec)
    p_spec.set_defaults(func=_cmd_spectrum)

    p_sweep = sub.add_parser("sweep", help="parameter sweep CSV")
    add_scenario_flags(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_dof = sub.add_parser("dof", help="DofReport JSON only")
    add_scenario_flags(p_dof)
    p_dof.set_defaults(func=_cmd_dof)

    p_wf = sub.add_parser("waterfill", help="water-filling over a spectrum CSV")
    p_wf.add_argument("--in", dest="input", required=True, help="spectrum CSV path")
    p_wf.add_argument("--noise", type=float, required=True, help="noise power (linear)")
    p_wf.add_argument("--power", type=float, required=True, help="total transmit power")
    p_wf.add_argument("--out", required=True, help="output JSON path")
    add_quiet_flag(p_wf)
    p_wf.set_defaults(func=_cmd_waterfill)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if getattr(args, "quiet", False) else logging.INFO,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
