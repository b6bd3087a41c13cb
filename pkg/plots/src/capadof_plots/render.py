"""Render capadof CSV outputs as figures.

Two figure kinds, matching the two CSV contracts of the capadof CLI:

* ``sv_decay`` — normalized singular values vs index on a log scale, one
  curve per input spectrum CSV, with a vertical marker at the rounded
  closed-form DoF taken from each CSV's JSON sidecar (``<input>.json``) when
  present.
* ``edof_vs_distance`` — effective DoF counts vs distance-in-wavelengths
  from a sweep CSV, with the closed-form DoF column overlaid as a dashed
  curve.

This module performs no numerics beyond reading columns that are already in
the files. It never imports the capadof package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["PlotJob", "RenderResult", "PlotInputError", "render"]

SPECTRUM_HEADER = ["index", "sigma", "sigma_norm", "eps_norm"]
SWEEP_HEADER = ["param_value", "D_over_lambda", "det_eprime", "dof_formula", "edof_count", "plateau_sv"]

PLOT_KINDS = ("sv_decay", "edof_vs_distance")


class PlotInputError(ValueError):
    """An input file is missing or does not match the expected CSV contract."""


@dataclass(frozen=True)
class PlotJob:
    """One figure to render: input CSVs, output image path, kind, labels."""

    inputs: tuple
    output: Path
    kind: str
    labels: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in PLOT_KINDS:
            raise PlotInputError(f"unknown plot kind {self.kind!r}; expected one of {PLOT_KINDS}")
        if not self.inputs:
            raise PlotInputError("at least one input CSV is required")
        object.__setattr__(self, "inputs", tuple(Path(p) for p in self.inputs))
        object.__setattr__(self, "output", Path(self.output))
        for p in self.inputs:
            if not p.exists():
                raise PlotInputError(f"input file not found: {p}")
        if self.labels is not None:
            if len(self.labels) != len(self.inputs):
                raise PlotInputError(
                    f"{len(self.labels)} labels for {len(self.inputs)} inputs"
                )
            object.__setattr__(self, "labels", tuple(self.labels))


@dataclass
class RenderResult:
    """What was drawn, for callers and tests."""

    output: Path
    series_labels: list = field(default_factory=list)
    markers: list = field(default_factory=list)  # rounded DoF positions, decay plot only


def _check_header(path: Path, got: Sequence[str], expected: Sequence[str]) -> None:
    for pos, (g, e) in enumerate(zip(got, expected)):
        if g != e:
            raise PlotInputError(
                f"{path}: column {pos + 1} is {g!r}, expected {e!r}"
            )
    if len(got) != len(expected):
        raise PlotInputError(
            f"{path}: expected {len(expected)} columns {list(expected)}, got {len(got)}"
        )


def _read_csv(path: Path, expected_header: Sequence[str]) -> dict:
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise PlotInputError(f"{path}: empty file")
    _check_header(path, lines[0].split(","), expected_header)
    columns = {name: [] for name in expected_header}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(expected_header):
            raise PlotInputError(f"{path}: row {lineno}: expected {len(expected_header)} fields")
        for name, value in zip(expected_header, parts):
            columns[name].append(value)
    if not columns[expected_header[0]]:
        raise PlotInputError(f"{path}: no data rows")
    return columns


def _floats(column) -> np.ndarray:
    return np.array([float(v) for v in column])


def _sidecar_dof(path: Path) -> Optional[float]:
    sidecar = path.with_suffix(".json")
    if not sidecar.exists():
        return None
    payload = json.loads(sidecar.read_text(encoding="utf-8"))
    value = payload.get("dof_formula")
    return float(value) if value is not None else None


def _render_sv_decay(job: PlotJob, ax) -> RenderResult:
    result = RenderResult(output=job.output)
    for i, path in enumerate(job.inputs):
        cols = _read_csv(path, SPECTRUM_HEADER)
        index = _floats(cols["index"])
        sigma_norm = _floats(cols["sigma_norm"])
        label = job.labels[i] if job.labels else path.stem
        ax.semilogy(index, sigma_norm, label=label)
        result.series_labels.append(label)
        dof = _sidecar_dof(path)
        if dof is not None:
            marker = round(dof)
            ax.axvline(marker, linestyle=":", color="gray", linewidth=1)
            result.markers.append(marker)
    ax.set_xlabel("singular value index")
    ax.set_ylabel("normalized singular value")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    return result


def _render_edof_vs_distance(job: PlotJob, ax) -> RenderResult:
    result = RenderResult(output=job.output)
    for i, path in enumerate(job.inputs):
        cols = _read_csv(path, SWEEP_HEADER)
        d_over_lambda = _floats(cols["D_over_lambda"])
        edof = _floats(cols["edof_count"])
        dof_formula = _floats(cols["dof_formula"])
        label = job.labels[i] if job.labels else path.stem
        ax.plot(d_over_lambda, edof, marker="o", label=label)
        result.series_labels.append(label)
        ax.plot(d_over_lambda, dof_formula, linestyle="--", alpha=0.7, label=f"{label} (closed form)")
    ax.set_xlabel("distance / wavelength")
    ax.set_ylabel("effective DoF")
    ax.legend()
    ax.grid(True, alpha=0.3)
    return result


def render(job: PlotJob) -> RenderResult:
    """Render the job to its output image; returns what was drawn."""
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        if job.kind == "sv_decay":
            result = _render_sv_decay(job, ax)
        else:
            result = _render_edof_vs_distance(job, ax)
        fig.tight_layout()
        job.output.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(job.output, dpi=150)
    finally:
        plt.close(fig)
    return result
