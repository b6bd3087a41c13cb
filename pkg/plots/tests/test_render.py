"""Secondary acceptance: render both figure kinds from CSVs produced by the
primary CLI (consumed purely through its file interfaces)."""

import json
import subprocess
import sys

import numpy as np
import pytest

from capadof_plots import PlotInputError, PlotJob, render
from capadof_plots.cli import main as plot_main

SCENARIO = """\
[tx]
lx = "{side}lambda"
lz = "{side}lambda"

[rx]
lx = "{side}lambda"
lz = "{side}lambda"
"""

SWEEP = """\
[tx]
lx = "10lambda"
lz = "10lambda"

[rx]
lx = "10lambda"
lz = "10lambda"

[sweep]
parameter = "distance"
values = ["25lambda", "50lambda", "100lambda"]
"""


def run_capadof(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "capadof.cli", "--quiet", *argv],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory):
    """Spectrum CSVs for three aperture sizes plus a distance-sweep CSV."""
    tmp = tmp_path_factory.mktemp("capadof_outputs")
    spectra = {}
    for side in (5, 10, 15):
        cfg = tmp / f"scenario_{side}.toml"
        cfg.write_text(SCENARIO.format(side=side))
        out = tmp / f"spectrum_{side}lam.csv"
        run_capadof("spectrum", "--config", str(cfg), "--out", str(out), "--n", "16")
        spectra[side] = out
    sweep_cfg = tmp / "sweep.toml"
    sweep_cfg.write_text(SWEEP)
    sweep_out = tmp / "sweep.csv"
    run_capadof("sweep", "--config", str(sweep_cfg), "--out", str(sweep_out), "--n", "16")
    return tmp, spectra, sweep_out


def test_single_spectrum_smoke(artifacts, tmp_path):
    tmp, spectra, _ = artifacts
    out = tmp_path / "decay_single.png"
    result = render(PlotJob(inputs=(spectra[10],), output=out, kind="sv_decay"))
    assert out.exists() and out.stat().st_size > 0
    assert len(result.series_labels) == 1
    assert result.markers == [4]


def test_three_aperture_sizes_markers(artifacts, tmp_path):
    # closed-form DoF for 5/10/15-wavelength sides at 50 wavelengths is
    # 0.25, 4, 20.25, so the rounded markers land at 0, 4, 20
    tmp, spectra, _ = artifacts
    inputs = (spectra[5], spectra[10], spectra[15])
    out = tmp_path / "decay_three.png"
    job = PlotJob(inputs=inputs, output=out, kind="sv_decay", labels=("L=5", "L=10", "L=15"))
    result = render(job)
    assert out.exists()
    assert result.series_labels == ["L=5", "L=10", "L=15"]
    assert result.markers == [0, 4, 20]
    for path, marker in zip(inputs, result.markers):
        dof = json.loads(path.with_suffix(".json").read_text())["dof_formula"]
        assert marker == round(dof)


def test_edof_vs_distance(artifacts, tmp_path):
    tmp, _, sweep_out = artifacts
    out = tmp_path / "edof.png"
    result = render(PlotJob(inputs=(sweep_out,), output=out, kind="edof_vs_distance"))
    assert out.exists() and out.stat().st_size > 0
    assert len(result.series_labels) == 1
    # the plotted series is the file's edof column, monotone non-increasing
    rows = [line.split(",") for line in sweep_out.read_text().splitlines()[1:]]
    counts = [int(r[4]) for r in rows]
    assert all(a >= b for a, b in zip(counts, counts[1:]))


def test_series_count_matches_inputs(artifacts, tmp_path):
    tmp, spectra, sweep_out = artifacts
    for kind, inputs in [
        ("sv_decay", (spectra[5], spectra[10])),
        ("edof_vs_distance", (sweep_out,)),
    ]:
        result = render(PlotJob(inputs=inputs, output=tmp_path / f"{kind}.png", kind=kind))
        assert len(result.series_labels) == len(inputs)


def test_decay_without_sidecar_skips_marker(artifacts, tmp_path):
    _, spectra, _ = artifacts
    bare = tmp_path / "bare.csv"
    bare.write_text(spectra[10].read_text())
    result = render(PlotJob(inputs=(bare,), output=tmp_path / "bare.png", kind="sv_decay"))
    assert result.markers == []


def test_header_mismatch_names_column(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("index,sigma,signa_norm,eps_norm\n1,1.0,1.0,1.0\n")
    with pytest.raises(PlotInputError, match="signa_norm"):
        render(PlotJob(inputs=(bad,), output=tmp_path / "x.png", kind="sv_decay"))


def test_sweep_header_rejected_for_decay(artifacts, tmp_path):
    _, _, sweep_out = artifacts
    with pytest.raises(PlotInputError, match="column 1"):
        render(PlotJob(inputs=(sweep_out,), output=tmp_path / "x.png", kind="sv_decay"))


def test_missing_input_rejected(tmp_path):
    with pytest.raises(PlotInputError, match="not found"):
        PlotJob(inputs=(tmp_path / "ghost.csv",), output=tmp_path / "x.png", kind="sv_decay")


def test_unknown_kind_rejected(tmp_path):
    csv = tmp_path / "a.csv"
    csv.write_text("index,sigma,sigma_norm,eps_norm\n1,1.0,1.0,1.0\n")
    with pytest.raises(PlotInputError, match="kind"):
        PlotJob(inputs=(csv,), output=tmp_path / "x.png", kind="histogram")


def test_label_count_mismatch_rejected(tmp_path):
    csv = tmp_path / "a.csv"
    csv.write_text("index,sigma,sigma_norm,eps_norm\n1,1.0,1.0,1.0\n")
    with pytest.raises(PlotInputError, match="labels"):
        PlotJob(inputs=(csv,), output=tmp_path / "x.png", kind="sv_decay", labels=("a", "b"))


def test_empty_data_rejected(tmp_path):
    csv = tmp_path / "a.csv"
    csv.write_text("index,sigma,sigma_norm,eps_norm\n")
    with pytest.raises(PlotInputError, match="no data"):
        render(PlotJob(inputs=(csv,), output=tmp_path / "x.png", kind="sv_decay"))


def test_cli_renders_and_reports(artifacts, tmp_path, capsys):
    _, spectra, _ = artifacts
    out = tmp_path / "fig.png"
    code = plot_main(["--kind", "sv_decay", "--in", str(spectra[5]), str(spectra[10]), "--out", str(out)])
    assert code == 0
    assert out.exists()
    assert "2 series" in capsys.readouterr().out


def test_cli_exit_code_on_bad_input(tmp_path):
    code = plot_main(["--kind", "sv_decay", "--in", str(tmp_path / "none.csv"), "--out", str(tmp_path / "x.png")])
    assert code == 2
