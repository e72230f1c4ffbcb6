"""Integrity behavior: tampered or missing artifacts must refuse to render."""

import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from figstudio import FigureJob, TamperError, render
from figstudio.manifest import ArtifactError


def _cli(*args) -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, "-m", "figstudio.cli", *args],
                          capture_output=True, text=True)


@pytest.fixture
def sweep_copy(sweep_dir, tmp_path) -> Path:
    dst = tmp_path / "copy"
    shutil.copytree(sweep_dir, dst)
    return dst


class TestTamperRefusal:
    def test_api_raises_on_edited_artifact(self, sweep_copy, tmp_path):
        target = sweep_copy / "aggregate.csv"
        target.write_text(target.read_text().replace("0.", "1.", 1))
        with pytest.raises(TamperError, match="aggregate.csv"):
            render(FigureJob(figure="modularity-box", input_dir=sweep_copy,
                             output_path=tmp_path / "x.png"))

    def test_cli_exits_nonzero_on_tamper(self, sweep_copy, tmp_path):
        target = sweep_copy / "theta_0" / "rep_0" / "series.csv"
        with target.open("a") as f:
            f.write("junk\n")
        proc = _cli("render", "--figure", "modularity-trajectories",
                    "--input", str(sweep_copy), "--out", str(tmp_path / "x.png"))
        assert proc.returncode == 1
        assert "series.csv" in proc.stderr
        assert not (tmp_path / "x.png").exists()

    def test_cli_exits_nonzero_on_missing_artifact(self, sweep_copy, tmp_path):
        victim = sweep_copy / "theta_0" / "rep_0" / "snapshots" / "sim_0.bin"
        victim.unlink()
        proc = _cli("render", "--figure", "similarity-grid",
                    "--input", str(sweep_copy), "--out", str(tmp_path / "x.png"))
        assert proc.returncode == 1
        assert "sim_0.bin" in proc.stderr

    def test_api_raises_on_missing_manifest(self, tmp_path):
        (tmp_path / "empty").mkdir()
        with pytest.raises(ArtifactError, match="manifest"):
            render(FigureJob(figure="modularity-box",
                             input_dir=tmp_path / "empty",
                             output_path=tmp_path / "x.png"))


class TestCliSuccess:
    def test_render_all_figures_via_cli(self, sweep_dir, tmp_path):
        for figure in ("modularity-trajectories", "modularity-box",
                       "degree-fits", "similarity-grid", "smax-by-theta"):
            out = tmp_path / f"{figure}.png"
            proc = _cli("render", "--figure", figure, "--input", str(sweep_dir),
                        "--out", str(out), "--style", "paper")
            assert proc.returncode == 0, proc.stderr
            assert out.exists()
            assert figure in proc.stdout

    def test_usage_error_is_exit_two(self):
        proc = _cli("render", "--figure", "nope", "--input", "x", "--out", "y.png")
        assert proc.returncode == 2
