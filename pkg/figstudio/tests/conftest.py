"""Fixtures: a real sweep directory produced through the coevonet CLI.

figstudio consumes only the documented artifact formats, so the fixture
invokes the simulator as a subprocess rather than importing it.
"""

from __future__ import annotations

import hashlib
import json
import subprocess
import sys
from pathlib import Path

import pytest

SWEEP_ARGS = [
    "--network", "ba", "--n", "40", "--m", "3",
    "--theta-grid", "0:0.75:0.25", "--replicates", "2",
    "--iters", "40", "--metric-every", "10",
    "--snapshots", "0:40:8", "--snapshot-reps", "0",
    "--seed", "42",
]


@pytest.fixture(scope="session")
def sweep_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("input") / "sweep"
    cmd = [sys.executable, "-m", "coevonet.cli", "sweep", *SWEEP_ARGS,
           "--out-dir", str(out)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, f"sweep failed: {proc.stderr}"
    assert (out / "manifest.json").exists()
    return out


def tree_bytes(root: Path) -> dict[str, bytes]:
    return {p.relative_to(root).as_posix(): p.read_bytes()
            for p in sorted(root.rglob("*")) if p.is_file()}


def make_uniform_snapshot_dir(root: Path, n: int = 24,
                              iters=(0, 8, 16, 24, 32, 40)) -> Path:
    """Synthetic sweep dir whose snapshots are all-ones similarity matrices."""
    import numpy as np
    import struct

    run_rel = Path("theta_0") / "rep_0" / "snapshots"
    (root / run_rel).mkdir(parents=True)
    artifacts = []
    for it in iters:
        blob = struct.pack("<I", n) + np.ones((n, n), dtype="<f8").tobytes()
        rel = (run_rel / f"sim_{it}.bin").as_posix()
        (root / rel).write_bytes(blob)
        artifacts.append({"path": rel, "sha256": hashlib.sha256(blob).hexdigest(),
                          "theta": 0.0, "replicate": 0})
    manifest = {
        "format_version": 1,
        "config": {"theta_grid": [0.0], "replicates": 1},
        "config_hash": "0" * 64,
        "artifacts": artifacts,
        "aggregate_path": "aggregate.csv",
    }
    (root / "manifest.json").write_text(json.dumps(manifest))
    return root
