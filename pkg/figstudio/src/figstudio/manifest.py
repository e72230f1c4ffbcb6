"""Reading and integrity-checking coevonet sweep artifacts.

A sweep directory carries a manifest.json listing every artifact with its
sha256. Renderers verify each file they read against the manifest before
touching it, so stale or edited data is refused rather than silently drawn.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np


class ArtifactError(RuntimeError):
    """A required artifact is missing or unlisted."""


class TamperError(RuntimeError):
    """An artifact's content does not match its manifest hash."""


class SweepArtifacts:
    """Hash-verified access to one sweep directory."""

    def __init__(self, root: Path):
        self.root = Path(root)
        manifest_path = self.root / "manifest.json"
        if not manifest_path.exists():
            raise ArtifactError(f"missing manifest: {manifest_path}")
        self.manifest = json.loads(manifest_path.read_text())
        self.config_hash: str = self.manifest["config_hash"]
        self._hashes = {a["path"]: a["sha256"] for a in self.manifest["artifacts"]}
        self._entries = self.manifest["artifacts"]

    # -- integrity ---------------------------------------------------------

    def verified_bytes(self, rel_path: str) -> bytes:
        if rel_path not in self._hashes:
            raise ArtifactError(f"artifact not listed in manifest: {rel_path}")
        path = self.root / rel_path
        if not path.exists():
            raise ArtifactError(f"missing artifact: {path}")
        data = path.read_bytes()
        if hashlib.sha256(data).hexdigest() != self._hashes[rel_path]:
            raise TamperError(f"artifact hash mismatch: {path}")
        return data

    def verified_text(self, rel_path: str) -> str:
        return self.verified_bytes(rel_path).decode()

    # -- structure ---------------------------------------------------------

    @property
    def theta_grid(self) -> list[float]:
        return list(self.manifest["config"]["theta_grid"])

    @property
    def replicates(self) -> int:
        return int(self.manifest["config"]["replicates"])

    def run_paths(self, kind: str) -> list[tuple[float, int, str]]:
        """(theta, replicate, rel_path) entries of one artifact kind, sorted."""
        suffix = {
            "series": "series.csv",
            "edges": "final_edges.txt",
            "states": "final_states.csv",
            "fit": "degree_fit.json",
        }[kind]
        found = [(e["theta"], e["replicate"], e["path"]) for e in self._entries
                 if e["path"].endswith(suffix) and e["theta"] is not None]
        return sorted(found)

    def snapshot_paths(self, theta: float | None = None,
                       replicate: int | None = None) -> list[tuple[int, str]]:
        """(iteration, rel_path) snapshot entries of one run, sorted by iteration.

        Defaults to the first (theta, replicate) that has snapshots.
        """
        snaps = [e for e in self._entries if "/snapshots/sim_" in e["path"]]
        if theta is not None:
            snaps = [e for e in snaps if e["theta"] == theta]
        if replicate is not None:
            snaps = [e for e in snaps if e["replicate"] == replicate]
        if not snaps:
            raise ArtifactError("no similarity snapshots match the request")
        first = min((e["theta"], e["replicate"]) for e in snaps)
        out = []
        for e in snaps:
            if (e["theta"], e["replicate"]) != first:
                continue
            iteration = int(e["path"].rsplit("sim_", 1)[1].split(".")[0])
            out.append((iteration, e["path"]))
        return sorted(out)


# ---------------------------------------------------------------------------
# Format readers (the documented coevonet artifact formats)
# ---------------------------------------------------------------------------

def parse_series(text: str) -> dict[str, np.ndarray]:
    """series.csv -> column arrays; metric columns hold NaN where thinned."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    cols: dict[str, list] = {h: [] for h in header}
    for ln in lines[1:]:
        for h, v in zip(header, ln.split(",")):
            cols[h].append(v)

    def floats(name):
        return np.array([float(v) if v else np.nan for v in cols[name]])

    return {
        "theta": floats("theta"),
        "replicate": floats("replicate").astype(int),
        "iteration": floats("iteration").astype(int),
        "q_modularity": floats("q_modularity"),
        "smax_ratio": floats("smax_ratio"),
    }


def parse_aggregate(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        raw = dict(zip(header, ln.split(",")))
        rows.append({"theta": float(raw["theta"]), "metric": raw["metric"],
                     **{k: float(raw[k]) for k in
                        ("count", "mean", "std", "min", "q1", "median", "q3", "max")}})
    return rows


def parse_degrees(edge_text: str) -> np.ndarray:
    """Degree sequence from the canonical edge-list format."""
    lines = [ln for ln in edge_text.splitlines() if ln.strip()]
    meta = dict(item.split("=") for item in lines[0].lstrip("#").split())
    deg = np.zeros(int(meta["nodes"]), dtype=np.int64)
    for ln in lines[1:]:
        u, v = ln.split()
        deg[int(u)] += 1
        deg[int(v)] += 1
    return deg


def parse_sim_matrix(blob: bytes) -> np.ndarray:
    """Binary snapshot: little-endian uint32 N then N*N little-endian doubles."""
    n = struct.unpack_from("<I", blob, 0)[0]
    return np.frombuffer(blob, dtype="<f8", offset=4, count=n * n).reshape(n, n)
