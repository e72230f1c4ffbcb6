import hashlib
import json
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from figstudio import FIGURES, FigureJob, render

from conftest import make_uniform_snapshot_dir, tree_bytes

EXPECTED_SERIES = {
    "modularity-trajectories": ("series", 4),   # one line per theta
    "modularity-box": ("series", 4),            # one box per theta
    "degree-fits": ("series", 4),               # one run per theta
    "similarity-grid": ("tiles", 6),            # six snapshot iterations
    "smax-by-theta": ("points", 4),             # one point per theta
}


class TestAllFigures:
    @pytest.mark.parametrize("figure", FIGURES)
    def test_renders_with_expected_counts(self, figure, sweep_dir, tmp_path):
        out = tmp_path / f"{figure}.png"
        summary = render(FigureJob(figure=figure, input_dir=sweep_dir,
                                   output_path=out))
        assert out.exists() and out.stat().st_size > 1000
        key, expected = EXPECTED_SERIES[figure]
        assert summary[key] == expected, summary

    @pytest.mark.parametrize("figure", FIGURES)
    def test_rerender_is_pixel_identical(self, figure, sweep_dir, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        render(FigureJob(figure=figure, input_dir=sweep_dir, output_path=a))
        render(FigureJob(figure=figure, input_dir=sweep_dir, output_path=b))
        assert a.read_bytes() == b.read_bytes()

    def test_input_directory_is_untouched(self, sweep_dir, tmp_path):
        before = tree_bytes(sweep_dir)
        for figure in FIGURES:
            render(FigureJob(figure=figure, input_dir=sweep_dir,
                             output_path=tmp_path / f"{figure}.png"))
        assert tree_bytes(sweep_dir) == before

    def test_config_hash_embedded_in_metadata(self, sweep_dir, tmp_path):
        out = tmp_path / "t.png"
        summary = render(FigureJob(figure="smax-by-theta", input_dir=sweep_dir,
                                   output_path=out))
        info = Image.open(out).info
        assert summary["config_hash"] in info.get("Comment", "")

    def test_style_preset_changes_geometry(self, sweep_dir, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        render(FigureJob(figure="modularity-box", input_dir=sweep_dir,
                         output_path=a, style="default"))
        render(FigureJob(figure="modularity-box", input_dir=sweep_dir,
                         output_path=b, style="paper"))
        assert Image.open(a).size != Image.open(b).size

    def test_unknown_figure_rejected(self, sweep_dir, tmp_path):
        with pytest.raises(ValueError):
            render(FigureJob(figure="pie-chart", input_dir=sweep_dir,
                             output_path=tmp_path / "x.png"))

    def test_non_png_output_rejected(self, sweep_dir, tmp_path):
        with pytest.raises(ValueError):
            render(FigureJob(figure="modularity-box", input_dir=sweep_dir,
                             output_path=tmp_path / "x.pdf"))


class TestModularityBoxFixture:
    def test_hand_quartiles_drawn(self, tmp_path):
        # Aggregate of final Q values {1,2,3,4}: whiskers at 1 and 4,
        # median 2.5, quartiles 1.5/3.5 under the midpoint convention.
        root = tmp_path / "fixture"
        root.mkdir()
        agg = ("theta,metric,count,mean,std,min,q1,median,q3,max\n"
               "0.1,q_modularity,4,2.5,1.118,1.0,1.5,2.5,3.5,4.0\n"
               "0.1,smax_ratio,4,0.5,0.0,0.5,0.5,0.5,0.5,0.5\n")
        (root / "aggregate.csv").write_text(agg)
        manifest = {
            "format_version": 1,
            "config": {"theta_grid": [0.1], "replicates": 4},
            "config_hash": "0" * 64,
            "artifacts": [{"path": "aggregate.csv",
                           "sha256": hashlib.sha256(agg.encode()).hexdigest(),
                           "theta": None, "replicate": None}],
        }
        (root / "manifest.json").write_text(json.dumps(manifest))
        summary = render(FigureJob(figure="modularity-box", input_dir=root,
                                   output_path=tmp_path / "box.png"))
        (stats,) = summary["box_stats"]
        assert stats["whislo"] == 1.0 and stats["whishi"] == 4.0
        assert stats["med"] == 2.5
        assert stats["q1"] == 1.5 and stats["q3"] == 3.5


class TestSimilarityGridFixture:
    def test_uniform_states_give_uniform_tiles(self, tmp_path):
        root = make_uniform_snapshot_dir(tmp_path / "uniform")
        out = tmp_path / "grid.png"
        summary = render(FigureJob(figure="similarity-grid", input_dir=root,
                                   output_path=out))
        assert summary["tiles"] == 6
        img = np.asarray(Image.open(out).convert("RGB"), dtype=float)
        tiles = []
        for r0, r1, c0, c1 in summary["tile_pixel_boxes"]:
            tile = img[r0:r1, c0:c1]
            assert tile.size > 0
            assert tile.var(axis=(0, 1)).max() == 0.0, \
                "uniform similarity must render flat tiles"
            tiles.append(tile[0, 0].tolist())
        assert all(t == tiles[0] for t in tiles)

    def test_theta_selection(self, sweep_dir, tmp_path):
        summary = render(FigureJob(figure="similarity-grid", input_dir=sweep_dir,
                                   output_path=tmp_path / "g.png",
                                   theta=0.0, replicate=0))
        assert summary["tiles"] == 6

    def test_missing_snapshots_named(self, sweep_dir, tmp_path):
        from figstudio import ArtifactError
        with pytest.raises(ArtifactError):
            render(FigureJob(figure="similarity-grid", input_dir=sweep_dir,
                             output_path=tmp_path / "g.png", replicate=1))


class TestDegreeFitSelection:
    def test_single_theta(self, sweep_dir, tmp_path):
        summary = render(FigureJob(figure="degree-fits", input_dir=sweep_dir,
                                   output_path=tmp_path / "d.png", theta=0.5))
        assert summary["series"] == 1
