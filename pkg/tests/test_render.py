"""
Tests for SVG and PNG output
"""

import sys
import tempfile
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from app.embedder import embed  # noqa: E402
from app.render import (  # noqa: E402
    RenderOptions,
    arc_points,
    render_svg,
    write_png,
    write_svg,
)
from app.tritree import generate_random  # noqa: E402
from tests.test_utils import k4  # noqa: E402


def _ids(svg, prefix):
    root = ET.fromstring(svg)
    ids = (el.get("id") or "" for el in root.iter())
    return {gid for gid in ids if gid.startswith(prefix)}


class TestArcPoints:
    """Preimages of stretched segments"""

    def test_endpoints(self):
        samples = arc_points((0, 2), (10, 7), 112, 16)
        assert samples[0] == (0, 2)
        assert samples[-1] == (10, 7)
        assert len(samples) == 16

    def test_flat_segment_stays_flat(self):
        samples = arc_points((0, 5), (8, 5), 112, 5)
        assert all(y == 5 for _, y in samples)

    @pytest.mark.parametrize("p, q", [((0, 0), (10, 10)), ((0, 9), (10, 1))])
    def test_bows_toward_higher_endpoint(self, p, q):
        samples = arc_points(p, q, 448, 9)
        for i, (x, y) in enumerate(samples[1:-1], start=1):
            t = i / 8
            chord = p[1] + t * (q[1] - p[1])
            assert y >= chord
            assert min(p[1], q[1]) <= y <= max(p[1], q[1])


class TestRenderOptions:
    """Validation and config mapping"""

    def test_invalid_samples(self):
        with pytest.raises(ValueError):
            RenderOptions(arc_samples=1)

    def test_invalid_scale(self):
        with pytest.raises(ValueError):
            RenderOptions(scale=0)

    def test_from_config_with_overrides(self):
        config = {
            "render_scale": 2.5,
            "render_arc_samples": 12,
            "render_show_grid": True,
        }
        options = RenderOptions.from_config(config, arc_samples=None, stretched_y=True)
        assert options == RenderOptions(
            scale=2.5, arc_samples=12, show_grid=True, stretched_y=True
        )


class TestSvg:
    """SVG drawings"""

    def test_one_group_per_edge_and_vertex(self):
        tree = generate_random(12, 4)
        svg = render_svg(tree, embed(tree), RenderOptions(scale=1.0, arc_samples=8))
        edges = _ids(svg, "edge-")
        assert edges == {f"edge-{u}-{v}" for u, v in tree.edges()}
        assert len(_ids(svg, "vertex-")) == tree.n

    def test_deterministic(self):
        tree = k4()
        result = embed(tree)
        options = RenderOptions(scale=2.0)
        assert render_svg(tree, result, options) == render_svg(tree, result, options)

    def test_grid_overlay(self):
        tree = k4()
        result = embed(tree)
        with_grid = render_svg(tree, result, RenderOptions(scale=1.0, show_grid=True))
        assert _ids(with_grid, "grid")
        capped = RenderOptions(scale=1.0, show_grid=True, grid_limit=10)
        assert not _ids(render_svg(tree, result, capped), "grid")

    def test_stretched_view(self):
        tree = k4()
        svg = render_svg(tree, embed(tree), RenderOptions(scale=1.0, stretched_y=True))
        assert len(_ids(svg, "edge-")) == 6

    def test_write_files(self):
        tree = k4()
        result = embed(tree)
        with tempfile.TemporaryDirectory() as tmpdir:
            svg_path = Path(tmpdir) / "k4.svg"
            png_path = Path(tmpdir) / "k4.png"
            write_svg(tree, result, svg_path, RenderOptions(scale=1.0))
            write_png(tree, result, png_path, RenderOptions(scale=1.0))
            assert svg_path.read_text(encoding="utf-8").lstrip().startswith("<?xml")
            assert png_path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
