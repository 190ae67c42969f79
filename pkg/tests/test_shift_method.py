"""
Tests for canonical ordering and the shift method
"""

import sys
from pathlib import Path

import networkx as nx
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from app.exactgeom import find_crossings, plain_orient, strictly_inside  # noqa: E402
from app.shift_method import (  # noqa: E402
    CanonicalOrderError,
    canonical_ordering,
    shift_method_layout,
)
from app.tritree import ROOT_TRIANGLE, generate_random  # noqa: E402
from tests.test_utils import k4  # noqa: E402


def _layout(tree):
    embedding = tree.plane_embedding()
    order = canonical_ordering(embedding, ROOT_TRIANGLE)
    return order, shift_method_layout(embedding, order)


class TestCanonicalOrdering:
    """Leaf-peeling canonical ordering"""

    def test_k4(self):
        order = canonical_ordering(k4().plane_embedding(), ROOT_TRIANGLE)
        assert order == [0, 1, 3, 2]

    @pytest.mark.parametrize("model", ["uniform-face", "path", "balanced"])
    def test_is_a_permutation_with_fixed_ends(self, model):
        tree = generate_random(40, 3, model)
        order = canonical_ordering(tree.plane_embedding(), ROOT_TRIANGLE)
        assert sorted(order) == list(range(tree.n))
        assert order[:2] == [0, 1]
        assert order[-1] == 2

    def test_prefixes_stay_connected(self):
        tree = generate_random(30, 8)
        graph = tree.to_graph()
        order = canonical_ordering(tree.plane_embedding(), ROOT_TRIANGLE)
        for k in range(3, tree.n + 1):
            assert nx.is_connected(graph.subgraph(order[:k]))

    def test_wrong_outer_face(self):
        embedding = generate_random(10, 0).plane_embedding()
        with pytest.raises(CanonicalOrderError):
            canonical_ordering(embedding, (1, 0, 2))


class TestShiftLayout:
    """Shift-method coordinates"""

    def test_k4_coordinates(self):
        _, pos = _layout(k4())
        assert pos == {0: (0, 0), 1: (4, 0), 2: (2, 2), 3: (2, 1)}

    @pytest.mark.parametrize("seed", range(6))
    def test_outer_vertices(self, seed):
        tree = generate_random(25, seed)
        _, pos = _layout(tree)
        m = tree.n
        assert pos[0] == (0, 0)
        assert pos[1] == (2 * m - 4, 0)
        assert pos[2] == (m - 2, m - 2)

    @pytest.mark.parametrize("model", ["uniform-face", "path", "balanced"])
    def test_planar_on_plain_grid(self, model):
        tree = generate_random(35, 12, model)
        _, pos = _layout(tree)
        crossings, incidences = find_crossings(tree.edges(), pos, plain_orient)
        assert crossings == []
        assert incidences == []
        assert len(set(pos.values())) == tree.n

    def test_interior_vertices_inside_hosts(self):
        tree = generate_random(30, 21)
        _, pos = _layout(tree)
        for u, (left, right, top) in tree.host_triangles().items():
            corners = (pos[left], pos[right], pos[top])
            assert strictly_inside(pos[u], *corners, plain_orient)

    def test_too_short_order(self):
        with pytest.raises(CanonicalOrderError):
            shift_method_layout(k4().plane_embedding(), [0, 1])
