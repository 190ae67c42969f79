"""
Tests for exact predicates, drawing verification and brute-force embedding
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from app.embedder import embed  # noqa: E402
from app.embedding import Embedding  # noqa: E402
from app.exactgeom import (  # noqa: E402
    CapExceeded,
    MissingPositionError,
    Orientation,
    brute_force_psembed,
    check_assignment,
    find_crossings,
    orient_exponents,
    orientation,
    oracle_points,
    plain_orient,
    power_sum_sign,
    segments_cross,
    stretched_orient,
    strictly_inside,
    verify_drawing,
)
from app.sparsegrid import GridPoint, make_params, stretch  # noqa: E402
from app.tritree import generate_random  # noqa: E402
from tests.test_utils import build_tree, k4  # noqa: E402


def _sign(value):
    return (value > 0) - (value < 0)


class TestPowerSums:
    """Sign of sums of powers of the base"""

    def test_random_sums_match_direct_evaluation(self):
        rng = random.Random(20)
        for _ in range(500):
            base = rng.choice([112, 448, 1792])
            terms = {rng.randrange(60): rng.randint(-900, 900) for _ in range(3)}
            expected = _sign(sum(c * base**e for e, c in terms.items()))
            assert power_sum_sign(terms, base) == expected

    def test_cancelling_terms(self):
        assert power_sum_sign({5: 1, 4: -112}, 112) == 0
        assert power_sum_sign({5: 1, 4: -112, 0: 1}, 112) == 1
        assert power_sum_sign({}, 112) == 0

    def test_matches_big_integer_determinant(self):
        rng = random.Random(4)
        params = make_params(64)
        for _ in range(300):
            pts = [
                stretch((rng.randrange(params.side), rng.randrange(40)), params)
                for _ in range(3)
            ]
            p, q, r = pts
            direct = _sign((q.x - p.x) * (r.Y - p.Y) - (r.x - p.x) * (q.Y - p.Y))
            exps = orient_exponents(
                (p.x, p.y), (q.x, q.y), (r.x, r.y), params.stretch_base
            )
            assert exps == direct


class TestOrientation:
    """Orientation of stretched triples"""

    def test_left_turn_on_diagonal(self):
        params = make_params(4)
        pts = [stretch(p, params) for p in [(0, 0), (1, 1), (2, 2)]]
        assert orientation(*pts) == Orientation.LEFT

    def test_equal_rows_are_collinear(self):
        params = make_params(4)
        pts = [stretch(p, params) for p in [(0, 1), (1, 1), (2, 1)]]
        assert orientation(*pts) == Orientation.COLLINEAR

    def test_reversal_flips_sign(self):
        orient = stretched_orient(448)
        a, b, c = (0, 3), (7, 1), (4, 9)
        assert orient(a, b, c) == -orient(b, a, c) != 0

    def test_stretch_differs_from_plain(self):
        # Collinear before stretching, a left turn after
        a, b, c = (0, 0), (1, 1), (2, 2)
        assert plain_orient(a, b, c) == 0
        assert stretched_orient(112)(a, b, c) == 1


class TestCrossings:
    """Segment crossings"""

    def test_square_diagonals_cross(self):
        positions = {0: (0, 0), 1: (2, 2), 2: (0, 2), 3: (2, 0)}
        crossings, incidences = find_crossings(
            [(0, 1), (2, 3)], positions, stretched_orient(112)
        )
        assert crossings == [((0, 1), (2, 3))]
        assert incidences == []

    def test_shared_vertex_is_not_a_crossing(self):
        positions = {0: (0, 0), 1: (5, 3), 2: (5, 4)}
        crossings, _ = find_crossings([(0, 1), (0, 2)], positions, plain_orient)
        assert crossings == []

    def test_collinear_overlap(self):
        a, b, c, d = (0, 0), (4, 0), (2, 0), (6, 0)
        assert segments_cross(a, b, c, d, plain_orient)
        assert not segments_cross(a, (2, 0), (3, 0), d, plain_orient)

    def test_vertex_on_edge(self):
        positions = {0: (0, 0), 1: (4, 4), 2: (2, 2)}
        _, incidences = find_crossings([(0, 1)], positions, plain_orient)
        assert incidences == [(2, (0, 1))]
        _, incidences = find_crossings([(0, 1)], positions, stretched_orient(112))
        assert incidences == []

    def test_sweep_agrees_with_all_pairs(self):
        rng = random.Random(9)
        positions = {v: (rng.randrange(30), rng.randrange(30)) for v in range(25)}
        edges = sorted({tuple(sorted(rng.sample(range(25), 2))) for _ in range(40)})
        crossings, _ = find_crossings(edges, positions, plain_orient)
        expected = sorted(
            (e, f)
            for i, e in enumerate(edges)
            for f in edges[i + 1 :]
            if not set(e) & set(f)
            and segments_cross(
                *(positions[v] for v in (*e, *f)), plain_orient
            )
        )
        assert crossings == expected


class TestVerify:
    """Exact verification of drawings"""

    def test_k4_embedding(self):
        tree = k4()
        assert verify_drawing(tree, embed(tree)).ok

    def test_crossed_drawing(self):
        params = make_params(4)
        tree = k4()
        # Vertex 3 outside the outer triangle
        positions = {0: (0, 0), 1: (40, 0), 2: (40, 40), 3: (50, 1)}
        report = verify_drawing(tree, Embedding(params, positions))
        assert not report.ok
        assert any(line.startswith("CROSS") for line in report.lines())

    def test_coincident_and_off_grid(self):
        params = make_params(16)
        positions = {0: (0, 0), 1: (40, 0), 2: (40, 40), 3: (40, 40)}
        report = verify_drawing(k4(), Embedding(params, positions))
        assert report.coincidences == [(2, 3)]
        assert "COINCIDE 2 3" in report.lines()

        positions = {0: (0, 0), 1: (40, 0), 2: (40, 40), 3: (21, 22)}
        report = verify_drawing(k4(), Embedding(params, positions))
        assert report.off_grid == [3]

    def test_missing_vertex(self):
        with pytest.raises(MissingPositionError):
            verify_drawing(k4(), Embedding(make_params(4), {0: (0, 0), 1: (4, 0)}))


class TestBruteForce:
    """Backtracking point-set embedding"""

    def test_k4_on_oracle_points(self):
        params = make_params(4)
        result = brute_force_psembed(k4(), oracle_points(params), params)
        assert result is not None
        assert result.positions[3] == (5, 5)
        assert verify_drawing(k4(), result).ok

    def test_k4_on_three_points(self):
        params = make_params(4)
        points = [GridPoint(0, 0), GridPoint(40, 0), GridPoint(40, 40)]
        assert brute_force_psembed(k4(), points, params) is None

    def test_five_vertices(self):
        tree = build_tree(5, [0, 2])
        params = make_params(5)
        result = brute_force_psembed(tree, oracle_points(params), params)
        assert result is not None
        assert check_assignment(tree, result.positions, params)
        assert verify_drawing(tree, result).ok

    def test_vertex_cap(self):
        params = make_params(9)
        with pytest.raises(CapExceeded):
            brute_force_psembed(generate_random(9, 0), oracle_points(params), params)

    def test_point_cap(self):
        params = make_params(4)
        points = [GridPoint(x, 0) for x in range(56)]
        points += [GridPoint(x, 1) for x in range(10)]
        with pytest.raises(CapExceeded):
            brute_force_psembed(k4(), points, params)

    @pytest.mark.parametrize("seed", range(4))
    def test_embedder_output_is_a_valid_assignment(self, seed):
        tree = generate_random(8, seed)
        ours = embed(tree)
        assert check_assignment(tree, ours.positions, ours.params)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_small_trees_embed_on_oracle_points(self, n):
        params = make_params(n)
        points = oracle_points(params)
        for seed in range(20):
            tree = generate_random(n, seed)
            found = brute_force_psembed(tree, points, params)
            assert found is not None, seed
            assert check_assignment(tree, found.positions, params), seed
            ours = embed(tree)
            assert check_assignment(tree, ours.positions, ours.params), seed


@pytest.mark.slow
class TestStretchedLemmas:
    """Randomized checks of the stretched-plane facts the embedder relies on"""

    @pytest.mark.parametrize("n_eff", [4, 16])
    def test_orientation_matches_rational_determinant(self, n_eff):
        params = make_params(n_eff)
        base = params.stretch_base
        rng = random.Random(n_eff)
        for _ in range(10_000):
            # Small pools so collinear and equal-row triples show up
            low = rng.randrange(params.side - 6)
            top = rng.randrange(params.side - 3)
            pts = [
                (low + rng.randrange(6), top + rng.randrange(3)) for _ in range(3)
            ]
            peak = max(y for _, y in pts)
            (px, pY), (qx, qY), (rx, rY) = (
                (x, Fraction(base**y, base**peak)) for x, y in pts
            )
            expected = _sign((qx - px) * (rY - pY) - (rx - px) * (qY - pY))
            got = orientation(*(stretch(p, params) for p in pts))
            assert got == Orientation(expected), pts

    def test_middle_point_lies_below_outer_segment(self):
        params = make_params(16)
        rng = random.Random(7)
        for _ in range(1_000):
            x1, x2, x3 = sorted(rng.sample(range(params.side + 1), 3))
            ys = sorted(rng.sample(range(params.side + 1), 3))
            if rng.random() < 0.5:
                ys.reverse()
            p1, p2, p3 = (stretch(p, params) for p in zip((x1, x2, x3), ys))
            assert orientation(p1, p3, p2) == Orientation.RIGHT

    def test_box_points_lie_inside_triangle(self):
        params = make_params(16)
        orient = stretched_orient(params.stretch_base)
        rng = random.Random(11)
        for _ in range(1_000):
            ax = rng.randrange(params.side - 8)
            bx = ax + rng.randint(2, 8)
            if rng.random() < 0.5:
                ax, bx = bx, ax
            a = (ax, rng.randrange(100))
            b = (bx, rng.randrange(100))
            floor = max(a[1], b[1])
            top = (rng.randrange(params.side + 1), floor + rng.randint(2, 8))
            for x in range(min(ax, bx) + 1, max(ax, bx)):
                for y in range(floor + 1, top[1]):
                    assert strictly_inside((x, y), a, b, top, orient), (a, b, top)


class TestCheckAssignment:
    """Assignment validity"""

    def test_interior_vertex_outside_host(self):
        params = make_params(5)
        tree = build_tree(5, [0, 1])
        # Vertex 4 must lie in (0, 1, 3) but sits above vertex 3
        positions = {0: (0, 0), 1: (160, 0), 2: (160, 160), 3: (80, 40), 4: (120, 100)}
        assert not check_assignment(tree, positions, params)

    def test_degenerate_root(self):
        params = make_params(4)
        positions = {0: (0, 0), 1: (20, 0), 2: (40, 0), 3: (10, 0)}
        assert not check_assignment(k4(), positions, params)
