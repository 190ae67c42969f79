"""
Exact predicates on the stretched grid and drawing verification.

Stretched coordinates reach base^(14 n_eff), so the orientation of three
stretched points is evaluated as a signed sum of at most three powers of the
base and decided from the leading terms; the full determinant is only
expanded when the leading terms cancel.
"""

from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Iterable, Mapping, Sequence

from .embedding import Embedding
from .sparsegrid import GridParams, GridPoint, StretchedPoint, contains, in_domain
from .tritree import ROOT_TRIANGLE, TriTree

logger = logging.getLogger("p3t.exactgeom")

Point = tuple[int, int]
Edge = tuple[int, int]
OrientFn = Callable[[Point, Point, Point], int]

MAX_BRUTE_FORCE_VERTICES = 8
MAX_BRUTE_FORCE_POINTS = 60


class CapExceeded(ValueError):
    """Brute-force search requested beyond its size caps."""


class MissingPositionError(KeyError):
    """The embedding has no position for some vertex of the tree."""


class Orientation(IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


def _sign(value: int) -> int:
    return (value > 0) - (value < 0)


def _dominates(magnitude: int, base: int, gap: int, bound: int) -> bool:
    """magnitude * base^gap > bound, without building huge powers needlessly."""
    value = magnitude
    for _ in range(gap):
        if value > bound:
            return True
        value *= base
    return value > bound


def power_sum_sign(terms: Mapping[int, int], base: int) -> int:
    """Sign of sum(coeff * base^exp) for small integer coefficients."""
    items = sorted(
        ((exp, coeff) for exp, coeff in terms.items() if coeff), reverse=True
    )
    if not items:
        return 0
    tail = [0] * (len(items) + 1)
    for i in range(len(items) - 1, -1, -1):
        tail[i] = tail[i + 1] + abs(items[i][1])

    prev, acc = items[0]
    for i in range(1, len(items)):
        exp, coeff = items[i]
        gap = prev - exp
        if acc and _dominates(abs(acc), base, gap, tail[i]):
            return _sign(acc)
        acc = acc * base**gap + coeff
        prev = exp
    return _sign(acc)


def orient_exponents(a: Point, b: Point, c: Point, base: int) -> int:
    """
    Sign of the orientation determinant of (x, base^y) images.

    D = (bx - ax) base^cy + (ax - cx) base^by + (cx - bx) base^ay
    """
    (ax, ay), (bx, by), (cx, cy) = a, b, c
    terms: dict[int, int] = {}
    for coeff, exp in ((bx - ax, cy), (ax - cx, by), (cx - bx, ay)):
        terms[exp] = terms.get(exp, 0) + coeff
    return power_sum_sign(terms, base)


def determinant(p: StretchedPoint, q: StretchedPoint, r: StretchedPoint) -> int:
    """Full orientation determinant on the stretched values."""
    return (q.x - p.x) * (r.Y - p.Y) - (r.x - p.x) * (q.Y - p.Y)


def orientation(p: StretchedPoint, q: StretchedPoint, r: StretchedPoint) -> Orientation:
    if p.base == q.base == r.base:
        return Orientation(orient_exponents((p.x, p.y), (q.x, q.y), (r.x, r.y), p.base))
    return Orientation(_sign(determinant(p, q, r)))


def stretched_orient(base: int) -> OrientFn:
    """Orientation on unstretched (x, y) pairs, evaluated after stretching."""

    def orient(a: Point, b: Point, c: Point) -> int:
        return orient_exponents(a, b, c, base)

    return orient


def plain_orient(a: Point, b: Point, c: Point) -> int:
    """Orientation on the plain integer grid."""
    return _sign((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))


# === Segment predicates ===


def _strictly_between(a: Point, w: Point, b: Point) -> bool:
    # Valid for collinear points: both maps keep the order along a line
    return min(a, b) < w < max(a, b)


def segments_cross(a: Point, b: Point, c: Point, d: Point, orient: OrientFn) -> bool:
    """Proper crossing or collinear overlap of segments ab and cd."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    if o1 == o2 != 0:
        return False
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == o2 == o3 == o4 == 0:
        return max(min(a, b), min(c, d)) < min(max(a, b), max(c, d))
    return False


def point_on_segment(w: Point, a: Point, b: Point, orient: OrientFn) -> bool:
    return w != a and w != b and _strictly_between(a, w, b) and orient(a, b, w) == 0


def strictly_inside(p: Point, a: Point, b: Point, c: Point, orient: OrientFn) -> bool:
    o1 = orient(a, b, p)
    return o1 != 0 and o1 == orient(b, c, p) == orient(c, a, p)


def find_crossings(
    edges: Sequence[Edge], positions: Mapping[int, Point], orient: OrientFn
) -> tuple[list[tuple[Edge, Edge]], list[tuple[int, Edge]]]:
    """
    Crossing edge pairs and vertex-on-edge incidences of a straight-line drawing.

    Edges sharing a vertex are never tested against each other. Both maps
    used here are monotone per axis, so bounding boxes are compared on the
    unstretched coordinates.
    """
    segments = []
    for u, v in edges:
        pu, pv = positions[u], positions[v]
        segments.append(
            (
                min(pu[0], pv[0]),
                max(pu[0], pv[0]),
                min(pu[1], pv[1]),
                max(pu[1], pv[1]),
                (min(u, v), max(u, v)),
            )
        )
    segments.sort()

    crossings: list[tuple[Edge, Edge]] = []
    for i, (x_lo, x_hi, y_lo, y_hi, edge) in enumerate(segments):
        for other_x_lo, _, other_y_lo, other_y_hi, other in segments[i + 1 :]:
            if other_x_lo > x_hi:
                break
            if other_y_lo > y_hi or other_y_hi < y_lo:
                continue
            if set(edge) & set(other):
                continue
            a, b = positions[edge[0]], positions[edge[1]]
            c, d = positions[other[0]], positions[other[1]]
            if segments_cross(a, b, c, d, orient):
                crossings.append((min(edge, other), max(edge, other)))

    by_x = sorted((positions[v][0], v) for v in positions)
    xs = [x for x, _ in by_x]
    incidences: list[tuple[int, Edge]] = []
    for x_lo, x_hi, y_lo, y_hi, edge in segments:
        a, b = positions[edge[0]], positions[edge[1]]
        start = bisect.bisect_left(xs, x_lo)
        stop = bisect.bisect_right(xs, x_hi)
        for _, w in by_x[start:stop]:
            if w in edge:
                continue
            pw = positions[w]
            if y_lo <= pw[1] <= y_hi and point_on_segment(pw, a, b, orient):
                incidences.append((w, edge))

    return sorted(crossings), sorted(incidences)


# === Verification ===


@dataclass
class VerifyReport:
    crossings: list[tuple[Edge, Edge]] = field(default_factory=list)
    coincidences: list[tuple[int, int]] = field(default_factory=list)
    incidences: list[tuple[int, Edge]] = field(default_factory=list)
    off_grid: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.crossings or self.coincidences or self.incidences or self.off_grid
        )

    def lines(self) -> list[str]:
        out = [
            f"CROSS {e1[0]}-{e1[1]} {e2[0]}-{e2[1]}" for e1, e2 in self.crossings
        ]
        out += [f"COINCIDE {u} {v}" for u, v in self.coincidences]
        out += [f"ONEDGE {w} {e[0]}-{e[1]}" for w, e in self.incidences]
        out += [f"OFFGRID {v}" for v in self.off_grid]
        return out


def _positions_of(t: TriTree, e: Embedding) -> dict[int, Point]:
    missing = [v for v in range(t.n) if v not in e.positions]
    if missing:
        raise MissingPositionError(f"no position for vertices {missing}")
    return {v: (int(e.positions[v][0]), int(e.positions[v][1])) for v in range(t.n)}


def verify_drawing(t: TriTree, e: Embedding) -> VerifyReport:
    """Exact check of the stretched straight-line drawing of t given by e."""
    positions = _positions_of(t, e)
    params = e.params
    report = VerifyReport()

    report.off_grid = [
        v
        for v, (x, y) in positions.items()
        if not in_domain(x, y, params) or not contains((x, y), params)
    ]

    groups: dict[Point, list[int]] = {}
    for v, p in positions.items():
        groups.setdefault(p, []).append(v)
    for members in groups.values():
        members.sort()
        report.coincidences.extend(
            (u, w) for i, u in enumerate(members) for w in members[i + 1 :]
        )
    report.coincidences.sort()

    report.crossings, report.incidences = find_crossings(
        t.edges(), positions, stretched_orient(params.stretch_base)
    )
    if not report.ok:
        logger.info(
            "verification failed: %d crossings, %d coincidences, %d incidences, "
            "%d off-grid",
            len(report.crossings),
            len(report.coincidences),
            len(report.incidences),
            len(report.off_grid),
        )
    return report


# === Brute-force point-set embedding ===


def check_assignment(
    t: TriTree, positions: Mapping[int, Point], params: GridParams
) -> bool:
    """
    Validity of a vertex-to-point map: distinct grid points, non-degenerate
    root triangle, and every inserted vertex strictly inside its host.
    """
    if any(v not in positions for v in range(t.n)):
        return False
    points = [tuple(positions[v]) for v in range(t.n)]
    if len(set(points)) != t.n:
        return False
    if any(
        not in_domain(x, y, params) or not contains((x, y), params)
        for x, y in points
    ):
        return False
    orient = stretched_orient(params.stretch_base)
    a, b, c = (points[v] for v in ROOT_TRIANGLE)
    if orient(a, b, c) == 0:
        return False
    for u, (left, right, top) in t.host_triangles().items():
        corners = (points[left], points[right], points[top])
        if not strictly_inside(points[u], *corners, orient):
            return False
    return True


def brute_force_psembed(
    t: TriTree, points: Iterable[GridPoint | Point], params: GridParams
) -> Embedding | None:
    """
    Backtracking search for a drawing of t on the given points.

    Vertices are assigned in insertion order; an inserted vertex may only
    take a point strictly inside its host triangle. Returns None when no
    assignment exists.
    """
    candidates = list(dict.fromkeys(tuple(p) for p in points))
    if t.n > MAX_BRUTE_FORCE_VERTICES:
        raise CapExceeded(
            f"brute force is capped at {MAX_BRUTE_FORCE_VERTICES} vertices, got {t.n}"
        )
    if len(candidates) > MAX_BRUTE_FORCE_POINTS:
        raise CapExceeded(
            f"brute force is capped at {MAX_BRUTE_FORCE_POINTS} points, "
            f"got {len(candidates)}"
        )
    if len(candidates) < t.n:
        return None

    orient = stretched_orient(params.stretch_base)
    hosts = t.host_triangles()
    assigned: dict[int, Point] = {}
    used: set[Point] = set()

    def admissible(vertex: int, p: Point) -> bool:
        if vertex == 2:
            return orient(assigned[0], assigned[1], p) != 0
        if vertex > 2:
            left, right, top = hosts[vertex]
            return strictly_inside(
                p, assigned[left], assigned[right], assigned[top], orient
            )
        return True

    def place(vertex: int) -> bool:
        if vertex == t.n:
            return True
        for p in candidates:
            if p in used or not admissible(vertex, p):
                continue
            assigned[vertex] = p
            used.add(p)
            if place(vertex + 1):
                return True
            del assigned[vertex]
            used.discard(p)
        return False

    if not place(0):
        return None
    return Embedding(
        params=params, positions={v: GridPoint(*assigned[v]) for v in range(t.n)}
    )


def oracle_points(params: GridParams, per_axis: int = 7) -> list[GridPoint]:
    """
    Candidate points for the brute-force search: the three corners used by
    the embedder, then a per_axis x per_axis lattice strictly inside the
    initial box. Lattice spacing init_side / (per_axis + 1) keeps every
    point on a full column.
    """
    size = params.init_side
    spacing = size // (per_axis + 1)
    corners = [GridPoint(0, 0), GridPoint(size, 0), GridPoint(size, size)]
    lattice = [
        GridPoint(i * spacing, j * spacing)
        for j in range(1, per_axis + 1)
        for i in range(1, per_axis + 1)
    ]
    return corners + [p for p in lattice if contains(p, params)]
