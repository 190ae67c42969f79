"""
Straight-line embedding of a planar 3-tree on the sparse grid.

Face-tree nodes are processed breadth first. Every active node owns an open
rectangle R inside the box spanned by its placed triangle; the vertex that
splits the node is placed in R, and R is divided among the three children.
Once a rectangle is roomy enough for its whole subtree (the fringe), the
subtree is drawn in one go on a cross product of full rows and columns.

Invariants checked whenever a child receives its rectangle:

- I1: R lies inside the box of the child's triangle.
- I2: if the weight is at least 2^q, the lower-left corner of R sits on a
  forward diagonal residue and the lower-right corner on a backward one.
- I3: area(R) >= 100 n_eff weight, or R passes the fringe inequalities.

A failed check raises InvariantViolation; `embed` then retries on the next
larger grid.
"""

from __future__ import annotations

import logging
import math
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Literal, Mapping

import networkx as nx

from .embedding import Embedding
from .exactgeom import find_crossings, stretched_orient
from .shift_method import CanonicalOrderError, canonical_ordering, shift_method_layout
from .sparsegrid import (
    GridParams,
    GridPoint,
    GridPreconditionError,
    GridSearchError,
    OpenRect,
    contains,
    cross_product_in_rect,
    diagonal_point_in_rect,
    in_domain,
    lowest_point_in,
    make_params,
)
from .tritree import (
    FaceTree,
    TriTree,
    build_face_tree,
    build_plane_embedding,
    designate_hubs,
)

logger = logging.getLogger("p3t.embedder")

THIRD = Fraction(1, 3)


class InvariantViolation(RuntimeError):
    """An invariant or a guaranteed placement failed at a face-tree node."""

    def __init__(self, node: int, which: str, detail: str = ""):
        self.node = node
        self.which = which
        message = f"node {node}: {which} violated"
        super().__init__(f"{message}: {detail}" if detail else message)


class EscalationExhausted(RuntimeError):
    """Every grid size up to the escalation limit failed."""

    def __init__(self, n: int, attempts: int, last: InvariantViolation | None):
        self.n = n
        self.attempts = attempts
        self.last = last
        super().__init__(
            f"embedding of {n} vertices failed after {attempts} attempts"
            + (f" (last: {last})" if last else "")
        )


@dataclass(frozen=True)
class EmbedSettings:
    max_escalations: int = 3
    fringe_layout: Literal["shift", "box"] = "shift"

    @classmethod
    def from_config(cls, config: Mapping[str, Any]) -> "EmbedSettings":
        return cls(
            max_escalations=int(config.get("max_escalations", cls.max_escalations)),
            fringe_layout=config.get("fringe_layout", cls.fringe_layout),
        )


@dataclass(frozen=True)
class RatioCut:
    axis: Literal["horizontal", "vertical"]
    position: Fraction


@dataclass(frozen=True)
class ShiftRecord:
    axis: Literal["x", "y"]
    threshold: Fraction
    amount: int
    node: int


@dataclass
class EmbedState:
    tree: TriTree
    faces: FaceTree
    params: GridParams
    settings: EmbedSettings = field(default_factory=EmbedSettings)
    placed: dict[int, GridPoint] = field(default_factory=dict)
    rects: dict[int, OpenRect] = field(default_factory=dict)
    queue: deque[int] = field(default_factory=deque)
    shift_log: list[ShiftRecord] = field(default_factory=list)

    def shift_total(self, axis: Literal["x", "y"]) -> int:
        return sum(record.amount for record in self.shift_log if record.axis == axis)


# === Geometry helpers ===


def _cut(lo: int, hi: int, low_share: Fraction, high_share: Fraction) -> Fraction:
    """Point of (lo, hi) dividing it low_share : high_share."""
    return lo + (hi - lo) * Fraction(low_share) / (low_share + high_share)


def _integer_rect(x1: Fraction, x2: Fraction, y1: Fraction, y2: Fraction) -> OpenRect:
    """Open integer rectangle holding the same lattice points as a rational one."""
    return OpenRect(math.floor(x1), math.ceil(x2), math.floor(y1), math.ceil(y2))


def _spread(values: list[int], count: int) -> list[int]:
    """`count` entries of a sorted list, evenly spaced and in order."""
    size = len(values)
    return [values[((2 * i + 1) * size) // (2 * count)] for i in range(count)]


def box_of(state: EmbedState, node: int) -> OpenRect | None:
    """
    Box of a placed triangle, taken from its geometry rather than its labels.

    The corner with the largest y is the top; the box spans the x range of
    the other two corners, from the higher of them up to the top. A triangle
    without a unique top, or with both lower corners in one column, has an
    empty box.
    """
    corners = [state.placed.get(v) for v in state.faces[node].triangle]
    if any(p is None for p in corners):
        return None
    corners.sort(key=lambda p: p.y)
    (a, b), top = corners[:2], corners[2]
    floor = b.y
    if top.y == floor or a.x == b.x:
        return None
    return OpenRect(min(a.x, b.x), max(a.x, b.x), floor, top.y)


def _fringe_inequalities(rect: OpenRect, m: int, params: GridParams) -> bool:
    return (
        rect.area > 8 * params.step * m * m
        and rect.width > 2 * m
        and rect.height > m
    )


def _i3_holds(rect: OpenRect, weight: int, params: GridParams) -> bool:
    return rect.area >= 100 * params.n_eff * weight or _fringe_inequalities(
        rect, weight, params
    )


def _diagonal_corners(rect: OpenRect, params: GridParams) -> bool:
    step = params.step
    return (rect.x1 - rect.y1) % step == 0 and (rect.x2 + rect.y1) % step == 0


def _activate(state: EmbedState, node: int, rect: OpenRect | None) -> None:
    """Hand `rect` to a child after checking I1-I3; empty subtrees retire at once."""
    face = state.faces[node]
    if face.weight == 0:
        return
    if rect is None:
        raise InvariantViolation(node, "I1", "empty rectangle")
    box = box_of(state, node)
    if box is None or not box.contains_rect(rect):
        raise InvariantViolation(node, "I1", f"{rect} not inside box {box}")
    if face.weight >= state.params.step and not _diagonal_corners(rect, state.params):
        raise InvariantViolation(node, "I2", f"corners of {rect} off the diagonals")
    if not _i3_holds(rect, face.weight, state.params):
        raise InvariantViolation(
            node, "I3", f"{rect} (area {rect.area}) for weight {face.weight}"
        )
    state.rects[node] = rect
    state.queue.append(node)


def _place(state: EmbedState, node: int, vertex: int, p: GridPoint) -> None:
    params = state.params
    if not in_domain(p.x, p.y, params):
        raise InvariantViolation(node, "domain", f"vertex {vertex} at {tuple(p)}")
    if not contains(p, params):
        raise InvariantViolation(node, "domain", f"{tuple(p)} is not a grid point")
    if not state.rects[node].contains_point(p.x, p.y):
        raise InvariantViolation(
            node, "I1", f"vertex {vertex} at {tuple(p)} outside {state.rects[node]}"
        )
    state.placed[vertex] = p


def _retire(state: EmbedState, node: int) -> None:
    state.rects.pop(node, None)


def _weights(state: EmbedState, node: int) -> tuple[int, int, int]:
    bottom, left, right = state.faces[node].children
    faces = state.faces
    return faces[bottom].weight, faces[left].weight, faces[right].weight


# === Cuts and global shifts ===


def ideal_cuts(r: OpenRect, w1: int, w2: int, w3: int) -> tuple[RatioCut, RatioCut]:
    """
    Ideal position of the splitting vertex.

    The horizontal line leaves (w1 + 1/3) : (w2 + w3 + 2/3) of the height
    below : above it; the vertical line splits the width (w2 + 1/3) :
    (w3 + 1/3).
    """
    ell_y = _cut(r.y1, r.y2, w1 + THIRD, w2 + w3 + 2 * THIRD)
    ell_x = _cut(r.x1, r.x2, w2 + THIRD, w3 + THIRD)
    return RatioCut("vertical", ell_x), RatioCut("horizontal", ell_y)


def _global_shift(
    state: EmbedState,
    node: int,
    axis: Literal["x", "y"],
    threshold: Fraction,
    amount: int,
) -> None:
    """Move every placed point and active rectangle edge at or past threshold."""

    def moved(value: int) -> int:
        return value + amount if value >= threshold else value

    if axis == "x":
        state.placed = {v: GridPoint(moved(p.x), p.y) for v, p in state.placed.items()}
        state.rects = {
            n: OpenRect(moved(r.x1), moved(r.x2), r.y1, r.y2)
            for n, r in state.rects.items()
        }
    else:
        state.placed = {v: GridPoint(p.x, moved(p.y)) for v, p in state.placed.items()}
        state.rects = {
            n: OpenRect(r.x1, r.x2, moved(r.y1), moved(r.y2))
            for n, r in state.rects.items()
        }
    state.shift_log.append(ShiftRecord(axis, threshold, amount, node))
    logger.debug("node %d: shift %s >= %s by %d", node, axis, threshold, amount)

    limit = 4 * state.params.n_eff
    if state.shift_total(axis) > limit:
        raise InvariantViolation(node, "shift", f"{axis} shifts exceed {limit}")
    side = state.params.side
    if any(p.x > side or p.y > side for p in state.placed.values()):
        raise InvariantViolation(node, "domain", "shift pushed a vertex off the grid")


# === Cases ===


def process_case1(state: EmbedState, node: int) -> EmbedState:
    """A child is a hub: stretch the region around the ideal point, then split."""
    face = state.faces[node]
    step = state.params.step
    bottom, left, right = face.children
    w1, w2, w3 = _weights(state, node)
    before = state.rects[node]
    ell_x, ell_y = ideal_cuts(before, w1, w2, w3)
    lx, ly = ell_x.position, ell_y.position

    _global_shift(state, node, "x", lx, 2 * step)
    _global_shift(state, node, "y", ly, step)
    rect = state.rects[node]

    y_cut = rect.y1 + step * math.ceil((ly - rect.y1) / step)
    x_left = math.ceil(lx)
    x_left += (-y_cut - x_left) % step
    x_right = math.ceil(lx + step)
    x_right += (y_cut - x_right) % step

    _place(state, node, face.vertex, GridPoint(x_left, y_cut))
    children = {
        bottom: OpenRect(rect.x1, rect.x2, rect.y1, y_cut),
        left: OpenRect(rect.x1, x_left, y_cut, rect.y2),
        right: OpenRect(x_right, rect.x2, y_cut, rect.y2),
    }
    for child, child_rect in children.items():
        child_weight = state.faces[child].weight
        if child_rect.area * face.weight < before.area * child_weight:
            raise InvariantViolation(
                child, "area", f"{child_rect} below its share of {before}"
            )
    _retire(state, node)
    for child, child_rect in children.items():
        _activate(state, child, child_rect)
    return state


def process_case2(state: EmbedState, node: int) -> EmbedState:
    """Both side children are light: place the vertex on a full row or column."""
    face = state.faces[node]
    rect = state.rects[node]
    w1, w2, w3 = _weights(state, node)
    _, ell_y = ideal_cuts(rect, w1, w2, w3)
    ly = ell_y.position

    # Lower middle of the six rectangles tiling the part above ell_y
    region = _integer_rect(
        rect.x1 + Fraction(rect.width, 3),
        rect.x1 + Fraction(2 * rect.width, 3),
        ly,
        ly + (rect.y2 - ly) / 2,
    )
    v = lowest_point_in(region, state.params)
    if v is None:
        raise InvariantViolation(node, "case2", f"no grid point in {region}")

    _place(state, node, face.vertex, v)
    _retire(state, node)
    for child in face.children:
        box = box_of(state, child)
        _activate(state, child, box.intersection(rect) if box else None)
    return state


def case3a_layout(
    rect: OpenRect, delta2: int, heavy: Literal["left", "right"]
) -> tuple[GridPoint, tuple[OpenRect, OpenRect, OpenRect]]:
    """
    Split for a heavy side child when R is large against the light weight.

    Returns the vertex position and the rectangles of the bottom, left and
    right children.
    """
    pad = 2 * delta2
    x1, x2, y1, y2 = rect.x1, rect.x2, rect.y1, rect.y2
    bottom = OpenRect(x1, x2, y1, y1 + pad)
    if heavy == "left":
        v = GridPoint(x2 - pad, y1 + pad)
        left = OpenRect(x1 + pad, x2 - pad, y1 + pad, y2)
        right = OpenRect(x2 - pad, x2, y1 + pad, y2)
    else:
        v = GridPoint(x1 + pad, y1 + pad)
        left = OpenRect(x1, x1 + pad, y1 + pad, y2)
        right = OpenRect(x1 + pad, x2 - pad, y1 + pad, y2)
    return v, (bottom, left, right)


def case3b_points(
    rect: OpenRect,
    w_heavy: int,
    delta2: int,
    heavy: Literal["left", "right"],
    params: GridParams,
) -> tuple[GridPoint, GridPoint]:
    """
    Vertex position p and the partner corner p' for a heavy side child.

    p is a diagonal point below the heavy child's preliminary rectangle, on
    the side of the light sibling; p' lies on the other diagonal class in
    the same row, beyond the preliminary rectangle's opposite edge.
    """
    step = params.step
    share = Fraction(delta2, 3)
    l0 = _cut(rect.y1, rect.y2, share, w_heavy + 2 * share)
    l1 = _cut(rect.x1, rect.x2, share, w_heavy + share)
    l2 = _cut(rect.x1, rect.x2, share + w_heavy, share)
    y_lo = (rect.y1 + l0) / 2

    if heavy == "left":
        region = _integer_rect(l2, (l2 + rect.x2) / 2, y_lo, l0)
        direction = "backward"
    else:
        region = _integer_rect((rect.x1 + l1) / 2, l1, y_lo, l0)
        direction = "forward"
    p = diagonal_point_in_rect(region, direction, params)

    if heavy == "left":
        start = math.ceil(l1) - 1
        partner = start - (start - p.y) % step
        if partner < rect.x1:
            raise GridSearchError(f"no forward partner for {tuple(p)} in {rect}")
    else:
        start = math.floor(l2) + 1
        partner = start + (-p.y - start) % step
        if partner > rect.x2:
            raise GridSearchError(f"no backward partner for {tuple(p)} in {rect}")
    return p, GridPoint(partner, p.y)


def process_case3(state: EmbedState, node: int) -> EmbedState:
    """Exactly one side child is heavy (and not a hub)."""
    face = state.faces[node]
    rect = state.rects[node]
    step = state.params.step
    bottom, left, right = face.children
    w1, w2, w3 = _weights(state, node)
    heavy: Literal["left", "right"] = "left" if w2 >= step else "right"
    w_heavy, w_other = (w2, w3) if heavy == "left" else (w3, w2)
    delta2 = w1 + w_other + 1

    if 4 * delta2 * step <= min(rect.width, rect.height):
        v, (r1, r2, r3) = case3a_layout(rect, delta2, heavy)
        logger.debug("node %d: case 3A, heavy %s, v=%s", node, heavy, tuple(v))
        _place(state, node, face.vertex, v)
        children = {bottom: r1, left: r2, right: r3}
    else:
        try:
            p, partner = case3b_points(rect, w_heavy, delta2, heavy, state.params)
        except (GridPreconditionError, GridSearchError) as exc:
            raise InvariantViolation(node, "case3", str(exc)) from exc
        logger.debug(
            "node %d: case 3B, heavy %s, p=%s, partner=%s",
            node,
            heavy,
            tuple(p),
            tuple(partner),
        )
        _place(state, node, face.vertex, p)
        if heavy == "left":
            heavy_node, heavy_rect = left, OpenRect(partner.x, p.x, p.y, rect.y2)
        else:
            heavy_node, heavy_rect = right, OpenRect(p.x, partner.x, p.y, rect.y2)
        children = {}
        for child in face.children:
            if child == heavy_node:
                children[child] = heavy_rect
            else:
                box = box_of(state, child)
                children[child] = box.intersection(rect) if box else None

    _retire(state, node)
    for child, child_rect in children.items():
        _activate(state, child, child_rect)
    return state


# === Fringe ===


def fringe_test(state: EmbedState, node: int) -> bool:
    """
    Whether the subtree of `node` can be finished inside its rectangle: the
    fringe inequalities hold and a 2m x m cross product exists for
    m = weight + 3.
    """
    rect = state.rects[node]
    m = state.faces[node].weight + 3
    if not _fringe_inequalities(rect, m, state.params):
        return False
    try:
        cross_product_in_rect(rect, m, state.params)
    except GridPreconditionError:
        return False
    return True


def _box_layout(
    state: EmbedState, node: int, xs: list[int], ys: list[int]
) -> dict[int, GridPoint]:
    """
    Rank layout: each vertex takes a column after its left subtree and a row
    after its bottom subtree, so it lands inside the box of its host.
    """
    weight = state.faces[node].weight
    out: dict[int, GridPoint] = {}
    stack = [(node, _spread(xs, weight), _spread(ys, weight))]
    while stack:
        current, cols, rows = stack.pop()
        face = state.faces[current]
        if face.is_leaf:
            continue
        bottom, left, right = face.children
        wb, wl, wr = _weights(state, current)
        out[face.vertex] = GridPoint(cols[wl], rows[wb])
        stack.append((bottom, cols[wl + 1 + wr :], rows[:wb]))
        stack.append((left, cols[:wl], rows[wb + 1 : wb + 1 + wl]))
        stack.append((right, cols[wl + 1 : wl + 1 + wr], rows[wb + 1 + wl :]))
    return out


def _shift_layout(
    state: EmbedState, node: int, xs: list[int], ys: list[int]
) -> dict[int, GridPoint] | None:
    """
    Shift-method drawing of the subtree mapped onto X x Y, or None when the
    stretched result does not certify as crossing-free.
    """
    face = state.faces[node]
    m = face.weight + 3
    outer = face.triangle
    inserts = [
        (state.faces[s].vertex, state.faces[s].triangle)
        for s in state.faces.subtree_nodes(node)
    ]
    try:
        plane = build_plane_embedding(outer, inserts)
        abstract = shift_method_layout(plane, canonical_ordering(plane, outer))
    except (CanonicalOrderError, nx.NetworkXException) as exc:
        raise InvariantViolation(node, "fringe", str(exc)) from exc

    cols = _spread(xs, 2 * m - 5)
    rows = _spread(ys, m - 3)
    positions = {
        v: GridPoint(cols[ax - 1], rows[ay - 1])
        for v, (ax, ay) in abstract.items()
        if v not in outer
    }

    local = {v: tuple(state.placed[v]) for v in outer}
    local.update((v, tuple(p)) for v, p in positions.items())
    edges = sorted({(min(u, v), max(u, v)) for u, v in plane.edges()})
    crossings, incidences = find_crossings(
        edges, local, stretched_orient(state.params.stretch_base)
    )
    if crossings or incidences:
        logger.warning(
            "node %d: shift layout not planar after stretching (%d crossings, "
            "%d incidences); using box layout",
            node,
            len(crossings),
            len(incidences),
        )
        return None
    return positions


def fpp_embed(state: EmbedState, node: int) -> EmbedState:
    """Draw the whole subtree of a fringe node on a cross product in its rectangle."""
    face = state.faces[node]
    if face.weight == 0:
        _retire(state, node)
        return state
    try:
        xs, ys = cross_product_in_rect(state.rects[node], face.weight + 3, state.params)
    except GridPreconditionError as exc:
        raise InvariantViolation(node, "fringe", str(exc)) from exc

    positions = None
    if state.settings.fringe_layout == "shift":
        positions = _shift_layout(state, node, xs, ys)
    if positions is None:
        positions = _box_layout(state, node, xs, ys)

    for vertex, p in sorted(positions.items()):
        _place(state, node, vertex, p)
    logger.debug("node %d: fringe placed %d vertices", node, len(positions))
    _retire(state, node)
    return state


# === Driver ===


def initial_state(
    tree: TriTree, params: GridParams, settings: EmbedSettings | None = None
) -> EmbedState:
    """Corners a, b, c of the initial box and the root rectangle."""
    faces = designate_hubs(build_face_tree(tree), params)
    state = EmbedState(
        tree=tree, faces=faces, params=params, settings=settings or EmbedSettings()
    )
    size = params.init_side
    state.placed = {
        0: GridPoint(0, 0),
        1: GridPoint(size, 0),
        2: GridPoint(size, size),
    }
    _activate(state, faces.root, OpenRect(0, size, 0, size))
    return state


def process_node(state: EmbedState, node: int) -> EmbedState:
    face = state.faces[node]
    if face.weight == 0:
        _retire(state, node)
        return state
    if fringe_test(state, node):
        return fpp_embed(state, node)

    step = state.params.step
    _, w2, w3 = _weights(state, node)
    if any(state.faces[child].is_hub for child in face.children):
        logger.debug("node %d: case 1", node)
        return process_case1(state, node)
    if w2 < step and w3 < step:
        logger.debug("node %d: case 2", node)
        return process_case2(state, node)
    return process_case3(state, node)


def run(state: EmbedState) -> EmbedState:
    while state.queue:
        process_node(state, state.queue.popleft())
    missing = [v for v in range(state.tree.n) if v not in state.placed]
    if missing:
        raise InvariantViolation(state.faces.root, "incomplete", f"unplaced {missing}")
    return state


def embed(tree: TriTree, settings: EmbedSettings | None = None) -> Embedding:
    """
    Embed `tree` on the sparse grid for its size, escalating to the next
    power-of-4 grid when an invariant fails.
    """
    settings = settings or EmbedSettings()
    last: InvariantViolation | None = None
    attempts = settings.max_escalations + 1
    for escalation in range(attempts):
        params = make_params(tree.n, escalation)
        started = time.perf_counter()
        try:
            state = run(initial_state(tree, params, settings))
        except InvariantViolation as exc:
            last = exc
            logger.warning(
                "n=%d on n_eff=%d failed (%s); escalating", tree.n, params.n_eff, exc
            )
            continue
        logger.info(
            "embedded n=%d on n_eff=%d in %.3fs (%d shifts)",
            tree.n,
            params.n_eff,
            time.perf_counter() - started,
            len(state.shift_log),
        )
        return Embedding(
            params=params,
            positions=dict(sorted(state.placed.items())),
            escalations=escalation,
        )
    raise EscalationExhausted(tree.n, attempts, last)
