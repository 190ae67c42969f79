"""
Canonical ordering and shift-method drawing of a triangulation.

The drawing of an m-vertex triangulation with outer face (left, right, top)
uses the grid [0, 2m - 4] x [0, m - 2]: left at (0, 0), right at (2m - 4, 0),
top at (m - 2, m - 2), every other vertex strictly inside.
"""

from __future__ import annotations

import logging

import networkx as nx

logger = logging.getLogger("p3t.shift_method")


class CanonicalOrderError(RuntimeError):
    """The embedding is not a triangulation with the given outer face."""


def _ccw_between(embedding: nx.PlanarEmbedding, v, start, stop) -> list:
    """Neighbors of v strictly between start and stop, counterclockwise."""
    out = []
    current = embedding[v][start]["ccw"]
    while current != stop:
        if current == start:
            raise CanonicalOrderError(f"{stop} is not a neighbor of {v}")
        out.append(current)
        current = embedding[v][current]["ccw"]
    return out


def canonical_ordering(embedding: nx.PlanarEmbedding, outer: tuple) -> list:
    """
    Canonical ordering v1 = left, v2 = right, ..., vm = top by leaf peeling.

    The contour starts as left, top, right; repeatedly a contour vertex other
    than left and right without a chord is removed and replaced by its
    neighbors lying below it.
    """
    left, right, top = outer
    contour = [left, top, right]
    on_contour = set(contour)
    removed: list = []
    total = embedding.number_of_nodes()

    while len(contour) > 2:
        for idx in range(1, len(contour) - 1):
            v = contour[idx]
            if sum(1 for w in embedding[v] if w in on_contour) == 2:
                break
        else:
            raise CanonicalOrderError("no chord-free contour vertex")

        inner = _ccw_between(embedding, v, contour[idx - 1], contour[idx + 1])
        if any(w in on_contour or w in removed for w in inner):
            raise CanonicalOrderError(f"contour neighbors of {v} are not separating")
        contour[idx : idx + 1] = inner
        on_contour.discard(v)
        on_contour.update(inner)
        removed.append(v)

    order = [left, right] + removed[::-1]
    if len(order) != total:
        raise CanonicalOrderError(
            f"ordering covers {len(order)} of {total} vertices"
        )
    return order


def shift_method_layout(embedding: nx.PlanarEmbedding, order: list) -> dict:
    """Integer positions from the shift method for a canonical ordering."""
    if len(order) < 3:
        raise CanonicalOrderError("a triangulation has at least 3 vertices")
    v1, v2, v3 = order[:3]
    pos = {v1: [0, 0], v2: [2, 0], v3: [1, 1]}
    covered = {v1: [v1], v2: [v2], v3: [v3]}
    contour = [v1, v3, v2]

    for vk in order[3:]:
        neighbors = set(embedding[vk])
        hits = [i for i, w in enumerate(contour) if w in neighbors]
        if len(hits) < 2 or hits[-1] - hits[0] + 1 != len(hits):
            raise CanonicalOrderError(f"{vk} does not cover a contour interval")
        p, q = hits[0], hits[-1]

        for w in contour[p + 1 : q]:
            for u in covered[w]:
                pos[u][0] += 1
        for w in contour[q:]:
            for u in covered[w]:
                pos[u][0] += 2

        xp, yp = pos[contour[p]]
        xq, yq = pos[contour[q]]
        pos[vk] = [(xp + xq + yq - yp) // 2, (yp + yq + xq - xp) // 2]
        covered[vk] = [vk] + [u for w in contour[p + 1 : q] for u in covered[w]]
        contour = contour[: p + 1] + [vk] + contour[q:]

    logger.debug("shift method placed %d vertices", len(pos))
    return {v: (x, y) for v, (x, y) in pos.items()}
