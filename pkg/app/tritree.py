"""
Planar 3-trees as insertion sequences, and their face-representative trees.

A planar 3-tree starts from the triangle (0, 1, 2) labeled left, right and
top. Insertion k adds vertex k + 3 inside a leaf triangle of the face tree and
attaches three children to it, numbered 1 + 3k (bottom), 2 + 3k (left) and
3 + 3k (right). For a host (l, r, t) and new vertex u the children are
bottom (l, r, u), left (l, u, t) and right (u, r, t).

WHY THIS EXISTS:
- Hosts are named by face-tree node id, so a file never depends on geometry
- The face tree carries the weights and hub flags the embedder schedules on
"""

from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, replace
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Iterator

import networkx as nx

if TYPE_CHECKING:
    from .sparsegrid import GridParams

logger = logging.getLogger("p3t.tritree")

Triangle = tuple[int, int, int]

ROOT_TRIANGLE: Triangle = (0, 1, 2)
ROOT_NODE = 0
MODELS = ("uniform-face", "path", "balanced")


class TriTreeFormatError(ValueError):
    """Raised for malformed 3-tree files and invalid insertion sequences."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.reason = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Insertion:
    vertex: int
    host: int


def child_ids(k: int) -> tuple[int, int, int]:
    """Node ids (bottom, left, right) created by insertion k."""
    return 1 + 3 * k, 2 + 3 * k, 3 + 3 * k


def split_triangle(triangle: Triangle, u: int) -> tuple[Triangle, Triangle, Triangle]:
    """Children (bottom, left, right) of `triangle` after inserting `u`."""
    left, right, top = triangle
    return (left, right, u), (left, u, top), (u, right, top)


class _FaceBuilder:
    """Incremental face bookkeeping shared by validation, parsing and generation."""

    def __init__(self):
        self.triangles: list[Triangle] = [ROOT_TRIANGLE]
        self.split: set[int] = set()
        self.by_vertices: dict[frozenset[int], int] = {
            frozenset(ROOT_TRIANGLE): ROOT_NODE
        }

    @property
    def node_count(self) -> int:
        return len(self.triangles)

    def lookup(self, a: int, b: int, c: int) -> int | None:
        return self.by_vertices.get(frozenset((a, b, c)))

    def insert(self, k: int, vertex: int, host: int) -> tuple[int, int, int]:
        if vertex != k + 3:
            raise TriTreeFormatError(f"expected vertex id {k + 3}, got {vertex}")
        if not 0 <= host < self.node_count:
            raise TriTreeFormatError(f"unknown host node {host}")
        if host in self.split:
            raise TriTreeFormatError("host not a leaf")
        self.split.add(host)
        kids = child_ids(k)
        for node, triangle in zip(kids, split_triangle(self.triangles[host], vertex)):
            self.triangles.append(triangle)
            self.by_vertices[frozenset(triangle)] = node
        return kids


@dataclass(frozen=True)
class TriTree:
    """A planar 3-tree given by its insertion sequence over the root triangle."""

    n: int
    insertions: tuple[Insertion, ...] = ()
    root_triangle: Triangle = ROOT_TRIANGLE

    def __post_init__(self):
        object.__setattr__(self, "insertions", tuple(self.insertions))
        if self.n < 3:
            raise TriTreeFormatError(
                f"a 3-tree needs at least 3 vertices, got {self.n}"
            )
        if tuple(self.root_triangle) != ROOT_TRIANGLE:
            raise TriTreeFormatError("root triangle must be 0 1 2")
        if len(self.insertions) != self.n - 3:
            raise TriTreeFormatError(
                f"expected {self.n - 3} insertions, found {len(self.insertions)}"
            )
        builder = _FaceBuilder()
        for k, ins in enumerate(self.insertions):
            builder.insert(k, ins.vertex, ins.host)

    def node_triangles(self) -> list[Triangle]:
        """Triangle (left, right, top) of every face-tree node, by node id."""
        triangles = [ROOT_TRIANGLE]
        for ins in self.insertions:
            triangles.extend(split_triangle(triangles[ins.host], ins.vertex))
        return triangles

    def host_triangles(self) -> dict[int, Triangle]:
        """Triangle each inserted vertex was placed into."""
        triangles = self.node_triangles()
        return {ins.vertex: triangles[ins.host] for ins in self.insertions}

    def edges(self) -> list[tuple[int, int]]:
        """Sorted edge list; always 3n - 6 edges."""
        a, b, c = ROOT_TRIANGLE
        edges = {(a, b), (a, c), (b, c)}
        for u, triangle in self.host_triangles().items():
            edges.update((min(u, w), max(u, w)) for w in triangle)
        return sorted(edges)

    def to_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    def plane_embedding(self) -> nx.PlanarEmbedding:
        host = self.host_triangles()
        return build_plane_embedding(
            ROOT_TRIANGLE, ((u, host[u]) for u in range(3, self.n))
        )


def build_plane_embedding(
    outer: Triangle, insertions: Iterable[tuple[int, Triangle]]
) -> nx.PlanarEmbedding:
    """
    Rotation system of a stacked triangulation.

    `outer` is (left, right, top) and bounds the drawing counterclockwise;
    each insertion (u, (l, r, t)) must name a current inner face.
    """
    a, b, c = outer
    embedding = nx.PlanarEmbedding()
    embedding.add_half_edge(a, b)
    embedding.add_half_edge(a, c, cw=b)
    embedding.add_half_edge(b, c)
    embedding.add_half_edge(b, a, cw=c)
    embedding.add_half_edge(c, a)
    embedding.add_half_edge(c, b, cw=a)
    for u, (left, right, top) in insertions:
        embedding.add_half_edge(left, u, cw=right)
        embedding.add_half_edge(right, u, cw=top)
        embedding.add_half_edge(top, u, cw=left)
        embedding.add_half_edge(u, left)
        embedding.add_half_edge(u, right, cw=left)
        embedding.add_half_edge(u, top, cw=right)
    return embedding


# === Face-representative tree ===


@dataclass(frozen=True)
class FaceNode:
    id: int
    v_left: int
    v_right: int
    v_top: int
    parent: int | None = None
    depth: int = 0
    children: tuple[int, int, int] | None = None
    vertex: int | None = None
    weight: int = 0
    is_hub: bool = False

    @property
    def triangle(self) -> Triangle:
        return self.v_left, self.v_right, self.v_top

    @property
    def is_leaf(self) -> bool:
        return self.children is None


@dataclass(frozen=True)
class FaceTree:
    nodes: tuple[FaceNode, ...]
    root: int = ROOT_NODE

    def __getitem__(self, node: int) -> FaceNode:
        return self.nodes[node]

    def __len__(self) -> int:
        return len(self.nodes)

    def leaves(self) -> list[int]:
        return [node.id for node in self.nodes if node.is_leaf]

    def hubs(self) -> list[int]:
        return [node.id for node in self.nodes if node.is_hub]

    def depth(self) -> int:
        return max(node.depth for node in self.nodes)

    def bfs_order(self, start: int | None = None) -> Iterator[int]:
        queue = deque([self.root if start is None else start])
        while queue:
            node = queue.popleft()
            yield node
            children = self.nodes[node].children
            if children:
                queue.extend(children)

    def subtree_nodes(self, node: int) -> list[int]:
        """Internal nodes of the subtree at `node`, in insertion order."""
        return sorted(n for n in self.bfs_order(node) if not self.nodes[n].is_leaf)

    def subtree_vertices(self, node: int) -> list[int]:
        """Vertices strictly inside the triangle of `node` (its V_Δ)."""
        return [self.nodes[n].vertex for n in self.subtree_nodes(node)]


def build_face_tree(t: TriTree) -> FaceTree:
    triangles = t.node_triangles()
    count = len(triangles)
    parent: list[int | None] = [None] * count
    depth = [0] * count
    children: list[tuple[int, int, int] | None] = [None] * count
    vertex: list[int | None] = [None] * count

    for k, ins in enumerate(t.insertions):
        kids = child_ids(k)
        children[ins.host] = kids
        vertex[ins.host] = ins.vertex
        for kid in kids:
            parent[kid] = ins.host
            depth[kid] = depth[ins.host] + 1

    # Children always carry larger ids than their parent
    weight = [0] * count
    for node in range(count - 1, -1, -1):
        if children[node] is not None:
            weight[node] = 1 + sum(weight[kid] for kid in children[node])

    nodes = tuple(
        FaceNode(
            id=node,
            v_left=triangles[node][0],
            v_right=triangles[node][1],
            v_top=triangles[node][2],
            parent=parent[node],
            depth=depth[node],
            children=children[node],
            vertex=vertex[node],
            weight=weight[node],
        )
        for node in range(count)
    )
    return FaceTree(nodes=nodes)


def designate_hubs(ft: FaceTree, params: "GridParams") -> FaceTree:
    """
    Flag hubs top-down: the root, plus every node whose weight w satisfies
    2^q <= w <= w(nearest hub ancestor) - 2^q.
    """
    threshold = params.step
    flags = [False] * len(ft)
    flags[ft.root] = True
    stack = [(ft.root, ft[ft.root].weight)]
    while stack:
        node, hub_weight = stack.pop()
        for kid in ft[node].children or ():
            weight = ft[kid].weight
            if threshold <= weight <= hub_weight - threshold:
                flags[kid] = True
                stack.append((kid, weight))
            else:
                stack.append((kid, hub_weight))
    logger.debug("designated %d hubs with threshold %d", sum(flags), threshold)
    return FaceTree(
        nodes=tuple(replace(node, is_hub=flags[node.id]) for node in ft.nodes),
        root=ft.root,
    )


# === Generation ===


def generate_random(n: int, seed: int, model: str = "uniform-face") -> TriTree:
    """
    Deterministic random 3-tree.

    uniform-face picks the host uniformly among current leaves, path always
    splits the most recent bottom child, balanced splits leaves first-in
    first-out.
    """
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")

    rng = random.Random(seed)
    insertions: list[Insertion] = []
    leaves: list[int] = [ROOT_NODE]
    queue: deque[int] = deque([ROOT_NODE])
    bottom = ROOT_NODE

    for k in range(n - 3):
        if model == "uniform-face":
            index = rng.randrange(len(leaves))
            host = leaves[index]
            leaves[index] = leaves[-1]
            leaves.pop()
        elif model == "path":
            host = bottom
        else:
            host = queue.popleft()

        kids = child_ids(k)
        insertions.append(Insertion(vertex=k + 3, host=host))
        leaves.extend(kids)
        queue.extend(kids)
        bottom = kids[0]

    return TriTree(n=n, insertions=tuple(insertions))


# === File format ===


def parse_tritree(text: str) -> TriTree:
    """
    Parse the line-oriented 3-tree format.

    `v <id> <host>` names the host by face-tree node id; `v <id> <a> <b> <c>`
    names it by the vertex set of a current leaf triangle. Blank lines and
    `#` comments are ignored.
    """
    rows: list[tuple[int, list[str]]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((number, line.split()))

    if not rows:
        raise TriTreeFormatError("empty 3-tree file")

    number, tokens = rows[0]
    if len(tokens) != 2 or tokens[0] != "p3t":
        raise TriTreeFormatError("expected header 'p3t <n>'", number)
    n = _parse_int(tokens[1], number)
    if n < 3:
        raise TriTreeFormatError(f"a 3-tree needs at least 3 vertices, got {n}", number)

    if len(rows) < 2:
        raise TriTreeFormatError("missing 'root 0 1 2' line")
    number, tokens = rows[1]
    if len(tokens) != 4 or tokens[0] != "root":
        raise TriTreeFormatError("expected 'root <a> <b> <c>'", number)
    if tuple(_parse_int(tok, number) for tok in tokens[1:]) != ROOT_TRIANGLE:
        raise TriTreeFormatError("root triangle must be 0 1 2", number)

    builder = _FaceBuilder()
    seen: set[int] = set(ROOT_TRIANGLE)
    insertions: list[Insertion] = []
    for number, tokens in rows[2:]:
        if tokens[0] != "v" or len(tokens) not in (3, 5):
            raise TriTreeFormatError(
                "expected 'v <id> <host>' or 'v <id> <a> <b> <c>'", number
            )
        values = [_parse_int(tok, number) for tok in tokens[1:]]
        vertex = values[0]
        if vertex in seen:
            raise TriTreeFormatError(f"duplicate vertex id {vertex}", number)
        if len(values) == 2:
            host = values[1]
        else:
            host = builder.lookup(*values[1:])
            if host is None:
                raise TriTreeFormatError(
                    "host triangle {} {} {} does not exist".format(*values[1:]), number
                )
        try:
            builder.insert(len(insertions), vertex, host)
        except TriTreeFormatError as exc:
            raise TriTreeFormatError(exc.reason, number) from None
        seen.add(vertex)
        insertions.append(Insertion(vertex=vertex, host=host))

    if len(insertions) != n - 3:
        raise TriTreeFormatError(
            f"expected {n - 3} insertions, found {len(insertions)}"
        )
    return TriTree(n=n, insertions=tuple(insertions))


def _parse_int(token: str, line: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise TriTreeFormatError(f"malformed integer {token!r}", line) from None
    if value < 0:
        raise TriTreeFormatError(f"negative value {value}", line)
    return value


def serialize_tritree(t: TriTree) -> str:
    lines = [f"p3t {t.n}", "root {} {} {}".format(*ROOT_TRIANGLE)]
    lines.extend(f"v {ins.vertex} {ins.host}" for ins in t.insertions)
    return "\n".join(lines) + "\n"


def read_tritree(path: Path | str) -> TriTree:
    return parse_tritree(Path(path).read_text(encoding="utf-8"))


def write_tritree(t: TriTree, path: Path | str) -> None:
    Path(path).write_text(serialize_tritree(t), encoding="utf-8")
