"""Embedding results and the line-oriented embedding file format."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .sparsegrid import GridParams, GridPoint, make_params


class EmbeddingFormatError(ValueError):
    """Raised for malformed embedding files."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Embedding:
    """Vertex positions on the sparse grid of `params`."""

    params: GridParams
    positions: Mapping[int, GridPoint]
    escalations: int = field(default=0, compare=False)

    @property
    def n(self) -> int:
        return len(self.positions)

    def stretched(self, vertex: int) -> tuple[int, int]:
        """(x, Y) of a vertex with Y = base^y as an exact integer."""
        x, y = self.positions[vertex]
        return x, self.params.stretch_base**y


def serialize_embedding(e: Embedding, stretched: bool = False) -> str:
    lines = [f"emb {e.n} {e.params.n_eff} {e.params.q}"]
    for vertex in sorted(e.positions):
        if stretched:
            x, big_y = e.stretched(vertex)
            lines.append(f"{vertex} {x} {big_y}")
        else:
            x, y = e.positions[vertex]
            lines.append(f"{vertex} {x} {y}")
    return "\n".join(lines) + "\n"


def parse_embedding(text: str) -> Embedding:
    """Parse the unstretched form `emb <n> <nEff> <q>` followed by `<id> <x> <y>`."""
    rows = [
        (number, raw.split())
        for number, raw in enumerate(text.splitlines(), start=1)
        if raw.strip() and not raw.lstrip().startswith("#")
    ]
    if not rows:
        raise EmbeddingFormatError("empty embedding file")

    number, tokens = rows[0]
    if len(tokens) != 4 or tokens[0] != "emb":
        raise EmbeddingFormatError("expected header 'emb <n> <nEff> <q>'", number)
    n, n_eff, q = (_parse_int(tok, number) for tok in tokens[1:])
    if n < 3:
        raise EmbeddingFormatError(f"n must be at least 3, got {n}", number)
    if q < 1 or 4**q != n_eff:
        raise EmbeddingFormatError(f"nEff {n_eff} does not match q {q}", number)
    base = make_params(n)
    params = GridParams(n_input=n, n_eff=n_eff, q=q)
    escalations = q - base.q

    positions: dict[int, GridPoint] = {}
    for number, tokens in rows[1:]:
        if len(tokens) != 3:
            raise EmbeddingFormatError("expected '<id> <x> <y>'", number)
        vertex, x, y = (_parse_int(tok, number) for tok in tokens)
        if vertex in positions:
            raise EmbeddingFormatError(f"duplicate vertex {vertex}", number)
        if vertex >= n:
            raise EmbeddingFormatError(f"vertex {vertex} out of range", number)
        positions[vertex] = GridPoint(x, y)

    if len(positions) != n:
        raise EmbeddingFormatError(f"expected {n} positions, found {len(positions)}")
    return Embedding(
        params=params, positions=positions, escalations=max(0, escalations)
    )


def _parse_int(token: str, line: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise EmbeddingFormatError(f"malformed integer {token!r}", line) from None
    if value < 0:
        raise EmbeddingFormatError(f"negative value {value}", line)
    return value


def read_embedding(path: Path | str) -> Embedding:
    return parse_embedding(Path(path).read_text(encoding="utf-8"))


def write_embedding(e: Embedding, path: Path | str, stretched: bool = False) -> None:
    Path(path).write_text(serialize_embedding(e, stretched=stretched), encoding="utf-8")
