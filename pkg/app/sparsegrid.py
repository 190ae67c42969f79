"""
The sparse grid point set and the stretch map.

Points live on the integer grid [0, side]^2 with side = 14 * n_eff and
step = 2^q = n_eff^(1/2). A grid point belongs to the sparse grid when

- step divides x * y (full rows and full columns of every scale), or
- it lies on a forward diagonal run (i + k, j + k) or a backward diagonal
  run (i + k, j - k), k = 1..step, anchored at a point (i, j) whose
  coordinates are both multiples of step.

Stretching maps (x, y) to (x, base^y) with base = 28 * n_eff. All decisions
are made on the unstretched integers; stretched values exist only for exact
predicates and output.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Literal, NamedTuple

logger = logging.getLogger("p3t.sparsegrid")

Direction = Literal["forward", "backward"]
DIRECTIONS: tuple[Direction, ...] = ("forward", "backward")


class GridPreconditionError(ValueError):
    """Query made outside the regime in which a point is guaranteed."""


class GridSearchError(RuntimeError):
    """A point that must exist was not found."""


@dataclass(frozen=True)
class GridParams:
    n_input: int
    n_eff: int
    q: int

    def __post_init__(self):
        if self.n_eff < 4 or 4 ** self.q != self.n_eff:
            raise ValueError(f"n_eff must be 4^q with q >= 1, got {self.n_eff}")

    @property
    def step(self) -> int:
        """2^q, the spacing of full rows and columns."""
        return 1 << self.q

    @property
    def side(self) -> int:
        return 14 * self.n_eff

    @property
    def init_side(self) -> int:
        return 10 * self.n_eff

    @property
    def stretch_base(self) -> int:
        return 28 * self.n_eff


class GridPoint(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class StretchedPoint:
    """Image (x, base^y) of a grid point; Y is computed on first use."""

    x: int
    y: int
    base: int

    @cached_property
    def Y(self) -> int:  # noqa: N802
        return self.base**self.y


@dataclass(frozen=True)
class OpenRect:
    """Open axis-aligned rectangle (x1, x2) x (y1, y2) with integer corners."""

    x1: int
    x2: int
    y1: int
    y2: int

    def __post_init__(self):
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def width(self) -> int:
        return self.x2 - self.x1

    @property
    def height(self) -> int:
        return self.y2 - self.y1

    @property
    def area(self) -> int:
        return self.width * self.height

    @property
    def lower_left(self) -> GridPoint:
        return GridPoint(self.x1, self.y1)

    @property
    def lower_right(self) -> GridPoint:
        return GridPoint(self.x2, self.y1)

    def contains_point(self, x: int, y: int) -> bool:
        return self.x1 < x < self.x2 and self.y1 < y < self.y2

    def contains_rect(self, other: "OpenRect") -> bool:
        return (
            self.x1 <= other.x1
            and other.x2 <= self.x2
            and self.y1 <= other.y1
            and other.y2 <= self.y2
        )

    def intersection(self, other: "OpenRect") -> "OpenRect | None":
        x1, x2 = max(self.x1, other.x1), min(self.x2, other.x2)
        y1, y2 = max(self.y1, other.y1), min(self.y2, other.y2)
        if x1 < x2 and y1 < y2:
            return OpenRect(x1, x2, y1, y2)
        return None

    def __str__(self) -> str:
        return f"({self.x1},{self.x2})x({self.y1},{self.y2})"


def make_params(n: int, escalation: int = 0) -> GridParams:
    """
    Parameters for n vertices: n_eff is the smallest power of 4 >= n,
    multiplied by 4 once per escalation step.
    """
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if escalation < 0:
        raise ValueError(f"escalation must be non-negative, got {escalation}")
    q = 1
    while 4**q < n:
        q += 1
    q += escalation
    return GridParams(n_input=n, n_eff=4**q, q=q)


# === Membership ===


def is_forward_point(x: int, y: int, params: GridParams) -> bool:
    return x >= 1 and y >= 1 and (x - y) % params.step == 0


def is_backward_point(x: int, y: int, params: GridParams) -> bool:
    step = params.step
    if x < 1 or (x + y) % step:
        return False
    # Anchor (x - k, y + k) with k in 1..step
    k = (x - 1) % step + 1
    return y + k <= params.side


def is_diagonal_point(x: int, y: int, direction: Direction, params: GridParams) -> bool:
    if direction == "forward":
        return is_forward_point(x, y, params)
    return is_backward_point(x, y, params)


def _member(x: int, y: int, params: GridParams) -> bool:
    return (
        (x * y) % params.step == 0
        or is_forward_point(x, y, params)
        or is_backward_point(x, y, params)
    )


def in_domain(x: int, y: int, params: GridParams) -> bool:
    return 0 <= x <= params.side and 0 <= y <= params.side


def contains(p: GridPoint | tuple[int, int], params: GridParams) -> bool:
    """True iff p is a point of the sparse grid."""
    x, y = p
    if not in_domain(x, y, params):
        raise GridPreconditionError(f"point {tuple(p)} outside [0, {params.side}]^2")
    return _member(x, y, params)


def residue_member(rx: int, ry: int, step: int) -> bool:
    """Membership by residues mod step, valid everywhere in the domain."""
    return (rx * ry) % step == 0 or rx == ry or (rx + ry) % step == 0


def count_points(params: GridParams) -> int:
    """|B_n| over [0, side]^2, summed over member residue classes."""
    step = params.step
    per_class = params.side // step
    sizes = [per_class + 1] + [per_class] * (step - 1)
    return sum(
        sizes[rx] * sizes[ry]
        for rx in range(step)
        for ry in range(step)
        if residue_member(rx, ry, step)
    )


def _row_residues(y: int, params: GridParams) -> list[int]:
    step = params.step
    ry = y % step
    return [rx for rx in range(step) if residue_member(rx, ry, step)]


def iter_points(
    params: GridParams, rect: OpenRect | None = None
) -> Iterator[GridPoint]:
    """Row-major enumeration of the sparse grid, optionally inside an open rect."""
    if rect is None:
        x_lo, x_hi, y_lo, y_hi = 0, params.side, 0, params.side
    else:
        x_lo = max(0, rect.x1 + 1)
        x_hi = min(params.side, rect.x2 - 1)
        y_lo = max(0, rect.y1 + 1)
        y_hi = min(params.side, rect.y2 - 1)
    step = params.step
    for y in range(y_lo, y_hi + 1):
        residues = set(_row_residues(y, params))
        for x in range(x_lo, x_hi + 1):
            if x % step in residues:
                yield GridPoint(x, y)


# === Rectangle queries ===


def _require_in_domain(r: OpenRect, params: GridParams) -> None:
    if r.x1 < 0 or r.y1 < 0 or r.x2 > params.side or r.y2 > params.side:
        raise GridPreconditionError(f"rectangle {r} leaves [0, {params.side}]^2")


def _largest_power_below(length: int) -> int:
    """Largest k with 2^k < length (length >= 2)."""
    return (length - 1).bit_length() - 1


def _first_multiple_above(value: int, step: int) -> int:
    return (value // step + 1) * step


def _multiples_inside(lo: int, hi: int, step: int) -> int:
    """Number of multiples of step in the open interval (lo, hi)."""
    return max(0, (hi - 1) // step - lo // step)


def point_in_rect(r: OpenRect, params: GridParams) -> GridPoint:
    """
    A sparse grid point strictly inside r.

    Takes the first multiple of 2^k above x1 and of 2^l above y1, where 2^k
    and 2^l are the largest powers of two below the width and the height;
    the area bound forces k + l >= q.
    """
    _require_in_domain(r, params)
    if r.width <= 1 or r.height <= 1 or r.area < 4 * params.step:
        raise GridPreconditionError(
            f"rectangle {r} too small: need width, height > 1 and area >= "
            f"{4 * params.step}"
        )
    k = _largest_power_below(r.width)
    l = _largest_power_below(r.height)
    p = GridPoint(
        _first_multiple_above(r.x1, 1 << k), _first_multiple_above(r.y1, 1 << l)
    )
    if not contains(p, params):
        raise GridSearchError(f"constructed point {p} is not a grid point")
    return p


def diagonal_point_in_rect(
    r: OpenRect, direction: Direction, params: GridParams
) -> GridPoint:
    """Lowest, then leftmost, point of the given diagonal class inside r."""
    _require_in_domain(r, params)
    step = params.step
    if not ((r.width > 1 and r.height > step) or (r.width > step and r.height > 1)):
        raise GridPreconditionError(
            f"rectangle {r} too small for a {direction} diagonal point"
        )
    for y in range(r.y1 + 1, r.y2):
        target = y % step if direction == "forward" else (-y) % step
        x = r.x1 + 1 + (target - r.x1 - 1) % step
        if x < r.x2 and is_diagonal_point(x, y, direction, params):
            return GridPoint(x, y)
    raise GridSearchError(f"no {direction} diagonal point inside {r}")


def cross_product_in_rect(
    r: OpenRect, m: int, params: GridParams
) -> tuple[list[int], list[int]]:
    """
    Columns X and rows Y inside r with X x Y in the sparse grid.

    X are the multiples of 2^k and Y the multiples of 2^(q-k) inside r, for
    the largest k in [0, q] giving |X| >= 2m and |Y| >= m.
    """
    _require_in_domain(r, params)
    if m < 1:
        raise GridPreconditionError(f"m must be positive, got {m}")
    for k in range(params.q, -1, -1):
        x_step, y_step = 1 << k, 1 << (params.q - k)
        if (
            _multiples_inside(r.x1, r.x2, x_step) >= 2 * m
            and _multiples_inside(r.y1, r.y2, y_step) >= m
        ):
            xs = list(range(_first_multiple_above(r.x1, x_step), r.x2, x_step))
            ys = list(range(_first_multiple_above(r.y1, y_step), r.y2, y_step))
            return xs, ys
    raise GridPreconditionError(f"no {2 * m} x {m} cross product inside {r}")


def _leftmost_in_row(y: int, x1: int, x2: int, params: GridParams) -> int | None:
    step = params.step
    start = x1 + 1
    candidates = []
    # Full columns for this row: multiples of step / gcd(y, step)
    column_step = step // math.gcd(y, step)
    candidates.append(start + (-start) % column_step)
    candidates.append(start + (y - start) % step)
    candidates.append(start + (-y - start) % step)
    hits = [x for x in candidates if x < x2 and _member(x, y, params)]
    return min(hits) if hits else None


def lowest_point_in(r: OpenRect, params: GridParams) -> GridPoint | None:
    """Lowest, then leftmost, sparse grid point strictly inside r."""
    _require_in_domain(r, params)
    for y in range(r.y1 + 1, r.y2):
        x = _leftmost_in_row(y, r.x1, r.x2, params)
        if x is not None:
            return GridPoint(x, y)
    return None


# === Stretching ===


def stretch(p: GridPoint | tuple[int, int], params: GridParams) -> StretchedPoint:
    x, y = p
    if not in_domain(x, y, params):
        raise GridPreconditionError(f"point {tuple(p)} outside [0, {params.side}]^2")
    return StretchedPoint(x=x, y=y, base=params.stretch_base)
