"""Discrete X-rays, tomographic equivalence and line counts over cubic grids."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .lattice import (
    DimensionError,
    Direction,
    DirectionSet,
    InvalidParameter,
    PointConfiguration,
    TomographyError,
    canonicalize_direction,
)

LineKey = tuple[int, ...]


class UnsupportedOrientation(TomographyError):
    """Line counting is only defined for directions with nonnegative entries."""


def _direction(s) -> Direction:
    return s if isinstance(s, Direction) else canonicalize_direction(s)


def line_key(p: Sequence[int], s: Direction | Sequence[int]) -> LineKey:
    """Name of the lattice line through ``p`` parallel to ``s``.

    The key lists the 2x2 minors ``p_i*s_j - p_j*s_i`` for ``i < j``; two points
    share a key exactly when their difference is parallel to ``s``.
    """
    s = _direction(s)
    if len(p) != s.d:
        raise DimensionError(f"point {tuple(p)} and direction {s.coords} differ in dimension")
    c = s.coords
    return tuple(p[i] * c[j] - p[j] * c[i] for i, j in combinations(range(len(c)), 2))


@dataclass(frozen=True)
class XRayProfile:
    direction: Direction
    counts: Mapping[LineKey, int]

    def __post_init__(self):
        counts = {tuple(k): int(v) for k, v in sorted(dict(self.counts).items())}
        if any(v <= 0 for v in counts.values()):
            raise InvalidParameter("profile counts must be positive")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __eq__(self, other):
        if not isinstance(other, XRayProfile):
            return NotImplemented
        return self.direction == other.direction and self.counts == other.counts

    def __hash__(self):
        return hash((self.direction, tuple(self.counts.items())))

    def to_json(self) -> dict:
        return {
            "direction": list(self.direction.coords),
            "lines": [{"key": list(k), "count": v} for k, v in self.counts.items()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "XRayProfile":
        return cls(
            canonicalize_direction(obj["direction"]),
            {tuple(line["key"]): line["count"] for line in obj["lines"]},
        )


def xray(F: PointConfiguration, s: Direction | Sequence[int]) -> XRayProfile:
    """Number of points of ``F`` (with multiplicity) on each line parallel to ``s``."""
    s = _direction(s)
    if F.d != s.d:
        raise DimensionError(f"configuration is {F.d}-dimensional, direction is {s.d}-dimensional")
    counts: Counter = Counter()
    for p, k in F.items:
        counts[line_key(p, s)] += k
    return XRayProfile(s, counts)


@dataclass(frozen=True)
class Equivalence:
    """Outcome of an equivalence test; truthy when the X-rays all agree."""

    equivalent: bool
    direction: Direction | None = None
    line: LineKey | None = None
    counts: tuple[int, int] | None = None

    def __bool__(self):
        return self.equivalent

    def to_json(self) -> dict:
        if self.equivalent:
            return {"equivalent": True}
        return {
            "equivalent": False,
            "witness": {
                "direction": list(self.direction.coords),
                "key": list(self.line),
                "counts": list(self.counts),
            },
        }


def tomographically_equivalent(
    F: PointConfiguration, G: PointConfiguration, S: DirectionSet | Iterable
) -> Equivalence:
    """Compare X-rays of ``F`` and ``G`` in every direction of ``S``.

    On failure the witness is the first direction (in the order of ``S``) and
    the smallest line key where the counts differ.
    """
    if F.d != G.d:
        raise DimensionError("configurations differ in dimension")
    for s in S:
        a, b = xray(F, s), xray(G, s)
        if a != b:
            key = min(k for k in a.counts.keys() | b.counts.keys() if a.counts.get(k) != b.counts.get(k))
            return Equivalence(False, a.direction, key, (a.counts.get(key, 0), b.counts.get(key, 0)))
    return Equivalence(True)


def _check_counting_args(s, n: int, d: int) -> Direction:
    s = _direction(s) if any(s) else None
    if s is None:
        raise UnsupportedOrientation("zero vector")
    if s.d != d:
        raise DimensionError(f"direction {s.coords} is not {d}-dimensional")
    if any(c < 0 for c in s.coords):
        raise UnsupportedOrientation(f"direction {s.coords} has a negative entry; reflect coordinates first")
    if n < 1:
        raise InvalidParameter("n must be positive")
    return s


def count_lines_exact(s, n: int, d: int) -> int:
    """Exact number of lines parallel to ``s`` that meet ``[n]^d``.

    Each such line has a unique entry point ``p`` with ``p - s`` outside the
    grid; the points that are not entry points form a box of side ``n - s_i``.
    """
    s = _check_counting_args(s, n, d)
    return n**d - math.prod(max(0, n - c) for c in s.coords)


def count_lines_bound(s, n: int, d: int) -> int:
    """Upper bound ``d * n^(d-1) * max(s)`` on the number of lines meeting ``[n]^d``."""
    s = _check_counting_args(s, n, d)
    return d * n ** (d - 1) * max(s.coords)


def reflect_to_nonnegative(s: Direction) -> Direction:
    """Flip negative entries; the cube ``[n]^d`` is symmetric under each reflection."""
    return canonicalize_direction(abs(c) for c in s.coords)
