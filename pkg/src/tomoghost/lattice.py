"""Integer lattice primitives: directions, direction sets, point multisets, grids."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

Point = tuple[int, ...]


class TomographyError(ValueError):
    """Base class for all invalid-input conditions raised by this package."""


class InvalidDirection(TomographyError):
    pass


class NotPairwiseIndependent(TomographyError):
    pass


class NotSpanning(TomographyError):
    pass


class DimensionError(TomographyError):
    pass


class InvalidParameter(TomographyError):
    pass


def _as_point(v: Iterable[int]) -> Point:
    out = tuple(v)
    for c in out:
        if isinstance(c, bool) or not isinstance(c, int):
            raise TypeError(f"lattice coordinates must be integers, got {c!r}")
    return out


@dataclass(frozen=True, order=True)
class Direction:
    """A primitive integer vector whose first nonzero entry is positive."""

    coords: Point

    def __post_init__(self):
        coords = _as_point(self.coords)
        object.__setattr__(self, "coords", coords)
        if not any(coords):
            raise InvalidDirection("direction must be nonzero")
        if math.gcd(*coords) != 1:
            raise InvalidDirection(f"{coords} is not primitive")
        if next(c for c in coords if c) < 0:
            raise InvalidDirection(f"{coords} is not in canonical sign")

    @property
    def d(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def canonicalize_direction(v: Iterable[int]) -> Direction:
    """Divide out the gcd and flip sign so the first nonzero entry is positive.

    >>> canonicalize_direction((-2, 4)).coords
    (1, -2)
    """
    coords = _as_point(v)
    if not any(coords):
        raise InvalidDirection("zero vector has no direction")
    g = math.gcd(*coords)
    sign = 1 if next(c for c in coords if c) > 0 else -1
    return Direction(tuple(sign * c // g for c in coords))


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                # exact division is guaranteed by Sylvester's identity
                a[r][c] = (p * a[r][c] - a[r][col] * a[rank][c]) // prev
            a[r][col] = 0
        prev = p
        rank += 1
    return rank


@dataclass(frozen=True)
class DirectionSet:
    """Pairwise linearly independent directions spanning R^d.

    Build through :func:`validate_direction_set`; the constructor re-checks.
    """

    directions: tuple[Direction, ...]
    d: int

    def __post_init__(self):
        dirs = tuple(self.directions)
        object.__setattr__(self, "directions", dirs)
        for s in dirs:
            if s.d != self.d:
                raise DimensionError(f"direction {s.coords} is not {self.d}-dimensional")
        if len(set(dirs)) != len(dirs):
            dup = next(s for s in dirs if dirs.count(s) > 1)
            raise NotPairwiseIndependent(f"direction {dup.coords} occurs twice (up to scaling)")
        if integer_rank([s.coords for s in dirs]) < self.d:
            raise NotSpanning(f"directions do not span R^{self.d}")

    @property
    def m(self) -> int:
        return len(self.directions)

    def __iter__(self) -> Iterator[Direction]:
        return iter(self.directions)

    def __len__(self) -> int:
        return len(self.directions)

    def __getitem__(self, i):
        return self.directions[i]

    def to_json(self) -> dict:
        return {"d": self.d, "directions": [list(s.coords) for s in self.directions]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "DirectionSet":
        return validate_direction_set(obj["directions"], int(obj["d"]))


def validate_direction_set(S: Iterable[Iterable[int] | Direction], d: int) -> DirectionSet:
    """Canonicalize every vector and check independence and spanning."""
    if d < 2:
        raise DimensionError("dimension must be at least 2")
    dirs = []
    for v in S:
        s = v if isinstance(v, Direction) else canonicalize_direction(v)
        if s.d != d:
            raise DimensionError(f"direction {s.coords} is not {d}-dimensional")
        dirs.append(s)
    return DirectionSet(tuple(dirs), d)


@dataclass(frozen=True)
class PointConfiguration:
    """A finite multiset of lattice points of a fixed dimension.

    ``items`` holds ``(point, multiplicity)`` pairs sorted by point.
    """

    d: int
    items: tuple[tuple[Point, int], ...] = ()
    _counts: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        counts: Counter = Counter()
        for p, k in self.items:
            p = _as_point(p)
            if len(p) != self.d:
                raise DimensionError(f"point {p} is not {self.d}-dimensional")
            if k < 1:
                raise InvalidParameter(f"multiplicity of {p} must be positive, got {k}")
            counts[p] += k
        object.__setattr__(self, "items", tuple(sorted(counts.items())))
        object.__setattr__(self, "_counts", dict(self.items))

    @classmethod
    def from_points(cls, points: Iterable[Iterable[int]], d: int | None = None) -> "PointConfiguration":
        pts = [_as_point(p) for p in points]
        if d is None:
            if not pts:
                raise DimensionError("dimension of an empty configuration must be given")
            d = len(pts[0])
        return cls(d, tuple(Counter(pts).items()))

    @classmethod
    def from_counts(cls, counts: Mapping[Point, int], d: int) -> "PointConfiguration":
        return cls(d, tuple((p, k) for p, k in counts.items() if k))

    @property
    def counts(self) -> Mapping[Point, int]:
        return self._counts

    def points(self) -> list[Point]:
        """All points, repeated according to multiplicity, in sorted order."""
        return [p for p, k in self.items for _ in range(k)]

    def support(self) -> list[Point]:
        return [p for p, _ in self.items]

    def is_set(self) -> bool:
        return all(k == 1 for _, k in self.items)

    def __len__(self) -> int:
        return sum(k for _, k in self.items)

    def __contains__(self, p) -> bool:
        return tuple(p) in self._counts

    def multiplicity(self, p) -> int:
        return self._counts.get(tuple(p), 0)

    def translate(self, t: Sequence[int]) -> "PointConfiguration":
        if len(t) != self.d:
            raise DimensionError("translation vector has wrong dimension")
        return PointConfiguration(
            self.d, tuple((tuple(a + b for a, b in zip(p, t)), k) for p, k in self.items)
        )

    def intersection(self, other: "PointConfiguration") -> "PointConfiguration":
        common = Counter(self._counts) & Counter(other.counts)
        return PointConfiguration.from_counts(common, self.d)

    def difference(self, other: "PointConfiguration") -> "PointConfiguration":
        rest = Counter(self._counts) - Counter(other.counts)
        return PointConfiguration.from_counts(rest, self.d)

    def min_corner(self) -> Point:
        return tuple(min(p[i] for p, _ in self.items) for i in range(self.d))

    def normalized(self) -> "PointConfiguration":
        """Translate so that the coordinate-wise minimum is the origin."""
        if not self.items:
            return self
        return self.translate([-c for c in self.min_corner()])

    def to_json(self) -> dict:
        return {"d": self.d, "points": [list(p) for p in self.points()]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "PointConfiguration":
        return cls.from_points((tuple(p) for p in obj["points"]), int(obj["d"]))


def cancel(F: PointConfiguration, G: PointConfiguration) -> tuple[PointConfiguration, PointConfiguration]:
    """Remove the common part of two multisets."""
    return F.difference(G), G.difference(F)


@dataclass(frozen=True)
class Grid:
    """A box of lattice points ``offset + [0, shape_i)`` per axis.

    The default offset is all ones, which gives the one-based cube ``[n]^d``.
    """

    shape: tuple[int, ...]
    offset: tuple[int, ...] = None

    def __post_init__(self):
        shape = tuple(int(x) for x in self.shape)
        if len(shape) < 2:
            raise DimensionError("grid needs dimension at least 2")
        if any(x < 1 for x in shape):
            raise InvalidParameter(f"grid side lengths must be positive, got {shape}")
        offset = (1,) * len(shape) if self.offset is None else _as_point(self.offset)
        if len(offset) != len(shape):
            raise DimensionError("offset dimension does not match grid shape")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "offset", offset)

    @classmethod
    def cube(cls, n: int, d: int, offset: Sequence[int] | None = None) -> "Grid":
        return cls((n,) * d, None if offset is None else tuple(offset))

    @property
    def d(self) -> int:
        return len(self.shape)

    @property
    def n(self) -> int:
        """Side length; only defined for cubic grids."""
        if len(set(self.shape)) != 1:
            raise InvalidParameter(f"grid {self.shape} is not a cube")
        return self.shape[0]

    def __len__(self) -> int:
        return math.prod(self.shape)

    def __contains__(self, p) -> bool:
        return len(p) == self.d and all(o <= c < o + s for c, o, s in zip(p, self.offset, self.shape))

    def points(self) -> list[Point]:
        """All grid points in lexicographic order."""
        ranges = [range(o, o + s) for o, s in zip(self.offset, self.shape)]
        return list(itertools.product(*ranges))

    def to_json(self) -> dict:
        return {"shape": list(self.shape), "offset": list(self.offset)}
