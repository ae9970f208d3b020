"""Explicit switching components and the coprime direction selection."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from ._intmath import ceil_root
from .lattice import (
    DirectionSet,
    InvalidParameter,
    PointConfiguration,
    TomographyError,
    cancel,
    integer_rank,
    validate_direction_set,
)
from .xray import tomographically_equivalent


class DegenerateGhost(TomographyError):
    pass


@dataclass(frozen=True)
class GhostPair:
    """Two disjoint equal-size multisets with the same X-rays in every direction of ``S``."""

    F: PointConfiguration
    G: PointConfiguration
    S: DirectionSet

    def __post_init__(self):
        if self.F.d != self.G.d or self.F.d != self.S.d:
            raise InvalidParameter("ghost pair parts differ in dimension")

    @property
    def size(self) -> int:
        return len(self.F)

    @property
    def verified(self) -> bool:
        return (
            len(self.F) == len(self.G)
            and len(self.F) > 0
            and not self.F.intersection(self.G).items
            and bool(tomographically_equivalent(self.F, self.G, self.S))
        )

    def to_json(self) -> dict:
        return {
            "F": self.F.to_json(),
            "G": self.G.to_json(),
            "S": self.S.to_json(),
            "size": self.size,
            "verified": self.verified,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "GhostPair":
        return cls(
            PointConfiguration.from_json(obj["F"]),
            PointConfiguration.from_json(obj["G"]),
            DirectionSet.from_json(obj["S"]),
        )


@dataclass(frozen=True)
class HypercubeGhost:
    raw_F: PointConfiguration
    raw_G: PointConfiguration
    pair: GhostPair

    def to_json(self) -> dict:
        out = self.pair.to_json()
        out["raw_F"] = self.raw_F.to_json()
        out["raw_G"] = self.raw_G.to_json()
        return out


def hypercube_ghost(S: DirectionSet) -> HypercubeGhost:
    """Project the two parity classes of ``{0,1}^m`` along the directions of ``S``.

    Vertex ``v`` maps to ``sum(v_i * s_i)``; even-weight vertices form the raw
    first side, odd-weight ones the second.  Common points are then cancelled.
    """
    if S.m < 2:
        raise InvalidParameter("need at least two directions")
    d = S.d
    even, odd = [], []
    for v in itertools.product((0, 1), repeat=S.m):
        image = tuple(sum(bit * s[i] for bit, s in zip(v, S)) for i in range(d))
        (odd if sum(v) % 2 else even).append(image)
    raw_F = PointConfiguration.from_points(even, d)
    raw_G = PointConfiguration.from_points(odd, d)
    F, G = cancel(raw_F, raw_G)
    if not F.items:
        raise DegenerateGhost("cancellation removed every point")
    pair = GhostPair(F, G, S)
    if not tomographically_equivalent(F, G, S):
        raise DegenerateGhost("projected parity classes are not equivalent")  # pragma: no cover
    return HypercubeGhost(raw_F, raw_G, pair)


@dataclass(frozen=True)
class PolygonPairingCertificate:
    """Vertex pairings of the regular ``2m``-gon, one list per odd chord class ``c``.

    Chords ``v_i v_j`` and ``v_a v_b`` are parallel iff ``i + j == a + b (mod 2m)``;
    class ``c`` pairs ``i`` with ``(c - i) mod 2m``.
    """

    m: int
    classes: Mapping[int, tuple[tuple[int, int], ...]]

    def check(self) -> bool:
        """Every pair joins an even and an odd index; each index occurs once per class."""
        two_m = 2 * self.m
        if sorted(self.classes) != list(range(1, two_m, 2)):
            return False
        for c, pairs in self.classes.items():
            seen = sorted(i for pair in pairs for i in pair)
            if seen != list(range(two_m)):
                return False
            for i, j in pairs:
                if (i - j) % 2 == 0 or (i + j) % two_m != c:
                    return False
        return True

    def float_check(self, tol: float = 1e-9) -> bool:
        """Place vertex ``k`` at angle ``pi*k/m`` and confirm each class is parallel."""
        verts = [(math.cos(math.pi * k / self.m), math.sin(math.pi * k / self.m)) for k in range(2 * self.m)]
        for pairs in self.classes.values():
            (i0, j0) = pairs[0]
            ux, uy = verts[j0][0] - verts[i0][0], verts[j0][1] - verts[i0][1]
            for i, j in pairs[1:]:
                vx, vy = verts[j][0] - verts[i][0], verts[j][1] - verts[i][1]
                if abs(ux * vy - uy * vx) > tol:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "classes": [{"c": c, "pairs": [list(p) for p in pairs]} for c, pairs in self.classes.items()],
            "even_vertices": list(range(0, 2 * self.m, 2)),
            "odd_vertices": list(range(1, 2 * self.m, 2)),
            "verified": self.check(),
        }


def polygon_ghost(m: int) -> PolygonPairingCertificate:
    if m < 2:
        raise InvalidParameter("m must be at least 2")
    two_m = 2 * m
    classes = {}
    for c in range(1, two_m, 2):
        pairs = sorted({tuple(sorted((i, (c - i) % two_m))) for i in range(two_m)})
        classes[c] = tuple(pairs)
    return PolygonPairingCertificate(m, classes)


EXAMPLE_F = [(0, 2), (1, 4), (2, 2), (3, 0), (4, 3), (5, 1)]
EXAMPLE_G = [(0, 3), (1, 1), (2, 4), (3, 2), (4, 0), (5, 2)]
EXAMPLE_S = [(1, 0), (0, 1), (1, 1), (1, -1), (-2, 1)]


def paper_example_m5() -> GhostPair:
    """The 6-point pair with equal X-rays in five planar directions."""
    pair = GhostPair(
        PointConfiguration.from_points(EXAMPLE_F),
        PointConfiguration.from_points(EXAMPLE_G),
        validate_direction_set(EXAMPLE_S, 2),
    )
    if not pair.verified:
        raise AssertionError("built-in five-direction example failed verification")  # pragma: no cover
    return pair


# -- coprime tuples -----------------------------------------------------------


def mobius_sieve(n: int) -> list[int]:
    """``mu[0..n]`` by a linear sieve (``mu[0]`` is set to 0)."""
    mu = [1] * (n + 1)
    if n >= 0:
        mu[0] = 0
    is_comp = [False] * (n + 1)
    primes: list[int] = []
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if i * p > n:
                break
            is_comp[i * p] = True
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return mu


def coprime_count_mobius(p: int, d: int, mu: list[int] | None = None) -> int:
    """Number of ``d``-tuples in ``[1..p]^d`` with gcd 1, as ``sum mu(j) * (p//j)^d``."""
    if mu is None or len(mu) <= p:
        mu = mobius_sieve(p)
    return sum(mu[j] * (p // j) ** d for j in range(1, p + 1) if mu[j])


def coprime_counts_by_gcd(p_max: int, d: int) -> list[int]:
    """``R(p, d)`` for every ``p <= p_max`` by taking the gcd of every tuple.

    Tuples are bucketed by their largest entry, so one sweep over
    ``[1..p_max]^d`` yields all prefixes.  The first coordinate is swept in
    Python to bound memory.
    """
    if p_max < 1:
        return [0]
    per_max = np.zeros(p_max + 1, dtype=np.int64)
    axis = np.arange(1, p_max + 1, dtype=np.int64)
    rest = np.meshgrid(*([axis] * (d - 1)), indexing="ij") if d > 1 else []
    rest_gcd = np.gcd.reduce(np.stack(rest), axis=0) if d > 2 else (rest[0] if d == 2 else None)
    rest_max = np.max(np.stack(rest), axis=0) if d > 1 else None
    for a in range(1, p_max + 1):
        g = np.gcd(rest_gcd, a)
        mx = np.maximum(rest_max, a)
        per_max += np.bincount(mx[g == 1].ravel(), minlength=p_max + 1)
    return [int(x) for x in np.cumsum(per_max)]


@dataclass(frozen=True)
class CoprimeCensus:
    p: int
    d: int
    R: int

    @property
    def density(self) -> Fraction:
        return Fraction(self.R, self.p**self.d)

    def to_json(self) -> dict:
        dens = self.density
        return {
            "p": self.p,
            "d": self.d,
            "R": self.R,
            "density": f"{dens.numerator}/{dens.denominator}",
            "density_float": float(dens),
        }


def coprime_census(p: int, d: int, method: str = "mobius") -> CoprimeCensus:
    """Count relatively prime tuples in ``[1..p]^d``.

    ``method`` is ``"mobius"``, ``"gcd"`` or ``"both"`` (which cross-checks).
    """
    if p < 1 or d < 2:
        raise InvalidParameter("need p >= 1 and d >= 2")
    if method not in ("mobius", "gcd", "both"):
        raise InvalidParameter(f"unknown census method {method!r}")
    R = None
    if method in ("mobius", "both"):
        R = coprime_count_mobius(p, d)
    if method in ("gcd", "both"):
        by_gcd = coprime_counts_by_gcd(p, d)[p]
        if R is not None and R != by_gcd:
            raise AssertionError(f"census mismatch: mobius {R} vs gcd {by_gcd}")  # pragma: no cover
        R = by_gcd
    return CoprimeCensus(p, d, R)


def zeta(d: int, tol: float = 1e-9) -> tuple[float, float]:
    """Enclosure of ``zeta(d)`` for integer ``d >= 2``.

    The tail beyond ``M - 1`` lies between ``M^(1-d)/(d-1)`` and that plus
    ``M^-d``; ``M`` is chosen so the enclosure is narrower than ``tol``.
    """
    if d < 2:
        raise InvalidParameter("zeta is evaluated for integer d >= 2 only")
    M = 2
    while M ** (-d) > tol:
        M *= 2
    head = math.fsum(k ** (-d) for k in range(M - 1, 0, -1))
    tail_lo = M ** (1 - d) / (d - 1)
    return head + tail_lo, head + tail_lo + M ** (-d)


@dataclass(frozen=True)
class ZetaCheck:
    p: int
    d: int
    R: int
    exceeds_half: bool
    density: float
    inverse_zeta: float
    deviation: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def zeta_lower_check(p: int, d: int) -> ZetaCheck:
    """Is ``R(p, d) > p^d / 2``, and how far is ``R/p^d`` from ``1/zeta(d)``?"""
    census = coprime_census(p, d)
    lo, hi = zeta(d)
    z = (lo + hi) / 2
    dens = float(census.density)
    return ZetaCheck(
        p=p,
        d=d,
        R=census.R,
        exceeds_half=2 * census.R > p**d,
        density=dens,
        inverse_zeta=1 / z,
        deviation=abs(dens - 1 / z),
    )


# -- direction selection --------------------------------------------------------


@dataclass(frozen=True)
class DirectionSelection:
    directions: DirectionSet
    q: int
    base_q: int
    available: int
    replaced_with_units: bool

    @property
    def q_increments(self) -> int:
        return self.q - self.base_q

    def to_json(self) -> dict:
        out = self.directions.to_json()
        out.update(
            q=self.q,
            base_q=self.base_q,
            q_increments=self.q_increments,
            available=self.available,
            replaced_with_units=self.replaced_with_units,
        )
        return out


def _primitive_tuples(q: int, d: int) -> list[tuple[int, ...]]:
    return [t for t in itertools.product(range(1, q + 1), repeat=d) if math.gcd(*t) == 1]


def select_directions(m: int, d: int) -> DirectionSelection:
    """Pick ``m`` primitive directions from ``[1..q]^d`` with ``q = ceil((2m)^(1/d))``.

    Tuples are taken in lexicographic order.  If the box holds fewer than ``m``
    of them, ``q`` grows until it does.  If the choice fails to span, the last
    ``d`` picks are swapped for the unit vectors.
    """
    if d < 2 or m < d:
        raise InvalidParameter("need m >= d >= 2")
    base_q = q = ceil_root(2 * m, d)
    prim = _primitive_tuples(q, d)
    while len(prim) < m:
        q += 1
        prim = _primitive_tuples(q, d)
    chosen = prim[:m]
    replaced = False
    if integer_rank(chosen) < d:
        units = [tuple(int(i == j) for j in range(d)) for i in range(d)]
        chosen = chosen[: m - d] + units
        replaced = True
    return DirectionSelection(validate_direction_set(chosen, d), q, base_q, len(prim), replaced)
