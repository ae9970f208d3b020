"""Prouhet-Tarry-Escott solutions from planar ghosts."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .constructions import GhostPair
from .lattice import InvalidParameter, Point, TomographyError


class DegenerateFunctional(TomographyError):
    """The linear functional maps both multisets to the same multiset."""


class InternalError(RuntimeError):
    pass


@dataclass(frozen=True)
class PTESolution:
    """Two multisets of integer ``r``-tuples claimed to agree in all power sums up to ``degree``."""

    r: int
    degree: int
    X: tuple[Point, ...]
    Y: tuple[Point, ...]

    def __post_init__(self):
        X = tuple(sorted(tuple(x) for x in self.X))
        Y = tuple(sorted(tuple(y) for y in self.Y))
        if len(X) != len(Y):
            raise InvalidParameter("both multisets need the same size")
        if any(len(p) != self.r for p in X + Y):
            raise InvalidParameter(f"every element must be an integer {self.r}-tuple")
        if self.degree < 0:
            raise InvalidParameter("degree must be nonnegative")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def size(self) -> int:
        return len(self.X)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "degree": self.degree,
            "size": self.size,
            "X": [list(p) for p in self.X],
            "Y": [list(p) for p in self.Y],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "PTESolution":
        sol = cls(int(obj["r"]), int(obj["degree"]), tuple(map(tuple, obj["X"])), tuple(map(tuple, obj["Y"])))
        if "size" in obj and int(obj["size"]) != sol.size:
            raise InvalidParameter(f"declared size {obj['size']} does not match {sol.size}")
        return sol


def exponent_tuples(r: int, k: int) -> list[tuple[int, ...]]:
    """All ``(j_1..j_r) >= 0`` with total at most ``k``, by total degree then lexicographically."""
    out = []
    for total in range(k + 1):
        out.extend(sorted(j for j in itertools.product(range(total + 1), repeat=r) if sum(j) == total))
    return out


def power_sum(points: Sequence[Point], exps: Sequence[int]) -> int:
    return sum(math.prod(c**j for c, j in zip(p, exps)) for p in points)


@dataclass(frozen=True)
class PTECheck:
    ok: bool
    violated: tuple[int, ...] | None = None
    reason: str | None = None
    checked: int = 0

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violated": None if self.violated is None else list(self.violated),
            "reason": self.reason,
            "identities_checked": self.checked,
        }


def verify_pte(sol: PTESolution) -> PTECheck:
    """Check every power-sum identity up to the stated degree with exact integers."""
    if Counter(sol.X) == Counter(sol.Y):
        return PTECheck(False, reason="the two multisets are equal")
    exps = exponent_tuples(sol.r, sol.degree)
    for n, j in enumerate(exps, 1):
        if power_sum(sol.X, j) != power_sum(sol.Y, j):
            return PTECheck(False, j, "power sums differ", n)
    return PTECheck(True, checked=len(exps))


def ghost_to_pte2(pair: GhostPair) -> PTESolution:
    """A planar ghost for ``m`` directions gives a two-dimensional solution of degree ``m - 1``."""
    if pair.S.d != 2:
        raise InvalidParameter("only planar ghosts give two-dimensional solutions")
    sol = PTESolution(2, pair.S.m - 1, tuple(pair.F.points()), tuple(pair.G.points()))
    check = verify_pte(sol)
    if not check:
        raise InternalError(f"ghost pair fails the identity for exponents {check.violated}: {check.reason}")
    return sol


def reduce_to_pte1(sol: PTESolution, alpha: Sequence[int]) -> PTESolution:
    """Map each pair ``(x1, x2)`` to ``a1*x1 + a2*x2``."""
    if sol.r != 2:
        raise InvalidParameter("reduction expects two-dimensional tuples")
    a1, a2 = alpha
    if a1 == 0 and a2 == 0:
        raise InvalidParameter("alpha must be nonzero")
    X = tuple((a1 * x + a2 * y,) for x, y in sol.X)
    Y = tuple((a1 * x + a2 * y,) for x, y in sol.Y)
    if Counter(X) == Counter(Y):
        raise DegenerateFunctional(f"alpha={tuple(alpha)} maps both sides to the same multiset")
    out = PTESolution(1, sol.degree, X, Y)
    check = verify_pte(out)
    if not check:  # pragma: no cover - linear images of a valid solution always satisfy the identities
        raise InternalError(f"projected solution fails at exponent {check.violated}")
    return out


def suggest_alpha(sol: PTESolution) -> tuple[int, int]:
    """Heuristic ``(1, B)`` with ``B`` one more than the spread of first coordinates.

    This makes the functional injective on the points involved, so distinct
    multisets stay distinct.
    """
    firsts = [p[0] for p in sol.X + sol.Y]
    return 1, 1 + max(firsts) - min(firsts)
