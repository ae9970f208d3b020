"""Backtracking oracles: minimal ghosts in a grid, reconstruction, uniqueness, U-gons."""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .constructions import GhostPair
from .lattice import (
    DimensionError,
    Direction,
    DirectionSet,
    Grid,
    InvalidParameter,
    Point,
    PointConfiguration,
    TomographyError,
)
from .xray import XRayProfile, line_key, xray

DEFAULT_BUDGET = 10**8


class InvalidProfileSet(TomographyError):
    pass


class OutOfGrid(TomographyError):
    pass


class DegeneratePolygon(TomographyError):
    pass


@dataclass(frozen=True)
class SignedConfiguration:
    """A ghost written as one function ``g = 1_F - 1_G`` on lattice points."""

    d: int
    values: Mapping[Point, int]

    def __post_init__(self):
        vals = {tuple(p): int(v) for p, v in sorted(dict(self.values).items()) if v}
        for p in vals:
            if len(p) != self.d:
                raise DimensionError(f"point {p} is not {self.d}-dimensional")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_pair(cls, F: PointConfiguration, G: PointConfiguration) -> "SignedConfiguration":
        vals: dict = {}
        for p, k in F.items:
            vals[p] = vals.get(p, 0) + k
        for p, k in G.items:
            vals[p] = vals.get(p, 0) - k
        return cls(F.d, vals)

    def positive(self) -> PointConfiguration:
        return PointConfiguration.from_counts({p: v for p, v in self.values.items() if v > 0}, self.d)

    def negative(self) -> PointConfiguration:
        return PointConfiguration.from_counts({p: -v for p, v in self.values.items() if v < 0}, self.d)

    def is_balanced(self) -> bool:
        return sum(self.values.values()) == 0

    def line_sums_vanish(self, S: Iterable[Direction]) -> bool:
        for s in S:
            sums: dict = {}
            for p, v in self.values.items():
                key = line_key(p, s)
                sums[key] = sums.get(key, 0) + v
            if any(sums.values()):
                return False
        return True


@dataclass(frozen=True)
class SearchOutcome:
    minimal_size: int | None
    witness: GhostPair | None
    exhausted: bool
    nodes_explored: int
    searched_sizes: int = 0  # every size up to this value was fully covered
    warnings: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "minimal_size": self.minimal_size,
            "witness": None if self.witness is None else self.witness.to_json(),
            "exhausted": self.exhausted,
            "nodes_explored": self.nodes_explored,
            "searched_sizes": self.searched_sizes,
        }


class _BudgetExceeded(Exception):
    pass


class _LineSystem:
    """Grid cells in lexicographic order with, per cell, the ids of its lines."""

    def __init__(self, S: DirectionSet, grid: Grid):
        if S.d != grid.d:
            raise DimensionError("direction set and grid differ in dimension")
        self.cells = grid.points()
        self.m = S.m
        ids: dict = {}
        self.line_dir: list[int] = []
        cell_lines = []
        for p in self.cells:
            row = []
            for t, s in enumerate(S):
                key = (t, line_key(p, s))
                if key not in ids:
                    ids[key] = len(ids)
                    self.line_dir.append(t)
                row.append(ids[key])
            cell_lines.append(tuple(row))
        self.cell_lines = cell_lines
        self.line_ids = ids
        self.n_lines = len(ids)
        self.line_size = [0] * self.n_lines
        for row in cell_lines:
            for L in row:
                self.line_size[L] += 1


def _signed_search(
    system: _LineSystem, K: int, budget: int, prefix: Sequence[int] = (), collect_depth: int | None = None
):
    """First signed labelling (depth-first, labels tried as 0, +1, -1) whose
    line sums all vanish, with at most ``K`` cells of each sign.

    The first nonzero label is forced to +1, which removes the swap symmetry.
    Returns ``(labels or None, nodes)``; raises ``_BudgetExceeded(nodes)``.
    With ``collect_depth`` set, instead returns the list of feasible label
    prefixes of that length in search order.
    """
    N = len(system.cells)
    cell_lines = system.cell_lines
    line_dir = system.line_dir
    m = system.m
    rem = list(system.line_size)
    sums = [0] * system.n_lines
    posimb = [0] * m
    negimb = [0] * m
    labels = [0] * N
    collected: list = []
    state = {"pos": 0, "neg": 0, "nodes": 0, "nonzero_lines": 0}

    def apply(i, v):
        # returns False when the new state is infeasible; always fully applied
        ok = True
        for L in cell_lines[i]:
            r = rem[L] - 1
            rem[L] = r
            if v:
                t = line_dir[L]
                old = sums[L]
                new = old + v
                sums[L] = new
                if old > 0:
                    posimb[t] -= old
                elif old < 0:
                    negimb[t] += old
                if new > 0:
                    posimb[t] += new
                elif new < 0:
                    negimb[t] -= new
                if old == 0:
                    state["nonzero_lines"] += 1
                elif new == 0:
                    state["nonzero_lines"] -= 1
                if new > r or -new > r:
                    ok = False
            elif sums[L] > r or -sums[L] > r:
                ok = False
        if v > 0:
            state["pos"] += 1
        elif v < 0:
            state["neg"] += 1
        if ok and v:
            free_neg = K - state["neg"]
            free_pos = K - state["pos"]
            if free_neg < 0 or free_pos < 0:
                return False
            for t in range(m):
                if posimb[t] > free_neg or negimb[t] > free_pos:
                    return False
        return ok

    def undo(i, v):
        for L in cell_lines[i]:
            rem[L] += 1
            if v:
                t = line_dir[L]
                old = sums[L]
                new = old - v
                sums[L] = new
                if old > 0:
                    posimb[t] -= old
                elif old < 0:
                    negimb[t] += old
                if new > 0:
                    posimb[t] += new
                elif new < 0:
                    negimb[t] -= new
                if old == 0:
                    state["nonzero_lines"] += 1
                elif new == 0:
                    state["nonzero_lines"] -= 1
        if v > 0:
            state["pos"] -= 1
        elif v < 0:
            state["neg"] -= 1

    def dfs(i):
        state["nodes"] += 1
        if state["nodes"] > budget:
            raise _BudgetExceeded
        if state["pos"] and not state["nonzero_lines"]:
            return True  # the remaining cells stay zero
        if i == collect_depth:
            collected.append(tuple(labels[:i]))
            return False
        if i == N:
            return False
        started = state["pos"] > 0
        for v in (0, 1, -1) if started else (0, 1):
            labels[i] = v
            if apply(i, v) and dfs(i + 1):
                return True
            undo(i, v)
        labels[i] = 0
        return False

    try:
        for i, v in enumerate(prefix):
            labels[i] = v
            if not apply(i, v):
                return None, 0
        found = dfs(len(prefix))
    except _BudgetExceeded:
        raise _BudgetExceeded(state["nodes"]) from None
    if collect_depth is not None:
        if found:  # a complete ghost before the split depth; keep it as its own prefix
            collected.append(tuple(labels[:collect_depth]))
        return collected, state["nodes"]
    return (list(labels) if found else None), state["nodes"]


class BudgetExceeded(Exception):
    """A search ran out of its node budget before covering its space."""

    def __init__(self, nodes: int):
        super().__init__(f"node budget exhausted after {nodes} nodes")
        self.nodes = nodes


def _run_subtree(args):
    system, K, cap, prefix = args
    try:
        labels, nodes = _signed_search(system, K, cap, prefix)
    except _BudgetExceeded as exc:
        return None, exc.args[0], True
    return labels, nodes, False


def _split_depth(n_cells: int) -> int:
    return min(n_cells, 6)


def min_ghost(
    S: DirectionSet,
    grid: Grid,
    k_max: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> SearchOutcome:
    """Smallest ``k <= k_max`` admitting disjoint ``k``-subsets of ``grid`` with equal X-rays.

    Sizes are tried in increasing order.  For each size the search tree is cut
    at a fixed depth and the subtrees are searched in order (optionally by
    ``threads`` worker processes); the first subtree holding a ghost decides.
    Results, including ``nodes_explored``, do not depend on ``threads``.
    """
    if k_max < 1:
        raise InvalidParameter("k_max must be at least 1")
    system = _LineSystem(S, grid)
    notes = []
    if 2 * k_max > len(system.cells):
        clamped = len(system.cells) // 2
        msg = f"k_max={k_max} exceeds half the grid ({len(system.cells)} cells); clamped to {clamped}"
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)
        k_max = clamped
    depth = _split_depth(len(system.cells))
    used = 0
    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        for K in range(1, k_max + 1):
            try:
                prefixes, nodes = _signed_search(system, K, budget - used, collect_depth=depth)
            except _BudgetExceeded:
                return SearchOutcome(None, None, False, budget, K - 1, tuple(notes))
            used += nodes
            if pool is None:
                # lazy: each cap sees the running total
                results = (_run_subtree((system, K, max(budget - used, 0), p)) for p in prefixes)
            else:
                results = pool.map(_run_subtree, [(system, K, budget, p) for p in prefixes], chunksize=8)
            for labels, nodes, over in results:
                used += nodes
                if over or used > budget:
                    return SearchOutcome(None, None, False, budget, K - 1, tuple(notes))
                if labels is not None:
                    pair = _labels_to_pair(system, labels, S, grid.d)
                    return SearchOutcome(K, pair, True, used, K - 1, tuple(notes))
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return SearchOutcome(None, None, True, used, k_max, tuple(notes))


def _labels_to_pair(system: _LineSystem, labels, S: DirectionSet, d: int) -> GhostPair:
    F = [p for p, v in zip(system.cells, labels) if v > 0]
    G = [p for p, v in zip(system.cells, labels) if v < 0]
    pair = GhostPair(PointConfiguration.from_points(F, d), PointConfiguration.from_points(G, d), S)
    if not pair.verified:
        raise AssertionError("search produced an unverified ghost")  # pragma: no cover
    return pair


# -- reconstruction from X-rays ---------------------------------------------------


def _profile_targets(profiles: Sequence[XRayProfile], grid: Grid):
    by_dir: dict = {}
    for prof in profiles:
        if prof.direction.d != grid.d:
            raise DimensionError("profile direction does not match the grid dimension")
        if prof.direction in by_dir and by_dir[prof.direction] != prof:
            raise InvalidProfileSet(f"conflicting profiles for direction {prof.direction.coords}")
        by_dir[prof.direction] = prof
    totals = {p.total for p in by_dir.values()}
    if len(totals) > 1:
        raise InvalidProfileSet(f"profiles disagree on the number of points: {sorted(totals)}")
    return list(by_dir.values()), (totals.pop() if totals else None)


def sets_with_profile(
    profiles: Sequence[XRayProfile], grid: Grid, k: int | None = None, budget: int = DEFAULT_BUDGET
) -> list[PointConfiguration]:
    """Every subset of ``grid`` whose X-rays match all ``profiles``.

    ``k`` is only needed when no profile is given.  Results are ordered
    lexicographically by their sorted point lists.
    """
    profs, total = _profile_targets(profiles, grid)
    if total is None:
        if k is None:
            raise InvalidProfileSet("without profiles the number of points k must be given")
        total = k
    elif k is not None and k != total:
        raise InvalidProfileSet(f"k={k} but the profiles describe {total} points")
    cells = grid.points()
    if not profs:
        return [PointConfiguration.from_points(c, grid.d) for c in combinations(cells, total)]

    dirs = [p.direction for p in profs]
    ids: dict = {}
    cell_lines = []
    for p in cells:
        row = []
        for t, s in enumerate(dirs):
            row.append(ids.setdefault((t, line_key(p, s)), len(ids)))
        cell_lines.append(row)
    target = [0] * len(ids)
    for t, prof in enumerate(profs):
        for key, count in prof.counts.items():
            if (t, key) not in ids:
                return []  # a line with points never meets the grid
            target[ids[(t, key)]] = count
    rem = [0] * len(ids)
    for row in cell_lines:
        for L in row:
            rem[L] += 1
    if any(target[L] > rem[L] for L in range(len(ids))):
        return []
    cnt = [0] * len(ids)
    chosen: list = []
    found: list = []
    N = len(cells)
    nodes = 0

    def dfs(i, placed):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(nodes)
        if placed == total:
            if all(c == t for c, t in zip(cnt, target)):
                found.append(PointConfiguration.from_points(list(chosen), grid.d))
            return
        if i == N or N - i < total - placed:
            return
        lines = cell_lines[i]
        for L in lines:
            rem[L] -= 1
        # take cell i
        if all(cnt[L] < target[L] for L in lines):
            for L in lines:
                cnt[L] += 1
            chosen.append(cells[i])
            dfs(i + 1, placed + 1)
            chosen.pop()
            for L in lines:
                cnt[L] -= 1
        # skip cell i
        if all(target[L] - cnt[L] <= rem[L] for L in lines):
            dfs(i + 1, placed)
        for L in lines:
            rem[L] += 1

    dfs(0, 0)
    return found


@dataclass(frozen=True)
class Uniqueness:
    unique: bool
    alternatives: tuple[PointConfiguration, ...]

    def __bool__(self):
        return self.unique

    def to_json(self) -> dict:
        return {"unique": self.unique, "alternatives": [a.to_json() for a in self.alternatives]}


def uniqueness_check(
    F: PointConfiguration, S: Iterable[Direction], grid: Grid, budget: int = DEFAULT_BUDGET
) -> Uniqueness:
    """Is ``F`` the only subset of ``grid`` with its X-rays in the directions ``S``?"""
    if not F.is_set():
        raise InvalidParameter("uniqueness is tested for sets, not multisets")
    outside = [p for p in F.support() if p not in grid]
    if outside:
        raise OutOfGrid(f"points outside the grid: {outside}")
    profiles = [xray(F, s) for s in S]
    matches = sets_with_profile(profiles, grid, k=len(F), budget=budget)
    others = tuple(G for G in matches if G != F)
    return Uniqueness(not others, others)


# -- lattice U-gons ---------------------------------------------------------------------


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def strict_hull(points: Sequence[Point]) -> list[Point]:
    """Vertices of the convex hull (counter-clockwise), collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class UgonCheck:
    is_ugon: bool
    convex_position: bool
    hull: tuple[Point, ...]
    violations: tuple[tuple[Point, Direction], ...]

    def __bool__(self):
        return self.is_ugon

    def to_json(self) -> dict:
        return {
            "is_ugon": self.is_ugon,
            "convex_position": self.convex_position,
            "hull": [list(p) for p in self.hull],
            "violations": [{"vertex": list(v), "direction": list(s.coords)} for v, s in self.violations],
        }


def ugon_check(V: PointConfiguration, S: Iterable[Direction]) -> UgonCheck:
    """Check that ``V`` is a convex lattice polygon whose every vertex line in ``S`` meets another vertex."""
    if V.d != 2:
        raise DimensionError("U-gons are planar")
    if not V.is_set():
        raise InvalidParameter("vertices must be distinct")
    pts = V.support()
    if len(pts) < 3:
        raise DegeneratePolygon("a polygon needs at least three vertices")
    hull = strict_hull(pts)
    if len(hull) < 3:
        raise DegeneratePolygon("points are collinear")
    convex = len(hull) == len(pts)
    violations = []
    for v in pts:
        for s in S:
            if not any(w != v and _cross(v, w, (v[0] + s[0], v[1] + s[1])) == 0 for w in pts):
                violations.append((v, s))
    return UgonCheck(convex and not violations, convex, tuple(hull), tuple(violations))
