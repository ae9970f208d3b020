"""Exact evaluation of the pigeonhole counting argument for equal X-rays.

A ``k``-subset of ``[n]^d`` has, in direction ``s_i``, an X-ray that is a weak
``k``-composition of the ``l_i`` lines meeting the grid.  When the number of
possible X-ray tuples is smaller than the number of ``k``-subsets, two subsets
must share all X-rays.  Everything here is evaluated either with exact integers
or, above a bit-size cap, with outward-rounded log2 enclosures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from ._intmath import ceil_root
from .constructions import select_directions
from .lattice import DirectionSet, InvalidParameter
from .xray import count_lines_exact, reflect_to_nonnegative

DEFAULT_BIT_CAP = 10**6
# Rational enclosure of e: 2.718281828459045 < e < 2.718281828459046.
E_LO = Fraction(2718281828459045, 10**15)
E_HI = Fraction(2718281828459046, 10**15)
_LOG2_E = math.log2(math.e)
# exact integers wider than this are left out of JSON output
JSON_INT_BITS = 4096

GHOST_GUARANTEED = "GhostGuaranteed"
INCONCLUSIVE = "Inconclusive"
BOUND_FAILS = "BoundFails"


# -- log2 enclosures -----------------------------------------------------------


@dataclass(frozen=True)
class Log2:
    """Closed interval known to contain ``log2`` of some positive quantity."""

    lo: float
    hi: float

    def __add__(self, other: "Log2") -> "Log2":
        return _pad(self.lo + other.lo, self.hi + other.hi)

    def scale(self, c: float) -> "Log2":
        if c < 0:
            raise ValueError("negative scale")
        return _pad(self.lo * c, self.hi * c)

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2

    def to_json(self) -> list[float]:
        return [self.lo, self.hi]


def _pad(lo: float, hi: float, rel: float = 1e-12, absolute: float = 1e-9) -> Log2:
    return Log2(lo - rel * abs(lo) - absolute, hi + rel * abs(hi) + absolute)


def log2_int(x: int) -> Log2:
    if x <= 0:
        raise ValueError("log2 of a non-positive integer")
    b = x.bit_length()
    if b <= 60:
        v = math.log2(x)
    else:
        shift = b - 60
        v = math.log2(x >> shift) + shift
    return _pad(v, v)


def _ln_factorial(n: int) -> tuple[float, float, float]:
    """Bounds on ``ln n!`` from Robbins' Stirling remainder, plus a magnitude for padding."""
    if n < 2:
        return 0.0, 0.0, 0.0
    base = n * math.log(n) - n + 0.5 * math.log(2 * math.pi * n)
    return base + 1 / (12 * n + 1), base + 1 / (12 * n), abs(n * math.log(n)) + n


def log2_binomial(a: int, b: int) -> Log2:
    """Certified enclosure of ``log2 C(a, b)``."""
    if b < 0 or b > a:
        raise ValueError("binomial out of range")
    b = min(b, a - b)
    if b == 0:
        return Log2(0.0, 0.0)
    if a <= 2000:
        return log2_int(math.comb(a, b))
    lo_a, hi_a, ma = _ln_factorial(a)
    lo_b, hi_b, mb = _ln_factorial(b)
    lo_c, hi_c, mc = _ln_factorial(a - b)
    slack = 1e-13 * (ma + mb + mc) + 1e-9
    lo = (lo_a - hi_b - hi_c - slack) / math.log(2)
    hi = (hi_a - lo_b - lo_c + slack) / math.log(2)
    return _pad(max(lo, 0.0), hi)


def log2_power(base: Fraction | int, exponent: int) -> Log2:
    """Enclosure of ``log2(base**exponent)`` for rational ``base > 0``."""
    base = Fraction(base)
    num, den = log2_int(base.numerator), log2_int(base.denominator)
    return _pad((num.lo - den.hi) * exponent, (num.hi - den.lo) * exponent)


def _log2_e_power(exponent: int) -> Log2:
    return _pad(_LOG2_E * exponent, _LOG2_E * exponent, rel=1e-14)


# -- counting primitives -----------------------------------------------------


def weak_composition_count(k: int, l: int) -> int:
    """Number of ways to write ``k`` as an ordered sum of ``l`` nonnegative integers."""
    if k < 0 or l < 0:
        raise InvalidParameter("k and l must be nonnegative")
    if l == 0:
        if k > 0:
            raise InvalidParameter("no composition of a positive k into zero parts")
        return 1
    return math.comb(k + l - 1, l - 1)


def _as_fraction(epsilon) -> Fraction:
    if isinstance(epsilon, float):
        raise InvalidParameter("epsilon must be an exact rational, e.g. Fraction(1, 2) or '1/2'")
    eps = Fraction(epsilon)
    if eps <= 0:
        raise InvalidParameter("epsilon must be positive")
    return eps


def theorem_exponent(d: int, epsilon) -> Fraction:
    return 1 + (1 + _as_fraction(epsilon)) / d


def theorem_n(m: int, d: int, epsilon) -> int:
    """Even member of ``{c, c+1}`` where ``c = ceil(m ** (1 + (1+eps)/d))``.

    The ceiling is found by integer root extraction on ``m ** p`` for the
    rational exponent ``p/q``; no floating point is involved.
    """
    if m < 1 or d < 2:
        raise InvalidParameter("need m >= 1 and d >= 2")
    e = theorem_exponent(d, epsilon)
    c = ceil_root(m**e.numerator, e.denominator)
    return c if c % 2 == 0 else c + 1


def profile_space_bound(k: int, line_counts: Sequence[int], bit_cap: int = DEFAULT_BIT_CAP) -> int | Log2:
    """Product of ``N(k, l_i)``: exact if it fits in ``bit_cap`` bits, otherwise a log2 enclosure."""
    if any(l < 1 for l in line_counts):
        raise InvalidParameter("every direction needs at least one line")
    est = _profile_log2(k, line_counts)
    if est.hi <= bit_cap:
        return math.prod(weak_composition_count(k, l) for l in line_counts)
    return est


def _profile_log2(k: int, line_counts: Iterable[int]) -> Log2:
    total = Log2(0.0, 0.0)
    for l in line_counts:
        total = total + log2_binomial(k + l - 1, l - 1)
    return total


def subset_count(n: int, d: int) -> int:
    """``C(n^d, n^d/2)``, the number of half-size subsets of ``[n]^d``."""
    if n < 2 or n % 2:
        raise InvalidParameter("n must be even and at least 2")
    if d < 1:
        raise InvalidParameter("d must be positive")
    N = n**d
    value = math.comb(N, N // 2)
    # C(N, N/2) >= 2^(N/2); 2^j has bit length j + 1
    assert value.bit_length() > N // 2, "central binomial below 2^(N/2)"
    return value


# -- the certificate -------------------------------------------------------------


@dataclass(frozen=True)
class ChainLink:
    """One inequality of the counting chain evaluated at concrete values.

    ``holds`` is ``None`` when neither exact nor log2 evaluation could decide.
    """

    name: str
    holds: bool | None
    method: str
    index: int | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, "method": self.method, "index": self.index}


@dataclass(frozen=True)
class PigeonholeReport:
    m: int
    d: int
    epsilon: Fraction | None
    n: int
    n_source: str
    k: int
    directions: DirectionSet
    line_counts: tuple[int, ...]
    profile_bound: int | None
    profile_log2: Log2
    subset_count: int | None
    subset_log2: Log2
    chain_lhs_log2: Log2  # n^(2l)
    chain_rhs_log2: float  # 2^(n^d / 2), exact
    verdict: str
    method: str
    links: tuple[ChainLink, ...] = field(default=())

    @property
    def l(self) -> int:
        return sum(self.line_counts)

    def link(self, name: str) -> list[ChainLink]:
        return [x for x in self.links if x.name == name]

    def to_json(self) -> dict:
        def big(x):
            if x is None or x.bit_length() > JSON_INT_BITS:
                return None
            return str(x)

        return {
            "m": self.m,
            "d": self.d,
            "epsilon": None if self.epsilon is None else f"{self.epsilon.numerator}/{self.epsilon.denominator}",
            "n": self.n,
            "n_source": self.n_source,
            "k": self.k,
            "directions": self.directions.to_json()["directions"],
            "line_counts": list(self.line_counts),
            "l": self.l,
            "profile_bound": big(self.profile_bound),
            "profile_log2": self.profile_log2.to_json(),
            "subset_count": big(self.subset_count),
            "subset_log2": self.subset_log2.to_json(),
            "chain_lhs_log2": self.chain_lhs_log2.to_json(),
            "chain_rhs_log2": self.chain_rhs_log2,
            "verdict": self.verdict,
            "method": self.method,
            "links": [x.to_json() for x in self.links],
            "implication": (
                "two distinct k-subsets of the grid share all X-rays (non-constructive)"
                if self.verdict == GHOST_GUARANTEED
                else None
            ),
        }


def _compare(lhs_exact, rhs_exact, lhs_log: Log2, rhs_log: Log2, strict: bool, use_exact: bool):
    """Decide ``lhs < rhs`` (strict) or ``lhs <= rhs``; ``lhs_exact``/``rhs_exact`` are thunks."""
    if use_exact:
        a, b = lhs_exact(), rhs_exact()
        return (a < b) if strict else (a <= b), "exact"
    if lhs_log.hi < rhs_log.lo:
        return True, "log2"
    if lhs_log.lo > rhs_log.hi:
        return False, "log2"
    if not strict and lhs_log.hi <= rhs_log.lo:
        return True, "log2"
    return None, "log2"


def _chain_links(n: int, d: int, k: int, ls: Sequence[int], bit_cap: int, force: str) -> list[ChainLink]:
    links = []
    N = n**d
    l = sum(ls)

    def exact_ok(bits: float) -> bool:
        return force == "exact" or (force == "auto" and bits <= bit_cap)

    for i, li in enumerate(ls):
        # N(k, l_i) <= C(k + l_i, l_i)
        lhs, rhs = log2_binomial(k + li - 1, li - 1), log2_binomial(k + li, li)
        holds, how = _compare(
            lambda: weak_composition_count(k, li), lambda: math.comb(k + li, li), lhs, rhs, False, exact_ok(rhs.hi)
        )
        links.append(ChainLink("N(k,l_i) <= C(k+l_i,l_i)", holds, how, i))

        # C(k+l_i, l_i) <= ((k+l_i) e / l_i)^l_i, with e replaced by its lower bound
        e_pow = log2_power(E_LO, li)
        rhs = log2_power(Fraction(k + li, li), li) + e_pow
        holds, how = _compare(
            lambda: math.comb(k + li, li) * li**li * E_LO.denominator**li,
            lambda: ((k + li) * E_LO.numerator) ** li,
            log2_binomial(k + li, li),
            rhs,
            False,
            exact_ok(rhs.hi + li * 50),
        )
        if holds is False and how == "exact":
            # lower bound of e failed; it only fails for real if the upper bound fails too
            if math.comb(k + li, li) * li**li * E_HI.denominator**li <= ((k + li) * E_HI.numerator) ** li:
                holds = None
        links.append(ChainLink("C(k+l_i,l_i) <= ((k+l_i)e/l_i)^l_i", holds, how, i))

        # ((k+l_i) e / l_i) == n^d e / (2 l_i) + e
        links.append(
            ChainLink(
                "((k+l_i)e/l_i) = n^d e/(2l_i) + e",
                Fraction(k + li, li) == Fraction(N, 2 * li) + 1,
                "exact",
                i,
            )
        )
        links.append(ChainLink("l_i >= n^(d-1)", li >= n ** (d - 1), "exact", i))

    # prod (n^d e/(2 l_i) + e)^l_i <= (n e + e)^l  <=>  prod (n^d + 2 l_i)^l_i <= (n+1)^l prod (2 l_i)^l_i
    lhs = Log2(0.0, 0.0)
    for li in ls:
        lhs = lhs + log2_power(N + 2 * li, li)
    rhs = log2_power(n + 1, l)
    for li in ls:
        rhs = rhs + log2_power(2 * li, li)
    holds, how = _compare(
        lambda: math.prod((N + 2 * li) ** li for li in ls),
        lambda: (n + 1) ** l * math.prod((2 * li) ** li for li in ls),
        lhs,
        rhs,
        False,
        exact_ok(max(lhs.hi, rhs.hi)),
    )
    links.append(ChainLink("prod (n^d e/(2l_i)+e)^l_i <= (ne+e)^l", holds, how))

    # (n e + e)^l <= n^(2l)  <=>  (n+1) e <= n^2 since l >= 1
    if (n + 1) * E_HI <= n * n:
        holds = True
    elif (n + 1) * E_LO > n * n:
        holds = False
    else:  # pragma: no cover - e is irrational, the enclosure always separates integers
        holds = None
    links.append(ChainLink("(ne+e)^l <= n^(2l)", holds, "exact"))

    # n^(2l) < 2^(n^d/2)  <=>  n^(4l) < 2^(n^d)
    lhs = log2_power(n, 4 * l)
    holds, how = _compare(
        lambda: n ** (4 * l), lambda: 1 << N, lhs, Log2(float(N), float(N)), True, exact_ok(max(lhs.hi, N))
    )
    links.append(ChainLink("n^(2l) < 2^(n^d/2)", holds, how))

    # C(n^d, n^d/2) >= 2^(n^d/2)
    sub = log2_binomial(N, N // 2)
    if exact_ok(sub.hi):
        holds, how = math.comb(N, N // 2).bit_length() > N // 2, "exact"
    else:
        holds, how = (True if sub.lo >= N // 2 else None), "log2"
    links.append(ChainLink("C(n^d,n^d/2) >= 2^(n^d/2)", holds, how))
    links.append(ChainLink("n >= 4", n >= 4, "exact"))
    return links


def pigeonhole_certificate(
    m: int | None = None,
    d: int | None = None,
    epsilon=None,
    S: DirectionSet | None = None,
    n: int | None = None,
    bit_cap: int = DEFAULT_BIT_CAP,
    method: str = "auto",
) -> PigeonholeReport:
    """Evaluate the counting argument for direction set ``S`` on ``[n]^d``.

    ``S`` defaults to :func:`select_directions(m, d)` and ``n`` to
    :func:`theorem_n`.  ``method`` is ``"auto"`` (exact below ``bit_cap``
    bits), ``"exact"`` or ``"log2"``.  The verdict compares the number of
    possible X-ray tuples with the number of ``n^d/2``-subsets.
    """
    if method not in ("auto", "exact", "log2"):
        raise InvalidParameter(f"unknown method {method!r}")
    eps = None if epsilon is None else _as_fraction(epsilon)
    if S is None:
        if m is None or d is None:
            raise InvalidParameter("give m and d, or a direction set")
        S = select_directions(m, d).directions
    else:
        if m is not None and m != S.m:
            raise InvalidParameter(f"m={m} but the direction set has {S.m} directions")
        if d is not None and d != S.d:
            raise InvalidParameter(f"d={d} but the direction set is {S.d}-dimensional")
        m, d = S.m, S.d
    if n is None:
        if eps is None:
            raise InvalidParameter("epsilon is required when n is not given")
        n, source = theorem_n(m, d, eps), "formula"
    else:
        if n < 2 or n % 2:
            raise InvalidParameter("n must be even and at least 2")
        source = "user"
    N = n**d
    k = N // 2
    ls = tuple(count_lines_exact(reflect_to_nonnegative(s), n, d) for s in S)
    l = sum(ls)

    prof_log = _profile_log2(k, ls)
    sub_log = log2_binomial(N, k)
    use_exact = method == "exact" or (method == "auto" and max(prof_log.hi, sub_log.hi) <= bit_cap)
    if use_exact:
        prof = math.prod(weak_composition_count(k, li) for li in ls)
        sub = math.comb(N, k)
        verdict = GHOST_GUARANTEED if prof < sub else BOUND_FAILS
        prof_log, sub_log = log2_int(prof), log2_int(sub)
    else:
        prof = sub = None
        if prof_log.hi < sub_log.lo:
            verdict = GHOST_GUARANTEED
        elif prof_log.lo >= sub_log.hi:
            verdict = BOUND_FAILS
        else:
            verdict = INCONCLUSIVE
    links = _chain_links(n, d, k, ls, bit_cap, method)
    return PigeonholeReport(
        m=m,
        d=d,
        epsilon=eps,
        n=n,
        n_source=source,
        k=k,
        directions=S,
        line_counts=ls,
        profile_bound=prof,
        profile_log2=prof_log,
        subset_count=sub,
        subset_log2=sub_log,
        chain_lhs_log2=log2_power(n, 2 * l),
        chain_rhs_log2=N / 2,
        verdict=verdict,
        method="exact" if use_exact else "log2",
        links=tuple(links),
    )


@dataclass(frozen=True)
class ScanRow:
    m: int
    n: int
    k: int
    l: int
    profile_log2: Log2
    subset_log2: Log2
    verdict: str
    chain_holds: bool | None

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "k": self.k,
            "l": self.l,
            "profile_log2": self.profile_log2.to_json(),
            "subset_log2": self.subset_log2.to_json(),
            "verdict": self.verdict,
            "chain_holds": self.chain_holds,
        }


@dataclass(frozen=True)
class Scan:
    d: int
    epsilon: Fraction
    rows: tuple[ScanRow, ...]

    @property
    def n_nondecreasing(self) -> bool:
        ns = [r.n for r in self.rows]
        return all(a <= b for a, b in zip(ns, ns[1:]))

    @property
    def first_guaranteed(self) -> int | None:
        return next((r.m for r in self.rows if r.verdict == GHOST_GUARANTEED), None)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "epsilon": f"{self.epsilon.numerator}/{self.epsilon.denominator}",
            "rows": [r.to_json() for r in self.rows],
            "n_nondecreasing": self.n_nondecreasing,
            "first_guaranteed": self.first_guaranteed,
        }


def guaranteed_threshold_scan(
    d: int, epsilon, m_from: int, m_to: int, bit_cap: int = DEFAULT_BIT_CAP, method: str = "auto"
) -> Scan:
    """Certificate verdicts for every ``m`` in ``[m_from, m_to]`` with theorem-chosen ``n``."""
    eps = _as_fraction(epsilon)
    if m_from < d or m_to < m_from:
        raise InvalidParameter("need d <= m_from <= m_to")
    rows = []
    for m in range(m_from, m_to + 1):
        rep = pigeonhole_certificate(m, d, eps, bit_cap=bit_cap, method=method)
        claim = rep.link("n^(2l) < 2^(n^d/2)")[0].holds
        rows.append(ScanRow(m, rep.n, rep.k, rep.l, rep.profile_log2, rep.subset_log2, rep.verdict, claim))
    return Scan(d, eps, tuple(rows))
