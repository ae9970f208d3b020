import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_line_count
from tomoghost import (
    PointConfiguration,
    UnsupportedOrientation,
    canonicalize_direction,
    count_lines_bound,
    count_lines_exact,
    line_key,
    tomographically_equivalent,
    validate_direction_set,
    xray,
)
from tomoghost.constructions import EXAMPLE_F, EXAMPLE_G, EXAMPLE_S

points2 = st.lists(st.tuples(st.integers(-8, 8), st.integers(-8, 8)), max_size=12)
dirs2 = st.tuples(st.integers(-4, 4), st.integers(-4, 4)).filter(any)


def test_line_key_examples():
    assert line_key((3, 5), (1, 0)) == (-5,)
    assert line_key((0, 2), (1, 1)) == line_key((1, 3), (1, 1)) == (-2,)
    assert line_key((1, 2, 3), (1, 1, 1)) == (-1, -2, -1)


@given(st.tuples(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20)),
       st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)).filter(any),
       st.integers(-5, 5))
def test_line_key_translation_along_direction(p, v, t):
    s = canonicalize_direction(v)
    q = tuple(a + t * b for a, b in zip(p, s.coords))
    assert line_key(p, s) == line_key(q, s)


@given(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), st.tuples(st.integers(-6, 6), st.integers(-6, 6)), dirs2)
def test_line_key_is_complete_invariant(p, q, v):
    s = canonicalize_direction(v)
    diff = (q[0] - p[0], q[1] - p[1])
    parallel = diff[0] * s[1] == diff[1] * s[0]
    assert (line_key(p, s) == line_key(q, s)) == parallel


def test_xray_example_set_horizontal():
    F = PointConfiguration.from_points(EXAMPLE_F)
    prof = xray(F, (1, 0))
    by_level = {-k[0]: c for k, c in prof.counts.items()}
    assert by_level == {0: 1, 1: 1, 2: 2, 3: 1, 4: 1}


def test_xray_trivial_cases():
    assert xray(PointConfiguration.from_points([(0, 0)]), (3, 7)).counts == {(0,): 1}
    diag = xray(PointConfiguration.from_points([(0, 0), (1, 1), (2, 2)]), (1, 1))
    assert list(diag.counts.values()) == [3]
    assert xray(PointConfiguration(2), (1, 0)).counts == {}


@given(points2, dirs2)
def test_xray_conserves_mass_and_ignores_sign(pts, v):
    F = PointConfiguration.from_points(pts, 2)
    prof = xray(F, v)
    assert prof.total == len(F)
    assert prof == xray(F, [-c for c in v])


@given(points2, dirs2, st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_xray_translation_covariance(pts, v, t):
    F = PointConfiguration.from_points(pts, 2)
    a, b = xray(F, v), xray(F.translate(t), v)
    assert sorted(a.counts.values()) == sorted(b.counts.values())


def test_equivalence_examples():
    S = validate_direction_set(EXAMPLE_S, 2)
    F, G = PointConfiguration.from_points(EXAMPLE_F), PointConfiguration.from_points(EXAMPLE_G)
    assert tomographically_equivalent(F, G, S)
    assert tomographically_equivalent(F, F, S)
    res = tomographically_equivalent(
        PointConfiguration.from_points([(0, 0)]), PointConfiguration.from_points([(1, 0)]), [(0, 1)]
    )
    assert not res
    assert res.direction.coords == (0, 1)


@given(points2, points2, st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_equivalence_invariant_under_common_translation(a, b, t):
    S = validate_direction_set([(1, 0), (0, 1), (1, 1)], 2)
    F, G = PointConfiguration.from_points(a, 2), PointConfiguration.from_points(b, 2)
    assert bool(tomographically_equivalent(F, G, S)) == bool(
        tomographically_equivalent(F.translate(t), G.translate(t), S)
    )


def test_count_lines_examples():
    assert count_lines_exact((1, 1), 4, 2) == 7
    assert count_lines_exact((1, 0), 5, 2) == 5
    assert count_lines_exact((2, 1), 4, 2) == 10
    assert count_lines_bound((1, 1), 4, 2) == 8
    assert count_lines_bound((1, 0), 5, 2) == 10
    assert count_lines_bound((2, 1), 4, 2) == 16
    # the examples were taken from the brute-force oracle
    assert [brute_line_count(s, n, 2) for s, n in [((1, 1), 4), ((1, 0), 5), ((2, 1), 4)]] == [7, 5, 10]


def test_count_lines_rejects_mixed_signs():
    with pytest.raises(UnsupportedOrientation):
        count_lines_exact((1, -1), 4, 2)
    with pytest.raises(UnsupportedOrientation):
        count_lines_bound((1, -2), 4, 2)


@pytest.mark.parametrize("d", [2, 3])
def test_count_lines_exhaustive(d):
    for s in itertools.product(range(7), repeat=d):
        if not any(s) or math.gcd(*s) != 1:
            continue
        for n in range(1, 7):
            exact = count_lines_exact(s, n, d)
            assert exact == brute_line_count(s, n, d)
            assert exact <= count_lines_bound(s, n, d)
