import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubelab.errors import CapExceededError, ValidationError
from cubelab.hypercube import (
    EXACT_ORACLE_CAP,
    Point,
    PointSet,
    ball,
    ball_size,
    expand,
    hamming_distance,
)


def test_hamming_distance_examples():
    z = Point.parse("0000")
    assert hamming_distance(z, z) == 0
    assert hamming_distance(Point.parse("0101"), Point.parse("0110")) == 2
    x = Point(7, 0b1010011)
    assert hamming_distance(x, x.complement()) == 7


def test_hamming_distance_dimension_mismatch():
    with pytest.raises(ValidationError):
        hamming_distance(Point.parse("01"), Point.parse("011"))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.data())
def test_hamming_symmetry_and_triangle(n, data):
    size = 1 << n
    x = Point(n, data.draw(st.integers(0, size - 1)))
    y = Point(n, data.draw(st.integers(0, size - 1)))
    z = Point(n, data.draw(st.integers(0, size - 1)))
    assert hamming_distance(x, y) == hamming_distance(y, x)
    assert hamming_distance(x, z) <= hamming_distance(x, y) + hamming_distance(y, z)


def test_ball_size_examples():
    assert ball_size(5, 1) == 6
    assert ball_size(10, 2) == 56
    assert ball_size(13, 13) == 2**13
    assert ball_size(100, 50) == sum(math.comb(100, i) for i in range(51))


def test_ball_enumeration():
    x = Point.parse("01101")
    pts = list(ball(x, 1))
    assert len(pts) == 6
    assert pts[0] == x
    assert len({p.bits for p in pts}) == 6
    assert all(hamming_distance(x, p) <= 1 for p in pts)
    # order: increasing distance, then lexicographic flip positions
    pts2 = list(ball(x, 2))
    dists = [hamming_distance(x, p) for p in pts2]
    assert dists == sorted(dists)
    assert len(pts2) == ball_size(5, 2)


def test_ball_radius_clamped_to_n():
    x = Point.parse("011")
    assert len(list(ball(x, 7))) == 8


def test_ball_negative_radius():
    with pytest.raises(ValidationError):
        list(ball(Point.parse("011"), -1))


def test_pointset_cap():
    with pytest.raises(CapExceededError):
        PointSet.empty(EXACT_ORACLE_CAP + 1)


def test_pointset_ops():
    a = PointSet.from_indices(3, [0, 1])
    b = PointSet.from_indices(3, [1, 5])
    assert sorted((a | b).indices()) == [0, 1, 5]
    assert sorted((a & b).indices()) == [1]
    assert sorted((a ^ b).indices()) == [0, 5]
    assert sorted((a - b).indices()) == [0]
    assert len(a.complement()) == 6
    assert Point(3, 1) in a
    assert Point(3, 5) not in a
    arr = a.to_bool_array()
    assert arr.tolist() == [True, True, False, False, False, False, False, False]


def test_pointset_from_predicate():
    s = PointSet.from_predicate(4, lambda p: p.bit(0) == 1)
    assert len(s) == 8


def test_point_string_roundtrip():
    for text in ("10010", "0", "1", "0110"):
        assert str(Point.parse(text)) == text


def test_expand_trivial_cases():
    s = PointSet.from_indices(5, [3, 17])
    assert expand(s, 0) == s
    assert expand(PointSet.empty(5), 3) == PointSet.empty(5)
    e = expand(PointSet.from_indices(3, [0]), 1)
    assert sorted(e.indices()) == [0, 1, 2, 4]


def test_expand_unit_ball_sizes():
    for n in (4, 6, 8):
        for rho in range(n + 1):
            x = Point(n, (0b1011010101 & ((1 << n) - 1)))
            e = expand(PointSet.from_points(n, [x]), rho)
            assert len(e) == ball_size(n, rho)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 3), st.integers(0, 3), st.data())
def test_expand_semigroup_and_monotone(n, a, b, data):
    bits = data.draw(st.integers(0, (1 << (1 << n)) - 1))
    s = PointSet(n, bits)
    lhs = expand(expand(s, a), b)
    rhs = expand(s, a + b)
    assert lhs == rhs
    assert s.bits & expand(s, a).bits == s.bits  # containment
    assert expand(s, a).bits & rhs.bits == expand(s, a).bits  # monotone in rho


def test_expand_matches_min_distance_scan():
    rnd = random.Random(7)
    for _ in range(20):
        n = rnd.randint(3, 9)
        members = [Point(n, rnd.randrange(1 << n)) for _ in range(rnd.randint(1, 5))]
        s = PointSet.from_points(n, members)
        rho = rnd.randint(0, 3)
        e = expand(s, rho)
        for idx in range(1 << n):
            x = Point(n, idx)
            nearest = min(hamming_distance(x, m) for m in members)
            assert (x in e) == (nearest <= rho)
