"""Cosine distance, ordering and likely-equivalence properties."""

import itertools
import math
import random
from dataclasses import dataclass

import pytest
from hypothesis import given, strategies as st

from mutafuzz.covtrace import CoverageMatrix
from mutafuzz.errors import LengthMismatch, UnknownStatement
from mutafuzz.prioritizer import (
    cosine_distance,
    covering_tests,
    likely_equivalent,
    order_tests,
)

vec = st.lists(st.integers(min_value=0, max_value=50), min_size=1, max_size=8)


@dataclass
class FakeMutant:
    id: str
    statement_ordinal: int
    file: str = "sub.c"


def matrix(tests, counts, n_statements=None):
    n = n_statements or len(counts[0])
    return CoverageMatrix(
        tests=tests,
        statements=[("sub.c", j) for j in range(n)],
        counts=counts,
    )


def test_covering_tests_basic():
    m = matrix(["t1", "t2", "t3"], [[0, 1], [3, 0], [1, 0]])
    assert covering_tests(FakeMutant("m", 0), m) == ["t2", "t3"]
    assert covering_tests(FakeMutant("m", 1), m) == ["t1"]


def test_covering_tests_all_zero_and_all_cover():
    m = matrix(["t1", "t2"], [[0, 2], [0, 1]])
    assert covering_tests(FakeMutant("m", 0), m) == []
    assert covering_tests(FakeMutant("m", 1), m) == ["t1", "t2"]


def test_covering_tests_unknown_statement():
    m = matrix(["t1"], [[1]])
    with pytest.raises(UnknownStatement):
        covering_tests(FakeMutant("m", 5), m)


def test_cosine_examples():
    assert cosine_distance([3, 4], [3, 4]) == pytest.approx(0.0, abs=1e-12)
    assert cosine_distance([1, 0], [0, 1]) == pytest.approx(1.0)
    assert cosine_distance([1, 0], [1, 1]) == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-9)
    assert cosine_distance([0, 0], [0, 0]) == 0.0
    assert cosine_distance([0, 0], [1, 2]) == 1.0


def test_cosine_length_mismatch():
    with pytest.raises(LengthMismatch):
        cosine_distance([1], [1, 2])


@given(vec, vec)
def test_cosine_symmetry_and_range(u, v):
    n = min(len(u), len(v))
    u, v = u[:n], v[:n]
    d1, d2 = cosine_distance(u, v), cosine_distance(v, u)
    assert d1 == pytest.approx(d2, abs=1e-12)
    assert -1e-12 <= d1 <= 1.0 + 1e-12


@given(vec, st.integers(min_value=1, max_value=9))
def test_cosine_scale_invariance(u, c):
    if any(u):
        scaled = [c * x for x in u]
        assert cosine_distance(u, scaled) == pytest.approx(0.0, abs=1e-9)
        assert likely_equivalent(u, scaled)


def test_order_tests_example():
    m = matrix(["t1", "t2", "t3"], [[2, 0], [2, 0], [0, 1]])
    assert order_tests(["t1", "t2", "t3"], m) == ["t1", "t3", "t2"]


def test_order_tests_singleton_and_ties():
    m = matrix(["t1", "t2", "t3"], [[1, 1], [1, 1], [1, 1]])
    assert order_tests(["t2"], m) == ["t2"]
    assert order_tests(["t1", "t2", "t3"], m) == ["t1", "t2", "t3"]


def test_order_tests_permutation_property():
    rng = random.Random(0)
    for _ in range(50):
        k = rng.randint(1, 6)
        counts = [[rng.randint(0, 5) for _ in range(4)] for _ in range(k)]
        tests = ["t%d" % i for i in range(k)]
        m = matrix(tests, counts)
        out = order_tests(tests, m)
        assert sorted(out) == sorted(tests)


def brute_force_order(tests, m):
    """Independent re-implementation of the greedy max-min rule."""
    if len(tests) <= 1:
        return list(tests)
    vecs = {t: m.row(t) for t in tests}
    pairs = [
        (cosine_distance(vecs[a], vecs[b]), i, j)
        for (i, a), (j, b) in itertools.combinations(enumerate(tests), 2)
    ]
    dbest = max(p[0] for p in pairs)
    _, i, j = next(p for p in pairs if p[0] == dbest)
    placed = [tests[i], tests[j]]
    rest = [t for t in tests if t not in placed]
    while rest:
        scores = {t: min(cosine_distance(vecs[t], vecs[p]) for p in placed) for t in rest}
        smax = max(scores.values())
        pick = next(t for t in rest if scores[t] == smax)
        placed.append(pick)
        rest.remove(pick)
    return placed


def test_order_tests_matches_brute_force():
    rng = random.Random(42)
    for _ in range(100):
        k = rng.randint(2, 6)
        counts = [[rng.randint(0, 3) for _ in range(3)] for _ in range(k)]
        tests = ["t%d" % i for i in range(k)]
        m = matrix(tests, counts)
        assert order_tests(tests, m) == brute_force_order(tests, m)


def test_likely_equivalent_examples():
    assert likely_equivalent([2, 4], [1, 2])
    assert not likely_equivalent([1, 0], [1, 1])
    assert likely_equivalent([0, 0], [0, 0])
    assert not likely_equivalent([0, 0], [0, 1])
    with pytest.raises(LengthMismatch):
        likely_equivalent([1], [1, 2])


@given(vec, vec)
def test_likely_equivalent_agrees_with_float_distance(u, v):
    n = min(len(u), len(v))
    u, v = u[:n], v[:n]
    exact = likely_equivalent(u, v)
    approx_zero = cosine_distance(u, v) < 1e-9
    if any(u) and any(v):
        assert exact == approx_zero
