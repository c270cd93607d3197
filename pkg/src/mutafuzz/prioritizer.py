"""Test selection, dissimilarity-based ordering, likely-equivalence.

Distances between coverage vectors use the cosine similarity distance;
the likely-equivalence check is done in exact integer arithmetic so the
"distance equals zero" threshold is decidable without float tolerance.
"""

from __future__ import annotations

import math

from .errors import LengthMismatch, UnknownStatement


def covering_tests(mutant, matrix):
    """Tests that execute the mutated statement, in matrix order."""
    key = (mutant_file_key(mutant), mutant.statement_ordinal)
    if key not in matrix.statements:
        raise UnknownStatement("%s:%d" % key)
    column = matrix.column(key)
    return [tid for tid, c in zip(matrix.tests, column) if c > 0]


def mutant_file_key(mutant):
    # mutant ids are "<stem>-<function>-<op>-<n>"; the matrix keys carry
    # the source file name
    return getattr(mutant, "file", None) or mutant.id.split("-", 1)[0] + ".c"


def cosine_distance(u, v):
    """1 - cosine similarity, in [0, 1] for non-negative counts.

    Both-zero vectors are indistinguishable (distance 0); exactly one
    zero vector is maximally dissimilar (distance 1).
    """
    if len(u) != len(v):
        raise LengthMismatch("%d != %d" % (len(u), len(v)))
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    if nu == 0 and nv == 0:
        return 0.0
    if nu == 0 or nv == 0:
        return 1.0
    dot = sum(x * y for x, y in zip(u, v))
    return max(0.0, 1.0 - dot / (nu * nv))


def order_tests(tests, matrix):
    """Greedy farthest-first ordering by pairwise cosine distance.

    The first two tests are the maximally distant pair; each following
    test maximizes its minimum distance to the tests already placed.
    Ties always resolve to matrix order.
    """
    tests = [t for t in matrix.tests if t in set(tests)]
    if len(tests) <= 1:
        return list(tests)
    vecs = {t: matrix.row(t) for t in tests}
    best = None
    for i in range(len(tests)):
        for j in range(i + 1, len(tests)):
            d = cosine_distance(vecs[tests[i]], vecs[tests[j]])
            if best is None or d > best[0]:
                best = (d, i, j)
    _, i, j = best
    placed = [tests[i], tests[j]]
    remaining = [t for t in tests if t not in placed]
    while remaining:
        scored = [
            (min(cosine_distance(vecs[t], vecs[p]) for p in placed), t)
            for t in remaining
        ]
        top = max(s for s, _ in scored)
        pick = next(t for s, t in scored if s == top)
        placed.append(pick)
        remaining.remove(pick)
    return placed


def likely_equivalent(original_vec, mutant_vec):
    """True iff the integer vectors are exactly parallel.

    Decided by cross-multiplication: (u.v)^2 == (u.u)(v.v).  Both-zero
    vectors count as parallel; exactly one zero vector does not.
    """
    u, v = list(original_vec), list(mutant_vec)
    if len(u) != len(v):
        raise LengthMismatch("%d != %d" % (len(u), len(v)))
    uu = sum(x * x for x in u)
    vv = sum(x * x for x in v)
    if uu == 0 and vv == 0:
        return True
    if uu == 0 or vv == 0:
        return False
    uv = sum(x * y for x, y in zip(u, v))
    return uv * uv == uu * vv
