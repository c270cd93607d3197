"""Build control and TCE partition tests."""

import hashlib
import random
import shutil

import pytest

from mutafuzz.buildctl import (
    BuildFailure,
    BuildOutcome,
    BuildSettings,
    Builder,
    read_digests,
    tce_partition,
    write_digests,
)
from mutafuzz.errors import BuildToolMissing, MissingLevel, WorkspaceDirty

CC = shutil.which("gcc") or shutil.which("cc")

SHA512_EMPTY = (
    "cf83e1357eefb8bdf1542850d66d8007d620e4050b5715dc83f4a921d36ce9ce"
    "47d0d13c5d85f2b0ff8318d2877eec2f63b931bd47417a81a538327af927da3e"
)

SUBJECT = "int f(int a){return a+1;}\nint main(void){return f(1);}\n"


def settings():
    return BuildSettings(
        cmd=CC + " -{level} -o prog subject.c", artifact="prog", levels=("O0", "O1")
    )


@pytest.fixture
def workspace(tmp_path):
    (tmp_path / "subject.c").write_text(SUBJECT)
    return tmp_path


def test_sha512_standard_vector():
    assert hashlib.sha512(b"").hexdigest() == SHA512_EMPTY


@pytest.mark.skipif(CC is None, reason="no C compiler")
def test_original_build_and_determinism(workspace):
    b = Builder(str(workspace), settings(), "subject.c")
    digest = b.build(None, "O0")
    assert isinstance(digest, str) and len(digest) == 128
    assert digest == digest.lower()
    assert b.verify_determinism()


@pytest.mark.skipif(CC is None, reason="no C compiler")
def test_failed_mutant_restores_original(workspace):
    b = Builder(str(workspace), settings(), "subject.c")
    res = b.build("int f(int a){return a+;}", "O0")
    assert isinstance(res, BuildFailure)
    assert res.exit_code != 0
    assert (workspace / "subject.c").read_text() == SUBJECT


@pytest.mark.skipif(CC is None, reason="no C compiler")
def test_successful_mutant_restores_original(workspace):
    b = Builder(str(workspace), settings(), "subject.c")
    res = b.build(SUBJECT.replace("a+1", "a-1"), "O1")
    assert isinstance(res, str)
    assert (workspace / "subject.c").read_text() == SUBJECT


@pytest.mark.skipif(CC is None, reason="no C compiler")
def test_workspace_dirty(workspace):
    b = Builder(str(workspace), settings(), "subject.c")
    (workspace / "subject.c").write_text(SUBJECT + "// tampered\n")
    with pytest.raises(WorkspaceDirty):
        b.build(None, "O0")


def test_build_tool_missing(workspace):
    bad = BuildSettings(cmd="definitely-not-a-compiler -{level}", artifact="prog")
    with pytest.raises(BuildToolMissing):
        Builder(str(workspace), bad, "subject.c")


def outcome(mid, digests):
    o = BuildOutcome(mid)
    o.per_level = dict(digests)
    return o


def test_tce_equivalent_at_one_level():
    outcomes = [
        outcome("original", {"O0": "aaa", "O1": "bbb"}),
        outcome("m1", {"O0": "xxx", "O1": "bbb"}),
        outcome("m2", {"O0": "yyy", "O1": "zzz"}),
    ]
    part = tce_partition(outcomes, ("O0", "O1"))
    assert part.equivalent == {"m1"}
    assert part.unique == {"m2"}
    assert part.redundant_groups == ()


def test_tce_redundant_group():
    outcomes = [
        outcome("original", {"O2": "ooo"}),
        outcome("m2", {"O2": "ddd"}),
        outcome("m3", {"O2": "ddd"}),
        outcome("m4", {"O2": "eee"}),
    ]
    part = tce_partition(outcomes, ("O2",))
    assert part.redundant_groups == (frozenset({"m2", "m3"}),)
    assert part.representatives() == {"m2"}
    assert part.dropped_redundant() == {"m3"}
    assert part.unique == {"m4"}


def test_tce_all_distinct():
    outcomes = [outcome("original", {"O0": "o"})] + [
        outcome("m%d" % i, {"O0": "d%d" % i}) for i in range(5)
    ]
    part = tce_partition(outcomes, ("O0",))
    assert part.equivalent == frozenset()
    assert part.redundant_groups == ()
    assert len(part.unique) == 5


def test_tce_missing_level():
    outcomes = [outcome("original", {"O0": "o", "O1": "p"}), outcome("m1", {"O0": "x"})]
    with pytest.raises(MissingLevel):
        tce_partition(outcomes, ("O0", "O1"))


def test_tce_compile_failures_excluded():
    outcomes = [
        outcome("original", {"O0": "o"}),
        outcome("m1", {"O0": BuildFailure(1, "boom")}),
        outcome("m2", {"O0": "x"}),
    ]
    part = tce_partition(outcomes, ("O0",))
    assert "m1" not in (part.equivalent | part.unique | part.dropped_redundant())
    assert part.unique == {"m2"}


def brute_force_partition(outcomes, levels):
    by_id = {o.mutant_id: o for o in outcomes}
    original = by_id.pop("original")
    compiled = {m: o for m, o in by_id.items() if o.compiled_everywhere(levels)}
    equivalent = {
        m
        for m, o in compiled.items()
        if any(o.per_level[lv] == original.per_level[lv] for lv in levels)
    }
    rest = sorted(set(compiled) - equivalent)
    adj = {m: set() for m in rest}
    for a in rest:
        for b in rest:
            if a < b and any(
                compiled[a].per_level[lv] == compiled[b].per_level[lv] for lv in levels
            ):
                adj[a].add(b)
                adj[b].add(a)
    seen, groups = set(), []
    for m in rest:
        if m in seen:
            continue
        comp, stack = set(), [m]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x] - comp)
        seen |= comp
        if len(comp) >= 2:
            groups.append(frozenset(comp))
    grouped = set().union(*groups) if groups else set()
    return equivalent, set(groups), set(rest) - grouped


def test_tce_matches_brute_force_on_random_fixtures():
    rng = random.Random(7)
    levels = ("O0", "O1", "O2")
    for _ in range(100):
        outcomes = [
            outcome("original", {lv: "h%d" % rng.randint(0, 6) for lv in levels})
        ]
        n = rng.randint(2, 12)
        for i in range(n):
            outcomes.append(
                outcome("m%02d" % i, {lv: "h%d" % rng.randint(0, 6) for lv in levels})
            )
        part = tce_partition(outcomes, levels)
        eq, groups, unique = brute_force_partition(outcomes, levels)
        assert part.equivalent == eq
        assert set(part.redundant_groups) == groups
        assert part.unique == unique
        # disjoint and exhaustive
        parts = [part.equivalent, part.unique] + list(part.redundant_groups)
        union = set()
        total = 0
        for p in parts:
            union |= p
            total += len(p)
        assert total == len(union) == n


def test_digest_file_roundtrip(tmp_path):
    outcomes = [
        outcome("original", {"O0": "a" * 128}),
        outcome("m1", {"O0": BuildFailure(2, "x")}),
    ]
    path = tmp_path / "digests.txt"
    write_digests(str(path), outcomes)
    again = {o.mutant_id: o for o in read_digests(str(path))}
    assert again["original"].per_level["O0"] == "a" * 128
    assert isinstance(again["m1"].per_level["O0"], BuildFailure)
