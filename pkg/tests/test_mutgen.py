"""Operator enumeration and mutant generation tests.

Expected counts are hand-enumerated from the operator tables.
"""

import pytest
from hypothesis import given, strategies as st

from mutafuzz.csubset import parse
from mutafuzz.errors import SpanMismatch
from mutafuzz.mutgen import enumerate_points, generate_mutants, materialize

ADD_SRC = "int f(int a, int b){return a + b;}"
REL_SRC = "int f(int a, int b){return a < b;}"


def points_by_op(src, covered=None):
    unit = parse(src, "t.c")
    out = {}
    for p in enumerate_points(unit, covered):
        out.setdefault(p.operator, []).append(p)
    return unit, out


def test_aor_replacements():
    _, ops = points_by_op(ADD_SRC)
    (aor,) = ops["AOR"]
    assert set(aor.replacements) == {"a - b", "a * b", "a / b", "a % b"}


def test_aod_replacements():
    _, ops = points_by_op(ADD_SRC)
    (aod,) = ops["AOD"]
    assert aod.replacements == ("a", "b")


def test_ror_replacements():
    _, ops = points_by_op(REL_SRC)
    (ror,) = ops["ROR"]
    assert set(ror.replacements) == {"a <= b", "a > b", "a >= b", "a == b", "a != b"}
    (rod,) = ops["ROD"]
    assert rod.replacements == ("a", "b")


def test_covered_empty_yields_nothing():
    unit = parse(ADD_SRC, "t.c")
    assert enumerate_points(unit, covered=set()) == []


def test_icr_table_dedup():
    src = "int f(int x){return x * 2;}"
    _, ops = points_by_op(src)
    (icr,) = ops["ICR"]
    assert icr.replacements == ("0", "1", "(-1)", "3", "(-2)")


def test_icr_zero_literal():
    src = "int f(int x){return x + 0;}"
    _, ops = points_by_op(src)
    (icr,) = ops["ICR"]
    # 0 -> {1, -1} ; c+1=1 and c-1=-1 and -c=0 collapse
    assert icr.replacements == ("1", "(-1)")


def test_lvr_float_and_char():
    src = "double f(double v){ char c; c = 'a'; return v - 3.5; }"
    _, ops = points_by_op(src)
    lvrs = {p.replacements for p in ops["LVR"]}
    assert ("0.0", "(-3.5)", "4.5") in lvrs
    assert (r"'\0'",) in lvrs


def test_aor_drops_modulo_on_floats():
    src = "double f(double x){return x / 2.0;}"
    _, ops = points_by_op(src)
    (aor,) = ops["AOR"]
    assert len(aor.replacements) == 3
    assert all("%" not in r for r in aor.replacements)


def test_lcr_and_lod():
    src = "int f(int a, int b){return a && b;}"
    _, ops = points_by_op(src)
    (lcr,) = ops["LCR"]
    assert lcr.replacements == ("a || b",)
    (lod,) = ops["LOD"]
    assert lod.replacements == ("a", "b")


def test_bod_and_sod():
    src = "unsigned f(unsigned a, unsigned b){return (a & b) | (a << 2);}"
    _, ops = points_by_op(src)
    assert len(ops["BOD"]) == 2  # & and |
    assert len(ops["SOD"]) == 1


def test_sdl_count_matches_statements():
    src = "int f(int a){int t = 0; t = a; t += 1; return t;}"
    unit, ops = points_by_op(src)
    # declaration statements are not SDL targets
    assert len(ops["SDL"]) == 3
    assert all(p.replacements == (";",) for p in ops["SDL"])


def test_uoi_targets_and_exclusions():
    src = "int f(int a, int* p){a = a + 1; *p = a; return g(a);}"
    _, ops = points_by_op(src)
    spans = sorted(p.span for p in ops["UOI"])
    # targets: `a` in a+1, `a` rhs of *p = a, `a` argument of g
    assert len(spans) == 3
    for p in ops["UOI"]:
        assert p.replacements[0].startswith("(-")


def test_uoi_float_skips_bitnot():
    src = "double f(double v){return v + 1.0;}"
    _, ops = points_by_op(src)
    uoi = [p for p in ops["UOI"] if p.span != None]
    (p,) = uoi
    assert len(p.replacements) == 2
    assert all("~" not in r for r in p.replacements)


def test_abs_fragments():
    _, ops = points_by_op(ADD_SRC)
    binary_abs = [p for p in ops["ABS"] if p.span[1] - p.span[0] > 1]
    (p,) = binary_abs
    assert p.replacements == (
        "((a + b) < 0 ? -(a + b) : (a + b))",
        "((a + b) < 0 ? (a + b) : -(a + b))",
    )


def test_generate_mutants_counts_and_ids():
    unit = parse(REL_SRC, "rel.c")
    mutants = generate_mutants(unit, enumerate_points(unit))
    ror = [m for m in mutants if m.operator == "ROR"]
    assert len(ror) == 5
    assert len({m.id for m in mutants}) == len(mutants)
    assert all(m.id.startswith("rel-f-") for m in mutants)
    assert all(m.replacement_fragment != m.original_fragment for m in mutants)
    assert all(m.status == "generated" for m in mutants)


def test_determinism():
    unit1 = parse(ADD_SRC, "t.c")
    unit2 = parse(ADD_SRC, "t.c")
    m1 = generate_mutants(unit1, enumerate_points(unit1))
    m2 = generate_mutants(unit2, enumerate_points(unit2))
    assert [(m.id, m.span, m.replacement_fragment) for m in m1] == [
        (m.id, m.span, m.replacement_fragment) for m in m2
    ]


@given(st.sets(st.integers(min_value=0, max_value=4)))
def test_coverage_filter_monotonicity(covered):
    src = "int f(int a){int t = 0; if (a < 0) { t = 1; } t += a; return t;}"
    unit = parse(src, "t.c")
    n = len(unit.statements)
    covered = {c for c in covered if c < n}
    sub = enumerate_points(unit, covered)
    full = enumerate_points(unit, None)
    assert len(sub) <= len(full)
    assert set(sub) <= set(full)
    for smaller in [set(list(covered)[1:])]:
        assert len(enumerate_points(unit, smaller)) <= len(sub)


def test_materialize_sdl():
    src = "int f(int a){return a+1;}"
    unit = parse(src, "t.c")
    mutants = generate_mutants(unit, enumerate_points(unit))
    sdl = next(m for m in mutants if m.operator == "SDL")
    assert materialize(unit, sdl) == "int f(int a){;}"


def test_materialize_differs_only_in_span():
    unit = parse(ADD_SRC, "t.c")
    for m in generate_mutants(unit, enumerate_points(unit)):
        text = materialize(unit, m)
        assert text != unit.text
        assert text[: m.span[0]] == unit.text[: m.span[0]]
        assert text[m.span[0] + len(m.replacement_fragment):] == unit.text[m.span[1]:]


def test_materialize_stale_guard():
    unit = parse(ADD_SRC, "t.c")
    m = generate_mutants(unit, enumerate_points(unit))[0]
    m.original_fragment = "something else"
    with pytest.raises(SpanMismatch):
        materialize(unit, m)


def test_mutated_sources_reparse():
    src = (
        "int clamp(int x, int lo, int hi) {\n"
        "    if (x < lo) { return lo; }\n"
        "    if (x > hi) { return hi; }\n"
        "    return x;\n"
        "}\n"
    )
    unit = parse(src, "clamp.c")
    for m in generate_mutants(unit, enumerate_points(unit)):
        parse(materialize(unit, m), "mut.c")  # must not raise
