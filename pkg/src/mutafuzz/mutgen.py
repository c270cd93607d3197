"""Mutation point enumeration and mutant generation.

Operator semantics (fixed here, standard literature definitions):

  AOR   binary {+ - * / %} -> each other member; `%` replacements are
        dropped when an operand is floating point
  ROR   {< <= > >= == !=} -> each other member
  LCR   {&& ||} -> the other
  SDL   one statement -> `;` (declarations excluded)
  UOI   insert one of {- ! ~} before a scalar variable use
        (`~` skipped for floats)
  ABS   arithmetic expression e -> inline abs(e) and -abs(e)
  ICR   integer constant c -> {0 1 -1 c+1 c-1 -c} minus duplicates and c
  LVR   float literal v -> {0.0 -v v+1.0}; char literal -> '\\0'
  AOD/LOD/ROD/BOD/SOD   binary `a op b` -> `a` and `b`, per operator class
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .csubset import function_of_span, render
from .errors import SpanMismatch

STATUSES = (
    "generated",
    "compile-failed",
    "tce-equivalent",
    "tce-redundant",
    "sampled-out",
    "live",
    "killed-diff",
    "killed-crash",
    "likely-equivalent",
)

_ARITH = ("+", "-", "*", "/", "%")
_REL = ("<", "<=", ">", ">=", "==", "!=")
_LOGIC = ("&&", "||")
_BITWISE = ("&", "|", "^")
_SHIFT = ("<<", ">>")

_DELETION_OP = {}
for _o in _ARITH:
    _DELETION_OP[_o] = "AOD"
for _o in _REL:
    _DELETION_OP[_o] = "ROD"
for _o in _LOGIC:
    _DELETION_OP[_o] = "LOD"
for _o in _BITWISE:
    _DELETION_OP[_o] = "BOD"
for _o in _SHIFT:
    _DELETION_OP[_o] = "SOD"

_SDL_KINDS = frozenset(
    {"expr-stmt", "return", "if", "while", "for", "break", "continue"}
)

_ARITH_TYPE_KINDS = frozenset({"signed-int", "unsigned-int", "float"})
_SCALAR_TYPE_KINDS = frozenset(
    {"signed-int", "unsigned-int", "float", "char", "bool", "enum"}
)


@dataclass(frozen=True)
class MutationPoint:
    operator: str
    span: tuple
    replacements: tuple
    function: str
    statement_ordinal: int


@dataclass
class Mutant:
    id: str
    operator: str
    function: str
    statement_ordinal: int
    span: tuple
    original_fragment: str
    replacement_fragment: str
    status: str = "generated"


def enumerate_points(unit, covered=None):
    """Every applicable (operator, location, replacements) triple.

    `covered` restricts enumeration to the given statement ordinals.
    """
    points = []
    for ordinal, stmt in enumerate(unit.statements):
        if covered is not None and ordinal not in covered:
            continue
        function = function_of_span(unit, stmt.span)
        if stmt.kind in _SDL_KINDS:
            points.append(
                MutationPoint("SDL", stmt.span, (";",), function, ordinal)
            )
        for expr in _owned_expressions(stmt):
            excluded = set()
            _mark_excluded(expr, excluded)
            _expr_points(unit.text, expr, excluded, function, ordinal, points)
    points.sort(key=lambda p: (p.span[0], p.operator, p.span[1]))
    return points


def _owned_expressions(stmt):
    """Expressions evaluated by the statement itself (not nested statements)."""
    kind = stmt.kind
    if kind in ("expr-stmt", "return"):
        return list(stmt.children)
    if kind in ("if", "while"):
        return [stmt.children[0]]
    if kind == "for":
        init, cond, inc, _body = stmt.children
        out = []
        if init.kind == "expr-stmt":
            out.extend(init.children)
        if cond.kind != "empty":
            out.append(cond)
        if inc.kind != "empty":
            out.append(inc)
        return out
    return []


def _lvalue_core(node, excluded):
    if node.kind == "ident":
        excluded.add(id(node))
    elif node.kind == "paren":
        _lvalue_core(node.children[0], excluded)
    elif node.kind in ("member", "index"):
        _lvalue_core(node.children[0], excluded)
    elif node.kind == "unary" and node.op == "*":
        _lvalue_core(node.children[0], excluded)


def _mark_excluded(node, excluded):
    """Identifier uses where a unary insertion would not parse or would
    change an lvalue: assignment targets, &/++/-- operands, callees, and
    member/index bases."""
    kind = node.kind
    if kind == "assign":
        _lvalue_core(node.children[0], excluded)
    elif kind == "unary" and node.op in ("&", "++", "--"):
        _lvalue_core(node.children[0], excluded)
    elif kind == "postfix":
        _lvalue_core(node.children[0], excluded)
    elif kind == "call":
        callee = node.children[0]
        if callee.kind == "ident":
            excluded.add(id(callee))
    elif kind in ("member", "index"):
        _lvalue_core(node.children[0], excluded)
    for c in node.children:
        _mark_excluded(c, excluded)


def _is_float(node):
    return node.ctype is not None and node.ctype.kind == "float"


def _expr_points(text, node, excluded, function, ordinal, points):
    kind = node.kind

    def frag(n):
        return text[n.start:n.end]

    if kind == "binary":
        lhs, rhs = node.children
        op = node.op
        span = node.span
        if op in _ARITH:
            float_operand = _is_float(lhs) or _is_float(rhs) or _is_float(node)
            reps = []
            for other in _ARITH:
                if other == op:
                    continue
                if other == "%" and float_operand:
                    continue  # would not compile
                reps.append(_swap_op(text, node, other))
            points.append(MutationPoint("AOR", span, tuple(reps), function, ordinal))
            points.append(
                MutationPoint(
                    "ABS", span, (_abs_frag(frag(node)), _negabs_frag(frag(node))),
                    function, ordinal,
                )
            )
        elif op in _REL:
            reps = tuple(_swap_op(text, node, o) for o in _REL if o != op)
            points.append(MutationPoint("ROR", span, reps, function, ordinal))
        elif op in _LOGIC:
            other = "||" if op == "&&" else "&&"
            points.append(
                MutationPoint("LCR", span, (_swap_op(text, node, other),),
                              function, ordinal)
            )
        if op in _DELETION_OP:
            points.append(
                MutationPoint(
                    _DELETION_OP[op], span, (frag(lhs), frag(rhs)),
                    function, ordinal,
                )
            )
    elif kind == "ident" and id(node) not in excluded and node.ctype is not None:
        tkind = node.ctype.kind
        if tkind in _SCALAR_TYPE_KINDS:
            ops = ["-", "!"] if tkind == "float" else ["-", "!", "~"]
            reps = tuple("(%s%s)" % (o, frag(node)) for o in ops)
            points.append(MutationPoint("UOI", node.span, reps, function, ordinal))
        if tkind in _ARITH_TYPE_KINDS:
            points.append(
                MutationPoint(
                    "ABS", node.span,
                    (_abs_frag(frag(node)), _negabs_frag(frag(node))),
                    function, ordinal,
                )
            )
    elif kind == "lit-int":
        c = int(node.value.rstrip("uUlL"), 0)
        reps = []
        for v in (0, 1, -1, c + 1, c - 1, -c):
            if v == c:
                continue
            r = str(v) if v >= 0 else "(%d)" % v
            if r not in reps:
                reps.append(r)
        points.append(MutationPoint("ICR", node.span, tuple(reps), function, ordinal))
    elif kind == "lit-float":
        v = float(node.value.rstrip("fFlL"))
        reps = []
        for w in (0.0, -v, v + 1.0):
            if w == v:
                continue
            r = repr(w) if w >= 0 else "(%s)" % repr(w)
            if r not in reps:
                reps.append(r)
        points.append(MutationPoint("LVR", node.span, tuple(reps), function, ordinal))
    elif kind == "lit-char":
        if node.value != r"'\0'":
            points.append(
                MutationPoint("LVR", node.span, (r"'\0'",), function, ordinal)
            )

    for c in node.children:
        _expr_points(text, c, excluded, function, ordinal, points)


def _swap_op(text, node, new_op):
    lhs, rhs = node.children
    middle = text[lhs.end:rhs.start].replace(node.op, new_op, 1)
    return text[node.start:lhs.end] + middle + text[rhs.start:node.end]


def _abs_frag(e):
    return "((%s) < 0 ? -(%s) : (%s))" % (e, e, e)


def _negabs_frag(e):
    return "((%s) < 0 ? (%s) : -(%s))" % (e, e, e)


def generate_mutants(unit, points):
    """One mutant per (point, replacement), with stable ids."""
    stem = os.path.splitext(os.path.basename(unit.path))[0]
    counters = {}
    mutants = []
    for point in points:
        original = unit.text[point.span[0]:point.span[1]]
        for rep in point.replacements:
            if rep == original:
                continue
            key = (point.function, point.operator)
            counters[key] = counters.get(key, 0) + 1
            mid = "%s-%s-%s-%d" % (stem, point.function, point.operator, counters[key])
            mutants.append(
                Mutant(
                    id=mid,
                    operator=point.operator,
                    function=point.function,
                    statement_ordinal=point.statement_ordinal,
                    span=point.span,
                    original_fragment=original,
                    replacement_fragment=rep,
                )
            )
    return mutants


def materialize(unit, mutant):
    """Full mutated source text for one mutant."""
    start, end = mutant.span
    if unit.text[start:end] != mutant.original_fragment:
        raise SpanMismatch(
            "stale mutant %s: source bytes changed at span (%d, %d)"
            % (mutant.id, start, end)
        )
    return render(unit, (mutant.span, mutant.replacement_fragment))


def advance_status(mutant, status):
    """Forward-only lifecycle transition."""
    order = {s: i for i, s in enumerate(STATUSES)}
    if mutant.status != "generated" and mutant.status != "live":
        raise ValueError(
            "mutant %s: cannot move from terminal status %s to %s"
            % (mutant.id, mutant.status, status)
        )
    if order[status] < order[mutant.status]:
        raise ValueError("backwards status transition: %s -> %s" % (mutant.status, status))
    mutant.status = status
    return mutant


def manifest_line(m):
    return "\t".join(
        [
            m.id,
            m.operator,
            m.function,
            str(m.statement_ordinal),
            "%d:%d" % m.span,
            m.original_fragment.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n"),
            m.replacement_fragment.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n"),
            m.status,
        ]
    )


def parse_manifest_line(line):
    mid, op, fn, ordinal, span, orig, rep, status = line.rstrip("\n").split("\t")
    start, end = span.split(":")

    def unesc(s):
        out = []
        i = 0
        while i < len(s):
            if s[i] == "\\" and i + 1 < len(s):
                out.append({"\\": "\\", "t": "\t", "n": "\n"}[s[i + 1]])
                i += 2
            else:
                out.append(s[i])
                i += 1
        return "".join(out)

    return Mutant(
        id=mid,
        operator=op,
        function=fn,
        statement_ordinal=int(ordinal),
        span=(int(start), int(end)),
        original_fragment=unesc(orig),
        replacement_fragment=unesc(rep),
        status=status,
    )
