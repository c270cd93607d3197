"""AST node and type machinery for the C subset."""

from __future__ import annotations

from dataclasses import dataclass, field

# Statement node kinds; blocks are containers, not index entries.
STATEMENT_KINDS = frozenset(
    {"expr-stmt", "decl-stmt", "return", "if", "while", "for", "break",
     "continue", "empty"}
)

# Probe namespace excluded from the statement index so instrumentation does
# not perturb statement ordinals on re-parse.
PROBE_PREFIX = "mfcov_"


@dataclass
class Node:
    kind: str
    start: int
    end: int
    children: list["Node"] = field(default_factory=list)
    name: str | None = None  # identifiers, function/typedef/struct names
    op: str | None = None  # operator lexeme for unary/binary/assign
    value: str | None = None  # literal lexeme
    ctype: object = None  # light type annotation, not part of structure
    node_id: int = -1

    @property
    def span(self):
        return (self.start, self.end)


def same_shape(a: Node, b: Node) -> bool:
    """Structural equality ignoring spans and annotations."""
    if (a.kind, a.name, a.op, a.value) != (b.kind, b.name, b.op, b.value):
        return False
    if len(a.children) != len(b.children):
        return False
    return all(same_shape(x, y) for x, y in zip(a.children, b.children))


def walk(node: Node):
    yield node
    for c in node.children:
        yield from walk(c)


@dataclass(frozen=True)
class TypeDescriptor:
    kind: str  # signed-int | unsigned-int | float | char | bool | enum |
    #            struct | array | pointer-to | void
    size_bytes: int
    pointee: "TypeDescriptor | None" = None
    members: tuple = ()  # ordered (name, TypeDescriptor) pairs for struct
    name: str | None = None  # struct/enum tag or typedef name
    count: int = 0  # array element count

    @property
    def alignment(self):
        if self.kind == "struct":
            return max((m[1].alignment for m in self.members), default=1)
        if self.kind == "array":
            return self.pointee.alignment
        return max(1, self.size_bytes)

    def member_offsets(self):
        """(name, type, offset) triples under the padded layout rule."""
        out = []
        off = 0
        for mname, mty in self.members:
            a = mty.alignment
            off = (off + a - 1) // a * a
            out.append((mname, mty, off))
            off += mty.size_bytes
        return out


def struct_type(members, name=None):
    size = 0
    align = 1
    for _, mty in members:
        a = mty.alignment
        align = max(align, a)
        size = (size + a - 1) // a * a
        size += mty.size_bytes
    size = (size + align - 1) // align * align
    return TypeDescriptor("struct", size, members=tuple(members), name=name)


VOID = TypeDescriptor("void", 0)
CHAR = TypeDescriptor("char", 1)
BOOL = TypeDescriptor("bool", 1)


def int_type(size, signed=True):
    return TypeDescriptor("signed-int" if signed else "unsigned-int", size)


def float_type(size):
    return TypeDescriptor("float", size)


def pointer_to(pointee):
    return TypeDescriptor("pointer-to", 8, pointee=pointee)


def array_of(elem, count):
    return TypeDescriptor("array", elem.size_bytes * count, pointee=elem, count=count)


def enum_type(name=None):
    return TypeDescriptor("enum", 4, name=name)


@dataclass(frozen=True)
class FunctionSignature:
    name: str
    return_type: TypeDescriptor
    params: tuple  # ordered (name, TypeDescriptor) pairs


@dataclass
class SourceUnit:
    path: str
    text: str
    tokens: list
    ast: Node
    statements: list  # ordered statement Node refs (the statement index)

    def statement_span(self, ordinal):
        return self.statements[ordinal].span

    def node_spans(self):
        return {(n.start, n.end) for n in walk(self.ast)}
