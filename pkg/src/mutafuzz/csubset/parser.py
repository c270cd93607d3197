"""Recursive-descent parser for the C subset.

The subset covers: typedefs, struct/enum definitions, global and local
variable declarations (with initializer lists), function definitions and
prototypes, if/while/for/return/break/continue statements, and the usual
expression operators including assignment, the conditional operator,
casts and sizeof.  Preprocessor lines and comments are trivia.

Out of subset (rejected with UnsupportedConstruct): unions, variadics,
function-pointer parameters.
"""

from __future__ import annotations

from ..errors import CSyntaxError, SpanMismatch, UnresolvedType, UnsupportedConstruct
from .ast import (
    BOOL,
    CHAR,
    VOID,
    FunctionSignature,
    Node,
    SourceUnit,
    TypeDescriptor,
    array_of,
    enum_type,
    float_type,
    int_type,
    pointer_to,
    struct_type,
    walk,
    PROBE_PREFIX,
    STATEMENT_KINDS,
)
from .lexer import lex

_BASE_TYPE_KEYWORDS = frozenset(
    {"void", "char", "short", "int", "long", "float", "double", "signed",
     "unsigned", "_Bool", "struct", "enum", "union", "const"}
)

_ASSIGN_OPS = frozenset(
    {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="}
)

_BINARY_LEVELS = [
    ["||"],
    ["&&"],
    ["|"],
    ["^"],
    ["&"],
    ["==", "!="],
    ["<", "<=", ">", ">="],
    ["<<", ">>"],
    ["+", "-"],
    ["*", "/", "%"],
]


def _unresolved(name):
    return TypeDescriptor("unresolved", 0, name=name)


class _Parser:
    def __init__(self, text, path):
        self.text = text
        self.path = path
        self.tokens = lex(text)
        self.pos = 0
        self.typedefs: dict[str, TypeDescriptor] = {}
        self.structs: dict[str, TypeDescriptor] = {}
        self.enums: dict[str, TypeDescriptor] = {}
        self.enum_consts: dict[str, TypeDescriptor] = {}
        self.functions: dict[str, TypeDescriptor] = {}  # name -> return type

    # token helpers ----------------------------------------------------

    def peek(self, k=0):
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def at(self, text):
        return self.peek().text == text and self.peek().kind in ("punct", "keyword")

    def accept(self, text):
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text):
        tok = self.peek()
        if not self.accept(text):
            raise CSyntaxError(tok.start, {text})
        return self.tokens[self.pos - 1]

    def expect_ident(self):
        tok = self.peek()
        if tok.kind != "ident":
            raise CSyntaxError(tok.start, {"<identifier>"})
        self.pos += 1
        return tok

    def fail(self, expected):
        raise CSyntaxError(self.peek().start, set(expected))

    # type parsing -----------------------------------------------------

    def at_type_start(self):
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in _BASE_TYPE_KEYWORDS:
            return True
        return tok.kind == "ident" and tok.text in self.typedefs

    def parse_base_type(self, allow_unknown=False):
        """Parse the base type (no pointers/declarator)."""
        while self.accept("const") or self.accept("static") or self.accept("extern"):
            pass
        tok = self.peek()
        if tok.text == "union":
            raise UnsupportedConstruct("union", tok.start)
        if tok.text == "struct":
            self.pos += 1
            tag = self.expect_ident().text
            ty = self.structs.get(tag)
            return ty if ty is not None else _unresolved("struct " + tag)
        if tok.text == "enum":
            self.pos += 1
            tag = self.expect_ident().text
            return self.enums.get(tag, enum_type(tag))
        if tok.text == "_Bool":
            self.pos += 1
            return BOOL
        if tok.text == "void":
            self.pos += 1
            return VOID
        if tok.text == "float":
            self.pos += 1
            return float_type(4)
        if tok.text == "double":
            self.pos += 1
            return float_type(8)
        signed = True
        seen_sign = False
        if tok.text in ("signed", "unsigned"):
            signed = tok.text == "signed"
            seen_sign = True
            self.pos += 1
            tok = self.peek()
        if tok.text == "char":
            self.pos += 1
            return CHAR if (signed and not seen_sign) else int_type(1, signed)
        if tok.text == "short":
            self.pos += 1
            self.accept("int")
            return int_type(2, signed)
        if tok.text == "int":
            self.pos += 1
            return int_type(4, signed)
        if tok.text == "long":
            self.pos += 1
            self.accept("long")
            self.accept("int")
            return int_type(8, signed)
        if seen_sign:
            return int_type(4, signed)
        if tok.kind == "ident":
            if tok.text in self.typedefs:
                self.pos += 1
                return self.typedefs[tok.text]
            if allow_unknown:
                self.pos += 1
                return _unresolved(tok.text)
        self.fail({"<type>"})

    def parse_pointers(self, ty):
        while self.accept("*"):
            self.accept("const")
            ty = pointer_to(ty)
        return ty

    def parse_array_suffix(self, ty):
        while self.at("["):
            self.expect("[")
            count = 0
            tok = self.peek()
            if tok.kind == "int":
                count = int(tok.text.rstrip("uUlL"), 0)
                self.pos += 1
            self.expect("]")
            ty = array_of(ty, count)
        return ty

    # top level --------------------------------------------------------

    def parse_unit(self):
        start_tok = self.peek()
        children = []
        while self.peek().kind != "eof":
            children.append(self.parse_top_decl())
        end = children[-1].end if children else start_tok.start
        unit = Node("unit", 0, end, children)
        statements = self.index_statements(unit)
        for i, node in enumerate(walk(unit)):
            node.node_id = i
        self.annotate(unit)
        return SourceUnit(self.path, self.text, self.tokens[:-1], unit, statements)

    def parse_top_decl(self):
        start = self.peek().start
        if self.at("typedef"):
            return self.parse_typedef()
        if self.at("struct") and self.peek(1).kind == "ident" and self.peek(2).text == "{":
            return self.parse_struct_def()
        if self.at("enum") and self.peek(1).kind == "ident" and self.peek(2).text == "{":
            return self.parse_enum_def(start)
        if self.at("union"):
            raise UnsupportedConstruct("union", start)
        ty = self.parse_pointers(self.parse_base_type(allow_unknown=True))
        name_tok = self.expect_ident()
        if self.at("("):
            return self.parse_function(ty, name_tok, start)
        return self.parse_global_decl(ty, name_tok, start)

    def parse_typedef(self):
        start = self.expect("typedef").start
        if self.at("struct") and (self.peek(1).text == "{" or self.peek(2).text == "{"):
            tag = None
            self.expect("struct")
            if self.peek().kind == "ident":
                tag = self.expect_ident().text
            members = self.parse_struct_members()
            name_tok = self.expect_ident()
            end = self.expect(";").end
            ty = struct_type(members, name=name_tok.text)
            self.typedefs[name_tok.text] = ty
            if tag:
                self.structs[tag] = ty
            return Node("typedef", start, end, name=name_tok.text)
        if self.at("enum") and (self.peek(1).text == "{" or self.peek(2).text == "{"):
            self.expect("enum")
            tag = None
            if self.peek().kind == "ident":
                tag = self.expect_ident().text
            self.parse_enum_body()
            name_tok = self.expect_ident()
            end = self.expect(";").end
            ty = enum_type(name_tok.text)
            self.typedefs[name_tok.text] = ty
            if tag:
                self.enums[tag] = ty
            return Node("typedef", start, end, name=name_tok.text)
        ty = self.parse_pointers(self.parse_base_type(allow_unknown=True))
        name_tok = self.expect_ident()
        ty = self.parse_array_suffix(ty)
        end = self.expect(";").end
        self.typedefs[name_tok.text] = ty
        return Node("typedef", start, end, name=name_tok.text)

    def parse_struct_members(self):
        self.expect("{")
        members = []
        while not self.at("}"):
            mty = self.parse_pointers(self.parse_base_type())
            mname = self.expect_ident()
            mty = self.parse_array_suffix(mty)
            members.append((mname.text, mty))
            while self.accept(","):
                extra = self.expect_ident()
                members.append((extra.text, mty))
            self.expect(";")
        self.expect("}")
        return members

    def parse_struct_def(self):
        start = self.expect("struct").start
        tag = self.expect_ident().text
        members = self.parse_struct_members()
        end = self.expect(";").end
        self.structs[tag] = struct_type(members, name=tag)
        return Node("struct-def", start, end, name=tag)

    def parse_enum_body(self):
        self.expect("{")
        value = 0
        while not self.at("}"):
            name = self.expect_ident().text
            if self.accept("="):
                tok = self.peek()
                neg = self.accept("-")
                tok = self.peek()
                if tok.kind != "int":
                    self.fail({"<integer>"})
                self.pos += 1
                value = int(tok.text.rstrip("uUlL"), 0) * (-1 if neg else 1)
            self.enum_consts[name] = enum_type()
            value += 1
            if not self.accept(","):
                break
        self.expect("}")

    def parse_enum_def(self, start):
        self.expect("enum")
        tag = self.expect_ident().text
        self.parse_enum_body()
        end = self.expect(";").end
        self.enums[tag] = enum_type(tag)
        return Node("enum-def", start, end, name=tag)

    def parse_global_decl(self, ty, name_tok, start):
        node = Node("global-decl", start, 0)
        node.children.append(self.parse_declarator_rest(ty, name_tok))
        while self.accept(","):
            ty2 = self.parse_pointers(ty)
            nt = self.expect_ident()
            node.children.append(self.parse_declarator_rest(ty2, nt))
        node.end = self.expect(";").end
        return node

    def parse_declarator_rest(self, ty, name_tok):
        ty = self.parse_array_suffix(ty)
        decl = Node("declarator", name_tok.start, name_tok.end, name=name_tok.text)
        decl.ctype = ty
        if self.accept("="):
            init = self.parse_initializer()
            decl.children.append(init)
            decl.end = init.end
        return decl

    def parse_initializer(self):
        if self.at("{"):
            start = self.expect("{").start
            items = []
            while not self.at("}"):
                items.append(self.parse_initializer())
                if not self.accept(","):
                    break
            end = self.expect("}").end
            return Node("init-list", start, end, items)
        return self.parse_assignment_expr()

    # functions --------------------------------------------------------

    def parse_function(self, ret_ty, name_tok, start):
        self.expect("(")
        params = []
        if self.at("void") and self.peek(1).text == ")":
            self.pos += 1
        elif not self.at(")"):
            while True:
                if self.at("..."):
                    raise UnsupportedConstruct("variadic function", self.peek().start)
                pty = self.parse_pointers(self.parse_base_type(allow_unknown=True))
                if self.at("("):
                    raise UnsupportedConstruct(
                        "function pointer parameter", self.peek().start
                    )
                ptok = self.expect_ident()
                pty = self.parse_array_suffix(pty)
                pnode = Node("param", ptok.start, ptok.end, name=ptok.text)
                pnode.ctype = pty
                params.append(pnode)
                if not self.accept(","):
                    break
        self.expect(")")
        self.functions[name_tok.text] = ret_ty
        if self.accept(";"):
            node = Node("func-decl", start, self.tokens[self.pos - 1].end,
                        params, name=name_tok.text)
            node.ctype = ret_ty
            return node
        body = self.parse_block()
        node = Node("func-def", start, body.end, params + [body], name=name_tok.text)
        node.ctype = ret_ty
        return node

    # statements -------------------------------------------------------

    def parse_block(self):
        start = self.expect("{").start
        stmts = []
        while not self.at("}"):
            stmts.append(self.parse_statement())
        end = self.expect("}").end
        return Node("block", start, end, stmts)

    def parse_statement(self):
        tok = self.peek()
        if self.at("{"):
            return self.parse_block()
        if self.at(";"):
            self.pos += 1
            return Node("empty", tok.start, tok.end)
        if self.at("if"):
            return self.parse_if()
        if self.at("while"):
            return self.parse_while()
        if self.at("for"):
            return self.parse_for()
        if self.at("return"):
            self.pos += 1
            if self.at(";"):
                end = self.expect(";").end
                return Node("return", tok.start, end)
            expr = self.parse_expr()
            end = self.expect(";").end
            return Node("return", tok.start, end, [expr])
        if self.at("break"):
            self.pos += 1
            end = self.expect(";").end
            return Node("break", tok.start, end)
        if self.at("continue"):
            self.pos += 1
            end = self.expect(";").end
            return Node("continue", tok.start, end)
        if self.at_type_start():
            return self.parse_decl_stmt()
        expr = self.parse_expr()
        end = self.expect(";").end
        return Node("expr-stmt", tok.start, end, [expr])

    def parse_decl_stmt(self):
        start = self.peek().start
        base = self.parse_base_type()
        node = Node("decl-stmt", start, 0)
        while True:
            ty = self.parse_pointers(base)
            name_tok = self.expect_ident()
            node.children.append(self.parse_declarator_rest(ty, name_tok))
            if not self.accept(","):
                break
        node.end = self.expect(";").end
        return node

    def parse_if(self):
        start = self.expect("if").start
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        then = self.parse_statement()
        children = [cond, then]
        end = then.end
        if self.accept("else"):
            other = self.parse_statement()
            children.append(other)
            end = other.end
        return Node("if", start, end, children)

    def parse_while(self):
        start = self.expect("while").start
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        body = self.parse_statement()
        return Node("while", start, body.end, [cond, body])

    def parse_for(self):
        start = self.expect("for").start
        self.expect("(")
        if self.at(";"):
            tok = self.expect(";")
            init = Node("empty", tok.start, tok.end)
        elif self.at_type_start():
            init = self.parse_decl_stmt()
        else:
            expr = self.parse_expr()
            end = self.expect(";").end
            init = Node("expr-stmt", expr.start, end, [expr])
        if self.at(";"):
            tok = self.peek()
            cond = Node("empty", tok.start, tok.start)
        else:
            cond = self.parse_expr()
        self.expect(";")
        if self.at(")"):
            tok = self.peek()
            inc = Node("empty", tok.start, tok.start)
        else:
            inc = self.parse_expr()
        self.expect(")")
        body = self.parse_statement()
        return Node("for", start, body.end, [init, cond, inc, body])

    # expressions ------------------------------------------------------

    def parse_expr(self):
        return self.parse_assignment_expr()

    def parse_assignment_expr(self):
        lhs = self.parse_ternary()
        tok = self.peek()
        if tok.kind == "punct" and tok.text in _ASSIGN_OPS:
            self.pos += 1
            rhs = self.parse_assignment_expr()
            return Node("assign", lhs.start, rhs.end, [lhs, rhs], op=tok.text)
        return lhs

    def parse_ternary(self):
        cond = self.parse_binary(0)
        if self.accept("?"):
            then = self.parse_expr()
            self.expect(":")
            other = self.parse_ternary()
            return Node("ternary", cond.start, other.end, [cond, then, other])
        return cond

    def parse_binary(self, level):
        if level >= len(_BINARY_LEVELS):
            return self.parse_unary()
        ops = _BINARY_LEVELS[level]
        node = self.parse_binary(level + 1)
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.text in ops:
                self.pos += 1
                rhs = self.parse_binary(level + 1)
                node = Node("binary", node.start, rhs.end, [node, rhs], op=tok.text)
            else:
                return node

    def _at_cast(self):
        if not self.at("("):
            return False
        nxt = self.peek(1)
        if nxt.kind == "keyword" and nxt.text in _BASE_TYPE_KEYWORDS:
            return True
        return nxt.kind == "ident" and nxt.text in self.typedefs

    def parse_unary(self):
        tok = self.peek()
        if tok.kind == "punct" and tok.text in ("-", "+", "!", "~", "*", "&", "++", "--"):
            self.pos += 1
            operand = self.parse_unary()
            return Node("unary", tok.start, operand.end, [operand], op=tok.text)
        if self.at("sizeof"):
            self.pos += 1
            if self.at("(") and self._at_cast_body():
                self.expect("(")
                ty_start = self.peek().start
                self.parse_pointers(self.parse_base_type())
                ty_end = self.tokens[self.pos - 1].end
                end = self.expect(")").end
                tnode = Node("type-name", ty_start, ty_end)
                return Node("sizeof-type", tok.start, end, [tnode])
            operand = self.parse_unary()
            return Node("sizeof-expr", tok.start, operand.end, [operand])
        if self._at_cast():
            start = self.expect("(").start
            ty_start = self.peek().start
            ty = self.parse_pointers(self.parse_base_type())
            ty_end = self.tokens[self.pos - 1].end
            self.expect(")")
            operand = self.parse_unary()
            node = Node("cast", start, operand.end,
                        [Node("type-name", ty_start, ty_end), operand])
            node.ctype = ty
            return node
        return self.parse_postfix()

    def _at_cast_body(self):
        nxt = self.peek(1)
        if nxt.kind == "keyword" and nxt.text in _BASE_TYPE_KEYWORDS:
            return True
        return nxt.kind == "ident" and nxt.text in self.typedefs

    def parse_postfix(self):
        node = self.parse_primary()
        while True:
            tok = self.peek()
            if self.at("("):
                self.pos += 1
                args = []
                if not self.at(")"):
                    while True:
                        args.append(self.parse_assignment_expr())
                        if not self.accept(","):
                            break
                end = self.expect(")").end
                node = Node("call", node.start, end, [node] + args)
            elif self.at("["):
                self.pos += 1
                idx = self.parse_expr()
                end = self.expect("]").end
                node = Node("index", node.start, end, [node, idx])
            elif self.at(".") or self.at("->"):
                op = tok.text
                self.pos += 1
                mem = self.expect_ident()
                node = Node("member", node.start, mem.end, [node], op=op, name=mem.text)
            elif self.at("++") or self.at("--"):
                self.pos += 1
                node = Node("postfix", node.start, tok.end, [node], op=tok.text)
            else:
                return node

    def parse_primary(self):
        tok = self.peek()
        if tok.kind == "ident":
            self.pos += 1
            return Node("ident", tok.start, tok.end, name=tok.text)
        if tok.kind == "int":
            self.pos += 1
            return Node("lit-int", tok.start, tok.end, value=tok.text)
        if tok.kind == "float":
            self.pos += 1
            return Node("lit-float", tok.start, tok.end, value=tok.text)
        if tok.kind == "char":
            self.pos += 1
            return Node("lit-char", tok.start, tok.end, value=tok.text)
        if tok.kind == "string":
            self.pos += 1
            return Node("lit-string", tok.start, tok.end, value=tok.text)
        if self.at("("):
            self.pos += 1
            inner = self.parse_expr()
            end = self.expect(")").end
            return Node("paren", tok.start, end, [inner])
        self.fail({"<expression>"})

    # statement index --------------------------------------------------

    def index_statements(self, unit):
        out = []
        for top in unit.children:
            if top.kind == "func-def":
                body = top.children[-1]
                self._collect_statements(body, out)
        out.sort(key=lambda s: s.start)
        return out

    def _collect_statements(self, stmt, out):
        if stmt.kind == "block":
            for s in stmt.children:
                self._collect_statements(s, out)
            return
        if stmt.kind not in STATEMENT_KINDS:
            return
        if not _is_probe_stmt(stmt):
            out.append(stmt)
        if stmt.kind == "if":
            self._collect_statements(stmt.children[1], out)
            if len(stmt.children) == 3:
                self._collect_statements(stmt.children[2], out)
        elif stmt.kind == "while":
            self._collect_statements(stmt.children[1], out)
        elif stmt.kind == "for":
            # the header clauses are part of the for statement itself
            self._collect_statements(stmt.children[3], out)

    # light type annotation --------------------------------------------

    def annotate(self, unit):
        for top in unit.children:
            if top.kind == "func-def":
                scope = {}
                for p in top.children[:-1]:
                    scope[p.name] = p.ctype
                self._annotate_stmt(top.children[-1], scope)

    def _annotate_stmt(self, stmt, scope):
        if stmt.kind == "block":
            for s in stmt.children:
                self._annotate_stmt(s, scope)
        elif stmt.kind == "decl-stmt":
            for decl in stmt.children:
                scope[decl.name] = decl.ctype
                for init in decl.children:
                    self._annotate_expr(init, scope)
        elif stmt.kind in ("if", "while"):
            self._annotate_expr(stmt.children[0], scope)
            for s in stmt.children[1:]:
                self._annotate_stmt(s, scope)
        elif stmt.kind == "for":
            init, cond, inc, body = stmt.children
            self._annotate_stmt(init, scope)
            self._annotate_expr(cond, scope)
            self._annotate_expr(inc, scope)
            self._annotate_stmt(body, scope)
        elif stmt.kind in ("return", "expr-stmt"):
            for e in stmt.children:
                self._annotate_expr(e, scope)

    def _annotate_expr(self, node, scope):
        for c in node.children:
            self._annotate_expr(c, scope)
        k = node.kind
        if k == "ident":
            node.ctype = scope.get(node.name) or self.enum_consts.get(node.name)
        elif k == "lit-int":
            node.ctype = int_type(4)
        elif k == "lit-float":
            node.ctype = float_type(8)
        elif k == "lit-char":
            node.ctype = CHAR
        elif k == "paren":
            node.ctype = node.children[0].ctype
        elif k == "unary":
            if node.op == "!":
                node.ctype = int_type(4)
            elif node.op == "*":
                inner = node.children[0].ctype
                node.ctype = inner.pointee if inner and inner.pointee else None
            elif node.op == "&":
                inner = node.children[0].ctype
                node.ctype = pointer_to(inner) if inner else None
            else:
                node.ctype = node.children[0].ctype
        elif k == "postfix":
            node.ctype = node.children[0].ctype
        elif k == "binary":
            if node.op in ("+", "-", "*", "/", "%"):
                lt, rt = node.children[0].ctype, node.children[1].ctype
                if (lt and lt.kind == "float") or (rt and rt.kind == "float"):
                    node.ctype = float_type(8)
                else:
                    node.ctype = lt or rt
            else:
                node.ctype = int_type(4)
        elif k == "assign":
            node.ctype = node.children[0].ctype
        elif k == "ternary":
            node.ctype = node.children[1].ctype
        elif k == "call":
            callee = node.children[0]
            if callee.kind == "ident":
                node.ctype = self.functions.get(callee.name)
        elif k == "member":
            base = node.children[0].ctype
            if base and base.kind == "pointer-to":
                base = base.pointee
            if base and base.kind == "struct":
                for mname, mty in base.members:
                    if mname == node.name:
                        node.ctype = mty
                        break
        elif k == "index":
            base = node.children[0].ctype
            if base and base.pointee:
                node.ctype = base.pointee
        elif k in ("sizeof-type", "sizeof-expr"):
            node.ctype = int_type(8, signed=False)


def _is_probe_stmt(stmt):
    if stmt.kind != "expr-stmt":
        return False
    expr = stmt.children[0]
    return (
        expr.kind == "call"
        and expr.children[0].kind == "ident"
        and expr.children[0].name.startswith(PROBE_PREFIX)
    )


def parse(source, path="<memory>"):
    """Parse a C-subset translation unit.

    `source` may be bytes or str; spans index into the decoded text.
    """
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    return _Parser(source, path).parse_unit()


def render(unit, patch=None):
    """Return source text, optionally with one span spliced.

    Without a patch the original text is returned verbatim.  A patch span
    must coincide with exactly one AST node's span.
    """
    if patch is None:
        return unit.text
    (start, end), replacement = patch
    if (start, end) not in unit.node_spans():
        raise SpanMismatch("patch span (%d, %d) is not a node boundary" % (start, end))
    return unit.text[:start] + replacement + unit.text[end:]


def extract_signatures(unit):
    """Resolved signatures for function definitions and prototypes.

    Source order, first occurrence per name.
    """
    sigs = []
    seen = set()
    for top in unit.ast.children:
        if top.kind not in ("func-def", "func-decl") or top.name in seen:
            continue
        seen.add(top.name)
        params = [c for c in top.children if c.kind == "param"]
        sigs.append(
            FunctionSignature(
                top.name,
                _resolve(top.ctype),
                tuple((p.name, _resolve(p.ctype)) for p in params),
            )
        )
    return sigs


def _resolve(ty):
    if ty.kind == "unresolved":
        raise UnresolvedType(ty.name)
    if ty.kind == "pointer-to":
        return pointer_to(_resolve(ty.pointee))
    return ty


def function_of_span(unit, span):
    """Name of the function definition whose span encloses `span`."""
    for top in unit.ast.children:
        if top.kind == "func-def" and top.start <= span[0] and span[1] <= top.end:
            return top.name
    return None
