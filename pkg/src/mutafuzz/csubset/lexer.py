"""Tokenizer for the supported C subset.

Spans are byte offsets into the original text.  Inputs are expected to be
ASCII-compatible, so character offsets and byte offsets coincide.
Comments and preprocessor lines are skipped but their bytes are preserved
in the source text (rendering always returns original bytes).
"""

from dataclasses import dataclass

from ..errors import CSyntaxError

KEYWORDS = frozenset(
    {
        "void", "char", "short", "int", "long", "float", "double",
        "signed", "unsigned", "struct", "enum", "union", "typedef",
        "if", "else", "while", "for", "return", "break", "continue",
        "sizeof", "const", "static", "extern", "_Bool",
    }
)

# longest-match first
PUNCTS = [
    "<<=", ">>=", "...",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "~", "&", "|", "^",
    "(", ")", "{", "}", "[", "]", ",", ";", ".", "?", ":",
]


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | int | float | char | string | punct | eof
    text: str
    start: int
    end: int


def _is_ident_start(c):
    return c.isalpha() or c == "_"


def _is_ident(c):
    return c.isalnum() or c == "_"


def lex(text):
    tokens = []
    i = 0
    n = len(text)
    at_line_start = True
    while i < n:
        c = text[i]
        if c in " \t\r":
            i += 1
            continue
        if c == "\n":
            i += 1
            at_line_start = True
            continue
        if c == "#" and at_line_start:
            # preprocessor line: skipped as trivia (with continuations)
            while i < n and text[i] != "\n":
                if text[i] == "\\" and i + 1 < n and text[i + 1] == "\n":
                    i += 2
                    continue
                i += 1
            continue
        at_line_start = False
        if c == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "/" and i + 1 < n and text[i + 1] == "*":
            end = text.find("*/", i + 2)
            if end < 0:
                raise CSyntaxError(i, {"*/"}, "unterminated comment at byte %d" % i)
            i = end + 2
            continue
        if _is_ident_start(c):
            j = i + 1
            while j < n and _is_ident(text[j]):
                j += 1
            word = text[i:j]
            kind = "keyword" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, i, j))
            i = j
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            i = _lex_number(text, i, tokens)
            continue
        if c == "'":
            i = _lex_char(text, i, tokens)
            continue
        if c == '"':
            i = _lex_string(text, i, tokens)
            continue
        for p in PUNCTS:
            if text.startswith(p, i):
                tokens.append(Token("punct", p, i, i + len(p)))
                i += len(p)
                break
        else:
            raise CSyntaxError(i, set(), "unexpected character %r at byte %d" % (c, i))
    tokens.append(Token("eof", "", n, n))
    return tokens


def _lex_number(text, i, tokens):
    n = len(text)
    j = i
    is_float = False
    if text.startswith(("0x", "0X"), i):
        j = i + 2
        while j < n and (text[j] in "abcdefABCDEF" or text[j].isdigit()):
            j += 1
    else:
        while j < n and text[j].isdigit():
            j += 1
        if j < n and text[j] == ".":
            is_float = True
            j += 1
            while j < n and text[j].isdigit():
                j += 1
        if j < n and text[j] in "eE":
            k = j + 1
            if k < n and text[k] in "+-":
                k += 1
            if k < n and text[k].isdigit():
                is_float = True
                j = k
                while j < n and text[j].isdigit():
                    j += 1
    # suffixes
    while j < n and text[j] in "uUlL":
        j += 1
    if j < n and text[j] in "fF" and is_float:
        j += 1
    tokens.append(Token("float" if is_float else "int", text[i:j], i, j))
    return j


def _lex_char(text, i, tokens):
    n = len(text)
    j = i + 1
    while j < n and text[j] != "'":
        if text[j] == "\\":
            j += 1
        j += 1
    if j >= n:
        raise CSyntaxError(i, {"'"}, "unterminated character literal at byte %d" % i)
    j += 1
    tokens.append(Token("char", text[i:j], i, j))
    return j


def _lex_string(text, i, tokens):
    n = len(text)
    j = i + 1
    while j < n and text[j] != '"':
        if text[j] == "\\":
            j += 1
        j += 1
    if j >= n:
        raise CSyntaxError(i, {'"'}, "unterminated string literal at byte %d" % i)
    j += 1
    tokens.append(Token("string", text[i:j], i, j))
    return j
