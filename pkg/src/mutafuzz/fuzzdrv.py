"""Differential fuzzing driver, seed file, and regression test generation.

Every generated driver follows one shape: load the input file, read the
same bytes into an `origin_` and a `mut_` set of variables, call the
original and the renamed mutated function, byte-compare every parameter
and the return value, and abort on any difference.  The byte protocol is
packed little-endian, one segment per parameter in declaration order,
with pointer parameters contributing their pointee by value.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .errors import InputRangeError, UnsupportedSignature

# Log sentinels parsed by the fuzzer; bit-exact, do not reword.
SENTINEL_ORIGINAL = "Calling the original function"
SENTINEL_MUTATED = "Calling the mutated function"
SENTINEL_KILLED = "Mutant killed"
SENTINEL_ALIVE = "Mutant alive"

MUT_PREFIX = "mut_"

_RUNTIME_DECLS = """\
int load_file(const char *path);
void seek_data_index(unsigned long pos);
void get_value(void *dst, unsigned long size, int reserved);
int compare_value(const void *a, const void *b, unsigned long size);
void log_msg(const char *msg);
void safe_abort(void);
"""


@dataclass(frozen=True)
class InputLayout:
    """Byte layout of one driver input file.

    segments: ordered (param name, TypeDescriptor, offset, size) tuples,
    contiguous from offset 0.  Pointer parameters contribute the pointee.
    """

    segments: tuple
    total_bytes: int


def _value_type(ty):
    """The by-value type a parameter contributes to the input stream."""
    if ty.kind == "pointer-to":
        pointee = ty.pointee
        if pointee.kind == "void":
            raise UnsupportedSignature("void* parameter")
        if pointee.kind == "pointer-to":
            raise UnsupportedSignature("multi-level pointer parameter")
        return pointee
    return ty


def _check_fillable(ty):
    if ty.kind in ("void", "pointer-to", "unresolved"):
        raise UnsupportedSignature("cannot materialize %s value" % ty.kind)
    if ty.kind in ("struct", "array"):
        inner = ty.members if ty.kind == "struct" else ((None, ty.pointee),)
        for _, mty in inner:
            _check_fillable(mty)


def build_layout(sig):
    segments = []
    offset = 0
    for pname, pty in sig.params:
        vty = _value_type(pty)
        _check_fillable(vty)
        segments.append((pname, vty, offset, vty.size_bytes))
        offset += vty.size_bytes
    return InputLayout(tuple(segments), offset)


def spell_type(ty):
    """C spelling for a value type in generated code."""
    if ty.kind == "signed-int":
        return {1: "signed char", 2: "short", 4: "int", 8: "long"}[ty.size_bytes]
    if ty.kind == "unsigned-int":
        return {1: "unsigned char", 2: "unsigned short", 4: "unsigned int",
                8: "unsigned long"}[ty.size_bytes]
    if ty.kind == "float":
        return "float" if ty.size_bytes == 4 else "double"
    if ty.kind == "char":
        return "char"
    if ty.kind == "bool":
        return "_Bool"
    if ty.kind == "enum":
        return ty.name if ty.name else "int"
    if ty.kind == "struct":
        if not ty.name:
            raise UnsupportedSignature("anonymous struct parameter")
        return ty.name
    if ty.kind == "pointer-to":
        return spell_type(ty.pointee) + " *"
    raise UnsupportedSignature("cannot spell type kind %s" % ty.kind)


def _prototype(sig, name):
    if not sig.params:
        plist = "void"
    else:
        plist = ", ".join(
            "%s %s" % (spell_type(ty), pname) for pname, ty in sig.params
        )
    ret = "void" if sig.return_type.kind == "void" else spell_type(sig.return_type)
    return "%s %s(%s);" % (ret, name, plist)


def _call_args(sig, prefix):
    args = []
    for pname, pty in sig.params:
        var = prefix + pname
        args.append("&" + var if pty.kind == "pointer-to" else var)
    return ", ".join(args)


def type_declarations(unit):
    """Source slices of the unit's typedef/struct/enum definitions."""
    parts = []
    for top in unit.ast.children:
        if top.kind in ("typedef", "struct-def", "enum-def"):
            parts.append(unit.text[top.start:top.end])
    return "\n".join(parts)


def rename_functions(unit, prefix=MUT_PREFIX, names=None):
    """Source text with function identifiers prefixed.

    `names` defaults to every function defined or declared in the unit;
    definitions, prototypes, and call sites are all renamed so the
    rewritten unit links alongside the original one.
    """
    if names is None:
        names = {t.name for t in unit.ast.children if t.kind in ("func-def", "func-decl")}
    else:
        names = set(names)
    out = []
    last = 0
    for tok in unit.tokens:
        if tok.kind == "ident" and tok.text in names:
            out.append(unit.text[last:tok.start])
            out.append(prefix + tok.text)
            last = tok.end
    out.append(unit.text[last:])
    return "".join(out)


def _driver_prelude(title, layout, type_decls, prototypes):
    lines = ["/* %s */" % title, ""]
    if type_decls:
        lines += [type_decls, ""]
    lines += list(prototypes)
    lines += ["", _RUNTIME_DECLS]
    lines.append(
        "const unsigned long mutafuzz_required_bytes = %dUL;" % layout.total_bytes
    )
    lines.append("")
    return lines


def _declare_vars(sig, layout, prefixes, body):
    for prefix in prefixes:
        for pname, vty, _off, _size in layout.segments:
            body.append("    %s %s%s;" % (spell_type(vty), prefix, pname))
    if sig.return_type.kind != "void":
        for prefix in prefixes:
            body.append(
                "    %s %sreturn_value;" % (spell_type(sig.return_type), prefix)
            )


def _read_sequence(layout, prefix, body):
    for pname, _vty, _off, _size in layout.segments:
        var = prefix + pname
        body.append("    get_value(&%s, sizeof(%s), 0);" % (var, var))


def _call_line(sig, name, prefix, body):
    call = "%s(%s)" % (name, _call_args(sig, prefix))
    if sig.return_type.kind != "void":
        body.append("    %sreturn_value = %s;" % (prefix, call))
    else:
        body.append("    %s;" % call)


def _compare_sequence(sig, layout, left, right, body):
    for pname, _vty, _off, _size in layout.segments:
        body.append(
            "    ret += compare_value(&%s%s, &%s%s, sizeof(%s%s));"
            % (left, pname, right, pname, left, pname)
        )
    if sig.return_type.kind != "void":
        body.append(
            "    ret += compare_value(&%sreturn_value, &%sreturn_value, "
            "sizeof(%sreturn_value));" % (left, right, left)
        )


def gen_driver(sig, mutant_id, type_decls=""):
    """C source of the differential driver for one mutant.

    The mutated translation unit must have been link-renamed with the
    `mut_` prefix (see rename_functions).
    """
    layout = build_layout(sig)
    protos = [_prototype(sig, sig.name),
              _prototype(sig, MUT_PREFIX + sig.name)]
    lines = _driver_prelude(
        "differential fuzzing driver for mutant %s" % mutant_id,
        layout, type_decls, protos,
    )
    body = ["int main(int argc, char **argv)", "{"]
    _declare_vars(sig, layout, ("origin_", "mut_"), body)
    body.append("    int ret = 0;")
    body.append("")
    body.append("    if (argc < 2) {")
    body.append('        log_msg("missing input file argument");')
    body.append("        return 2;")
    body.append("    }")
    body.append("    load_file(argv[1]);")
    _read_sequence(layout, "origin_", body)
    body.append('    log_msg("%s");' % SENTINEL_ORIGINAL)
    _call_line(sig, sig.name, "origin_", body)
    body.append("    seek_data_index(0);")
    _read_sequence(layout, "mut_", body)
    body.append('    log_msg("%s");' % SENTINEL_MUTATED)
    _call_line(sig, MUT_PREFIX + sig.name, "mut_", body)
    _compare_sequence(sig, layout, "origin_", "mut_", body)
    body.append("    if (ret != 0) {")
    body.append('        log_msg("%s");' % SENTINEL_KILLED)
    body.append("        safe_abort();")
    body.append("    }")
    body.append('    log_msg("%s");' % SENTINEL_ALIVE)
    body.append("    return 0;")
    body.append("}")
    return "\n".join(lines + body) + "\n"


def gen_nondet_driver(sig, type_decls=""):
    """Driver calling the original function twice on the same bytes.

    A clean exit means the outputs matched; an abort means the function
    is non-deterministic and provisional kills must be discarded.
    """
    layout = build_layout(sig)
    comparable = bool(layout.segments) or sig.return_type.kind != "void"
    lines = _driver_prelude(
        "non-determinism check driver for %s" % sig.name,
        layout, type_decls, [_prototype(sig, sig.name)],
    )
    body = ["int main(int argc, char **argv)", "{"]
    _declare_vars(sig, layout, ("first_", "second_"), body)
    body.append("    int ret = 0;")
    body.append("")
    body.append("    if (argc < 2) {")
    body.append('        log_msg("missing input file argument");')
    body.append("        return 2;")
    body.append("    }")
    body.append("    load_file(argv[1]);")
    _read_sequence(layout, "first_", body)
    body.append('    log_msg("%s");' % SENTINEL_ORIGINAL)
    _call_line(sig, sig.name, "first_", body)
    body.append("    seek_data_index(0);")
    _read_sequence(layout, "second_", body)
    body.append('    log_msg("%s");' % SENTINEL_ORIGINAL)
    _call_line(sig, sig.name, "second_", body)
    if comparable:
        _compare_sequence(sig, layout, "first_", "second_", body)
    else:
        body.append('    log_msg("warning: nothing to compare");')
    body.append("    if (ret != 0) {")
    body.append('        log_msg("outputs differ");')
    body.append("        safe_abort();")
    body.append("    }")
    body.append("    return 0;")
    body.append("}")
    return "\n".join(lines + body) + "\n"


def gen_capture_driver(sig, type_decls=""):
    """Driver that records the original function's outputs to a file.

    Runs the original once on argv[1] and writes the post-call bytes of
    every parameter, then the return value, to argv[2].  The concatenated
    bytes are the `expected` blob consumed by gen_unit_test.
    """
    layout = build_layout(sig)
    lines = ["/* output capture driver for %s */" % sig.name, "", "#include <stdio.h>", ""]
    if type_decls:
        lines += [type_decls, ""]
    lines += [_prototype(sig, sig.name), "", _RUNTIME_DECLS]
    lines.append(
        "const unsigned long mutafuzz_required_bytes = %dUL;" % layout.total_bytes
    )
    lines.append("")
    body = ["int main(int argc, char **argv)", "{"]
    _declare_vars(sig, layout, ("origin_",), body)
    body.append("    FILE *out;")
    body.append("")
    body.append("    if (argc < 3) {")
    body.append('        log_msg("usage: capture <input> <output>");')
    body.append("        return 2;")
    body.append("    }")
    body.append("    load_file(argv[1]);")
    _read_sequence(layout, "origin_", body)
    _call_line(sig, sig.name, "origin_", body)
    body.append('    out = fopen(argv[2], "wb");')
    body.append("    if (out == NULL) {")
    body.append("        return 3;")
    body.append("    }")
    for pname, _vty, _off, _size in layout.segments:
        body.append(
            "    fwrite(&origin_%s, sizeof(origin_%s), 1, out);" % (pname, pname)
        )
    if sig.return_type.kind != "void":
        body.append(
            "    fwrite(&origin_return_value, sizeof(origin_return_value), 1, out);"
        )
    body.append("    fclose(out);")
    body.append("    return 0;")
    body.append("}")
    return "\n".join(lines + body) + "\n"


def output_size(sig):
    """Total bytes the capture driver writes for this signature."""
    layout = build_layout(sig)
    n = sum(size for _n, _t, _o, size in layout.segments)
    if sig.return_type.kind != "void":
        n += sig.return_type.size_bytes
    return n


def _byte_array(name, data):
    rows = []
    for i in range(0, len(data), 12):
        rows.append("    " + ", ".join("0x%02x" % b for b in data[i:i + 12]))
    return ("static const unsigned char %s[%d] = {\n%s\n};"
            % (name, len(data), ",\n".join(rows)))


def gen_unit_test(sig, killing_input, expected, type_decls=""):
    """Standalone regression test reproducing a fuzzer kill.

    The killing input bytes and the original function's recorded outputs
    are embedded as arrays; the test feeds the input to the function it
    is linked against and fails (non-zero exit) on any output mismatch.
    """
    layout = build_layout(sig)
    killing_input = bytes(killing_input)[:layout.total_bytes]
    killing_input += b"\x00" * (layout.total_bytes - len(killing_input))
    expected = bytes(expected)
    if len(expected) != output_size(sig):
        raise InputRangeError(
            "expected blob is %d bytes, need %d" % (len(expected), output_size(sig))
        )
    lines = ["/* regression test generated from a killing input for %s */" % sig.name,
             "", "#include <stdio.h>", "#include <string.h>", ""]
    if type_decls:
        lines += [type_decls, ""]
    lines += [_prototype(sig, sig.name), ""]
    if killing_input:
        lines += [_byte_array("test_input", killing_input), ""]
    lines += [_byte_array("test_expected", expected), ""]
    body = ["int main(void)", "{"]
    _declare_vars(sig, layout, ("origin_",), body)
    body.append("    int ret = 0;")
    body.append("")
    for pname, _vty, off, _size in layout.segments:
        body.append(
            "    memcpy(&origin_%s, test_input + %d, sizeof(origin_%s));"
            % (pname, off, pname)
        )
    _call_line(sig, sig.name, "origin_", body)
    out_off = 0
    for pname, _vty, _off, size in layout.segments:
        body.append(
            "    ret += memcmp(&origin_%s, test_expected + %d, sizeof(origin_%s)) != 0;"
            % (pname, out_off, pname)
        )
        out_off += size
    if sig.return_type.kind != "void":
        body.append(
            "    ret += memcmp(&origin_return_value, test_expected + %d, "
            "sizeof(origin_return_value)) != 0;" % out_off
        )
    body.append("    if (ret != 0) {")
    body.append('        fprintf(stderr, "output differs from recorded original'
                ' (%d field(s))\\n", ret);')
    body.append("        return 1;")
    body.append("    }")
    body.append('    puts("ok");')
    body.append("    return 0;")
    body.append("}")
    return "\n".join(lines + body) + "\n"


# seed files ------------------------------------------------------------

SEED_CLASSES = ("zero", "negative", "positive")

_INT_SEEDS = (0, -100, 100)
_FLOAT_SEEDS = (0.0, -3.5, 3.5)
_CHAR_SEEDS = (b"\x00", b"\x80", b"a")


def _seed_bytes(ty, cls):
    """Byte encoding of seed class `cls` (0 zero, 1 negative, 2 positive)."""
    if ty.kind == "char":
        return _CHAR_SEEDS[cls]
    if ty.kind == "float":
        return struct.pack("<f" if ty.size_bytes == 4 else "<d", _FLOAT_SEEDS[cls])
    if ty.kind in ("signed-int", "enum"):
        return _INT_SEEDS[cls].to_bytes(ty.size_bytes, "little", signed=True)
    if ty.kind in ("unsigned-int", "bool"):
        # the negative class wraps to the two's-complement bit pattern
        value = _INT_SEEDS[cls] % (1 << (8 * ty.size_bytes))
        return value.to_bytes(ty.size_bytes, "little")
    if ty.kind == "array":
        return _seed_bytes(ty.pointee, cls) * ty.count
    if ty.kind == "struct":
        buf = bytearray(ty.size_bytes)
        for _mname, mty, off in ty.member_offsets():
            buf[off:off + mty.size_bytes] = _seed_bytes(mty, cls)
        return bytes(buf)
    raise UnsupportedSignature("no seed encoding for type kind %s" % ty.kind)


def gen_seeds(sig):
    """At most three seed files covering zero/negative/positive per parameter."""
    layout = build_layout(sig)
    if layout.total_bytes == 0:
        return [b""]
    files = []
    for cls in range(3):
        buf = bytearray(layout.total_bytes)
        for _pname, vty, off, size in layout.segments:
            buf[off:off + size] = _seed_bytes(vty, cls)
        files.append(bytes(buf))
    return files


# input encoding --------------------------------------------------------

def _encode_scalar(value, ty):
    if ty.kind == "float":
        return struct.pack("<f" if ty.size_bytes == 4 else "<d", float(value))
    if ty.kind == "char":
        if isinstance(value, str):
            if len(value) != 1:
                raise InputRangeError("char value must be one character")
            value = ord(value)
        if not 0 <= int(value) <= 255:
            raise InputRangeError("char value %r out of range" % (value,))
        return bytes([int(value)])
    if ty.kind in ("signed-int", "enum", "unsigned-int", "bool"):
        signed = ty.kind in ("signed-int", "enum")
        try:
            return int(value).to_bytes(ty.size_bytes, "little", signed=signed)
        except OverflowError:
            raise InputRangeError(
                "value %r does not fit in %d byte(s)" % (value, ty.size_bytes)
            ) from None
    if ty.kind in ("struct", "array"):
        data = bytes(value)
        if len(data) != ty.size_bytes:
            raise InputRangeError(
                "aggregate value must be exactly %d bytes" % ty.size_bytes
            )
        return data
    raise UnsupportedSignature("cannot encode type kind %s" % ty.kind)


def encode_input(values, layout):
    """Little-endian packed encoding of one value per layout segment."""
    if len(values) != len(layout.segments):
        raise InputRangeError(
            "expected %d values, got %d" % (len(layout.segments), len(values))
        )
    buf = bytearray(layout.total_bytes)
    for value, (_pname, vty, off, size) in zip(values, layout.segments):
        buf[off:off + size] = _encode_scalar(value, vty)
    return bytes(buf)
