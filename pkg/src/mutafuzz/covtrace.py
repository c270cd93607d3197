"""Source-level coverage: statement hit counts and edge-coverage probes.

Probes are plain calls in the mfcov_ namespace so instrumented sources
still parse under the subset (the parser excludes that namespace from the
statement index).  A generated companion C file provides the counters and
flushes them to a binary file at process exit and on fatal signals.

Counter file layout (little endian): magic "MFCV", u32 version=1, u32 n,
then n u64 counts.  Statement counters go to $MUTAFUZZ_COV_FILE, edge
buckets (65536 of them) to $MUTAFUZZ_EDGE_FILE.
"""

from __future__ import annotations

import os
import struct
import subprocess
from dataclasses import dataclass

from .errors import CounterFileMissing

COUNTER_MAGIC = b"MFCV"
COUNTER_VERSION = 1
EDGE_BUCKETS = 65536

COV_FILE_ENV = "MUTAFUZZ_COV_FILE"
EDGE_FILE_ENV = "MUTAFUZZ_EDGE_FILE"
LOG_FILE_ENV = "MUTAFUZZ_LOG_FILE"

# AFL-style count classes: 1, 2, 3, 4-7, 8-15, 16-31, 32-127, 128+
_CLASS_BOUNDS = (1, 2, 3, 7, 15, 31, 127)


def count_class(count):
    if count <= 0:
        return -1
    for cls, bound in enumerate(_CLASS_BOUNDS):
        if count <= bound:
            return cls
    return len(_CLASS_BOUNDS)


@dataclass(frozen=True)
class EdgeMap:
    buckets: tuple

    @property
    def fingerprint(self):
        return frozenset(
            (i, count_class(c)) for i, c in enumerate(self.buckets) if c > 0
        )


@dataclass
class CoverageMatrix:
    tests: list  # ordered test ids
    statements: list  # ordered (file, statement ordinal) keys
    counts: list  # tests x statements nested lists

    def row(self, test_id):
        return self.counts[self.tests.index(test_id)]

    def column(self, key):
        j = self.statements.index(key)
        return [row[j] for row in self.counts]

    def to_text(self):
        lines = ["test\t" + "\t".join("%s:%d" % k for k in self.statements)]
        for tid, row in zip(self.tests, self.counts):
            lines.append(tid + "\t" + "\t".join(str(c) for c in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = lines[0].split("\t")[1:]
        statements = []
        for key in header:
            path, ordinal = key.rsplit(":", 1)
            statements.append((path, int(ordinal)))
        tests, counts = [], []
        for ln in lines[1:]:
            cells = ln.split("\t")
            tests.append(cells[0])
            counts.append([int(c) for c in cells[1:]])
        return cls(tests, statements, counts)


def write_counter_file(path, counts):
    with open(path, "wb") as fh:
        fh.write(COUNTER_MAGIC)
        fh.write(struct.pack("<II", COUNTER_VERSION, len(counts)))
        fh.write(struct.pack("<%dQ" % len(counts), *counts))


def read_counter_file(path):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except FileNotFoundError:
        raise CounterFileMissing(path)
    if data[:4] != COUNTER_MAGIC:
        raise CounterFileMissing("bad magic in %s" % path)
    version, n = struct.unpack_from("<II", data, 4)
    if version != COUNTER_VERSION:
        raise CounterFileMissing("unsupported version %d in %s" % (version, path))
    return list(struct.unpack_from("<%dQ" % n, data, 12))


def read_edge_map(path):
    return EdgeMap(tuple(read_counter_file(path)))


def instrument(unit, mode="statements"):
    """Source text with statement and/or edge probes injected.

    Single-statement bodies of if/while/for get block-wrapped so a probe
    can legally precede them.
    """
    if mode not in ("statements", "edges", "both"):
        raise ValueError("bad mode: %s" % mode)
    insertions = []  # (offset, order, text)

    if mode in ("statements", "both"):
        wrapped = _wrappable_bodies(unit)
        for ordinal, stmt in enumerate(unit.statements):
            probe = "mfcov_hit(%d); " % ordinal
            if stmt.span in wrapped:
                insertions.append((stmt.start, 0, "{ " + probe))
                insertions.append((stmt.end, 2, " }"))
            else:
                insertions.append((stmt.start, 1, probe))
    if mode in ("edges", "both"):
        block_id = 0
        for top in unit.ast.children:
            if top.kind != "func-def":
                continue
            for node in _walk_blocks(top.children[-1]):
                insertions.append((node.start + 1, 1, " mfcov_edge(%d);" % block_id))
                block_id += 1

    prelude = "void mfcov_hit(unsigned long idx);\nvoid mfcov_edge(unsigned long block);\n"
    out = []
    last = 0
    for off, _order, text in sorted(insertions, key=lambda t: (t[0], t[1])):
        out.append(unit.text[last:off])
        out.append(text)
        last = off
    out.append(unit.text[last:])
    return prelude + "".join(out)


def _walk_blocks(stmt):
    if stmt.kind == "block":
        yield stmt
        for s in stmt.children:
            yield from _walk_blocks(s)
    elif stmt.kind == "if":
        yield from _walk_blocks(stmt.children[1])
        if len(stmt.children) == 3:
            yield from _walk_blocks(stmt.children[2])
    elif stmt.kind in ("while", "for"):
        yield from _walk_blocks(stmt.children[-1])


def _wrappable_bodies(unit):
    """Spans of statements that are non-block bodies of if/while/for/else."""
    spans = set()

    def visit(stmt):
        if stmt.kind == "block":
            for s in stmt.children:
                visit(s)
            return
        bodies = []
        if stmt.kind == "if":
            bodies = stmt.children[1:]
        elif stmt.kind in ("while", "for"):
            bodies = [stmt.children[-1]]
        for b in bodies:
            if b.kind != "block":
                spans.add(b.span)
            visit(b)

    for top in unit.ast.children:
        if top.kind == "func-def":
            visit(top.children[-1])
    return spans


def statement_count(unit):
    return len(unit.statements)


def support_source(n_statements):
    """Companion C file backing the probes (plain C, outside the subset)."""
    return _SUPPORT_TEMPLATE % {"n": max(1, n_statements), "edges": EDGE_BUCKETS}


_SUPPORT_TEMPLATE = r"""
/* coverage counter support, generated */
#include <stdio.h>
#include <stdlib.h>
#include <signal.h>
#include <string.h>

#define MFCOV_NSTMT %(n)du
#define MFCOV_NEDGE %(edges)du

static unsigned long long mfcov_stmt[MFCOV_NSTMT];
static unsigned long long mfcov_edges[MFCOV_NEDGE];
static unsigned long mfcov_prev;
static int mfcov_ready;
static int mfcov_stmt_used;
static int mfcov_edge_used;

static void mfcov_write(const char *path, unsigned long long *v, unsigned long n) {
    FILE *fh = fopen(path, "wb");
    unsigned long i;
    unsigned char hdr[12];
    if (!fh) return;
    memcpy(hdr, "MFCV", 4);
    hdr[4] = 1; hdr[5] = 0; hdr[6] = 0; hdr[7] = 0;
    hdr[8] = (unsigned char)(n & 0xff);
    hdr[9] = (unsigned char)((n >> 8) & 0xff);
    hdr[10] = (unsigned char)((n >> 16) & 0xff);
    hdr[11] = (unsigned char)((n >> 24) & 0xff);
    fwrite(hdr, 1, 12, fh);
    for (i = 0; i < n; i++) {
        unsigned char b[8];
        int j;
        for (j = 0; j < 8; j++) b[j] = (unsigned char)((v[i] >> (8 * j)) & 0xff);
        fwrite(b, 1, 8, fh);
    }
    fclose(fh);
}

static void mfcov_flush(void) {
    const char *p;
    if (mfcov_stmt_used) {
        p = getenv("MUTAFUZZ_COV_FILE");
        mfcov_write(p ? p : "mutafuzz.cov", mfcov_stmt, MFCOV_NSTMT);
    }
    if (mfcov_edge_used) {
        p = getenv("MUTAFUZZ_EDGE_FILE");
        mfcov_write(p ? p : "mutafuzz.edge", mfcov_edges, MFCOV_NEDGE);
    }
}

static void mfcov_on_signal(int sig) {
    mfcov_flush();
    signal(sig, SIG_DFL);
    raise(sig);
}

static void mfcov_init(void) {
    if (mfcov_ready) return;
    mfcov_ready = 1;
    atexit(mfcov_flush);
    signal(SIGABRT, mfcov_on_signal);
    signal(SIGSEGV, mfcov_on_signal);
    signal(SIGFPE, mfcov_on_signal);
    signal(SIGILL, mfcov_on_signal);
    signal(SIGBUS, mfcov_on_signal);
}

void mfcov_hit(unsigned long idx) {
    mfcov_init();
    mfcov_stmt_used = 1;
    if (idx < MFCOV_NSTMT) mfcov_stmt[idx]++;
}

void mfcov_edge(unsigned long block) {
    mfcov_init();
    mfcov_edge_used = 1;
    mfcov_edges[((mfcov_prev << 1) ^ block) %% MFCOV_NEDGE]++;
    mfcov_prev = block;
}
"""


def collect(binary, tests, n_statements, timeout_s=30.0, workdir=None,
            source_key=None):
    """Run each test command against the instrumented binary and build a
    CoverageMatrix of per-test statement counts.

    Commands may reference the binary via a {binary} placeholder.  Rows
    for timed-out tests hold whatever the process flushed (all zeros if
    nothing was written).
    """
    binary = os.path.abspath(binary)
    workdir = workdir or os.path.dirname(binary)
    source_key = source_key or os.path.basename(binary)
    rows = []
    for i, cmd in enumerate(tests):
        rows.append(run_with_counters(
            cmd.replace("{binary}", binary), n_statements,
            timeout_s=timeout_s, workdir=workdir, tag=str(i)))
    matrix = CoverageMatrix(
        tests=list(tests),
        statements=[(source_key, j) for j in range(n_statements)],
        counts=rows,
    )
    return matrix


def run_with_counters(command, n_statements, timeout_s=30.0, workdir=None,
                      tag="0", env_extra=None):
    """Run one shell command with a private counter file; return counts."""
    workdir = workdir or os.getcwd()
    cov_path = os.path.join(workdir, ".cov.%s.bin" % tag)
    if os.path.exists(cov_path):
        os.unlink(cov_path)
    env = dict(os.environ)
    env[COV_FILE_ENV] = cov_path
    if env_extra:
        env.update(env_extra)
    timed_out = False
    try:
        subprocess.run(
            command, shell=True, cwd=workdir, env=env,
            stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
            timeout=timeout_s,
        )
    except subprocess.TimeoutExpired:
        timed_out = True
    try:
        counts = read_counter_file(cov_path)
        os.unlink(cov_path)
    except CounterFileMissing:
        if not timed_out:
            raise
        counts = [0] * n_statements  # killed before any flush
    return counts
