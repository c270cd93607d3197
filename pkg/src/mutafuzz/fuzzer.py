"""Embedded coverage-guided grey-box fuzzer.

One campaign targets one mutant: the differential driver binary is run
on mutated input files, edge-coverage fingerprints gate corpus growth,
and the driver's abort/crash protocol signals kills.  Provisional kills
are confirmed with the non-determinism check driver before they count.
"""

from __future__ import annotations

import os
import random
import signal as _signal
import subprocess
import time
from dataclasses import dataclass, field

from .covtrace import EDGE_FILE_ENV, LOG_FILE_ENV, read_edge_map
from .errors import CounterFileMissing
from .fuzzdrv import SENTINEL_ALIVE, SENTINEL_KILLED, SENTINEL_MUTATED

STAGES = (
    "bitflip",
    "byteflip",
    "arith8",
    "arith16",
    "arith32",
    "interesting",
    "havoc",
    "splice",
)

INTERESTING_VALUES = (
    0, 1, -1, 127, -128, 255, 32767, -32768, 2 ** 31 - 1, -(2 ** 31)
)

MAX_INPUT_BYTES = 4096

_BASE_ENERGY = 8
_MAX_ENERGY = 16


@dataclass
class Budget:
    max_seconds: float
    max_execs: int


@dataclass
class CorpusEntry:
    id: int
    bytes: bytes
    parent: int | None
    fingerprint: frozenset
    energy: int = _BASE_ENERGY


@dataclass
class CampaignResult:
    mutant_id: str
    verdict: str  # killed-diff | killed-crash | live | not-run
    killing_input: bytes | None = None
    executions: int = 0
    unique_fingerprints: int = 0
    wall_time_s: float = 0.0


# input mutation --------------------------------------------------------

def _clamp(data):
    if not data:
        return b"\x00"
    return data[:MAX_INPUT_BYTES]


def _bitflip(data, rng):
    buf = bytearray(data)
    bit = rng.randrange(len(buf) * 8)
    buf[bit // 8] ^= 1 << (bit % 8)
    return bytes(buf)


def _byteflip(data, rng):
    buf = bytearray(data)
    buf[rng.randrange(len(buf))] ^= 0xFF
    return bytes(buf)


def _arith(data, rng, width):
    if len(data) < width:
        return _bitflip(data, rng)
    buf = bytearray(data)
    off = rng.randrange(len(buf) - width + 1)
    delta = rng.randrange(1, 36) * rng.choice((1, -1))
    value = int.from_bytes(buf[off:off + width], "little")
    value = (value + delta) % (1 << (8 * width))
    buf[off:off + width] = value.to_bytes(width, "little")
    return bytes(buf)


def _interesting(data, rng):
    value = rng.choice(INTERESTING_VALUES)
    widths = [
        w for w in (1, 2, 4)
        if w <= len(data) and -(1 << (8 * w - 1)) <= value < (1 << (8 * w))
    ]
    if not widths:
        return _bitflip(data, rng)
    width = rng.choice(widths)
    buf = bytearray(data)
    # aligned offsets only
    off = rng.randrange((len(buf) - width) // width + 1) * width
    buf[off:off + width] = (value % (1 << (8 * width))).to_bytes(width, "little")
    return bytes(buf)


def _havoc(data, rng):
    buf = data
    for _ in range(1 << rng.randrange(1, 4)):
        op = rng.randrange(6)
        if op == 0:
            buf = _bitflip(buf, rng)
        elif op == 1:
            buf = _byteflip(buf, rng)
        elif op == 2:
            buf = _arith(buf, rng, rng.choice((1, 2, 4)))
        elif op == 3:
            buf = _interesting(buf, rng)
        elif op == 4 and len(buf) < MAX_INPUT_BYTES:
            start = rng.randrange(len(buf))
            end = min(len(buf), start + rng.randrange(1, 17))
            pos = rng.randrange(len(buf) + 1)
            buf = _clamp(buf[:pos] + buf[start:end] + buf[pos:])
        elif len(buf) > 1:
            start = rng.randrange(len(buf))
            end = min(len(buf), start + rng.randrange(1, 17))
            buf = buf[:start] + buf[end:] or b"\x00"
    return _clamp(buf)


def _splice(data, rng, other):
    if other is None or not other:
        return _havoc(data, rng)
    cut_a = rng.randrange(1, len(data) + 1)
    cut_b = rng.randrange(len(other))
    return _clamp(data[:cut_a] + other[cut_b:])


def mutate_input(data, rng, stage, other=None):
    """One mutated child of `data`; deterministic given the rng state."""
    data = _clamp(data)
    if stage == "bitflip":
        return _bitflip(data, rng)
    if stage == "byteflip":
        return _byteflip(data, rng)
    if stage == "arith8":
        return _arith(data, rng, 1)
    if stage == "arith16":
        return _arith(data, rng, 2)
    if stage == "arith32":
        return _arith(data, rng, 4)
    if stage == "interesting":
        return _interesting(data, rng)
    if stage == "havoc":
        return _havoc(data, rng)
    if stage == "splice":
        return _splice(data, rng, other)
    raise ValueError("unknown stage: %s" % stage)


# execution and classification ------------------------------------------

def classify_execution(exit_code, sig, log_text):
    """Map one driver run to a verdict.

    Verdicts: killed-diff, killed-crash, live, inconclusive, timeout.
    A missing log is inconclusive; timeouts never count as kills.
    """
    if exit_code is None and sig is None:
        return "timeout"
    log_text = log_text or ""
    if sig == _signal.SIGABRT and SENTINEL_KILLED in log_text:
        return "killed-diff"
    if sig is not None:
        if (SENTINEL_MUTATED in log_text
                and SENTINEL_ALIVE not in log_text
                and SENTINEL_KILLED not in log_text):
            return "killed-crash"
        return "inconclusive"
    if exit_code == 0 and SENTINEL_ALIVE in log_text:
        return "live"
    return "inconclusive"


@dataclass
class _Execution:
    verdict: str
    fingerprint: frozenset | None


class _Runner:
    """Runs one binary on input files with private log and edge files."""

    def __init__(self, binary, workdir, timeout_s):
        self.binary = os.path.abspath(binary)
        self.workdir = workdir
        self.timeout_s = timeout_s
        self.input_path = os.path.join(workdir, "cur_input.bin")
        self.log_path = os.path.join(workdir, "cur_log.txt")
        self.edge_path = os.path.join(workdir, "cur_edges.bin")

    def run_raw(self, data):
        with open(self.input_path, "wb") as fh:
            fh.write(data)
        for p in (self.log_path, self.edge_path):
            if os.path.exists(p):
                os.unlink(p)
        env = dict(os.environ)
        env[LOG_FILE_ENV] = self.log_path
        env[EDGE_FILE_ENV] = self.edge_path
        try:
            proc = subprocess.run(
                [self.binary, self.input_path],
                cwd=self.workdir, env=env,
                stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
                timeout=self.timeout_s,
            )
            rc = proc.returncode
            exit_code, sig = (rc, None) if rc >= 0 else (None, -rc)
        except subprocess.TimeoutExpired:
            exit_code, sig = None, None
        log_text = ""
        if os.path.exists(self.log_path):
            with open(self.log_path, "r", errors="replace") as fh:
                log_text = fh.read()
        return exit_code, sig, log_text

    def execute(self, data):
        exit_code, sig, log_text = self.run_raw(data)
        try:
            fingerprint = read_edge_map(self.edge_path).fingerprint
        except CounterFileMissing:
            fingerprint = None
        return _Execution(classify_execution(exit_code, sig, log_text), fingerprint)


def confirm_kill(nondet_binary, data, workdir=None, timeout_s=1.0):
    """True iff two original runs on `data` produced identical outputs."""
    workdir = workdir or os.getcwd()
    runner = _Runner(nondet_binary, workdir, timeout_s)
    exit_code, _sig, _log = runner.run_raw(data)
    return exit_code == 0


# campaign --------------------------------------------------------------

@dataclass
class _CampaignState:
    corpus: list = field(default_factory=list)
    seen_pairs: set = field(default_factory=set)
    fingerprints: set = field(default_factory=set)
    bucket_freq: dict = field(default_factory=dict)
    next_id: int = 0

    def admit(self, data, fingerprint, parent, out_dir):
        """Admit `data` if its fingerprint brings new (bucket, class) pairs."""
        if fingerprint is None:
            return None
        if fingerprint:
            self.fingerprints.add(fingerprint)
        novel = fingerprint - self.seen_pairs
        if not novel and self.corpus:
            return None
        self.seen_pairs |= fingerprint
        for bucket, _cls in fingerprint:
            self.bucket_freq[bucket] = self.bucket_freq.get(bucket, 0) + 1
        entry = CorpusEntry(self.next_id, data, parent, fingerprint)
        self.next_id += 1
        self.corpus.append(entry)
        if out_dir:
            with open(os.path.join(out_dir, "%06d.bin" % entry.id), "wb") as fh:
                fh.write(data)
        return entry

    def energy(self, entry):
        rare = any(self.bucket_freq.get(b, 0) <= 1 for b, _ in entry.fingerprint)
        return min(_MAX_ENERGY, _BASE_ENERGY * 2) if rare else _BASE_ENERGY


def _write_stats(campaign_dir, result):
    with open(os.path.join(campaign_dir, "stats.txt"), "w") as fh:
        fh.write("execs=%d\n" % result.executions)
        fh.write("unique_fingerprints=%d\n" % result.unique_fingerprints)
        fh.write("verdict=%s\n" % result.verdict)
        fh.write("wall_time_s=%.3f\n" % result.wall_time_s)


def run_campaign(driver_binary, nondet_binary, seeds, budget, mutant_id="",
                 campaign_dir=None, rng_seed=0, exec_timeout_s=1.0,
                 keep_going=False):
    """Fuzz one mutant until a confirmed kill or budget exhaustion."""
    rng = random.Random(rng_seed)
    start = time.monotonic()
    campaign_dir = campaign_dir or os.getcwd()
    corpus_dir = os.path.join(campaign_dir, "corpus")
    kills_dir = os.path.join(campaign_dir, "kills")
    os.makedirs(corpus_dir, exist_ok=True)
    os.makedirs(kills_dir, exist_ok=True)

    state = _CampaignState()
    runner = _Runner(driver_binary, campaign_dir, exec_timeout_s)
    result = CampaignResult(mutant_id, "not-run")

    def finish(verdict, killing=None):
        result.verdict = verdict
        result.killing_input = killing
        result.unique_fingerprints = len(state.fingerprints)
        result.wall_time_s = time.monotonic() - start
        _write_stats(campaign_dir, result)
        return result

    def out_of_budget():
        return (result.executions >= budget.max_execs
                or time.monotonic() - start >= budget.max_seconds)

    def try_input(data, parent):
        """Execute one input; returns a confirmed-kill verdict or None."""
        execution = runner.execute(data)
        result.executions += 1
        state.admit(data, execution.fingerprint, parent, corpus_dir)
        if execution.verdict in ("killed-diff", "killed-crash"):
            confirmed = confirm_kill(
                nondet_binary, data, campaign_dir, exec_timeout_s
            )
            result.executions += 1
            if confirmed:
                with open(os.path.join(kills_dir, "kill_%06d.bin"
                                       % result.executions), "wb") as fh:
                    fh.write(data)
                return execution.verdict
        return None

    if budget.max_execs <= 0 or budget.max_seconds <= 0:
        return finish("not-run")

    # seed dry run
    for i, seed in enumerate(seeds):
        if out_of_budget():
            break
        try:
            kill = try_input(seed, None)
        except OSError:
            return finish("not-run")
        if kill and not keep_going:
            return finish(kill, seed)
        if i == 0 and not state.corpus:
            # no edge fingerprint from the very first seed: the driver is
            # not runnable (or not instrumented), so the campaign is moot
            return finish("not-run")

    if not state.corpus:
        return finish("not-run")

    # main loop
    first_kill = None
    stage_idx = 0
    while not out_of_budget():
        weights = [state.energy(e) for e in state.corpus]
        entry = rng.choices(state.corpus, weights=weights)[0]
        for _ in range(state.energy(entry)):
            if out_of_budget():
                break
            stage = STAGES[stage_idx % len(STAGES)]
            stage_idx += 1
            other = None
            if stage == "splice" and len(state.corpus) > 1:
                other = rng.choice(
                    [e for e in state.corpus if e.id != entry.id]
                ).bytes
            child = mutate_input(entry.bytes, rng, stage, other)
            kill = try_input(child, entry.id)
            if kill:
                if not keep_going:
                    return finish(kill, child)
                if first_kill is None:
                    first_kill = (kill, child)

    if first_kill is not None:
        return finish(first_kill[0], first_kill[1])
    return finish("live")
