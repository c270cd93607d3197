"""End-to-end pipeline: coverage, mutants, builds, TCE, sampling,
prioritized test execution, likely-equivalence, fuzzing, reporting.

Every stage persists a plain-text manifest under `<workspace>/mutafuzz-out`
so stages can run as independent CLI subcommands and interrupted runs can
resume.  Builds are serialized through the workspace lock; fuzzing
campaigns fan out to a bounded worker pool, one private directory per
mutant.
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
import subprocess
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import buildctl, covtrace, fuzzdrv, fuzzer, mutgen, prioritizer, sampler
from .csubset import extract_signatures, parse
from .errors import (
    BadValue,
    LengthMismatch,
    MissingKey,
    UnknownStatement,
    UnsupportedSignature,
)

OUT_DIR = "mutafuzz-out"

_DEFAULTS = {
    "build.levels": ",".join(buildctl.DEFAULT_LEVELS),
    "build.timeout_s": "300",
    "test.timeout_s": "30",
    "sample.strategy": "none",
    "sample.value": "",
    "sample.w": "0.10",
    "sample.alpha": "0.05",
    "fuzz.budget_s": "10000",
    "fuzz.max_execs": "1000000",
    "fuzz.cc": "",
    "rng_seed": "0",
    "workers": "1",
    "mutants_file": "",
    "runtime.dir": "",
}

_STRATEGIES = (
    "none", "proportional-uniform", "proportional-method", "fixed-size", "fsci"
)


@dataclass
class Config:
    workspace: str
    sources: list  # workspace-relative; the first one is mutated
    tests: list  # shell commands, {binary} placeholder allowed
    build: buildctl.BuildSettings
    mutants_file: str = ""
    strategy: str = "none"
    sample_value: str = ""
    threshold_w: float = 0.10
    alpha: float = 0.05
    budget_s: float = 10000.0
    max_execs: int = 1000000
    cc: str = ""
    runtime_dir: str = ""
    rng_seed: int = 0
    workers: int = 1
    test_timeout_s: float = 30.0

    @property
    def subject(self):
        return self.sources[0]


@dataclass
class Report:
    mutation_score: float
    counts: dict
    statement_coverage: float
    executed_mutants: int
    per_mutant: list
    fsci: dict | None = None


def _parse_lines(path):
    single = {}
    repeated = {"source": [], "test": []}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise BadValue(os.path.basename(path), "not key = value: %r" % line)
            key, value = line.split("=", 1)
            key, value = key.strip(), value.strip()
            if key in repeated:
                repeated[key].append(value)
            else:
                single[key] = value
    return single, repeated


def _number(raw, key, cast, low=None):
    try:
        value = cast(raw)
    except ValueError:
        raise BadValue(key, "not a number: %r" % raw) from None
    if low is not None and value < low:
        raise BadValue(key, "must be >= %s" % low)
    return value


def load_config(path):
    """Parse a line-oriented `key = value` workspace configuration."""
    path = os.path.abspath(path)
    if not os.path.exists(path):
        raise BadValue("config", "no such file: %s" % path)
    workspace = os.path.dirname(path)
    single, repeated = _parse_lines(path)

    for key in ("build.cmd", "build.artifact"):
        if key not in single:
            raise MissingKey(key)
    if not repeated["source"]:
        raise MissingKey("source")
    if not repeated["test"]:
        raise MissingKey("test")

    merged = dict(_DEFAULTS)
    merged.update(single)

    levels = tuple(
        lv.strip() for lv in merged["build.levels"].split(",") if lv.strip()
    )
    if not levels:
        raise BadValue("build.levels", "empty level list")
    build = buildctl.BuildSettings(
        cmd=merged["build.cmd"],
        artifact=merged["build.artifact"],
        levels=levels,
        timeout_s=_number(merged["build.timeout_s"], "build.timeout_s", float, 1),
    )

    strategy = merged["sample.strategy"]
    if strategy not in _STRATEGIES:
        raise BadValue("sample.strategy", "unknown strategy %r" % strategy)
    if strategy in ("proportional-uniform", "proportional-method", "fixed-size") \
            and not merged["sample.value"]:
        raise MissingKey("sample.value")

    config = Config(
        workspace=workspace,
        sources=list(repeated["source"]),
        tests=list(repeated["test"]),
        build=build,
        mutants_file=merged["mutants_file"],
        strategy=strategy,
        sample_value=merged["sample.value"],
        threshold_w=_number(merged["sample.w"], "sample.w", float),
        alpha=_number(merged["sample.alpha"], "sample.alpha", float),
        budget_s=_number(merged["fuzz.budget_s"], "fuzz.budget_s", float, 0),
        max_execs=_number(merged["fuzz.max_execs"], "fuzz.max_execs", int, 0),
        cc=merged["fuzz.cc"],
        runtime_dir=merged["runtime.dir"],
        rng_seed=_number(merged["rng_seed"], "rng_seed", int),
        workers=_number(merged["workers"], "workers", int, 1),
        test_timeout_s=_number(merged["test.timeout_s"], "test.timeout_s", float, 1),
    )
    if not (0 < config.threshold_w < 1):
        raise BadValue("sample.w", "must be in (0, 1)")
    if not (0 < config.alpha < 1):
        raise BadValue("sample.alpha", "must be in (0, 1)")
    for rel in config.sources:
        if not os.path.exists(os.path.join(workspace, rel)):
            raise BadValue("source", "missing file %s" % rel)
    if config.mutants_file and not os.path.exists(
            os.path.join(workspace, config.mutants_file)):
        raise BadValue("mutants_file", "missing file %s" % config.mutants_file)
    if not config.cc:
        config.cc = shutil.which("gcc") or shutil.which("cc") or "cc"
    config.runtime_dir = _resolve_runtime_dir(config.runtime_dir, workspace)
    return config


def _resolve_runtime_dir(configured, workspace):
    """Locate the driver-runtime C sources (a separate support package)."""
    candidates = []
    if configured:
        candidates.append(os.path.join(workspace, configured))
    if os.environ.get("MUTAFUZZ_RUNTIME_DIR"):
        candidates.append(os.environ["MUTAFUZZ_RUNTIME_DIR"])
    candidates.append(os.path.join(workspace, "runtime"))
    # repository checkout layout: <repo>/src/mutafuzz -> <repo>/runtime
    here = os.path.dirname(os.path.abspath(__file__))
    candidates.append(os.path.join(here, "..", "..", "runtime"))
    for cand in candidates:
        if os.path.exists(os.path.join(cand, "mutafuzz_runtime.c")):
            return os.path.abspath(cand)
    if configured:
        raise BadValue("runtime.dir", "mutafuzz_runtime.c not found in %s" % configured)
    raise BadValue(
        "runtime.dir",
        "driver runtime sources not found; set runtime.dir or MUTAFUZZ_RUNTIME_DIR",
    )


def compute_mutation_score(statuses):
    """killed / (total - tce-equivalent - tce-redundant - likely-equivalent
    - compile-failed); an empty denominator counts as a full score."""
    killed = sum(1 for s in statuses if s in ("killed-diff", "killed-crash"))
    excluded = sum(
        1 for s in statuses
        if s in ("tce-equivalent", "tce-redundant", "likely-equivalent",
                 "compile-failed")
    )
    denominator = len(statuses) - excluded
    if denominator == 0:
        warnings.warn("no scorable mutants; reporting a score of 1.0")
        return 1.0
    return killed / denominator


def _atomic_write(path, text):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


class Pipeline:
    """Stage runner over one workspace; every stage is idempotent."""

    def __init__(self, config):
        self.config = config
        self.out = os.path.join(config.workspace, OUT_DIR)
        os.makedirs(self.out, exist_ok=True)
        self.subject_path = os.path.join(config.workspace, config.subject)
        with open(self.subject_path) as fh:
            self.unit = parse(fh.read(), config.subject)
        self.builder = buildctl.Builder(
            config.workspace, config.build, config.subject
        )
        self._matrix = None
        self._mutants = None
        self._fsci = None

    # manifest helpers -------------------------------------------------

    def _path(self, name):
        return os.path.join(self.out, name)

    def save_mutants(self):
        text = "".join(mutgen.manifest_line(m) + "\n" for m in self._mutants)
        _atomic_write(self._path("mutants.tsv"), text)

    def load_mutants(self):
        if self._mutants is None and os.path.exists(self._path("mutants.tsv")):
            with open(self._path("mutants.tsv")) as fh:
                self._mutants = [
                    mutgen.parse_manifest_line(ln) for ln in fh if ln.strip()
                ]
        return self._mutants

    def _ensure_support(self):
        path = self._path("cov_support.c")
        if not os.path.exists(path):
            with open(path, "w") as fh:
                fh.write(covtrace.support_source(covtrace.statement_count(self.unit)))
        return path

    # stage 1: coverage ------------------------------------------------

    def stage_coverage(self):
        cov_path = self._path("coverage.tsv")
        if self._matrix is None and os.path.exists(cov_path):
            with open(cov_path) as fh:
                self._matrix = covtrace.CoverageMatrix.from_text(fh.read())
        if self._matrix is not None:
            return self._matrix
        instrumented = covtrace.instrument(self.unit, mode="statements")
        n = covtrace.statement_count(self.unit)
        support = self._ensure_support()
        level = self.config.build.levels[0]
        digest = self.builder.build(instrumented, level, cov_file=support)
        if not isinstance(digest, str):
            raise BadValue(
                "build.cmd", "instrumented build failed: %s" % digest.diagnostic
            )
        binary = self._path("coverage_bin")
        shutil.copy2(
            os.path.join(self.config.workspace, self.config.build.artifact), binary
        )
        os.chmod(binary, 0o755)
        self._matrix = covtrace.collect(
            binary, self.config.tests, n,
            timeout_s=self.config.test_timeout_s,
            workdir=self.config.workspace,
            source_key=os.path.basename(self.config.subject),
        )
        _atomic_write(cov_path, self._matrix.to_text())
        return self._matrix

    def covered_ordinals(self):
        matrix = self.stage_coverage()
        covered = set()
        for row in matrix.counts:
            for j, c in enumerate(row):
                if c > 0:
                    covered.add(j)
        return covered

    # stage 2: mutant generation ---------------------------------------

    def stage_mutants(self):
        if self.load_mutants() is not None:
            return self._mutants
        covered = self.covered_ordinals()
        points = mutgen.enumerate_points(self.unit, covered)
        self._mutants = mutgen.generate_mutants(self.unit, points)
        self.save_mutants()
        return self._mutants

    # stage 3: builds --------------------------------------------------

    def stage_build(self):
        digests = self._path("digests.txt")
        if os.path.exists(digests):
            return buildctl.read_digests(digests)
        mutants = self.stage_mutants()
        outcomes = [self.builder.build_all_levels("original")]
        for m in mutants:
            outcomes.append(
                self.builder.build_all_levels(m.id, mutgen.materialize(self.unit, m))
            )
        buildctl.write_digests(digests, outcomes)
        return outcomes

    # stage 4: TCE -----------------------------------------------------

    def stage_tce(self):
        mutants = self.stage_mutants()
        outcomes = self.stage_build()
        partition = buildctl.tce_partition(outcomes, self.config.build.levels)
        by_id = {o.mutant_id: o for o in outcomes}
        changed = False
        for m in mutants:
            if m.status != "generated":
                continue
            outcome = by_id.get(m.id)
            if outcome is None or not outcome.compiled_everywhere(
                    self.config.build.levels):
                mutgen.advance_status(m, "compile-failed")
            elif m.id in partition.equivalent:
                mutgen.advance_status(m, "tce-equivalent")
            elif m.id in partition.dropped_redundant():
                mutgen.advance_status(m, "tce-redundant")
            else:
                continue
            changed = True
        if changed:
            self.save_mutants()
        return partition

    # stage 5: sampling ------------------------------------------------

    def stage_sample(self):
        """Batch sampling; the fsci strategy is fused with execution."""
        self.stage_tce()
        mutants = self._mutants
        strategy = self.config.strategy
        if strategy in ("none", "fsci"):
            return mutants
        pool = [m for m in mutants if m.status == "generated"]
        selected = {
            m.id for m in sampler.sample(
                pool, strategy, self.config.sample_value, self.config.rng_seed
            )
        }
        changed = False
        for m in pool:
            if m.id not in selected:
                mutgen.advance_status(m, "sampled-out")
                changed = True
        if changed:
            self.save_mutants()
        return mutants

    # stage 6: prioritized test execution ------------------------------

    def _run_test(self, command, binary):
        """One test against one binary: (outcome kind, exit, stdout digest)."""
        try:
            proc = subprocess.run(
                command.replace("{binary}", binary),
                shell=True, cwd=self.config.workspace,
                capture_output=True, timeout=self.config.test_timeout_s,
            )
        except subprocess.TimeoutExpired:
            return ("timeout", None, None)
        return (
            "done", proc.returncode, hashlib.sha256(proc.stdout).hexdigest()
        )

    def _baseline(self):
        path = self._path("baseline.tsv")
        if os.path.exists(path):
            out = {}
            with open(path) as fh:
                for ln in fh:
                    idx, kind, rc, digest = ln.rstrip("\n").split("\t")
                    out[int(idx)] = (kind, None if rc == "-" else int(rc), digest)
            return out
        binary = os.path.join(self.config.workspace, self.config.build.artifact)
        level = self.config.build.levels[0]
        result = self.builder.build(None, level)
        if not isinstance(result, str):
            raise BadValue("build.cmd", "original build failed")
        out = {}
        lines = []
        for i, cmd in enumerate(self.config.tests):
            out[i] = self._run_test(cmd, binary)
            kind, rc, digest = out[i]
            lines.append(
                "%d\t%s\t%s\t%s" % (i, kind, "-" if rc is None else rc, digest)
            )
        _atomic_write(path, "\n".join(lines) + "\n")
        return out

    def _mutant_binary(self, mutant, instrumented=False):
        """Build one mutant (optionally statement-instrumented) and keep
        the artifact under the output directory."""
        text = mutgen.materialize(self.unit, mutant)
        cov_file = ""
        if instrumented:
            text = covtrace.instrument(parse(text, self.unit.path), "statements")
            cov_file = self._ensure_support()
        digest = self.builder.build(text, self.config.build.levels[0], cov_file)
        if not isinstance(digest, str):
            return None
        dest = self._path(
            "bin_%s%s" % (mutant.id, ".cov" if instrumented else "")
        )
        shutil.copy2(
            os.path.join(self.config.workspace, self.config.build.artifact), dest
        )
        os.chmod(dest, 0o755)
        return dest

    def _suite_verdict(self, mutant, baseline):
        """Run the prioritized covering tests; kill verdict or 'live'."""
        matrix = self.stage_coverage()
        try:
            covering = prioritizer.covering_tests(mutant, matrix)
        except UnknownStatement:
            covering = []
        if not covering:
            return "live"
        binary = self._mutant_binary(mutant)
        if binary is None:
            return "compile-failed"
        ordered = prioritizer.order_tests(covering, matrix)
        for test in ordered:
            idx = self.config.tests.index(test)
            outcome = self._run_test(test, binary)
            if outcome[0] == "done" and outcome[1] is not None and outcome[1] < 0:
                return "killed-crash"
            if outcome != baseline[idx]:
                return "killed-diff"
        return "live"

    def stage_execute(self):
        """Run the existing suite against each mutant in priority order."""
        self.stage_sample()
        mutants = self._mutants
        baseline = self._baseline()
        pool = [m for m in mutants if m.status == "generated"]
        if self.config.strategy == "fsci":
            examined = {}

            def execute(m):
                verdict = self._suite_verdict(m, baseline)
                examined[m.id] = verdict
                return verdict.startswith("killed")

            if pool:
                self._fsci = sampler.fsci(
                    pool, execute,
                    threshold_w=self.config.threshold_w,
                    alpha=self.config.alpha,
                    rng_seed=self.config.rng_seed,
                )
            for m in pool:
                verdict = examined.get(m.id)
                if verdict is None:
                    mutgen.advance_status(m, "sampled-out")
                elif verdict == "live":
                    mutgen.advance_status(m, "live")
                else:
                    mutgen.advance_status(m, verdict)
                self.save_mutants()
        else:
            for m in pool:
                mutgen.advance_status(m, self._suite_verdict(m, baseline))
                self.save_mutants()
        return mutants

    # stage 7: likely-equivalence --------------------------------------

    def _coverage_vector(self, binary, tests):
        n = covtrace.statement_count(self.unit)
        matrix = covtrace.collect(
            binary, tests, n,
            timeout_s=self.config.test_timeout_s,
            workdir=self.config.workspace,
            source_key=os.path.basename(self.config.subject),
        )
        return [c for row in matrix.counts for c in row]

    def stage_equiv(self):
        """Flag mutants whose coverage vectors, concatenated
        over their covering tests, are exactly parallel to the original's."""
        self.stage_execute()
        matrix = self.stage_coverage()
        changed = False
        for m in self._mutants:
            if m.status != "live":
                continue
            try:
                covering = prioritizer.covering_tests(m, matrix)
            except UnknownStatement:
                covering = []
            if not covering:
                continue
            binary = self._mutant_binary(m, instrumented=True)
            if binary is None:
                continue
            original_vec = [c for t in covering for c in matrix.row(t)]
            mutant_vec = self._coverage_vector(binary, covering)
            try:
                parallel = prioritizer.likely_equivalent(original_vec, mutant_vec)
            except LengthMismatch:
                parallel = False
            if parallel:
                mutgen.advance_status(m, "likely-equivalent")
                changed = True
        if changed:
            self.save_mutants()
        return self._mutants

    # stage 8: fuzzing campaigns ---------------------------------------

    def _kill_targets(self):
        if not self.config.mutants_file:
            return None
        path = os.path.join(self.config.workspace, self.config.mutants_file)
        with open(path) as fh:
            return {ln.strip() for ln in fh if ln.strip()}

    def _cc_compile(self, out_path, sources):
        srcs = []
        for i, text in enumerate(sources):
            p = out_path + ".src%d.c" % i
            with open(p, "w") as fh:
                fh.write(text)
            srcs.append(p)
        proc = subprocess.run(
            [self.config.cc, "-O1", "-o", out_path] + srcs
            + [os.path.join(self.config.runtime_dir, "mutafuzz_runtime.c")],
            capture_output=True,
        )
        return out_path if proc.returncode == 0 else None

    def _campaign_sources(self, mutant, sig):
        type_decls = fuzzdrv.type_declarations(self.unit)
        original_text = fuzzdrv.rename_functions(
            self.unit, prefix="orig_entry_", names=("main",)
        )
        mutant_unit = parse(mutgen.materialize(self.unit, mutant), self.unit.path)
        renamed = fuzzdrv.rename_functions(mutant_unit)
        instrumented = covtrace.instrument(parse(renamed, self.unit.path), "edges")
        # driver builds link the subject unit only; the harness sources
        # carry their own main and never enter the fuzzing binaries
        driver = [
            fuzzdrv.gen_driver(sig, mutant.id, type_decls),
            original_text, instrumented, covtrace.support_source(1),
        ]
        nondet = [fuzzdrv.gen_nondet_driver(sig, type_decls), original_text]
        return driver, nondet

    def _fuzz_one(self, mutant):
        """One campaign; returns (mutant, CampaignResult or None, note)."""
        sig = next(
            (s for s in extract_signatures(self.unit) if s.name == mutant.function),
            None,
        )
        if sig is None:
            return mutant, None, "no signature for %s" % mutant.function
        campaign_dir = self._path(os.path.join("fuzz", mutant.id))
        os.makedirs(campaign_dir, exist_ok=True)
        try:
            driver_srcs, nondet_srcs = self._campaign_sources(mutant, sig)
            seeds = fuzzdrv.gen_seeds(sig)
        except UnsupportedSignature as exc:
            return mutant, None, "unsupported signature: %s" % exc
        driver = self._cc_compile(os.path.join(campaign_dir, "driver"), driver_srcs)
        nondet = self._cc_compile(os.path.join(campaign_dir, "nondet"), nondet_srcs)
        if driver is None or nondet is None:
            return mutant, None, "driver build failed"
        for i, seed in enumerate(seeds):
            with open(os.path.join(campaign_dir, "seed_%d.bin" % (i + 1)), "wb") as fh:
                fh.write(seed)
        result = fuzzer.run_campaign(
            driver, nondet, seeds,
            fuzzer.Budget(self.config.budget_s, self.config.max_execs),
            mutant_id=mutant.id, campaign_dir=campaign_dir,
            rng_seed=self.config.rng_seed,
        )
        note = ""
        if result.verdict.startswith("killed"):
            note = self._emit_unit_test(mutant, sig, result.killing_input)
        return mutant, result, note

    def _emit_unit_test(self, mutant, sig, killing_input):
        tests_dir = self._path("tests")
        os.makedirs(tests_dir, exist_ok=True)
        capture_dir = self._path(os.path.join("fuzz", mutant.id))
        type_decls = fuzzdrv.type_declarations(self.unit)
        original_text = fuzzdrv.rename_functions(
            self.unit, prefix="orig_entry_", names=("main",)
        )
        capture = self._cc_compile(
            os.path.join(capture_dir, "capture"),
            [fuzzdrv.gen_capture_driver(sig, type_decls), original_text],
        )
        if capture is None:
            return "capture build failed"
        input_path = os.path.join(capture_dir, "killing_input.bin")
        expected_path = os.path.join(capture_dir, "expected.bin")
        with open(input_path, "wb") as fh:
            fh.write(killing_input)
        proc = subprocess.run(
            [capture, input_path, expected_path], capture_output=True, timeout=10
        )
        if proc.returncode != 0:
            return "capture run failed"
        with open(expected_path, "rb") as fh:
            expected = fh.read()
        test_path = os.path.join(tests_dir, "test_%s.c" % mutant.id)
        with open(test_path, "w") as fh:
            fh.write(fuzzdrv.gen_unit_test(sig, killing_input, expected, type_decls))
        return "unit test %s" % os.path.relpath(test_path, self.config.workspace)

    def stage_fuzz(self, only=None):
        self.stage_equiv()
        targets = self._kill_targets()
        if only is not None:
            targets = set(only) if targets is None else targets & set(only)
        pool = [
            m for m in self._mutants
            if m.status == "live" and (targets is None or m.id in targets)
        ]
        notes = {}
        if pool:
            with ThreadPoolExecutor(max_workers=self.config.workers) as pool_exec:
                for mutant, result, note in pool_exec.map(self._fuzz_one, pool):
                    if result is not None and result.verdict.startswith("killed"):
                        mutgen.advance_status(mutant, result.verdict)
                    notes[mutant.id] = note
            self.save_mutants()
        if notes:
            lines = ["%s\t%s" % (mid, note) for mid, note in sorted(notes.items())]
            _atomic_write(self._path("fuzz_notes.tsv"), "\n".join(lines) + "\n")
        return self._mutants

    # stage 9: report --------------------------------------------------

    def stage_report(self):
        self.stage_fuzz()
        mutants = self._mutants
        statuses = [m.status for m in mutants]
        counts = {s: statuses.count(s) for s in mutgen.STATUSES}
        executed = sum(
            1 for s in statuses
            if s in ("live", "killed-diff", "killed-crash", "likely-equivalent")
        )
        n = covtrace.statement_count(self.unit)
        coverage = len(self.covered_ordinals()) / n if n else 0.0
        report = Report(
            mutation_score=compute_mutation_score(statuses),
            counts=counts,
            statement_coverage=coverage,
            executed_mutants=executed,
            per_mutant=[
                {"id": m.id, "operator": m.operator, "function": m.function,
                 "statement": m.statement_ordinal, "status": m.status}
                for m in mutants
            ],
        )
        if self._fsci is not None:
            report.fsci = {
                "examined": len(self._fsci.examined),
                "estimate": self._fsci.estimate,
                "interval": [self._fsci.interval.lower, self._fsci.interval.upper],
                "stopped_by": self._fsci.stopped_by,
            }
        _atomic_write(
            self._path("report.json"),
            json.dumps(
                {
                    "mutation_score": report.mutation_score,
                    "counts": report.counts,
                    "statement_coverage": report.statement_coverage,
                    "executed_mutants": report.executed_mutants,
                    "per_mutant": report.per_mutant,
                    "fsci": report.fsci,
                },
                indent=2,
            ) + "\n",
        )
        return report


def run_pipeline(config):
    return Pipeline(config).stage_report()


def summarize(report):
    lines = [
        "mutation score: %.4f" % report.mutation_score,
        "statement coverage: %.4f" % report.statement_coverage,
        "executed mutants: %d" % report.executed_mutants,
    ]
    for status in mutgen.STATUSES:
        lines.append("  %-17s %d" % (status, report.counts.get(status, 0)))
    if report.fsci:
        lines.append(
            "fsci: examined=%d estimate=%.4f interval=[%.4f, %.4f] (%s)"
            % (report.fsci["examined"], report.fsci["estimate"],
               report.fsci["interval"][0], report.fsci["interval"][1],
               report.fsci["stopped_by"])
        )
    return "\n".join(lines)
