"""External compilation with in-place file swapping, plus TCE dedup.

Mutant builds reuse the project's own incremental build: the mutated file
temporarily replaces the original inside the workspace, the build command
runs, the artifact is hashed, and the original bytes are restored no
matter how the build ends.  The swap makes builds inherently serial, so
every build call runs under an exclusive workspace lock.
"""

from __future__ import annotations

import hashlib
import os
import shlex
import shutil
import subprocess
from dataclasses import dataclass, field

from filelock import FileLock

from .errors import (
    BuildTimeout,
    BuildToolMissing,
    MissingLevel,
    WorkspaceDirty,
)

DEFAULT_LEVELS = ("O0", "O1", "O2", "O3", "Ofast", "Os")


@dataclass
class BuildSettings:
    cmd: str  # shell template; {level} is substituted, {cov} optional
    artifact: str  # workspace-relative path of the produced executable
    levels: tuple = DEFAULT_LEVELS
    timeout_s: float = 300.0


@dataclass(frozen=True)
class BuildFailure:
    exit_code: int
    diagnostic: str


@dataclass
class BuildOutcome:
    mutant_id: str  # or "original"
    per_level: dict = field(default_factory=dict)  # level -> hex digest | BuildFailure

    def compiled_everywhere(self, levels):
        return all(isinstance(self.per_level.get(lv), str) for lv in levels)


@dataclass(frozen=True)
class TcePartition:
    equivalent: frozenset
    redundant_groups: tuple  # of frozensets, each size >= 2
    unique: frozenset

    def representatives(self):
        """One surviving id per redundant group (lowest id)."""
        return {min(g) for g in self.redundant_groups}

    def dropped_redundant(self):
        out = set()
        for g in self.redundant_groups:
            out |= set(g) - {min(g)}
        return out


def sha512_file(path):
    h = hashlib.sha512()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


class Builder:
    """Serialized builds of one workspace source file and its mutants."""

    def __init__(self, workspace, settings, source_rel):
        self.workspace = os.path.abspath(workspace)
        self.settings = settings
        self.source_rel = source_rel
        self.source_path = os.path.join(self.workspace, source_rel)
        with open(self.source_path, "rb") as fh:
            self.original_bytes = fh.read()
        self.lock = FileLock(os.path.join(self.workspace, ".mutafuzz.lock"))
        tool = shlex.split(settings.cmd.split("&&")[0])[0]
        if shutil.which(tool) is None:
            raise BuildToolMissing(tool)

    def build(self, mutated_text=None, level="O0", cov_file=""):
        """One compile; returns a hex digest or a BuildFailure.

        With mutated_text the source is swapped in for the duration of
        the build and restored afterwards (also on errors and timeouts).
        """
        command = self.settings.cmd.format(level=level, cov=cov_file)
        with self.lock:
            with open(self.source_path, "rb") as fh:
                on_disk = fh.read()
            if on_disk != self.original_bytes:
                raise WorkspaceDirty(self.source_rel)
            swapped = mutated_text is not None
            try:
                if swapped:
                    with open(self.source_path, "w") as fh:
                        fh.write(mutated_text)
                try:
                    proc = subprocess.run(
                        command, shell=True, cwd=self.workspace,
                        capture_output=True, timeout=self.settings.timeout_s,
                    )
                except subprocess.TimeoutExpired:
                    raise BuildTimeout(command)
                if proc.returncode == 127:
                    raise BuildToolMissing(command)
                if proc.returncode != 0:
                    first = (proc.stderr or proc.stdout).decode(
                        "utf-8", "replace"
                    ).strip().splitlines()
                    return BuildFailure(proc.returncode, first[0] if first else "")
                return sha512_file(os.path.join(self.workspace, self.settings.artifact))
            finally:
                if swapped:
                    with open(self.source_path, "wb") as fh:
                        fh.write(self.original_bytes)

    def build_all_levels(self, mutant_id, mutated_text=None):
        outcome = BuildOutcome(mutant_id)
        for level in self.settings.levels:
            outcome.per_level[level] = self.build(mutated_text, level)
        return outcome

    def verify_determinism(self, level=None):
        """Double-build the original; TCE is only sound if this holds."""
        level = level or self.settings.levels[0]
        a = self.build(None, level)
        b = self.build(None, level)
        return isinstance(a, str) and a == b


def tce_partition(outcomes, levels=None):
    """Split compiled mutants into equivalent / redundant / unique.

    A mutant is equivalent when any level's digest matches the original's
    at the same level; remaining mutants sharing a digest at some level
    form redundant groups (transitive closure).
    """
    by_id = {o.mutant_id: o for o in outcomes}
    if "original" not in by_id:
        raise MissingLevel("no outcome for the original program")
    original = by_id.pop("original")
    levels = tuple(levels or sorted(original.per_level))
    for o in [original] + list(by_id.values()):
        for lv in levels:
            if lv not in o.per_level:
                raise MissingLevel("%s lacks level %s" % (o.mutant_id, lv))

    compiled = {
        mid: o for mid, o in by_id.items() if o.compiled_everywhere(levels)
    }
    equivalent = set()
    for mid, o in compiled.items():
        for lv in levels:
            orig_digest = original.per_level[lv]
            if isinstance(orig_digest, str) and o.per_level[lv] == orig_digest:
                equivalent.add(mid)
                break

    rest = [mid for mid in compiled if mid not in equivalent]
    parent = {mid: mid for mid in rest}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for lv in levels:
        seen = {}
        for mid in rest:
            digest = compiled[mid].per_level[lv]
            if digest in seen:
                ra, rb = find(seen[digest]), find(mid)
                if ra != rb:
                    parent[rb] = ra
            else:
                seen[digest] = mid

    groups = {}
    for mid in rest:
        groups.setdefault(find(mid), set()).add(mid)
    redundant = tuple(
        frozenset(g) for g in sorted(
            (g for g in groups.values() if len(g) >= 2), key=min
        )
    )
    grouped = set().union(*redundant) if redundant else set()
    unique = frozenset(set(rest) - grouped)
    return TcePartition(frozenset(equivalent), redundant, unique)


def write_digests(path, outcomes):
    with open(path, "w") as fh:
        for o in outcomes:
            for level, res in o.per_level.items():
                value = res if isinstance(res, str) else "FAIL"
                fh.write("%s %s %s\n" % (o.mutant_id, level, value))


def read_digests(path):
    outcomes = {}
    with open(path) as fh:
        for line in fh:
            if not line.strip():
                continue
            mid, level, value = line.split()
            o = outcomes.setdefault(mid, BuildOutcome(mid))
            o.per_level[level] = value if value != "FAIL" else BuildFailure(1, "")
    return list(outcomes.values())
