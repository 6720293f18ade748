"""Partition-parallel execution of the parse/aggregate pipeline.

Plain dump files are split into byte ranges aligned to line boundaries; each
partition is parsed independently (its lines are exactly those that *begin*
inside its range) and per-partition results merge in partition order. Every
aggregation here is a mergeable monoid, so any worker count produces
byte-identical outputs to a single-threaded run.

Gzip inputs are inherently sequential and are processed as one partition.
"""

from __future__ import annotations

import gzip
import os
import shutil
import stat
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Iterator, Sequence

from .model import IdPath, Mid
from .parser import GZIP_MAGIC, ParseReport, ParserConfig, iter_triples, open_dump, serialize
from .schema import (
    DomainSchema,
    SchemaConfig,
    UndefinedComplexityError,
    complexity_score,
    feed_schema_triple,
    merge_schemas,
)
from .semantics import (
    REPLACED_BY_PREDICATE,
    TYPE_ASSERTION_PREDICATE,
    IncompatibilityRule,
    MergeMap,
    ValueNotation,
    feed_merge_edge,
    feed_value_notation,
    match_rule,
    match_type_assertion,
)
from .slicer import (
    DEFAULT_GROUPS,
    DEFAULT_SLICE_LAYOUT,
    DOMAIN,
    Group,
    GroupConfig,
    SliceKey,
    SliceWriter,
    classify_predicate,
    group_for,
    merge_counts,
)
from .stats import StudyRow


@dataclass(frozen=True)
class Partition:
    """A line-aligned byte range of one file; end == -1 means the whole file."""

    path: str
    start: int
    end: int
    index: int


def _is_plain_seekable(path: str) -> bool:
    if path == "-":
        return False
    try:
        mode = os.stat(path).st_mode
    except OSError:
        return False
    if not stat.S_ISREG(mode):
        return False
    with open(path, "rb") as handle:
        return handle.read(2) != GZIP_MAGIC


def plan_partitions(paths: Sequence[str], workers: int) -> list[Partition]:
    """Split inputs into up to ``workers`` ranges each, in file order."""
    partitions: list[Partition] = []
    index = 0
    for path in paths:
        path = os.fspath(path)
        if workers <= 1 or not _is_plain_seekable(path):
            partitions.append(Partition(path, 0, -1, index))
            index += 1
            continue
        size = os.path.getsize(path)
        bounds = [size * i // workers for i in range(workers + 1)]
        for start, end in zip(bounds, bounds[1:]):
            partitions.append(Partition(path, start, end, index))
            index += 1
    return partitions


def iter_partition_lines(part: Partition) -> Iterator[bytes]:
    """Yield exactly the lines that begin inside the partition's range."""
    if part.path == "-":
        stream = sys.stdin.buffer
        if stream.peek(2)[:2] == GZIP_MAGIC:
            stream = gzip.GzipFile(fileobj=stream)  # type: ignore[assignment]
        yield from stream
        return
    if part.end == -1:
        handle = open_dump(part.path)
        try:
            yield from handle
        finally:
            handle.close()
        return
    with open(part.path, "rb") as handle:
        if part.start > 0:
            handle.seek(part.start - 1)
            if handle.read(1) != b"\n":
                handle.readline()  # partial line: belongs to the previous partition
        while True:
            position = handle.tell()
            if position >= part.end:
                break
            line = handle.readline()
            if not line:
                break
            yield line


# --- per-partition jobs ---------------------------------------------------------
#
# Jobs are frozen dataclasses so they pickle cleanly into worker processes.
# Each returns (ParseReport, payload); payloads merge in partition order.


@dataclass(frozen=True)
class SliceJob:
    parser: ParserConfig = ParserConfig()
    max_errors: int = 20
    shard_root: str | None = None
    count_distinct: bool = False
    slice_layout: str = DEFAULT_SLICE_LAYOUT

    def run(self, part: Partition) -> tuple[ParseReport, dict[str, Any]]:
        report = ParseReport(max_errors=self.max_errors)
        counts: dict[SliceKey, int] = {}
        lint: Counter = Counter()
        distinct: set[str] | None = set() if self.count_distinct else None
        writer: SliceWriter | None = None
        shard_dir: str | None = None
        if self.shard_root is not None:
            shard_dir = os.path.join(self.shard_root, f"{part.index:05d}")
            writer = SliceWriter(shard_dir, self.parser.namespace, self.slice_layout)
        try:
            for triple in iter_triples(iter_partition_lines(part), report, self.parser):
                if isinstance(triple.predicate, Mid):
                    lint["mid-predicate"] += 1
                    continue
                key = classify_predicate(triple.predicate)
                counts[key] = counts.get(key, 0) + 1
                if writer is not None:
                    writer.write(key, triple)
                if distinct is not None:
                    distinct.add(serialize(triple, self.parser.namespace))
        finally:
            if writer is not None:
                writer.close()
        return report, {
            "counts": counts,
            "lint": lint,
            "shard_dir": shard_dir,
            "distinct": distinct,
        }


def merge_slice_payloads(payloads: Sequence[dict[str, Any]]) -> dict[str, Any]:
    counts: dict[SliceKey, int] = {}
    lint: Counter = Counter()
    distinct: set[str] | None = None
    shard_dirs: list[str] = []
    for payload in payloads:
        counts = merge_counts(counts, payload["counts"])
        lint += payload["lint"]
        if payload["shard_dir"] is not None:
            shard_dirs.append(payload["shard_dir"])
        if payload["distinct"] is not None:
            distinct = (distinct or set()) | payload["distinct"]
    return {"counts": counts, "lint": lint, "shard_dirs": shard_dirs, "distinct": distinct}


@dataclass(frozen=True)
class SchemaJob:
    parser: ParserConfig = ParserConfig()
    max_errors: int = 20
    schema: SchemaConfig = SchemaConfig()

    def run(self, part: Partition) -> tuple[ParseReport, dict[str, Any]]:
        report = ParseReport(max_errors=self.max_errors)
        lint: Counter = Counter()
        schemas: dict[str, DomainSchema] = {}
        for triple in iter_triples(iter_partition_lines(part), report, self.parser):
            feed_schema_triple(schemas, triple, self.schema, lint)
        return report, {"schemas": schemas, "lint": lint}


def merge_schema_payloads(payloads: Sequence[dict[str, Any]]) -> dict[str, Any]:
    schemas: dict[str, DomainSchema] = {}
    lint: Counter = Counter()
    for payload in payloads:
        schemas = merge_schemas(schemas, payload["schemas"])
        lint += payload["lint"]
    return {"schemas": schemas, "lint": lint}


@dataclass(frozen=True)
class StudyJob:
    """Slice counting and schema extraction in one pass, for the study command."""

    parser: ParserConfig = ParserConfig()
    max_errors: int = 20
    schema: SchemaConfig = SchemaConfig()

    def run(self, part: Partition) -> tuple[ParseReport, dict[str, Any]]:
        report = ParseReport(max_errors=self.max_errors)
        lint: Counter = Counter()
        counts: dict[SliceKey, int] = {}
        schemas: dict[str, DomainSchema] = {}
        for triple in iter_triples(iter_partition_lines(part), report, self.parser):
            if isinstance(triple.predicate, Mid):
                lint["mid-predicate"] += 1
            else:
                key = classify_predicate(triple.predicate)
                counts[key] = counts.get(key, 0) + 1
            feed_schema_triple(schemas, triple, self.schema, lint)
        return report, {"counts": counts, "schemas": schemas, "lint": lint}


def merge_study_payloads(payloads: Sequence[dict[str, Any]]) -> dict[str, Any]:
    counts: dict[SliceKey, int] = {}
    schemas: dict[str, DomainSchema] = {}
    lint: Counter = Counter()
    for payload in payloads:
        counts = merge_counts(counts, payload["counts"])
        schemas = merge_schemas(schemas, payload["schemas"])
        lint += payload["lint"]
    return {"counts": counts, "schemas": schemas, "lint": lint}


@dataclass(frozen=True)
class SemanticsJob:
    parser: ParserConfig = ParserConfig()
    max_errors: int = 20
    replaced_by: IdPath = REPLACED_BY_PREDICATE
    type_predicate: IdPath = TYPE_ASSERTION_PREDICATE
    incompatibility_predicate: IdPath | None = None
    accept_reversed: bool = False

    def run(self, part: Partition) -> tuple[ParseReport, dict[str, Any]]:
        report = ParseReport(max_errors=self.max_errors)
        lint: Counter = Counter()
        merge_map = MergeMap()
        notations: list[ValueNotation] = []
        assertions: list[tuple[Mid, IdPath]] = []
        rules: set[IncompatibilityRule] = set()
        for triple in iter_triples(iter_partition_lines(part), report, self.parser):
            feed_merge_edge(merge_map, triple, self.replaced_by, lint)
            feed_value_notation(notations, triple, self.accept_reversed, lint)
            assertion = match_type_assertion(triple, self.type_predicate)
            if assertion is not None:
                assertions.append(assertion)
            if self.incompatibility_predicate is not None:
                rule = match_rule(triple, self.incompatibility_predicate)
                if rule is not None:
                    rules.add(rule)
        return report, {
            "merge_map": merge_map,
            "notations": notations,
            "assertions": assertions,
            "rules": rules,
            "lint": lint,
        }


def merge_semantics_payloads(payloads: Sequence[dict[str, Any]]) -> dict[str, Any]:
    merge_map = MergeMap()
    notations: list[ValueNotation] = []
    assertions: list[tuple[Mid, IdPath]] = []
    rules: set[IncompatibilityRule] = set()
    lint: Counter = Counter()
    for payload in payloads:
        merge_map = merge_map.merge(payload["merge_map"])
        notations.extend(payload["notations"])
        assertions.extend(payload["assertions"])
        rules |= payload["rules"]
        lint += payload["lint"]
    return {
        "merge_map": merge_map,
        "notations": notations,
        "assertions": assertions,
        "rules": rules,
        "lint": lint,
    }


def join_study_rows(
    counts: dict[SliceKey, int],
    schemas: dict[str, DomainSchema],
    group_config: GroupConfig = DEFAULT_GROUPS,
    method: str = "pooled",
) -> tuple[list[StudyRow], list[str]]:
    """Pair each subject-matter domain's triple count with its complexity score.

    Domains with no extracted schema (score undefined) are skipped; their
    names come back for the caller to warn about.
    """
    rows: list[StudyRow] = []
    skipped: list[str] = []
    for key in sorted(counts):
        if key.kind != DOMAIN or group_for(key, group_config) is not Group.SUBJECT_MATTER:
            continue
        schema = schemas.get(key.name)
        if schema is None:
            skipped.append(key.name)
            continue
        try:
            score = complexity_score(schema, method)
        except UndefinedComplexityError:
            skipped.append(key.name)
            continue
        rows.append(StudyRow(key.name, counts[key], score))
    return rows, skipped


def _run_one(args: tuple[Any, Partition]) -> tuple[ParseReport, Any]:
    job, part = args
    return job.run(part)


def run_partitioned(
    job: Any, partitions: Sequence[Partition], workers: int
) -> tuple[ParseReport, list[Any]]:
    """Run a job over every partition, merging reports in partition order."""
    if workers <= 1 or len(partitions) <= 1:
        results = [job.run(part) for part in partitions]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(partitions))) as pool:
            results = list(pool.map(_run_one, [(job, part) for part in partitions]))
    report = ParseReport(max_errors=job.max_errors)
    payloads = []
    for partial_report, payload in results:
        report = report.merge(partial_report)
        payloads.append(payload)
    return report, payloads


def concatenate_shards(shard_dirs: Sequence[str], out_dir: str) -> list[str]:
    """Merge worker-private slice shards into final per-slice files.

    Shards concatenate in partition order, so the result is byte-identical to
    a single-worker run. Shard directories are removed afterwards.
    """
    relpaths: list[str] = []
    seen = set()
    for shard_dir in shard_dirs:
        for root, _, files in sorted(os.walk(shard_dir)):
            for name in sorted(files):
                rel = os.path.relpath(os.path.join(root, name), shard_dir)
                if rel not in seen:
                    seen.add(rel)
                    relpaths.append(rel)
    relpaths.sort()
    for rel in relpaths:
        out_path = os.path.join(out_dir, rel)
        os.makedirs(os.path.dirname(out_path), exist_ok=True)
        with open(out_path, "wb") as out:
            for shard_dir in shard_dirs:
                piece = os.path.join(shard_dir, rel)
                if os.path.exists(piece):
                    with open(piece, "rb") as src:
                        shutil.copyfileobj(src, out)
    for shard_dir in shard_dirs:
        shutil.rmtree(shard_dir, ignore_errors=True)
    for parent in {os.path.dirname(d) for d in shard_dirs}:
        try:
            os.rmdir(parent)
        except OSError:
            pass  # parent still holds other runs' shards
    return relpaths
