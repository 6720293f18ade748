"""Streaming, fault-tolerant reader for N-Triples dumps.

Built for multi-billion-line inputs: one pass, constant memory, malformed
lines counted and sampled instead of aborting the run. The dump convention is
one tab-separated statement per line (``<s>\\t<p>\\t<o>\\t.``); that shape is
parsed on a fast path, and anything else falls back to a quote-aware
whitespace tokenizer so hand-written fixtures parse too.

Parsing is pure per line. Callers may split a file at line boundaries,
parse partitions independently, and merge the resulting reports in partition
order (see :meth:`ParseReport.merge`).
"""

from __future__ import annotations

import gzip
import io
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Callable, Iterable, Iterator, Union

from .model import (
    DEFAULT_NAMESPACE,
    ExternalIri,
    IdPath,
    Literal,
    Mid,
    NodeRef,
    Triple,
    normalize_iri,
    to_iri,
)

GZIP_MAGIC = b"\x1f\x8b"

# Malformed-line reason codes, kept short and stable for reports.
FIELD_COUNT = "field-count"
MISSING_TERMINATOR = "missing-terminator"
UNBALANCED_QUOTES = "unbalanced-quotes"
UNBALANCED_BRACKETS = "unbalanced-brackets"
LITERAL_POSITION = "literal-position"
BLANK_NODE = "blank-node"
BAD_TERM = "bad-term"
BAD_LITERAL_SUFFIX = "bad-literal-suffix"
EMPTY_IRI = "empty-iri"
NONSTANDARD_ID = "nonstandard-id"


@dataclass(frozen=True)
class ParserConfig:
    """Knobs for one parsing run.

    namespace: prefix mapped onto slash notation (mirrors with other
    prefixes stay readable by overriding it).
    strict_ids: reject lines whose Freebase identifiers fall outside the
    canonical [0-9a-z_] alphabet instead of merely counting them.
    """

    namespace: str = DEFAULT_NAMESPACE
    strict_ids: bool = False


DEFAULT_CONFIG = ParserConfig()


class MalformedLineError(ValueError):
    """A single line that is not a well-formed triple. Never fatal to a stream."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(reason if not detail else f"{reason}: {detail}")
        self.reason = reason


class StreamAbortedError(IOError):
    """Unrecoverable I/O failure mid-stream; carries the partial report."""

    def __init__(self, report: "ParseReport", cause: BaseException):
        super().__init__(f"stream aborted after {report.lines_read} lines: {cause}")
        self.report = report


@dataclass
class ParseReport:
    """Counts for one parsed stream (or one partition of it).

    The count fields form a commutative monoid under addition with
    ``ParseReport()`` as identity. The error sample is positional: it holds
    the first ``max_errors`` (line_number, reason) pairs in stream order, so
    partition reports must be merged in partition order for line numbers to
    stay global.
    """

    lines_read: int = 0
    triples_ok: int = 0
    lines_malformed: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)
    max_errors: int = 20
    lint: Counter = field(default_factory=Counter)

    def record_ok(self) -> None:
        self.lines_read += 1
        self.triples_ok += 1

    def record_malformed(self, line_number: int, reason: str) -> None:
        self.lines_read += 1
        self.lines_malformed += 1
        if len(self.errors) < self.max_errors:
            self.errors.append((line_number, reason))

    def merge(self, other: "ParseReport") -> "ParseReport":
        """Combine with the report of the partition that follows this one.

        Count fields add; the follower's line numbers are shifted by this
        report's ``lines_read`` so the sample stays globally numbered.
        """
        max_errors = max(self.max_errors, other.max_errors)
        errors = list(self.errors)
        for line_number, reason in other.errors:
            errors.append((line_number + self.lines_read, reason))
        errors.sort()
        return ParseReport(
            lines_read=self.lines_read + other.lines_read,
            triples_ok=self.triples_ok + other.triples_ok,
            lines_malformed=self.lines_malformed + other.lines_malformed,
            errors=errors[:max_errors],
            max_errors=max_errors,
            lint=self.lint + other.lint,
        )

    def to_dict(self) -> dict:
        return {
            "lines_read": self.lines_read,
            "triples_ok": self.triples_ok,
            "lines_malformed": self.lines_malformed,
            "first_errors": [list(e) for e in self.errors],
            "lint": {k: self.lint[k] for k in sorted(self.lint)},
        }


# --- literal escape handling -------------------------------------------------

_SIMPLE_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


def unescape_literal(raw: str) -> tuple[str, int]:
    """Decode N-Triples escapes. Returns (text, count of unknown escapes).

    Unknown or truncated escapes are preserved verbatim rather than dropped;
    the count lets the stream surface them as lint.
    """
    if "\\" not in raw:
        return raw, 0
    out: list[str] = []
    unknown = 0
    i = 0
    n = len(raw)
    while i < n:
        ch = raw[i]
        if ch != "\\" or i + 1 >= n:
            out.append(ch)
            i += 1
            continue
        code = raw[i + 1]
        if code in _SIMPLE_ESCAPES:
            out.append(_SIMPLE_ESCAPES[code])
            i += 2
        elif code in ("u", "U"):
            width = 4 if code == "u" else 8
            hexpart = raw[i + 2 : i + 2 + width]
            if len(hexpart) == width:
                try:
                    out.append(chr(int(hexpart, 16)))
                    i += 2 + width
                    continue
                except ValueError:
                    pass
            out.append(raw[i : i + 2])
            unknown += 1
            i += 2
        else:
            out.append(raw[i : i + 2])
            unknown += 1
            i += 2
    return "".join(out), unknown


def escape_literal(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


# --- single-line parsing ------------------------------------------------------


def _tokenize(line: str) -> list[str]:
    """Split on runs of whitespace outside quoted literals.

    A trailing ``.`` glued to the last token is split off so forms like
    ``<s> <p> <o>.`` parse; inside quotes nothing splits.
    """
    tokens: list[str] = []
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        if ch in " \t":
            i += 1
            continue
        if ch == '"':
            j = i + 1
            while j < n:
                c = line[j]
                if c == "\\":
                    j += 2
                    continue
                if c == '"':
                    break
                j += 1
            if j >= n:
                raise MalformedLineError(UNBALANCED_QUOTES)
            k = j + 1
            while k < n and line[k] not in " \t":
                k += 1
            tokens.append(line[i:k])
            i = k
        else:
            k = i
            while k < n and line[k] not in " \t":
                k += 1
            tokens.append(line[i:k])
            i = k
    if tokens and tokens[-1] != "." and tokens[-1].endswith("."):
        tokens[-1] = tokens[-1][:-1]
        tokens.append(".")
    return tokens


def _check_id_lint(ref: NodeRef, config: ParserConfig, counters: Counter | None) -> None:
    if isinstance(ref, (Mid, IdPath)) and not ref.is_standard:
        if config.strict_ids:
            raise MalformedLineError(NONSTANDARD_ID)
        if counters is not None:
            counters[NONSTANDARD_ID] += 1


def _parse_iri_term(token: str, config: ParserConfig, counters: Counter | None) -> NodeRef:
    if not token.endswith(">") or len(token) < 2:
        raise MalformedLineError(UNBALANCED_BRACKETS)
    iri = token[1:-1]
    if not iri:
        raise MalformedLineError(EMPTY_IRI)
    if "<" in iri or ">" in iri:
        raise MalformedLineError(UNBALANCED_BRACKETS)
    ref = normalize_iri(iri, config.namespace)
    _check_id_lint(ref, config, counters)
    return ref


def _parse_literal_term(token: str, counters: Counter | None) -> Literal:
    j = 1
    n = len(token)
    while j < n:
        c = token[j]
        if c == "\\":
            j += 2
            continue
        if c == '"':
            break
        j += 1
    if j >= n:
        raise MalformedLineError(UNBALANCED_QUOTES)
    lexical, unknown = unescape_literal(token[1:j])
    if unknown and counters is not None:
        counters["unknown-escape"] += unknown
    rest = token[j + 1 :]
    if not rest:
        return Literal(lexical)
    if rest.startswith("@"):
        tag = rest[1:]
        if not tag or not all(c.isalnum() or c == "-" for c in tag):
            raise MalformedLineError(BAD_LITERAL_SUFFIX)
        return Literal(lexical, language=tag)
    if rest.startswith("^^<") and rest.endswith(">") and len(rest) > 4:
        return Literal(lexical, datatype=ExternalIri(rest[3:-1]))
    raise MalformedLineError(BAD_LITERAL_SUFFIX)


def _parse_term(
    token: str,
    position: str,
    config: ParserConfig,
    counters: Counter | None,
) -> NodeRef | Literal:
    head = token[0]
    if head == "<":
        return _parse_iri_term(token, config, counters)
    if head == '"':
        if position != "object":
            raise MalformedLineError(LITERAL_POSITION, f"literal in {position} position")
        return _parse_literal_term(token, counters)
    if token.startswith("_:"):
        raise MalformedLineError(BLANK_NODE)
    raise MalformedLineError(BAD_TERM, token[:40])


def parse_line(
    line: str,
    config: ParserConfig = DEFAULT_CONFIG,
    counters: Counter | None = None,
) -> Triple:
    """Parse one physical line (no trailing newline) into a Triple.

    Raises MalformedLineError with a short reason code otherwise. Pure when
    ``counters`` is omitted; pass a Counter to collect lint tallies
    (nonstandard ids, unknown escapes).
    """
    fields = line.split("\t")
    if len(fields) == 4 and fields[3] == ".":
        tokens = [f.strip(" ") for f in fields[:3]]
    else:
        tokens = _tokenize(line)
        if len(tokens) != 4:
            raise MalformedLineError(FIELD_COUNT, f"{len(tokens)} fields")
        if tokens[3] != ".":
            raise MalformedLineError(MISSING_TERMINATOR)
        tokens = tokens[:3]
    if not all(tokens):
        raise MalformedLineError(FIELD_COUNT, "empty field")
    subject = _parse_term(tokens[0], "subject", config, counters)
    predicate = _parse_term(tokens[1], "predicate", config, counters)
    obj = _parse_term(tokens[2], "object", config, counters)
    return Triple(subject, predicate, obj)


def serialize(triple: Triple, namespace: str = DEFAULT_NAMESPACE) -> str:
    """Render a Triple back to one dump-convention line (tab-separated, no newline).

    parse_line(serialize(t)) == t for every well-formed triple.
    """
    parts = [
        "<" + to_iri(triple.subject, namespace) + ">",
        "<" + to_iri(triple.predicate, namespace) + ">",
    ]
    obj = triple.object
    if isinstance(obj, Literal):
        text = '"' + escape_literal(obj.lexical) + '"'
        if obj.language is not None:
            text += "@" + obj.language
        elif obj.datatype is not None:
            text += "^^<" + obj.datatype.iri + ">"
        parts.append(text)
    else:
        parts.append("<" + to_iri(obj, namespace) + ">")
    parts.append(".")
    return "\t".join(parts)


# --- stream parsing -----------------------------------------------------------

Source = Union[str, os.PathLike, IO[bytes], Iterable[bytes], Iterable[str]]


def open_dump(path: str | os.PathLike) -> IO[bytes]:
    """Open a dump file for binary reading, decompressing gzip by magic bytes."""
    with open(path, "rb") as probe:
        magic = probe.read(2)
    if magic == GZIP_MAGIC:
        return gzip.open(path, "rb")  # type: ignore[return-value]
    return open(path, "rb")


def _as_line_iter(source: Source) -> tuple[Iterator[bytes | str], Callable[[], None]]:
    if isinstance(source, (str, os.PathLike)):
        handle = open_dump(source)
        return iter(handle), handle.close
    if hasattr(source, "read"):
        stream: IO[bytes] = source  # type: ignore[assignment]
        buffered = stream if hasattr(stream, "peek") else io.BufferedReader(stream)
        if buffered.peek(2)[:2] == GZIP_MAGIC:  # type: ignore[attr-defined]
            return iter(gzip.GzipFile(fileobj=buffered)), lambda: None
        return iter(buffered), lambda: None
    return iter(source), lambda: None


def _decode(raw: bytes, report: ParseReport) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError:
        report.lint["invalid-utf8-lines"] += 1
        return raw.decode("utf-8", errors="replace")


def iter_triples(
    source: Source,
    report: ParseReport,
    config: ParserConfig = DEFAULT_CONFIG,
) -> Iterator[Triple]:
    """Yield the well-formed triples of ``source``, tallying into ``report``.

    ``source`` may be a path (gzip detected by magic bytes), a binary file
    object, or any iterable of lines. Malformed lines are counted and sampled,
    never fatal; an I/O failure raises StreamAbortedError with the partial
    report attached.
    """
    lines, close = _as_line_iter(source)
    try:
        line_number = 0
        while True:
            try:
                raw = next(lines)
            except StopIteration:
                break
            except (OSError, EOFError) as exc:
                raise StreamAbortedError(report, exc) from exc
            line_number += 1
            if isinstance(raw, bytes):
                line = _decode(raw.rstrip(b"\r\n"), report)
            else:
                line = raw.rstrip("\r\n")
            try:
                triple = parse_line(line, config, report.lint)
            except MalformedLineError as exc:
                report.record_malformed(line_number, exc.reason)
                continue
            report.record_ok()
            yield triple
    finally:
        close()


def stream_parse(
    source: Source,
    sink: Callable[[Triple], None],
    config: ParserConfig = DEFAULT_CONFIG,
    max_errors: int = 20,
) -> ParseReport:
    """Dispatch every line of ``source`` through parse_line, feeding ``sink``."""
    report = ParseReport(max_errors=max_errors)
    for triple in iter_triples(source, report, config):
        sink(triple)
    return report
