"""Shared fixture helpers: dump-line builders and the published domain census."""

from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

NS = "http://rdf.freebase.com/ns/"

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
CENSUS_PATH = os.path.join(DATA_DIR, "domain_census.tsv")


def fb(local: str) -> str:
    """Bracketed Freebase-namespace IRI from a dotted local name."""
    return f"<{NS}{local}>"


def line(subject: str, predicate: str, obj: str) -> str:
    """One dump-convention line from already-bracketed/quoted terms."""
    return f"{subject}\t{predicate}\t{obj}\t."


def obj_line(s_local: str, p_local: str, o_local: str) -> str:
    return line(fb(s_local), fb(p_local), fb(o_local))


def lit_line(s_local: str, p_local: str, lexical: str, suffix: str = "") -> str:
    return line(fb(s_local), fb(p_local), f'"{lexical}"{suffix}')


def load_census() -> list[dict]:
    """The 105 published (group, name, pattern, triples, pct strings) rows."""
    rows = []
    with open(CENSUS_PATH, "r", encoding="utf-8") as handle:
        header = None
        for raw in handle:
            text = raw.rstrip("\n")
            if not text or text.startswith("#"):
                continue
            parts = text.split("\t")
            if header is None:
                header = parts
                continue
            record = dict(zip(header, parts))
            record["triples"] = int(record["triples"])
            rows.append(record)
    return rows


@pytest.fixture
def write_dump(tmp_path):
    """Factory writing a list of lines as an .nt file, returning its path."""

    def _write(lines: list[str], name: str = "dump.nt") -> str:
        path = tmp_path / name
        path.write_text("".join(l + "\n" for l in lines), encoding="utf-8")
        return str(path)

    return _write
