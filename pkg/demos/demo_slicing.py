"""
Slicing a dump by predicate domain
==================================

Builds a miniature N-Triples dump in memory, streams it through the parser,
counts one slice per predicate domain, and renders the three-group taxonomy
the way the published census table lays it out.
"""

from fbont import build_taxonomy, slice_stream, stream_parse
from fbont.report import render_taxonomy

NS = "http://rdf.freebase.com/ns/"

# A dump line is subject, predicate, object, terminator, tab-separated.
# The predicate's first path segment decides which slice the line lands in.
lines = []
for i in range(60):
    lines.append(f"<{NS}m.s{i}>\t<{NS}music.album.artist>\t<{NS}m.a{i}>\t.")
for i in range(25):
    lines.append(f"<{NS}m.s{i}>\t<{NS}film.film.directed_by>\t<{NS}m.d{i}>\t.")
for i in range(10):
    lines.append(f'<{NS}m.s{i}>\t<{NS}people.person.date_of_birth>\t"19{60 + i}"\t.')
for i in range(30):
    lines.append(f"<{NS}m.s{i}>\t<{NS}type.object.name>\t\"Thing {i}\"\t.")
for i in range(15):
    lines.append(f'<{NS}m.s{i}>\t<http://www.w3.org/2000/01/rdf-schema#label>\t"thing"@en\t.')
lines.append("this line is corrupt and will be counted, not fatal")

triples = []
report = stream_parse(lines, triples.append)
print(f"parsed {report.lines_read} lines -> {report.triples_ok} triples, "
      f"{report.lines_malformed} malformed {report.errors}")

# Counting is a single pass; every triple lands in exactly one slice.
counts = slice_stream(triples)
for key, count in sorted(counts.items()):
    print(f"  {key.kind:6s} {key.name:10s} {count}")

# Group assignment: /type is implementation machinery, rdfs labels are OWL
# vocabulary, the rest is subject matter. Percentages come in fractions and
# render at three decimals.
print()
print(render_taxonomy(build_taxonomy(counts), "markdown"))
