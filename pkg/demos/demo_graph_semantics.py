"""
Merges, value notations, and incompatibility
============================================

Three pieces of graph semantics beyond raw triples:

- duplicate objects point at their replacement through
  /dataworld/gardening_hint/replaced_by; resolving follows chains to the
  surviving node, and rewriting canonicalizes a whole stream;
- /freebase/valuenotation/has_value and has_no_value state that a property
  has an unknown value or definitely none;
- incompatibility rules flag objects asserting mutually exclusive types
  (the reporting hook for conflated objects that need splitting).
"""

from fbont import (
    CyclePolicy,
    IncompatibilityRule,
    Mid,
    build_merge_map,
    check_incompatibilities,
    extract_value_notations,
    idpath,
    iter_type_assertions,
    render,
    rewrite_canonical,
    serialize,
    stream_parse,
)

NS = "http://rdf.freebase.com/ns/"


def obj(s, p, o):
    return f"<{NS}{s}>\t<{NS}{p}>\t<{NS}{o}>\t."


lines = [
    # a merge chain: xyz123 was merged into mid456, which was merged into abc123
    obj("m.xyz123", "dataworld.gardening_hint.replaced_by", "m.mid456"),
    obj("m.mid456", "dataworld.gardening_hint.replaced_by", "m.abc123"),
    # facts still attached to the duplicates
    obj("m.xyz123", "people.person.place_of_birth", "m.hawaii"),
    obj("m.spouse", "people.person.spouse_s", "m.mid456"),
    # a property whose value exists but is unknown, one definitely absent
    obj("people.person.date_of_birth", "freebase.valuenotation.has_value", "m.plato"),
    obj("people.person.date_of_death", "freebase.valuenotation.has_no_value", "m.immortal"),
    # one object asserting two types that exclude each other
    obj("m.terminator", "type.object.type", "film.film"),
    obj("m.terminator", "type.object.type", "film.film_series"),
]

triples = []
stream_parse(lines, triples.append)

merge_map = build_merge_map(triples)
print("merge edges:", {render(k): render(v) for k, v in merge_map.edges.items()})
print("resolve(/m/xyz123) ->", render(merge_map.resolve(Mid("xyz123"))))

rewritten = []
report = rewrite_canonical(triples, merge_map, rewritten.append)
print(f"rewrote {report.subjects_rewritten} subjects, {report.objects_rewritten} objects:")
for triple in rewritten[2:4]:
    print("  ", serialize(triple))

print()
for note in extract_value_notations(triples):
    print(f"{render(note.property)} - {note.kind.value} - {render(note.object)}")

print()
rule = IncompatibilityRule(idpath("/film/film"), idpath("/film/film_series"))
violations = check_incompatibilities(iter_type_assertions(triples), [rule])
for violation in violations:
    print(f"split candidate: {render(violation.mid)} asserts both "
          f"{render(violation.type_a)} and {render(violation.type_b)}")

# Cycles mean corrupt data; the default policy raises, the resilience policy
# canonicalizes to the lexicographically smallest member.
cycle_lines = [
    obj("m.b", "dataworld.gardening_hint.replaced_by", "m.c"),
    obj("m.c", "dataworld.gardening_hint.replaced_by", "m.b"),
]
cycle_triples = []
stream_parse(cycle_lines, cycle_triples.append)
cycle_map = build_merge_map(cycle_triples)
survivor = cycle_map.resolve(next(iter(cycle_map.edges)), CyclePolicy.SMALLEST)
print(f"\ncycle canonicalized to {render(survivor)} under the resilience policy")
