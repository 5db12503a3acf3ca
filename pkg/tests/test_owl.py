import itertools
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triplegraph.ntriples import load_ntriples, parse_ntriples
from triplegraph.owl import (
    MalformedRestrictionWarning,
    Restriction,
    SameAsPartition,
    detect_clashes,
    extract_restrictions,
    inconsistencies_to_json,
    materialize_owl,
    reason_owl,
)
from triplegraph.rdfs import materialize_rdfs
from triplegraph.store import TripleStore
from triplegraph.terms import Triple, URI, pattern

DATA = Path(__file__).resolve().parents[1] / "data"
PRESIDENTS = (DATA / "presidents.nt").read_text()
HERBERTV = (DATA / "presidents_herbertv.nt").read_text()


def store_of(*texts):
    s = TripleStore()
    for text in texts:
        load_ntriples(s, text)
    return s


def same(a, b):
    return Triple(URI(a), URI("owl:sameAs"), URI(b))


def test_extract_presidents():
    (r,) = extract_restrictions(store_of(PRESIDENTS))
    assert (r.on_class, r.on_property, r.max_cardinality) == (URI("lanl:Country"), URI("lanl:president"), 1)
    assert r.node.is_blank


def test_extract_none():
    assert extract_restrictions(store_of("<a:x> <rdfs:subClassOf> <a:y> .")) == []


def test_extract_missing_on_property_warns():
    text = '<a:C> <rdfs:subClassOf> _:r .\n_:r <rdf:type> <owl:Restriction> .\n_:r <owl:maxCardinality> "1"^^<xsd:nonNegativeInteger> .\n'
    with pytest.warns(MalformedRestrictionWarning, match="onProperty"):
        assert extract_restrictions(store_of(text)) == []


def test_extract_missing_bound_warns():
    text = "<a:C> <rdfs:subClassOf> _:r .\n_:r <rdf:type> <owl:Restriction> .\n_:r <owl:onProperty> <a:p> .\n"
    with pytest.warns(MalformedRestrictionWarning, match="cardinality"):
        assert extract_restrictions(store_of(text)) == []


def test_president_scenario_derives_sameas():
    s = store_of(PRESIDENTS)
    ents, clashes = reason_owl(s)
    assert clashes == []
    assert same("usa:barack", "usa:obama") in s
    assert same("usa:obama", "usa:barack") in s
    merge = [e for e in ents if e.rule == "owl-max-cardinality"]
    assert {e.triple for e in merge} == {same("usa:barack", "usa:obama"), same("usa:obama", "usa:barack")}


def test_herbertv_yields_one_clash():
    s = store_of(PRESIDENTS, HERBERTV)
    _, clashes = reason_owl(s)
    assert len(clashes) == 1
    (c,) = clashes
    assert c.kind == "cardinality-clash"
    assert c.instance == URI("usa:United_States")
    culprits = set(c.culprits)
    assert Triple(URI("lanl:herbertv"), URI("owl:differentFrom"), URI("usa:barack")) in culprits
    assert '"kind": "cardinality-clash"' in inconsistencies_to_json(clashes)


def _one_shot(triples):
    return reason_owl(TripleStore(triples))[1]


def _incremental(triples):
    s = TripleStore()
    clashes = []
    for t in triples:
        s.add(t)
        _, clashes = reason_owl(s)
    return clashes


# partially inserted restrictions warn until complete
@pytest.mark.filterwarnings("ignore::triplegraph.owl.MalformedRestrictionWarning")
@pytest.mark.parametrize("seed", range(20))
def test_clash_is_order_independent(seed):
    # parse once so the restriction's blank node keeps one identity
    triples = parse_ntriples(PRESIDENTS + HERBERTV)
    rng = random.Random(seed)
    rng.shuffle(triples)
    assert len(_one_shot(triples)) == 1
    assert len(_incremental(triples)) == 1


def test_symmetric_and_transitive():
    s = store_of(
        "<a:knows> <rdf:type> <owl:SymmetricProperty> .\n<a:x> <a:knows> <a:y> .\n"
        "<a:anc> <rdf:type> <owl:TransitiveProperty> .\n<a:a> <a:anc> <a:b> .\n<a:b> <a:anc> <a:c> .\n"
    )
    ents, _ = materialize_owl(s)
    assert Triple(URI("a:y"), URI("a:knows"), URI("a:x")) in s
    assert Triple(URI("a:a"), URI("a:anc"), URI("a:c")) in s
    again, _ = materialize_owl(s)
    assert again == []


def test_different_from_is_symmetric():
    s = store_of("<a:x> <owl:differentFrom> <a:y> .")
    materialize_owl(s)
    assert Triple(URI("a:y"), URI("owl:differentFrom"), URI("a:x")) in s


def test_higher_bound_counts_but_never_merges():
    text = """\
<a:C> <rdfs:subClassOf> _:r .
_:r <owl:onProperty> <a:p> .
_:r <owl:maxCardinality> "2"^^<xsd:nonNegativeInteger> .
<a:i> <rdf:type> <a:C> .
<a:i> <a:p> <a:f1> .
<a:i> <a:p> <a:f2> .
<a:i> <a:p> <a:f3> .
"""
    s = store_of(text)
    _, clashes = reason_owl(s)
    assert clashes == []
    assert s.triples(pattern("?a", "owl:sameAs", "?b")) == []
    load_ntriples(s, "<a:f1> <owl:differentFrom> <a:f2> .\n<a:f2> <owl:differentFrom> <a:f3> .\n<a:f1> <owl:differentFrom> <a:f3> .\n")
    _, clashes = reason_owl(s)
    assert len(clashes) == 1


@pytest.mark.parametrize("m", range(1, 7))
def test_merge_matches_pairwise_oracle(m):
    fillers = [f"a:f{k}" for k in range(m)]
    text = (
        '<a:C> <rdfs:subClassOf> _:r .\n_:r <owl:onProperty> <a:p> .\n_:r <owl:maxCardinality> "1"^^<xsd:int> .\n'
        "<a:i> <rdf:type> <a:C> .\n" + "".join(f"<a:i> <a:p> <{f}> .\n" for f in fillers)
    )
    s = store_of(text)
    reason_owl(s)
    expected = {same(a, b) for a, b in itertools.permutations(fillers, 2)}
    got = {t for t in s.triples(pattern("?a", "owl:sameAs", "?b"))}
    assert got == expected
    part = SameAsPartition.from_store(s)
    assert len({part.find(URI(f)) for f in fillers}) == 1


def test_inverse_direction_detection():
    (r,) = extract_restrictions(store_of(PRESIDENTS))
    assert r.inverse is True
    assert isinstance(r, Restriction)


# -- union-find laws ---------------------------------------------------------------

terms = st.integers(min_value=0, max_value=9).map(lambda i: URI(f"x:{i}"))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(terms, terms), max_size=15), terms, terms, terms)
def test_partition_is_equivalence(unions, a, b, c):
    part = SameAsPartition()
    for x, y in unions:
        part.union(x, y)
    assert part.same(a, a)
    assert part.same(a, b) == part.same(b, a)
    if part.same(a, b) and part.same(b, c):
        assert part.same(a, c)
    # representative is the smallest member, whatever the union order
    for group in part.classes():
        assert all(part.find(t) == group[0] for t in group)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(terms, terms), max_size=12))
def test_partition_independent_of_union_order(unions):
    p1, p2 = SameAsPartition(), SameAsPartition()
    for x, y in unions:
        p1.union(x, y)
    for x, y in reversed(unions):
        p2.union(y, x)
    assert p1.classes() == p2.classes()


def test_detect_clashes_standalone():
    s = store_of(PRESIDENTS, HERBERTV)
    materialize_rdfs(s)
    assert len(detect_clashes(s)) == 1
