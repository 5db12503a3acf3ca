import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triplegraph.errors import NTriplesSyntaxError, TripleConstraintError
from triplegraph.ntriples import load_ntriples, parse_ntriples, serialize_ntriples
from triplegraph.store import TripleStore, insert, match
from triplegraph.terms import Blank, Literal, Triple, URI, V, make_triple, pattern

FIG1 = """\
<lanl:Person> <rdf:type> <rdfs:Class> .
<lanl:Dog> <rdf:type> <rdfs:Class> .
<lanl:pet> <rdf:type> <rdf:Property> .
<lanl:pet> <rdfs:domain> <lanl:Person> .
<lanl:pet> <rdfs:range> <lanl:Dog> .
"""


def test_parse_pet_triple():
    triples = parse_ntriples("<lanl:marko> <lanl:pet> <lanl:fluffy> .\n")
    assert triples == [Triple(URI("lanl:marko"), URI("lanl:pet"), URI("lanl:fluffy"))]


def test_parse_empty_and_comments():
    assert parse_ntriples("") == []
    assert parse_ntriples("# nothing here\n\n   \n") == []


def test_parse_typed_literal():
    (t,) = parse_ntriples('<a:x> <a:y> "29"^^<xsd:int> .')
    assert t.o == Literal("29", "xsd:int")
    assert t.o.is_literal


def test_parse_full_iris_are_contracted():
    text = "<http://ex.org/a> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2000/01/rdf-schema#Class> ."
    (t,) = parse_ntriples(text)
    assert t.p == URI("rdf:type")
    assert t.o == URI("rdfs:Class")
    assert t.s == URI("http://ex.org/a")


def test_parse_escapes():
    (t,) = parse_ntriples(r'<a:x> <a:y> "tab\there \"q\" é" .')
    assert t.o.value == 'tab\there "q" é'


@pytest.mark.parametrize(
    "line",
    [
        "<a:x> <a:y> <a:z>",  # no terminator
        "<a:x> <a:y> .",
        "<a:x> <a:y> <a:z> <a:w> .",
        '<a:x> <a:y> "unterminated .',
        '<a:x> <a:y> "x"@en .',
    ],
)
def test_parse_syntax_errors_carry_line(line):
    with pytest.raises(NTriplesSyntaxError, match="line 2"):
        parse_ntriples("<a:ok> <a:ok> <a:ok> .\n" + line + "\n")


@pytest.mark.parametrize("line", ['"lit" <a:p> <a:o> .', '<a:s> "lit" <a:o> .', "<a:s> _:b <a:o> ."])
def test_parse_position_constraints(line):
    with pytest.raises(TripleConstraintError, match="line 1"):
        parse_ntriples(line)


def test_blank_labels_scoped_per_document():
    store = TripleStore()
    load_ntriples(store, "_:b1 <a:p> <a:o1> .")
    load_ntriples(store, "_:b1 <a:p> <a:o2> .")
    subjects = {t.s for t in store.triples()}
    assert len(subjects) == 2
    assert all(s.is_blank for s in subjects)


def test_term_invariants():
    with pytest.raises(ValueError):
        URI("no-scheme")
    with pytest.raises(ValueError):
        Blank("")
    with pytest.raises(TripleConstraintError):
        make_triple(Literal("x"), URI("a:p"), URI("a:o"))
    with pytest.raises(TripleConstraintError):
        make_triple(URI("a:s"), Blank("b"), URI("a:o"))


def test_insert_novelty_and_idempotence():
    store = TripleStore()
    t = Triple(URI("a:s"), URI("a:p"), URI("a:o"))
    assert insert(store, t) is True
    assert insert(store, t) is False
    assert len(store) == 1
    with pytest.raises(TripleConstraintError):
        insert(store, (Literal("1"), URI("a:p"), URI("a:o")))
    assert len(store) == 1


def test_match_examples():
    store = TripleStore()
    load_ntriples(
        store,
        "<lanl:Chihuahua> <rdfs:subClassOf> <lanl:Dog> .\n<lanl:Dog> <rdfs:subClassOf> <lanl:Mammal> .\n",
    )
    got = match(store, pattern("?x", "rdfs:subClassOf", "?y"))
    assert [(b["x"].value, b["y"].value) for b in got] == [
        ("lanl:Chihuahua", "lanl:Dog"),
        ("lanl:Dog", "lanl:Mammal"),
    ]
    assert match(store, pattern("lanl:Dog", "rdfs:subClassOf", "lanl:Mammal")) == [{}]
    store2 = TripleStore([(URI("a:a"), URI("a:p"), URI("a:b"))])
    assert match(store2, pattern("?x", "a:p", "?x")) == []


def test_repeated_variable_binds_equal_terms():
    store = TripleStore([(URI("a:a"), URI("a:p"), URI("a:a")), (URI("a:a"), URI("a:p"), URI("a:b"))])
    assert match(store, pattern("?x", "a:p", "?x")) == [{"x": URI("a:a")}]


def test_serialize_examples():
    assert serialize_ntriples([]) == ""
    text = serialize_ntriples([Triple(URI("a:s"), URI("a:p"), URI("a:o"))])
    assert text.count("\n") == 1 and text.endswith(" .\n")
    triples = parse_ntriples(FIG1)
    assert len(triples) == 5
    assert set(parse_ntriples(serialize_ntriples(triples))) == set(triples)


def test_serialization_is_sorted():
    text = serialize_ntriples(parse_ntriples(FIG1))
    lines = text.splitlines()
    assert lines == sorted(lines)


# -- properties --------------------------------------------------------------------

_local = st.text(alphabet="abcdefgh", min_size=1, max_size=3)
uris = _local.map(lambda s: URI(f"ex:{s}"))
blanks = _local.map(Blank)
literals = st.builds(
    Literal,
    st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=8),
    st.sampled_from([None, "xsd:int", "xsd:float"]),
)
triples_st = st.builds(Triple, st.one_of(uris, blanks), uris, st.one_of(uris, blanks, literals))


@settings(max_examples=150, deadline=None)
@given(st.lists(triples_st, max_size=30))
def test_round_trip(triples):
    store = TripleStore(triples)
    back = TripleStore(parse_ntriples(serialize_ntriples(store)))
    assert back == store


@settings(max_examples=60, deadline=None)
@given(st.lists(triples_st, max_size=200), st.data())
def test_index_coherence(triples, data):
    store = TripleStore(triples)
    sp, po, os_ = store.index_entries()
    assert sp == po == os_ == store.as_set()
    sample = data.draw(st.sampled_from(triples)) if triples else Triple(URI("ex:a"), URI("ex:b"), URI("ex:c"))
    for mask in range(8):
        pat = tuple(V(n) if mask & (1 << k) else sample[k] for k, n in enumerate("spo"))
        assert store.match(pat) == store.scan(pat)


def test_index_coherence_on_thousand_triples():
    import random

    rng = random.Random(3)
    terms = [URI(f"ex:{i}") for i in range(25)]
    store = TripleStore(
        (rng.choice(terms), rng.choice(terms[:5]), rng.choice(terms + [Literal(str(i)) for i in range(5)]))
        for _ in range(1000)
    )
    for s in terms[:5]:
        for p in terms[:5]:
            for pat in [(s, p, V("o")), (V("s"), p, s), (s, V("p"), V("o")), (V("s"), V("p"), s), (s, V("p"), s)]:
                assert store.match(pat) == store.scan(pat)


@settings(max_examples=100, deadline=None)
@given(st.lists(triples_st, min_size=1, max_size=20), st.integers(min_value=0))
def test_insert_existing_never_changes_size(triples, i):
    store = TripleStore(triples)
    n = len(store)
    assert store.add(triples[i % len(triples)]) is False
    assert len(store) == n
