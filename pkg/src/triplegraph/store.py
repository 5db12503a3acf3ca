"""In-memory triple store with (s,p), (p,o) and (o,s) indices.

Readers may run concurrently; mutation needs exclusive access. Every query
returns a fresh list, so results stay valid after later inserts.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Iterator, Optional

from .terms import (
    Term,
    Triple,
    TriplePattern,
    Variable,
    make_triple,
    unify,
)


def triple_key(t: Triple):
    return (t.s.n3(), t.p.n3(), t.o.n3())


def bindings_for(pat: TriplePattern, triples: Iterable[Triple]) -> list[dict]:
    """Bindings of ``pat`` against candidate triples, in sorted triple order.

    Repeated variable names must bind equal terms; non-matching candidates
    are dropped.
    """
    out = []
    for t in sorted(triples, key=triple_key):
        b = unify(pat, t)
        if b is not None:
            out.append(b)
    return out


class TripleStore:
    def __init__(self, triples: Iterable = ()):
        self._triples: set[Triple] = set()
        self._sp = defaultdict(set)  # (s, p) -> {o}
        self._po = defaultdict(set)  # (p, o) -> {s}
        self._os = defaultdict(set)  # (o, s) -> {p}
        self._s = defaultdict(set)  # s -> {p}
        self._p = defaultdict(set)  # p -> {o}
        self._o = defaultdict(set)  # o -> {s}
        self.blank_labels: set[str] = set()
        for t in triples:
            self.add(t)

    def __len__(self):
        return len(self._triples)

    def __contains__(self, t):
        return tuple(t) in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.sorted_triples())

    def __eq__(self, other):
        if isinstance(other, TripleStore):
            return self._triples == other._triples
        return NotImplemented

    def __repr__(self):
        return f"<TripleStore {len(self)} triples>"

    def sorted_triples(self) -> list[Triple]:
        return sorted(self._triples, key=triple_key)

    def as_set(self) -> frozenset:
        return frozenset(self._triples)

    def copy(self) -> "TripleStore":
        new = TripleStore()
        new.update(self._triples)
        return new

    def add(self, t) -> bool:
        """Insert a triple; True iff it was not already present."""
        t = make_triple(*t)
        if t in self._triples:
            return False
        s, p, o = t
        self._triples.add(t)
        self._sp[s, p].add(o)
        self._po[p, o].add(s)
        self._os[o, s].add(p)
        self._s[s].add(p)
        self._p[p].add(o)
        self._o[o].add(s)
        for term in t:
            if term.is_blank:
                self.blank_labels.add(term.value)
        return True

    insert = add

    def update(self, triples: Iterable) -> int:
        return sum(self.add(t) for t in triples)

    def _candidates(self, pat: TriplePattern) -> Iterable[Triple]:
        s, p, o = (None if isinstance(x, Variable) else x for x in pat)
        if s is not None and p is not None and o is not None:
            t = Triple(s, p, o)
            return [t] if t in self._triples else []
        if s is not None and p is not None:
            return [Triple(s, p, x) for x in self._sp.get((s, p), ())]
        if p is not None and o is not None:
            return [Triple(x, p, o) for x in self._po.get((p, o), ())]
        if o is not None and s is not None:
            return [Triple(s, x, o) for x in self._os.get((o, s), ())]
        if s is not None:
            return [Triple(s, pp, oo) for pp in self._s.get(s, ()) for oo in self._sp[s, pp]]
        if p is not None:
            return [Triple(ss, p, oo) for oo in self._p.get(p, ()) for ss in self._po[p, oo]]
        if o is not None:
            return [Triple(ss, pp, o) for ss in self._o.get(o, ()) for pp in self._os[o, ss]]
        return self._triples

    def triples(self, pat: Optional[TriplePattern] = None) -> list[Triple]:
        """Triples matching ``pat`` (all triples if None), sorted."""
        if pat is None:
            return self.sorted_triples()
        return [t for t in sorted(self._candidates(pat), key=triple_key) if unify(pat, t) is not None]

    def match(self, pat: TriplePattern) -> list[dict]:
        """One binding map (variable name -> Term) per matching triple."""
        return bindings_for(pat, self._candidates(pat))

    def scan(self, pat: TriplePattern) -> list[dict]:
        """Linear-scan match, ignoring the indices (reference for index checks)."""
        return bindings_for(pat, self._triples)

    def subjects(self) -> set[Term]:
        return set(self._s)

    def predicates(self) -> set[Term]:
        return set(self._p)

    def objects(self) -> set[Term]:
        return set(self._o)

    def uris(self) -> list[Term]:
        """Sorted URIs occurring in subject or object position."""
        return sorted(t for t in self.subjects() | self.objects() if t.is_uri)

    def index_entries(self) -> set[Triple]:
        """Triples reconstructed from each index; used for coherence checks."""
        sp = {Triple(s, p, o) for (s, p), os_ in self._sp.items() for o in os_}
        po = {Triple(s, p, o) for (p, o), ss in self._po.items() for s in ss}
        os_ = {Triple(s, p, o) for (o, s), ps in self._os.items() for p in ps}
        return sp, po, os_


def match(store: TripleStore, pat: TriplePattern) -> list[dict]:
    return store.match(pat)


def insert(store: TripleStore, t) -> bool:
    return store.add(t)
