"""OWL subset: symmetric and transitive properties, cardinality-driven sameAs
and differentFrom clashes.

A restriction is an ``owl:Restriction`` node attached to a class with
``rdfs:subClassOf`` and carrying ``owl:onProperty`` plus ``owl:maxCardinality``
or ``owl:cardinality``. A bound of 1 merges the fillers of each restricted
instance into one sameAs class; any bound is checked against fillers that are
pairwise ``owl:differentFrom``. Clashes are reported, never raised, and an
instance whose fillers clash contributes no sameAs conclusions.

Fillers are normally the objects of ``(instance, property, filler)``. When the
property declares the restricted class as its ``rdfs:range`` (and not as its
domain) the instance sits in object position, so fillers are the subjects of
``(filler, property, instance)``.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .errors import ResourceLimitError
from .rules import DEFAULT_CAP, Entailment, Rule, forward_chain
from .store import TripleStore, triple_key
from .terms import Term, Triple, TriplePattern, V, pattern
from .vocab import (
    OWL_CARDINALITY,
    OWL_DIFFERENT_FROM,
    OWL_MAX_CARDINALITY,
    OWL_ON_PROPERTY,
    OWL_RESTRICTION,
    OWL_SAME_AS,
    OWL_SYMMETRIC_PROPERTY,
    OWL_TRANSITIVE_PROPERTY,
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASS_OF,
)


class MalformedRestrictionWarning(UserWarning):
    pass


w, x, y, z = V("w"), V("x"), V("y"), V("z")
P = TriplePattern

OWL_RULES = (
    Rule("owl-symmetric", P(z, y, x), (P(y, RDF_TYPE, OWL_SYMMETRIC_PROPERTY), P(x, y, z))),
    Rule(
        "owl-transitive",
        P(w, y, z),
        (P(y, RDF_TYPE, OWL_TRANSITIVE_PROPERTY), P(w, y, x), P(x, y, z)),
    ),
    Rule("owl-different-symmetric", P(y, OWL_DIFFERENT_FROM, x), (P(x, OWL_DIFFERENT_FROM, y),)),
    Rule("owl-sameas-symmetric", P(y, OWL_SAME_AS, x), (P(x, OWL_SAME_AS, y),)),
    Rule(
        "owl-sameas-transitive",
        P(x, OWL_SAME_AS, z),
        (P(x, OWL_SAME_AS, y), P(y, OWL_SAME_AS, z)),
        distinct=(("x", "z"),),
    ),
)


@dataclass(frozen=True)
class Restriction:
    on_class: Term
    on_property: Term
    max_cardinality: int
    node: Optional[Term] = None
    inverse: bool = False

    def to_json(self) -> dict:
        return {
            "on_class": self.on_class.n3(),
            "on_property": self.on_property.n3(),
            "max_cardinality": self.max_cardinality,
            "node": self.node.n3() if self.node is not None else None,
            "inverse": self.inverse,
        }


@dataclass(frozen=True)
class Inconsistency:
    kind: str
    culprits: tuple
    restriction: Restriction
    instance: Term

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "restriction": self.restriction.to_json(),
            "instance": self.instance.n3(),
            "culprits": [[t.n3() for t in c] for c in self.culprits],
        }


def inconsistencies_to_json(items) -> str:
    return json.dumps([i.to_json() for i in items], indent=2, ensure_ascii=False) + "\n"


class SameAsPartition:
    """Union-find over terms. The smallest member (by N-Triples text) of a
    class is its representative, so results do not depend on union order."""

    def __init__(self):
        self._parent: dict[Term, Term] = {}

    def find(self, t: Term) -> Term:
        root = t
        while self._parent.get(root, root) != root:
            root = self._parent[root]
        while t != root:  # path compression
            nxt = self._parent.get(t, t)
            self._parent[t] = root
            t = nxt
        return root

    def union(self, a: Term, b: Term) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self._parent.setdefault(ra, ra)
        self._parent[rb] = ra
        return True

    def same(self, a: Term, b: Term) -> bool:
        return self.find(a) == self.find(b)

    def classes(self) -> list[list[Term]]:
        groups: dict[Term, list[Term]] = {}
        for t in list(self._parent):
            groups.setdefault(self.find(t), []).append(t)
        return sorted((sorted(g) for g in groups.values() if len(g) > 1), key=lambda g: g[0].n3())

    @classmethod
    def from_store(cls, store: TripleStore) -> "SameAsPartition":
        part = cls()
        for t in store.triples(pattern("?a", OWL_SAME_AS, "?b")):
            if not t.o.is_literal:
                part.union(t.s, t.o)
        return part


def _cardinality(store: TripleStore, node: Term) -> Optional[int]:
    values = [t.o for p in (OWL_MAX_CARDINALITY, OWL_CARDINALITY) for t in store.triples(P(node, p, V("n")))]
    bounds = set()
    for v in values:
        try:
            n = int(v.value)
        except ValueError:
            return None
        if n < 0:
            return None
        bounds.add(n)
    return min(bounds) if bounds else None


def extract_restrictions(store: TripleStore, warn: bool = True) -> list[Restriction]:
    """One Restriction per well-formed restriction node reachable from a class
    via rdfs:subClassOf; malformed ones are skipped with a warning."""
    out = []
    for t in store.triples(P(V("c"), RDFS_SUBCLASS_OF, V("r"))):
        cls_, node = t.s, t.o
        props = [u.o for u in store.triples(P(node, OWL_ON_PROPERTY, V("p")))]
        has_bound = bool(store.triples(P(node, OWL_MAX_CARDINALITY, V("n")))) or bool(
            store.triples(P(node, OWL_CARDINALITY, V("n")))
        )
        typed = (node, RDF_TYPE, OWL_RESTRICTION) in store
        if not (typed or props or has_bound):
            continue
        if not has_bound and _has_other_constraint(store, node):
            continue  # hasValue, someValuesFrom, ... are not handled
        bound = _cardinality(store, node)
        problem = None
        if len(props) != 1 or not props[0].is_uri:
            problem = "missing or ambiguous owl:onProperty"
        elif not has_bound:
            problem = "missing cardinality bound"
        elif bound is None:
            problem = "cardinality bound is not a non-negative integer"
        if problem is not None:
            if warn:
                warnings.warn(
                    f"skipping restriction {node.n3()} on {cls_.n3()}: {problem}",
                    MalformedRestrictionWarning,
                    stacklevel=2,
                )
            continue
        prop = props[0]
        inverse = (prop, RDFS_RANGE, cls_) in store and (prop, RDFS_DOMAIN, cls_) not in store
        out.append(Restriction(cls_, prop, bound, node, inverse))
    return out


_OTHER_CONSTRAINTS = ("owl:hasValue", "owl:allValuesFrom", "owl:someValuesFrom", "owl:minCardinality")


def _has_other_constraint(store, node) -> bool:
    return any(p.value in _OTHER_CONSTRAINTS for p in {t.p for t in store.triples(P(node, V("p"), V("o")))})


def _fillers(store: TripleStore, r: Restriction, instance: Term) -> dict[Term, Triple]:
    if r.inverse:
        found = store.triples(P(V("f"), r.on_property, instance))
        return {t.s: t for t in found}
    found = store.triples(P(instance, r.on_property, V("f")))
    return {t.o: t for t in found if not t.o.is_literal}


def _instances(store: TripleStore, restrictions) -> list[tuple]:
    """Sorted (restriction, instance) pairs, one per restriction node and instance."""
    seen = {}
    for r in restrictions:
        for t in store.triples(P(V("i"), RDF_TYPE, r.on_class)):
            key = (r.node, t.s)
            if key not in seen:
                seen[key] = (r, t.s, t)
    return [seen[k] for k in sorted(seen, key=lambda k: (k[0].n3(), k[1].n3()))]


def _max_clique(nodes, adjacent) -> list:
    best: list = []

    def expand(clique, candidates):
        nonlocal best
        if len(clique) > len(best):
            best = list(clique)
        for i, v in enumerate(candidates):
            if len(clique) + len(candidates) - i <= len(best):
                return
            expand(clique + [v], [u for u in candidates[i + 1:] if adjacent(u, v)])

    expand([], list(nodes))
    return best


class _Different:
    def __init__(self, store: TripleStore, part: SameAsPartition):
        self.part = part
        self.triples = [t for t in store.triples(pattern("?a", OWL_DIFFERENT_FROM, "?b")) if not t.o.is_literal]

    def witnesses(self, a: Term, b: Term) -> list[Triple]:
        ra, rb = self.part.find(a), self.part.find(b)
        return [t for t in self.triples if {self.part.find(t.s), self.part.find(t.o)} == {ra, rb}]

    def __call__(self, a: Term, b: Term) -> bool:
        return bool(self.witnesses(a, b))


def _merge_fillers(store, part, restrictions) -> dict[Triple, Entailment]:
    new: dict[Triple, Entailment] = {}
    different = _Different(store, part)
    for r, instance, type_triple in _instances(store, restrictions):
        if r.max_cardinality != 1:
            continue
        fillers = _fillers(store, r, instance)
        if len(_max_clique(sorted(fillers), different)) > 1:
            continue  # clashing fillers: report, do not equate
        support = [
            (r.on_class, RDFS_SUBCLASS_OF, r.node),
            (r.node, OWL_ON_PROPERTY, r.on_property),
        ] + [tuple(t) for p in (OWL_MAX_CARDINALITY, OWL_CARDINALITY) for t in store.triples(P(r.node, p, V("n")))]
        for a, b in combinations(sorted(fillers), 2):
            if part.same(a, b) or different(a, b):
                continue
            part.union(a, b)
            premises = tuple(Triple(*t) for t in [fillers[a], fillers[b], type_triple] + support)
            for s, o in ((a, b), (b, a)):
                t = Triple(s, OWL_SAME_AS, o)
                if t not in store and t not in new:
                    new[t] = Entailment(t, "owl-max-cardinality", premises)
    return new


def detect_clashes(store: TripleStore, restrictions=None) -> list[Inconsistency]:
    """Cardinality clashes in the current store, one per restricted instance."""
    if restrictions is None:
        restrictions = extract_restrictions(store, warn=False)
    part = SameAsPartition.from_store(store)
    different = _Different(store, part)
    out = []
    for r, instance, type_triple in _instances(store, restrictions):
        fillers = _fillers(store, r, instance)
        clique = _max_clique(sorted(fillers), different)
        if len(clique) <= r.max_cardinality:
            continue
        culprits = {fillers[f] for f in clique}
        for a, b in combinations(clique, 2):
            culprits.update(different.witnesses(a, b))
        out.append(
            Inconsistency("cardinality-clash", tuple(sorted(culprits, key=triple_key)), r, instance)
        )
    return out


def materialize_owl(store: TripleStore, cap: int = DEFAULT_CAP):
    """Run the OWL rule families to fixpoint.

    Expects RDFS materialization to have supplied the ``rdf:type`` facts.
    Returns ``(entailments, inconsistencies)``; inconsistencies describe the
    final store, so repeated calls report the same clashes.
    """
    restrictions = extract_restrictions(store)
    entailments: list[Entailment] = []
    while True:
        entailments += forward_chain(store, OWL_RULES, cap=cap - len(entailments))
        restrictions = extract_restrictions(store, warn=False)
        merged = _merge_fillers(store, SameAsPartition.from_store(store), restrictions)
        if not merged:
            break
        if len(entailments) + len(merged) > cap:
            raise ResourceLimitError(f"derivation exceeded cap of {cap} triples")
        for t in sorted(merged, key=triple_key):
            store.add(t)
            entailments.append(merged[t])
    return entailments, detect_clashes(store, restrictions)


def reason_owl(store: TripleStore, cap: int = DEFAULT_CAP, with_rdfs: bool = True):
    """Alternate RDFS and OWL materialization until neither adds a triple.

    Returns ``(entailments, inconsistencies)`` like materialize_owl.
    """
    from .rdfs import materialize_rdfs

    entailments: list[Entailment] = []
    while True:
        before = len(store)
        if with_rdfs:
            entailments += materialize_rdfs(store, cap=cap - len(entailments))
        found, clashes = materialize_owl(store, cap=cap - len(entailments))
        entailments += found
        if len(store) == before or not with_rdfs:
            return entailments, clashes
