"""RDFS subsumption and realization.

Four subsumption rules (class/datatype lifting, subPropertyOf and subClassOf
transitivity) and six realization rules. The last realization rule reads
``rdfs:range`` and types the object of a use of the property. Rules whose
conclusion would put a literal in subject position simply do not fire.
"""
from __future__ import annotations

from typing import Iterable

from .rules import DEFAULT_CAP, Entailment, Rule, forward_chain, tabled_query
from .store import TripleStore
from .terms import TriplePattern, V
from .vocab import (
    RDF_PROPERTY,
    RDF_TYPE,
    RDFS_CLASS,
    RDFS_DATATYPE,
    RDFS_DOMAIN,
    RDFS_LITERAL,
    RDFS_RANGE,
    RDFS_RESOURCE,
    RDFS_SUBCLASS_OF,
    RDFS_SUBPROPERTY_OF,
)

w, x, y, z = V("w"), V("x"), V("y"), V("z")
P = TriplePattern

RDFS_RULES = (
    Rule("sub-class-resource", P(x, RDFS_SUBCLASS_OF, RDFS_RESOURCE), (P(x, RDF_TYPE, RDFS_CLASS),)),
    Rule("datatype-literal", P(x, RDFS_SUBCLASS_OF, RDFS_LITERAL), (P(x, RDF_TYPE, RDFS_DATATYPE),)),
    Rule(
        "subproperty-trans",
        P(x, RDFS_SUBPROPERTY_OF, z),
        (P(x, RDFS_SUBPROPERTY_OF, y), P(y, RDFS_SUBPROPERTY_OF, z)),
    ),
    Rule(
        "subclass-trans",
        P(x, RDFS_SUBCLASS_OF, z),
        (P(x, RDFS_SUBCLASS_OF, y), P(y, RDFS_SUBCLASS_OF, z)),
    ),
    Rule("res-subject", P(x, RDF_TYPE, RDFS_RESOURCE), (P(x, y, z),)),
    Rule("prop-predicate", P(y, RDF_TYPE, RDF_PROPERTY), (P(x, y, z),)),
    Rule("res-object", P(z, RDF_TYPE, RDFS_RESOURCE), (P(x, y, z),)),
    Rule("type-lift", P(x, RDF_TYPE, z), (P(x, RDF_TYPE, y), P(y, RDFS_SUBCLASS_OF, z))),
    Rule("domain-type", P(y, RDF_TYPE, x), (P(w, RDFS_DOMAIN, x), P(y, w, z))),
    Rule("range-type", P(z, RDF_TYPE, x), (P(w, RDFS_RANGE, x), P(y, w, z))),
)

RULE_IDS = tuple(r.name for r in RDFS_RULES)


def materialize_rdfs(store: TripleStore, cap: int = DEFAULT_CAP) -> list[Entailment]:
    """Run the RDFS rules to fixpoint, inserting what they entail.

    Returns only the novel entailments, each with the rule and premises that
    produced it. Raises ResourceLimitError past ``cap`` derived triples.
    """
    return forward_chain(store, RDFS_RULES, cap=cap)


def entails(store: TripleStore, pat: TriplePattern, cap: int = DEFAULT_CAP) -> list[dict]:
    """Answer ``pat`` against the RDFS closure without materializing it."""
    return tabled_query(store, RDFS_RULES, pat, cap=cap)


def rules_by_name(names: Iterable[str]) -> tuple:
    lookup = {r.name: r for r in RDFS_RULES}
    return tuple(lookup[n] for n in names)
