"""Reserved vocabulary.

Terms are kept in compact ``prefix:local`` form. The N-Triples reader contracts
full IRIs in the rdf, rdfs, owl and xsd namespaces to this form, so data
written either way meets the same rule vocabulary.
"""
from .terms import URI

NAMESPACES = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "owl": "http://www.w3.org/2002/07/owl#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}


def contract(iri: str) -> str:
    for prefix, ns in NAMESPACES.items():
        if iri.startswith(ns) and len(iri) > len(ns):
            return f"{prefix}:{iri[len(ns):]}"
    return iri


RDF_TYPE = URI("rdf:type")
RDF_PROPERTY = URI("rdf:Property")

RDFS_CLASS = URI("rdfs:Class")
RDFS_RESOURCE = URI("rdfs:Resource")
RDFS_LITERAL = URI("rdfs:Literal")
RDFS_DATATYPE = URI("rdfs:Datatype")
RDFS_DOMAIN = URI("rdfs:domain")
RDFS_RANGE = URI("rdfs:range")
RDFS_SUBCLASS_OF = URI("rdfs:subClassOf")
RDFS_SUBPROPERTY_OF = URI("rdfs:subPropertyOf")

OWL_CLASS = URI("owl:Class")
OWL_RESTRICTION = URI("owl:Restriction")
OWL_ON_PROPERTY = URI("owl:onProperty")
OWL_MAX_CARDINALITY = URI("owl:maxCardinality")
OWL_CARDINALITY = URI("owl:cardinality")
OWL_SAME_AS = URI("owl:sameAs")
OWL_DIFFERENT_FROM = URI("owl:differentFrom")
OWL_SYMMETRIC_PROPERTY = URI("owl:SymmetricProperty")
OWL_TRANSITIVE_PROPERTY = URI("owl:TransitiveProperty")

XSD_FLOAT = "xsd:float"
XSD_INT = "xsd:int"
XSD_NON_NEGATIVE_INTEGER = "xsd:nonNegativeInteger"

NAL_FREQUENCY = URI("nal:frequency")
NAL_CONFIDENCE = URI("nal:confidence")


def nal_component(i: int):
    """Ordered component slot ``nal:_i`` (1-based) of a product set."""
    if i < 1:
        raise ValueError("component index is 1-based")
    return URI(f"nal:_{i}")
