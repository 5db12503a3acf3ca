"""Triple store with RDFS, OWL-subset and NAL reasoning, single- and
multi-relational network analysis, and grammar-based walkers."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .terms import Blank, Literal, Term, TermKind, Triple, TriplePattern, URI, V, Variable, pattern
from .store import TripleStore
from .ntriples import load_ntriples, parse_ntriples, serialize_ntriples
from .rdfs import entails, materialize_rdfs
from .owl import SameAsPartition, detect_clashes, extract_restrictions, materialize_owl
from .nal import Judgment, SyllogismRule, TruthValue, apply_syllogism, saturate
from .netkit import (
    Graph,
    assortativity_nominal,
    assortativity_scalar,
    betweenness,
    closeness,
    geodesic_summary,
    graph_from_store,
    pagerank,
    shortest_path_length,
    spreading_activation,
    stationary_distribution,
)
from .path_algebra import eval_path_expr, parse_path_expr, tensor_from_store
from .walkers import Grammar, eval_walker_query, parse_walker_query, run_geodesic_walkers, run_random_walkers
