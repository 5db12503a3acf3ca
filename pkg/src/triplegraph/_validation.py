"""Input coercion and parameter checks shared by the estimator wrappers."""
from __future__ import annotations

import numbers

import numpy as np
import scipy.sparse as sp

from .netkit import Graph
from .ntriples import load_ntriples
from .store import TripleStore
from .terms import Triple


def check_store(X) -> TripleStore:
    """Accept a TripleStore, N-Triples text, or an iterable of triples."""
    if isinstance(X, TripleStore):
        return X
    store = TripleStore()
    if isinstance(X, str):
        load_ntriples(store, X)
        return store
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"expected a triple store, N-Triples text or triples, got {type(X).__name__}") from None
    for t in items:
        store.add(Triple(*t))
    return store


def check_graph(X) -> Graph:
    """Accept a Graph or a square adjacency matrix (dense or sparse)."""
    if isinstance(X, Graph):
        return X
    if sp.issparse(X) or isinstance(X, (np.ndarray, list)):
        m = sp.csr_matrix(np.asarray(X) if isinstance(X, list) else X)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got shape {m.shape}")
        if m.nnz and not np.isfinite(m.data).all():
            raise ValueError("adjacency matrix has non-finite entries")
        return Graph.from_adjacency(m)
    raise TypeError(f"expected a Graph or adjacency matrix, got {type(X).__name__}")


def check_fraction(name: str, value, low_open: bool = False, high_open: bool = False) -> float:
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise TypeError(f"{name} must be a real number")
    value = float(value)
    low_ok = value > 0 if low_open else value >= 0
    high_ok = value < 1 if high_open else value <= 1
    if not (low_ok and high_ok):
        lo = "(" if low_open else "["
        hi = ")" if high_open else "]"
        raise ValueError(f"{name} must lie in {lo}0, 1{hi}, got {value}")
    return value


def check_count(name: str, value, minimum: int = 0) -> int:
    if not isinstance(value, numbers.Integral) or isinstance(value, bool):
        raise TypeError(f"{name} must be an integer")
    if value < minimum:
        raise ValueError(f"{name} must be at least {minimum}, got {value}")
    return int(value)


def check_tol(value) -> float:
    if not isinstance(value, numbers.Real) or not value > 0:
        raise ValueError(f"tol must be a positive number, got {value!r}")
    return float(value)
