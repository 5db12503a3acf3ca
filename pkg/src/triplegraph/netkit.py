"""Single-relational network algorithms over directed graphs.

Geodesic metrics (shortest path, eccentricity, radius, diameter, closeness,
betweenness) use breadth-first search. Random-walk metrics (stationary
distribution, PageRank, spreading activation) use sparse power iteration.
Assortative mixing covers scalar and nominal vertex metadata.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import (
    ConvergenceError,
    DegenerateError,
    GraphStructureError,
    NotStronglyConnectedError,
)
from .store import TripleStore
from .terms import Term, TriplePattern, V, sort_key


@dataclass
class Graph:
    """Directed graph on vertices ``0..n-1`` with sorted successor lists.

    ``vertex_ids[i]`` is the label (usually a Term) of vertex ``i``. Parallel
    edges are collapsed.
    """

    vertex_ids: list
    out_adj: list
    _index: dict = field(default=None, init=False, repr=False)

    def __post_init__(self):
        n = len(self.vertex_ids)
        if len(self.out_adj) != n:
            raise ValueError("one successor list per vertex is required")
        adj = []
        for i, succ in enumerate(self.out_adj):
            succ = sorted(set(int(j) for j in succ))
            if succ and (succ[0] < 0 or succ[-1] >= n):
                raise ValueError(f"successor of vertex {i} out of range")
            adj.append(tuple(succ))
        self.out_adj = adj

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, labels: Optional[Sequence] = None) -> "Graph":
        succ = [[] for _ in range(n)]
        for i, j in edges:
            succ[i].append(j)
        return cls(list(labels) if labels is not None else list(range(n)), succ)

    @classmethod
    def from_adjacency(cls, matrix, labels: Optional[Sequence] = None) -> "Graph":
        """Graph of the nonzero pattern of a square dense or sparse matrix."""
        m = sp.csr_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError("adjacency matrix must be square")
        m.eliminate_zeros()
        succ = [m.indices[m.indptr[i]:m.indptr[i + 1]].tolist() for i in range(m.shape[0])]
        return cls(list(labels) if labels is not None else list(range(m.shape[0])), succ)

    @property
    def n(self) -> int:
        return len(self.vertex_ids)

    @property
    def m(self) -> int:
        return sum(len(s) for s in self.out_adj)

    def edges(self) -> list[tuple]:
        return [(i, j) for i, succ in enumerate(self.out_adj) for j in succ]

    def index(self, label) -> int:
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self.vertex_ids)}
        return self._index[label]

    def vertex(self, v) -> int:
        """Resolve a vertex given by index or label."""
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            if not 0 <= v < self.n:
                raise IndexError(f"vertex index {v} out of range [0, {self.n})")
            return int(v)
        try:
            return self.index(v)
        except KeyError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def reverse(self) -> "Graph":
        pred = [[] for _ in range(self.n)]
        for i, j in self.edges():
            pred[j].append(i)
        return Graph(list(self.vertex_ids), pred)

    def out_degree(self) -> np.ndarray:
        return np.array([len(s) for s in self.out_adj], dtype=float)

    def adjacency(self) -> sp.csr_matrix:
        rows = [i for i, succ in enumerate(self.out_adj) for _ in succ]
        cols = [j for succ in self.out_adj for j in succ]
        data = np.ones(len(rows))
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def transition_matrix(self) -> sp.csr_matrix:
        """Row-stochastic matrix with uniform out-probabilities; sink rows are zero."""
        deg = self.out_degree()
        inv = np.divide(1.0, deg, out=np.zeros_like(deg), where=deg > 0)
        return sp.diags(inv) @ self.adjacency()


def graph_from_store(store: TripleStore, predicate: Term, include_literals: bool = False) -> Graph:
    """Single-relational slice of ``store`` for one predicate.

    Vertices are the distinct subjects and objects of the slice, numbered in
    sorted N-Triples order. Literal objects are dropped unless requested.
    """
    pat = TriplePattern(V("s"), predicate, V("o"))
    triples = [t for t in store.triples(pat) if include_literals or not t.o.is_literal]
    labels = sorted({t.s for t in triples} | {t.o for t in triples}, key=sort_key)
    index = {v: i for i, v in enumerate(labels)}
    return Graph.from_edges(len(labels), [(index[t.s], index[t.o]) for t in triples], labels)



# -- geodesics ---------------------------------------------------------------

def bfs_distances(g: Graph, source: int) -> list:
    """Hop distance from ``source`` to every vertex (None when unreachable)."""
    dist = [None] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.out_adj[u]:
            if dist[v] is None:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def shortest_path_length(g: Graph, i, j) -> Optional[int]:
    """Minimum hop count of a directed path from i to j; None if unreachable."""
    i, j = g.vertex(i), g.vertex(j)
    return bfs_distances(g, i)[j]


def all_pairs_distances(g: Graph) -> list:
    return [bfs_distances(g, i) for i in range(g.n)]


def check_strongly_connected(g: Graph) -> None:
    if g.n == 0:
        raise GraphStructureError("graph has no vertices")
    for graph, forward in ((g, True), (g.reverse(), False)):
        dist = bfs_distances(graph, 0)
        for v, d in enumerate(dist):
            if d is None:
                a, b = (g.vertex_ids[0], g.vertex_ids[v]) if forward else (g.vertex_ids[v], g.vertex_ids[0])
                raise NotStronglyConnectedError(a, b)


def is_strongly_connected(g: Graph) -> bool:
    try:
        check_strongly_connected(g)
    except GraphStructureError:
        return False
    return True


@dataclass(frozen=True)
class GeodesicSummary:
    eccentricities: tuple
    radius: int
    diameter: int


def geodesic_summary(g: Graph) -> GeodesicSummary:
    check_strongly_connected(g)
    ecc = tuple(max((d for k, d in enumerate(bfs_distances(g, i)) if k != i), default=0) for i in range(g.n))
    return GeodesicSummary(ecc, min(ecc), max(ecc))


def closeness(g: Graph) -> np.ndarray:
    """Reciprocal of the summed hop distance from each vertex to all others."""
    check_strongly_connected(g)
    if g.n < 2:
        raise GraphStructureError("closeness needs at least two vertices")
    return np.array([1.0 / sum(bfs_distances(g, i)) for i in range(g.n)])


def betweenness(g: Graph, exact: bool = False):
    """Sum over ordered pairs (j, k), j != i != k, of the fraction of shortest
    j-k paths passing through i.

    Per-source BFS with path counting and dependency accumulation. With
    ``exact=True`` the result is a list of Fractions.
    """
    check_strongly_connected(g)
    n = g.n
    one = Fraction(1) if exact else 1.0
    total = [one * 0 for _ in range(n)]
    for s in range(n):
        order = []
        preds = [[] for _ in range(n)]
        sigma = [0] * n
        dist = [-1] * n
        sigma[s], dist[s] = 1, 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            order.append(u)
            for v in g.out_adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
                if dist[v] == dist[u] + 1:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
        dep = [one * 0 for _ in range(n)]
        for w in reversed(order):
            for v in preds[w]:
                ratio = Fraction(sigma[v], sigma[w]) if exact else sigma[v] / sigma[w]
                dep[v] += ratio * (1 + dep[w])
            if w != s:
                total[w] += dep[w]
    return total if exact else np.array(total, dtype=float)


# -- random walks --------------------------------------------------------------

def period(g: Graph) -> int:
    """Period of a strongly connected graph: gcd of level differences over edges."""
    level = bfs_distances(g, 0)
    p = 0
    for u, v in g.edges():
        p = math.gcd(p, abs(level[u] + 1 - level[v]))
    return p


def _power_iterate(step, n, tol, max_iter, what):
    pi = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = step(pi)
        nxt /= nxt.sum()
        if np.abs(nxt - pi).sum() < tol:
            return nxt
        pi = nxt
    raise ConvergenceError(f"{what} did not converge within {max_iter} iterations (tol={tol})")


def stationary_distribution(g: Graph, tol: float = 1e-10, max_iter: int = 100_000) -> np.ndarray:
    """Stationary distribution of the uniform random walk on ``g``.

    The graph must have no sinks and be strongly connected and aperiodic.
    """
    if g.n == 0:
        raise GraphStructureError("graph has no vertices")
    sinks = [g.vertex_ids[i] for i, s in enumerate(g.out_adj) if not s]
    if sinks:
        raise GraphStructureError(f"graph has rank sinks: {sinks[:5]}")
    check_strongly_connected(g)
    p = period(g)
    if p != 1:
        raise GraphStructureError(f"graph is periodic (period {p})")
    at = g.transition_matrix().T.tocsr()
    return _power_iterate(lambda pi: at @ pi, g.n, tol, max_iter, "stationary distribution")


def pagerank(g: Graph, alpha: float = 0.85, tol: float = 1e-10, max_iter: int = 100_000) -> np.ndarray:
    """PageRank of ``g``: the stationary vector of alpha*A + (1-alpha)*B.

    A is the uniform transition matrix with every rank-sink row replaced by
    the uniform row 1/n; B is the uniform teleport matrix. Neither the sink
    rows nor B are materialized.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    n = g.n
    if n == 0:
        raise GraphStructureError("graph has no vertices")
    at = g.transition_matrix().T.tocsr()
    sink = g.out_degree() == 0

    def step(pi):
        leaked = pi[sink].sum()
        return alpha * (at @ pi) + (alpha * leaked + (1.0 - alpha) * pi.sum()) / n

    return _power_iterate(step, n, tol, max_iter, "pagerank")


def pagerank_matrix(g: Graph, alpha: float = 0.85) -> np.ndarray:
    """Dense C = alpha*A + (1-alpha)*B (for small graphs and checks)."""
    n = g.n
    a = np.zeros((n, n))
    for i, succ in enumerate(g.out_adj):
        if succ:
            a[i, list(succ)] = 1.0 / len(succ)
        else:
            a[i, :] = 1.0 / n
    return alpha * a + (1.0 - alpha) / n


def walk_residual(pi: np.ndarray, matrix) -> float:
    """L1 norm of pi @ matrix - pi."""
    return float(np.abs(pi @ matrix - pi).sum())


def _vector(g: Graph, values, name: str) -> np.ndarray:
    if isinstance(values, Mapping):
        out = np.zeros(g.n)
        for k, v in values.items():
            out[g.vertex(k)] = v
        return out
    arr = np.asarray(values, dtype=float)
    if arr.shape != (g.n,):
        raise ValueError(f"{name} must have one entry per vertex")
    return arr


def spreading_activation(g: Graph, seeds, steps: int, delta: float) -> np.ndarray:
    """Accumulated energy flow from seed vertices.

    Each step adds the current energy to the total, then decays it by
    ``delta`` and pushes it one hop along the row-stochastic transition matrix.
    Energy reaching a sink is lost. The result is not normalized.
    """
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must lie in [0, 1]")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    x = _vector(g, seeds, "seeds")
    if (x < 0).any():
        raise ValueError("seed energies must be non-negative")
    at = g.transition_matrix().T.tocsr()
    pi = np.zeros(g.n)
    for _ in range(steps):
        pi = pi + x
        x = at @ (delta * x)
    return pi


# -- assortativity --------------------------------------------------------------

def assortativity_scalar(g: Graph, values) -> float:
    """Pearson correlation of tail and head values over all edges."""
    edges = g.edges()
    if len(edges) < 2:
        raise DegenerateError("assortativity needs at least two edges")
    if isinstance(values, Mapping):
        lookup = {g.vertex(k): float(v) for k, v in values.items()}
    else:
        lookup = dict(enumerate(_vector(g, values, "values")))
    try:
        j = np.array([lookup[u] for u, _ in edges])
        k = np.array([lookup[v] for _, v in edges])
    except KeyError as exc:
        raise ValueError(f"no value for vertex {g.vertex_ids[exc.args[0]]!r}") from None
    m = len(edges)
    num = m * (j * k).sum() - j.sum() * k.sum()
    den_j = m * (j * j).sum() - j.sum() ** 2
    den_k = m * (k * k).sum() - k.sum() ** 2
    if den_j <= 0 or den_k <= 0 or np.ptp(j) == 0 or np.ptp(k) == 0:
        raise DegenerateError("tail or head values have zero variance")
    return float(num / math.sqrt(den_j * den_k))


def assortativity_nominal(g: Graph, labels) -> float:
    """(sum_p e_pp - sum_p a_p b_p) / (1 - sum_p a_p b_p) with edge fractions."""
    edges = g.edges()
    if not edges:
        raise DegenerateError("assortativity needs at least one edge")
    if isinstance(labels, Mapping):
        lab = {g.vertex(k): v for k, v in labels.items()}
    else:
        lab = dict(enumerate(labels))
    m = len(edges)
    same: dict = {}
    tail: dict = {}
    head: dict = {}
    for u, v in edges:
        try:
            lu, lv = lab[u], lab[v]
        except KeyError as exc:
            raise ValueError(f"no label for vertex {g.vertex_ids[exc.args[0]]!r}") from None
        tail[lu] = tail.get(lu, 0) + 1
        head[lv] = head.get(lv, 0) + 1
        if lu == lv:
            same[lu] = same.get(lu, 0) + 1
    e = sum(same.values()) / m
    ab = sum(tail[p] * head.get(p, 0) for p in tail) / (m * m)
    if math.isclose(ab, 1.0):
        raise DegenerateError("a single label covers every edge endpoint")
    return (e - ab) / (1.0 - ab)
