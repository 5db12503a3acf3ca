import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import (
    INF,
    brute_betweenness,
    dense_stationary,
    dense_transition,
    floyd_warshall,
    nominal_tally,
    pearson,
    random_digraph,
    random_strongly_connected,
)
from triplegraph.errors import DegenerateError, GraphStructureError, NotStronglyConnectedError
from triplegraph.netkit import (
    Graph,
    assortativity_nominal,
    assortativity_scalar,
    betweenness,
    bfs_distances,
    closeness,
    geodesic_summary,
    graph_from_store,
    pagerank,
    pagerank_matrix,
    period,
    shortest_path_length,
    spreading_activation,
    stationary_distribution,
    walk_residual,
)
from triplegraph.ntriples import load_ntriples
from triplegraph.store import TripleStore
from triplegraph.terms import Literal, Triple, URI


def G(n, edges):
    return Graph.from_edges(n, edges)


def cycle(n):
    return G(n, [(i, (i + 1) % n) for i in range(n)])


def star(n):
    return G(n, [(0, i) for i in range(1, n)] + [(i, 0) for i in range(1, n)])


def complete(n):
    return G(n, [(i, j) for i in range(n) for j in range(n) if i != j])


# -- graph extraction ----------------------------------------------------------------

def test_graph_from_store():
    s = TripleStore()
    load_ntriples(s, "<a:a> <a:p> <a:b> .\n<a:b> <a:p> <a:c> .\n<a:a> <a:p> <a:c> .\n<a:a> <a:q> <a:d> .\n")
    g = graph_from_store(s, URI("a:p"))
    assert g.n == 3 and g.m == 3
    assert [v.value for v in g.vertex_ids] == ["a:a", "a:b", "a:c"]
    assert graph_from_store(s, URI("a:missing")).n == 0


def test_graph_from_store_literals_flag():
    s = TripleStore([(URI("a:x"), URI("a:age"), Literal("29", "xsd:int")), (URI("a:x"), URI("a:age"), URI("a:y"))])
    assert graph_from_store(s, URI("a:age")).n == 2
    assert graph_from_store(s, URI("a:age"), include_literals=True).n == 3


def test_authorship_slice_is_bipartite():
    s = TripleStore()
    load_ntriples(
        s,
        "<a:marko> <a:authored> <a:p1> .\n<a:johan> <a:authored> <a:p1> .\n"
        "<a:marko> <a:authored> <a:p2> .\n<a:p2> <a:cites> <a:p1> .\n",
    )
    g = graph_from_store(s, URI("a:authored"))
    scholars = {g.index(URI("a:marko")), g.index(URI("a:johan"))}
    assert all(i in scholars and j not in scholars for i, j in g.edges())


def test_parallel_edges_collapse():
    g = G(2, [(0, 1), (0, 1), (1, 0)])
    assert g.m == 2


# -- geodesics -----------------------------------------------------------------------

def test_shortest_path_examples():
    chain = G(3, [(0, 1), (1, 2)])
    assert shortest_path_length(chain, 0, 2) == 2
    assert shortest_path_length(chain, 1, 1) == 0
    assert shortest_path_length(chain, 2, 0) is None
    with pytest.raises(IndexError):
        shortest_path_length(chain, 0, 5)


@pytest.mark.parametrize("seed", range(10))
def test_shortest_paths_match_floyd_warshall(seed):
    rng = np.random.default_rng(seed)
    edges = random_digraph(rng, 20, 0.1)
    g = G(20, edges)
    fw = floyd_warshall(20, edges)
    for i in range(20):
        d = bfs_distances(g, i)
        assert [INF if x is None else x for x in d] == fw[i]


@pytest.mark.parametrize("seed", range(5))
def test_triangle_inequality(seed):
    rng = np.random.default_rng(seed)
    g = G(15, random_digraph(rng, 15, 0.15))
    d = [bfs_distances(g, i) for i in range(15)]
    for i in range(15):
        for j in range(15):
            for k in range(15):
                if None not in (d[i][k], d[i][j], d[j][k]):
                    assert d[i][k] <= d[i][j] + d[j][k]


def test_geodesic_examples():
    s = geodesic_summary(cycle(4))
    assert s.eccentricities == (3, 3, 3, 3) and s.radius == s.diameter == 3
    s = geodesic_summary(star(5))
    assert s.eccentricities == (1, 2, 2, 2, 2)
    assert (s.radius, s.diameter) == (1, 2)


def test_not_strongly_connected_names_pair():
    g = Graph.from_edges(3, [(0, 1), (1, 2)], labels=[URI("a:a"), URI("a:b"), URI("a:c")])
    with pytest.raises(NotStronglyConnectedError, match="a:b"):
        geodesic_summary(g)
    for f in (closeness, betweenness):
        with pytest.raises(GraphStructureError):
            f(g)


@pytest.mark.parametrize("seed", range(10))
def test_geodesics_match_oracle(seed):
    rng = np.random.default_rng(seed)
    n = 30
    edges = random_strongly_connected(rng, n, 0.05)
    fw = floyd_warshall(n, edges)
    ecc = tuple(max(row) for row in fw)
    s = geodesic_summary(G(n, edges))
    assert s.eccentricities == ecc
    assert (s.radius, s.diameter) == (min(ecc), max(ecc))


@pytest.mark.parametrize("seed", range(10))
def test_radius_diameter_bound_on_symmetric_graphs(seed):
    rng = np.random.default_rng(seed)
    und = random_strongly_connected(rng, 12, 0.1)
    s = geodesic_summary(G(12, und + [(j, i) for i, j in und]))
    assert s.radius <= s.diameter <= 2 * s.radius


def test_radius_diameter_bound_fails_on_digraphs():
    # hub reaches every leaf in one hop, leaves return along a directed chain
    n = 6
    edges = [(0, i) for i in range(1, n)] + [(i, i + 1) for i in range(1, n - 1)] + [(n - 1, 0)]
    s = geodesic_summary(G(n, edges))
    assert s.radius == 1 and s.diameter > 2 * s.radius


def test_closeness_examples():
    assert closeness(cycle(3)) == pytest.approx([1 / 3] * 3)
    c = closeness(star(5))
    assert c[0] == pytest.approx(1 / 4)
    assert c[1:] == pytest.approx([1 / 7] * 4)


def test_closeness_drops_when_far_vertex_added():
    base = closeness(star(5))
    # vertex 5 hangs off leaf 1 in both directions
    g = G(6, star(5).edges() + [(1, 5), (5, 1)])
    after = closeness(g)
    assert all(after[i] < base[i] for i in range(5))


def test_betweenness_examples():
    assert list(betweenness(cycle(3))) == [1.0, 1.0, 1.0]
    path = G(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    assert list(betweenness(path)) == [0.0, 2.0, 0.0]
    assert betweenness(cycle(3), exact=True) == [Fraction(1)] * 3


@pytest.mark.parametrize("seed", range(10))
def test_betweenness_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    edges = random_strongly_connected(rng, n, 0.3)
    assert betweenness(G(n, edges), exact=True) == brute_betweenness(n, edges)


def test_betweenness_n12():
    rng = np.random.default_rng(1234)
    edges = random_strongly_connected(rng, 12, 0.15)
    assert betweenness(G(12, edges), exact=True) == brute_betweenness(12, edges)


# -- random walks ----------------------------------------------------------------------

def test_stationary_examples():
    assert stationary_distribution(complete(3)) == pytest.approx([1 / 3] * 3, abs=1e-12)
    with pytest.raises(GraphStructureError, match="periodic"):
        stationary_distribution(G(2, [(0, 1), (1, 0)]))
    with pytest.raises(GraphStructureError, match="sink"):
        stationary_distribution(G(2, [(0, 1)]))
    with pytest.raises(GraphStructureError):
        stationary_distribution(G(4, [(0, 1), (1, 0), (2, 3), (3, 2)]))


def test_period():
    assert period(cycle(4)) == 4
    assert period(complete(3)) == 1
    assert period(G(4, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 0)])) == 2


def _aperiodic(rng, n, p=0.2):
    while True:
        edges = random_strongly_connected(rng, n, p)
        g = G(n, edges)
        if period(g) == 1:
            return g, edges


@pytest.mark.parametrize("seed", range(5))
def test_stationary_matches_dense(seed):
    rng = np.random.default_rng(seed)
    g, edges = _aperiodic(rng, 10)
    a = dense_transition(10, edges)
    pi = stationary_distribution(g)
    assert np.abs(pi - dense_stationary(a)).sum() < 1e-8
    assert walk_residual(pi, a) < 1e-10
    assert pi.sum() == pytest.approx(1.0, abs=1e-9)


def test_pagerank_examples():
    assert pagerank(G(1, [])) == pytest.approx([1.0])
    for alpha in (0.1, 0.5, 0.85, 1.0):
        assert pagerank(complete(4), alpha=alpha) == pytest.approx([0.25] * 4, abs=1e-12)
    chain = G(3, [(0, 1), (1, 2)])
    pi = pagerank(chain, alpha=0.85)
    oracle = dense_stationary(pagerank_matrix(chain, 0.85))
    assert np.abs(pi - oracle).sum() < 1e-10


def test_pagerank_dense_oracle_independent():
    # C written out by hand for a -> b -> c with c a rank sink
    alpha = 0.85
    a = np.array([[0, 1, 0], [0, 0, 1], [1 / 3, 1 / 3, 1 / 3]])
    c = alpha * a + (1 - alpha) / 3
    pi = pagerank(G(3, [(0, 1), (1, 2)]), alpha)
    assert np.abs(pi - dense_stationary(c)).sum() < 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_pagerank_random(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(20, 200))
    edges = random_digraph(rng, n, 3.0 / n)
    g = G(n, edges)
    pi = pagerank(g)
    c = 0.85 * dense_transition(n, edges, sink_uniform=True) + 0.15 / n
    assert (pi >= 0).all()
    assert pi.sum() == pytest.approx(1.0, abs=1e-9)
    assert walk_residual(pi, c) < 1e-8
    assert np.abs(pi - dense_stationary(c)).sum() < 1e-8


def test_pagerank_alpha_one_is_stationary():
    rng = np.random.default_rng(5)
    g, _ = _aperiodic(rng, 12)
    tol = 1e-10
    assert np.abs(pagerank(g, alpha=1.0, tol=tol) - stationary_distribution(g, tol=tol)).sum() < 10 * tol


def test_pagerank_rejects_alpha():
    with pytest.raises(ValueError):
        pagerank(complete(3), alpha=0.0)


# -- spreading activation ---------------------------------------------------------------

def test_spreading_examples():
    two = G(2, [(0, 1), (1, 0)])
    assert list(spreading_activation(two, {0: 1.0}, steps=3, delta=0.5)) == [1.25, 0.5]
    g = G(3, [(0, 1), (1, 2)])
    assert list(spreading_activation(g, {0: 2.0}, steps=1, delta=0.9)) == [2.0, 0.0, 0.0]
    assert list(spreading_activation(g, {0: 2.0, 2: 1.0}, steps=5, delta=0.0)) == [2.0, 0.0, 1.0]


def test_spreading_accepts_labels_and_leaks_at_sinks():
    g = Graph.from_edges(2, [(0, 1)], labels=[URI("a:x"), URI("a:y")])
    pi = spreading_activation(g, {URI("a:x"): 1.0}, steps=10, delta=1.0)
    assert list(pi) == [1.0, 1.0]


def _simulate(n, edges, seeds, steps, delta):
    succ = {i: [j for a, j in edges if a == i] for i in range(n)}
    energy = dict(seeds)
    total = [0.0] * n
    for _ in range(steps):
        for v, e in energy.items():
            total[v] += e
        nxt = {}
        for v, e in energy.items():
            for w in succ[v]:
                nxt[w] = nxt.get(w, 0.0) + delta * e / len(succ[v])
        energy = nxt
    return total


@pytest.mark.parametrize("seed", range(5))
def test_spreading_matches_simulation(seed):
    rng = np.random.default_rng(seed)
    n = 25
    edges = random_digraph(rng, n, 0.1)
    seeds = {int(v): float(rng.random()) for v in rng.choice(n, 3, replace=False)}
    got = spreading_activation(G(n, edges), seeds, steps=8, delta=0.7)
    assert got == pytest.approx(_simulate(n, edges, seeds, 8, 0.7), abs=1e-12)


# -- assortativity -----------------------------------------------------------------------

def test_scalar_perfect():
    g = G(6, [(0, 1), (2, 3), (4, 5)])
    assert assortativity_scalar(g, [1, 1, 2, 2, 3, 3]) == pytest.approx(1.0, abs=1e-12)
    assert assortativity_scalar(g, [1, -1, 2, -2, 3, -3]) == pytest.approx(-1.0, abs=1e-12)


def test_scalar_degenerate():
    g = G(4, [(0, 1), (2, 3)])
    with pytest.raises(DegenerateError):
        assortativity_scalar(g, [1, 1, 1, 1])
    with pytest.raises(DegenerateError):
        assortativity_scalar(G(2, [(0, 1)]), [1, 2])


@pytest.mark.parametrize("seed", range(5))
def test_scalar_matches_pearson_and_is_affine_invariant(seed):
    rng = np.random.default_rng(seed)
    edges = random_digraph(rng, 20, 0.15)
    g = G(20, edges)
    x = rng.normal(size=20)
    r = assortativity_scalar(g, x)
    assert r == pytest.approx(pearson([x[i] for i, _ in edges], [x[j] for _, j in edges]), abs=1e-12)
    assert abs(assortativity_scalar(g, 3.5 * x + 7.0) - r) < 1e-12


def test_nominal_examples():
    g = G(6, [(0, 1), (1, 0), (1, 2), (3, 4), (4, 5), (5, 3)])
    assert assortativity_nominal(g, ["a", "a", "a", "b", "b", "b"]) == pytest.approx(1.0)
    bip = G(4, [(0, 2), (2, 0), (1, 3), (3, 1), (0, 3)])
    assert assortativity_nominal(bip, ["a", "a", "b", "b"]) < 0
    with pytest.raises(DegenerateError):
        assortativity_nominal(g, ["a"] * 6)


@pytest.mark.parametrize("seed", range(10))
def test_nominal_matches_tally(seed):
    rng = np.random.default_rng(seed)
    edges = random_digraph(rng, 20, 0.15)
    labels = {i: "xyz"[int(rng.integers(3))] for i in range(20)}
    r = assortativity_nominal(G(20, edges), labels)
    assert abs(r - nominal_tally(edges, labels)) < 1e-12
