"""Seeded generators and shuffling null models."""

from fractions import Fraction

import pytest

from netmoments.graphs import Graph, GraphDataError, make_graph
from netmoments.models import (bipartite_geometric, er, generate, ModelSpec,
                               shuffle, ssbm, ssbm_rates)


def test_er_deterministic_and_seed_sensitive():
    a = er(20, 0.3, seed=1)
    b = er(20, 0.3, seed=1)
    c = er(20, 0.3, seed=2)
    assert a.edges == b.edges
    assert a.edges != c.edges
    with pytest.raises(GraphDataError):
        er(10, 1.5)


def test_er_density_sane():
    G = er(60, 0.25, seed=3)
    density = G.m / (60 * 59 / 2)
    assert 0.15 < density < 0.35


def test_generate_dispatch():
    spec = ModelSpec(variant="er", params={"n": 10, "p": 0.5}, seed=4)
    assert generate(spec).edges == er(10, 0.5, seed=4).edges
    with pytest.raises(GraphDataError):
        generate(ModelSpec(variant="nope"))


def test_ssbm_rates_mapping():
    # rho = 0 is ER: a = b
    a, b = ssbm_rates(10, 0.0, 3.0)
    assert a == pytest.approx(b)
    # mean degree is preserved: d = a (n/2 - 1) + b n/2
    for rho in (-0.6, 0.0, 0.7):
        a, b = ssbm_rates(10, rho, 3.0)
        assert a * 4 + b * 5 == pytest.approx(3.0)
        assert (a - b) / (a + b) == pytest.approx(rho)


def test_ssbm_extremes():
    # rho = +1: no cross edges; rho = -1: bipartite, no triangles
    G = ssbm(12, assortativity=1.0, mean_degree=3.0, seed=5)
    assert all((u < 6) == (v < 6) for u, v in G.edges)
    H = ssbm(12, assortativity=-1.0, mean_degree=3.0, seed=5)
    assert all((u < 6) != (v < 6) for u, v in H.edges)
    with pytest.raises(GraphDataError):
        ssbm(11, assortativity=0.0, mean_degree=3.0)
    with pytest.raises(GraphDataError):
        ssbm(10, assortativity=1.0, mean_degree=9.0)  # a would exceed 1


def test_bipartite_geometric():
    G = bipartite_geometric(20, 0.5, 3.0, seed=6)
    assert G.m == 30
    half = 10
    assert all((u < half) != (v < half) for u, v in G.edges)
    assert G.node_attrs[0] == "left" and G.node_attrs[19] == "right"
    with pytest.raises(GraphDataError):
        bipartite_geometric(40, 0.9, 4.0, seed=6)   # cap too tight
    with pytest.raises(GraphDataError):
        bipartite_geometric(21, 0.5, 3.0)


def test_shuffle_attributes():
    attrs = {0: "a", 1: "a", 2: "b", 3: "b", 4: "b"}
    G = make_graph(5, [(0, 1), (1, 2), (3, 4)], node_attrs=attrs)
    S = shuffle(G, "attributes", seed=7)
    assert S.edges == G.edges
    assert sorted(S.node_attrs.values()) == sorted(attrs.values())
    with pytest.raises(GraphDataError):
        shuffle(make_graph(3, [(0, 1)]), "attributes")


def test_shuffle_orientations():
    G = make_graph(5, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 4)],
                   directed=True)
    S = shuffle(G, "orientations", seed=8)
    # reciprocal pair survives; undirected skeleton is unchanged
    assert (0, 1) in S.edges and (1, 0) in S.edges
    skel = lambda H: sorted((min(u, v), max(u, v)) for u, v in H.edges)
    assert skel(S) == skel(G)
    with pytest.raises(GraphDataError):
        shuffle(make_graph(3, [(0, 1)]), "orientations")


def test_shuffle_weights():
    G = Graph(n=4, edges={(0, 1): Fraction(5), (1, 2): Fraction(1),
                          (2, 3): Fraction(2)}, weighted=True)
    S = shuffle(G, "weights", seed=9)
    assert sorted(S.edges) == sorted(G.edges)
    assert sorted(S.edges.values()) == sorted(G.edges.values())
    with pytest.raises(GraphDataError):
        shuffle(make_graph(3, [(0, 1)]), "weights")
    with pytest.raises(GraphDataError):
        shuffle(G, "bogus")
