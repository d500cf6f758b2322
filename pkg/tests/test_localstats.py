"""Node-local and edge-local moments and cumulants."""

import itertools
import random
from fractions import Fraction

import pytest

from netmoments.classes import named_class
from netmoments.counting import full_counts
from netmoments.graphs import GraphDataError, make_graph
from netmoments.localstats import edge_local_cumulants, node_local_cumulants

from conftest import random_graph


def test_star_center():
    G = make_graph(4, [(0, 1), (0, 2), (0, 3)])
    s = node_local_cumulants(G, 0)
    assert s.moments["self"] == 1
    assert s.moments["other"] == 0
    assert s.moments["triangle"] == 0
    assert s.kappa_triangle == 0


def test_p4_leaf_plug_in():
    G = make_graph(4, [(0, 1), (1, 2), (2, 3)])
    s = node_local_cumulants(G, 0)
    mu = s.moments
    assert mu["self"] == Fraction(1, 3)
    assert mu["other"] == Fraction(2, 3)
    assert mu["wedge-center"] == 0
    assert mu["wedge-end"] == Fraction(1, 6)
    want = (mu["triangle"] - mu["wedge-center"] * mu["other"]
            - 2 * mu["wedge-end"] * mu["self"]
            + 2 * mu["self"] ** 2 * mu["other"])
    assert s.kappa_triangle == want == Fraction(1, 27)


def test_p3_middle_edge():
    G = make_graph(3, [(0, 1), (1, 2)])
    s = edge_local_cumulants(G, (0, 1))
    assert s.moments["wedge-attached"] == Fraction(1, 2)
    assert s.moments["triangle"] == 0
    mu = s.moments
    want = (mu["triangle"] - 2 * mu["wedge-attached"] * mu["detached"]
            - mu["wedge-detached"] * mu["star"]
            + 2 * mu["star"] * mu["detached"] ** 2)
    assert s.kappa_triangle == want


def test_triangle_plus_isolated_edge():
    G = make_graph(4, [(0, 1), (1, 2), (0, 2)])
    s = edge_local_cumulants(G, (0, 1))
    assert s.moments["triangle"] == Fraction(1, 2)
    assert s.to_json_dict()["anchor"] == [0, 1]


def test_anchor_errors():
    G = make_graph(4, [(0, 1), (1, 2)])
    with pytest.raises(GraphDataError):
        edge_local_cumulants(G, (0, 3))
    with pytest.raises(GraphDataError):
        node_local_cumulants(G, 7)
    with pytest.raises(ValueError):
        node_local_cumulants(G, 0, r_max=4)


def test_aggregation_identities():
    rng = random.Random(21)
    wid = named_class("simple", "wedge").id
    tid = named_class("simple", "triangle").id
    for _ in range(20):
        n = rng.randint(4, 9)
        G = random_graph(rng, n)
        counts = full_counts(G, 3)
        half = Fraction((n - 1) * (n - 2), 2)
        total_wc = sum(node_local_cumulants(G, v).moments["wedge-center"]
                       * half for v in range(n))
        assert total_wc == counts.get(wid, 0)
        total_tri = sum(edge_local_cumulants(G, e).moments["triangle"]
                        * (n - 2) for e in G.edges)
        assert total_tri == 3 * counts.get(tid, 0)
