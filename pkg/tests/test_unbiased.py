"""Unbiased cumulants, partial unbiasing, variance, and Z-tests."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from netmoments.classes import named_class
from netmoments.cumulants import moments_to_cumulants
from netmoments.graphs import make_graph
from netmoments.moments import moments, vector_like
from netmoments.unbiased import (bootstrap_variance, partial_unbiased_moments,
                                 unbiased_cumulants, UnbiasingConfig,
                                 variance_kappa1, welch_test, z_test)

from conftest import random_graph

nc = lambda a: named_class("simple", a).id


def test_p4_unbiased_wedge():
    G = make_graph(4, [(0, 1), (1, 2), (2, 3)])
    kc = unbiased_cumulants(moments(G, 2))
    # kappa-check_wedge = mu_wedge - mu_parallel = 1/6 - 1/3
    assert kc.values[nc("wedge")] == Fraction(-1, 6)


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 8), st.integers(0, 2 ** 28 - 1))
def test_disconnected_unbiased_cumulants_vanish(n, bits):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    G = make_graph(n, [p for i, p in enumerate(pairs) if bits >> i & 1])
    from netmoments.classes import universe_index
    kc = unbiased_cumulants(moments(G, 4))
    index = universe_index("simple", 4)
    for sid, v in kc.values.items():
        if not index[sid.key].connected:
            assert v == 0, sid.serialize()


def test_exact_unbiasedness_over_all_subsets():
    # the mean of kappa-check over all induced k-subgraphs equals the
    # parent's kappa-check, exactly (rational arithmetic, full enumeration)
    rng = random.Random(7)
    G = random_graph(rng, 9, p=0.45)
    parent = unbiased_cumulants(moments(G, 3))
    k = 6
    acc = None
    count = 0
    for nodes in itertools.combinations(range(G.n), k):
        sub = G.induced_subgraph(list(nodes))
        kc = unbiased_cumulants(moments(sub, 3))
        if acc is None:
            acc = dict(kc.values)
        else:
            for sid, v in kc.values.items():
                acc[sid] += v
        count += 1
    for sid, total in acc.items():
        assert total / count == parent.values[sid], sid.alias


def test_unbiasing_config_population():
    cfg = UnbiasingConfig.from_population(10, 11)
    assert cfg.eta == Fraction(1, 11)
    assert cfg.population(10) == 11
    assert UnbiasingConfig(eta=Fraction(1)).population(10) is None
    with pytest.raises(ValueError):
        UnbiasingConfig.from_population(10, 9)


def test_partial_unbiasing_eta_zero_recovers_moments():
    rng = random.Random(3)
    G = random_graph(rng, 8)
    m = moments(G, 2)
    kc = unbiased_cumulants(m)
    back = partial_unbiased_moments(kc, UnbiasingConfig(eta=Fraction(0)),
                                    n_model=G.n)
    assert back.values[nc("edge")] == m.values[nc("edge")]
    assert back.values[nc("wedge")] == m.values[nc("wedge")]
    assert back.values[nc("two-parallel")] == m.values[nc("two-parallel")]


def test_partial_unbiasing_eta_one_limit():
    rng = random.Random(4)
    G = random_graph(rng, 8)
    kc = unbiased_cumulants(moments(G, 2))
    out = partial_unbiased_moments(kc, UnbiasingConfig(eta=Fraction(1)),
                                   n_model=G.n)
    k1 = kc.values[nc("edge")]
    assert out.values[nc("two-parallel")] == k1 * k1
    assert out.values[nc("wedge")] == kc.values[nc("wedge")] + k1 * k1


def test_partial_unbiasing_rejects_third_order():
    rng = random.Random(5)
    G = random_graph(rng, 7)
    kc = unbiased_cumulants(moments(G, 3))
    with pytest.raises(ValueError):
        partial_unbiased_moments(kc, UnbiasingConfig(eta=Fraction(1, 2)),
                                 n_model=G.n)


def test_variance_closed_form_er():
    # ER targets mu1 = p, mu_wedge = mu_par = p^2 simplify to
    # 2 p (1 - p) / (n (n - 1))
    for n, p in ((20, Fraction(1, 2)), (11, Fraction(3, 10))):
        values = {nc("edge"): p, nc("wedge"): p * p,
                  nc("two-parallel"): p * p}
        from netmoments.moments import MomentVector
        mt = MomentVector(n=n, mode="simple", r_max=2, values=values)
        got = variance_kappa1(mt, n)
        assert got == 2 * p * (1 - p) / (n * (n - 1))
    # plug-in fixture
    values = {nc("edge"): Fraction(1, 2), nc("wedge"): Fraction(1, 4),
              nc("two-parallel"): Fraction(1, 4)}
    from netmoments.moments import MomentVector
    mt = MomentVector(n=20, mode="simple", r_max=2, values=values)
    assert variance_kappa1(mt, 20) == Fraction(1, 760)


def test_z_test_edge_exact_variance():
    rng = random.Random(7)
    G = random_graph(rng, 12, p=0.4)
    m = moments(G, 2)
    res = z_test(nc("edge"), m)
    assert not res.approximate_variance
    assert res.z_squared >= 0
    assert 0 <= res.p_value <= 1
    doc = res.to_json_dict()
    assert doc["alias"] == "edge"


def test_z_test_higher_order_needs_variance():
    rng = random.Random(10)
    G = random_graph(rng, 10)
    m = moments(G, 2)
    with pytest.raises(ValueError):
        z_test(nc("wedge"), m)
    res = z_test(nc("wedge"), m, variance=0.01)
    assert res.approximate_variance


def test_bootstrap_variance_deterministic():
    rng = random.Random(11)
    G = random_graph(rng, 14, p=0.4)
    a = bootstrap_variance(G, nc("wedge"), 2, num_samples=40, seed=5)
    b = bootstrap_variance(G, nc("wedge"), 2, num_samples=40, seed=5)
    c = bootstrap_variance(G, nc("wedge"), 2, num_samples=40, seed=6)
    assert a == b
    assert a != c
    assert a >= 0


def test_welch_test():
    out = welch_test(0.2, 0.01, 0.1, 0.01)
    assert out["heuristic"]
    assert 0 <= out["p_value"] <= 1
    with pytest.raises(ValueError):
        welch_test(0.1, 0.0, 0.2, 0.0)
