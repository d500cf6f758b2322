"""Distributions over graphs and their sum under the ⊕ operation.

The sum of two independent graph distributions adds adjacency matrices
component-wise, with the node labeling of one operand averaged uniformly
over all permutations.  Graph cumulants are additive over this operation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .canonical import canonicalize
from .graphs import Graph, GraphDataError
from .moments import MomentVector, moments
from .cumulants import moments_to_cumulants

SUM_NODE_CAP = 5


@dataclass
class GraphDistribution:
    """Finite-support distribution over (weighted) graphs on n nodes, with
    probability spread uniformly over all adjacency representatives."""
    n: int
    support: list   # of (Graph, Fraction probability)

    def __post_init__(self):
        total = Fraction(0)
        for g, p in self.support:
            if g.n != self.n:
                raise GraphDataError(
                    "all support graphs must share the distribution's n")
            total += p
        if total != 1:
            raise GraphDataError(f"probabilities sum to {total}, not 1")

    @classmethod
    def point_mass(cls, G):
        return cls(n=G.n, support=[(G, Fraction(1))])


def _canonical_key(G):
    """Isomorphism key for a weighted graph: weights encoded by rank."""
    weights = sorted(set(G.edges.values()))
    rank = {w: i + 1 for i, w in enumerate(weights)}
    res = canonicalize(G.n, [(u, v, rank[w]) for (u, v), w
                             in G.edges.items()])
    return (res.key, tuple(weights))


def _add_graphs(a: Graph, b_edges):
    es = dict(a.edges)
    for (u, v), w in b_edges.items():
        es[(u, v)] = es.get((u, v), Fraction(0)) + w
    return Graph(n=a.n, edges=es, weighted=True)


def sum_distributions(a: GraphDistribution, b: GraphDistribution):
    """The ⊕ sum, with the labeling of b averaged over all n! permutations.

    Output support is deduplicated by canonical form.  Capped at n <= 5;
    this is a correctness oracle, not a performance path.
    """
    if a.n != b.n:
        raise GraphDataError("graph sum needs equal node counts")
    n = a.n
    if n > SUM_NODE_CAP:
        raise GraphDataError(f"graph sum capped at n={SUM_NODE_CAP}")
    nfact = math.factorial(n)
    acc = {}   # canonical key -> [Graph, prob]
    for ga, pa in a.support:
        for gb, pb in b.support:
            for perm in itertools.permutations(range(n)):
                rb = {}
                for (u, v), w in gb.edges.items():
                    x, y = perm[u], perm[v]
                    if x > y:
                        x, y = y, x
                    rb[(x, y)] = w
                gs = _add_graphs(_as_weighted(ga), rb)
                key = _canonical_key(gs)
                prob = pa * pb / nfact
                if key in acc:
                    acc[key][1] += prob
                else:
                    acc[key] = [gs, prob]
    return GraphDistribution(n=n, support=[(g, p) for g, p in acc.values()])


def _as_weighted(G):
    if G.weighted:
        return G
    return Graph(n=G.n, edges=dict(G.edges), weighted=True)


def distribution_cumulants(d: GraphDistribution, r_max):
    """Cumulants of a distribution: average the moments of the support
    (moments are inherited on average), then convert."""
    mixed = None
    for g, p in d.support:
        mv = moments(_as_weighted(g), r_max)
        if mixed is None:
            mixed = {sid: p * v for sid, v in mv.values.items()}
            template = mv
        else:
            if set(mv.values) != set(mixed):
                raise GraphDataError("support graphs disagree on classes")
            for sid, v in mv.values.items():
                mixed[sid] += p * v
    mu = MomentVector(n=d.n, mode="weighted", r_max=r_max, values=mixed,
                      absent=dict(template.absent))
    return moments_to_cumulants(mu)
