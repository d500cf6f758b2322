"""Unbiased cumulant estimators, partial unbiasing, and Z-score tests.

The unbiased estimator kappa-check of a cumulant replaces every product of
moments in its moment polynomial with the single moment of the disjoint
union of the factors.  This makes the estimator exactly unbiased under
random node subsampling, and makes kappa-check of every disconnected class
identically zero.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .classes import ClassGraph, class_id, named_class, universe_index
from .cumulants import edge_partitions, IncompleteVectorError
from .moments import MomentVector, vector_like


# ---------------------------------------------------------------------------
# kappa as a polynomial in moments

@lru_cache(maxsize=None)
def cumulant_moment_polynomial(cg: ClassGraph, mode: str):
    """kappa_g as {sorted tuple of SubgraphIds (a monomial) -> int coeff}."""
    sid = class_id(cg, mode)
    poly = {(sid,): 1}
    exp = edge_partitions(cg, mode)
    index = None
    for parts, mult in exp.terms:
        if parts == (sid,):
            continue
        term = {(): mult}
        for pid in parts:
            if index is None:
                index = universe_index(mode, sid.r, _labels_for(cg))
            part_poly = cumulant_moment_polynomial(index[pid.key].graph, mode)
            term = _poly_mul(term, part_poly)
        for mono, coeff in term.items():
            poly[mono] = poly.get(mono, 0) - coeff
            if poly[mono] == 0:
                del poly[mono]
    return poly


def _labels_for(cg):
    return max(cg.colors, default=0) + 1 if cg.colors else 2


def _poly_mul(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = tuple(sorted(ma + mb, key=lambda s: (s.r, s.key)))
            out[mono] = out.get(mono, 0) + ca * cb
    return out


def _disjoint_union_id(monomial, mode, index):
    edges = []
    colors = []
    offset = 0
    directed = False
    for pid in monomial:
        g = index[pid.key].graph
        directed = g.directed
        for u, v, val in g.edges:
            edges.append((u + offset, v + offset, val))
        colors.extend(g.colors)
        offset += g.k
    cg = ClassGraph.make(offset, edges, directed=directed,
                         colors=tuple(colors))
    return class_id(cg, mode)


def unbiased_cumulants(m: MomentVector):
    """kappa-check for every class in the vector.

    Derived generically: take the moment polynomial of each cumulant and
    replace each monomial with the moment of the disjoint union of its
    factors.  Disconnected classes come out exactly zero.
    """
    index = universe_index(m.mode, m.r_max, m.labels)
    out = {}
    absent = dict(m.absent)
    for sid in m.values:
        poly = cumulant_moment_polynomial(index[sid.key].graph, m.mode)
        acc = 0
        for mono, coeff in poly.items():
            uid = _disjoint_union_id(mono, m.mode, index)
            if uid not in m.values:
                if uid in m.absent:
                    absent[sid] = (f"needs moment of "
                                   f"{uid.alias or uid.serialize()}, "
                                   f"{m.absent[uid]}")
                    acc = None
                    break
                raise IncompleteVectorError(
                    f"moment vector lacks disjoint-union class "
                    f"{uid.alias or uid.serialize()} needed for unbiased "
                    f"{sid.alias or sid.serialize()}")
            acc = acc + coeff * m.values[uid]
        if acc is None:
            continue
        if not index[sid.key].connected and acc != 0:
            raise AssertionError(
                f"nonzero unbiased cumulant for disconnected class "
                f"{sid.serialize()}")
        out[sid] = acc
    kv = vector_like(m, out)
    kv.absent = absent
    return kv


# ---------------------------------------------------------------------------
# Partial unbiasing (eta), second order

@dataclass(frozen=True)
class UnbiasingConfig:
    """eta in [0,1]; eta = 1 - n/N relates the observed n to the population
    size N.  eta=1 (N infinite) is full unbiasing; eta=0 (N=n) is none."""
    eta: Fraction

    @classmethod
    def from_population(cls, n, N):
        if N < n:
            raise ValueError("population size N must be at least n")
        return cls(eta=1 - Fraction(n, N))

    def population(self, n):
        """N as an exact rational, or None for eta=1 (infinite)."""
        if self.eta == 1:
            return None
        return Fraction(n) / (1 - Fraction(self.eta))


def _simple_ids():
    nc = lambda a: named_class("simple", a).id
    return nc("edge"), nc("wedge"), nc("two-parallel")


def partial_unbiased_moments(k: MomentVector, cfg: UnbiasingConfig, n_model):
    """Second-order moment targets mu-check for a model on n_model nodes.

    Inverts the unbiased-cumulant expressions on a population of N nodes
    (N from cfg and the vector's own n); the single-network product
    constraint pins down the disconnected moments.  Only orders <= 2 have
    closed forms; higher orders are rejected.
    """
    if k.mode != "simple":
        raise ValueError("partial unbiasing implemented for simple mode")
    eid, wid, pid = _simple_ids()
    extra = [sid for sid in k.values if sid.r > 2]
    if extra:
        raise ValueError(
            "partial unbiasing has closed forms only through second order")
    if eid not in k.values:
        raise IncompleteVectorError("edge cumulant required")
    k1 = k.values[eid]
    kw = k.values.get(wid, 0)
    out = {eid: k1}
    N = cfg.population(k.n)
    if wid in k.values or pid in k.values:
        if N is None:
            mu_w = kw + k1 * k1
            mu_p = k1 * k1
        else:
            if N < 4:
                raise ValueError("population N must be at least 4 at order 2")
            h1 = N * (N - 1) / 2
            hw = 3 * _binom(N, 3)
            hp = 3 * _binom(N, 4)
            tot = hw + hp
            mu_w = (hp * kw + h1 * h1 * k1 * k1 / 2 - h1 * k1 / 2) / tot
            mu_p = (-hw * kw + h1 * h1 * k1 * k1 / 2 - h1 * k1 / 2) / tot
        out[wid] = mu_w
        out[pid] = mu_p
    return MomentVector(n=n_model, mode="simple", r_max=min(k.r_max, 2),
                        values=out)


def _binom(x, r):
    out = Fraction(1)
    for i in range(r):
        out *= (x - i)
    return out / math.factorial(r)


# ---------------------------------------------------------------------------
# Variance and tests

def variance_kappa1(m_targets: MomentVector, n):
    """Exact variance of the edge-density estimator under the model whose
    second-order moment targets are given.  Falls back to the fully
    unbiased constraint mu_parallel = mu_edge^2 when the parallel moment is
    absent."""
    if n < 2:
        raise ValueError("need at least 2 nodes")
    eid, wid, pid = _simple_ids()
    mu1 = m_targets.values[eid]
    muw = m_targets.values.get(wid, mu1 * mu1)
    mup = m_targets.values.get(pid, mu1 * mu1)
    nn = Fraction(n * (n - 1))
    return (2 / nn * mu1 + Fraction(4 * (n - 2)) / nn * muw
            + Fraction((n - 2) * (n - 3)) / nn * mup - mu1 * mu1)


@dataclass
class TestResult:
    subgraph: object
    kappa_check: Fraction
    variance: float
    z_squared: float
    p_value: float
    sign: str
    approximate_variance: bool
    caveat: str = "normal approximation is asymptotic in n"

    def to_json_dict(self):
        return {
            "id": self.subgraph.serialize(),
            "alias": self.subgraph.alias,
            "kappa_check": {"numer": str(self.kappa_check.numerator),
                            "denom": str(self.kappa_check.denominator)},
            "variance": self.variance,
            "z_squared": self.z_squared,
            "p_value": self.p_value,
            "sign": self.sign,
            "approximate_variance": self.approximate_variance,
            "caveat": self.caveat,
        }


def z_test(sid, m: MomentVector, variance=None):
    """Z-score test of kappa-check against the null kappa-check = 0.

    For the edge class the exact closed-form variance is used when none is
    supplied; higher orders require a (bootstrap) variance from the caller.
    """
    kc = unbiased_cumulants(m)
    kval = kc.values[sid]
    approx = True
    if variance is None:
        eid, wid, pid = _simple_ids()
        if sid != eid:
            raise ValueError(
                "closed-form variance exists only for the edge class; "
                "supply a bootstrap variance for higher orders")
        targets = {eid: m.values[eid]}
        if wid in kc.values:
            targets[wid] = kc.values[wid] + m.values[eid] ** 2
        targets[pid] = m.values[eid] ** 2
        variance = variance_kappa1(vector_like(m, targets), m.n)
        approx = False
    var = float(variance)
    if var <= 0:
        raise ValueError("variance must be positive")
    z2 = float(kval) ** 2 / var
    p = math.erfc(math.sqrt(z2) / math.sqrt(2.0))
    sign = "zero" if kval == 0 else ("positive" if kval > 0 else "negative")
    return TestResult(subgraph=sid, kappa_check=Fraction(kval), variance=var,
                      z_squared=z2, p_value=p, sign=sign,
                      approximate_variance=approx)


def bootstrap_variance(G, sid, r_max, num_samples=200, subsample=None,
                       seed=0):
    """Approximate Var(kappa-check) by node subsampling.

    Draws induced subgraphs of `subsample` nodes (default 70% of n), computes
    kappa-check on each, and rescales the empirical variance by the leading
    1/n rate.  Clearly an approximation; exact closed forms exist only at
    first order.
    """
    import numpy as np
    from .moments import moments as _moments

    n = G.n
    if subsample is None:
        subsample = max(sid.r + 2, (7 * n) // 10)
    if subsample >= n:
        raise ValueError("subsample size must be below n")
    rng = np.random.Generator(np.random.Philox(key=seed))
    vals = []
    for _ in range(num_samples):
        nodes = rng.choice(n, size=subsample, replace=False)
        sub = G.induced_subgraph([int(x) for x in nodes])
        kc = unbiased_cumulants(_moments(sub, r_max))
        vals.append(float(kc.values[sid]))
    var_sub = float(np.var(vals, ddof=1))
    return var_sub * subsample / n


def welch_test(k1, var1, k2, var2):
    """Two-sample comparison of unbiased cumulants (heuristic): Welch's
    statistic with a normal approximation."""
    denom = var1 + var2
    if denom <= 0:
        raise ValueError("variances must be positive")
    t = (float(k1) - float(k2)) / math.sqrt(denom)
    p = math.erfc(abs(t) / math.sqrt(2.0))
    return {"t": t, "p_value": p, "heuristic": True}
