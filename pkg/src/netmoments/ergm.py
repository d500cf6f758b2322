"""Exact small-n maximum-entropy graph models.

The model family is p(G) proportional to ER_{n,1/2}(G) * exp(sum_g beta_g
c_g(G)) over all simple graphs on n nodes.  Everything is computed exactly
over the isomorphism-class table: each class contributes its labeled
multiplicity n!/|Aut| as base-measure weight.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .canonical import canonicalize
from .classes import complete_count, named_class, universe_index
from .counting import full_counts
from .graphs import make_graph
from .moments import MomentVector

_CLASS_TABLE_CACHE = {}

KNOWN_CLASS_COUNTS = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044,
                      8: 12346, 9: 274668, 10: 12005168}


class SizeCapError(ValueError):
    """Enumeration size cap exceeded."""


@dataclass
class GraphClassTable:
    n: int
    reps: list          # representative edge tuples
    auts: list          # automorphism group orders
    mults: list         # labeled multiplicities n!/|Aut|

    def __len__(self):
        return len(self.reps)

    def statistic_counts(self, sids):
        """Matrix of c_g per class row for the given statistic ids."""
        cols = np.empty((len(self.reps), len(sids)), dtype=np.float64)
        for i, edges in enumerate(self.reps):
            counts = _counts_through_three(self.n, edges)
            for j, sid in enumerate(sids):
                cols[i, j] = _statistic_from_counts(counts, sid, self.n,
                                                    edges)
        return cols


def _counts_through_three(n, edges):
    """All class counts with <= 3 edges from closed-form identities."""
    adj = [0] * n
    deg = [0] * n
    for (u, v) in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        deg[u] += 1
        deg[v] += 1
    m = len(edges)
    wedge = sum(d * (d - 1) // 2 for d in deg)
    tri = sum((adj[u] & adj[v]).bit_count() for (u, v) in edges) // 3
    claw = sum(d * (d - 1) * (d - 2) // 6 for d in deg)
    path = sum((deg[u] - 1) * (deg[v] - 1) for (u, v) in edges) - 3 * tri
    par = m * (m - 1) // 2 - wedge
    wedge_edge = wedge * (m - 2) - 3 * tri - 3 * claw - 2 * path
    par3 = (m * (m - 1) * (m - 2) // 6
            - tri - claw - path - wedge_edge)
    return {"edge": m, "wedge": wedge, "two-parallel": par,
            "triangle": tri, "claw": claw, "path": path,
            "wedge+edge": wedge_edge, "three-parallel": par3}


def _statistic_from_counts(counts, sid, n, edges):
    if sid.alias in counts:
        return counts[sid.alias]
    G = make_graph(n, list(edges))
    return full_counts(G, sid.r).get(sid, 0)


def enumerate_classes(n, allow_large=False):
    """All isomorphism classes of simple graphs on n nodes, with labeled
    multiplicities, by node-by-node augmentation with canonical dedupe."""
    if n > 10 or (n > 9 and not allow_large):
        raise SizeCapError(
            f"class enumeration capped at n=9 (n=10 behind allow_large); "
            f"got n={n}")
    if n in _CLASS_TABLE_CACHE:
        return _CLASS_TABLE_CACHE[n]
    classes = {b"": ((), 1)}  # key -> (edges, aut); start with 1-node graph
    for k in range(1, n):
        nxt = {}
        for edges, _ in classes.values():
            for mask in range(1 << k):
                new_edges = list(edges)
                mm = mask
                while mm:
                    j = (mm & -mm).bit_length() - 1
                    new_edges.append((j, k))
                    mm &= mm - 1
                res = canonicalize(k + 1, [(u, v, 1) for u, v in new_edges])
                if res.key not in nxt:
                    nxt[res.key] = (tuple(new_edges), res.aut)
        classes = nxt
    nfact = math.factorial(n)
    reps, auts, mults = [], [], []
    for edges, aut in classes.values():
        reps.append(edges)
        auts.append(aut)
        mults.append(nfact // aut)
    expected = KNOWN_CLASS_COUNTS.get(n)
    if expected is not None and len(reps) != expected:
        raise AssertionError(
            f"enumeration found {len(reps)} classes at n={n}, "
            f"expected {expected}")
    assert sum(mults) == 1 << (n * (n - 1) // 2)
    table = GraphClassTable(n=n, reps=reps, auts=auts, mults=mults)
    _CLASS_TABLE_CACHE[n] = table
    return table


class InfeasibleTargetError(ValueError):
    """Target statistics on or outside the convex hull of realizable
    count tuples."""

    def __init__(self, message, direction=None):
        super().__init__(message)
        self.direction = direction


@dataclass
class ErgmModel:
    n: int
    statistics: tuple      # SubgraphIds
    beta: dict             # SubgraphId -> float
    log_z: float
    target_counts: np.ndarray
    achieved_counts: np.ndarray
    residual: float
    table: GraphClassTable = field(repr=False)
    stat_matrix: np.ndarray = field(repr=False)
    log_probs: np.ndarray = field(repr=False)

    def achieved_moments(self):
        index = universe_index("simple", max(s.r for s in self.statistics))
        out = {}
        for j, sid in enumerate(self.statistics):
            denom = complete_count(index[sid.key], self.n)
            out[sid] = self.achieved_counts[j] / float(denom)
        return out

    def to_json_dict(self):
        return {
            "n": self.n,
            "statistics": [{"id": s.serialize(), "alias": s.alias}
                           for s in self.statistics],
            "beta": {(s.alias or s.serialize()): repr(self.beta[s])
                     for s in self.statistics},
            "log_z": self.log_z,
            "target_counts": [float(t) for t in self.target_counts],
            "achieved_counts": [float(a) for a in self.achieved_counts],
            "residual": self.residual,
        }


def _check_hull(X, w, t):
    """Raise InfeasibleTargetError when t is outside (or provably on the
    boundary of) the convex hull of the rows of X.

    Finds a maximum-margin separating direction via linear programming; a
    nonnegative optimal margin means no point of the hull lies strictly
    beyond t in that direction.
    """
    from scipy.optimize import linprog

    k = X.shape[1]
    # membership: lambda >= 0, sum lambda = 1, X^T lambda = t
    A_eq = np.vstack([X.T, np.ones((1, X.shape[0]))])
    b_eq = np.concatenate([t, [1.0]])
    res = linprog(c=np.zeros(X.shape[0]), A_eq=A_eq, b_eq=b_eq,
                  bounds=(0, None), method="highs")
    if not res.success:
        # separating direction: max t.d - s with s >= x_i.d, |d|_inf <= 1
        c = np.concatenate([-t, [1.0]])
        A_ub = np.hstack([X, -np.ones((X.shape[0], 1))])
        lp = linprog(c=c, A_ub=A_ub, b_ub=np.zeros(X.shape[0]),
                     bounds=[(-1, 1)] * k + [(None, None)], method="highs")
        direction = None
        if lp.success and -lp.fun > 1e-9:
            direction = lp.x[:k]
        raise InfeasibleTargetError(
            "target lies outside the convex hull of realizable counts"
            + ("" if direction is None else
               f"; violated support direction {np.round(direction, 6).tolist()}"
               "; consider reducing the unbiasing parameter eta"),
            direction=direction)
    # boundary check along each axis: strict interior requires strict
    # inequalities against the support extremes
    for j in range(k):
        lo, hi = X[:, j].min(), X[:, j].max()
        if not (lo < t[j] < hi):
            d = np.zeros(k)
            d[j] = 1.0 if t[j] >= hi else -1.0
            raise InfeasibleTargetError(
                f"target component {j} sits on the hull boundary "
                f"(value {t[j]}, support [{lo}, {hi}]); consider reducing "
                "the unbiasing parameter eta", direction=d)


def _logsumexp(a):
    mx = a.max()
    return mx + math.log(np.exp(a - mx).sum())


def fit_ergm(targets: MomentVector, n, statistic_ids=None, allow_large=False,
             tol=1e-8, max_iter=200):
    """Fit beta so the model's expected counts match the target moments.

    Damped Newton on the convex dual f(beta) = ln Z - beta.t with Armijo
    backtracking; the Hessian is the statistic covariance, PSD by
    construction.
    """
    if statistic_ids is None:
        statistic_ids = sorted(targets.values, key=lambda s: (s.r, s.key))
    statistic_ids = tuple(statistic_ids)
    table = enumerate_classes(n, allow_large=allow_large)
    X = table.statistic_counts(statistic_ids)
    logw = np.log(np.array(table.mults, dtype=np.float64))
    index = universe_index("simple", max(s.r for s in statistic_ids))
    t = np.array([float(targets.values[sid]
                        * complete_count(index[sid.key], n))
                  for sid in statistic_ids])
    _check_hull(X, table.mults, t)

    beta = np.zeros(len(statistic_ids))

    def dual(b):
        return _logsumexp(logw + X @ b) - b @ t

    f = dual(beta)
    for it in range(max_iter):
        a = logw + X @ beta
        a -= a.max()
        p = np.exp(a)
        p /= p.sum()
        mean = p @ X
        grad = mean - t
        scale = max(np.abs(t).max(), 1.0)
        resid = np.abs(grad).max() / scale
        if resid <= tol * 1e-2:
            break
        centered = X - mean
        H = (centered * p[:, None]).T @ centered
        # covariance matrix: PSD up to rounding
        assert np.linalg.eigvalsh(H).min() > -1e-6 * max(1.0, H.max())
        try:
            step = np.linalg.solve(H + 1e-12 * np.eye(len(beta)), -grad)
        except np.linalg.LinAlgError:
            step = -grad
        if not np.all(np.isfinite(step)):
            step = -grad
        # Armijo backtracking
        alpha = 1.0
        for _ in range(60):
            cand = beta + alpha * step
            fc = dual(cand)
            if fc <= f + 1e-4 * alpha * (grad @ step):
                beta, f = cand, fc
                break
            alpha *= 0.5
        else:
            step = -grad
            alpha = 1.0 / max(1.0, np.abs(grad).max())
            beta = beta + alpha * step
            f = dual(beta)
        if np.abs(beta).max() > 500:
            raise InfeasibleTargetError(
                "fit diverging: target appears to lie on the hull boundary; "
                "consider reducing the unbiasing parameter eta",
                direction=beta / np.abs(beta).max())

    a = logw + X @ beta
    lz = _logsumexp(a)
    logp = a - lz
    p = np.exp(logp)
    assert abs(p.sum() - 1.0) < 1e-12
    achieved = p @ X
    scale = max(np.abs(t).max(), 1.0)
    residual = float(np.abs(achieved - t).max() / scale)
    if residual > tol:
        raise InfeasibleTargetError(
            f"fit did not reach tolerance (residual {residual:.3e}); target "
            "may lie too close to the hull boundary")
    return ErgmModel(n=n, statistics=statistic_ids,
                     beta={sid: float(b) for sid, b
                           in zip(statistic_ids, beta)},
                     log_z=float(lz), target_counts=t,
                     achieved_counts=achieved, residual=residual,
                     table=table, stat_matrix=X, log_probs=logp)


@dataclass
class StatHistogram:
    statistic: object
    support: np.ndarray
    probabilities: np.ndarray
    mean: float
    modes: list
    modality: int

    def to_json_dict(self):
        return {
            "statistic": {"id": self.statistic.serialize(),
                          "alias": self.statistic.alias},
            "support": [int(s) for s in self.support],
            "probabilities": [float(p) for p in self.probabilities],
            "mean": self.mean,
            "modes": [int(m) for m in self.modes],
            "modality": self.modality,
        }


def ergm_distribution(model: ErgmModel, sid):
    """Exact marginal distribution of one statistic under the model."""
    if sid in model.statistics:
        col = model.stat_matrix[:, model.statistics.index(sid)]
    else:
        counts = []
        for edges in model.table.reps:
            cc = _counts_through_three(model.n, edges)
            counts.append(_statistic_from_counts(cc, sid, model.n, edges))
        col = np.array(counts, dtype=np.float64)
    p = np.exp(model.log_probs)
    support = np.unique(col)
    probs = np.array([p[col == s].sum() for s in support])
    mean = float((p * col).sum())
    modes, modality = _modes(probs)
    return StatHistogram(statistic=sid, support=support, probabilities=probs,
                         mean=mean, modes=[int(support[i]) for i in modes],
                         modality=modality)


def _modes(probs, min_separation=3, mass_floor=0.10):
    """Indices of large-scale modes.

    Exact histograms over graph classes show two kinds of small-scale
    structure that are not degeneracy: flat plateaus and short-period
    (parity) wiggles.  So: plateau-merge, find local maxima, merge maxima
    closer than min_separation support steps (keeping the taller), then
    split the support at the minima between surviving maxima and drop any
    basin carrying less than mass_floor of the probability, folding it into
    its neighbor.  What remains are the macroscopic modes.
    """
    groups = []  # (start, end, value)
    i = 0
    while i < len(probs):
        j = i
        while j + 1 < len(probs) and np.isclose(probs[j + 1], probs[i],
                                                rtol=1e-12, atol=0):
            j += 1
        groups.append((i, j, probs[i]))
        i = j + 1
    locmax = []
    for gi, (s, e, v) in enumerate(groups):
        left = groups[gi - 1][2] if gi > 0 else -1.0
        right = groups[gi + 1][2] if gi + 1 < len(groups) else -1.0
        if v > left and v > right:
            locmax.append([(s + e) // 2, v])
    # merge short-range (parity-scale) maxima, keeping the taller
    merged = True
    while merged and len(locmax) > 1:
        merged = False
        for gi in range(len(locmax) - 1):
            if locmax[gi + 1][0] - locmax[gi][0] < min_separation:
                keep = locmax[gi] if locmax[gi][1] >= locmax[gi + 1][1] \
                    else locmax[gi + 1]
                locmax[gi:gi + 2] = [keep]
                merged = True
                break
    # basins: split at the minimum between consecutive maxima
    cuts = [0]
    for gi in range(len(locmax) - 1):
        lo, hi = locmax[gi][0], locmax[gi + 1][0]
        cuts.append(lo + int(np.argmin(probs[lo:hi + 1])))
    cuts.append(len(probs))
    basins = [(cuts[gi], cuts[gi + 1], locmax[gi][0])
              for gi in range(len(locmax))]
    # fold negligible basins into their heavier neighbor
    while len(basins) > 1:
        masses = [probs[s:e].sum() for s, e, _ in basins]
        smallest = int(np.argmin(masses))
        if masses[smallest] >= mass_floor:
            break
        if smallest == 0:
            nbr = 1
        elif smallest == len(basins) - 1:
            nbr = smallest - 1
        else:
            nbr = smallest - 1 if masses[smallest - 1] >= masses[smallest + 1] \
                else smallest + 1
        lo = min(smallest, nbr)
        s0, _, _ = basins[lo]
        _, e1, _ = basins[lo + 1]
        peak_idx = basins[lo][2] if probs[basins[lo][2]] >= \
            probs[basins[lo + 1][2]] else basins[lo + 1][2]
        basins[lo:lo + 2] = [(s0, e1, peak_idx)]
    modes = [b[2] for b in basins]
    return modes, len(modes)


def degeneracy_diagnostics(h: StatHistogram):
    """Modality report: local maxima, distance from the mean to the nearest
    mode in support steps, and a bimodality verdict."""
    support = h.support
    nearest = None
    if h.modes:
        mean_idx = int(np.argmin(np.abs(support - h.mean)))
        nearest = min(abs(mean_idx - int(np.argmin(np.abs(support - m))))
                      for m in h.modes)
    return {
        "modes": h.modes,
        "modality": h.modality,
        "mean": h.mean,
        "mean_to_nearest_mode_steps": nearest,
        "bimodal": h.modality >= 2,
    }
