"""Subgraph counting: connected counts by enumeration, disconnected counts
derived from connected ones.

Counts are per edge-subset instance (automorphism-deduplicated).  In weighted
mode each instance is a multiset of edge slots and is counted with
multiplicity equal to the product of its edge weights (a slot used k times
contributes its weight to the k-th power).

Disconnected counts are never enumerated.  For a disconnected class
g = c (+) h (first component and remainder), counting ordered pairs of an
instance of c and an instance of h gives the exact linear identity

    c_c * c_h = sum over classes g' of N(g', c, h) * c_{g'}

where in unweighted modes the pair's union is taken as an edge set (so g'
ranges over classes with at most |c|+|h| edges), and in weighted mode slot
multiplicities add (so g' has exactly |c|+|h| edge units).  The unknown c_g
appears with the disjoint-split coefficient; every other unknown term has
fewer connected components, so solving classes in order of increasing edge
count and component count is triangular.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .classes import (ClassGraph, SubgraphId, class_id, class_info,
                      universe, MARK)

ORDER_CAPS = {"simple": 6, "directed": 5, "weighted": 5, "attributed": 3,
              "bipartite": 4, "local-node": 3, "local-edge": 3}


class OrderCapError(ValueError):
    """Requested order exceeds the supported cap for the mode."""


def check_order(mode, r_max):
    cap = ORDER_CAPS[mode]
    if r_max > cap:
        raise OrderCapError(
            f"order {r_max} exceeds the cap {cap} for mode {mode!r}")
    if r_max < 1:
        raise ValueError("order must be at least 1")


# ---------------------------------------------------------------------------
# Classification of small edge sets

class _Classifier:
    """Maps concrete edge sets of a host graph to SubgraphIds, memoized on a
    relabeled signature so canonicalization runs once per shape."""

    def __init__(self, mode, directed, host_colors=None):
        self.mode = mode
        self.directed = directed
        self.host_colors = host_colors  # node -> color, or None
        self.cache = {}

    def classify(self, slots, mults=None):
        """slots: tuple of (u, v) host pairs (ordered if directed);
        mults: per-slot multiplicities (weighted mode)."""
        remap = {}
        sig_edges = []
        for idx, (u, v) in enumerate(slots):
            a = remap.setdefault(u, len(remap))
            b = remap.setdefault(v, len(remap))
            val = 1 if mults is None else mults[idx]
            sig_edges.append((a, b, val))
        if self.host_colors is None:
            colors = (0,) * len(remap)
        else:
            colors = tuple(self.host_colors[x] for x in remap)
        sig = (tuple(sig_edges), colors)
        sid = self.cache.get(sig)
        if sid is None:
            cg = ClassGraph.make(len(remap), sig_edges, directed=self.directed,
                                 colors=colors)
            sid = class_id(cg, self.mode)
            self.cache[sig] = sid
        return sid


def graph_mode_colors(G):
    """(mode, per-node color list or None) for a host Graph."""
    mode = G.mode()
    if mode in ("attributed", "bipartite"):
        labs = G.labels()
        idx = {l: i for i, l in enumerate(labs)}
        return mode, [idx[G.node_attrs[v]] for v in range(G.n)]
    if mode == "weighted":
        return mode, None
    return mode, None


# ---------------------------------------------------------------------------
# Connected edge-subset enumeration (ESU on the line graph)

def _line_graph(slots):
    """Adjacency lists over edge indices; arcs sharing a node are adjacent."""
    by_node = {}
    for i, (u, v) in enumerate(slots):
        by_node.setdefault(u, []).append(i)
        by_node.setdefault(v, []).append(i)
    adj = [set() for _ in slots]
    for members in by_node.values():
        for a, b in itertools.combinations(members, 2):
            adj[a].add(b)
            adj[b].add(a)
    return adj


def connected_edge_subsets(slots, max_size):
    """Yield every connected edge subset (as a sorted tuple of slot indices)
    of size 1..max_size exactly once."""
    adj = _line_graph(slots)

    def extend(sub, ext, nbrs, root):
        yield tuple(sub)
        if len(sub) == max_size:
            return
        ext = list(ext)
        while ext:
            w = ext.pop()
            new_nbrs = nbrs | adj[w]
            new_ext = [u for u in ext]
            for u in adj[w]:
                if u > root and u not in nbrs and u != w:
                    new_ext.append(u)
            sub.append(w)
            yield from extend(sub, new_ext, new_nbrs, root)
            sub.pop()

    for root in range(len(slots)):
        ext = [u for u in adj[root] if u > root]
        yield from extend([root], ext, adj[root] | {root}, root)


def count_connected(G, r_max):
    """Connected-class counts for every connected class with <= r_max edges.

    Returns dict SubgraphId -> count (int for unweighted modes, Fraction for
    weighted).  Classes that do not occur are absent from the dict.
    """
    mode, colors = graph_mode_colors(G)
    check_order(mode, r_max)
    if mode == "simple" and not G.weighted and r_max <= 3:
        return _fast_counts_simple(G, r_max)
    slots = sorted(G.edges)
    weighted = G.weighted
    clf = _Classifier(mode, G.directed, colors)
    counts = {}
    if not weighted:
        for sub in connected_edge_subsets(slots, r_max):
            sid = clf.classify(tuple(slots[i] for i in sub))
            counts[sid] = counts.get(sid, 0) + 1
        return counts

    # weighted: distribute multiplicities over each connected slot subset
    weights = [G.edges[s] for s in slots]
    comp_cache = {}
    for sub in connected_edge_subsets(slots, r_max):
        s = len(sub)
        pair = tuple(slots[i] for i in sub)
        for mults in _compositions_upto(s, r_max, comp_cache):
            sid = clf.classify(pair, mults)
            w = Fraction(1)
            for i, mexp in zip(sub, mults):
                w *= weights[i] ** mexp
            counts[sid] = counts.get(sid, Fraction(0)) + w
    return counts


def _compositions_upto(s, r_max, cache):
    """All tuples of s positive ints with sum <= r_max."""
    got = cache.get(s)
    if got is None:
        got = []
        for total in range(s, r_max + 1):
            got.extend(_compositions(total, s))
        cache[s] = got
    return got


def _compositions(total, parts):
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def _fast_counts_simple(G, r_max):
    """Specialized counters for simple graphs through third order: degrees
    give stars, neighbor intersections give triangles, a walk correction
    gives paths."""
    n = G.n
    adj = [0] * n
    deg = [0] * n
    for (u, v) in G.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        deg[u] += 1
        deg[v] += 1
    m = len(G.edges)
    counts = {}

    def put(alias, value):
        if value:
            from .classes import named_class
            counts[named_class("simple", alias).id] = value

    put("edge", m)
    if r_max >= 2:
        put("wedge", sum(d * (d - 1) // 2 for d in deg))
    if r_max >= 3:
        tri2 = 0
        path = 0
        for (u, v) in G.edges:
            tri2 += (adj[u] & adj[v]).bit_count()
            path += (deg[u] - 1) * (deg[v] - 1)
        tri = tri2 // 3
        put("triangle", tri)
        put("claw", sum(d * (d - 1) * (d - 2) // 6 for d in deg))
        put("path", path - 3 * tri)
    return counts


# ---------------------------------------------------------------------------
# Disconnected counts from connected counts

@lru_cache(maxsize=None)
def _split_coefficients(mode, r_max, labels, c_key, h_key):
    """Coefficient table {SubgraphId g' -> N(g', c, h)} for the ordered-pair
    identity, computed by enumerating splits of every class."""
    uni = universe(mode, r_max, labels)
    index = {}
    for infos in uni.values():
        for ci in infos:
            index[ci.id.key] = ci
    c_info = index[c_key]
    h_info = index[h_key]
    rc, rh = c_info.id.r, h_info.id.r
    table = {}
    if mode == "weighted":
        orders = [rc + rh]
    else:
        orders = range(max(rc, rh), min(rc + rh, r_max) + 1)
    for r in orders:
        for ci in uni[r]:
            n = _count_splits(ci.graph, mode, c_key, h_key, rc, rh)
            if n:
                table[ci.id] = n
    return table


def _count_splits(cg, mode, c_key, h_key, rc, rh):
    from .classes import canonical_class

    def key_of(slot_subset):
        # slot_subset: list of (u, v, val)
        sub = ClassGraph.make(cg.k, slot_subset, directed=cg.directed,
                              colors=cg.colors).relabel_compact()
        return canonical_class(sub)[0]

    n = 0
    if mode == "weighted":
        ranges = [range(0, val + 1) for _, _, val in cg.edges]
        for choice in itertools.product(*ranges):
            if sum(choice) != rc:
                continue
            c_part = [(u, v, i) for (u, v, _), i in zip(cg.edges, choice) if i]
            h_part = [(u, v, val - i)
                      for (u, v, val), i in zip(cg.edges, choice) if val - i]
            if key_of(c_part) == c_key and key_of(h_part) == h_key:
                n += 1
        return n

    edges = list(cg.edges)
    r = len(edges)
    for c_idx in itertools.combinations(range(r), rc):
        c_part = [edges[i] for i in c_idx]
        if key_of(c_part) != c_key:
            continue
        rest = [i for i in range(r) if i not in c_idx]
        if len(rest) > rh:
            continue
        extra = rh - len(rest)
        for x_idx in itertools.combinations(c_idx, extra):
            h_part = [edges[i] for i in rest] + [edges[i] for i in x_idx]
            if key_of(h_part) == h_key:
                n += 1
    return n


def derive_disconnected(connected_counts, G, r_max):
    """Extend connected counts to every class with <= r_max edges.

    Returns dict SubgraphId -> count covering the full universe (zero counts
    included).  Raises ValueError on a negative derived count, which signals
    inconsistent input counts.
    """
    mode, _ = graph_mode_colors(G)
    check_order(mode, r_max)
    labels = len(G.labels()) if G.node_attrs is not None else 2
    uni = universe(mode, r_max, labels)
    zero = Fraction(0) if G.weighted else 0
    counts = {}
    for r in range(1, r_max + 1):
        for ci in uni[r]:
            if ci.connected:
                counts[ci.id] = connected_counts.get(ci.id, zero)
    for r in range(1, r_max + 1):
        disc = [ci for ci in uni[r] if not ci.connected]
        disc.sort(key=lambda ci: len(ci.graph.components()))
        for ci in disc:
            comps = ci.graph.components()
            c_part = comps[0]
            h_part = ClassGraph.make(
                sum(c.k for c in comps[1:]),
                _shift_union(comps[1:]),
                directed=ci.graph.directed,
                colors=tuple(itertools.chain.from_iterable(
                    c.colors for c in comps[1:])))
            from .classes import canonical_class
            c_key = canonical_class(c_part)[0]
            h_key = canonical_class(h_part)[0]
            c_id = class_id(c_part, mode)
            h_id = class_id(h_part, mode)
            table = _split_coefficients(mode, r_max, labels, c_key, h_key)
            lhs = counts[c_id] * counts[h_id]
            self_coeff = None
            acc = lhs
            for gid, coeff in table.items():
                if gid == ci.id:
                    self_coeff = coeff
                    continue
                acc -= coeff * counts[gid]
            if self_coeff is None:
                raise AssertionError(
                    f"disjoint split missing for {ci.id.serialize()}")
            value = Fraction(acc, self_coeff)
            if not G.weighted:
                if value.denominator != 1:
                    raise AssertionError(
                        f"non-integer derived count for {ci.id.serialize()}")
                value = int(value)
            if value < 0:
                raise ValueError(
                    f"negative derived count for {ci.id.serialize()}: "
                    "inconsistent input counts")
            counts[ci.id] = value
    return counts


def _shift_union(comps):
    out = []
    offset = 0
    for c in comps:
        for u, v, val in c.edges:
            out.append((u + offset, v + offset, val))
        offset += c.k
    return out


def full_counts(G, r_max):
    """Connected enumeration plus disconnected derivation."""
    return derive_disconnected(count_connected(G, r_max), G, r_max)
