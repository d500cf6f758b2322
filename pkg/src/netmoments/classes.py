"""Isomorphism classes of small substructures.

A substructure class is a small vertex-colored (multi)graph together with a
feature mode.  Modes:

  simple      undirected, unweighted
  directed    directed, unweighted
  weighted    undirected multigraph shapes (edge value = multiplicity)
  attributed  undirected with node labels from a finite alphabet
  bipartite   attributed with two labels and no same-label edges
  local-node  simple plus one distinguished node (color 1)
  local-edge  simple plus one distinguished edge (mark bit on the edge value)

Edge values fold multiplicity and the local-edge mark together as
value = multiplicity + MARK * marked, with multiplicity >= 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .canonical import canonicalize

MARK = 64  # mark bit offset for local-edge values (multiplicities stay < 64)

MODES = ("simple", "directed", "weighted", "attributed", "bipartite",
         "local-node", "local-edge")


@dataclass(frozen=True)
class ClassGraph:
    """Normalized representative of a substructure class."""
    k: int
    directed: bool
    colors: tuple            # per-node color
    edges: tuple             # tuples (u, v, value); undirected has u < v

    @staticmethod
    def make(k, edges, directed=False, colors=None):
        if colors is None:
            colors = (0,) * k
        norm = {}
        for u, v, val in edges:
            if u == v:
                raise ValueError("self-loop in class graph")
            if not directed and u > v:
                u, v = v, u
            if (u, v) in norm:
                raise ValueError("duplicate edge in class graph")
            norm[(u, v)] = val
        es = tuple(sorted((u, v, val) for (u, v), val in norm.items()))
        return ClassGraph(k=k, directed=directed, colors=tuple(colors), edges=es)

    @property
    def r(self):
        """Total edge count, with multiplicity (mark bit stripped)."""
        return sum(val % MARK for _, _, val in self.edges)

    def units(self):
        """Edge units: one entry per unit of multiplicity, (u, v, marked)."""
        out = []
        for u, v, val in self.edges:
            marked = val >= MARK
            for _ in range(val % MARK):
                out.append((u, v, marked))
                marked = False  # a mark applies to a single unit
        return out

    def is_connected(self):
        if self.k == 0:
            return True
        seen = {0}
        frontier = [0]
        nbr = {i: set() for i in range(self.k)}
        for u, v, _ in self.edges:
            nbr[u].add(v)
            nbr[v].add(u)
        while frontier:
            x = frontier.pop()
            for y in nbr[x]:
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return len(seen) == self.k

    def components(self):
        """Connected components as compact ClassGraphs (isolated nodes
        become single-node components)."""
        parent = list(range(self.k))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, _ in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        groups = {}
        for x in range(self.k):
            groups.setdefault(find(x), []).append(x)
        comps = []
        for nodes in groups.values():
            remap = {x: i for i, x in enumerate(nodes)}
            nodeset = set(nodes)
            es = [(remap[u], remap[v], val) for u, v, val in self.edges
                  if u in nodeset]
            comps.append(ClassGraph.make(
                len(nodes), es, directed=self.directed,
                colors=tuple(self.colors[x] for x in nodes)))
        return comps

    def relabel_compact(self):
        """Drop isolated nodes and relabel the rest to 0..k'-1.

        Isolated nodes never occur in classes built from edge sets, but parts
        of a partition may leave gaps after node selection."""
        used = sorted({x for u, v, _ in self.edges for x in (u, v)})
        remap = {x: i for i, x in enumerate(used)}
        return ClassGraph.make(
            len(used),
            [(remap[u], remap[v], val) for u, v, val in self.edges],
            directed=self.directed,
            colors=tuple(self.colors[x] for x in used),
        )


@dataclass(frozen=True)
class SubgraphId:
    """Canonical isomorphism-class identifier."""
    mode: str
    r: int
    key: str                     # canonical encoding, hex
    alias: str = field(default=None, compare=False, hash=False)

    def serialize(self):
        s = f"{self.mode}:{self.r}:{self.key}"
        if self.alias:
            s += f":{self.alias}"
        return s

    @staticmethod
    def parse(text):
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"bad SubgraphId: {text!r}")
        mode, r, key = parts[0], int(parts[1]), parts[2]
        alias = parts[3] if len(parts) == 4 else None
        return SubgraphId(mode=mode, r=r, key=key, alias=alias)

    def __repr__(self):
        return f"SubgraphId({self.serialize()})"


@dataclass(frozen=True)
class ClassInfo:
    id: SubgraphId
    graph: ClassGraph
    aut: int
    connected: bool


_canon_cache = {}


def canonical_class(cg):
    """Canonical key (hex) and automorphism count of a ClassGraph, cached.

    Disconnected graphs are canonicalized per component: the combined key is
    the sorted concatenation of component keys, and the automorphism count is
    the product of component counts times a factorial for each set of
    identical components.  This keeps the permutation search inside single
    components, which are small."""
    got = _canon_cache.get(cg)
    if got is not None:
        return got
    comps = cg.components()
    if len(comps) <= 1:
        res = canonicalize(cg.k, cg.edges, directed=cg.directed,
                           colors=cg.colors)
        got = (res.key.hex(), res.aut)
    else:
        keys = []
        aut = 1
        for comp in comps:
            ck, ca = canonical_class(comp)
            keys.append(ck)
            aut *= ca
        counts = {}
        for ck in keys:
            counts[ck] = counts.get(ck, 0) + 1
        for c in counts.values():
            aut *= _fact(c)
        combined = bytes([len(comps), int(cg.directed)]) + b"".join(
            bytes.fromhex(ck) + b"\xff" for ck in sorted(keys))
        got = (combined.hex(), aut)
    _canon_cache[cg] = got
    return got


def _fact(v):
    out = 1
    for i in range(2, v + 1):
        out *= i
    return out


def class_id(cg, mode):
    key, aut = canonical_class(cg)
    return SubgraphId(mode=mode, r=cg.r, key=key,
                      alias=_alias_registry(mode).get(key))


def class_info(cg, mode):
    key, aut = canonical_class(cg)
    sid = SubgraphId(mode=mode, r=cg.r, key=key,
                     alias=_alias_registry(mode).get(key))
    return ClassInfo(id=sid, graph=cg, aut=aut, connected=cg.is_connected())


# ---------------------------------------------------------------------------
# Universe generation

def _extensions(cg, mode, labels):
    """All classes obtainable from cg by adding a single edge unit."""
    directed = cg.directed
    out = []
    present = {(u, v) for u, v, _ in cg.edges}

    def node_color_options(existing_colors):
        if mode in ("attributed", "bipartite"):
            return list(range(labels))
        if mode == "local-node":
            opts = [0]
            if 1 not in existing_colors:
                opts.append(1)
            return opts
        return [0]

    def edge_ok(cu, cv):
        if mode == "bipartite":
            return cu != cv
        return True

    has_mark = any(val >= MARK for _, _, val in cg.edges)

    def value_options():
        if mode == "local-edge" and not has_mark:
            return [1, 1 + MARK]
        return [1]

    # new edge between existing nodes
    for u in range(cg.k):
        for v in range(cg.k):
            if u == v:
                continue
            if not directed and u > v:
                continue
            if (u, v) in present:
                continue
            if directed and (u, v) in present:
                continue
            if not edge_ok(cg.colors[u], cg.colors[v]):
                continue
            for val in value_options():
                out.append(ClassGraph.make(
                    cg.k, list(cg.edges) + [(u, v, val)],
                    directed=directed, colors=cg.colors))

    # new edge from an existing node to a fresh node (both orientations when
    # directed)
    for u in range(cg.k):
        for c in node_color_options(cg.colors):
            if not edge_ok(cg.colors[u], c):
                continue
            for val in value_options():
                new_edges = [(u, cg.k, val)]
                out.append(ClassGraph.make(
                    cg.k + 1, list(cg.edges) + new_edges,
                    directed=directed, colors=cg.colors + (c,)))
                if directed:
                    out.append(ClassGraph.make(
                        cg.k + 1, list(cg.edges) + [(cg.k, u, val)],
                        directed=directed, colors=cg.colors + (c,)))

    # new isolated edge on two fresh nodes
    colors_a = node_color_options(cg.colors)
    for ca in colors_a:
        cb_opts = node_color_options(cg.colors + (ca,))
        for cb in cb_opts:
            if not edge_ok(ca, cb):
                continue
            for val in value_options():
                out.append(ClassGraph.make(
                    cg.k + 2, list(cg.edges) + [(cg.k, cg.k + 1, val)],
                    directed=directed, colors=cg.colors + (ca, cb)))

    # increment multiplicity of an existing edge
    if mode == "weighted":
        for idx, (u, v, val) in enumerate(cg.edges):
            es = list(cg.edges)
            es[idx] = (u, v, val + 1)
            out.append(ClassGraph.make(cg.k, es, directed=directed,
                                       colors=cg.colors))
    return out


def _seed_classes(mode, labels):
    directed = mode == "directed"
    seeds = []
    if mode in ("attributed", "bipartite"):
        for a in range(labels):
            for b in range(a, labels):
                if mode == "bipartite" and a == b:
                    continue
                seeds.append(ClassGraph.make(2, [(0, 1, 1)], colors=(a, b)))
    elif mode == "local-node":
        seeds.append(ClassGraph.make(2, [(0, 1, 1)], colors=(1, 0)))  # self
        seeds.append(ClassGraph.make(2, [(0, 1, 1)], colors=(0, 0)))  # other
    elif mode == "local-edge":
        seeds.append(ClassGraph.make(2, [(0, 1, 1 + MARK)]))          # the anchor
        seeds.append(ClassGraph.make(2, [(0, 1, 1)]))                 # detached
    else:
        seeds.append(ClassGraph.make(2, [(0, 1, 1)], directed=directed))
    return seeds


@lru_cache(maxsize=None)
def universe(mode, r_max, labels=2):
    """Per-order lists of ClassInfo for every class with 1..r_max edges.

    Returns a dict order -> list of ClassInfo (canonical dedupe, stable
    order).  labels is the alphabet size for attributed/bipartite modes.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    out = {}
    current = {}
    for cg in _seed_classes(mode, labels):
        info = class_info(cg, mode)
        current[info.id] = info
    out[1] = sorted(current.values(), key=lambda ci: ci.id.key)
    for r in range(2, r_max + 1):
        nxt = {}
        for ci in out[r - 1]:
            for ext in _extensions(ci.graph, mode, labels):
                info = class_info(ext, mode)
                if info.id not in nxt:
                    nxt[info.id] = info
        out[r] = sorted(nxt.values(), key=lambda ci: ci.id.key)
    return out


def universe_index(mode, r_max, labels=2):
    """Map canonical key -> ClassInfo over all orders of the universe."""
    table = {}
    for infos in universe(mode, r_max, labels).values():
        for ci in infos:
            table[ci.id.key] = ci
    return table


# ---------------------------------------------------------------------------
# Complete counts

def _falling(n, k):
    out = 1
    for i in range(k):
        out *= n - i
    return out


def complete_count(ci, n, label_counts=None):
    """Count of the class in the complete host on n nodes, exact rational.

    For attributed/bipartite modes label_counts maps color -> available node
    count.  For local-node mode the distinguished color has one available
    node.  For local-edge mode the host is K_n with a single marked pair.
    Returns 0 when n (or a label pool) is too small.
    """
    cg = ci.graph
    mode = ci.id.mode
    if any(val % MARK > 1 for _, _, val in cg.edges) and mode != "weighted":
        raise ValueError("multiplicities only occur in weighted mode")

    if mode == "local-edge":
        return _complete_count_local_edge(ci, n)

    if mode in ("attributed", "bipartite"):
        if label_counts is None:
            raise ValueError("attributed complete counts need label_counts")
        pools = dict(label_counts)
    elif mode == "local-node":
        pools = {0: n - 1, 1: 1}
    else:
        pools = {0: n}

    need = {}
    for c in cg.colors:
        need[c] = need.get(c, 0) + 1
    total = 1
    for c, kc in need.items():
        avail = pools.get(c, 0)
        if avail < kc:
            return Fraction(0)
        total *= _falling(avail, kc)
    return Fraction(total, ci.aut)


def _complete_count_local_edge(ci, n):
    cg = ci.graph
    marked = [e for e in cg.edges if e[2] >= MARK]
    if len(marked) > 1:
        raise ValueError("at most one marked edge")
    if marked:
        if n < cg.k:
            return Fraction(0)
        # the marked edge must land on the marked pair (2 orientations)
        return Fraction(2 * _falling(n - 2, cg.k - 2), ci.aut)
    # unmarked class: instances avoiding the marked pair as an edge
    if n < cg.k:
        return Fraction(0)
    total = Fraction(_falling(n, cg.k), ci.aut)
    s = len(cg.edges)  # simple shapes only in local-edge mode
    pairs = n * (n - 1) // 2
    return total - total * Fraction(s, pairs)


# ---------------------------------------------------------------------------
# Aliases for the named substructures

def _named_classes(mode):
    E = ClassGraph.make
    if mode == "simple" or mode == "weighted":
        named = {
            "edge": E(2, [(0, 1, 1)]),
            "wedge": E(3, [(0, 1, 1), (1, 2, 1)]),
            "two-parallel": E(4, [(0, 1, 1), (2, 3, 1)]),
            "triangle": E(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]),
            "claw": E(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)]),
            "path": E(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]),
            "wedge+edge": E(5, [(0, 1, 1), (1, 2, 1), (3, 4, 1)]),
            "three-parallel": E(6, [(0, 1, 1), (2, 3, 1), (4, 5, 1)]),
            "triangle-edge": E(4, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 1)]),
            "square": E(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)]),
            "four-star": E(5, [(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, 1)]),
            "diamond": E(4, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (0, 3, 1), (2, 3, 1)]),
            "K4": E(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1),
                        (2, 3, 1)]),
        }
        if mode == "weighted":
            named.update({
                "double-edge": E(2, [(0, 1, 2)]),
                "triple-edge": E(2, [(0, 1, 3)]),
                "double-edge-wedge": E(3, [(0, 1, 2), (1, 2, 1)]),
                "double-edge+edge": E(4, [(0, 1, 2), (2, 3, 1)]),
            })
        return named
    if mode == "directed":
        D = lambda k, es: E(k, es, directed=True)
        return {
            "edge": D(2, [(0, 1, 1)]),
            "reciprocal": D(2, [(0, 1, 1), (1, 0, 1)]),
            "wedge-in-in": D(3, [(0, 1, 1), (2, 1, 1)]),
            "wedge-out-out": D(3, [(1, 0, 1), (1, 2, 1)]),
            "wedge-in-out": D(3, [(0, 1, 1), (1, 2, 1)]),
            "reciprocal-wedge-in": D(3, [(0, 1, 1), (1, 0, 1), (2, 1, 1)]),
            "reciprocal-wedge-out": D(3, [(0, 1, 1), (1, 0, 1), (1, 2, 1)]),
            "triangle-trans": D(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]),
            "triangle-cyclic": D(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)]),
            "reciprocal-triangle-in-in":
                D(3, [(0, 1, 1), (1, 0, 1), (0, 2, 1), (1, 2, 1)]),
            "reciprocal-triangle-out-out":
                D(3, [(0, 1, 1), (1, 0, 1), (2, 0, 1), (2, 1, 1)]),
            "reciprocal-triangle-in-out":
                D(3, [(0, 1, 1), (1, 0, 1), (0, 2, 1), (2, 1, 1)]),
            "double-reciprocal":
                D(3, [(0, 1, 1), (1, 0, 1), (1, 2, 1), (2, 1, 1)]),
            "triad-minus-one":
                D(3, [(0, 1, 1), (1, 0, 1), (1, 2, 1), (2, 1, 1), (0, 2, 1)]),
            "complete-triad":
                D(3, [(0, 1, 1), (1, 0, 1), (1, 2, 1), (2, 1, 1), (0, 2, 1),
                      (2, 0, 1)]),
        }
    if mode == "local-node":
        return {
            "self": E(2, [(0, 1, 1)], colors=(1, 0)),
            "other": E(2, [(0, 1, 1)], colors=(0, 0)),
            "wedge-center": E(3, [(0, 1, 1), (0, 2, 1)], colors=(1, 0, 0)),
            "wedge-end": E(3, [(0, 1, 1), (1, 2, 1)], colors=(1, 0, 0)),
            "wedge-other": E(3, [(0, 1, 1), (1, 2, 1)], colors=(0, 0, 0)),
            "triangle-local":
                E(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], colors=(1, 0, 0)),
        }
    if mode == "local-edge":
        return {
            "star-edge": E(2, [(0, 1, 1 + MARK)]),
            "detached-edge": E(2, [(0, 1, 1)]),
            "wedge-attached": E(3, [(0, 1, 1 + MARK), (1, 2, 1)]),
            "wedge-detached": E(3, [(0, 1, 1), (1, 2, 1)]),
            "triangle-local":
                E(3, [(0, 1, 1 + MARK), (1, 2, 1), (0, 2, 1)]),
        }
    return {}


_alias_cache = {}


def _alias_registry(mode):
    reg = _alias_cache.get(mode)
    if reg is None:
        reg = {}
        for alias, cg in _named_classes(mode).items():
            key, _ = canonical_class(cg)
            reg[key] = alias
        _alias_cache[mode] = reg
    return reg


def named_class(mode, alias):
    """ClassInfo for one of the built-in named substructures."""
    cg = _named_classes(mode).get(alias)
    if cg is None:
        raise KeyError(f"no named class {alias!r} in mode {mode!r}")
    return class_info(cg, mode)


def attributed_alias(cg, label_names):
    """Systematic alias for small attributed classes (edge/wedge/triangle/claw)."""
    lab = lambda c: label_names[c]
    es = cg.edges
    if len(es) == 1:
        u, v, _ = es[0]
        return "edge-" + "".join(sorted((lab(cg.colors[u]), lab(cg.colors[v]))))
    deg = {}
    for u, v, _ in es:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    if len(es) == 2 and cg.k == 3 and cg.is_connected():
        center = max(deg, key=deg.get)
        ends = sorted(lab(cg.colors[x]) for x in range(cg.k) if x != center)
        return f"wedge-{ends[0]}{lab(cg.colors[center])}{ends[1]}"
    if len(es) == 3 and cg.k == 3:
        return "triangle-" + "".join(sorted(lab(c) for c in cg.colors))
    if len(es) == 3 and cg.k == 4 and max(deg.values()) == 3:
        center = max(deg, key=deg.get)
        leaves = sorted(lab(cg.colors[x]) for x in range(cg.k) if x != center)
        return f"claw-{lab(cg.colors[center])}-" + "".join(leaves)
    return None
