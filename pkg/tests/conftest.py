"""Shared test helpers: random graph factories and brute-force oracles."""

import itertools
import random
from fractions import Fraction

import pytest

from netmoments.graphs import Graph, make_graph

CRITERIA = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance" in report.nodeid and name.startswith(
            "test_criterion_") and report.when == "call":
        num = int(name.split("_")[2])
        CRITERIA[num] = (report.outcome, name)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERIA:
        return
    tw = terminalreporter
    tw.section("acceptance criteria")
    for num in sorted(CRITERIA):
        outcome, name = CRITERIA[num]
        label = name.split(f"test_criterion_{num:02d}_")[-1]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        tw.write_line(f"criterion {num:2d} ({label}): {verdict}")


def random_graph(rng, n, p=0.5):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < p]
    return make_graph(n, edges)


def random_weighted_graph(rng, n, p=0.5, max_w=3):
    edges = {}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges[(u, v)] = Fraction(rng.randint(1, max_w))
    return Graph(n=n, edges=edges, weighted=True)


# ---------------------------------------------------------------------------
# Brute-force canonical form: minimum labeled edge tuple over permutations,
# memoized on a relabeled key.  Independent of the package's canonicalizer.

_brute_cache = {}


def _relabel_key(edges, directed, colors=None):
    remap = {}
    out = []
    for item in edges:
        u, v = item[0], item[1]
        for x in (u, v):
            if x not in remap:
                remap[x] = len(remap)
        rest = item[2:] if len(item) > 2 else ()
        out.append((remap[u], remap[v]) + tuple(rest))
    cols = None
    if colors is not None:
        cols = tuple(colors[x] for x in sorted(remap, key=remap.get))
    return (tuple(sorted(out)), directed, cols)


def brute_canonical(edges, directed=False, colors=None):
    """Canonical form by explicit minimization over node permutations."""
    key = _relabel_key(edges, directed, colors)
    got = _brute_cache.get(key)
    if got is not None:
        return got
    r_edges, _, r_cols = key
    nodes = sorted({x for e in r_edges for x in e[:2]})
    k = len(nodes)
    best = None
    for perm in itertools.permutations(range(k)):
        mapped = []
        for item in r_edges:
            u, v = perm[item[0]], perm[item[1]]
            if not directed and u > v:
                u, v = v, u
            mapped.append((u, v) + tuple(item[2:]))
        cand_cols = None
        if r_cols is not None:
            inv = [0] * k
            for i, pi in enumerate(perm):
                inv[pi] = i
            cand_cols = tuple(r_cols[inv[i]] for i in range(k))
        cand = (tuple(sorted(mapped)), cand_cols)
        if best is None or cand < best:
            best = cand
    _brute_cache[key] = best
    return best
