"""Seeded random instance generators for test corpora and scaling runs."""

from __future__ import annotations

import random
from typing import Sequence

import networkx as nx

from .errors import InputError
from .model import (
    BetweennessInstance,
    Edge,
    Graph,
    LeafTree,
    PstInstance,
    PtbeInstance,
    XorSatInstance,
    edge,
)


def random_leaf_tree(rng: random.Random, leaves: int) -> LeafTree:
    """Random tree with ``leaves`` leaves and no degree-2 vertices.

    Grows a star on three leaves by either attaching a new leaf to an inner
    vertex or splitting an edge with a new inner vertex that carries a leaf.
    """
    if leaves < 2:
        raise InputError("a leaf tree needs at least two leaves")
    if leaves == 2:
        return LeafTree.build([(0, 1), (0, 2)])
    edges: list[tuple[int, int]] = [(0, 1), (0, 2), (0, 3)]
    inner = [0]
    nxt = 4
    for _ in range(leaves - 3):
        if rng.random() < 0.5:
            i = rng.randrange(len(edges))
            u, v = edges[i]
            m, leaf = nxt, nxt + 1
            nxt += 2
            edges[i] = (u, m)
            edges += [(m, v), (m, leaf)]
            inner.append(m)
        else:
            edges.append((rng.choice(inner), nxt))
            nxt += 1
    return LeafTree.build(edges)


def random_represented_order(rng: random.Random, tree: LeafTree) -> tuple[int, ...]:
    """Uniformly shuffle the children of every inner vertex and read the leaves."""
    if tree.root is None:
        order = sorted(tree.leaves)
        rng.shuffle(order)
        return tuple(order)
    out: list[int] = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        if v in tree.leaves:
            out.append(v)
            continue
        kids = list(tree.children[v])
        rng.shuffle(kids)
        stack.extend(kids)
    return tuple(out)


def random_outerplanar_edges(rng: random.Random, order: Sequence[int], connected: bool) -> set[Edge]:
    """Crossing-free edges for the spine ``order``.

    A random triangulation of the polygon on ``order`` is drawn; the result
    is a random spanning tree of it (``connected``) or a random subset.
    """
    n = len(order)
    if n < 2:
        return set()
    tri: list[tuple[int, int]] = [(i, i + 1) for i in range(n - 1)]
    if n > 2:
        tri.append((0, n - 1))
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if j - i < 2:
            continue
        k = rng.randrange(i + 1, j)
        for a, b in ((i, k), (k, j)):
            if b - a >= 2:
                tri.append((a, b))
        stack.extend([(i, k), (k, j)])
    if connected:
        g = nx.Graph()
        for a, b in tri:
            g.add_edge(a, b, weight=rng.random())
        chosen = list(nx.minimum_spanning_edges(g, data=False))
        extra = [e for e in tri if rng.random() < 0.15]
        chosen += extra
    else:
        chosen = [e for e in tri if rng.random() < 0.4]
    return {edge(order[a], order[b]) for a, b in chosen}


def random_ptbe(
    rng: random.Random,
    leaves: int,
    pages: int,
    *,
    planted: bool = True,
    biconnected_pages: int | None = None,
) -> PtbeInstance:
    """Random instance whose first ``biconnected_pages`` pages are T-biconnected.

    With ``planted`` every page is crossing-free for one hidden represented
    order, so the answer is YES; otherwise pages are random edge sets.
    """
    tree = random_leaf_tree(rng, leaves)
    con = pages - 1 if biconnected_pages is None else biconnected_pages
    hidden = random_represented_order(rng, tree)
    out = []
    for p in range(pages):
        connected = p < con
        if planted:
            out.append(random_outerplanar_edges(rng, hidden, connected))
        else:
            out.append(_random_page(rng, sorted(tree.leaves), connected))
    return PtbeInstance.build(tree, out)


def _random_page(rng: random.Random, leaves: list[int], connected: bool) -> set[Edge]:
    page: set[Edge] = set()
    shuffled = list(leaves)
    rng.shuffle(shuffled)
    if connected:
        for i in range(1, len(shuffled)):
            page.add(edge(shuffled[i], rng.choice(shuffled[:i])))
    for _ in range(rng.randint(0, len(leaves))):
        a, b = rng.sample(leaves, 2)
        page.add(edge(a, b))
    return page


def random_betweenness(rng: random.Random, n: int, m: int) -> BetweennessInstance:
    triples = [tuple(rng.sample(range(n), 3)) for _ in range(m)]
    return BetweennessInstance(tuple(range(n)), tuple(triples))  # type: ignore[arg-type]


def random_xorsat(rng: random.Random, n: int, m: int, budget: int = 0) -> XorSatInstance:
    clauses = []
    for _ in range(m):
        x, y = rng.sample(range(n), 2)
        clauses.append(((x, rng.random() < 0.5), (y, rng.random() < 0.5)))
    return XorSatInstance(tuple(range(n)), tuple(clauses), budget)


def random_pst(rng: random.Random, n: int, terminals: int, max_weight: int = 3, budget: int = 0) -> PstInstance:
    """Planar graph from a random polygon triangulation with a few chords removed."""
    order = list(range(n))
    edges = random_outerplanar_edges(rng, order, connected=True)
    # add a hub to leave the outerplanar class
    hub = n
    for v in order:
        if rng.random() < 0.5:
            edges.add(edge(v, hub))
    edges.add(edge(0, hub))
    g = Graph.build(edges, range(n + 1))
    weights = {e: rng.randint(1, max_weight) for e in g.edges}
    terms = frozenset(rng.sample(range(n + 1), min(terminals, n + 1)))
    return PstInstance(g, weights, terms, budget)
