"""Betweenness reductions to Sunflower SEFE and to partitioned book embedding.

Every generator indexes the elements ``1..n`` in ascending id order and
builds one gadget per triple.  Gadget names are 1-based (``S[2].x[3]`` is the
leaf for the third element in the second star); provenance keys use the
source ids (``triple[0]`` is the first triple, ``element[7]`` the element with
id 7).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InputError
from ..model import (
    BetweennessInstance,
    Edge,
    Graph,
    LeafTree,
    PtbeInstance,
    SunflowerSefeInstance,
    edge,
    is_biconnected,
    is_caterpillar,
    is_pseudo_tree,
    is_tree,
)
from .base import Namer, ReductionOutput, require

GREEK = ("alpha", "beta", "gamma")


@dataclass
class _Frame:
    """Mutable state shared by the star-and-cycle constructions."""

    nm: Namer
    n: int
    gadgets: list[tuple[int, tuple[int, int, int]]]
    shared: set[Edge] = field(default_factory=set)
    pages: tuple[set[Edge], set[Edge], set[Edge]] = field(default_factory=lambda: (set(), set(), set()))
    u: dict[int, int] = field(default_factory=dict)
    v: dict[int, int] = field(default_factory=dict)
    w: dict[int, int] = field(default_factory=dict)
    x: dict[tuple[int, int], int] = field(default_factory=dict)
    y: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.gadgets)

    def succ(self, i: int) -> int:
        """``i + 1`` modulo ``m`` on the 1-based gadget indices."""
        return i % self.m + 1

    def add(self, page: int, a: int, b: int) -> None:
        self.pages[page].add(edge(a, b))

    def link(self, a: int, b: int) -> None:
        self.shared.add(edge(a, b))

    def cut(self, a: int, b: int) -> None:
        self.shared.remove(edge(a, b))


def _gadgets(b: BetweennessInstance, pad: bool) -> tuple[int, list[tuple[int, tuple[int, int, int]]]]:
    if b.n < 3:
        raise InputError(f"betweenness reductions need at least 3 elements, got {b.n}")
    if b.m < 1:
        raise InputError("betweenness reductions need at least one triple")
    index = {e: j + 1 for j, e in enumerate(sorted(b.elements))}
    out = [(t, (index[a], index[c], index[d])) for t, (a, c, d) in enumerate(b.triples)]
    if pad and len(out) == 1:
        # a single triple makes ``i + 1 mod m`` collapse onto ``i``; repeating
        # the triple gives an equivalent instance without that degeneracy
        out = out * 2
    return b.n, out


def _element_key(b: BetweennessInstance, j: int) -> str:
    return f"element[{sorted(b.elements)[j - 1]}]"


def _cycle_and_stars(b: BetweennessInstance) -> _Frame:
    """Cycle ``u1 v1 ... um vm wm ... w1`` with stars of ``x`` at each ``u`` and ``y`` at each ``v``."""
    n, gadgets = _gadgets(b, pad=True)
    f = _Frame(Namer(), n, gadgets)
    nm = f.nm
    for i, (t, _) in enumerate(gadgets, start=1):
        key = f"triple[{t}]"
        f.u[i] = nm.new(f"u[{i}]", key)
        f.v[i] = nm.new(f"v[{i}]", key)
        f.w[i] = nm.new(f"w[{i}]", key)
        for j in range(1, n + 1):
            f.x[i, j] = nm.new(f"S[{i}].x[{j}]", key, _element_key(b, j))
            f.y[i, j] = nm.new(f"T[{i}].y[{j}]", key, _element_key(b, j))
            f.link(f.u[i], f.x[i, j])
            f.link(f.v[i], f.y[i, j])
    m = f.m
    path = [p for i in range(1, m + 1) for p in (f.u[i], f.v[i])] + [f.w[i] for i in range(m, 0, -1)]
    for a, c in zip(path, path[1:] + path[:1]):
        f.link(a, c)
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            f.add(0, f.y[i, j], f.x[f.succ(i), j])
            f.add(1, f.x[i, j], f.y[i, j])
    return f


def _sunflower(f: _Frame, extra_pages: list[set[Edge]] | None = None) -> SunflowerSefeInstance:
    vertices = range(f.nm.count)
    pages = [frozenset(p) for p in f.pages] + [frozenset(p) for p in (extra_pages or [])]
    return SunflowerSefeInstance(Graph(frozenset(vertices), frozenset(f.shared)), tuple(pages))


def betweenness_to_sunflower_pseudotree(b: BetweennessInstance) -> ReductionOutput[SunflowerSefeInstance]:
    """Three graphs whose common part is a spanning pseudo-tree; the first two are biconnected."""
    f = _cycle_and_stars(b)
    for i, (_, (al, be, ga)) in enumerate(f.gadgets, start=1):
        for j in (al, be, ga):
            f.add(2, f.w[i], f.x[i, j])
        f.add(2, f.x[i, al], f.x[i, be])
        f.add(2, f.x[i, be], f.x[i, ga])
    inst = _sunflower(f)
    require(is_pseudo_tree(inst.shared), "shared graph is a spanning pseudo-tree")
    require(is_biconnected(inst.graph(0)), "graph 1 is biconnected")
    require(is_biconnected(inst.graph(1)), "graph 2 is biconnected")
    return f.nm.output(b, inst, {"m": f.m, "n": f.n})


# augmentation between the two 3-leaf stars that replace the removed cycle
# edge; with the leaves read p1 p2 p3 <rest> q1 q2 q3 around the tree the
# three edge sets are crossing-free, pairwise disjoint, each contains an edge
# between the stars, and each keeps its graph biconnected
_STAR_PAIR = (
    (("P.1", "Q.3"), ("P.2", "Q.2"), ("P.3", "Q.1")),
    (("P.1", "P.2"), ("P.2", "Q.3"), ("P.3", "Q.2"), ("Q.1", "Q.2")),
    (("P.1", "Q.2"), ("P.2", "P.3"), ("P.2", "Q.1"), ("Q.2", "Q.3")),
)


def betweenness_to_sunflower_tree_biconnected(
    b: BetweennessInstance, k: int = 3
) -> ReductionOutput[SunflowerSefeInstance]:
    """``k`` biconnected graphs whose common part is a spanning tree."""
    if k < 3:
        raise InputError(f"the construction needs k >= 3, got {k}")
    f = _cycle_and_stars(b)
    nm = f.nm
    m = f.m
    for i, (t, (al, be, ga)) in enumerate(f.gadgets, start=1):
        key = f"triple[{t}]"
        nxt = f.w[i + 1] if i < m else f.v[m]
        s, tt, c = nm.new(f"s[{i}]", key), nm.new(f"t[{i}]", key), nm.new(f"C[{i}]", key)
        a_, b_, g_ = (nm.new(f"C[{i}].{g}", key) for g in GREEK)
        f.cut(f.w[i], nxt)
        for p, q in ((f.w[i], s), (s, tt), (tt, nxt), (f.w[i], c), (c, a_), (c, b_), (c, g_)):
            f.link(p, q)
        for p, q in ((f.w[i], a_), (a_, b_), (b_, g_), (g_, f.w[i]), (b_, s)):
            f.add(0, p, q)
        for p in (a_, b_, g_):
            f.add(1, p, tt)
        f.add(2, a_, f.x[i, al])
        f.add(2, b_, f.x[i, be])
        f.add(2, g_, f.x[i, ga])
        for j in range(1, f.n + 1):
            if j not in (al, be, ga):
                f.add(2, f.x[i, j], c)
            f.add(2, f.y[i, j], tt)
    # tree-ification: drop (u1, w1) and hang a 3-leaf star on each end
    f.cut(f.u[1], f.w[1])
    for name, anchor in (("P", f.u[1]), ("Q", f.w[1])):
        c = nm.new(name, "frame")
        f.link(anchor, c)
        for r in (1, 2, 3):
            f.link(c, nm.new(f"{name}.{r}", "frame"))
    for page, pairs in enumerate(_STAR_PAIR):
        for a, c in pairs:
            f.add(page, nm[a], nm[c])
    # further graphs: subdivide the edge at leaf P.1 with a dummy z joined to
    # every other leaf; the edge from P.1 to its old neighbour bypasses z
    extra: list[set[Edge]] = []
    tip = nm["P.1"]
    for g in range(3, k):
        (near,) = [v for e in f.shared if tip in e for v in e if v != tip]
        z = nm.new(f"Z[{g + 1}]", "frame")
        f.cut(near, tip)
        f.link(near, z)
        f.link(z, tip)
        deg: dict[int, int] = {}
        for e in f.shared:
            for v in e:
                deg[v] = deg.get(v, 0) + 1
        extra.append({edge(z, v) for v, d in deg.items() if d == 1 and v != tip} | {edge(tip, near)})
    inst = _sunflower(f, extra)
    require(is_tree(inst.shared), "shared graph is a spanning tree")
    for i in range(inst.k):
        require(is_biconnected(inst.graph(i)), f"graph {i + 1} is biconnected")
    return nm.output(b, inst, {"m": m, "n": f.n, "k": k})


def betweenness_to_ptbe3_caterpillar(b: BetweennessInstance) -> ReductionOutput[PtbeInstance]:
    """Three pages over a caterpillar; the first two page graphs are biconnected.

    The hub stars ``P``, ``Psi[m]``, ..., ``Psi[1]``, ``Q`` (leaves ``l``,
    ``m``, ``r`` each) form a cyclic chain.  Page 1 fans from ``r`` of every
    hub to all leaves of the next hub, page 2 fans from ``l`` of every hub to
    ``l`` and ``m`` of the previous one and closes each hub with ``m``-``r``.
    The leaves of ``Phi[i]`` sit between ``Psi[i]`` and the next hub and are
    fanned into by both of them.
    """
    f = _cycle_and_stars(b)
    nm = f.nm
    m = f.m
    phi: dict[int, list[int]] = {}
    hub: dict[str, tuple[int, int, int]] = {}

    def star(name: str, anchor: int, source: str, own_center: bool = True) -> tuple[int, int, int]:
        c = anchor
        if own_center:
            c = nm.new(name, source)
            f.link(anchor, c)
        leaves = tuple(nm.new(f"{name}.{s}", source) for s in "lmr")
        for leaf in leaves:
            f.link(c, leaf)
        return leaves  # type: ignore[return-value]

    for i, (t, (al, be, ga)) in enumerate(f.gadgets, start=1):
        key = f"triple[{t}]"
        phi[i] = []
        for g, j in zip(GREEK, (al, be, ga)):
            leaf = nm.new(f"Phi[{i}].{g}", key)
            f.link(f.w[i], leaf)
            f.add(2, leaf, f.x[i, j])
            phi[i].append(leaf)
        f.add(2, f.x[i, al], f.x[i, be])
        f.add(2, f.x[i, be], f.x[i, ga])
        nxt = f.w[i + 1] if i < m else f.v[m]
        d = nm.new(f"d[{i}]", key)
        f.cut(f.w[i], nxt)
        f.link(f.w[i], d)
        f.link(d, nxt)
        hub[f"Psi[{i}]"] = star(f"Psi[{i}]", d, key, own_center=False)
    f.cut(f.u[1], f.w[1])
    hub["P"] = star("P", f.u[1], "frame")
    hub["Q"] = star("Q", f.w[1], "frame")
    chain = ["P"] + [f"Psi[{i}]" for i in range(m, 0, -1)] + ["Q"]
    for pos, name in enumerate(chain):
        l_, m_, r_ = hub[name]
        nl, nm_, nr = hub[chain[(pos + 1) % len(chain)]]
        for leaf in (nl, nm_, nr):
            f.add(0, r_, leaf)
        f.add(1, nl, l_)
        f.add(1, nl, m_)
        f.add(1, m_, r_)
    for i in range(1, m + 1):
        after = hub[f"Psi[{i - 1}]" if i > 1 else "Q"]
        for leaf in phi[i]:
            f.add(0, hub[f"Psi[{i}]"][2], leaf)
            f.add(1, after[0], leaf)
    f.add(2, hub["P"][1], hub["Q"][1])

    tree = LeafTree(Graph(frozenset(range(nm.count)), frozenset(f.shared)))
    inst = PtbeInstance(tree, tuple(frozenset(p) for p in f.pages))
    require(is_caterpillar(tree.graph), "tree is a caterpillar")
    for i in (0, 1):
        require(is_biconnected(tree.graph.with_edges(inst.pages[i])), f"page graph {i + 1} is biconnected")
    return nm.output(b, inst, {"m": m, "n": f.n})


def pbe3_leaf_count(n: int, m: int) -> int:
    return 1 + 2 * (m + 1) + m * (n + 1) + (m + 1) * (n + 1)


def betweenness_to_pbe3(b: BetweennessInstance) -> ReductionOutput[PtbeInstance]:
    """Three pages over a star: a partitioned 3-page book embedding instance.

    Around the center ``phi`` the page-3 wheel ``omega, a[0], b[0], ..., a[m],
    b[m]`` fixes the cyclic order; ``Y[i]`` (with ``y*``) sits between
    ``a[i]`` and ``b[i]`` and ``X[i]`` (with ``x*``) between ``b[i-1]`` and
    ``a[i]``.
    """
    n, gadgets = _gadgets(b, pad=False)
    m = len(gadgets)
    nm = Namer()
    leaves: list[int] = []

    def leaf(name: str, *sources: str) -> int:
        v = nm.new(name, *sources)
        leaves.append(v)
        return v

    omega = leaf("omega", "frame")
    a = {i: leaf(f"a[{i}]", "frame") for i in range(m + 1)}
    bb = {i: leaf(f"b[{i}]", "frame") for i in range(m + 1)}
    x: dict[tuple[int, int], int] = {}
    y: dict[tuple[int, int], int] = {}
    xs: dict[int, int] = {}
    ys: dict[int, int] = {}
    for i in range(m + 1):
        key = f"triple[{gadgets[i - 1][0]}]" if i else "frame"
        for j in range(1, n + 1):
            y[i, j] = leaf(f"Y[{i}].y[{j}]", key, _element_key(b, j))
        ys[i] = leaf(f"Y[{i}].y*", key)
        if i:
            for j in range(1, n + 1):
                x[i, j] = leaf(f"X[{i}].x[{j}]", key, _element_key(b, j))
            xs[i] = leaf(f"X[{i}].x*", key)
    center = nm.new("phi", "frame")
    pages: tuple[set[Edge], set[Edge], set[Edge]] = (set(), set(), set())

    def add(page: int, p: int, q: int) -> None:
        pages[page].add(edge(p, q))

    for i in range(1, m + 1):
        add(0, omega, a[i])
        for j in range(1, n + 1):
            add(0, x[i, j], y[i - 1, j])
            add(1, x[i, j], y[i, j])
        add(0, xs[i], ys[i - 1])
        add(1, xs[i], ys[i])
    for i in range(m):
        add(1, omega, bb[i])
    add(2, omega, a[0])
    add(2, omega, bb[m])
    for i in range(m + 1):
        add(2, a[i], bb[i])
        if i < m:
            add(2, bb[i], a[i + 1])
        add(2, a[i], ys[i])
        add(2, bb[i], ys[i])
        for j in range(1, n + 1):
            add(2, ys[i], y[i, j])
    for i, (_, (al, be, ga)) in enumerate(gadgets, start=1):
        for j in (al, be, ga):
            add(2, a[i], x[i, j])
        add(2, x[i, al], x[i, be])
        add(2, x[i, be], x[i, ga])

    tree = LeafTree.star(leaves, center)
    inst = PtbeInstance(tree, tuple(frozenset(p) for p in pages))
    require(len(tree.leaves) == pbe3_leaf_count(n, m), "leaf count matches the construction")
    rim = [omega] + [v for i in range(m + 1) for v in (a[i], bb[i])]
    require(_is_wheel(tree.graph.with_edges(inst.pages[2]), center, rim), "page-3 graph contains the wheel around phi")
    return nm.output(b, inst, {"m": m, "n": n, "rim": tuple(rim)})


def _is_wheel(g: Graph, center: int, rim: list[int]) -> bool:
    """Does ``g`` contain the wheel with ``center`` and rim cycle ``rim`` (in this order)?"""
    spokes = all(g.has_edge(center, v) for v in rim)
    cycle = all(g.has_edge(p, q) for p, q in zip(rim, rim[1:] + rim[:1]))
    return spokes and cycle and len(rim) >= 3
