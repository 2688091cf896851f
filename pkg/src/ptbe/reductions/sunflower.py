"""Sunflower SEFE with a tree or pseudo-tree as common graph, viewed as a book embedding.

Private edge ends at inner vertices move to fresh leaves.  For a pseudo-tree
one cycle edge ``(a, b)`` leaves the common graph; fresh leaves ``la`` at
``a`` and ``lb`` at ``b`` are added and the edge ``(la, lb)`` joins every
page.  Every page must then route the same leaf pair around the tree, which
is exactly what a common edge forces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import networkx as nx

from ..certificates import SefeCertificate
from ..errors import InputError, UnsupportedInstance
from ..model import Edge, Graph, LeafTree, PtbeInstance, SunflowerSefeInstance, edge, is_pseudo_tree, is_tree
from ..planarity import RotationSystem


@dataclass(frozen=True)
class SunflowerBook:
    """Book-embedding view of a sunflower instance.

    ``attach[f] = (v, page)`` for every fresh leaf ``f`` hung at ``v``;
    ``page`` is ``None`` for the two leaves standing in for ``cut_edge``.
    """

    source: SunflowerSefeInstance
    instance: PtbeInstance
    attach: Mapping[int, tuple[int, int | None]]
    cut_edge: Edge | None


def sunflower_to_ptbe(inst: SunflowerSefeInstance) -> SunflowerBook:
    shared = inst.shared
    edges = set(shared.edges)
    cut: Edge | None = None
    if not is_tree(shared):
        if not is_pseudo_tree(shared):
            raise UnsupportedInstance("the common graph must be a spanning tree or pseudo-tree")
        cycle = nx.find_cycle(shared.to_networkx())
        cut = min(edge(u, v) for u, v in cycle)
        edges.discard(cut)
    nxt = max(shared.vertices) + 1
    attach: dict[int, tuple[int, int | None]] = {}
    stand_in: Edge | None = None
    if cut is not None:
        for end in cut:
            attach[nxt] = (end, None)
            edges.add(edge(end, nxt))
            nxt += 1
        stand_in = (nxt - 2, nxt - 1)
    base = Graph(frozenset(shared.vertices) | frozenset(attach), frozenset(edges))
    leaves = LeafTree(base).leaves
    pages: list[set[Edge]] = []
    for i, private in enumerate(inst.privates):
        page: set[Edge] = set()
        for u, v in sorted(private):
            ends = []
            for x in (u, v):
                if x in leaves:
                    ends.append(x)
                else:
                    attach[nxt] = (x, i)
                    edges.add(edge(x, nxt))
                    ends.append(nxt)
                    nxt += 1
            page.add(edge(*ends))
        if stand_in is not None:
            page.add(stand_in)
        pages.append(page)
    tree = LeafTree(Graph(frozenset(shared.vertices) | frozenset(attach), frozenset(edges)))
    return SunflowerBook(inst, PtbeInstance(tree, tuple(frozenset(p) for p in pages)), attach, cut)


def _leaf_rotation(leaf: int, parent: int, targets: list[int], pos: Mapping[int, int], n: int) -> list[int]:
    # page edges run on one side of the spine: seen from a leaf they appear
    # by decreasing position, starting just before the leaf
    return [parent] + sorted(targets, key=lambda t: (pos[leaf] - pos[t]) % n)


def order_to_sefe_certificate(book: SunflowerBook, order: Sequence[int]) -> SefeCertificate:
    """Rotation systems of all graphs drawn from a valid book-embedding order.

    Inner tree vertices list their parent then their children by block
    position; leaves list their tree edge then their page edges.  Fresh leaves
    are contracted back into the private edge they stand for.
    """
    tree = book.instance.tree
    pos = {x: i for i, x in enumerate(order)}
    if set(pos) != tree.leaves:
        raise InputError("order does not list exactly the leaves of the book instance")
    n = len(order)
    sub = tree.subtree_leaves()
    first = {v: min(pos[x] for x in sub[v]) for v in tree.graph.vertices if sub[v]}
    base: dict[int, list[int]] = {}
    for v in tree.internal:
        par = tree.parent[v]
        kids = sorted(tree.children[v], key=first.__getitem__)
        base[v] = ([par] if par is not None else []) + kids
    attach = book.attach
    originals = book.source.shared.vertices
    rotations = []
    for i, page in enumerate(book.instance.pages):
        partner: dict[int, list[int]] = {}
        for u, v in page:
            partner.setdefault(u, []).append(v)
            partner.setdefault(v, []).append(u)

        def real(x: int) -> int:
            return attach[x][0] if x in attach else x

        rot: dict[int, tuple[int, ...]] = {}
        for v in originals:
            if v in tree.leaves:
                (par,) = tree.graph.neighbors(v)
                ring = _leaf_rotation(v, par, partner.get(v, []), pos, n)
            else:
                ring = base[v]
            out = []
            for w in ring:
                if w in attach:
                    if attach[w][1] not in (i, None):
                        continue
                    if attach[w][0] == v:
                        # fresh leaf hanging at v: it stands for its page edge
                        (other,) = partner[w]
                        out.append(real(other))
                        continue
                out.append(real(w))
            rot[v] = tuple(out)
        rotations.append(RotationSystem(rot))
    return SefeCertificate(tuple(rotations))
