"""Reductions between book-embedding variants, with order translators."""

from __future__ import annotations

from typing import Sequence

from ..errors import InputError
from ..model import (
    Graph,
    LeafTree,
    PtbeInstance,
    edge,
    is_biconnected,
    is_represented_by,
    is_series_parallel,
)
from ..solver import rotate_to_rooted
from .base import Namer, ReductionOutput, require


def ptbe_to_pbe(inst: PtbeInstance) -> ReductionOutput[PtbeInstance]:
    """Every tree vertex becomes a spine vertex; the tree edges form one extra page.

    The target tree is a star, so the target is an unconstrained partitioned
    book embedding instance with ``k + 1`` pages.  Vertex ``v`` of the source
    tree is named ``T[v]``.
    """
    tree = inst.tree
    nm = Namer()
    to_target = {v: nm.new(f"T[{v}]", f"vertex[{v}]") for v in sorted(tree.graph.vertices)}
    center = nm.new("center", "frame")
    pages = [frozenset(edge(to_target[a], to_target[b]) for a, b in page) for page in inst.pages]
    pages.append(frozenset(edge(to_target[a], to_target[b]) for a, b in tree.graph.edges))
    star = LeafTree.star(to_target.values(), center)
    target = PtbeInstance(star, tuple(pages))
    require(len(star.internal) == 1, "target tree is a star")
    return nm.output(inst, target, {"to_target": to_target, "center": center})


def lift_order(out: ReductionOutput[PtbeInstance], order: Sequence[int]) -> tuple[int, ...]:
    """Place every inner tree vertex right before the first vertex of its subtree.

    Processing vertices bottom-up this way yields a pre-order in which children
    follow their block positions in ``order``.
    """
    src = out.source
    assert isinstance(src, PtbeInstance)
    tree = src.tree
    if not is_represented_by(order, tree):
        raise InputError("order is not represented by the source tree")
    pos = {x: i for i, x in enumerate(order)}
    sub = tree.subtree_leaves()
    first = {v: min(pos[x] for x in sub[v]) for v in tree.graph.vertices}
    to_target = out.data["to_target"]
    assert isinstance(to_target, dict)
    start = tree.root if tree.root is not None else order[0]
    lifted: list[int] = []
    stack = [start]
    while stack:
        v = stack.pop()
        lifted.append(to_target[v])
        stack.extend(sorted(tree.children[v], key=first.__getitem__, reverse=True))
    return tuple(lifted)


def project_order(out: ReductionOutput[PtbeInstance], order: Sequence[int]) -> tuple[int, ...]:
    """Restrict a target order to the source leaves (rotated to the source root)."""
    src = out.source
    assert isinstance(src, PtbeInstance)
    to_target = out.data["to_target"]
    assert isinstance(to_target, dict)
    back = {t: v for v, t in to_target.items()}
    leaves = src.tree.leaves
    projected = tuple(back[t] for t in order if t in back and back[t] in leaves)
    if is_represented_by(projected, src.tree):
        return projected
    return rotate_to_rooted(projected, src.tree)


def ptbe2_to_sp_biconnected(inst: PtbeInstance) -> ReductionOutput[PtbeInstance]:
    """Two copies of the tree joined at a new root; page 2 matches each leaf with its copy.

    Page 1 carries page 1 on the first copy and page 2 on the second copy.  The
    second page graph is biconnected and series-parallel.  Copies are named
    ``A[v]`` and ``B[v]``; the new root is ``root``.
    """
    if inst.k != 2:
        raise InputError(f"the doubling construction needs exactly 2 pages, got {inst.k}")
    tree = inst.tree
    if tree.root is None:
        raise InputError("the source tree needs an inner vertex")
    nm = Namer()
    verts = sorted(tree.graph.vertices)
    a = {v: nm.new(f"A[{v}]", f"vertex[{v}]") for v in verts}
    b = {v: nm.new(f"B[{v}]", f"vertex[{v}]") for v in verts}
    root = nm.new("root", "frame")
    tree_edges = [edge(a[u], a[v]) for u, v in tree.graph.edges] + [edge(b[u], b[v]) for u, v in tree.graph.edges]
    tree_edges += [edge(root, a[tree.root]), edge(root, b[tree.root])]
    target_tree = LeafTree(Graph(frozenset(range(nm.count)), frozenset(tree_edges)), root)
    page1 = {edge(a[u], a[v]) for u, v in inst.pages[0]} | {edge(b[u], b[v]) for u, v in inst.pages[1]}
    page2 = {edge(a[x], b[x]) for x in tree.leaves}
    target = PtbeInstance(target_tree, (frozenset(page1), frozenset(page2)))
    g2 = target_tree.graph.with_edges(page2)
    require(is_biconnected(g2), "page graph 2 is biconnected")
    require(is_series_parallel(g2), "page graph 2 is series-parallel")
    return nm.output(inst, target, {"a": a, "b": b})


def sp_forward_order(out: ReductionOutput[PtbeInstance], order: Sequence[int]) -> tuple[int, ...]:
    """The first copy in ``order`` followed by the second copy reversed."""
    a, b = out.data["a"], out.data["b"]
    assert isinstance(a, dict) and isinstance(b, dict)
    return tuple(a[x] for x in order) + tuple(b[x] for x in reversed(order))


def sp_backward_order(out: ReductionOutput[PtbeInstance], order: Sequence[int]) -> tuple[int, ...]:
    """Shift the first copy to the front, then read it back as a source order."""
    a = out.data["a"]
    assert isinstance(a, dict)
    back = {t: v for v, t in a.items()}
    half = len(order) // 2
    if len(order) != 2 * half:
        raise InputError("target order has odd length")
    block = order[:half] if order[0] in back else order[half:]
    if not all(t in back for t in block):
        raise InputError("the first copy is not contiguous in the target order")
    return tuple(back[t] for t in block)
