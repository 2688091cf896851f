"""Exact solver for PTBE-k when all pages but one are T-biconnected.

The leaves are anchored at their smallest element ``r``: every PQ-tree
ranges over the other leaves and describes the orders that may follow ``r``
around a circle.  Pages and tree representation are both invariant under
rotation, so at the end the circular order is cut at a boundary between
the blocks hanging off the tree's root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .certificates import check_ptbe_certificate
from .errors import InputError, UnsupportedInstance
from .model import Graph, LeafTree, PtbeInstance, edge, is_t_biconnected
from .planarity import RotationSystem, apex_order_pqtree, planar_embedding
from .pqtree import (
    LEAF,
    PNODE,
    QNODE,
    PQTree,
    RepNode,
    RepresentativeGraph,
    from_leaf_tree,
    frontier_enumerate,
    intersect,
    reduce_all,
    constraint_sets,
    representative_graph,
)


@dataclass
class SolverTrace:
    """Artifacts of every executed step; ``null_step`` names where NULL appeared."""

    aux_graphs: list[tuple[Graph, int]] = field(default_factory=list)
    page_trees: list[PQTree] = field(default_factory=list)
    page_intersection: PQTree | None = None
    final_tree: PQTree | None = None
    representative: RepresentativeGraph | None = None
    augmented: Graph | None = None
    embedding: RotationSystem | None = None
    order: tuple[int, ...] | None = None
    anchor: int | None = None
    null_step: str | None = None
    planar: bool | None = None

    def summary(self) -> dict[str, object]:
        def size(t: PQTree | None) -> object:
            if t is None:
                return None
            return _log10_count(t)

        return {
            "anchor": self.anchor,
            "page_tree_log10_frontier": [size(t) for t in self.page_trees],
            "intersection_log10_frontier": size(self.page_intersection),
            "final_log10_frontier": size(self.final_tree),
            "representative_vertices": None if self.representative is None else len(self.representative.graph.vertices),
            "augmented_edges": None if self.augmented is None else len(self.augmented.edges),
            "h_planar": self.planar,
            "null_step": self.null_step,
        }


def _log10_count(t: PQTree) -> float | None:
    if t.root is None:
        return None
    total = 0.0
    for node in t.internal_nodes():
        d = len(node[1])
        total += math.lgamma(d + 1) / math.log(10) if node[0] == PNODE else math.log10(2)
    return round(total, 6)


@dataclass
class SolveResult:
    verdict: bool
    order: tuple[int, ...] | None
    trace: SolverTrace

    @property
    def answer(self) -> str:
        return "YES" if self.verdict else "NO"


def build_aux_graph(inst: PtbeInstance, page_index: int) -> tuple[Graph, int]:
    """The page on the leaves plus an apex adjacent to every leaf."""
    if not is_t_biconnected(inst, page_index):
        raise UnsupportedInstance(f"page {page_index} is not T-biconnected")
    apex = max(inst.tree.graph.vertices) + 1
    leaves = sorted(inst.leaves)
    edges = list(inst.pages[page_index]) + [(v, apex) for v in leaves]
    return Graph.build(edges, leaves + [apex]), apex


def rotate_to_rooted(cyclic: Sequence[int], tree: LeafTree) -> tuple[int, ...]:
    """Cut a circularly valid order so that it is represented by the rooted tree."""
    seq = tuple(cyclic)
    if tree.root is None or len(seq) <= 2:
        return seq
    block: dict[int, int] = {}
    sub = tree.subtree_leaves()
    for i, child in enumerate(tree.children[tree.root]):
        for x in sub[child]:
            block[x] = i
    n = len(seq)
    for i in range(n):
        if block[seq[i - 1]] != block[seq[i]]:
            return seq[i:] + seq[:i]
    return seq


def _attach_anchor(t: PQTree, anchor: int) -> PQTree:
    root = t.root
    assert root is not None
    leaf = (LEAF, anchor)
    if root[0] == LEAF:
        new = (PNODE, (leaf, root))
    elif root[0] == PNODE:
        new = (PNODE, root[1] + (leaf,))
    else:
        new = (QNODE, (leaf,) + root[1])
    return PQTree(new, t.labels | {anchor})


def read_cyclic_order(rep: RepresentativeGraph, rot: RotationSystem) -> list[int]:
    """Leaf order along the representative graph as embedded by ``rot``."""
    out: list[int] = []
    # explicit stack of (node, entry vertex); entry is None for the root
    stack: list[tuple[RepNode, int | None]] = [(rep.layout, None)]
    while stack:
        node, entry = stack.pop()
        if node.kind == LEAF:
            out.append(node.label)  # type: ignore[arg-type]
            continue
        if node.kind == PNODE:
            ring = list(rot[node.vertex])
            by_attach = {c.attach: c for c in node.children}
            seq = _after(ring, entry)
            kids = [(by_attach[w], node.vertex) for w in seq if w in by_attach]
        else:
            ring = list(rot[node.vertex])
            by_rim = dict(zip(node.rims, node.children))
            seq = _after(ring, node.top_rim)
            kids = [(by_rim[r], r) for r in seq if r in by_rim]
        stack.extend(reversed(kids))
    return out


def _after(ring: list[int], entry: int | None) -> list[int]:
    if entry is None:
        return ring
    i = ring.index(entry)
    return ring[i + 1 :] + ring[:i]


def solve(inst: PtbeInstance, free_page: int) -> SolveResult:
    """Decide the instance when every page other than ``free_page`` is T-biconnected."""
    if not 0 <= free_page < inst.k:
        raise InputError(f"free page {free_page} out of range")
    for i in range(inst.k):
        if i != free_page and not is_t_biconnected(inst, i):
            raise UnsupportedInstance(f"page {i} is not T-biconnected")
    trace = SolverTrace()
    leaves = sorted(inst.leaves)
    if len(leaves) <= 3:
        # three points on a spine never interleave
        order = frontier_enumerate(from_leaf_tree(inst.tree), cap=1 << 20)[0]
        trace.order = order
        return SolveResult(True, order, trace)

    anchor = leaves[0]
    trace.anchor = anchor
    current: PQTree | None = None
    for i in range(inst.k):
        if i == free_page:
            continue
        h, apex = build_aux_graph(inst, i)
        trace.aux_graphs.append((h, apex))
        t_i = apex_order_pqtree(h, apex, anchor)
        trace.page_trees.append(t_i)
        if t_i.is_null:
            trace.null_step = "step2"
            return SolveResult(False, None, trace)
        current = t_i if current is None else intersect(current, t_i)
        if current.is_null:
            trace.null_step = "step3"
            trace.page_intersection = current
            return SolveResult(False, None, trace)
    trace.page_intersection = current
    tree_pq = from_leaf_tree(inst.tree, anchor=anchor)
    final = tree_pq if current is None else reduce_all(current, constraint_sets(tree_pq))
    trace.final_tree = final
    if final.is_null:
        trace.null_step = "step4"
        return SolveResult(False, None, trace)

    full = _attach_anchor(final, anchor)
    rep = representative_graph(full)
    trace.representative = rep
    edges = list(rep.graph.edges)
    next_vertex = len(rep.graph.vertices)
    for a, b in sorted(inst.pages[free_page]):
        u, v = rep.leaf_vertex[a], rep.leaf_vertex[b]
        if edge(u, v) in rep.graph.edges:
            # keep the graph simple: subdivide once
            edges.extend([edge(u, next_vertex), edge(next_vertex, v)])
            next_vertex += 1
        else:
            edges.append(edge(u, v))
    h = Graph.build(edges, range(next_vertex))
    trace.augmented = h
    rot = planar_embedding(h)
    trace.planar = rot is not None
    if rot is None:
        return SolveResult(False, None, trace)
    trace.embedding = rot
    cyclic = read_cyclic_order(rep, rot)
    order = rotate_to_rooted(cyclic, inst.tree)
    check = check_ptbe_certificate(inst, order)
    if not check.ok:
        raise AssertionError(f"extracted order failed verification: {check.reason} {dict(check.detail)}")
    trace.order = order
    return SolveResult(True, order, trace)


def supported_free_pages(inst: PtbeInstance) -> list[int]:
    """Pages that can play the role of the free page."""
    bad = [i for i in range(inst.k) if not is_t_biconnected(inst, i)]
    if len(bad) > 1:
        return []
    if len(bad) == 1:
        return bad
    return list(range(inst.k))


def solve_any(inst: PtbeInstance) -> SolveResult:
    """Run :func:`solve` with the first admissible free page."""
    pages = supported_free_pages(inst)
    if not pages:
        raise UnsupportedInstance("more than one page is not T-biconnected")
    return solve(inst, pages[-1] if len(pages) == 1 else inst.k - 1)


# ---------------------------------------------------------------------------
# backtracking search


@dataclass
class BacktrackResult:
    status: str  # "YES", "NO" or "BUDGET"
    order: tuple[int, ...] | None
    nodes: int


def backtracking_solve(inst: PtbeInstance, node_budget: int = 10**7) -> BacktrackResult:
    """Exact search by inserting leaves into a growing circular order.

    A partial circular order is kept only if every tree split is circularly
    consecutive among the placed leaves and no two placed edges of one page
    interleave.  Each tested insertion counts as one node.
    """
    leaves = sorted(inst.leaves)
    n = len(leaves)
    if node_budget <= 0 and n > 0:
        return BacktrackResult("BUDGET", None, 0)
    idx = {x: i for i, x in enumerate(leaves)}
    tree = inst.tree
    # splits from edges between two internal vertices, as bitmasks over leaf indices
    sub = LeafTree(tree.graph, tree.root).subtree_leaves() if tree.root is not None else {}
    splits: list[int] = []
    for v, par in tree.parent.items():
        if par is None or v in tree.leaves:
            continue
        mask = 0
        for x in sub[v]:
            mask |= 1 << idx[x]
        splits.append(mask)
    k = inst.k
    nbrs: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(k)]
    for p, page in enumerate(inst.pages):
        for a, b in page:
            nbrs[p][idx[a]].append(idx[b])
            nbrs[p][idx[b]].append(idx[a])
    degree = [sum(len(nbrs[p][v]) for p in range(k)) for v in range(n)]

    seq: list[int] = []
    placed = [False] * n
    trans = [0] * len(splits)
    placed_edges: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    nodes = 0
    result: list[int] | None = None

    def choose() -> int:
        best, key = -1, None
        for v in range(n):
            if placed[v]:
                continue
            links = sum(1 for p in range(k) for u in nbrs[p][v] if placed[u])
            cand = (links, degree[v], -v)
            if key is None or cand > key:
                best, key = v, cand
        return best

    def crosses(pos: dict[int, int], a: int, b: int, edges: list[tuple[int, int]]) -> bool:
        pa, pb = pos[a], pos[b]
        if pa > pb:
            pa, pb = pb, pa
        for x, y in edges:
            if x == a or x == b or y == a or y == b:
                continue
            inside_x = pa < pos[x] < pb
            inside_y = pa < pos[y] < pb
            if inside_x != inside_y:
                return True
        return False

    def search(depth: int) -> bool:
        nonlocal nodes, result
        if depth == n:
            result = list(seq)
            return True
        v = choose()
        m = len(seq)
        if m == 0:
            gaps = [0]
        elif m <= 2:
            gaps = [m]  # mirror symmetry: the third leaf has one distinct slot
        else:
            gaps = list(range(1, m + 1))
        bit_v = 1 << v
        for g in gaps:
            nodes += 1
            if nodes > node_budget:
                raise _Budget()
            if m:
                a, b = seq[g - 1], seq[g % m]
                bit_a, bit_b = 1 << a, 1 << b
                ok = True
                deltas = []
                for s_i, mask in enumerate(splits):
                    in_a, in_b, in_v = bool(mask & bit_a), bool(mask & bit_b), bool(mask & bit_v)
                    delta = (in_a != in_v) + (in_v != in_b) - (in_a != in_b)
                    if trans[s_i] + delta > 2:
                        ok = False
                        break
                    deltas.append(delta)
                if not ok:
                    continue
            else:
                deltas = [0] * len(splits)
            seq.insert(g, v)
            pos = {x: i for i, x in enumerate(seq)}
            new_edges: list[list[tuple[int, int]]] = [[] for _ in range(k)]
            good = True
            for p in range(k):
                for u in nbrs[p][v]:
                    if placed[u]:
                        if crosses(pos, v, u, placed_edges[p]):
                            good = False
                            break
                        new_edges[p].append((v, u))
                if not good:
                    break
            if good:
                placed[v] = True
                for s_i, d in enumerate(deltas):
                    trans[s_i] += d
                for p in range(k):
                    placed_edges[p].extend(new_edges[p])
                if search(depth + 1):
                    return True
                for p in range(k):
                    if new_edges[p]:
                        del placed_edges[p][-len(new_edges[p]) :]
                for s_i, d in enumerate(deltas):
                    trans[s_i] -= d
                placed[v] = False
            seq.pop(g)
        return False

    try:
        found = search(0)
    except _Budget:
        return BacktrackResult("BUDGET", None, nodes)
    if not found:
        return BacktrackResult("NO", None, nodes)
    assert result is not None
    order = rotate_to_rooted([leaves[i] for i in result], tree)
    check = check_ptbe_certificate(inst, order)
    if not check.ok:
        raise AssertionError(f"backtracking produced an invalid order: {check.reason}")
    return BacktrackResult("YES", order, nodes)


class _Budget(Exception):
    pass
