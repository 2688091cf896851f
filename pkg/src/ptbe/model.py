"""Graphs, leaf trees, problem instances and the predicates defined on them.

Vertex ids are dense non-negative integers.  Edges are stored as sorted
pairs so that ``(u, v)`` and ``(v, u)`` denote the same edge.  All values are
immutable after construction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import InputError, InvariantViolation, UnsupportedInstance

Edge = tuple[int, int]
LinearOrder = tuple[int, ...]


def edge(u: int, v: int) -> Edge:
    """Return the canonical (sorted) form of the edge ``{u, v}``."""
    return (u, v) if u <= v else (v, u)


def _edge_set(edges: Iterable[Sequence[int]], *, what: str) -> frozenset[Edge]:
    out: set[Edge] = set()
    for pair in edges:
        u, v = pair
        if u == v:
            raise InvariantViolation(f"self-loop at vertex {u} in {what}")
        e = edge(u, v)
        if e in out:
            raise InvariantViolation(f"duplicate edge {e} in {what}")
        out.add(e)
    return frozenset(out)


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph."""

    vertices: frozenset[int]
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if u == v:
                raise InvariantViolation(f"self-loop at vertex {u}")
            if u > v:
                raise InvariantViolation(f"edge {(u, v)} is not in canonical form")
            if u not in self.vertices or v not in self.vertices:
                raise InvariantViolation(f"edge {(u, v)} uses an undeclared vertex")

    @classmethod
    def build(cls, edges: Iterable[Sequence[int]], vertices: Iterable[int] = ()) -> Graph:
        """Build a graph, rejecting duplicates and self-loops."""
        es = _edge_set(edges, what="graph")
        vs = set(vertices)
        for u, v in es:
            vs.add(u)
            vs.add(v)
        return cls(frozenset(vs), es)

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def subgraph(self, vertices: Iterable[int]) -> Graph:
        keep = frozenset(vertices)
        return Graph(keep, frozenset(e for e in self.edges if e[0] in keep and e[1] in keep))

    def with_edges(self, extra: Iterable[Sequence[int]]) -> Graph:
        return Graph.build(list(self.edges) + [tuple(e) for e in extra], self.vertices)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(sorted(self.vertices))
        g.add_edges_from(sorted(self.edges))
        return g

    def components(self) -> list[frozenset[int]]:
        """Connected components, each listed once, ordered by smallest vertex."""
        seen: set[int] = set()
        out: list[frozenset[int]] = []
        for s in sorted(self.vertices):
            if s in seen:
                continue
            comp = {s}
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adjacency[x]:
                    if y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            out.append(frozenset(comp))
        return out


@dataclass(frozen=True)
class LeafTree:
    """A tree whose leaves are the ground elements.

    The tree carries a designated ``root`` (an internal vertex).  An order of
    the leaves is *represented* by the tree when, for every vertex, the leaves
    of the subtree rooted at it are consecutive.  The existence of a valid
    book embedding does not depend on which internal vertex is the root,
    because pages are invariant under rotating the order.
    """

    graph: Graph
    root: int | None = None

    def __post_init__(self) -> None:
        g = self.graph
        n = len(g.vertices)
        if n == 0:
            raise InvariantViolation("a leaf tree needs at least one vertex")
        if len(g.edges) != n - 1 or len(g.components()) != 1:
            raise InvariantViolation("leaf tree graph is not a tree")
        internal = [v for v in g.vertices if g.degree(v) > 1]
        if self.root is None:
            if internal:
                object.__setattr__(self, "root", min(internal))
        elif self.root not in g.vertices or g.degree(self.root) <= 1:
            raise InvariantViolation(f"root {self.root} is not an internal vertex")

    @classmethod
    def build(cls, edges: Iterable[Sequence[int]], vertices: Iterable[int] = (), root: int | None = None) -> LeafTree:
        return cls(Graph.build(edges, vertices), root)

    @classmethod
    def star(cls, leaves: Iterable[int], center: int | None = None) -> LeafTree:
        ls = sorted(leaves)
        if center is None:
            center = max(ls) + 1 if ls else 0
        if len(ls) == 1:
            return cls(Graph(frozenset(ls), frozenset()))
        return cls.build([(center, x) for x in ls], root=center if len(ls) > 1 else None)

    @cached_property
    def leaves(self) -> frozenset[int]:
        g = self.graph
        if len(g.vertices) <= 2:
            return g.vertices
        return frozenset(v for v in g.vertices if g.degree(v) == 1)

    @cached_property
    def internal(self) -> frozenset[int]:
        return self.graph.vertices - self.leaves

    @cached_property
    def children(self) -> dict[int, tuple[int, ...]]:
        """Children lists of the tree rooted at :attr:`root` (ascending ids)."""
        start = self.root if self.root is not None else min(self.graph.vertices)
        out: dict[int, tuple[int, ...]] = {}
        parent = {start: -1}
        stack = [start]
        while stack:
            v = stack.pop()
            kids = tuple(w for w in self.graph.neighbors(v) if w != parent[v])
            out[v] = kids
            for w in kids:
                parent[w] = v
                stack.append(w)
        return out

    @cached_property
    def parent(self) -> dict[int, int | None]:
        out: dict[int, int | None] = {v: None for v in self.graph.vertices}
        for v, kids in self.children.items():
            for w in kids:
                out[w] = v
        return out

    def postorder(self) -> list[int]:
        start = self.root if self.root is not None else min(self.graph.vertices)
        order: list[int] = []
        stack = [(start, False)]
        while stack:
            v, done = stack.pop()
            if done:
                order.append(v)
                continue
            stack.append((v, True))
            for w in reversed(self.children[v]):
                stack.append((w, False))
        return order

    def subtree_leaves(self) -> dict[int, frozenset[int]]:
        out: dict[int, frozenset[int]] = {}
        for v in self.postorder():
            kids = self.children[v]
            if not kids:
                out[v] = frozenset([v]) if v in self.leaves else frozenset()
            else:
                acc: set[int] = set()
                for w in kids:
                    acc |= out[w]
                out[v] = frozenset(acc)
        return out

    def reroot(self, root: int) -> LeafTree:
        return LeafTree(self.graph, root)


def _page_set(tree_leaves: frozenset[int], page: Iterable[Sequence[int]], index: int) -> frozenset[Edge]:
    es = _edge_set(page, what=f"page {index}")
    for u, v in es:
        if u not in tree_leaves or v not in tree_leaves:
            raise InvariantViolation(f"page {index} edge {(u, v)} does not join two leaves")
    return es


@dataclass(frozen=True)
class PtbeInstance:
    """A leaf tree plus ``k`` pages of edges between its leaves."""

    tree: LeafTree
    pages: tuple[frozenset[Edge], ...]

    def __post_init__(self) -> None:
        if len(self.pages) < 1:
            raise InvariantViolation("a PTBE instance needs at least one page")
        checked = tuple(_page_set(self.tree.leaves, p, i) for i, p in enumerate(self.pages))
        object.__setattr__(self, "pages", checked)

    @classmethod
    def build(cls, tree: LeafTree, pages: Iterable[Iterable[Sequence[int]]]) -> PtbeInstance:
        return cls(tree, tuple(_edge_set(p, what="page") for p in pages))

    @property
    def k(self) -> int:
        return len(self.pages)

    @property
    def leaves(self) -> frozenset[int]:
        return self.tree.leaves


@dataclass(frozen=True)
class SunflowerSefeInstance:
    """``k`` graphs sharing the same intersection graph ``shared``."""

    shared: Graph
    privates: tuple[frozenset[Edge], ...]

    def __post_init__(self) -> None:
        seen: set[Edge] = set()
        checked = []
        for i, p in enumerate(self.privates):
            es = _edge_set(p, what=f"private set {i}")
            for e in es:
                if e[0] not in self.shared.vertices or e[1] not in self.shared.vertices:
                    raise InvariantViolation(f"private edge {e} uses an undeclared vertex")
                if e in self.shared.edges:
                    raise InvariantViolation(f"private edge {e} is also shared")
                if e in seen:
                    raise InvariantViolation(f"edge {e} is private to two graphs")
                seen.add(e)
            checked.append(es)
        object.__setattr__(self, "privates", tuple(checked))

    @property
    def k(self) -> int:
        return len(self.privates)

    def graph(self, i: int) -> Graph:
        return Graph(self.shared.vertices, self.shared.edges | self.privates[i])


@dataclass(frozen=True)
class BetweennessInstance:
    """Ground set ``elements`` and ordered triples ``<a, b, c>`` (b must lie between)."""

    elements: tuple[int, ...]
    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        elems = tuple(sorted(set(self.elements)))
        if len(elems) != len(self.elements):
            raise InvariantViolation("duplicate element")
        ok = set(elems)
        for t in self.triples:
            if len(t) != 3 or len(set(t)) != 3:
                raise InvariantViolation(f"triple {t} does not have three distinct members")
            if not set(t) <= ok:
                raise InvariantViolation(f"triple {t} uses an unknown element")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "triples", tuple(tuple(t) for t in self.triples))

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def m(self) -> int:
        return len(self.triples)

    def satisfied_by(self, order: Sequence[int]) -> bool:
        pos = {x: i for i, x in enumerate(order)}
        for a, b, c in self.triples:
            if not (pos[a] < pos[b] < pos[c] or pos[c] < pos[b] < pos[a]):
                return False
        return True


Literal = tuple[int, bool]


@dataclass(frozen=True)
class XorSatInstance:
    """Clauses ``l1 XOR l2``; a literal is ``(variable, positive)``."""

    variables: tuple[int, ...]
    clauses: tuple[tuple[Literal, Literal], ...]
    budget: int = 0

    def __post_init__(self) -> None:
        vs = tuple(sorted(set(self.variables)))
        if len(vs) != len(self.variables):
            raise InvariantViolation("duplicate variable")
        if self.budget < 0:
            raise InvariantViolation("budget must be non-negative")
        clauses = []
        for c in self.clauses:
            (x, px), (y, py) = c
            if x == y:
                raise InvariantViolation(f"clause {c} repeats variable {x}")
            if x not in vs or y not in vs:
                raise InvariantViolation(f"clause {c} uses an unknown variable")
            clauses.append(((int(x), bool(px)), (int(y), bool(py))))
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "clauses", tuple(clauses))

    def unsatisfied(self, assignment: Mapping[int, bool]) -> int:
        bad = 0
        for (x, px), (y, py) in self.clauses:
            if (assignment[x] == px) == (assignment[y] == py):
                bad += 1
        return bad


@dataclass(frozen=True)
class PstInstance:
    """Planar Steiner tree: weighted graph, terminal set and a weight budget."""

    graph: Graph
    weights: Mapping[Edge, int]
    terminals: frozenset[int]
    budget: int

    def __post_init__(self) -> None:
        w = {edge(*e): int(x) for e, x in self.weights.items()}
        if set(w) != set(self.graph.edges):
            raise InvariantViolation("weights must cover exactly the graph's edges")
        if any(x <= 0 for x in w.values()):
            raise InvariantViolation("weights must be positive")
        if not self.terminals <= self.graph.vertices:
            raise InvariantViolation("terminals must be vertices of the graph")
        object.__setattr__(self, "weights", dict(sorted(w.items())))
        object.__setattr__(self, "terminals", frozenset(self.terminals))

    def weight(self, edges: Iterable[Edge]) -> int:
        return sum(self.weights[e] for e in edges)


@dataclass(frozen=True)
class MaxSefeInstance:
    """Two graphs on one vertex set and a bound on differently drawn shared edges."""

    g1: Graph
    g2: Graph
    budget: int = 0

    def __post_init__(self) -> None:
        if self.g1.vertices != self.g2.vertices:
            raise InvariantViolation("both graphs must share the vertex set")
        if self.budget < 0:
            raise InvariantViolation("budget must be non-negative")

    @property
    def shared(self) -> Graph:
        return intersection_graph(self.g1, self.g2)


def intersection_graph(g1: Graph, g2: Graph) -> Graph:
    """Common edges of ``g1`` and ``g2`` over the union vertex set."""
    return Graph(g1.vertices | g2.vertices, g1.edges & g2.edges)


# ---------------------------------------------------------------------------
# order predicates


def _positions(order: Sequence[int]) -> dict[int, int]:
    pos = {x: i for i, x in enumerate(order)}
    if len(pos) != len(order):
        raise InputError("order repeats an element")
    return pos


def is_represented_by(order: Sequence[int], tree: LeafTree) -> bool:
    """True iff the leaves of every rooted subtree of ``tree`` are consecutive."""
    pos = _positions(order)
    if set(pos) != tree.leaves:
        raise InputError("order and tree have different leaf sets")
    return first_split_block(pos, tree) is None


def first_split_block(pos: Mapping[int, int], tree: LeafTree) -> int | None:
    """Return a vertex whose subtree leaves are not consecutive, or ``None``."""
    lo: dict[int, int] = {}
    hi: dict[int, int] = {}
    cnt: dict[int, int] = {}
    for v in tree.postorder():
        kids = tree.children[v]
        if not kids:
            if v in pos:
                lo[v] = hi[v] = pos[v]
                cnt[v] = 1
            else:
                lo[v], hi[v], cnt[v] = len(pos), -1, 0
            continue
        lo[v] = min(lo[w] for w in kids)
        hi[v] = max(hi[w] for w in kids)
        cnt[v] = sum(cnt[w] for w in kids)
        if cnt[v] and hi[v] - lo[v] + 1 != cnt[v]:
            return v
    return None


def crossing_pair(pos: Mapping[int, int], page: Iterable[Edge]) -> tuple[Edge, Edge] | None:
    """Return two page edges whose endpoints interleave in ``pos``, or ``None``."""
    spans = []
    for e in page:
        a, b = pos[e[0]], pos[e[1]]
        if a > b:
            a, b = b, a
        spans.append((a, -b, e))
    spans.sort()
    stack: list[tuple[int, Edge]] = []
    for a, nb, e in spans:
        b = -nb
        while stack and stack[-1][0] <= a:
            stack.pop()
        if stack and stack[-1][0] < b:
            return stack[-1][1], e
        stack.append((b, e))
    return None


def page_alternation_free(order: Sequence[int], page: Iterable[Sequence[int]]) -> bool:
    """True iff no two edges of ``page`` interleave in ``order``."""
    pos = _positions(order)
    es = [edge(*e) for e in page]
    for u, v in es:
        if u not in pos or v not in pos:
            raise InputError(f"page edge {(u, v)} has an endpoint missing from the order")
    return crossing_pair(pos, es) is None


# ---------------------------------------------------------------------------
# structural predicates


@dataclass(frozen=True)
class StructuralFlags:
    connected: bool
    biconnected: bool
    triconnected: bool
    series_parallel: bool
    is_tree: bool
    is_caterpillar: bool
    is_pseudo_tree: bool


def is_connected(g: Graph) -> bool:
    return len(g.vertices) > 0 and len(g.components()) == 1


def is_biconnected(g: Graph) -> bool:
    """Connected, at least two vertices and no cut vertex (``K2`` counts)."""
    if len(g.vertices) < 2 or not is_connected(g):
        return False
    return not any(True for _ in nx.articulation_points(g.to_networkx()))


def is_triconnected(g: Graph) -> bool:
    """At least four vertices and no separating set of size two."""
    if len(g.vertices) < 4 or not is_biconnected(g):
        return False
    nxg = g.to_networkx()
    for v in sorted(g.vertices):
        h = nxg.copy()
        h.remove_node(v)
        if not nx.is_biconnected(h):
            return False
    return True


def is_series_parallel(g: Graph) -> bool:
    """K4-minor freeness by exhaustive series, parallel and pendant reductions."""
    adj = {v: set(g.neighbors(v)) for v in g.vertices}
    queue = deque(v for v in adj if len(adj[v]) <= 2)
    while queue:
        v = queue.popleft()
        if v not in adj or len(adj[v]) > 2:
            continue
        ns = list(adj.pop(v))
        for w in ns:
            adj[w].discard(v)
        if len(ns) == 2:
            a, b = ns
            adj[a].add(b)
            adj[b].add(a)
        for w in ns:
            if len(adj[w]) <= 2:
                queue.append(w)
    return not adj


def is_tree(g: Graph) -> bool:
    return is_connected(g) and len(g.edges) == len(g.vertices) - 1


def is_caterpillar(g: Graph) -> bool:
    if not is_tree(g):
        return False
    spine = g.subgraph(v for v in g.vertices if g.degree(v) > 1)
    if len(spine.vertices) <= 1:
        return True
    return is_connected(spine) and all(spine.degree(v) <= 2 for v in spine.vertices)


def is_pseudo_tree(g: Graph) -> bool:
    return is_connected(g) and len(g.edges) == len(g.vertices)


def structural_predicates(g: Graph) -> StructuralFlags:
    return StructuralFlags(
        connected=is_connected(g),
        biconnected=is_biconnected(g),
        triconnected=is_triconnected(g),
        series_parallel=is_series_parallel(g),
        is_tree=is_tree(g),
        is_caterpillar=is_caterpillar(g),
        is_pseudo_tree=is_pseudo_tree(g),
    )


def is_t_biconnected(inst: PtbeInstance, page_index: int) -> bool:
    """True iff the page alone induces a connected graph on all leaves."""
    if not 0 <= page_index < inst.k:
        raise InputError(f"page index {page_index} out of range")
    leaves = inst.leaves
    if len(leaves) == 1:
        return True
    page_graph = Graph(leaves, inst.pages[page_index])
    return is_connected(page_graph)


# ---------------------------------------------------------------------------
# sunflower SEFE -> PTBE


@dataclass(frozen=True)
class LeafExpansion:
    """Result of :func:`leaf_expand_with_map`: the instance and the fresh leaves."""

    instance: PtbeInstance
    fresh: dict[int, tuple[int, int]] = field(default_factory=dict)


def leaf_expand_with_map(inst: SunflowerSefeInstance) -> LeafExpansion:
    """Reroute every private edge end at an internal tree vertex to a fresh leaf.

    ``fresh`` maps each new leaf to ``(attachment vertex, index of the private set)``.
    """
    shared = inst.shared
    if not is_tree(shared):
        raise UnsupportedInstance("leaf expansion needs a shared graph that is a spanning tree")
    leaves = LeafTree(shared).leaves
    next_id = max(shared.vertices) + 1
    tree_edges = set(shared.edges)
    fresh: dict[int, tuple[int, int]] = {}
    pages: list[set[Edge]] = []
    for i, private in enumerate(inst.privates):
        page: set[Edge] = set()
        for u, v in sorted(private):
            ends = []
            for x in (u, v):
                if x in leaves:
                    ends.append(x)
                else:
                    leaf = next_id
                    next_id += 1
                    tree_edges.add(edge(x, leaf))
                    fresh[leaf] = (x, i)
                    ends.append(leaf)
            page.add(edge(*ends))
        pages.append(page)
    tree = LeafTree(Graph.build(sorted(tree_edges), shared.vertices))
    return LeafExpansion(PtbeInstance(tree, tuple(frozenset(p) for p in pages)), fresh)


def leaf_expand(inst: SunflowerSefeInstance) -> PtbeInstance:
    return leaf_expand_with_map(inst).instance
