"""Exhaustive reference solvers for small instances.

Each oracle enumerates its search space directly and refuses inputs above an
explicit size guard instead of truncating.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .errors import GuardExceeded, InputError, UnsupportedInstance
from .model import (
    BetweennessInstance,
    Edge,
    Graph,
    LeafTree,
    MaxSefeInstance,
    PstInstance,
    PtbeInstance,
    XorSatInstance,
    crossing_pair,
    edge,
)
from .planarity import RotationSystem, trace_faces


def _guard(value: int, limit: int, what: str) -> None:
    if value > limit:
        raise GuardExceeded(f"{what} is {value}, guard is {limit}")


# ---------------------------------------------------------------------------
# betweenness and book embeddings


def betweenness_brute(inst: BetweennessInstance, guard: int = 10) -> tuple[int, ...] | None:
    """First satisfying order in lexicographic order, or ``None``."""
    _guard(inst.n, guard, "number of elements")
    for order in itertools.permutations(inst.elements):
        if inst.satisfied_by(order):
            return order
    return None


def represented_orders(tree: LeafTree) -> Iterator[tuple[int, ...]]:
    """All orders represented by the rooted tree, generated by direct recursion."""
    leaves = tree.leaves
    if tree.root is None:
        yield from itertools.permutations(sorted(leaves))
        return

    def gen(v: int) -> Iterator[tuple[int, ...]]:
        if v in leaves:
            yield (v,)
            return
        kids = tree.children[v]
        for perm in itertools.permutations(kids):
            for parts in itertools.product(*(list(gen(c)) for c in perm)):
                yield tuple(x for p in parts for x in p)

    yield from gen(tree.root)


def ptbe_brute(inst: PtbeInstance, guard: int = 9) -> tuple[int, ...] | None:
    """First represented order with crossing-free pages, or ``None``."""
    _guard(len(inst.leaves), guard, "number of leaves")
    for order in sorted(represented_orders(inst.tree)):
        pos = {x: i for i, x in enumerate(order)}
        if all(crossing_pair(pos, page) is None for page in inst.pages):
            return order
    return None


# ---------------------------------------------------------------------------
# max 2-xorsat


@dataclass(frozen=True)
class XorSatOptimum:
    min_unsat: int
    assignment: dict[int, bool]


def xorsat_max_brute(inst: XorSatInstance, guard: int = 20) -> XorSatOptimum:
    """Minimum number of unsatisfied clauses; ties go to the lexicographically first assignment."""
    _guard(len(inst.variables), guard, "number of variables")
    best: XorSatOptimum | None = None
    for values in itertools.product((False, True), repeat=len(inst.variables)):
        assignment = dict(zip(inst.variables, values))
        bad = inst.unsatisfied(assignment)
        if best is None or bad < best.min_unsat:
            best = XorSatOptimum(bad, assignment)
            if bad == 0:
                break
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# steiner trees


@dataclass(frozen=True)
class SteinerTree:
    weight: int
    edges: frozenset[Edge]


def _is_steiner_tree(edges: Sequence[Edge], terminals: frozenset[int]) -> bool:
    verts = {v for e in edges for v in e}
    if len(terminals) > 1 and not terminals <= verts:
        return False
    if edges and len(verts) != len(edges) + 1:
        return False
    g = nx.Graph(list(edges))
    return not edges or nx.is_connected(g)


def steiner_brute(inst: PstInstance, edge_guard: int = 12, vertex_guard: int = 8) -> SteinerTree:
    """Minimum-weight tree spanning the terminals.

    Graphs with at most ``edge_guard`` edges are solved by enumerating edge
    subsets; otherwise graphs with at most ``vertex_guard`` vertices are
    solved by enumerating vertex subsets and taking a minimum spanning tree
    of each connected induced subgraph.
    """
    terms = inst.terminals
    if len(terms) <= 1:
        return SteinerTree(0, frozenset())
    edges = sorted(inst.graph.edges)
    best: tuple[int, tuple[Edge, ...]] | None = None
    if len(edges) <= edge_guard:
        for r in range(1, len(inst.graph.vertices)):
            for subset in itertools.combinations(edges, r):
                if _is_steiner_tree(subset, terms):
                    cand = (inst.weight(subset), tuple(sorted(subset)))
                    if best is None or cand < best:
                        best = cand
    else:
        _guard(len(inst.graph.vertices), vertex_guard, "number of vertices")
        others = sorted(inst.graph.vertices - terms)
        for r in range(len(others) + 1):
            for extra in itertools.combinations(others, r):
                keep = terms | set(extra)
                g = nx.Graph()
                g.add_nodes_from(keep)
                for u, v in edges:
                    if u in keep and v in keep:
                        g.add_edge(u, v, weight=inst.weights[(u, v)])
                if not nx.is_connected(g):
                    continue
                tree = nx.minimum_spanning_tree(g)
                chosen = tuple(sorted(edge(u, v) for u, v in tree.edges))
                cand = (inst.weight(chosen), chosen)
                if best is None or cand < best:
                    best = cand
    if best is None:
        raise InputError("terminals are not connected")
    return SteinerTree(best[0], frozenset(best[1]))


def steiner_exact(inst: PstInstance, terminal_guard: int = 14) -> SteinerTree:
    """Dreyfus-Wagner dynamic program over terminal subsets.

    Exponential only in the number of terminals, so it handles the large
    graphs produced by reductions whose inputs are tiny.
    """
    terms = sorted(inst.terminals)
    _guard(len(terms), terminal_guard, "number of terminals")
    if len(terms) <= 1:
        return SteinerTree(0, frozenset())
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in inst.graph.vertices}
    for (u, v), w in inst.weights.items():
        adj[u].append((v, w))
        adj[v].append((u, w))
    inf = math.inf
    t = len(terms)
    full = (1 << t) - 1
    # dp[mask][v]: cheapest tree connecting terminals in mask and v
    dp: list[dict[int, float]] = [dict() for _ in range(full + 1)]
    how: list[dict[int, tuple]] = [dict() for _ in range(full + 1)]
    for i, s in enumerate(terms):
        dp[1 << i][s] = 0
        how[1 << i][s] = ("leaf",)
    for mask in range(1, full + 1):
        cur = dp[mask]
        sub = (mask - 1) & mask
        while sub:
            other = mask ^ sub
            if sub < other:
                da, db = dp[sub], dp[other]
                for v, x in da.items():
                    y = db.get(v)
                    if y is not None and x + y < cur.get(v, inf):
                        cur[v] = x + y
                        how[mask][v] = ("merge", sub, other)
            sub = (sub - 1) & mask
        # grow along shortest paths
        heap = [(d, v) for v, d in cur.items()]
        heapq.heapify(heap)
        while heap:
            d, v = heapq.heappop(heap)
            if d > cur.get(v, inf):
                continue
            for w, c in adj[v]:
                if d + c < cur.get(w, inf):
                    cur[w] = d + c
                    how[mask][w] = ("step", v)
                    heapq.heappush(heap, (d + c, w))
    root = terms[0]
    if root not in dp[full]:
        raise InputError("terminals are not connected")
    chosen: set[Edge] = set()
    stack = [(full, root)]
    while stack:
        mask, v = stack.pop()
        step = how[mask][v]
        if step[0] == "leaf":
            continue
        if step[0] == "merge":
            stack.append((step[1], v))
            stack.append((step[2], v))
        else:
            chosen.add(edge(step[1], v))
            stack.append((mask, step[1]))
    return SteinerTree(int(dp[full][root]), frozenset(chosen))


# ---------------------------------------------------------------------------
# max sefe over independent flips


@dataclass(frozen=True)
class FlipModel:
    """Base embeddings of both graphs plus vertex groups that flip independently.

    Flipping a group reverses the rotation at each of its vertices.
    """

    base: tuple[RotationSystem, RotationSystem]
    groups: tuple[tuple[frozenset[int], ...], tuple[frozenset[int], ...]]

    def realize(self, flips: tuple[Sequence[bool], Sequence[bool]]) -> tuple[RotationSystem, RotationSystem]:
        out = []
        for side in (0, 1):
            flip: set[int] = set()
            for g, on in zip(self.groups[side], flips[side]):
                if on:
                    flip |= g
            out.append(self.base[side].reversed_at(flip))
        return out[0], out[1]


def triangle_orientation(rot: RotationSystem, tri: Sequence[int]) -> bool:
    """``True`` when the ascending cycle ``a -> b -> c`` bounds a face of ``rot``.

    The other orientation must then not be a face; an isolated triangle has
    both and has no defined orientation.
    """
    a, b, c = sorted(tri)
    succ = rot.successor_map()

    def face(x: int, y: int, z: int) -> bool:
        return succ[(y, x)] == z and succ[(z, y)] == x and succ[(x, z)] == y

    fwd, back = face(a, b, c), face(c, b, a)
    if fwd == back:
        raise UnsupportedInstance(f"triangle {(a, b, c)} has no well-defined orientation")
    return fwd


@dataclass(frozen=True)
class FlipOptimum:
    min_violations: int
    flips: tuple[tuple[bool, ...], tuple[bool, ...]]


def maxsefe_flip_brute(inst: MaxSefeInstance, model: FlipModel, guard: int = 22) -> FlipOptimum:
    """Fewest shared triangles oriented differently, over all flip assignments."""
    shared = inst.shared
    triangles = []
    for comp in shared.components():
        sub = shared.subgraph(comp)
        if len(comp) == 1:
            continue  # vertices of only one graph carry no shared edge
        if len(comp) != 3 or len(sub.edges) != 3:
            raise UnsupportedInstance("every shared component must be a 3-cycle")
        triangles.append(tuple(sorted(comp)))
    n1, n2 = len(model.groups[0]), len(model.groups[1])
    _guard(n1 + n2, guard, "number of flip groups")
    best: FlipOptimum | None = None
    for bits in itertools.product((False, True), repeat=n1 + n2):
        flips = (bits[:n1], bits[n1:])
        r1, r2 = model.realize(flips)
        bad = sum(triangle_orientation(r1, t) != triangle_orientation(r2, t) for t in triangles)
        if best is None or bad < best.min_violations:
            best = FlipOptimum(bad, (tuple(flips[0]), tuple(flips[1])))
            if bad == 0:
                break
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# planarity and structure by definition


def rotation_systems(g: Graph) -> Iterator[RotationSystem]:
    """Every rotation system of ``g``; the first neighbour of each vertex stays first."""
    verts = sorted(g.vertices)
    choices = []
    for v in verts:
        ns = sorted(g.neighbors(v))
        if len(ns) <= 2:
            choices.append([tuple(ns)])
        else:
            choices.append([(ns[0],) + p for p in itertools.permutations(ns[1:])])
    for combo in itertools.product(*choices):
        yield RotationSystem(dict(zip(verts, combo)))


def planar_brute(g: Graph, guard: int = 2_000_000) -> RotationSystem | None:
    """Search all rotation systems for one of genus zero."""
    if len(g.vertices) >= 3 and len(g.edges) > 3 * len(g.vertices) - 6:
        return None
    total = 1
    for v in g.vertices:
        total *= math.factorial(max(g.degree(v) - 1, 0))
    _guard(total, guard, "number of rotation systems")
    for rot in rotation_systems(g):
        if trace_faces(g, rot).genus == 0:
            return rot
    return None


def apex_rotations_brute(h: Graph, apex: int, guard: int = 8) -> set[tuple[int, ...]]:
    """Cyclic rotations at ``apex`` realised by planar embeddings of ``h``.

    Each candidate order is forced by replacing the apex with a wheel whose
    rim follows the order; the wheel is rigid, so the result is planar iff the
    order (or its mirror) is realisable.  Orders are normalised to start at
    the smallest neighbour.
    """
    nbrs = sorted(h.neighbors(apex))
    _guard(len(nbrs), guard, "apex degree")
    base = [e for e in h.edges if apex not in e]
    top = max(h.vertices) + 1
    out: set[tuple[int, ...]] = set()
    first = nbrs[0]
    for rest in itertools.permutations(nbrs[1:]):
        order = (first,) + rest
        if len(order) <= 2:
            out.add(order)
            continue
        rim = [top + 1 + i for i in range(len(order))]
        edges = list(base)
        for i, x in enumerate(order):
            edges.append((rim[i], x))
            edges.append((rim[i], rim[(i + 1) % len(rim)]))
            edges.append((rim[i], top))
        ok, _ = nx.check_planarity(nx.Graph(edges))
        if ok:
            out.add(order)
    return out


def articulation_brute(g: Graph) -> set[int]:
    """Vertices whose removal increases the number of components."""
    base = len(g.components())
    out = set()
    for v in g.vertices:
        rest = g.subgraph(g.vertices - {v})
        if len(rest.components()) > base:
            out.add(v)
    return out


def has_k4_minor_brute(g: Graph, guard: int = 9) -> bool:
    """Try every assignment of vertices to four branch sets (or none)."""
    verts = sorted(g.vertices)
    _guard(len(verts), guard, "number of vertices")
    if len(verts) < 4 or len(g.edges) < 6:
        return False
    adj = g.adjacency
    for labels in itertools.product(range(5), repeat=len(verts)):
        if labels[0] not in (0, 4):
            continue  # symmetry: the first vertex is in set 0 or unused
        sets: list[list[int]] = [[], [], [], []]
        for v, lab in zip(verts, labels):
            if lab < 4:
                sets[lab].append(v)
        if any(not s for s in sets):
            continue
        if not all(_connected_set(s, adj) for s in sets):
            continue
        owner = {v: lab for v, lab in zip(verts, labels) if lab < 4}
        touching = set()
        for u, v in g.edges:
            if u in owner and v in owner and owner[u] != owner[v]:
                touching.add(frozenset((owner[u], owner[v])))
        if len(touching) == 6:
            return True
    return False


def _connected_set(s: Iterable[int], adj: dict[int, tuple[int, ...]]) -> bool:
    s = set(s)
    start = next(iter(s))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y in s and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == s
