"""Rotation systems, face tracing, planarity and admissible orders around an apex."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import InputError, UnsupportedInstance
from .model import Edge, Graph, edge
from .pqtree import LEAF, PNODE, Engine, PQTree, ReductionFailed, _N, null_tree, reroot_at_leaf, universal

Dart = tuple[int, int]


@dataclass(frozen=True)
class RotationSystem:
    """Clockwise cyclic order of the neighbours of every vertex."""

    order: Mapping[int, tuple[int, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", {v: tuple(ns) for v, ns in sorted(self.order.items())})

    @classmethod
    def from_lists(cls, lists: Mapping[int, Sequence[int]]) -> RotationSystem:
        return cls({v: tuple(ns) for v, ns in lists.items()})

    def __getitem__(self, v: int) -> tuple[int, ...]:
        return self.order[v]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.order)

    def edges(self) -> frozenset[Edge]:
        return frozenset(edge(v, w) for v, ns in self.order.items() for w in ns)

    def successor_map(self) -> dict[Dart, int]:
        """``succ[(v, u)]`` is the neighbour after ``u`` in the rotation at ``v``."""
        out: dict[Dart, int] = {}
        for v, ns in self.order.items():
            d = len(ns)
            for i, u in enumerate(ns):
                out[(v, u)] = ns[(i + 1) % d]
        return out

    def reversed(self) -> RotationSystem:
        return RotationSystem({v: tuple(reversed(ns)) for v, ns in self.order.items()})

    def reversed_at(self, vertices: Iterable[int]) -> RotationSystem:
        flip = set(vertices)
        return RotationSystem({v: tuple(reversed(ns)) if v in flip else ns for v, ns in self.order.items()})

    def graph(self) -> Graph:
        return Graph(frozenset(self.order), self.edges())


def check_rotation(g: Graph, rot: RotationSystem) -> None:
    """Raise :class:`InputError` unless ``rot`` covers exactly ``g``."""
    if set(rot.order) != set(g.vertices):
        raise InputError("rotation system and graph have different vertex sets")
    for v, ns in rot.order.items():
        if len(set(ns)) != len(ns) or set(ns) != set(g.neighbors(v)):
            raise InputError(f"rotation at vertex {v} does not list exactly its incident edges")


@dataclass(frozen=True)
class FaceStructure:
    faces: tuple[tuple[Dart, ...], ...]
    genus: int
    components: int

    def face_of(self) -> dict[Dart, int]:
        return {d: i for i, f in enumerate(self.faces) for d in f}


def trace_faces(g: Graph, rot: RotationSystem) -> FaceStructure:
    """Faces as dart cycles: the dart after ``(u, v)`` is ``(v, succ_v(u))``."""
    check_rotation(g, rot)
    succ = rot.successor_map()
    seen: set[Dart] = set()
    faces: list[tuple[Dart, ...]] = []
    for v in sorted(rot.order):
        for w in rot.order[v]:
            start = (v, w)
            if start in seen:
                continue
            face = []
            d = start
            while d not in seen:
                seen.add(d)
                face.append(d)
                a, b = d
                d = (b, succ[(b, a)])
            faces.append(tuple(face))
    comps = g.components()
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    face_count = [0] * len(comps)
    for f in faces:
        face_count[comp_of[f[0][0]]] += 1
    euler_gap = 0
    for i, c in enumerate(comps):
        e_count = sum(1 for e in g.edges if e[0] in c)
        f_count = max(1, face_count[i])
        euler_gap += 2 - (len(c) - e_count + f_count)
    return FaceStructure(tuple(faces), euler_gap // 2, len(comps))


def is_planar(g: Graph) -> bool:
    if len(g.vertices) >= 3 and len(g.edges) > 3 * len(g.vertices) - 6:
        return False
    ok, _ = nx.check_planarity(g.to_networkx())
    return bool(ok)


def planar_embedding(g: Graph) -> RotationSystem | None:
    """A genus-0 rotation system of ``g`` or ``None`` when ``g`` is not planar."""
    ok, emb = nx.check_planarity(g.to_networkx())
    if not ok:
        return None
    return RotationSystem({v: tuple(emb.neighbors_cw_order(v)) for v in g.vertices})


def induced_rotation(rot: RotationSystem, sub: Graph) -> RotationSystem:
    """Restrict every rotation to the edges of ``sub``."""
    carrier = rot.edges()
    if not sub.edges <= carrier or not sub.vertices <= rot.vertices:
        raise InputError("sub is not a subgraph of the rotation system's graph")
    out = {}
    for v in sub.vertices:
        out[v] = tuple(w for w in rot.order[v] if edge(v, w) in sub.edges)
    return RotationSystem(out)


def cyclic_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        return False
    if len(a) == 0:
        return True
    try:
        i = list(b).index(a[0])
    except ValueError:
        return False
    return tuple(b[i:]) + tuple(b[:i]) == tuple(a)


def component_agreement(rot_a: RotationSystem, rot_b: RotationSystem, comp: Iterable[int]) -> set[bool]:
    """Orientations under which the rotations agree on ``comp``.

    Returns a subset of ``{False, True}``: ``False`` means equal as given,
    ``True`` means equal after reversing ``rot_b``.
    """
    fwd = rev = True
    for v in comp:
        a, b = rot_a.order[v], rot_b.order[v]
        if len(a) <= 2:
            if not cyclic_equal(a, b):
                return set()
            continue
        if fwd and not cyclic_equal(a, b):
            fwd = False
        if rev and not cyclic_equal(a, tuple(reversed(b))):
            rev = False
        if not fwd and not rev:
            return set()
    return {flag for flag, ok in ((False, fwd), (True, rev)) if ok}


def same_embedding(rot_a: RotationSystem, rot_b: RotationSystem, sub: Graph) -> bool:
    """Equal induced rotations on ``sub``, allowing one reversal per component."""
    ia, ib = induced_rotation(rot_a, sub), induced_rotation(rot_b, sub)
    return all(component_agreement(ia, ib, comp) for comp in sub.components())


# ---------------------------------------------------------------------------
# admissible rotations at an apex


def _relabel(node: tuple, mapping: Mapping[int, int]) -> tuple:
    if node[0] == LEAF:
        return (LEAF, mapping[node[1]])
    return (node[0], tuple(_relabel(c, mapping) for c in node[1]))


def apex_order_pqtree(h: Graph, apex: int, reference: int | None = None) -> PQTree:
    """Admissible rotations at ``apex`` in planar embeddings of ``h``.

    The result ranges over the neighbours of ``apex`` other than
    ``reference`` (default: the smallest one).  Its frontier is the set of
    orders ``sigma`` such that ``reference`` followed by ``sigma`` is, read
    cyclically, the rotation at ``apex`` in some planar embedding of ``h``.
    The NULL tree means ``h`` is not planar.
    """
    others = sorted(h.vertices - {apex})
    if apex not in h.vertices or any(not h.has_edge(apex, v) for v in others):
        raise UnsupportedInstance("the apex must be adjacent to every other vertex")
    if len(others) < 2:
        raise InputError("the apex needs at least two neighbours")
    ref = others[0] if reference is None else reference
    if ref not in others:
        raise InputError(f"reference {ref} is not a neighbour of the apex")
    rest = frozenset(others) - {ref}
    page = h.subgraph(others)
    comps = page.components()
    if len(comps) > 1:
        if all(len(c) == 1 for c in comps):
            return universal(rest)
        raise UnsupportedInstance("apex orders need a connected graph after removing the apex")
    if len(others) <= 3:
        return universal(rest)

    # st-numbering: breadth-first order from the reference, apex last
    order = [ref]
    num = {ref: 0}
    queue = deque([ref])
    while queue:
        x = queue.popleft()
        for y in page.neighbors(x):
            if y not in num:
                num[y] = len(order)
                order.append(y)
                queue.append(y)
    num[apex] = len(order)

    label_of: dict[Edge, int] = {}
    upward: dict[int, list[int]] = {v: [] for v in order}
    incoming: dict[int, list[int]] = {v: [] for v in order}
    for u, w in sorted(h.edges):
        lo, hi = (u, w) if num[u] < num[w] else (w, u)
        lab = len(label_of)
        label_of[(lo, hi)] = lab
        upward[lo].append(lab)
        if hi != apex:
            incoming[hi].append(lab)
    apex_label = {label_of[(v, apex)]: v for v in order}

    def fresh(labels: list[int]) -> _N:
        if len(labels) == 1:
            return _N(LEAF, labels[0])
        return _N(PNODE, None, [_N(LEAF, x) for x in labels])

    eng = Engine.from_labels(upward[ref])
    try:
        for v in order[1:]:
            where = eng.reduce(incoming[v])
            eng.replace_pertinent(where, fresh(upward[v]), incoming[v])
    except ReductionFailed:
        return null_tree(rest)
    final = eng.snapshot()
    assert final.root is not None
    named = PQTree(_relabel(final.root, apex_label), frozenset(others))
    return reroot_at_leaf(named, ref)
