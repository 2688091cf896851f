"""Checkers for order certificates (book embeddings) and rotation certificates (SEFE)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InputError
from .model import (
    Edge,
    Graph,
    MaxSefeInstance,
    PtbeInstance,
    SunflowerSefeInstance,
    crossing_pair,
    edge,
    first_split_block,
)
from .planarity import RotationSystem, check_rotation, trace_faces


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a certificate check with a machine-readable reason code."""

    ok: bool
    reason: str = "ok"
    detail: Mapping[str, object] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def check_ptbe_certificate(inst: PtbeInstance, order: Sequence[int]) -> CheckResult:
    """Accept iff ``order`` is represented by the tree and every page is crossing-free."""
    pos = {x: i for i, x in enumerate(order)}
    if len(pos) != len(order) or set(pos) != inst.leaves:
        return CheckResult(False, "label_mismatch", {"expected": sorted(inst.leaves), "got": list(order)})
    bad = first_split_block(pos, inst.tree)
    if bad is not None:
        return CheckResult(False, "not_represented", {"vertex": bad})
    for i, page in enumerate(inst.pages):
        pair = crossing_pair(pos, page)
        if pair is not None:
            return CheckResult(False, "page_crossing", {"page": i, "edges": [list(pair[0]), list(pair[1])]})
    return CheckResult(True)


@dataclass(frozen=True)
class SefeCertificate:
    """One rotation system per input graph plus the differently drawn shared edges."""

    rotations: tuple[RotationSystem, ...]
    violated: frozenset[Edge] = frozenset()


# ---------------------------------------------------------------------------
# agreement of two embeddings on a common subgraph


def _face_labels(sub_rot: RotationSystem, comp: frozenset[int]) -> dict[tuple[int, int], int]:
    """Map each dart of the component to the index of its face."""
    succ = sub_rot.successor_map()
    out: dict[tuple[int, int], int] = {}
    idx = 0
    for v in sorted(comp):
        for w in sub_rot.order[v]:
            if (v, w) in out:
                continue
            d = (v, w)
            while d not in out:
                out[d] = idx
                a, b = d
                d = (b, succ[(b, a)])
            idx += 1
    return out


def _locate(
    carrier: Graph,
    rot: RotationSystem,
    sub_rot: RotationSystem,
    comp: frozenset[int],
    other: frozenset[int],
) -> tuple[int, int] | None:
    """Dart of ``comp`` whose face contains ``other`` in the embedding ``rot``.

    Returns ``None`` when ``comp`` has no edges (a single vertex has one face)
    or when ``other`` is not connected to ``comp`` in ``carrier``.
    """
    if not any(sub_rot.order[v] for v in comp):
        return None
    # breadth-first search from ``other`` avoiding ``comp`` until an edge enters it
    start = sorted(other)
    seen = set(start)
    frontier = list(start)
    hit: tuple[int, int] | None = None
    while frontier and hit is None:
        nxt = []
        for x in frontier:
            for y in carrier.neighbors(x):
                if y in comp:
                    hit = (y, x)
                    break
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
            if hit is not None:
                break
        frontier = nxt
    if hit is None:
        return None
    c, p = hit
    ring = rot.order[c]
    i = ring.index(p)
    d = len(ring)
    sub_edges = set(sub_rot.order[c])
    if not sub_edges:
        return None
    # the sub-edge just before ``p`` in the rotation at ``c``
    j = (i - 1) % d
    while ring[j] not in sub_edges:
        j = (j - 1) % d
    x = ring[j]
    # corner between (c, x) and its successor lies on the face containing dart (x, c)
    return (x, c)


@dataclass
class _Parity:
    """Union-find with parity, used for reflection choices per carrier component."""

    parent: dict[object, object] = field(default_factory=dict)
    flip: dict[object, int] = field(default_factory=dict)

    def find(self, x: object) -> tuple[object, int]:
        if x not in self.parent:
            self.parent[x] = x
            self.flip[x] = 0
            return x, 0
        par = 0
        root = x
        path = []
        while self.parent[root] != root:
            path.append(root)
            par ^= self.flip[root]
            root = self.parent[root]
        # path compression
        acc = par
        for node in path:
            nxt_flip = self.flip[node]
            self.parent[node] = root
            self.flip[node] = acc
            acc ^= nxt_flip
        return root, par

    def union(self, a: object, b: object, parity: int) -> bool:
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == parity
        self.parent[ra] = rb
        self.flip[ra] = pa ^ pb ^ parity
        return True


def embedding_agreement(
    g_a: Graph, rot_a: RotationSystem, g_b: Graph, rot_b: RotationSystem, sub: Graph
) -> CheckResult:
    """Do two embeddings induce the same embedding of ``sub``?

    Beyond equal rotations, every component of ``sub`` must lie in the same
    face of every other component that shares its connected carrier
    component in both graphs.  Each connected component of either carrier may
    be mirrored independently.  Relative placement across different carrier
    components is free and is not checked; the result reports that case.
    """
    from .planarity import component_agreement, induced_rotation

    ia, ib = induced_rotation(rot_a, sub), induced_rotation(rot_b, sub)
    comps = sub.components()
    carrier_a = {v: ("a", i) for i, c in enumerate(g_a.components()) for v in c}
    carrier_b = {v: ("b", i) for i, c in enumerate(g_b.components()) for v in c}
    uf = _Parity()
    for comp in comps:
        v = min(comp)
        ok = component_agreement(ia, ib, comp)
        if not ok:
            return CheckResult(False, "rotation_mismatch", {"component": sorted(comp)})
        if len(ok) == 1:
            (flag,) = ok
            if not uf.union(carrier_a[v], carrier_b[v], int(flag)):
                return CheckResult(False, "orientation_conflict", {"component": sorted(comp)})
    orientations = [component_agreement(ia, ib, comp) for comp in comps]
    labels_b = {i: _face_labels(ib, c) for i, c in enumerate(comps)}
    unchecked = 0
    for i, comp in enumerate(comps):
        for j, other in enumerate(comps):
            if i == j:
                continue
            u, w = min(comp), min(other)
            if carrier_a[u] != carrier_a[w] or carrier_b[u] != carrier_b[w]:
                unchecked += 1
                continue
            da = _locate(g_a, rot_a, ia, comp, other)
            db = _locate(g_b, rot_b, ib, comp, other)
            if da is None or db is None:
                continue
            lb = labels_b[i]
            allowed = set()
            if False in orientations[i] and lb[db] == lb[da]:
                allowed.add(0)
            if True in orientations[i] and lb[db] == lb[(da[1], da[0])]:
                allowed.add(1)
            if not allowed:
                return CheckResult(False, "placement_mismatch", {"component": sorted(comp), "other": sorted(other)})
            if len(allowed) == 1 and not uf.union(carrier_a[u], carrier_b[u], allowed.pop()):
                return CheckResult(False, "orientation_conflict", {"component": sorted(comp), "other": sorted(other)})
    detail: dict[str, object] = {"components": len(comps)}
    if unchecked:
        detail["unchecked_placements"] = unchecked
    return CheckResult(True, "ok" if not unchecked else "rotation_level_only", detail)


def _planarity_problem(g: Graph, rot: RotationSystem, which: int) -> CheckResult | None:
    try:
        check_rotation(g, rot)
    except InputError as exc:
        return CheckResult(False, "rotation_mismatch_graph", {"graph": which, "message": str(exc)})
    genus = trace_faces(g, rot).genus
    if genus != 0:
        return CheckResult(False, "not_planar", {"graph": which, "genus": genus})
    return None


def check_sefe_certificate(inst: SunflowerSefeInstance, cert: SefeCertificate) -> CheckResult:
    """Every rotation is planar and all pairs induce the same embedding of the shared graph."""
    if len(cert.rotations) != inst.k:
        raise InputError(f"certificate has {len(cert.rotations)} rotation systems, instance has {inst.k} graphs")
    graphs = [inst.graph(i) for i in range(inst.k)]
    for i, (g, rot) in enumerate(zip(graphs, cert.rotations)):
        bad = _planarity_problem(g, rot, i)
        if bad is not None:
            return bad
    notes = "ok"
    for i in range(inst.k):
        for j in range(i + 1, inst.k):
            res = embedding_agreement(graphs[i], cert.rotations[i], graphs[j], cert.rotations[j], inst.shared)
            if not res.ok:
                return CheckResult(False, res.reason, {**res.detail, "graphs": [i, j]})
            if res.reason != "ok":
                notes = res.reason
    return CheckResult(True, notes)


def check_maxsefe_certificate(inst: MaxSefeInstance, cert: SefeCertificate) -> CheckResult:
    """Planar rotations agreeing on the shared graph minus at most ``budget`` edges."""
    if len(cert.rotations) != 2:
        return CheckResult(False, "wrong_shape", {"rotations": len(cert.rotations)})
    shared = inst.shared
    violated = frozenset(edge(*e) for e in cert.violated)
    if not violated <= shared.edges:
        return CheckResult(False, "violated_not_shared", {"edges": sorted(violated - shared.edges)})
    if len(violated) > inst.budget:
        return CheckResult(False, "over_budget", {"violated": len(violated), "budget": inst.budget})
    for i, (g, rot) in enumerate(((inst.g1, cert.rotations[0]), (inst.g2, cert.rotations[1]))):
        bad = _planarity_problem(g, rot, i)
        if bad is not None:
            return bad
    kept = Graph(shared.vertices, shared.edges - violated)
    res = embedding_agreement(inst.g1, cert.rotations[0], inst.g2, cert.rotations[1], kept)
    if not res.ok:
        return res
    return CheckResult(True, res.reason, {**res.detail, "violated": len(violated)})
