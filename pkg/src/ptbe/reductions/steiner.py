"""Planar Steiner tree to its uniform triconnected form and on to Max SEFE."""

from __future__ import annotations

import itertools
from typing import Iterable

import networkx as nx

from ..certificates import SefeCertificate
from ..errors import InputError
from ..model import Edge, MaxSefeInstance, PstInstance, edge, is_triconnected
from ..planarity import RotationSystem, induced_rotation, is_planar, planar_embedding, trace_faces
from .base import Namer, ReductionOutput, graph_of, require


def _faces_around(rot: RotationSystem, face_of: dict[tuple[int, int], int], v: int) -> list[int]:
    """Faces met around ``v``; consecutive entries share the edge ``(v, rot[v][i])``."""
    return [face_of[(v, w)] for w in rot[v]]


def _maximal_planar(g: nx.Graph) -> list[tuple[int, int]]:
    """Greedily add edges while the graph stays planar; returns the added edges."""
    added = []
    for a, b in itertools.combinations(sorted(g.nodes), 2):
        if g.has_edge(a, b):
            continue
        g.add_edge(a, b)
        if nx.check_planarity(g)[0]:
            added.append((a, b))
        else:
            g.remove_edge(a, b)
    return added


def pst_to_utpst(inst: PstInstance) -> ReductionOutput[PstInstance]:
    """Triangulate with heavy dummy edges, subdivide to unit weights, web every face.

    Source vertex ``v`` becomes ``G[v]``; the inner vertices of the path for
    edge ``(u, v)`` are ``P[u,v].j``; the cycle placed in face ``i`` is
    ``W[i].j``.  Graphs with fewer than four vertices are padded with
    isolated vertices ``pad[j]`` first.
    """
    g = inst.graph
    if not is_planar(g):
        raise InputError("the input graph is not planar")
    nm = Namer()
    vid = {v: nm.new(f"G[{v}]", f"vertex[{v}]") for v in sorted(g.vertices)}
    while nm.count < 4:
        nm.new(f"pad[{nm.count - len(vid)}]", "frame")
    heavy = sum(inst.weights.values())
    base = nx.Graph()
    base.add_nodes_from(range(nm.count))
    weight: dict[Edge, int] = {}
    origin: dict[Edge, Edge | None] = {}
    for (u, v), w in inst.weights.items():
        e = edge(vid[u], vid[v])
        base.add_edge(*e)
        weight[e], origin[e] = w, (u, v)
    for a, b in _maximal_planar(base):
        weight[(a, b)], origin[(a, b)] = heavy, None

    # unit-weight subdivision
    unit: set[Edge] = set()
    paths: dict[Edge, tuple[Edge, ...]] = {}
    kind: dict[Edge, str] = {}
    for e in sorted(weight):
        a, b = e
        src = origin[e]
        tag = f"edge[{src[0]},{src[1]}]" if src is not None else "frame"
        chain = [a]
        for j in range(1, weight[e]):
            name = f"P[{nm.names[a]},{nm.names[b]}].{j}"
            chain.append(nm.new(name, tag))
        chain.append(b)
        steps = tuple(edge(x, y) for x, y in zip(chain, chain[1:]))
        unit.update(steps)
        for s in steps:
            kind[s] = "path" if src is not None else "dummy"
        if src is not None:
            paths[src] = steps
    sub = graph_of(range(nm.count), unit)
    rot = planar_embedding(sub)
    assert rot is not None
    for i, face in enumerate(trace_faces(sub, rot).faces):
        rim = [d[0] for d in face]
        web = [nm.new(f"W[{i}].{j}", f"face[{i}]") for j in range(len(rim))]
        for j, (v, u) in enumerate(zip(rim, web)):
            for e in (edge(u, v), edge(u, web[(j + 1) % len(web)])):
                unit.add(e)
                kind[e] = "web"
    out_graph = graph_of(range(nm.count), unit)
    target = PstInstance(
        out_graph,
        {e: 1 for e in out_graph.edges},
        frozenset(vid[s] for s in inst.terminals),
        inst.budget,
    )
    require(is_triconnected(out_graph), "output graph is triconnected")
    return nm.output(inst, target, {"to_target": vid, "paths": paths, "kind": kind})


def pst_tree_forward(out: ReductionOutput[PstInstance], tree: Iterable[Edge]) -> frozenset[Edge]:
    """Replace every source tree edge by its unit path."""
    paths = out.data["paths"]
    assert isinstance(paths, dict)
    try:
        return frozenset(s for e in tree for s in paths[edge(*e)])
    except KeyError as exc:
        raise InputError(f"edge {exc.args[0]} is not a source edge") from None


def pst_tree_backward(out: ReductionOutput[PstInstance], tree: Iterable[Edge]) -> frozenset[Edge]:
    """Source tree of no larger weight from a target tree.

    Each connected piece of web edges is replaced by shortest rim paths
    joining the rim vertices it touches; the result is pruned to a tree whose
    leaves are terminals and every fully used path becomes its source edge.
    """
    target = out.instance
    assert isinstance(target, PstInstance)
    paths, kind = out.data["paths"], out.data["kind"]
    assert isinstance(paths, dict) and isinstance(kind, dict)
    used = {edge(*e) for e in tree}
    if not used <= target.graph.edges:
        raise InputError("the tree uses edges outside the target graph")
    rim_graph = nx.Graph([e for e, k in kind.items() if k != "web"])
    h = nx.Graph([e for e in used if kind[e] != "web"])
    webs = nx.Graph([e for e in used if kind[e] == "web"])
    for piece in nx.connected_components(webs):
        touched = sorted(v for v in piece if v in rim_graph)
        closure = nx.Graph()
        closure.add_nodes_from(touched)
        routes = {}
        for a, b in itertools.combinations(touched, 2):
            routes[(a, b)] = nx.shortest_path(rim_graph, a, b)
            closure.add_edge(a, b, weight=len(routes[(a, b)]) - 1)
        for a, b in nx.minimum_spanning_tree(closure).edges:
            route = routes[(min(a, b), max(a, b))]
            nx.add_path(h, route)
    terms = set(target.terminals)
    h.add_nodes_from(terms)
    comp = next((c for c in nx.connected_components(h) if terms <= c), None)
    if comp is None:
        raise InputError("the tree does not connect the terminals")
    t = nx.Graph(nx.minimum_spanning_tree(h.subgraph(comp)))
    leaves = [v for v in t.nodes if t.degree(v) <= 1 and v not in terms]
    while leaves:
        v = leaves.pop()
        if v not in t:
            continue
        ns = list(t.neighbors(v))
        t.remove_node(v)
        leaves.extend(w for w in ns if t.degree(w) <= 1 and w not in terms)
    kept = {edge(*e) for e in t.edges}
    if any(kind[e] == "dummy" for e in kept):
        raise InputError("the tree needs an augmentation edge absent from the source")
    return frozenset(src for src, steps in paths.items() if set(steps) <= kept)


def utpst_to_maxsefe(inst: PstInstance) -> ReductionOutput[MaxSefeInstance]:
    """Dual graph as common graph; terminals sit in their faces in G1 and on a path in G2.

    Face ``i`` of the input embedding becomes ``F[i]``, terminal ``s``
    becomes ``S[s]``; ``u1*`` and ``u2*`` subdivide the two edges at ``v*``
    on the face of the first terminal ``s*``.
    """
    g = inst.graph
    if not is_triconnected(g):
        raise InputError("the input graph must be triconnected")
    if any(w != 1 for w in inst.weights.values()):
        raise InputError("the input weights must all be 1")
    if not inst.terminals:
        raise InputError("at least one terminal is needed")
    rot = planar_embedding(g)
    if rot is None:
        raise InputError("the input graph is not planar")
    faces = trace_faces(g, rot)
    face_of = faces.face_of()
    nm = Namer()
    fid = [nm.new(f"F[{i}]", f"face[{i}]") for i in range(len(faces.faces))]
    terms = sorted(inst.terminals)
    sid = {s: nm.new(f"S[{s}]", f"terminal[{s}]") for s in terms}
    s_star = terms[0]
    u1 = nm.new("u1*", "frame")
    u2 = nm.new("u2*", "frame")

    # dual edge of (a, b) joins the faces left and right of it
    dual: dict[Edge, Edge] = {}
    for a, b in g.edges:
        dual[(a, b)] = edge(fid[face_of[(a, b)]], fid[face_of[(b, a)]])
    ring = [fid[f] for f in _faces_around(rot, face_of, s_star)]
    ns = rot[s_star]
    d = len(ns)
    v_star = ring[0]
    split = {edge(s_star, ns[0]): u1, edge(s_star, ns[d - 1]): u2}
    shared: set[Edge] = set()
    path_of: dict[Edge, tuple[int, ...]] = {}
    for e, (p, q) in dual.items():
        if e in split:
            mid = split[e]
            shared |= {edge(p, mid), edge(mid, q)}
            path_of[e] = (p, mid, q) if p == v_star else (q, mid, p)
        else:
            shared.add((p, q))
            path_of[e] = (p, q)
    shared |= {edge(sid[s_star], u1), edge(sid[s_star], u2), edge(sid[s_star], v_star)}

    g1 = set(shared)
    for s in terms:
        for w in rot[s]:
            for x in path_of[edge(s, w)]:
                if x != sid[s]:
                    g1.add(edge(sid[s], x))
    g2 = set(shared) | {edge(sid[a], sid[b]) for a, b in zip(terms, terms[1:])}
    verts = range(nm.count)
    target = MaxSefeInstance(graph_of(verts, g1), graph_of(verts, g2), inst.budget)
    common = target.shared
    require(common.edges == frozenset(shared), "common graph is the augmented dual")
    core = common.subgraph(v for v in common.vertices if common.degree(v) > 0)
    require(is_triconnected(core), "common graph is triconnected")
    require(is_triconnected(target.g1), "first graph is triconnected")
    # the violated copy of a split dual edge is the half away from v*
    violate = {e: edge(*p[-2:]) for e, p in path_of.items()}
    return nm.output(
        inst,
        target,
        {"terminals": sid, "s_star": sid[s_star], "v_star": v_star, "u": (u1, u2), "violate": violate},
    )


def steiner_to_certificate(out: ReductionOutput[MaxSefeInstance], tree: Iterable[Edge]) -> SefeCertificate:
    """Rotation systems in which exactly the duals of the tree edges differ."""
    target = out.instance
    assert isinstance(target, MaxSefeInstance)
    data = out.data
    violate, sid = data["violate"], data["terminals"]
    assert isinstance(violate, dict) and isinstance(sid, dict)
    s_star, v_star = data["s_star"], data["v_star"]
    assert isinstance(s_star, int) and isinstance(v_star, int)
    try:
        violated = frozenset(violate[edge(*e)] for e in tree)
    except KeyError as exc:
        raise InputError(f"edge {exc.args[0]} is not an edge of the source graph") from None
    rot1 = planar_embedding(target.g1)
    assert rot1 is not None
    common = target.shared
    carrier = common.subgraph(v for v in common.vertices if common.degree(v) > 0)
    rot2 = dict(induced_rotation(rot1, carrier).order)
    xs = [sid[s] for s in sorted(sid)]
    for i, x in enumerate(xs[1:], start=1):
        rot2[x] = tuple(y for y in (xs[i - 1], xs[i + 1] if i + 1 < len(xs) else None) if y is not None)
    if len(xs) > 1:
        ring = list(rot2[s_star])
        k = ring.index(v_star)
        ring = ring[k:] + ring[:k]
        # the corner between the two subdivision vertices, away from v*
        rot2[s_star] = (ring[0], ring[1], xs[1], ring[2])
    return SefeCertificate((rot1, RotationSystem(rot2)), violated)
