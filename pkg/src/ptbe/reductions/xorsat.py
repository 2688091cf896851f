"""Max 2-XorSat to Max SEFE with a common graph made of disjoint triangles.

In G1 every variable owns a rigid piece hanging between ``v[i]`` and
``u[i]`` on an outer cycle: a 4-cycle ``a[i] b[i] c[i] d[i]`` followed by a
chain of triangles ``K[q,i]``, one per clause ``q`` using the variable.  In
G2 the two triangles of a clause are joined into a prism.  Flipping the
piece of variable ``i`` is setting ``x_i``; flipping a prism is free.
"""

from __future__ import annotations

from typing import Mapping

from ..certificates import SefeCertificate
from ..errors import InputError, UnsupportedInstance
from ..model import Edge, Graph, MaxSefeInstance, XorSatInstance, edge
from ..oracles import FlipModel, triangle_orientation
from ..planarity import RotationSystem, cyclic_equal, planar_embedding
from .base import Namer, ReductionOutput, graph_of, require


def xorsat_to_maxsefe(inst: XorSatInstance) -> ReductionOutput[MaxSefeInstance]:
    unused = set(inst.variables) - {x for c in inst.clauses for x, _ in c}
    if unused:
        raise UnsupportedInstance(f"variables {sorted(unused)} occur in no clause")
    nm = Namer()
    g1: set[Edge] = set()
    g2: set[Edge] = set()
    xs = inst.variables
    ring = [nm.new(f"v[{x}]", f"variable[{x}]") for x in xs]
    ring += [nm.new(f"u[{x}]", f"variable[{x}]") for x in reversed(xs)]
    g1 |= {edge(p, q) for p, q in zip(ring, ring[1:] + ring[:1])}
    tail: dict[int, int] = {}
    for x in xs:
        a, b, c, d = (nm.new(f"{s}[{x}]", f"variable[{x}]") for s in "abcd")
        g1 |= {edge(a, b), edge(b, c), edge(c, d), edge(d, a), edge(a, nm[f"v[{x}]"])}
        tail[x] = c
    triangles: list[tuple[int, int, int]] = []
    for q, clause in enumerate(inst.clauses):
        tri = []
        for x, positive in clause:
            a, b, c = (nm.new(f"K[{q},{x}].{s}", f"clause[{q}]", f"variable[{x}]") for s in "abc")
            g1 |= {edge(a, b), edge(b, c), edge(c, a)}
            g1 |= {edge(b, nm[f"b[{x}]" if positive else f"d[{x}]"]), edge(a, tail[x])}
            tail[x] = c
            tri.append((a, b, c))
            triangles.append((a, b, c))
        (a1, b1, c1), (a2, b2, c2) = tri
        g2 |= {edge(a1, b1), edge(b1, c1), edge(c1, a1), edge(a2, b2), edge(b2, c2), edge(c2, a2)}
        g2 |= {edge(a1, a2), edge(b1, b2), edge(c1, c2)}
    for x in xs:
        g1.add(edge(tail[x], nm[f"u[{x}]"]))
    verts = range(nm.count)
    target = MaxSefeInstance(graph_of(verts, g1), graph_of(verts, g2), inst.budget)
    common = target.shared
    require(len(common.components()) - _isolated(common) == 2 * len(inst.clauses), "common graph has 2|F| pieces")
    require(
        all(len(common.subgraph(t).edges) == 3 for t in triangles) and len(common.edges) == 3 * len(triangles),
        "common graph is a union of triangles",
    )
    groups1 = tuple(frozenset(v for v in verts if _owner(nm.names[v]) == x) for x in xs)
    groups2 = tuple(frozenset(v for t in triangles[2 * q : 2 * q + 2] for v in t) for q in range(len(inst.clauses)))
    r1, r2 = planar_embedding(target.g1), planar_embedding(target.g2)
    require(r1 is not None and r2 is not None, "both graphs are planar")
    assert r1 is not None and r2 is not None
    model = FlipModel((r1, r2), (groups1, groups2))
    return nm.output(inst, target, {"model": model, "triangles": tuple(triangles)})


def _isolated(g: Graph) -> int:
    return sum(1 for v in g.vertices if g.degree(v) == 0)


def _owner(name: str) -> int | None:
    """Variable whose flippable piece contains the vertex named ``name``."""
    if name[0] in "abcd" and name[1] == "[":
        return int(name[2:-1])
    if name.startswith("K["):
        return int(name[2 : name.index("]")].split(",")[1])
    return None


def _is_true(rot: RotationSystem, out: ReductionOutput[MaxSefeInstance], x: int) -> bool:
    a, v, b, d = (out.id_of(f"{s}[{x}]") for s in ("a", "v", "b", "d"))
    return cyclic_equal(rot[a], (v, b, d))


def _violations(out: ReductionOutput[MaxSefeInstance], r1: RotationSystem, r2: RotationSystem) -> frozenset[Edge]:
    triangles = out.data["triangles"]
    assert isinstance(triangles, tuple)
    return frozenset(
        edge(t[0], t[1]) for t in triangles if triangle_orientation(r1, t) != triangle_orientation(r2, t)
    )


def assignment_to_certificate(
    out: ReductionOutput[MaxSefeInstance], assignment: Mapping[int, bool]
) -> SefeCertificate:
    """G1 flipped by the assignment, every prism flipped to agree as much as possible.

    One edge of every triangle drawn with opposite orientations is violated.
    """
    src = out.source
    model = out.data["model"]
    assert isinstance(src, XorSatInstance) and isinstance(model, FlipModel)
    if set(assignment) != set(src.variables):
        raise InputError("the assignment must give a value to every variable")
    flips1 = [_is_true(model.base[0], out, x) != bool(assignment[x]) for x in src.variables]
    r1, _ = model.realize((flips1, [False] * len(model.groups[1])))
    flips2 = []
    for q in range(len(model.groups[1])):
        costs = []
        for on in (False, True):
            trial = [False] * len(model.groups[1])
            trial[q] = on
            _, r2 = model.realize((flips1, trial))
            costs.append(len(_violations_of_clause(out, q, r1, r2)))
        flips2.append(costs[1] < costs[0])
    r1, r2 = model.realize((flips1, flips2))
    return SefeCertificate((r1, r2), _violations(out, r1, r2))


def _violations_of_clause(
    out: ReductionOutput[MaxSefeInstance], q: int, r1: RotationSystem, r2: RotationSystem
) -> list[tuple[int, ...]]:
    triangles = out.data["triangles"]
    assert isinstance(triangles, tuple)
    pair = triangles[2 * q : 2 * q + 2]
    return [t for t in pair if triangle_orientation(r1, t) != triangle_orientation(r2, t)]


def certificate_to_assignment(out: ReductionOutput[MaxSefeInstance], cert: SefeCertificate) -> dict[int, bool]:
    """``x_i`` is true when the rotation at ``a[i]`` in G1 is ``v[i], b[i], d[i]``."""
    src = out.source
    assert isinstance(src, XorSatInstance)
    return {x: _is_true(cert.rotations[0], out, x) for x in src.variables}
