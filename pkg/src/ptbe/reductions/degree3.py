"""Make the common graph of a Max SEFE instance subcubic.

A common vertex ``v`` of degree ``d > 3`` becomes a rigid gadget: an outer
cycle of ``2d`` vertices and an inner cycle of ``d`` vertices, every odd
outer vertex joined to one inner vertex.  The common edges of ``v`` attach
to the even outer vertices in rotation order; private edges attach to the
odd outer vertex between the common edges that surround them.
"""

from __future__ import annotations

from ..errors import InputError, UnsupportedInstance
from ..model import Edge, Graph, MaxSefeInstance, edge
from ..planarity import RotationSystem, cyclic_equal, planar_embedding


def _ports(
    ring: tuple[int, ...], common: list[int], outer: list[int], shared_of: set[int]
) -> dict[int, int]:
    """Gadget vertex at which each neighbour in ``ring`` attaches."""
    start = next(i for i, w in enumerate(ring) if w in shared_of)
    ring = ring[start:] + ring[:start]
    out: dict[int, int] = {}
    slot = -1
    for w in ring:
        if w in shared_of:
            slot = common.index(w)
            out[w] = outer[2 * slot]
        else:
            out[w] = outer[2 * slot + 1]
    return out


def degree3_expand(inst: MaxSefeInstance) -> MaxSefeInstance:
    shared = inst.shared
    big = sorted(v for v in shared.vertices if shared.degree(v) > 3)
    if not big:
        return inst
    rots: list[RotationSystem] = []
    for g in (inst.g1, inst.g2):
        rot = planar_embedding(g)
        if rot is None:
            raise InputError("both graphs must be planar")
        rots.append(rot)
    nxt = max(inst.g1.vertices) + 1
    gadget: set[Edge] = set()
    ports: list[dict[tuple[int, int], int]] = [{}, {}]
    for v in big:
        nbrs = set(shared.neighbors(v))
        common = [w for w in rots[0][v] if w in nbrs]
        d = len(common)
        # v itself becomes the first outer vertex, which keeps ids dense
        outer = [v] + list(range(nxt, nxt + 2 * d - 1))
        inner = list(range(nxt + 2 * d - 1, nxt + 3 * d - 1))
        nxt += 3 * d - 1
        gadget |= {edge(outer[i], outer[(i + 1) % (2 * d)]) for i in range(2 * d)}
        gadget |= {edge(inner[i], inner[(i + 1) % d]) for i in range(d)}
        gadget |= {edge(outer[2 * i + 1], inner[i]) for i in range(d)}
        for side, rot in enumerate(rots):
            ring = rot[v]
            seen = [w for w in ring if w in nbrs]
            if not cyclic_equal(seen, common):
                if not cyclic_equal(list(reversed(seen)), common):
                    raise UnsupportedInstance(f"the two graphs order the common edges at {v} differently")
                ring = tuple(reversed(ring))
            for w, p in _ports(ring, common, outer, nbrs).items():
                ports[side][(v, w)] = p
    graphs = []
    for side, g in enumerate((inst.g1, inst.g2)):
        port = ports[side]
        edges = {edge(port.get((a, b), a), port.get((b, a), b)) for a, b in g.edges} | gadget
        graphs.append(Graph(frozenset(g.vertices) | {x for e in gadget for x in e}, frozenset(edges)))
    return MaxSefeInstance(graphs[0], graphs[1], inst.budget)
