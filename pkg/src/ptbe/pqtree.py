"""PQ-trees over integer labels.

A tree is stored as nested tuples: ``("L", label)``, ``("P", children)`` or
``("Q", children)``.  The public :class:`PQTree` is immutable and kept in a
canonical form (P-children sorted by smallest label, Q-nodes oriented so
that the first child has the smaller minimum label), so ``==`` compares
trees structurally.  Reductions run on a mutable engine that implements the
classical Booth-Lueker templates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Collection, Iterable, Iterator

from .errors import GuardExceeded, InputError
from .model import Graph, LeafTree

LEAF, PNODE, QNODE = "L", "P", "Q"

Node = tuple


# ---------------------------------------------------------------------------
# immutable trees


def _min_label(node: Node, cache: dict[int, int]) -> int:
    key = id(node)
    if key not in cache:
        if node[0] == LEAF:
            cache[key] = node[1]
        else:
            cache[key] = min(_min_label(c, cache) for c in node[1])
    return cache[key]


def _canonical(node: Node) -> Node:
    cache: dict[int, int] = {}
    # iterative post-order rebuild
    out: dict[int, Node] = {}
    stack: list[tuple[Node, bool]] = [(node, False)]
    while stack:
        cur, done = stack.pop()
        if cur[0] == LEAF:
            out[id(cur)] = cur
            continue
        if not done:
            stack.append((cur, True))
            for c in cur[1]:
                stack.append((c, False))
            continue
        kids = [out[id(c)] for c in cur[1]]
        if len(kids) == 1:
            out[id(cur)] = kids[0]
            continue
        kind = cur[0]
        if kind == QNODE and len(kids) == 2:
            kind = PNODE
        if kind == PNODE:
            kids.sort(key=lambda c: _min_label(c, cache))
        elif _min_label(kids[0], cache) > _min_label(kids[-1], cache):
            kids.reverse()
        out[id(cur)] = (kind, tuple(kids))
    return out[id(node)]


def _leaves_of(node: Node) -> list[int]:
    out: list[int] = []
    stack = [node]
    while stack:
        cur = stack.pop()
        if cur[0] == LEAF:
            out.append(cur[1])
        else:
            stack.extend(reversed(cur[1]))
    return out


@dataclass(frozen=True)
class PQTree:
    """A PQ-tree over ``labels``; ``root is None`` encodes the NULL tree."""

    root: Node | None
    labels: frozenset[int]

    def __post_init__(self) -> None:
        if self.root is not None:
            canon = _canonical(self.root)
            object.__setattr__(self, "root", canon)
            found = _leaves_of(canon)
            if len(found) != len(set(found)) or set(found) != self.labels:
                raise InputError("PQ-tree leaves do not match its label set")

    @property
    def is_null(self) -> bool:
        return self.root is None

    def __str__(self) -> str:
        return to_text(self)

    def internal_nodes(self) -> Iterator[Node]:
        if self.root is None:
            return
        stack = [self.root]
        while stack:
            cur = stack.pop()
            if cur[0] != LEAF:
                yield cur
                stack.extend(cur[1])


def null_tree(labels: Iterable[int]) -> PQTree:
    return PQTree(None, frozenset(labels))


def leaf_set(node: Node) -> frozenset[int]:
    return frozenset(_leaves_of(node))


def to_text(t: PQTree) -> str:
    """Nested parenthesised text: ``P(...)``, ``Q[...]``, leaves by label."""
    if t.root is None:
        return "NULL"

    def show(node: Node) -> str:
        if node[0] == LEAF:
            return str(node[1])
        inner = " ".join(show(c) for c in node[1])
        return f"P({inner})" if node[0] == PNODE else f"Q[{inner}]"

    return show(t.root)


def parse_text(text: str) -> PQTree:
    """Inverse of :func:`to_text` for integer labels."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").replace("[", " [ ").replace("]", " ] ").split()
    if tokens == ["NULL"]:
        raise InputError("NULL text carries no label set")
    pos = 0

    def parse() -> Node:
        nonlocal pos
        tok = tokens[pos]
        if tok in ("P", "Q"):
            opener, closer = ("(", ")") if tok == "P" else ("[", "]")
            if tokens[pos + 1] != opener:
                raise InputError(f"expected {opener!r} after {tok}")
            pos += 2
            kids = []
            while tokens[pos] != closer:
                kids.append(parse())
            pos += 1
            return (PNODE if tok == "P" else QNODE, tuple(kids))
        pos += 1
        return (LEAF, int(tok))

    root = parse()
    return PQTree(root, leaf_set(root))


def universal(labels: Iterable[int]) -> PQTree:
    """The tree whose frontier is every order of ``labels``."""
    ls = sorted(set(labels))
    if not ls:
        raise InputError("a PQ-tree needs at least one label")
    if len(ls) == 1:
        return PQTree((LEAF, ls[0]), frozenset(ls))
    return PQTree((PNODE, tuple((LEAF, x) for x in ls)), frozenset(ls))


def frontier_count(t: PQTree) -> int:
    if t.root is None:
        return 0
    total = 1
    for node in t.internal_nodes():
        total *= math.factorial(len(node[1])) if node[0] == PNODE else 2
    return total


def _orders(node: Node) -> Iterator[tuple[int, ...]]:
    if node[0] == LEAF:
        yield (node[1],)
        return
    kids = node[1]
    if node[0] == PNODE:
        arrangements: Iterable[tuple[Node, ...]] = permutations(kids)
    else:
        arrangements = (kids, tuple(reversed(kids)))
    for arr in arrangements:
        for parts in product(*(list(_orders(c)) for c in arr)):
            yield tuple(x for part in parts for x in part)


def frontier_enumerate(t: PQTree, cap: int | None = None) -> list[tuple[int, ...]]:
    """Every order of the frontier, deterministically ordered."""
    if t.root is None:
        return []
    if cap is not None and frontier_count(t) > cap:
        raise GuardExceeded(f"frontier has {frontier_count(t)} orders, cap is {cap}")
    return list(_orders(t.root))


def contains_order(t: PQTree, order: Iterable[int]) -> bool:
    """Membership test for the frontier, in linear time."""
    seq = list(order)
    if t.root is None or set(seq) != t.labels or len(seq) != len(t.labels):
        return False
    pos = {x: i for i, x in enumerate(seq)}
    ok = True

    def span(node: Node) -> tuple[int, int]:
        nonlocal ok
        if node[0] == LEAF:
            p = pos[node[1]]
            return p, p
        spans = [span(c) for c in node[1]]
        lo = min(s[0] for s in spans)
        hi = max(s[1] for s in spans)
        if hi - lo + 1 != len(_leaves_of(node)):
            ok = False
        if node[0] == QNODE:
            starts = [s[0] for s in spans]
            if starts != sorted(starts) and starts != sorted(starts, reverse=True):
                ok = False
        return lo, hi

    span(t.root)
    return ok


# ---------------------------------------------------------------------------
# mutable engine


class _N:
    __slots__ = ("kind", "label", "children", "parent")

    def __init__(self, kind: str, label: int | None = None, children: list[_N] | None = None) -> None:
        self.kind = kind
        self.label = label
        self.children: list[_N] = children if children is not None else []
        self.parent: _N | None = None
        for c in self.children:
            c.parent = self


class ReductionFailed(Exception):
    """Internal signal: no order satisfies the constraint."""


@dataclass
class Pertinent:
    """Where the reduced set lives after a reduction.

    Either ``node`` is full (``lo is None``) or ``node`` is a Q-node whose
    children ``lo..hi`` are exactly the full ones.
    """

    node: _N
    lo: int | None = None
    hi: int | None = None


@dataclass
class Engine:
    """In-place PQ-tree used by reductions and by the vertex-addition loop."""

    root: _N | None
    leaves: dict[int, _N] = field(default_factory=dict)

    @classmethod
    def from_tree(cls, t: PQTree) -> Engine:
        if t.root is None:
            return cls(None, {})
        leaves: dict[int, _N] = {}

        def build(node: Node) -> _N:
            if node[0] == LEAF:
                n = _N(LEAF, node[1])
                leaves[node[1]] = n
                return n
            return _N(node[0], None, [build(c) for c in node[1]])

        return cls(build(t.root), leaves)

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> Engine:
        return cls.from_tree(universal(labels))

    def snapshot(self) -> PQTree:
        if self.root is None:
            return null_tree(self.leaves)

        def conv(n: _N) -> Node:
            if n.kind == LEAF:
                return (LEAF, n.label)
            return (n.kind, tuple(conv(c) for c in n.children))

        return PQTree(conv(self.root), frozenset(self.leaves))

    # -- helpers -----------------------------------------------------------

    def _replace(self, old: _N, new: _N) -> None:
        par = old.parent
        new.parent = par
        if par is None:
            self.root = new
        else:
            kids = par.children
            kids[kids.index(old)] = new

    @staticmethod
    def _group(nodes: list[_N]) -> _N:
        if len(nodes) == 1:
            return nodes[0]
        return _N(PNODE, None, list(nodes))

    @staticmethod
    def _set_children(node: _N, kids: list[_N]) -> None:
        node.children = kids
        for c in kids:
            c.parent = node

    # -- reduction ---------------------------------------------------------

    def reduce(self, labels: Collection[int]) -> Pertinent:
        """Restrict to orders where ``labels`` are consecutive.

        Raises :class:`ReductionFailed` when no order survives; the engine is
        unusable afterwards.
        """
        if self.root is None:
            raise ReductionFailed()
        try:
            targets = [self.leaves[x] for x in labels]
        except KeyError as exc:
            raise InputError(f"unknown label {exc.args[0]}") from None
        size = len(targets)
        if size == 0:
            raise InputError("cannot reduce by the empty set")
        if size == 1:
            return Pertinent(targets[0])

        # mark the union of the leaf-to-root paths; pending = unprocessed marked children
        pending: dict[_N, int] = {}
        marked: set[_N] = set(targets)
        for leaf in targets:
            node = leaf
            while node.parent is not None:
                par = node.parent
                if par in marked:
                    pending[par] += 1
                    break
                marked.add(par)
                pending[par] = 1
                node = par
        count: dict[_N, int] = {}
        full: set[_N] = set()
        fulls: dict[_N, list[_N]] = {}
        partials: dict[_N, list[_N]] = {}
        queue = list(targets)
        while queue:
            x = queue.pop()
            if x.kind == LEAF:
                c = 1
                full.add(x)
            else:
                c = count[x]
                if len(fulls.get(x, ())) == len(x.children):
                    full.add(x)
            if c == size:
                return self._root_template(x, full, fulls.get(x, []), partials.get(x, []))
            node = x
            if x not in full:
                node = self._partial_template(x, full, fulls.get(x, []), partials.get(x, []))
            par = node.parent
            if par is None:
                raise ReductionFailed()
            count[par] = count.get(par, 0) + c
            if node in full:
                fulls.setdefault(par, []).append(node)
            else:
                partials.setdefault(par, []).append(node)
            pending[par] -= 1
            if pending[par] == 0:
                queue.append(par)
        raise ReductionFailed()

    def _partial_template(self, x: _N, full: set[_N], fs: list[_N], ps: list[_N]) -> _N:
        """Turn a partial non-root node into a Q-node ordered empty..full."""
        if x.kind == PNODE:
            if len(ps) > 1:
                raise ReductionFailed()
            marked = set(fs) | set(ps)
            empties = [c for c in x.children if c not in marked]
            seq: list[_N] = [self._group(empties)] if empties else []
            if ps:
                seq.extend(ps[0].children)
            if fs:
                grp = self._group(fs)
                full.add(grp)
                seq.append(grp)
            q = _N(QNODE, None, seq)
            self._replace(x, q)
            return q
        # Q-node
        if len(ps) > 1:
            raise ReductionFailed()
        kids = x.children
        status = ["F" if c in full else ("P" if ps and c is ps[0] else "E") for c in kids]
        if not _empty_partial_full(status):
            kids = kids[::-1]
            status.reverse()
            if not _empty_partial_full(status):
                raise ReductionFailed()
        seq = []
        for c, s in zip(kids, status):
            if s == "P":
                seq.extend(c.children)
            else:
                seq.append(c)
        self._set_children(x, seq)
        return x

    def _root_template(self, x: _N, full: set[_N], fs: list[_N], ps: list[_N]) -> Pertinent:
        if x in full:
            return Pertinent(x)
        if x.kind == PNODE:
            if len(ps) > 2:
                raise ReductionFailed()
            marked = set(fs) | set(ps)
            empties = [c for c in x.children if c not in marked]
            grp = None
            if fs:
                grp = self._group(fs)
                full.add(grp)
            if not ps:
                assert grp is not None and empties
                self._set_children(x, empties + [grp])
                return Pertinent(grp)
            y = ps[0]
            seq = list(y.children)
            if grp is not None:
                seq.append(grp)
            if len(ps) == 2:
                seq.extend(reversed(ps[1].children))
            self._set_children(y, seq)
            if empties:
                self._set_children(x, empties + [y])
            else:
                self._replace(x, y)
            return self._full_range(y, full)
        # Q-node root
        kids = x.children
        status = ["F" if c in full else ("P" if c in ps else "E") for c in kids]
        idx = [i for i, s in enumerate(status) if s != "E"]
        lo, hi = idx[0], idx[-1]
        if hi - lo + 1 != len(idx):
            raise ReductionFailed()
        if any(status[i] == "P" for i in range(lo + 1, hi)):
            raise ReductionFailed()
        seq = list(kids[:lo])
        for i in range(lo, hi + 1):
            c = kids[i]
            if status[i] != "P":
                seq.append(c)
            elif i == lo:
                seq.extend(c.children)
            else:
                seq.extend(reversed(c.children))
        seq.extend(kids[hi + 1 :])
        self._set_children(x, seq)
        return self._full_range(x, full)

    @staticmethod
    def _full_range(q: _N, full: set[_N]) -> Pertinent:
        idx = [i for i, c in enumerate(q.children) if c in full]
        return Pertinent(q, idx[0], idx[-1])

    # -- vertex addition ---------------------------------------------------

    def replace_pertinent(self, where: Pertinent, new: _N | None, removed: Iterable[int]) -> None:
        """Replace the full part located by ``where`` with ``new`` (or drop it)."""
        for label in removed:
            del self.leaves[label]
        if where.lo is None:
            if new is None:
                par = where.node.parent
                if par is None:
                    self.root = None
                    return
                par.children.remove(where.node)
                self._fix_arity(par)
            else:
                self._replace(where.node, new)
        else:
            q = where.node
            kids = q.children
            middle = [new] if new is not None else []
            self._set_children(q, kids[: where.lo] + middle + kids[where.hi + 1 :])
            self._fix_arity(q)
        if new is not None:
            stack = [new]
            while stack:
                n = stack.pop()
                if n.kind == LEAF:
                    self.leaves[n.label] = n
                else:
                    stack.extend(n.children)

    def _fix_arity(self, node: _N) -> None:
        if len(node.children) == 1:
            self._replace(node, node.children[0])
        elif node.kind == QNODE and len(node.children) == 2:
            node.kind = PNODE


def _empty_partial_full(status: list[str]) -> bool:
    """True iff ``status`` matches ``E* P? F*``."""
    i, n = 0, len(status)
    while i < n and status[i] == "E":
        i += 1
    if i < n and status[i] == "P":
        i += 1
    while i < n and status[i] == "F":
        i += 1
    return i == n


# ---------------------------------------------------------------------------
# public operations


def reduce(t: PQTree, s: Collection[int]) -> PQTree:
    """Restrict the frontier of ``t`` to orders where ``s`` is consecutive."""
    s = set(s)
    unknown = s - t.labels
    if unknown:
        raise InputError(f"unknown labels {sorted(unknown)}")
    if t.root is None or len(s) <= 1 or len(s) == len(t.labels):
        return t
    eng = Engine.from_tree(t)
    try:
        eng.reduce(s)
    except ReductionFailed:
        return null_tree(t.labels)
    return eng.snapshot()


def reduce_all(t: PQTree, sets: Iterable[Collection[int]]) -> PQTree:
    """Apply several reductions on one engine (cheaper than chaining :func:`reduce`)."""
    if t.root is None:
        return t
    eng = Engine.from_tree(t)
    n = len(t.labels)
    try:
        for s in sets:
            s = set(s)
            if not s <= t.labels:
                raise InputError(f"unknown labels {sorted(s - t.labels)}")
            if 1 < len(s) < n:
                eng.reduce(s)
    except ReductionFailed:
        return null_tree(t.labels)
    return eng.snapshot()


def constraint_sets(t: PQTree) -> list[frozenset[int]]:
    """Consecutivity constraints whose joint solutions are exactly the frontier."""
    out: list[frozenset[int]] = []
    for node in t.internal_nodes():
        sets = [leaf_set(c) for c in node[1]]
        out.append(frozenset().union(*sets))
        if node[0] == QNODE:
            for a, b in zip(sets, sets[1:]):
                out.append(a | b)
    return out


def intersect(t1: PQTree, t2: PQTree) -> PQTree:
    """Tree whose frontier is the intersection of both frontiers."""
    if t1.labels != t2.labels:
        raise InputError("intersect needs trees over the same labels")
    if t1.root is None or t2.root is None:
        return null_tree(t1.labels)
    return reduce_all(t1, constraint_sets(t2))


def _rooted_pq(children: dict[int, tuple[int, ...]], start: int, leaves: frozenset[int]) -> Node:
    built: dict[int, Node] = {}
    stack: list[tuple[int, bool]] = [(start, False)]
    while stack:
        v, done = stack.pop()
        kids = children[v]
        if v in leaves and v != start:
            built[v] = (LEAF, v)
            continue
        if not done:
            stack.append((v, True))
            stack.extend((w, False) for w in kids)
            continue
        sub = [built[w] for w in kids]
        built[v] = sub[0] if len(sub) == 1 else (PNODE, tuple(sub))
    return built[start]


def from_leaf_tree(tree: LeafTree, anchor: int | None = None) -> PQTree:
    """PQ-tree of the orders represented by ``tree``.

    With ``anchor`` (a leaf), the tree is rooted at that leaf instead and the
    result ranges over the other leaves: its frontier is the set of orders
    ``sigma`` such that ``anchor`` followed by ``sigma`` is represented by
    ``tree`` up to rotation.
    """
    leaves = tree.leaves
    if anchor is None:
        if tree.root is None:
            return universal(leaves)
        return PQTree(_rooted_pq(tree.children, tree.root, leaves), leaves)
    if anchor not in leaves:
        raise InputError(f"anchor {anchor} is not a leaf")
    rest = leaves - {anchor}
    if not rest:
        raise InputError("anchored tree needs at least two leaves")
    rerooted = _children_from(tree.graph, anchor)
    (start,) = rerooted[anchor]
    if start in leaves:
        return PQTree((LEAF, start), rest)
    return PQTree(_rooted_pq(rerooted, start, leaves), rest)


def _children_from(g: Graph, start: int) -> dict[int, tuple[int, ...]]:
    out: dict[int, tuple[int, ...]] = {}
    parent = {start: -1}
    stack = [start]
    while stack:
        v = stack.pop()
        kids = tuple(w for w in g.neighbors(v) if w != parent[v])
        out[v] = kids
        for w in kids:
            parent[w] = v
            stack.append(w)
    return out


def reroot_at_leaf(t: PQTree, anchor: int) -> PQTree:
    """Read ``t`` cyclically and cut at leaf ``anchor``.

    The result ranges over the other labels; its frontier is the set of orders
    ``sigma`` such that ``anchor`` followed by ``sigma`` is a rotation of some
    order in the frontier of ``t``.
    """
    if t.root is None:
        return null_tree(t.labels - {anchor})
    if anchor not in t.labels:
        raise InputError(f"anchor {anchor} is not a label")
    rest = t.labels - {anchor}
    if not rest:
        raise InputError("rerooting needs at least two labels")
    # parent links of the nested representation
    parent: dict[int, Node | None] = {id(t.root): None}
    path: list[Node] = []
    stack = [t.root]
    leaf_node = None
    while stack:
        cur = stack.pop()
        if cur[0] == LEAF:
            if cur[1] == anchor:
                leaf_node = cur
            continue
        for c in cur[1]:
            parent[id(c)] = cur
            stack.append(c)
    assert leaf_node is not None
    node = leaf_node
    while node is not None:
        path.append(node)
        node = parent[id(node)]

    def neighbours(n: Node) -> list[Node | None]:
        # cyclic neighbour list; ``None`` stands for the parent slot
        kids = list(n[1])
        if parent[id(n)] is None:
            return kids
        return [None] + kids

    def build(n: Node, came_from: Node | None, via_parent: bool) -> Node:
        """Subtree of ``n`` when entered from ``came_from``."""
        if n[0] == LEAF:
            return n
        ring = neighbours(n)
        if via_parent:
            entry = ring.index(None)
        else:
            entry = next(i for i, m in enumerate(ring) if m is came_from)
        rotated = ring[entry + 1 :] + ring[:entry]
        kids: list[Node] = []
        for m in rotated:
            if m is None:
                kids.append(build(parent[id(n)], n, False))
            else:
                kids.append(build(m, n, True))
        if len(kids) == 1:
            return kids[0]
        kind = n[0] if len(kids) >= 3 else PNODE
        return (kind, tuple(kids))

    start = parent[id(leaf_node)]
    assert start is not None
    root = build(start, leaf_node, False)
    return PQTree(root, rest)


# ---------------------------------------------------------------------------
# representative graph


@dataclass
class RepNode:
    """Layout of one PQ node inside the representative graph."""

    kind: str
    vertex: int  # leaf vertex, P vertex or wheel center
    children: list[RepNode] = field(default_factory=list)
    rims: list[int] = field(default_factory=list)  # one per child
    top_rim: int | None = None  # rim vertex towards the parent (Q only)
    label: int | None = None

    @property
    def attach(self) -> int:
        return self.top_rim if self.top_rim is not None else self.vertex


@dataclass
class RepresentativeGraph:
    graph: Graph
    leaf_vertex: dict[int, int]
    layout: RepNode


def representative_graph(t: PQTree) -> RepresentativeGraph:
    """Wheels for Q-nodes, cut vertices for P-nodes, pendant vertices for leaves."""
    if t.root is None:
        raise InputError("the NULL tree has no representative graph")
    edges: list[tuple[int, int]] = []
    counter = iter(range(1 << 62))
    leaf_vertex: dict[int, int] = {}

    def build(node: Node, is_root: bool) -> RepNode:
        if node[0] == LEAF:
            v = next(counter)
            leaf_vertex[node[1]] = v
            return RepNode(LEAF, v, label=node[1])
        if node[0] == PNODE:
            p = next(counter)
            rep = RepNode(PNODE, p)
            for c in node[1]:
                child = build(c, False)
                rep.children.append(child)
                edges.append((p, child.attach))
            return rep
        center = next(counter)
        rep = RepNode(QNODE, center)
        ring: list[int] = []
        if not is_root:
            rep.top_rim = next(counter)
            ring.append(rep.top_rim)
        for c in node[1]:
            r = next(counter)
            rep.rims.append(r)
            ring.append(r)
            child = build(c, False)
            rep.children.append(child)
            edges.append((r, child.attach))
        for a, b in zip(ring, ring[1:] + ring[:1]):
            edges.append((a, b))
        for r in ring:
            edges.append((center, r))
        return rep

    layout = build(t.root, True)
    used = next(counter)
    return RepresentativeGraph(Graph.build(edges, range(used)), leaf_vertex, layout)
