"""JSON documents for instances, certificates, verdicts and reduction provenance.

Every document is an object with ``kind`` and ``version`` (always 1).
Vertices are written as strings; when a document is read, the string at
position ``i`` of the vertex array becomes vertex id ``i``.  Fields that a
kind does not define are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .certificates import SefeCertificate
from .errors import InvariantViolation, MalformedDocument, UnknownKind
from .model import (
    BetweennessInstance,
    Edge,
    Graph,
    LeafTree,
    MaxSefeInstance,
    PstInstance,
    PtbeInstance,
    SunflowerSefeInstance,
    XorSatInstance,
    edge,
)
from .planarity import RotationSystem

VERSION = 1

INSTANCE_KINDS = ("graph", "leaf_tree", "ptbe", "sunflower_sefe", "betweenness", "xorsat", "pst", "max_sefe")

# required fields, optional fields
_SCHEMA: dict[str, tuple[frozenset[str], frozenset[str]]] = {
    "graph": (frozenset({"vertices", "edges"}), frozenset()),
    "leaf_tree": (frozenset({"vertices", "edges"}), frozenset({"root"})),
    "ptbe": (frozenset({"vertices", "edges", "pages"}), frozenset({"root"})),
    "sunflower_sefe": (frozenset({"vertices", "shared", "privates"}), frozenset()),
    "betweenness": (frozenset({"elements", "triples"}), frozenset()),
    "xorsat": (frozenset({"variables", "clauses"}), frozenset({"budget"})),
    "pst": (frozenset({"vertices", "edges", "weights", "terminals"}), frozenset({"budget"})),
    "max_sefe": (frozenset({"vertices", "g1", "g2"}), frozenset({"budget"})),
    "certificate": (frozenset(), frozenset({"instance", "order", "rotations", "violated", "assignment", "tree"})),
    "verdict": (frozenset({"problem", "answer"}), frozenset({"order", "trace", "detail"})),
    "provenance": (frozenset({"source", "target", "names", "provenance"}), frozenset()),
}

Instance = (
    Graph | LeafTree | PtbeInstance | SunflowerSefeInstance | BetweennessInstance | XorSatInstance | PstInstance | MaxSefeInstance
)


@dataclass(frozen=True)
class Document:
    """A decoded document: its kind, the decoded value and the vertex labels."""

    kind: str
    value: Any
    labels: tuple[str, ...] = ()

    def label(self, v: int) -> str:
        return self.labels[v] if v < len(self.labels) else str(v)

    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.labels)}


# ---------------------------------------------------------------------------
# decoding helpers


def _check_fields(doc: Mapping[str, Any]) -> str:
    if not isinstance(doc, dict):
        raise MalformedDocument("a document must be a JSON object")
    kind = doc.get("kind")
    if not isinstance(kind, str):
        raise MalformedDocument("missing or non-string 'kind'")
    if kind not in _SCHEMA:
        raise UnknownKind(f"unknown document kind {kind!r}")
    if doc.get("version") != VERSION:
        raise MalformedDocument(f"unsupported version {doc.get('version')!r}; expected {VERSION}")
    required, optional = _SCHEMA[kind]
    fields = set(doc) - {"kind", "version"}
    missing = required - fields
    if missing:
        raise MalformedDocument(f"{kind} document lacks fields {sorted(missing)}")
    unknown = fields - required - optional
    if unknown:
        raise MalformedDocument(f"{kind} document has unknown fields {sorted(unknown)}")
    return kind


def _labels(raw: Any, what: str = "vertices") -> tuple[str, ...]:
    if not isinstance(raw, list) or not all(isinstance(s, str) for s in raw):
        raise MalformedDocument(f"'{what}' must be an array of strings")
    if len(set(raw)) != len(raw):
        raise MalformedDocument(f"'{what}' lists a label twice")
    return tuple(raw)


def _vertex(index: Mapping[str, int], label: Any) -> int:
    if not isinstance(label, str) or label not in index:
        raise MalformedDocument(f"unknown vertex label {label!r}")
    return index[label]


def _edges(index: Mapping[str, int], raw: Any, what: str) -> list[Edge]:
    if not isinstance(raw, list):
        raise MalformedDocument(f"'{what}' must be an array of edges")
    out = []
    for e in raw:
        if not isinstance(e, list) or len(e) != 2:
            raise MalformedDocument(f"'{what}' holds a non-pair {e!r}")
        out.append((_vertex(index, e[0]), _vertex(index, e[1])))
    return out


def _int(raw: Any, what: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise MalformedDocument(f"'{what}' must be an integer")
    return raw


def _graph(labels: Sequence[str], index: Mapping[str, int], raw: Any, what: str) -> Graph:
    return Graph.build(_edges(index, raw, what), range(len(labels)))


def decode(doc: Mapping[str, Any]) -> Document:
    """Turn a parsed JSON object into a :class:`Document`."""
    kind = _check_fields(doc)
    try:
        return _decode(kind, doc)
    except InvariantViolation as exc:
        raise MalformedDocument(f"{kind} document violates an invariant: {exc}") from None


def _decode(kind: str, doc: Mapping[str, Any]) -> Document:
    if kind in ("certificate", "verdict", "provenance"):
        return Document(kind, dict(doc))
    if kind == "betweenness":
        labels = _labels(doc["elements"], "elements")
        index = {s: i for i, s in enumerate(labels)}
        triples = []
        for t in _list(doc["triples"], "triples"):
            if not isinstance(t, list) or len(t) != 3:
                raise MalformedDocument(f"triple {t!r} does not have three members")
            triples.append(tuple(_vertex(index, x) for x in t))
        return Document(kind, BetweennessInstance(tuple(range(len(labels))), tuple(triples)), labels)  # type: ignore[arg-type]
    if kind == "xorsat":
        labels = _labels(doc["variables"], "variables")
        index = {s: i for i, s in enumerate(labels)}
        clauses = []
        for c in _list(doc["clauses"], "clauses"):
            if not isinstance(c, list) or len(c) != 2:
                raise MalformedDocument(f"clause {c!r} must hold two literals")
            lits = []
            for lit in c:
                if not isinstance(lit, list) or len(lit) != 2 or not isinstance(lit[1], bool):
                    raise MalformedDocument(f"literal {lit!r} must be [variable, polarity]")
                lits.append((_vertex(index, lit[0]), lit[1]))
            clauses.append(tuple(lits))
        budget = _int(doc.get("budget", 0), "budget")
        return Document(kind, XorSatInstance(tuple(range(len(labels))), tuple(clauses), budget), labels)  # type: ignore[arg-type]

    labels = _labels(doc["vertices"])
    index = {s: i for i, s in enumerate(labels)}
    if kind == "graph":
        return Document(kind, _graph(labels, index, doc["edges"], "edges"), labels)
    if kind in ("leaf_tree", "ptbe"):
        root = _vertex(index, doc["root"]) if "root" in doc else None
        tree = LeafTree(_graph(labels, index, doc["edges"], "edges"), root)
        if kind == "leaf_tree":
            return Document(kind, tree, labels)
        pages = [_edges(index, p, f"pages[{i}]") for i, p in enumerate(_list(doc["pages"], "pages"))]
        return Document(kind, PtbeInstance.build(tree, pages), labels)
    if kind == "sunflower_sefe":
        shared = _graph(labels, index, doc["shared"], "shared")
        privates = tuple(
            frozenset(edge(*e) for e in _edges(index, p, f"privates[{i}]"))
            for i, p in enumerate(_list(doc["privates"], "privates"))
        )
        return Document(kind, SunflowerSefeInstance(shared, privates), labels)
    if kind == "pst":
        edges = _edges(index, doc["edges"], "edges")
        weights = _list(doc["weights"], "weights")
        if len(weights) != len(edges):
            raise MalformedDocument("'weights' must run parallel to 'edges'")
        g = Graph.build(edges, range(len(labels)))
        if len(g.edges) != len(edges):
            raise MalformedDocument("'edges' lists an edge twice")
        w = {edge(*e): _int(x, "weights") for e, x in zip(edges, weights)}
        terms = frozenset(_vertex(index, s) for s in _list(doc["terminals"], "terminals"))
        return Document(kind, PstInstance(g, w, terms, _int(doc.get("budget", 0), "budget")), labels)
    assert kind == "max_sefe"
    g1 = _graph(labels, index, doc["g1"], "g1")
    g2 = _graph(labels, index, doc["g2"], "g2")
    return Document(kind, MaxSefeInstance(g1, g2, _int(doc.get("budget", 0), "budget")), labels)


def _list(raw: Any, what: str) -> list[Any]:
    if not isinstance(raw, list):
        raise MalformedDocument(f"'{what}' must be an array")
    return raw


def loads(text: str) -> Document:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from None
    return decode(doc)


def load(path: str | Path) -> Document:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedDocument(f"cannot read {path}: {exc}") from None
    return loads(text)


# ---------------------------------------------------------------------------
# encoding


def _namer(labels: Sequence[str] | None) -> Any:
    if labels is None:
        return str
    return lambda v: labels[v]


def _vertex_labels(vertices: Iterable[int], labels: Sequence[str] | None) -> list[str]:
    vs = sorted(vertices)
    if vs != list(range(len(vs))):
        raise InvariantViolation("documents need dense vertex ids 0..n-1")
    name = _namer(labels)
    return [name(v) for v in vs]


def _edge_list(edges: Iterable[Edge], labels: Sequence[str] | None) -> list[list[str]]:
    name = _namer(labels)
    return [[name(u), name(v)] for u, v in sorted(edges)]


def encode(value: Instance, labels: Sequence[str] | None = None) -> dict[str, Any]:
    """JSON object for an instance; ``labels[v]`` names vertex ``v`` (default ``str(v)``)."""
    name = _namer(labels)
    doc: dict[str, Any]
    if isinstance(value, Graph):
        doc = {"kind": "graph", "vertices": _vertex_labels(value.vertices, labels), "edges": _edge_list(value.edges, labels)}
    elif isinstance(value, LeafTree):
        doc = {"kind": "leaf_tree", **_tree_fields(value, labels)}
    elif isinstance(value, PtbeInstance):
        doc = {"kind": "ptbe", **_tree_fields(value.tree, labels)}
        doc["pages"] = [_edge_list(p, labels) for p in value.pages]
    elif isinstance(value, SunflowerSefeInstance):
        doc = {
            "kind": "sunflower_sefe",
            "vertices": _vertex_labels(value.shared.vertices, labels),
            "shared": _edge_list(value.shared.edges, labels),
            "privates": [_edge_list(p, labels) for p in value.privates],
        }
    elif isinstance(value, BetweennessInstance):
        doc = {
            "kind": "betweenness",
            "elements": _vertex_labels(value.elements, labels),
            "triples": [[name(x) for x in t] for t in value.triples],
        }
    elif isinstance(value, XorSatInstance):
        doc = {
            "kind": "xorsat",
            "variables": _vertex_labels(value.variables, labels),
            "clauses": [[[name(x), p] for x, p in c] for c in value.clauses],
            "budget": value.budget,
        }
    elif isinstance(value, PstInstance):
        edges = sorted(value.graph.edges)
        doc = {
            "kind": "pst",
            "vertices": _vertex_labels(value.graph.vertices, labels),
            "edges": _edge_list(edges, labels),
            "weights": [value.weights[e] for e in edges],
            "terminals": [name(v) for v in sorted(value.terminals)],
            "budget": value.budget,
        }
    elif isinstance(value, MaxSefeInstance):
        doc = {
            "kind": "max_sefe",
            "vertices": _vertex_labels(value.g1.vertices, labels),
            "g1": _edge_list(value.g1.edges, labels),
            "g2": _edge_list(value.g2.edges, labels),
            "budget": value.budget,
        }
    else:
        raise TypeError(f"cannot encode {type(value).__name__}")
    return {"kind": doc.pop("kind"), "version": VERSION, **doc}


def _tree_fields(tree: LeafTree, labels: Sequence[str] | None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "vertices": _vertex_labels(tree.graph.vertices, labels),
        "edges": _edge_list(tree.graph.edges, labels),
    }
    if tree.root is not None:
        out["root"] = _namer(labels)(tree.root)
    return out


def encode_certificate(
    *,
    labels: Sequence[str] | None = None,
    order: Sequence[int] | None = None,
    cert: SefeCertificate | None = None,
    assignment: Mapping[int, bool] | None = None,
    tree: Iterable[Edge] | None = None,
    instance: dict[str, Any] | None = None,
) -> dict[str, Any]:
    name = _namer(labels)
    doc: dict[str, Any] = {"kind": "certificate", "version": VERSION}
    if instance is not None:
        doc["instance"] = instance
    if order is not None:
        doc["order"] = [name(v) for v in order]
    if cert is not None:
        doc["rotations"] = [
            {name(v): [name(w) for w in ns] for v, ns in sorted(rot.order.items())} for rot in cert.rotations
        ]
        doc["violated"] = _edge_list(cert.violated, labels)
    if assignment is not None:
        doc["assignment"] = {name(x): bool(b) for x, b in sorted(assignment.items())}
    if tree is not None:
        doc["tree"] = _edge_list(tree, labels)
    return doc


def decode_order(raw: Any, index: Mapping[str, int]) -> tuple[int, ...]:
    return tuple(_vertex(index, s) for s in _list(raw, "order"))


def decode_sefe_certificate(doc: Mapping[str, Any], index: Mapping[str, int]) -> SefeCertificate:
    rotations = []
    for i, raw in enumerate(_list(doc.get("rotations"), "rotations")):
        if not isinstance(raw, dict):
            raise MalformedDocument(f"rotations[{i}] must be an object")
        rot = {_vertex(index, v): tuple(_vertex(index, w) for w in _list(ns, f"rotations[{i}]")) for v, ns in raw.items()}
        rotations.append(RotationSystem(rot))
    violated = frozenset(edge(*e) for e in _edges(index, doc.get("violated", []), "violated"))
    return SefeCertificate(tuple(rotations), violated)


def decode_edges(raw: Any, index: Mapping[str, int], what: str) -> frozenset[Edge]:
    return frozenset(edge(*e) for e in _edges(index, raw, what))


def decode_assignment(raw: Any, index: Mapping[str, int]) -> dict[int, bool]:
    if not isinstance(raw, dict) or not all(isinstance(b, bool) for b in raw.values()):
        raise MalformedDocument("'assignment' must map variables to booleans")
    return {_vertex(index, x): b for x, b in raw.items()}


def verdict(problem: str, answer: str, **fields: Any) -> dict[str, Any]:
    doc: dict[str, Any] = {"kind": "verdict", "version": VERSION, "problem": problem, "answer": answer}
    doc.update({k: v for k, v in fields.items() if v is not None})
    return doc


def dumps(doc: Mapping[str, Any]) -> str:
    """Deterministic JSON text (stable key order, trailing newline)."""
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
