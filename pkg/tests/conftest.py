from __future__ import annotations

import itertools
import random
from typing import Iterable, Iterator, Sequence

import networkx as nx
import pytest

from ptbe.model import BetweennessInstance, Edge, Graph, LeafTree, edge


def graph(edges: Iterable[Sequence[int]], vertices: Iterable[int] = ()) -> Graph:
    return Graph.build(edges, vertices)


def from_nx(g: nx.Graph) -> Graph:
    return Graph.build([edge(int(a), int(b)) for a, b in g.edges], [int(v) for v in g.nodes])


def complete(n: int) -> Graph:
    return graph(itertools.combinations(range(n), 2), range(n))


def k33() -> Graph:
    return graph([(a, b) for a in range(3) for b in range(3, 6)])


def grouping_tree() -> LeafTree:
    """Leaves 1, 2, 3 with {1, 2} under their own internal node 5."""
    return LeafTree.build([(4, 3), (4, 5), (5, 1), (5, 2)], root=4)


def all_graphs(n: int) -> Iterator[Graph]:
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield graph([p for i, p in enumerate(pairs) if mask >> i & 1], range(n))


def edges_of(pairs: Iterable[Sequence[int]]) -> frozenset[Edge]:
    return frozenset(edge(a, b) for a, b in pairs)


@pytest.fixture
def k4() -> Graph:
    return complete(4)


def betweenness_seeds(max_m: int, n: int = 3) -> list[BetweennessInstance]:
    """Every triple pattern over ``n`` elements with ``m <= max_m`` triples.

    A triple and its mirror impose the same constraint, so only triples with
    first entry smaller than last are kept.
    """
    triples = [t for t in itertools.permutations(range(n), 3) if t[0] < t[2]]
    return [
        BetweennessInstance(tuple(range(n)), combo)
        for m in range(1, max_m + 1)
        for combo in itertools.product(triples, repeat=m)
    ]


def triangulation(n: int, rng: random.Random) -> nx.Graph:
    """Greedy maximal planar graph on ``n`` vertices, randomly relabelled."""
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for a, b in itertools.combinations(range(n), 2):
        g.add_edge(a, b)
        if not nx.check_planarity(g)[0]:
            g.remove_edge(a, b)
    perm = list(range(n))
    rng.shuffle(perm)
    return nx.relabel_nodes(g, dict(zip(range(n), perm)))


def steiner_family() -> Iterator[tuple[str, Graph]]:
    """K4, wheels W4..W7 and greedy triangulations on 5..8 vertices."""
    yield "K4", complete(4)
    for n in range(4, 8):
        yield f"W{n}", from_nx(nx.wheel_graph(n))
    rng = random.Random(1)
    for n in range(5, 9):
        for t in range(3):
            yield f"T{n}.{t}", from_nx(triangulation(n, rng))


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter) -> None:  # type: ignore[no-untyped-def]
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
