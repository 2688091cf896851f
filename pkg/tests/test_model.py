from __future__ import annotations

import itertools

import pytest

from conftest import complete, edges_of, graph, grouping_tree
from ptbe import io
from ptbe.errors import InvariantViolation, MalformedDocument, UnknownKind
from ptbe.model import (
    BetweennessInstance,
    LeafTree,
    MaxSefeInstance,
    PstInstance,
    PtbeInstance,
    SunflowerSefeInstance,
    XorSatInstance,
    intersection_graph,
    is_represented_by,
    is_t_biconnected,
    leaf_expand,
    page_alternation_free,
    structural_predicates,
)


class TestRepresentation:
    def test_star_accepts_everything(self) -> None:
        star = LeafTree.star([1, 2, 3])
        assert all(is_represented_by(p, star) for p in itertools.permutations([1, 2, 3]))

    def test_split_block_rejected(self) -> None:
        assert not is_represented_by((1, 3, 2), grouping_tree())

    def test_exact_accepted_set(self) -> None:
        tree = grouping_tree()
        accepted = {p for p in itertools.permutations([1, 2, 3]) if is_represented_by(p, tree)}
        # brute force: 1 and 2 adjacent
        expected = {p for p in itertools.permutations([1, 2, 3]) if abs(p.index(1) - p.index(2)) == 1}
        assert accepted == expected == {(1, 2, 3), (2, 1, 3), (3, 1, 2), (3, 2, 1)}


class TestAlternation:
    def test_interleaved(self) -> None:
        assert not page_alternation_free((1, 2, 3, 4), [(1, 3), (2, 4)])

    def test_nested(self) -> None:
        assert page_alternation_free((1, 2, 4, 3), [(1, 3), (2, 4)])

    def test_empty_page(self) -> None:
        assert page_alternation_free((4, 1, 3, 2), [])

    def test_shared_endpoint_is_not_a_crossing(self) -> None:
        assert page_alternation_free((1, 2, 3), [(1, 2), (1, 3), (2, 3)])


class TestStructure:
    def test_k4(self) -> None:
        flags = structural_predicates(complete(4))
        assert flags.triconnected and not flags.series_parallel

    def test_path_is_caterpillar(self) -> None:
        flags = structural_predicates(graph([(0, 1), (1, 2), (2, 3)]))
        assert flags.is_caterpillar and flags.is_tree and not flags.biconnected

    def test_triangle_with_pendant(self) -> None:
        flags = structural_predicates(graph([(0, 1), (1, 2), (0, 2), (2, 3)]))
        assert flags.is_pseudo_tree and not flags.is_tree

    def test_cycle_is_series_parallel(self) -> None:
        flags = structural_predicates(graph([(0, 1), (1, 2), (2, 3), (0, 3)]))
        assert flags.biconnected and flags.series_parallel and not flags.triconnected

    def test_spider_is_not_caterpillar(self) -> None:
        spider = graph([(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)])
        assert not structural_predicates(spider).is_caterpillar


class TestTBiconnected:
    @pytest.mark.parametrize(
        "page, expected",
        [([(1, 2), (2, 3), (3, 4)], True), ([(1, 2)], False), ([(1, 2), (3, 4)], False)],
    )
    def test_star_pages(self, page: list[tuple[int, int]], expected: bool) -> None:
        inst = PtbeInstance.build(LeafTree.star([1, 2, 3, 4]), [page])
        assert is_t_biconnected(inst, 0) is expected


class TestLeafExpand:
    def test_leaf_edges_unchanged(self) -> None:
        shared = graph([(0, 1), (0, 2), (0, 3)])
        inst = SunflowerSefeInstance(shared, (edges_of([(1, 2)]), edges_of([(2, 3)])))
        out = leaf_expand(inst)
        assert out.tree.graph == shared
        assert out.pages == inst.privates

    def test_internal_endpoint_gets_fresh_leaf(self) -> None:
        shared = graph([(0, 1), (0, 2), (0, 4), (4, 3), (4, 5)])
        inst = SunflowerSefeInstance(shared, (edges_of([(4, 1)]),))
        out = leaf_expand(inst)
        assert out.tree.graph.edges == shared.edges | {(4, 6)}
        assert out.pages == (edges_of([(1, 6)]),)


class TestIntersection:
    def test_identical(self) -> None:
        g = complete(4)
        assert intersection_graph(g, g) == g

    def test_disjoint(self) -> None:
        g = intersection_graph(graph([(0, 1)], [2]), graph([(1, 2)], [0]))
        assert g.edges == frozenset() and g.vertices == {0, 1, 2}

    def test_triangle_and_edge(self) -> None:
        g = intersection_graph(graph([(0, 1), (1, 2), (0, 2)]), graph([(0, 1)], [2]))
        assert g.edges == {(0, 1)} and g.degree(2) == 0


class TestInvariants:
    def test_duplicate_edge(self) -> None:
        with pytest.raises(InvariantViolation):
            graph([(0, 1), (1, 0)])

    def test_self_loop(self) -> None:
        with pytest.raises(InvariantViolation):
            graph([(0, 0)])

    def test_tree_needs_tree(self) -> None:
        with pytest.raises(InvariantViolation):
            LeafTree(complete(3))

    def test_page_on_internal_vertex(self) -> None:
        with pytest.raises(InvariantViolation):
            PtbeInstance.build(LeafTree.star([1, 2, 3], center=0), [[(0, 1)]])

    def test_edge_in_two_privates(self) -> None:
        with pytest.raises(InvariantViolation):
            SunflowerSefeInstance(graph([(0, 1), (1, 2)]), (edges_of([(0, 2)]), edges_of([(0, 2)])))


SAMPLES = [
    graph([(0, 1), (1, 2)]),
    LeafTree.build([(3, 2), (3, 4), (4, 0), (4, 1)], root=3),
    PtbeInstance.build(LeafTree.star([0, 1, 2, 3]), [[(0, 1), (1, 2), (2, 3)], [(0, 2)], []]),
    SunflowerSefeInstance(graph([(0, 1), (0, 2), (0, 3)]), (edges_of([(1, 2)]), edges_of([(2, 3)]))),
    BetweennessInstance((0, 1, 2), ((0, 1, 2), (2, 0, 1))),
    XorSatInstance((0, 1, 2), (((0, True), (1, False)), ((1, True), (2, True))), 1),
    PstInstance(complete(3), {(0, 1): 1, (1, 2): 1, (0, 2): 2}, frozenset({0, 2}), 2),
    MaxSefeInstance(graph([(0, 1), (1, 2)]), graph([(0, 1), (0, 2)]), 1),
]


class TestDocuments:
    @pytest.mark.parametrize("value", SAMPLES, ids=lambda v: type(v).__name__)
    def test_round_trip(self, value: object) -> None:
        text = io.dumps(io.encode(value))  # type: ignore[arg-type]
        assert io.loads(text).value == value

    def test_labels_survive(self) -> None:
        doc = io.encode(graph([(0, 1)]), ["a", "b"])
        back = io.decode(doc)
        assert back.label(1) == "b" and back.index() == {"a": 0, "b": 1}

    def test_duplicate_edge_is_invariant_error(self) -> None:
        doc = {"kind": "graph", "version": 1, "vertices": ["a", "b"], "edges": [["a", "b"], ["b", "a"]]}
        with pytest.raises(MalformedDocument) as info:
            io.decode(doc)
        assert isinstance(info.value.__cause__, InvariantViolation) or "duplicate" in str(info.value)

    def test_unknown_kind(self) -> None:
        with pytest.raises(UnknownKind):
            io.decode({"kind": "hypergraph", "version": 1})

    def test_unknown_field(self) -> None:
        doc = io.encode(graph([(0, 1)]))
        doc["colour"] = "red"
        with pytest.raises(MalformedDocument):
            io.decode(doc)

    def test_sparse_ids_rejected(self) -> None:
        with pytest.raises(InvariantViolation):
            io.encode(grouping_tree())

    def test_bad_json(self) -> None:
        with pytest.raises(MalformedDocument):
            io.loads("{not json")

    def test_error_types_are_distinct(self) -> None:
        assert not issubclass(UnknownKind, MalformedDocument)
        assert not issubclass(MalformedDocument, UnknownKind)
