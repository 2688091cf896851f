from __future__ import annotations

import itertools
import random
from typing import Collection, Iterable

import pytest

from conftest import grouping_tree
from ptbe.errors import GuardExceeded, InputError
from ptbe.generators import random_leaf_tree
from ptbe.model import LeafTree, is_represented_by
from ptbe.pqtree import (
    PQTree,
    contains_order,
    frontier_count,
    frontier_enumerate,
    from_leaf_tree,
    intersect,
    parse_text,
    reduce,
    reduce_all,
    representative_graph,
    to_text,
    universal,
)


def consecutive(order: tuple[int, ...], s: Collection[int]) -> bool:
    pos = sorted(order.index(x) for x in s)
    return not pos or pos[-1] - pos[0] == len(pos) - 1


def filtered(labels: Iterable[int], sets: Iterable[Collection[int]]) -> set[tuple[int, ...]]:
    sets = list(sets)
    return {p for p in itertools.permutations(sorted(labels)) if all(consecutive(p, s) for s in sets)}


def frontier(t: PQTree) -> set[tuple[int, ...]]:
    return set(frontier_enumerate(t))


class TestUniversal:
    def test_single_leaf(self) -> None:
        assert frontier_enumerate(universal([7])) == [(7,)]

    @pytest.mark.parametrize("n, count", [(3, 6), (4, 24)])
    def test_sizes(self, n: int, count: int) -> None:
        t = universal(range(n))
        assert frontier_count(t) == count == len(frontier(t))

    def test_empty_rejected(self) -> None:
        with pytest.raises(InputError):
            universal([])


class TestReduce:
    def test_one_pair(self) -> None:
        t = reduce(universal(range(4)), {0, 1})
        assert frontier(t) == filtered(range(4), [{0, 1}])
        assert len(frontier(t)) == 12

    def test_chain_becomes_q_node(self) -> None:
        t = reduce(reduce(universal(range(3)), {0, 1}), {1, 2})
        assert frontier(t) == {(0, 1, 2), (2, 1, 0)}

    def test_infeasible(self) -> None:
        t = reduce_all(universal(range(4)), [{0, 1}, {1, 2}, {0, 2}])
        assert t.is_null and frontier(t) == filtered(range(4), [{0, 1}, {1, 2}, {0, 2}]) == set()

    def test_unknown_label(self) -> None:
        with pytest.raises(InputError):
            reduce(universal(range(3)), {5})

    def test_random_sequences(self) -> None:
        rng = random.Random(11)
        for _ in range(200):
            n = rng.randint(2, 6)
            sets = [set(rng.sample(range(n), rng.randint(1, n))) for _ in range(rng.randint(1, 4))]
            t = universal(range(n))
            for s in sets:
                t = reduce(t, s)
            assert frontier(t) == filtered(range(n), sets)
            assert frontier_count(t) == len(frontier(t))


class TestIntersect:
    def test_identity_and_idempotence(self) -> None:
        t = reduce(universal(range(5)), {1, 3})
        assert frontier(intersect(t, universal(range(5)))) == frontier(t)
        assert frontier(intersect(t, t)) == frontier(t)

    def test_two_constraints(self) -> None:
        t1 = reduce(universal(range(3)), {0, 1})
        t2 = reduce(universal(range(3)), {1, 2})
        assert frontier(intersect(t1, t2)) == {(0, 1, 2), (2, 1, 0)}

    def test_label_mismatch(self) -> None:
        with pytest.raises(InputError):
            intersect(universal(range(3)), universal(range(4)))

    def test_random_pairs(self) -> None:
        rng = random.Random(12)
        for _ in range(100):
            n = rng.randint(2, 6)
            trees = []
            for _ in range(2):
                t = universal(range(n))
                for _ in range(rng.randint(0, 3)):
                    t = reduce(t, set(rng.sample(range(n), rng.randint(2, n))))
                trees.append(t)
            assert frontier(intersect(*trees)) == frontier(trees[0]) & frontier(trees[1])


class TestFromLeafTree:
    def test_star(self) -> None:
        assert from_leaf_tree(LeafTree.star([0, 1, 2])) == universal([0, 1, 2])

    def test_grouping(self) -> None:
        t = from_leaf_tree(grouping_tree())
        assert len(frontier(t)) == 4

    def test_matches_representation(self) -> None:
        rng = random.Random(13)
        for _ in range(60):
            tree = random_leaf_tree(rng, rng.randint(2, 7))
            expected = {p for p in itertools.permutations(sorted(tree.leaves)) if is_represented_by(p, tree)}
            assert frontier(from_leaf_tree(tree)) == expected

    def test_anchor_must_be_leaf(self) -> None:
        tree = grouping_tree()
        with pytest.raises(InputError):
            from_leaf_tree(tree, anchor=tree.root)


class TestFrontier:
    def test_q_node(self) -> None:
        assert frontier(parse_text("Q[0 1 2]")) == {(0, 1, 2), (2, 1, 0)}

    def test_counts_multiply(self) -> None:
        t = parse_text("P(0 Q[1 2 3] P(4 5))")
        assert frontier_count(t) == 6 * 2 * 2 == len(frontier(t))

    def test_cap(self) -> None:
        with pytest.raises(GuardExceeded):
            frontier_enumerate(universal(range(6)), cap=100)

    def test_membership_agrees(self) -> None:
        t = parse_text("P(0 Q[1 2 3] P(4 5))")
        members = frontier(t)
        for p in itertools.permutations(range(6)):
            assert contains_order(t, p) == (p in members)

    def test_text_round_trip(self) -> None:
        t = parse_text("Q[P(0 1) 2 P(3 Q[4 5 6])]")
        assert parse_text(to_text(t)) == t
        assert to_text(reduce_all(t, [{0, 2}, {1, 2}, {0, 1}])) == "NULL"

    def test_canonical_equality(self) -> None:
        assert parse_text("P(2 1 0)") == parse_text("P(0 1 2)")
        assert parse_text("Q[2 1 0]") == parse_text("Q[0 1 2]")


class TestRepresentativeGraph:
    def test_q_node_is_wheel(self) -> None:
        rep = representative_graph(parse_text("Q[0 1 2]"))
        g = rep.graph
        assert len(g.vertices) == 7
        pendants = [v for v in g.vertices if g.degree(v) == 1]
        assert sorted(pendants) == sorted(rep.leaf_vertex.values())
        # centre 3, rim vertices 4 (two rim neighbours, centre, pendant)
        assert sorted(g.degree(v) for v in g.vertices) == [1, 1, 1, 3, 4, 4, 4]
        assert len(g.edges) == 9

    def test_p_node_is_cut_vertex(self) -> None:
        rep = representative_graph(parse_text("P(0 1 2)"))
        g = rep.graph
        assert len(g.vertices) == 4 and len(g.edges) == 3
        assert sorted(g.degree(v) for v in g.vertices) == [1, 1, 1, 3]

    def test_pendants_are_leaves(self) -> None:
        t = parse_text("P(0 Q[1 P(2 3) 4] Q[5 6 P(7 8 9)])")
        rep = representative_graph(t)
        pendants = {v for v in rep.graph.vertices if rep.graph.degree(v) == 1}
        assert pendants == set(rep.leaf_vertex.values())
        assert set(rep.leaf_vertex) == t.labels

    def test_null_rejected(self) -> None:
        with pytest.raises(InputError):
            representative_graph(reduce_all(universal(range(4)), [{0, 1}, {1, 2}, {0, 2}]))
