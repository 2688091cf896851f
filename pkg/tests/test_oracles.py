from __future__ import annotations

import itertools

import pytest

from conftest import complete, graph
from ptbe.errors import GuardExceeded, UnsupportedInstance
from ptbe.model import BetweennessInstance, LeafTree, MaxSefeInstance, PstInstance, PtbeInstance, XorSatInstance
from ptbe.oracles import (
    FlipModel,
    betweenness_brute,
    has_k4_minor_brute,
    maxsefe_flip_brute,
    ptbe_brute,
    steiner_brute,
    steiner_exact,
    xorsat_max_brute,
)
from ptbe.planarity import planar_embedding
from ptbe.reductions import xorsat_to_maxsefe


class TestBetweenness:
    def test_single_triple(self) -> None:
        assert betweenness_brute(BetweennessInstance((1, 2, 3), ((1, 2, 3),))) == (1, 2, 3)

    def test_contradiction(self) -> None:
        inst = BetweennessInstance((1, 2, 3), ((1, 2, 3), (2, 1, 3), (1, 3, 2)))
        assert betweenness_brute(inst) is None

    def test_no_triples(self) -> None:
        assert betweenness_brute(BetweennessInstance((1, 2, 3), ())) == (1, 2, 3)

    def test_guard(self) -> None:
        with pytest.raises(GuardExceeded):
            betweenness_brute(BetweennessInstance(tuple(range(12)), ()), guard=10)


class TestPtbe:
    def test_path(self) -> None:
        inst = PtbeInstance.build(LeafTree.star([1, 2, 3, 4], center=0), [[(1, 2), (2, 3), (3, 4)]])
        assert ptbe_brute(inst) is not None

    def test_k4(self) -> None:
        inst = PtbeInstance.build(LeafTree.star([1, 2, 3, 4], center=0), [itertools.combinations([1, 2, 3, 4], 2)])
        assert ptbe_brute(inst) is None

    def test_empty_pages(self) -> None:
        inst = PtbeInstance.build(LeafTree.star([1, 2, 3], center=0), [[]])
        assert ptbe_brute(inst) is not None


class TestXorSat:
    def test_satisfiable(self) -> None:
        inst = XorSatInstance((1, 2), (((1, True), (2, True)),))
        assert xorsat_max_brute(inst).min_unsat == 0

    def test_contradiction(self) -> None:
        inst = XorSatInstance((1, 2), (((1, True), (2, True)), ((1, True), (2, False))))
        opt = xorsat_max_brute(inst)
        assert opt.min_unsat == 1 and inst.unsatisfied(opt.assignment) == 1

    def test_empty(self) -> None:
        assert xorsat_max_brute(XorSatInstance((1,), ())).min_unsat == 0


class TestSteiner:
    def test_adjacent_terminals(self) -> None:
        g = graph([(0, 1)])
        assert steiner_brute(PstInstance(g, {(0, 1): 1}, frozenset({0, 1}), 0)).weight == 1

    def test_triangle_detour(self) -> None:
        inst = PstInstance(complete(3), {(0, 1): 1, (1, 2): 1, (0, 2): 2}, frozenset({0, 2}), 0)
        for solve in (steiner_brute, steiner_exact):
            res = solve(inst)
            assert res.weight == 2
        assert steiner_brute(inst).edges in ({(0, 1), (1, 2)}, {(0, 2)})

    def test_single_terminal(self) -> None:
        res = steiner_brute(PstInstance(complete(3), {e: 1 for e in complete(3).edges}, frozenset({1}), 0))
        assert res.weight == 0 and res.edges == frozenset()

    def test_exact_matches_brute(self) -> None:
        g = graph([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (3, 4), (4, 1)])
        weights = {e: 1 + (e[0] + 2 * e[1]) % 3 for e in g.edges}
        for terms in itertools.combinations(range(5), 3):
            inst = PstInstance(g, weights, frozenset(terms), 0)
            assert steiner_exact(inst).weight == steiner_brute(inst).weight


class TestFlips:
    def test_identical_embeddings(self) -> None:
        # a shared triangle; vertex 3 (first graph) and 4 (second) fix its sides
        g1 = graph([(0, 1), (1, 2), (0, 2), (3, 0), (3, 1)], [4])
        g2 = graph([(0, 1), (1, 2), (0, 2), (4, 1), (4, 2)], [3])
        r1, r2 = planar_embedding(g1), planar_embedding(g2)
        assert r1 is not None and r2 is not None
        whole = frozenset(range(5))
        assert maxsefe_flip_brute(MaxSefeInstance(g1, g2), FlipModel((r1, r2), ((), (whole,)))).min_violations == 0
        rigid = [FlipModel((r1, r), ((), ())) for r in (r2, r2.reversed())]
        found = sorted(maxsefe_flip_brute(MaxSefeInstance(g1, g2), m).min_violations for m in rigid)
        assert found == [0, 1]

    def test_satisfiable_formula(self) -> None:
        out = xorsat_to_maxsefe(XorSatInstance((1, 2), (((1, True), (2, False)),)))
        assert maxsefe_flip_brute(out.instance, out.data["model"]).min_violations == 0  # type: ignore[arg-type]

    def test_contradiction(self) -> None:
        inst = XorSatInstance((1, 2), (((1, True), (2, True)), ((1, True), (2, False))))
        out = xorsat_to_maxsefe(inst)
        res = maxsefe_flip_brute(out.instance, out.data["model"])  # type: ignore[arg-type]
        assert res.min_violations == 1 == xorsat_max_brute(inst).min_unsat

    def test_needs_triangles(self) -> None:
        g = graph([(0, 1), (1, 2), (2, 3), (0, 3)])
        rot = planar_embedding(g)
        assert rot is not None
        with pytest.raises(UnsupportedInstance):
            maxsefe_flip_brute(MaxSefeInstance(g, g), FlipModel((rot, rot), ((), ())))


class TestMinorOracle:
    def test_k4_and_cycle(self) -> None:
        assert has_k4_minor_brute(complete(4))
        assert not has_k4_minor_brute(graph([(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]))
