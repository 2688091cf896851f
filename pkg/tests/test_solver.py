from __future__ import annotations

import itertools
import random

import pytest

from ptbe.certificates import check_ptbe_certificate
from ptbe.errors import InputError, UnsupportedInstance
from ptbe.generators import random_ptbe
from ptbe.model import LeafTree, PtbeInstance
from ptbe.oracles import ptbe_brute
from ptbe.solver import backtracking_solve, build_aux_graph, solve, solve_any, supported_free_pages

STAR4 = LeafTree.star([1, 2, 3, 4], center=0)
PATH = [(1, 2), (2, 3), (3, 4)]
K4 = list(itertools.combinations([1, 2, 3, 4], 2))


class TestAuxGraph:
    def test_counts(self) -> None:
        inst = PtbeInstance.build(LeafTree.star([1, 2, 3], center=0), [[(1, 2), (2, 3)]])
        g, apex = build_aux_graph(inst, 0)
        assert len(g.vertices) == 4 and len(g.edges) == 5
        assert g.degree(apex) == 3

    def test_apex_degree_is_leaf_count(self) -> None:
        inst = PtbeInstance.build(STAR4, [PATH])
        g, apex = build_aux_graph(inst, 0)
        assert g.degree(apex) == 4 and apex not in STAR4.graph.vertices

    def test_needs_t_biconnected_page(self) -> None:
        inst = PtbeInstance.build(STAR4, [[(1, 2)]])
        with pytest.raises(UnsupportedInstance):
            build_aux_graph(inst, 0)


class TestSolve:
    def test_yes(self) -> None:
        inst = PtbeInstance.build(STAR4, [PATH, [(1, 3)]])
        res = solve(inst, 1)
        assert res.verdict and res.answer == "YES"
        assert res.order is not None and check_ptbe_certificate(inst, res.order)
        assert ptbe_brute(inst) is not None

    def test_k4_page_is_no(self) -> None:
        inst = PtbeInstance.build(STAR4, [K4, []])
        res = solve(inst, 1)
        assert not res.verdict and res.order is None
        assert ptbe_brute(inst) is None
        assert res.trace.null_step == "step2"

    def test_single_page(self) -> None:
        inst = PtbeInstance.build(STAR4, [PATH])
        res = solve(inst, 0)
        assert res.verdict and res.order is not None and check_ptbe_certificate(inst, res.order)

    def test_free_page_decides(self) -> None:
        # page 0 forces the cyclic order 1 2 3 4; chords 1-3 and 2-4 then cross
        inst = PtbeInstance.build(STAR4, [PATH + [(1, 4)], [(1, 3), (2, 4)]])
        res = solve(inst, 1)
        assert not res.verdict and res.trace.planar is False

    def test_tree_constraint_decides(self) -> None:
        tree = LeafTree.build([(0, 5), (0, 6), (5, 1), (5, 3), (6, 2), (6, 4)], root=0)
        inst = PtbeInstance.build(tree, [PATH + [(1, 4)], []])
        assert not solve(inst, 1).verdict
        assert ptbe_brute(inst) is None

    def test_bad_free_page(self) -> None:
        inst = PtbeInstance.build(STAR4, [PATH])
        with pytest.raises(InputError):
            solve(inst, 3)

    def test_two_loose_pages_unsupported(self) -> None:
        inst = PtbeInstance.build(STAR4, [[(1, 2)], [(3, 4)]])
        assert supported_free_pages(inst) == []
        with pytest.raises(UnsupportedInstance):
            solve_any(inst)

    def test_trace_summary(self) -> None:
        inst = PtbeInstance.build(STAR4, [PATH, [(1, 3)]])
        summary = solve(inst, 1).trace.summary()
        assert summary["null_step"] is None and summary["h_planar"] is True

    def test_agrees_with_brute_force(self) -> None:
        rng = random.Random(31)
        for _ in range(150):
            k = rng.choice([2, 3])
            inst = random_ptbe(rng, rng.randint(3, 7), k, planted=rng.random() < 0.5)
            res = solve(inst, k - 1)
            assert res.verdict == (ptbe_brute(inst) is not None)
            if res.order is not None:
                assert check_ptbe_certificate(inst, res.order)


class TestBacktracking:
    def test_budget_zero(self) -> None:
        res = backtracking_solve(PtbeInstance.build(STAR4, [PATH]), node_budget=0)
        assert res.status == "BUDGET" and res.order is None

    def test_agrees_with_solver(self) -> None:
        rng = random.Random(32)
        for _ in range(60):
            k = rng.choice([2, 3])
            inst = random_ptbe(rng, rng.randint(3, 7), k, planted=rng.random() < 0.5)
            res = backtracking_solve(inst)
            assert res.status == solve(inst, k - 1).answer
            if res.order is not None:
                assert check_ptbe_certificate(inst, res.order)

    def test_handles_loose_pages(self) -> None:
        inst = PtbeInstance.build(STAR4, [[(1, 3)], [(2, 4)], [(1, 2)]])
        res = backtracking_solve(inst)
        assert res.status == "YES" and res.order is not None and check_ptbe_certificate(inst, res.order)
