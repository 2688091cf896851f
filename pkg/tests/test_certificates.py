from __future__ import annotations

from conftest import complete, edges_of, graph
from ptbe.certificates import SefeCertificate, check_maxsefe_certificate, check_ptbe_certificate, check_sefe_certificate
from ptbe.model import LeafTree, MaxSefeInstance, PtbeInstance, SunflowerSefeInstance, XorSatInstance
from ptbe.planarity import RotationSystem, planar_embedding
from ptbe.reductions import assignment_to_certificate, xorsat_to_maxsefe

TREE = LeafTree.build([(0, 5), (0, 6), (5, 1), (5, 2), (6, 3), (6, 4)], root=0)


class TestPtbeCertificate:
    def test_accepts(self) -> None:
        inst = PtbeInstance.build(TREE, [[(1, 2), (2, 3), (3, 4)], [(1, 4)]])
        assert check_ptbe_certificate(inst, (1, 2, 3, 4))

    def test_block_split(self) -> None:
        inst = PtbeInstance.build(TREE, [[]])
        res = check_ptbe_certificate(inst, (1, 3, 2, 4))
        assert not res and res.reason == "not_represented"

    def test_crossing_named(self) -> None:
        inst = PtbeInstance.build(TREE, [[(1, 3), (2, 4)]])
        res = check_ptbe_certificate(inst, (1, 2, 3, 4))
        assert not res and res.reason == "page_crossing"
        assert res.detail["page"] == 0 and sorted(map(tuple, res.detail["edges"])) == [(1, 3), (2, 4)]  # type: ignore[arg-type]

    def test_wrong_labels(self) -> None:
        inst = PtbeInstance.build(TREE, [[]])
        assert check_ptbe_certificate(inst, (1, 2, 3)).reason == "label_mismatch"


def _k4_rotations() -> RotationSystem:
    rot = planar_embedding(complete(4))
    assert rot is not None
    return rot


class TestSefeCertificate:
    def test_identical(self) -> None:
        g = complete(4)
        inst = SunflowerSefeInstance(g, (frozenset(), frozenset()))
        rot = _k4_rotations()
        assert check_sefe_certificate(inst, SefeCertificate((rot, rot)))

    def test_genus_one(self) -> None:
        inst = SunflowerSefeInstance(complete(4), (frozenset(), frozenset()))
        rot = _k4_rotations()
        res = check_sefe_certificate(inst, SefeCertificate((rot, rot.reversed_at([0]))))
        assert not res and res.reason == "not_planar"

    def test_disagreeing_embeddings(self) -> None:
        # two adjacent degree-3 vertices: reversing only one changes the embedding
        shared = graph([(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)])
        inst = SunflowerSefeInstance(shared, (frozenset(), frozenset()))
        rot = RotationSystem({0: (1, 2, 3), 1: (0, 4, 5), 2: (0,), 3: (0,), 4: (1,), 5: (1,)})
        assert check_sefe_certificate(inst, SefeCertificate((rot, rot.reversed())))
        res = check_sefe_certificate(inst, SefeCertificate((rot, rot.reversed_at([1]))))
        assert not res and res.reason == "rotation_mismatch"

    def test_private_edges_change_nothing_shared(self) -> None:
        shared = graph([(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)])
        inst = SunflowerSefeInstance(shared, (edges_of([(2, 4)]), edges_of([(3, 5)])))
        r1, r2 = planar_embedding(inst.graph(0)), planar_embedding(inst.graph(1))
        assert r1 is not None and r2 is not None
        res = check_sefe_certificate(inst, SefeCertificate((r1, r2)))
        # both graphs fix the rotations at 0 and 1 only up to the private edge
        assert res.ok or res.reason == "orientation_conflict"


class TestMaxSefeCertificate:
    def test_exact_case(self) -> None:
        g = complete(4)
        rot = _k4_rotations()
        assert check_maxsefe_certificate(MaxSefeInstance(g, g), SefeCertificate((rot, rot)))

    def test_over_budget(self) -> None:
        g = complete(4)
        rot = _k4_rotations()
        res = check_maxsefe_certificate(MaxSefeInstance(g, g, 0), SefeCertificate((rot, rot), edges_of([(0, 1)])))
        assert res.reason == "over_budget"

    def test_violated_must_be_shared(self) -> None:
        g = complete(4)
        rot = _k4_rotations()
        res = check_maxsefe_certificate(MaxSefeInstance(g, g, 5), SefeCertificate((rot, rot), edges_of([(0, 9)])))
        assert res.reason == "violated_not_shared"

    def test_xorsat_satisfiable(self) -> None:
        inst = XorSatInstance((0, 1, 2), (((0, True), (1, True)), ((1, True), (2, False))))
        out = xorsat_to_maxsefe(inst)
        cert = assignment_to_certificate(out, {0: True, 1: False, 2: False})
        assert cert.violated == frozenset()
        assert check_maxsefe_certificate(out.instance, cert)
