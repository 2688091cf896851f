from __future__ import annotations

import itertools
import json
from pathlib import Path
from typing import Any

import pytest
from click.testing import CliRunner, Result

from conftest import complete
from ptbe import cli, io
from ptbe.errors import ValidationFailure
from ptbe.model import BetweennessInstance, LeafTree, PstInstance, PtbeInstance, XorSatInstance

STAR = LeafTree.star([0, 1, 2, 3], center=4)
PATH = [(0, 1), (1, 2), (2, 3)]


def run(*args: str) -> Result:
    return CliRunner().invoke(cli.main, list(args), catch_exceptions=False)


def write(tmp_path: Path, name: str, doc: dict[str, Any]) -> str:
    path = tmp_path / name
    path.write_text(io.dumps(doc))
    return str(path)


def instance(tmp_path: Path, value: Any, name: str = "in.json") -> str:
    return write(tmp_path, name, io.encode(value))


class TestSolve:
    def test_yes_and_verify(self, tmp_path: Path) -> None:
        src = instance(tmp_path, PtbeInstance.build(STAR, [PATH, [(0, 2)]]))
        res = run("solve", "--in", src, "--free-page", "1")
        assert res.exit_code == 0
        verdict = json.loads(res.output)
        assert verdict["answer"] == "YES"
        cert = write(tmp_path, "cert.json", {"kind": "certificate", "version": 1, "order": verdict["order"]})
        assert run("verify", "--in", src, "--cert", cert).exit_code == 0

    def test_verdict_accepted_as_certificate(self, tmp_path: Path) -> None:
        src = instance(tmp_path, PtbeInstance.build(STAR, [PATH, [(0, 2)]]))
        verdict = tmp_path / "verdict.json"
        verdict.write_text(run("solve", "--in", src, "--free-page", "1").output)
        assert run("verify", "--in", src, "--cert", str(verdict)).exit_code == 0

    def test_no_verdict_is_not_a_certificate(self, tmp_path: Path) -> None:
        src = instance(tmp_path, PtbeInstance.build(STAR, [itertools.combinations(range(4), 2), []]))
        verdict = tmp_path / "verdict.json"
        verdict.write_text(run("solve", "--in", src, "--free-page", "1").output)
        assert run("verify", "--in", src, "--cert", str(verdict)).exit_code == 3

    def test_no(self, tmp_path: Path) -> None:
        src = instance(tmp_path, PtbeInstance.build(STAR, [itertools.combinations(range(4), 2), []]))
        res = run("solve", "--in", src, "--free-page", "1")
        assert res.exit_code == 1 and json.loads(res.output)["answer"] == "NO"

    def test_single_page(self, tmp_path: Path) -> None:
        res = run("solve", "--in", instance(tmp_path, PtbeInstance.build(STAR, [PATH])))
        assert res.exit_code == 0

    def test_trace(self, tmp_path: Path) -> None:
        src = instance(tmp_path, PtbeInstance.build(STAR, [PATH, [(0, 2)]]))
        res = run("solve", "--in", src, "--emit-trace")
        assert "trace" in json.loads(res.output)

    def test_unsupported(self, tmp_path: Path) -> None:
        src = instance(tmp_path, PtbeInstance.build(STAR, [[(0, 1)], [(2, 3)]]))
        assert run("solve", "--in", src).exit_code == 2

    def test_wrong_kind(self, tmp_path: Path) -> None:
        src = instance(tmp_path, BetweennessInstance((0, 1, 2), ()))
        assert run("solve", "--in", src).exit_code == 3

    def test_malformed(self, tmp_path: Path) -> None:
        doc = io.encode(PtbeInstance.build(STAR, [PATH]))
        doc["extra"] = 1
        assert run("solve", "--in", write(tmp_path, "bad.json", doc)).exit_code == 3


class TestBrute:
    def test_betweenness(self, tmp_path: Path) -> None:
        no = instance(tmp_path, BetweennessInstance((0, 1, 2), ((0, 1, 2), (1, 0, 2))), "no.json")
        yes = instance(tmp_path, BetweennessInstance((0, 1, 2), ((0, 1, 2),)), "yes.json")
        assert run("brute", "--problem", "betweenness", "--in", no).exit_code == 1
        res = run("brute", "--problem", "betweenness", "--in", yes)
        assert res.exit_code == 0 and json.loads(res.output)["order"] == ["0", "1", "2"]

    def test_budget_zero(self, tmp_path: Path) -> None:
        yes = instance(tmp_path, BetweennessInstance((0, 1, 2), ((0, 1, 2),)))
        assert run("brute", "--problem", "betweenness", "--in", yes, "--budget", "0").exit_code == 4

    def test_steiner(self, tmp_path: Path) -> None:
        g = complete(3)
        src = instance(tmp_path, PstInstance(g, {(0, 1): 1, (1, 2): 1, (0, 2): 2}, frozenset({0, 2}), 2))
        assert run("brute", "--problem", "steiner", "--in", src).exit_code == 0

    def test_xorsat_flips(self, tmp_path: Path) -> None:
        f = XorSatInstance((0, 1), (((0, True), (1, True)), ((0, True), (1, False))), 0)
        src = instance(tmp_path, f)
        assert run("brute", "--problem", "xorsat", "--in", src).exit_code == 1
        assert run("brute", "--problem", "maxsefe-flip", "--in", src).exit_code == 1

    def test_problem_kind_mismatch(self, tmp_path: Path) -> None:
        src = instance(tmp_path, BetweennessInstance((0, 1, 2), ()))
        assert run("brute", "--problem", "ptbe", "--in", src).exit_code == 3


class TestReduce:
    def test_pbe3(self, tmp_path: Path) -> None:
        src = instance(tmp_path, BetweennessInstance((0, 1, 2), ((0, 1, 2),)))
        out, prov = tmp_path / "out.json", tmp_path / "prov.json"
        res = run("reduce", "--from", "betweenness", "--to", "pbe3", "--in", src, "--out", str(out), "--provenance", str(prov))
        assert res.exit_code == 0
        target = io.load(out).value
        assert isinstance(target, PtbeInstance) and len(target.tree.internal) == 1
        assert json.loads(prov.read_text())["names"][-1] == "phi"

    def test_xorsat(self, tmp_path: Path) -> None:
        src = instance(tmp_path, XorSatInstance((0, 1), (((0, True), (1, True)),)))
        res = run("reduce", "--from", "xorsat", "--to", "maxsefe", "--in", src)
        shared = io.loads(res.output).value.shared
        assert sum(1 for c in shared.components() if len(c) == 3) == 2

    def test_unknown_pair(self, tmp_path: Path) -> None:
        src = instance(tmp_path, BetweennessInstance((0, 1, 2), ((0, 1, 2),)))
        res = CliRunner().invoke(cli.main, ["reduce", "--from", "betweenness", "--to", "steiner", "--in", src])
        assert res.exit_code == 2

    def test_chain(self, tmp_path: Path) -> None:
        g = complete(4)
        src = instance(tmp_path, PstInstance(g, {e: 1 for e in g.edges}, frozenset({0, 1}), 1))
        mid, last = tmp_path / "mid.json", tmp_path / "last.json"
        assert run("reduce", "--from", "utpst", "--to", "maxsefe", "--in", src, "--out", str(mid)).exit_code == 0
        assert run("reduce", "--from", "maxsefe", "--to", "subcubic", "--in", str(mid), "--out", str(last)).exit_code == 0
        shared = io.load(last).value.shared
        assert max(shared.degree(v) for v in shared.vertices) <= 3

    def test_validation_failure(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        def broken(value: Any) -> Any:
            raise ValidationFailure("claim broken")

        monkeypatch.setitem(cli._REDUCTIONS, ("betweenness", "pbe3"), ("betweenness", broken))
        src = instance(tmp_path, BetweennessInstance((0, 1, 2), ((0, 1, 2),)))
        res = CliRunner().invoke(cli.main, ["reduce", "--from", "betweenness", "--to", "pbe3", "--in", src])
        assert res.exit_code == 5 and "claim broken" in res.output


class TestVerify:
    def test_tampered_order(self, tmp_path: Path) -> None:
        src = instance(tmp_path, PtbeInstance.build(STAR, [PATH, [(0, 2), (1, 3)]]))
        cert = write(tmp_path, "c.json", {"kind": "certificate", "version": 1, "order": ["0", "1", "2", "3"]})
        res = run("verify", "--in", src, "--cert", cert)
        assert res.exit_code == 1 and json.loads(res.output)["detail"]["reason"] == "page_crossing"

    def test_genus_one_rotation(self, tmp_path: Path) -> None:
        g = complete(4)
        from ptbe.model import SunflowerSefeInstance

        src = instance(tmp_path, SunflowerSefeInstance(g, (frozenset(),)))
        rot = {str(v): [str(w) for w in sorted(set(range(4)) - {v})] for v in range(4)}
        cert = write(tmp_path, "c.json", {"kind": "certificate", "version": 1, "rotations": [rot]})
        res = run("verify", "--in", src, "--cert", cert)
        assert res.exit_code == 1 and json.loads(res.output)["detail"]["reason"] == "not_planar"

    def test_assignment(self, tmp_path: Path) -> None:
        src = instance(tmp_path, XorSatInstance((0, 1), (((0, True), (1, True)),)))
        good = write(tmp_path, "g.json", {"kind": "certificate", "version": 1, "assignment": {"0": True, "1": False}})
        bad = write(tmp_path, "b.json", {"kind": "certificate", "version": 1, "assignment": {"0": True, "1": True}})
        assert run("verify", "--in", src, "--cert", good).exit_code == 0
        assert run("verify", "--in", src, "--cert", bad).exit_code == 1

    def test_missing_field(self, tmp_path: Path) -> None:
        src = instance(tmp_path, PtbeInstance.build(STAR, [PATH]))
        cert = write(tmp_path, "c.json", {"kind": "certificate", "version": 1})
        assert run("verify", "--in", src, "--cert", cert).exit_code == 3


class TestGen:
    @pytest.mark.parametrize("problem", ["ptbe", "betweenness", "xorsat", "pst"])
    def test_deterministic(self, problem: str) -> None:
        args = ["gen", "--problem", problem, "--seed", "7", "--size", "6", "--count", "3"]
        first, second = run(*args), run(*args)
        assert first.exit_code == 0 and first.output == second.output
        io.loads(first.output)

    def test_seed_matters(self) -> None:
        a = run("gen", "--problem", "ptbe", "--seed", "1", "--size", "8")
        b = run("gen", "--problem", "ptbe", "--seed", "2", "--size", "8")
        assert a.output != b.output

    def test_biconnected_pages(self) -> None:
        from ptbe.model import is_t_biconnected

        res = run("gen", "--problem", "ptbe", "--seed", "3", "--size", "7", "--count", "3", "--biconnected-pages", "2")
        inst = io.loads(res.output).value
        assert is_t_biconnected(inst, 0) and is_t_biconnected(inst, 1)

    def test_bad_size(self) -> None:
        res = CliRunner().invoke(cli.main, ["gen", "--problem", "ptbe", "--size", "1"])
        assert res.exit_code != 0


class TestExportDot:
    def test_page_classes(self, tmp_path: Path) -> None:
        src = instance(tmp_path, PtbeInstance.build(STAR, [PATH, [(0, 2)], []]))
        first = run("export-dot", "--in", src)
        assert first.exit_code == 0
        for i in range(3):
            assert f'class="page{i}"' in first.output
        assert run("export-dot", "--in", src).output == first.output

    def test_empty_page_has_no_members(self, tmp_path: Path) -> None:
        src = instance(tmp_path, PtbeInstance.build(STAR, [PATH, []]))
        text = run("export-dot", "--in", src).output
        block = text[text.index('class="page1"') :]
        assert "--" not in block.split("}")[0]
