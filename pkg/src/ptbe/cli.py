"""Command-line front end: solve, brute, reduce, verify, gen and export-dot.

Exit codes: 0 YES/accept, 1 NO/reject, 2 unsupported instance, 3 input
error, 4 brute-force budget exceeded, 5 generated instance failed validation.
"""

from __future__ import annotations

import functools
import logging
import os
import random
import sys
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

import click

from . import generators, io, oracles
from .certificates import check_maxsefe_certificate, check_ptbe_certificate, check_sefe_certificate
from .errors import GuardExceeded, InputError, UnsupportedInstance, ValidationFailure
from .model import (
    BetweennessInstance,
    Graph,
    MaxSefeInstance,
    PstInstance,
    PtbeInstance,
    SunflowerSefeInstance,
    XorSatInstance,
    is_t_biconnected,
)
from .reductions import (
    betweenness_to_pbe3,
    betweenness_to_ptbe3_caterpillar,
    betweenness_to_sunflower_pseudotree,
    betweenness_to_sunflower_tree_biconnected,
    degree3_expand,
    pst_to_utpst,
    ptbe2_to_sp_biconnected,
    ptbe_to_pbe,
    sunflower_to_ptbe,
    utpst_to_maxsefe,
    xorsat_to_maxsefe,
)
from .reductions.base import ReductionOutput
from .solver import solve as run_solver
from .solver import solve_any

EXIT_YES, EXIT_NO, EXIT_UNSUPPORTED, EXIT_INPUT, EXIT_BUDGET, EXIT_VALIDATION = range(6)

log = logging.getLogger("ptbe")


class Outcome(Exception):
    """Carries a finished command's exit code through the error mapping."""

    def __init__(self, code: int) -> None:
        super().__init__(code)
        self.code = code


def _mapped(fn: Callable[..., None]) -> Callable[..., None]:
    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            fn(*args, **kwargs)
        except Outcome as o:
            sys.exit(o.code)
        except GuardExceeded as exc:
            click.echo(f"budget exceeded: {exc}", err=True)
            sys.exit(EXIT_BUDGET)
        except ValidationFailure as exc:
            click.echo(f"validation failed: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)
        except UnsupportedInstance as exc:
            click.echo(f"unsupported: {exc}", err=True)
            sys.exit(EXIT_UNSUPPORTED)
        except InputError as exc:
            click.echo(f"input error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(EXIT_INPUT)

    return wrapper


def _emit(doc: Mapping[str, Any], out: str | None = None) -> None:
    text = io.dumps(doc)
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _load(path: str, *kinds: str) -> io.Document:
    doc = io.load(path)
    if kinds and doc.kind not in kinds:
        raise InputError(f"expected a {' or '.join(kinds)} document, got {doc.kind}")
    return doc


def _names(doc: io.Document, vs: Sequence[int]) -> list[str]:
    return [doc.label(v) for v in vs]


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Partitioned T-coherent book embeddings: solver, oracles, reductions and checkers."""
    level = os.environ.get("PTBE_LOG_LEVEL")
    if level:
        logging.basicConfig(level=level.upper(), format="%(levelname)s %(name)s: %(message)s")


# ---------------------------------------------------------------------------
# solve


@main.command()
@click.option("--in", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--free-page", type=int, default=None, help="Page allowed to be not T-biconnected (0-based).")
@click.option("--emit-trace", is_flag=True, help="Include a summary of the intermediate PQ-trees.")
@_mapped
def solve(path: str, free_page: int | None, emit_trace: bool) -> None:
    """Decide a ptbe instance with k-1 T-biconnected pages."""
    doc = _load(path, "ptbe")
    inst: PtbeInstance = doc.value
    res = solve_any(inst) if free_page is None else run_solver(inst, free_page)
    log.info("solved %s: %s", path, res.answer)
    _emit(
        io.verdict(
            "ptbe",
            res.answer,
            order=_names(doc, res.order) if res.order is not None else None,
            trace=res.trace.summary() if emit_trace else None,
        )
    )
    raise Outcome(EXIT_YES if res.verdict else EXIT_NO)


# ---------------------------------------------------------------------------
# brute


def _flip_model(inst: MaxSefeInstance) -> oracles.FlipModel:
    """Every connected component of either graph flips on its own."""
    from .planarity import planar_embedding

    bases = []
    groups = []
    for g in (inst.g1, inst.g2):
        rot = planar_embedding(g)
        if rot is None:
            raise UnsupportedInstance("both graphs must be planar")
        bases.append(rot)
        groups.append(tuple(c for c in g.components() if len(c) > 1))
    return oracles.FlipModel((bases[0], bases[1]), (groups[0], groups[1]))


@main.command()
@click.option(
    "--problem",
    required=True,
    type=click.Choice(["ptbe", "betweenness", "xorsat", "steiner", "maxsefe-flip"]),
)
@click.option("--in", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--budget", type=int, default=None, help="Size guard of the enumeration (oracle default if omitted).")
@_mapped
def brute(problem: str, path: str, budget: int | None) -> None:
    """Answer an instance by exhaustive enumeration."""
    guard: dict[str, int] = {} if budget is None else {"guard": budget}
    if problem == "ptbe":
        doc = _load(path, "ptbe")
        order = oracles.ptbe_brute(doc.value, **guard)
        _emit(io.verdict("ptbe", "YES" if order is not None else "NO", order=None if order is None else _names(doc, order)))
        raise Outcome(EXIT_YES if order is not None else EXIT_NO)
    if problem == "betweenness":
        doc = _load(path, "betweenness")
        order = oracles.betweenness_brute(doc.value, **guard)
        _emit(io.verdict("betweenness", "YES" if order is not None else "NO", order=None if order is None else _names(doc, order)))
        raise Outcome(EXIT_YES if order is not None else EXIT_NO)
    if problem == "xorsat":
        doc = _load(path, "xorsat")
        xs: XorSatInstance = doc.value
        opt = oracles.xorsat_max_brute(xs, **guard)
        ok = opt.min_unsat <= xs.budget
        detail = {"min_unsat": opt.min_unsat, "assignment": {doc.label(x): b for x, b in opt.assignment.items()}}
        _emit(io.verdict("xorsat", "YES" if ok else "NO", detail=detail))
        raise Outcome(EXIT_YES if ok else EXIT_NO)
    if problem == "steiner":
        doc = _load(path, "pst")
        pst: PstInstance = doc.value
        kw = {} if budget is None else {"vertex_guard": budget, "edge_guard": min(budget, 12)}
        tree = oracles.steiner_brute(pst, **kw)
        ok = tree.weight <= pst.budget
        detail = {"weight": tree.weight, "tree": [_names(doc, e) for e in sorted(tree.edges)]}
        _emit(io.verdict("steiner", "YES" if ok else "NO", detail=detail))
        raise Outcome(EXIT_YES if ok else EXIT_NO)
    # maxsefe-flip: an xorsat document is reduced first, a max_sefe document flips per component
    doc = _load(path, "xorsat", "max_sefe")
    if doc.kind == "xorsat":
        out = xorsat_to_maxsefe(doc.value)
        target, model = out.instance, out.data["model"]
        assert isinstance(model, oracles.FlipModel)
    else:
        target = doc.value
        model = _flip_model(target)
    best = oracles.maxsefe_flip_brute(target, model, **guard)
    ok = best.min_violations <= target.budget
    _emit(io.verdict("maxsefe-flip", "YES" if ok else "NO", detail={"min_violations": best.min_violations}))
    raise Outcome(EXIT_YES if ok else EXIT_NO)


# ---------------------------------------------------------------------------
# reduce

_REDUCTIONS: dict[tuple[str, str], tuple[str, Callable[..., Any]]] = {
    ("betweenness", "sefe-pseudotree"): ("betweenness", betweenness_to_sunflower_pseudotree),
    ("betweenness", "sefe-tree"): ("betweenness", betweenness_to_sunflower_tree_biconnected),
    ("betweenness", "ptbe3-caterpillar"): ("betweenness", betweenness_to_ptbe3_caterpillar),
    ("betweenness", "pbe3"): ("betweenness", betweenness_to_pbe3),
    ("ptbe", "pbe"): ("ptbe", ptbe_to_pbe),
    ("ptbe", "sp"): ("ptbe", ptbe2_to_sp_biconnected),
    ("sunflower-sefe", "ptbe"): ("sunflower_sefe", sunflower_to_ptbe),
    ("pst", "utpst"): ("pst", pst_to_utpst),
    ("utpst", "maxsefe"): ("pst", utpst_to_maxsefe),
    ("xorsat", "maxsefe"): ("xorsat", xorsat_to_maxsefe),
    ("maxsefe", "subcubic"): ("max_sefe", degree3_expand),
}


@main.command()
@click.option("--from", "source", required=True, help="Source problem.")
@click.option("--to", "target", required=True, help="Target problem.")
@click.option("--in", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", default=None, help="Target instance file (standard output if omitted).")
@click.option("--provenance", "prov_path", default=None, help="Write gadget names and provenance here.")
@click.option("--k", "pages", type=int, default=3, show_default=True, help="Page count for sefe-tree.")
@_mapped
def reduce(source: str, target: str, path: str, out_path: str | None, prov_path: str | None, pages: int) -> None:
    """Run a reduction generator and validate its output.

    Supported pairs: betweenness to sefe-pseudotree, sefe-tree,
    ptbe3-caterpillar or pbe3; ptbe to pbe or sp; sunflower-sefe to ptbe;
    pst to utpst; utpst to maxsefe; xorsat to maxsefe; maxsefe to subcubic.
    """
    key = (source, target)
    if key not in _REDUCTIONS:
        pairs = ", ".join(f"{a}->{b}" for a, b in _REDUCTIONS)
        raise click.UsageError(f"unsupported reduction {source}->{target}; known pairs: {pairs}")
    kind, fn = _REDUCTIONS[key]
    doc = _load(path, kind)
    result = fn(doc.value, pages) if target == "sefe-tree" else fn(doc.value)
    if isinstance(result, ReductionOutput):
        instance, names = result.instance, list(result.names)
        prov = {k: [names[v] for v in vs] for k, vs in result.provenance.items()}
    elif hasattr(result, "instance"):  # sunflower book view
        instance, names, prov = result.instance, None, {}
    else:
        instance, names, prov = result, None, {}
    _emit(io.encode(instance, names), out_path)
    if prov_path is not None:
        labels = names if names is not None else [str(v) for v in range(_vertex_count(instance))]
        _emit(
            {
                "kind": "provenance",
                "version": io.VERSION,
                "source": source,
                "target": target,
                "names": labels,
                "provenance": prov,
            },
            prov_path,
        )
    raise Outcome(EXIT_YES)


def _vertex_count(instance: Any) -> int:
    if isinstance(instance, PtbeInstance):
        return len(instance.tree.graph.vertices)
    if isinstance(instance, MaxSefeInstance):
        return len(instance.g1.vertices)
    if isinstance(instance, PstInstance):
        return len(instance.graph.vertices)
    if isinstance(instance, SunflowerSefeInstance):
        return len(instance.shared.vertices)
    return 0


# ---------------------------------------------------------------------------
# verify


@main.command()
@click.option("--in", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--cert", "cert_path", required=True, type=click.Path(exists=True, dir_okay=False))
@_mapped
def verify(path: str, cert_path: str) -> None:
    """Check a certificate against an instance.

    A YES verdict written by ``solve`` or ``brute`` is accepted in place of a
    certificate, since it carries the witness in the same fields.
    """
    doc = io.load(path)
    cert = _load(cert_path, "certificate", "verdict").value
    index = doc.index()
    value = doc.value
    if isinstance(value, PtbeInstance):
        _need(cert, "order")
        res = check_ptbe_certificate(value, io.decode_order(cert["order"], index))
        ok, reason, detail = res.ok, res.reason, dict(res.detail)
    elif isinstance(value, BetweennessInstance):
        _need(cert, "order")
        order = io.decode_order(cert["order"], index)
        if sorted(order) != list(value.elements):
            ok, reason, detail = False, "not_a_permutation", {}
        else:
            ok = value.satisfied_by(order)
            reason, detail = ("ok" if ok else "triple_violated"), {}
    elif isinstance(value, XorSatInstance):
        _need(cert, "assignment")
        assignment = io.decode_assignment(cert["assignment"], index)
        if set(assignment) != set(value.variables):
            raise InputError("the assignment must cover every variable")
        bad = value.unsatisfied(assignment)
        ok = bad <= value.budget
        reason, detail = ("ok" if ok else "over_budget"), {"unsatisfied": bad}
    elif isinstance(value, PstInstance):
        _need(cert, "tree")
        ok, reason, detail = _check_steiner(value, io.decode_edges(cert["tree"], index, "tree"))
    elif isinstance(value, SunflowerSefeInstance):
        res = check_sefe_certificate(value, io.decode_sefe_certificate(cert, index))
        ok, reason, detail = res.ok, res.reason, dict(res.detail)
    elif isinstance(value, MaxSefeInstance):
        res = check_maxsefe_certificate(value, io.decode_sefe_certificate(cert, index))
        ok, reason, detail = res.ok, res.reason, dict(res.detail)
    else:
        raise InputError(f"no certificate format for {doc.kind} documents")
    _emit(io.verdict("verify", "accept" if ok else "reject", detail={"reason": reason, **_jsonable(detail)}))
    raise Outcome(EXIT_YES if ok else EXIT_NO)


def _need(cert: Mapping[str, Any], field: str) -> None:
    if field not in cert:
        raise InputError(f"the certificate lacks '{field}'")


def _check_steiner(inst: PstInstance, tree: frozenset[tuple[int, int]]) -> tuple[bool, str, dict[str, Any]]:
    if not tree <= inst.graph.edges:
        return False, "edge_not_in_graph", {}
    g = Graph.build(tree, inst.terminals)
    verts = {v for e in tree for v in e} | set(inst.terminals)
    if len(g.components()) > 1 or (tree and len(tree) != len(verts) - 1):
        return False, "not_a_tree", {}
    weight = inst.weight(tree)
    if weight > inst.budget:
        return False, "over_budget", {"weight": weight}
    return True, "ok", {"weight": weight}


def _jsonable(detail: Mapping[str, Any]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for k, v in detail.items():
        if isinstance(v, (set, frozenset, tuple)):
            v = sorted(v) if isinstance(v, (set, frozenset)) else list(v)
        out[k] = v
    return out


# ---------------------------------------------------------------------------
# gen


@main.command()
@click.option("--problem", required=True, type=click.Choice(["ptbe", "betweenness", "xorsat", "pst"]))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--size", type=int, required=True, help="Leaves, elements, variables or vertices.")
@click.option("--count", type=int, default=2, show_default=True, help="Pages, triples, clauses or terminals.")
@click.option("--planted/--random", default=True, help="ptbe: pages drawn around a hidden valid order.")
@click.option("--biconnected-pages", type=int, default=None, help="ptbe: number of T-biconnected pages.")
@click.option("--budget", type=int, default=0, show_default=True, help="xorsat/pst budget.")
@click.option("--out", "out_path", default=None)
@_mapped
def gen(
    problem: str,
    seed: int,
    size: int,
    count: int,
    planted: bool,
    biconnected_pages: int | None,
    budget: int,
    out_path: str | None,
) -> None:
    """Write a seeded random instance."""
    rng = random.Random(seed)
    if size < 2 or count < 1:
        raise InputError("size must be at least 2 and count at least 1")
    value: Any
    if problem == "ptbe":
        value = generators.random_ptbe(rng, size, count, planted=planted, biconnected_pages=biconnected_pages)
        want = count - 1 if biconnected_pages is None else biconnected_pages
        flags = [is_t_biconnected(value, i) for i in range(value.k)]
        log.info("T-biconnected pages: %s", flags)
        if not all(flags[:want]):
            raise ValidationFailure("requested T-biconnected pages are not T-biconnected")
    elif problem == "betweenness":
        if size < 3:
            raise InputError("betweenness needs at least 3 elements")
        value = generators.random_betweenness(rng, size, count)
    elif problem == "xorsat":
        value = generators.random_xorsat(rng, size, count, budget)
    else:
        value = generators.random_pst(rng, size, count, budget=budget)
    _emit(io.encode(value), out_path)
    raise Outcome(EXIT_YES)


# ---------------------------------------------------------------------------
# export-dot

_PALETTE = ("red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan")


def _dot_edges(doc: io.Document, edges: Sequence[tuple[int, int]], indent: str = "  ") -> list[str]:
    return [f'{indent}"{doc.label(u)}" -- "{doc.label(v)}";' for u, v in sorted(edges)]


def _dot_class(doc: io.Document, name: str, color: str, edges: Sequence[tuple[int, int]], style: str = "solid") -> list[str]:
    lines = [f"  subgraph {name} {{", f'    edge [class="{name}", color="{color}", style="{style}"];']
    lines += _dot_edges(doc, edges, "    ")
    lines.append("  }")
    return lines


def to_dot(doc: io.Document) -> str:
    """Graphviz text with one edge class per page or graph."""
    value = doc.value
    lines = ["graph G {", "  node [shape=circle];"]
    if isinstance(value, PtbeInstance):
        g = value.tree.graph
        lines += [f'  "{doc.label(v)}" [shape={"box" if v in value.leaves else "circle"}];' for v in sorted(g.vertices)]
        lines += _dot_class(doc, "tree", "black", sorted(g.edges))
        for i, page in enumerate(value.pages):
            lines += _dot_class(doc, f"page{i}", _PALETTE[i % len(_PALETTE)], sorted(page), "dashed")
    elif isinstance(value, SunflowerSefeInstance):
        lines += [f'  "{doc.label(v)}";' for v in sorted(value.shared.vertices)]
        lines += _dot_class(doc, "shared", "black", sorted(value.shared.edges))
        for i, p in enumerate(value.privates):
            lines += _dot_class(doc, f"graph{i}", _PALETTE[i % len(_PALETTE)], sorted(p), "dashed")
    elif isinstance(value, MaxSefeInstance):
        shared = value.shared.edges
        lines += [f'  "{doc.label(v)}";' for v in sorted(value.g1.vertices)]
        lines += _dot_class(doc, "shared", "black", sorted(shared))
        lines += _dot_class(doc, "graph0", _PALETTE[0], sorted(value.g1.edges - shared), "dashed")
        lines += _dot_class(doc, "graph1", _PALETTE[1], sorted(value.g2.edges - shared), "dashed")
    elif isinstance(value, PstInstance):
        for v in sorted(value.graph.vertices):
            shape = "box" if v in value.terminals else "circle"
            lines.append(f'  "{doc.label(v)}" [shape={shape}];')
        for (u, v), w in sorted(value.weights.items()):
            lines.append(f'  "{doc.label(u)}" -- "{doc.label(v)}" [label="{w}"];')
    elif isinstance(value, Graph):
        lines += [f'  "{doc.label(v)}";' for v in sorted(value.vertices)]
        lines += _dot_edges(doc, sorted(value.edges))
    elif doc.kind == "leaf_tree":
        g = value.graph
        lines += [f'  "{doc.label(v)}";' for v in sorted(g.vertices)]
        lines += _dot_edges(doc, sorted(g.edges))
    else:
        raise InputError(f"{doc.kind} documents have no graph to export")
    lines.append("}")
    return "\n".join(lines) + "\n"


@main.command("export-dot")
@click.option("--in", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", default=None)
@_mapped
def export_dot(path: str, out_path: str | None) -> None:
    """Write a Graphviz description of an instance."""
    text = to_dot(io.load(path))
    if out_path is None:
        click.echo(text, nl=False)
    else:
        Path(out_path).write_text(text)
    raise Outcome(EXIT_YES)


if __name__ == "__main__":  # pragma: no cover
    main()
