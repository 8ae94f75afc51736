"""Command-line front end.

Exit codes: 0 success, 1 validation violation (JSON on stdout), 2 usage or
schema error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence

from . import families, io, render
from . import homotopy as hm
from .convert import ConversionError, gridrep_to_homotopy, homotopy_to_gridrep
from .gridrep import NormalizationFailed, check_labels, to_contact, validate_gridrep
from .homotopy import validate_homotopy
from .parameters import check_path_decomposition, check_peeling, outerplanarity, pathwidth_exact
from .planar import Triangulation, enumerate_stacked_triangulations, k3, k4
from .solvers import DEFAULT_BUDGET, BudgetExceeded, hh_exact, shh_exact, verify_chain

OK, VIOLATION, USAGE = 0, 1, 2

FAMILIES = ("k3", "k4", "stacked", "nested", "apex_tree", "apex_strip", "fig1", "sp")
PARAMS = ("pw", "op", "shh", "hh", "all")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    in_path: Optional[str] = None
    out_path: Optional[str] = None
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    simple: bool = False
    cell: int = 24
    palette: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.budget <= 0:
            raise UsageError("--budget must be positive")
        if self.cell <= 0:
            raise UsageError("--cell must be positive")
        if self.in_path and self.out_path and self.out_path != "-":
            if Path(self.in_path).resolve() == Path(self.out_path).resolve():
                raise UsageError("--in and --out must be different files")


def _emit(doc: Any, out: Optional[str]) -> None:
    io.write_json(out or "-", doc)


def _violation(doc: dict) -> int:
    print(json.dumps(doc, indent=1))
    return VIOLATION


def _vdoc(kind: str, v) -> dict:
    if isinstance(v, str):
        return {"valid": False, "kind": kind, "reason": v}
    return {"valid": False, "kind": kind, **v.to_dict()}


def _load(path: Optional[str]) -> Any:
    if not path:
        raise UsageError("--in is required")
    try:
        if path == "-":
            return json.load(sys.stdin)
        return io.read_json(path)
    except json.JSONDecodeError as e:
        raise io.SchemaError("$", f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _graph_from(doc: Any) -> Triangulation:
    kind = io.kind_of(doc)
    if kind == "graph" or kind is None:
        return io.decode_graph(doc)
    if isinstance(doc, dict) and "graph" in doc:
        return io.decode_graph(doc["graph"])
    raise io.SchemaError("$.schema", f"expected a graph document, found {kind}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def make_family(family: str, size: Optional[int], seed: int):
    if family == "k3":
        return k3()
    if family == "k4":
        return k4()
    if family == "fig1":
        return families.fig1_graph()
    if size is None:
        raise UsageError(f"--size is required for family {family}")
    try:
        if family == "stacked":
            return enumerate_stacked_triangulations(size, seed=seed, count=1)[0]
        if family == "nested":
            return families.nested_triangles(size)
        if family == "apex_tree":
            return families.apex_tree(size)
        if family == "apex_strip":
            return families.apex_strip(size)
        if family == "sp":
            return families.random_sp(size, seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    raise UsageError(f"unknown family {family}")


def cmd_generate(a: argparse.Namespace, cfg: RunConfig) -> int:
    g = make_family(a.family, a.size, cfg.seed)
    if isinstance(g, families.SPGraph):
        doc = io.encode_spgraph(g)
        if a.kind == "gridrep":
            doc = io.encode_gridrep(families.sp_gridrep(g))
    else:
        doc = io.encode_graph(g)
    _emit(doc, cfg.out_path)
    return OK


def compute_report(tri: Triangulation, params: Sequence[str], budget: int) -> dict:
    out: dict = {"graph_id": tri.name or f"n{tri.n}", "n": tri.n}
    certs: dict = {}
    if "pw" in params:
        out["pw"], dec = pathwidth_exact(tri)
        certs["pw"] = io.encode_pathdecomposition(dec)
    if "op" in params:
        out["op"], peel = outerplanarity(tri)
        certs["op"] = io.encode_peeling(peel)
    for name, fn in (("hh", hh_exact), ("shh", shh_exact)):
        if name in params:
            out[name], h = fn(tri, budget)
            certs[name] = io.encode_homotopy(tri, h)
    out["certificates"] = certs
    return io.tag("report", out)


def cmd_compute(a: argparse.Namespace, cfg: RunConfig) -> int:
    tri = _graph_from(_load(cfg.in_path))
    params = PARAMS[:-1] if a.param == "all" else (a.param,)
    try:
        doc = compute_report(tri, params, cfg.budget)
    except BudgetExceeded as e:
        partial = {"error": "budget_exceeded", "upper_bound": e.bound, "lower_bound": e.lower}
        if e.cert is not None:
            partial["certificate"] = io.encode_homotopy(tri, e.cert)
        return _violation(io.tag("report", partial))
    if a.cert:
        for name, c in doc["certificates"].items():
            io.write_json(f"{a.cert}.{name}.json", c)
    if not a.report_certs:
        doc = {k: v for k, v in doc.items() if k != "certificates"}
    _emit(doc, cfg.out_path)
    return OK


def cmd_convert(a: argparse.Namespace, cfg: RunConfig) -> int:
    doc = _load(cfg.in_path)
    kind = a.kind or io.kind_of(doc)
    try:
        if kind == "homotopy":
            tri, h = io.decode_homotopy(doc)
            rep, trace = homotopy_to_gridrep(tri, h)
            out = io.encode_gridrep(rep, tri)
        elif kind == "gridrep":
            rep, tri = io.decode_gridrep(doc)
            tri = tri or _graph_from(_load(a.graph))
            h, trace = gridrep_to_homotopy(tri, rep, True if cfg.simple else None)
            out = io.encode_homotopy(tri, h)
        elif kind == "spgraph":
            g = io.decode_spgraph(doc)
            rep = families.sp_gridrep(g)
            trace = None
            out = io.encode_gridrep(rep)
        else:
            raise UsageError(f"cannot convert a {kind} document")
    except (ConversionError, NormalizationFailed) as e:
        return _violation({"valid": False, "kind": kind, "reason": str(e)})
    if a.trace and trace is not None:
        io.write_json(a.trace, io.tag("trace", trace.to_dict()))
    _emit(out, cfg.out_path)
    return OK


def validate_doc(doc: Any, kind: str, graph: Optional[Triangulation], simple: bool) -> Optional[dict]:
    """None when valid, otherwise a violation record."""
    if kind == "graph":
        io.decode_graph(doc)
        return None
    if kind == "homotopy":
        tri, h = io.decode_homotopy(doc)
        v = validate_homotopy(tri, h)
        return None if v is None else _vdoc(kind, v)
    if kind == "gridrep":
        rep, tri = io.decode_gridrep(doc)
        tri = tri or graph
        if tri is None:
            raise UsageError("gridrep has no embedded graph; pass --graph")
        v = validate_gridrep(tri, rep, simple)
        return None if v is None else _vdoc(kind, v)
    if kind == "peeling":
        cert, tri = io.decode_peeling(doc)
        tri = tri or graph
        if tri is None:
            raise UsageError("peeling has no embedded graph; pass --graph")
        v = check_peeling(tri, cert)
        return None if v is None else _vdoc(kind, v)
    if kind == "pathdecomposition":
        dec, tri = io.decode_pathdecomposition(doc)
        tri = tri or graph
        if tri is None:
            raise UsageError("path decomposition has no embedded graph; pass --graph")
        v = check_path_decomposition(tri, dec)
        return None if v is None else _vdoc(kind, v)
    if kind == "spgraph":
        g = io.decode_spgraph(doc)
        v = check_labels(g.n, g.edges, families.sp_gridrep(g), require_simple=True, exact=False)
        return None if v is None else _vdoc(kind, v)
    raise UsageError(f"cannot validate a {kind} document")


def cmd_validate(a: argparse.Namespace, cfg: RunConfig) -> int:
    doc = _load(cfg.in_path)
    kind = a.kind or io.kind_of(doc)
    graph = _graph_from(_load(a.graph)) if a.graph else None
    try:
        bad = validate_doc(doc, kind, graph, cfg.simple)
    except io.SchemaError:
        raise
    except ValueError as e:
        # well-formed JSON describing something that is not a valid object of its kind
        bad = {"valid": False, "kind": kind, "reason": str(e)}
    if bad is not None:
        return _violation(bad)
    out: dict = {"valid": True, "kind": kind}
    if kind == "homotopy":
        out["boundary_slides"] = hm.boundary_slide_forms(io.decode_homotopy(doc)[1])
    _emit(out, cfg.out_path)
    return OK


def cmd_render(a: argparse.Namespace, cfg: RunConfig) -> int:
    doc = _load(cfg.in_path)
    kind = a.kind or io.kind_of(doc)
    opt = render.RenderOptions(cell=cfg.cell, palette=cfg.palette)
    if kind == "gridrep":
        rep, _ = io.decode_gridrep(doc)
        svg = render.render_gridrep(rep, opt)
    elif kind == "contact":
        rep, _ = io.decode_gridrep(doc)
        svg = render.render_contact(to_contact(rep), opt)
    elif kind == "graph":
        svg = render.render_triangulation(io.decode_graph(doc), opt)
    elif kind == "homotopy":
        tri, h = io.decode_homotopy(doc)
        svg = render.render_homotopy(tri, h, opt)
    else:
        raise UsageError(f"cannot render a {kind} document")
    if not cfg.out_path or cfg.out_path == "-":
        sys.stdout.write(svg)
    else:
        Path(cfg.out_path).write_text(svg)
    return OK


def cmd_verify_chain(a: argparse.Namespace, cfg: RunConfig) -> int:
    if cfg.in_path:
        graphs = [_graph_from(_load(cfg.in_path))]
    elif a.family == "stacked" and a.size:
        graphs = enumerate_stacked_triangulations(a.size, seed=cfg.seed, count=a.count)
    elif a.family:
        graphs = [make_family(a.family, a.size, cfg.seed)]
    else:
        raise UsageError("pass --in or --family")
    reports = []
    bad = False
    for tri in graphs:
        try:
            r = verify_chain(tri, cfg.budget, raise_on_violation=False)
        except BudgetExceeded as e:
            reports.append({"graph_id": tri.name, "error": "budget_exceeded", "upper_bound": e.bound,
                            "lower_bound": e.lower})
            bad = True
            continue
        reports.append(r.to_dict())
        bad = bad or not r.ok
    doc = io.tag("report", {"chain": reports, "ok": not bad})
    if bad:
        return _violation(doc)
    _emit(doc, cfg.out_path)
    return OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heightlab", description="Homotopy height and grid-major height toolkit.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--in", dest="in_path", metavar="PATH")
        sp.add_argument("--out", dest="out_path", metavar="PATH")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--simple", action="store_true")

    g = sub.add_parser("generate", help="write a family member as JSON")
    common(g)
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--size", type=int)
    g.add_argument("--kind", choices=("graph", "gridrep"), default="graph",
                   help="for sp: emit the graph or its grid representation")

    c = sub.add_parser("compute", help="exact parameters with certificates")
    common(c)
    c.add_argument("--param", choices=PARAMS, default="all")
    c.add_argument("--cert", metavar="PREFIX", help="write each certificate to PREFIX.<param>.json")
    c.add_argument("--report", dest="report_certs", action="store_true", help="embed certificates in the report")

    v = sub.add_parser("convert", help="homotopy <-> gridrep, spgraph -> gridrep")
    common(v)
    v.add_argument("--kind", choices=("homotopy", "gridrep", "spgraph"))
    v.add_argument("--graph", metavar="PATH", help="graph for a gridrep without one embedded")
    v.add_argument("--trace", metavar="PATH", help="write the conversion trace")

    d = sub.add_parser("validate", help="check an artifact")
    common(d)
    d.add_argument("--kind", choices=("graph", "homotopy", "gridrep", "peeling", "pathdecomposition", "spgraph"))
    d.add_argument("--graph", metavar="PATH")

    r = sub.add_parser("render", help="SVG output")
    common(r)
    r.add_argument("--kind", choices=("gridrep", "contact", "graph", "homotopy"))
    r.add_argument("--cell", type=int, default=24)
    r.add_argument("--palette", help="comma-separated colours")

    ch = sub.add_parser("verify-chain", help="check the parameter inequalities")
    common(ch)
    ch.add_argument("--family", choices=FAMILIES)
    ch.add_argument("--size", type=int)
    ch.add_argument("--count", type=int, default=1)
    return p


COMMANDS = {
    "generate": cmd_generate,
    "compute": cmd_compute,
    "convert": cmd_convert,
    "validate": cmd_validate,
    "render": cmd_render,
    "verify-chain": cmd_verify_chain,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.DEBUG if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        palette = tuple(a.palette.split(",")) if getattr(a, "palette", None) else None
        cfg = RunConfig(a.command, a.in_path, a.out_path, a.budget, a.seed, a.simple,
                        getattr(a, "cell", 24), palette)
        return COMMANDS[a.command](a, cfg)
    except io.SchemaError as e:
        print(f"heightlab: schema error at {e.path}: {e.message}", file=sys.stderr)
        return USAGE
    except UsageError as e:
        print(f"heightlab: {e}", file=sys.stderr)
        return USAGE
    except ValueError as e:
        print(f"heightlab: invalid input: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
