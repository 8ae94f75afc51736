"""JSON encoding and schema checks for every artifact type."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional

import jsonschema

from .gridrep import GridRep
from .homotopy import MOVE_KINDS, Homotopy, Move
from .parameters import PathDecomposition, PeelingCertificate
from .planar import OuterAnchor, Triangulation, build_triangulation

PREFIX = "heightlab/v1/"


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


_int = {"type": "integer"}
_nat = {"type": "integer", "minimum": 0}
_intlist = {"type": "array", "items": _nat}

_graph = {
    "type": "object",
    "required": ["faces"],
    "properties": {
        "schema": {"const": PREFIX + "graph"},
        "name": {"type": "string"},
        "n": _nat,
        "faces": {"type": "array", "minItems": 2, "items": {"type": "array", "items": _nat, "minItems": 3, "maxItems": 3}},
        "outer_face": {"type": ["integer", "null"], "minimum": 0},
    },
}

_anchor = {
    "type": "object",
    "required": ["kind", "u", "v"],
    "properties": {
        "kind": {"enum": ["face", "edge"]},
        "u": _nat,
        "v": _nat,
        "outer_face": {"type": ["integer", "null"], "minimum": 0},
    },
}

_move = {
    "type": "object",
    "required": ["kind", "vertices"],
    "properties": {
        "kind": {"enum": list(MOVE_KINDS)},
        "vertices": {"type": "array", "items": _nat, "minItems": 2, "maxItems": 3},
        "position": _nat,
        "end": {"enum": ["start", "finish"]},
        "direction": {"enum": ["insert", "remove", "extend", "retract"]},
    },
}

_homotopy = {
    "type": "object",
    "required": ["graph", "anchor", "curves", "moves"],
    "properties": {
        "schema": {"const": PREFIX + "homotopy"},
        "graph": _graph,
        "anchor": _anchor,
        "curves": {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _nat}},
        "moves": {"type": "array", "items": _move},
        "simple": {"type": "boolean"},
    },
}

_gridrep = {
    "type": "object",
    "required": ["height", "width", "labels"],
    "properties": {
        "schema": {"const": PREFIX + "gridrep"},
        "height": {"type": "integer", "minimum": 1},
        "width": {"type": "integer", "minimum": 1},
        "labels": {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _nat}},
        "graph": _graph,
    },
}

_peeling = {
    "type": "object",
    "required": ["outer_face", "layers"],
    "properties": {
        "schema": {"const": PREFIX + "peeling"},
        "outer_face": _nat,
        "layers": {"type": "array", "items": _intlist},
        "graph": _graph,
    },
}

_pathdec = {
    "type": "object",
    "required": ["bags"],
    "properties": {
        "schema": {"const": PREFIX + "pathdecomposition"},
        "bags": {"type": "array", "items": _intlist},
        "graph": _graph,
    },
}

_spgraph = {
    "type": "object",
    "required": ["n", "edges", "tree"],
    "properties": {
        "schema": {"const": PREFIX + "spgraph"},
        "n": _nat,
        "edges": {"type": "array", "items": {"type": "array", "items": _nat, "minItems": 2, "maxItems": 2}},
        "s": _nat,
        "t": _nat,
        "tree": {"type": "array", "items": {"enum": ["E", "S", "P"]}},
    },
}

_report = {"type": "object", "properties": {"schema": {"const": PREFIX + "report"}}}
_trace = {"type": "object", "properties": {"schema": {"const": PREFIX + "trace"}}}

SCHEMAS: dict[str, dict] = {
    "graph": _graph,
    "homotopy": _homotopy,
    "gridrep": _gridrep,
    "peeling": _peeling,
    "pathdecomposition": _pathdec,
    "spgraph": _spgraph,
    "report": _report,
    "trace": _trace,
}


def check_schema(doc: Any, kind: str) -> None:
    """Raise SchemaError naming the JSON path of the first problem."""
    validator = jsonschema.Draft202012Validator(SCHEMAS[kind])
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(e.absolute_path), e.message))
    if errors:
        e = errors[0]
        path = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path)
        raise SchemaError(path, e.message)


def tag(kind: str, body: dict) -> dict:
    return {"schema": PREFIX + kind, **body}


def kind_of(doc: Any) -> Optional[str]:
    if isinstance(doc, dict) and isinstance(doc.get("schema"), str) and doc["schema"].startswith(PREFIX):
        return doc["schema"][len(PREFIX):]
    return None


# encoders -------------------------------------------------------------------

def encode_graph(tri: Triangulation) -> dict:
    return tag("graph", {"name": tri.name, "n": tri.n, "faces": [list(f) for f in tri.faces], "outer_face": tri.outer_face})


def encode_anchor(a: OuterAnchor) -> dict:
    return {"kind": a.kind, "u": a.u, "v": a.v, "outer_face": a.outer_index}


def encode_homotopy(tri: Triangulation, h: Homotopy) -> dict:
    return tag("homotopy", {
        "graph": encode_graph(tri),
        "anchor": encode_anchor(h.anchor),
        "curves": [list(c) for c in h.curves],
        "moves": [m.to_dict() for m in h.moves],
        "simple": h.simple,
    })


def encode_gridrep(rep: GridRep, tri: Optional[Triangulation] = None) -> dict:
    body = rep.to_dict()
    if tri is not None:
        body["graph"] = encode_graph(tri)
    return tag("gridrep", body)


def encode_peeling(cert: PeelingCertificate, tri: Optional[Triangulation] = None) -> dict:
    body: dict = {"outer_face": cert.outer_face, "layers": [sorted(l) for l in cert.layers]}
    if tri is not None:
        body["graph"] = encode_graph(tri)
    return tag("peeling", body)


def encode_pathdecomposition(dec: PathDecomposition, tri: Optional[Triangulation] = None) -> dict:
    body: dict = {"bags": [sorted(b) for b in dec.bags]}
    if tri is not None:
        body["graph"] = encode_graph(tri)
    return tag("pathdecomposition", body)


def _postorder(root) -> list[str]:
    from .families import Edge, Parallel

    out: list[str] = []
    stack = [(root, False)]
    while stack:
        node, done = stack.pop()
        if isinstance(node, Edge):
            out.append("E")
        elif done:
            out.append("P" if isinstance(node, Parallel) else "S")
        else:
            stack += [(node, True), (node.right, False), (node.left, False)]
    return out


def encode_spgraph(g) -> dict:
    return tag("spgraph", {"n": g.n, "edges": [list(e) for e in g.edges], "s": g.s, "t": g.t,
                           "tree": _postorder(g.root)})


def decode_spgraph(doc: dict):
    from .families import Edge, Parallel, Series, materialize

    check_schema(doc, "spgraph")
    stack: list = []
    for i, tok in enumerate(doc["tree"]):
        if tok == "E":
            stack.append(Edge())
            continue
        if len(stack) < 2:
            raise SchemaError(f"$.tree[{i}]", "operator without two operands")
        b, a = stack.pop(), stack.pop()
        stack.append((Series if tok == "S" else Parallel)(a, b, a.m + b.m))
    if len(stack) != 1:
        raise SchemaError("$.tree", "postorder does not describe a single tree")
    try:
        g = materialize(stack[0])
    except ValueError as e:
        raise SchemaError("$.tree", str(e)) from None
    if sorted(map(tuple, doc["edges"])) != sorted(g.edges):
        raise SchemaError("$.edges", "edges disagree with the decomposition tree")
    return g


# decoders -------------------------------------------------------------------

def decode_graph(doc: dict) -> Triangulation:
    check_schema(doc, "graph")
    tri = build_triangulation([tuple(f) for f in doc["faces"]], name=doc.get("name", ""))
    if doc.get("outer_face") is not None:
        if not 0 <= doc["outer_face"] < len(tri.faces):
            raise SchemaError("$.outer_face", "index out of range")
        tri = tri.with_outer_face(doc["outer_face"])
    return tri


def decode_anchor(tri: Triangulation, doc: dict) -> OuterAnchor:
    if doc["kind"] == "edge":
        return OuterAnchor.for_edge(tri, doc["u"], doc["v"])
    face = doc.get("outer_face")
    if face is None or not 0 <= face < len(tri.faces):
        raise SchemaError("$.anchor.outer_face", "face anchor needs a valid outer_face index")
    return OuterAnchor.for_face(tri, face, doc["u"], doc["v"])


def decode_homotopy(doc: dict) -> tuple[Triangulation, Homotopy]:
    check_schema(doc, "homotopy")
    tri = decode_graph(doc["graph"])
    anchor = decode_anchor(tri, doc["anchor"])
    moves = tuple(Move.from_dict(m) for m in doc["moves"])
    curves = tuple(tuple(c) for c in doc["curves"])
    return tri, Homotopy(anchor, curves, moves, doc.get("simple", True))


def decode_gridrep(doc: dict) -> tuple[GridRep, Optional[Triangulation]]:
    check_schema(doc, "gridrep")
    rows = doc["labels"]
    if len(rows) != doc["height"]:
        raise SchemaError("$.labels", f"expected {doc['height']} rows, found {len(rows)}")
    for i, r in enumerate(rows):
        if len(r) != doc["width"]:
            raise SchemaError(f"$.labels[{i}]", f"expected {doc['width']} entries, found {len(r)}")
    tri = decode_graph(doc["graph"]) if "graph" in doc else None
    return GridRep(tuple(tuple(r) for r in rows)), tri


def decode_peeling(doc: dict) -> tuple[PeelingCertificate, Optional[Triangulation]]:
    check_schema(doc, "peeling")
    tri = decode_graph(doc["graph"]) if "graph" in doc else None
    return PeelingCertificate(doc["outer_face"], tuple(frozenset(l) for l in doc["layers"])), tri


def decode_pathdecomposition(doc: dict) -> tuple[PathDecomposition, Optional[Triangulation]]:
    check_schema(doc, "pathdecomposition")
    tri = decode_graph(doc["graph"]) if "graph" in doc else None
    return PathDecomposition(tuple(frozenset(b) for b in doc["bags"])), tri


def read_json(path: str | Path) -> Any:
    with open(path) as fh:
        return json.load(fh)


def write_json(path: str | Path, doc: Any) -> None:
    text = json.dumps(doc, indent=1, sort_keys=False)
    if str(path) == "-":
        print(text)
        return
    with open(path, "w") as fh:
        fh.write(text + "\n")
