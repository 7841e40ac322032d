"""JSON formats.

Graph documents (format ``seplab-graph``, version 1)::

    {"format": "seplab-graph", "version": 1,
     "vertices": [{"id": "w0", "color": "white"}, ...],
     "edges": [{"id": "e0", "tail": "w0", "head": "b0"}, ...],
     "rotation": {"w0": [{"edge": "e0", "end": "tail"}, ...], ...},
     "containment": [{"component_root_vertex": "w2",
                      "host_component_root_vertex": "w0",
                      "host_face": 0, "component_face": 1}],
     "outer_face": 0}

Rotation lists are counterclockwise.  ``host_face`` and ``component_face``
index the faces of a single component, ordered by smallest half-edge id
(2 * edge position + 0 for the tail end, 1 for the head end).
``component_face`` and ``outer_face`` default to 0.

Rationals are written as ``"p/q"`` strings.  Complex coefficients are
``[re, im]`` pairs (floating point) or strings such as ``"1/2-3/4i"``
(exact Gaussian rationals).
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

import sympy as sp

from .graph_core import Containment, Edge, EmbeddedGraph, GraphError, HalfEdge, Vertex

GRAPH_FORMAT = "seplab-graph"
GRAPH_VERSION = 1


class FormatError(GraphError):
    """Input document does not follow the expected layout."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def fraction_to_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def str_to_fraction(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"not a rational: {s!r}") from exc


def graph_to_dict(graph: EmbeddedGraph) -> dict:
    return {
        "format": GRAPH_FORMAT,
        "version": GRAPH_VERSION,
        "vertices": [{"id": v.id, "color": v.color} for v in graph.vertices],
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in graph.edges],
        "rotation": {v.id: [{"edge": h.edge, "end": h.end} for h in graph.rotation[v.id]]
                     for v in graph.vertices},
        "containment": [
            {"component_root_vertex": c.component, "host_component_root_vertex": c.host,
             "host_face": c.host_face, "component_face": c.component_face}
            for c in graph.containment
        ],
        "outer_face": graph.outer_face,
    }


def _require(d, key, ctx):
    if not isinstance(d, dict) or key not in d:
        raise FormatError(f"{ctx}: missing key {key!r}")
    return d[key]


def graph_from_dict(d: dict) -> EmbeddedGraph:
    if not isinstance(d, dict):
        raise FormatError("graph document must be a JSON object")
    if "graph" in d and "vertices" not in d:
        d = d["graph"]
    version = d.get("version", GRAPH_VERSION)
    if version != GRAPH_VERSION:
        raise FormatError(f"unsupported graph format version {version!r}")
    try:
        vertices = [Vertex(_require(v, "id", "vertex"), _require(v, "color", "vertex"))
                    for v in _require(d, "vertices", "graph")]
        edges = [Edge(_require(e, "id", "edge"), _require(e, "tail", "edge"), _require(e, "head", "edge"))
                 for e in _require(d, "edges", "graph")]
        rotation = {}
        for vid, hs in _require(d, "rotation", "graph").items():
            rotation[vid] = [HalfEdge(_require(h, "edge", "rotation"), _require(h, "end", "rotation"))
                             for h in hs]
        containment = [
            Containment(_require(c, "component_root_vertex", "containment"),
                        _require(c, "host_component_root_vertex", "containment"),
                        int(_require(c, "host_face", "containment")),
                        int(c.get("component_face", 0)))
            for c in d.get("containment", [])
        ]
    except (TypeError, AttributeError) as exc:
        raise FormatError(f"malformed graph document: {exc}") from exc
    # JSON object keys are strings; match them to vertex ids of other types
    by_str = {str(v.id): v.id for v in vertices}
    rotation = {by_str.get(str(k), k): v for k, v in rotation.items()}
    return EmbeddedGraph(vertices, edges, rotation, containment, int(d.get("outer_face", 0)))


def load_json(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def load_graph(path) -> EmbeddedGraph:
    return graph_from_dict(load_json(path))


# -- complex coefficients -------------------------------------------------

_EXACT_RE = re.compile(r"^[0-9/+\-i. ]+$")


def parse_gaussian(s: str) -> sp.Expr:
    """Parse ``"p/q+r/s i"`` style strings into an exact sympy number."""
    text = str(s).replace(" ", "").replace("j", "i")
    if not text or not _EXACT_RE.match(text):
        raise FormatError(f"not a Gaussian rational: {s!r}")
    text = re.sub(r"(^|[+\-])i", r"\g<1>1i", text)
    text = text.replace("i", "*I")
    try:
        val = sp.sympify(text, rational=True, locals={"I": sp.I})
    except (sp.SympifyError, SyntaxError, TypeError) as exc:
        raise FormatError(f"not a Gaussian rational: {s!r}") from exc
    re_part, im_part = val.as_real_imag()
    if not (re_part.is_Rational and im_part.is_Rational):
        raise FormatError(f"not a Gaussian rational: {s!r}")
    return sp.Rational(re_part) + sp.I * sp.Rational(im_part)


def gaussian_to_str(x) -> str:
    if isinstance(x, (float, complex)):
        x = complex(x)
        re_part = sp.Rational(Fraction(x.real))
        im_part = sp.Rational(Fraction(x.imag))
    else:
        re_part, im_part = (sp.Rational(t) for t in sp.expand(sp.sympify(x)).as_real_imag())
    if im_part == 0:
        return str(re_part)
    if re_part == 0:
        return f"{im_part}i"
    sign = "+" if im_part >= 0 else "-"
    return f"{re_part}{sign}{abs(im_part)}i"


def parse_coefficient(c, exact: bool):
    if isinstance(c, str):
        return parse_gaussian(c) if exact else complex(parse_gaussian(c))
    if isinstance(c, (list, tuple)) and len(c) == 2 and all(isinstance(t, (int, float)) for t in c):
        if exact:
            return sp.Rational(Fraction(c[0])) + sp.I * sp.Rational(Fraction(c[1]))
        return complex(float(c[0]), float(c[1]))
    if isinstance(c, (int, float)) and not isinstance(c, bool):
        return sp.Rational(Fraction(c)) if exact else complex(c)
    raise FormatError(f"coefficient must be [re, im] or a 'p/q+r/s i' string, got {c!r}")


def vf_document(d: dict, exact: bool | None = None) -> tuple[list, list, bool]:
    """Read ``{"numerator": [...], "denominator": [...]}`` (highest degree
    first).  Exact mode is used when requested or when every coefficient is
    a string."""
    if not isinstance(d, dict):
        raise FormatError("vector field document must be a JSON object")
    num = _require(d, "numerator", "vector field")
    den = d.get("denominator", [[1, 0]])
    if not isinstance(num, list) or not isinstance(den, list) or not num or not den:
        raise FormatError("numerator and denominator must be non-empty coefficient lists")
    if exact is None:
        exact = bool(d.get("exact", False)) or all(isinstance(c, str) for c in num + den)
    return [parse_coefficient(c, exact) for c in num], [parse_coefficient(c, exact) for c in den], exact
