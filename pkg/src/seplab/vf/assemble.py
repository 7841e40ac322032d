"""Separatrix graph of a rational vector field.

White vertices are the saddles (poles of R), black vertices the sinks,
sources and elliptic points reached by some separatrix.  A separatrix
joining two saddles (or a saddle to itself) is traced from both ends; the
two traces are merged into one edge.

Rotation at a saddle follows the direction index j, which increases
counterclockwise.  Rotation at a black vertex is the order in which
the separatrices last enter the zero's ordering circle (see tracing): after
that entry they are disjoint arcs ending at the vertex, so the order on the
circle is the rotation.  Right at the vertex, separatrices tangent to the
same direction are closer than any useful landing radius.

Nesting of components comes from the traced geometry: every face walk is
closed into a polygon, the face with negative signed area is the outside of
its component, and a component sits in the smallest bounded face of another
component that winds around it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..graph_core import (
    BLACK,
    HEAD,
    TAIL,
    WHITE,
    Containment,
    Edge,
    EmbeddedGraph,
    GraphError,
    HalfEdge,
    Vertex,
    faces,
    local_faces,
)
from .field import (
    SADDLE,
    Equilibrium,
    Mobius,
    RationalVF,
    check_coprime,
    classify_equilibria,
    normalize_infinity,
    TOL_CENTER,
    TOL_ROOT,
)
from .tracing import LANDING_AT_ZERO, SeparatrixTrace, TraceConfig, trace_all


@dataclass
class SeparatrixGraph:
    graph: EmbeddedGraph | None
    vf: RationalVF                     # normalized field the graph belongs to
    mobius: Mobius
    equilibria: list[Equilibrium]
    traces: list[SeparatrixTrace]
    edge_polylines: dict = field(default_factory=dict)     # edge id -> list of complex
    edge_kinds: dict = field(default_factory=dict)         # edge id -> outgoing/incoming/heteroclinic/homoclinic
    diagnostics: list = field(default_factory=list)
    attempts: int = 1

    @property
    def resolved(self) -> bool:
        return self.graph is not None

    @property
    def empty(self) -> bool:
        return self.graph is not None and not self.graph.vertices

    def sidecar(self) -> dict:
        def pts(ps):
            return [[float(f"{p.real:.12g}"), float(f"{p.imag:.12g}")] for p in ps]
        return {
            "resolved": self.resolved,
            "field": self.vf.to_dict(),
            "mobius": self.mobius.to_dict(),
            "equilibria": [e.to_dict() for e in self.equilibria],
            "traces": [t.to_dict() for t in self.traces],
            "edges": {str(e): {"kind": self.edge_kinds[e], "polyline": pts(p)} for e, p in self.edge_polylines.items()},
            "diagnostics": self.diagnostics,
            "normalization_attempts": self.attempts,
        }


def _signed_area(poly) -> float:
    x, y = poly.real, poly.imag
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _winding(poly, p) -> int:
    d = poly - p
    ang = np.angle(np.roll(d, -1) / d)
    return int(round(ang.sum() / (2 * math.pi)))


def _order_angle(t: SeparatrixTrace) -> float:
    return t.entry_angle if t.entry_angle is not None else t.arrival_angle


def _face_polygon(graph, walk, polylines):
    parts = []
    for d in walk:
        line = polylines[d.edge]
        parts.append(line if d.end == TAIL else line[::-1])
    return np.concatenate([np.asarray(p, complex) for p in parts])


def infer_containment(graph: EmbeddedGraph, polylines: dict) -> tuple[list[Containment], int]:
    """Containment forest and outer face from trace geometry."""
    local = local_faces(graph)
    ncomp = graph.n_components
    outer, bounded = [], []
    for ci in range(ncomp):
        areas = [_signed_area(_face_polygon(graph, f.walks[0], polylines)) for f in local[ci]]
        o = int(np.argmin(areas))
        outer.append(o)
        bounded.append([(fi, a) for fi, a in enumerate(areas) if fi != o])
    if ncomp == 1:
        return [], outer[0]
    reps = []
    for ci in range(ncomp):
        e = next(e for e in graph.edges if graph.component_of[e.tail] == ci)
        line = polylines[e.id]
        reps.append(complex(line[len(line) // 2]))
    hosts = {}
    for ci in range(ncomp):
        best = None
        for di in range(ncomp):
            if di == ci:
                continue
            for fi, area in bounded[di]:
                poly = _face_polygon(graph, local[di][fi].walks[0], polylines)
                if _winding(poly, reps[ci]) != 0 and (best is None or area < best[2]):
                    best = (di, fi, area)
        hosts[ci] = best
    free = [ci for ci in range(ncomp) if hosts[ci] is None]
    root = free[0] if free else 0
    anchor = {ci: graph.components[ci][0] for ci in range(ncomp)}
    out = []
    for ci in range(ncomp):
        if ci == root:
            continue
        if hosts[ci] is None:
            out.append(Containment(anchor[ci], anchor[root], outer[root], outer[ci]))
        else:
            di, fi, _ = hosts[ci]
            out.append(Containment(anchor[ci], anchor[di], fi, outer[ci]))
    return out, outer[root]


def assemble_graph(vf: RationalVF, mobius: Mobius, equilibria: list[Equilibrium],
                   traces: list[SeparatrixTrace]) -> SeparatrixGraph:
    sg = SeparatrixGraph(None, vf, mobius, equilibria, traces)
    bad = [t for t in traces if not t.resolved]
    for t in bad:
        sg.diagnostics.append({"kind": "unresolved", "saddle": t.saddle, "direction": t.direction, "reason": t.reason})
    if bad:
        return sg

    slot_trace = {(t.saddle, t.direction): t for t in traces}
    saddles = [e for e in equilibria if e.kind == SADDLE and e.location is not None]
    landed = {t.landing for t in traces if t.landing_kind == LANDING_AT_ZERO}
    blacks = [e for e in equilibria if e.id in landed]

    edges, kinds, lines = [], {}, {}
    slot_half: dict = {}                 # (saddle, j) -> HalfEdge
    black_half: dict = {b.id: [] for b in blacks}   # id -> [(angle, HalfEdge)]

    def new_edge(tail, head, kind, line):
        eid = f"e{len(edges)}"
        edges.append(Edge(eid, tail, head))
        kinds[eid] = kind
        lines[eid] = line
        return eid

    for s in saddles:
        for j in range(2 * (s.order + 1)):
            t = slot_trace[(s.id, j)]
            if t.landing_kind == LANDING_AT_ZERO:
                if t.orientation == "outgoing":
                    eid = new_edge(s.id, t.landing, "outgoing", list(t.points))
                    slot_half[(s.id, j)] = HalfEdge(eid, TAIL)
                    black_half[t.landing].append((_order_angle(t), HalfEdge(eid, HEAD)))
                else:
                    eid = new_edge(t.landing, s.id, "incoming", list(t.points)[::-1])
                    slot_half[(s.id, j)] = HalfEdge(eid, HEAD)
                    black_half[t.landing].append((_order_angle(t), HalfEdge(eid, TAIL)))
                continue
            partner = slot_trace.get((t.landing, t.matched_direction))
            if partner is None or partner.landing != s.id or partner.matched_direction != j:
                sg.diagnostics.append({"kind": "unmatched pole direction", "saddle": s.id, "direction": j,
                                       "lands_at": t.landing, "matched_direction": t.matched_direction})
                continue
            if t.orientation == "outgoing":
                eid = new_edge(s.id, t.landing, t.landing_kind, list(t.points))
                slot_half[(s.id, j)] = HalfEdge(eid, TAIL)
                slot_half[(t.landing, t.matched_direction)] = HalfEdge(eid, HEAD)
    if any(d["kind"] == "unmatched pole direction" for d in sg.diagnostics):
        return sg

    rotation = {}
    for s in saddles:
        rotation[s.id] = [slot_half[(s.id, j)] for j in range(2 * (s.order + 1))]
    for b in blacks:
        rotation[b.id] = [h for _, h in sorted(black_half[b.id], key=lambda t: t[0] % (2 * math.pi))]
    vertices = [Vertex(s.id, WHITE) for s in saddles] + [Vertex(b.id, BLACK) for b in blacks]
    bare = EmbeddedGraph(vertices, edges, rotation)
    try:
        containment, outer = infer_containment(bare, lines) if edges else ([], 0)
        graph = EmbeddedGraph(vertices, edges, rotation, containment, outer)
        faces(graph)
    except GraphError as exc:
        # angles at a black vertex came out in an impossible order
        sg.diagnostics.append({"kind": "inconsistent embedding", "message": str(exc)})
        return sg
    sg.graph = graph
    sg.edge_polylines, sg.edge_kinds = lines, kinds
    return sg


def extract(vf: RationalVF, seed: int = 0, config: TraceConfig | None = None,
            tol_root: float = TOL_ROOT, tol_center: float = TOL_CENTER,
            max_attempts: int = 4, infinity_margin: float = 1e-6) -> SeparatrixGraph:
    """Normalize, classify, trace and assemble.  When a separatrix passes
    within ``infinity_margin`` of the point at infinity, the normalization is
    redrawn so that infinity is away from the graph."""
    check_coprime(vf, tol_root)
    for attempt in range(max_attempts):
        nvf, mob = normalize_infinity(vf, seed, attempt, tol_root)
        eqs = classify_equilibria(nvf, tol_root, tol_center)
        if not any(e.kind == SADDLE for e in eqs):
            sg = SeparatrixGraph(EmbeddedGraph([], [], {}), nvf, mob, eqs, [])
            sg.diagnostics.append({"kind": "note", "message": "degree 2 field: the separatrix graph is empty"})
            return sg
        traces = trace_all(nvf, eqs, config)
        close = min((t.closest_to_infinity for t in traces), default=math.inf)
        if close >= infinity_margin or attempt == max_attempts - 1:
            break
    sg = assemble_graph(nvf, mob, eqs, traces)
    sg.attempts = attempt + 1
    if close < infinity_margin:
        sg.diagnostics.append({"kind": "warning", "message": "a separatrix passes close to infinity"})
    return sg
