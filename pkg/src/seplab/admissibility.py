"""Admissibility of an embedded bicolored graph as a separatrix graph.

Every face of the complement is sorted into one of four classes:

center
    simply connected, bounded by one coherently oriented cycle of white
    vertices (becomes a half-infinite cylinder);
annular
    doubly connected, white boundary, both boundary cycles coherent and
    running the same way around the annulus, which means the annulus is on
    the left of one cycle and on the right of the other;
elliptic
    simply connected, one black vertex on a coherent cycle from that vertex
    back to itself (becomes a half-plane);
parallel
    simply connected, two distinct black vertices, boundary made of two
    directed paths from one of them to the other (becomes a strip).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .graph_core import (
    DOUBLY_CONNECTED,
    SIMPLY_CONNECTED,
    TAIL,
    WHITE,
    EmbeddedGraph,
    Face,
    FaceSet,
    cyclic_reversals,
    faces,
    valence,
)

CENTER = "center"
ANNULAR = "annular"
ELLIPTIC = "elliptic"
PARALLEL = "parallel"
FACE_CLASSES = (CENTER, ANNULAR, ELLIPTIC, PARALLEL)

CONDITIONS = ("size", "a", "b", "c", "d", "e", "f", "g", "h", "i")


@dataclass(frozen=True)
class Totals:
    total_valence: int      # sum of valences over white vertices
    total_reversals: int    # sum of cyclic reversals over black vertices
    p: int
    q: int
    k: int

    def to_dict(self):
        return {"V": self.total_valence, "R": self.total_reversals, "p": self.p, "q": self.q, "k": self.k}


@dataclass(frozen=True)
class FaceClass:
    index: int
    cls: str | None
    witness: dict = field(default_factory=dict)

    def to_dict(self):
        return {"face": self.index, "class": self.cls, "witness": self.witness}


@dataclass(frozen=True)
class ConditionResult:
    ok: bool
    witness: Any = None

    def to_dict(self):
        return {"status": "pass" if self.ok else "fail", "witness": self.witness}


@dataclass
class AdmissibilityReport:
    verdict: bool
    conditions: dict[str, ConditionResult]
    totals: Totals
    centers: int | Fraction
    face_classes: list[FaceClass]
    face_set: FaceSet = field(repr=False, default=None)

    def counts(self) -> dict[str, int]:
        out = {c: 0 for c in FACE_CLASSES}
        out["none"] = 0
        for fc in self.face_classes:
            out[fc.cls or "none"] += 1
        return out

    def failed(self) -> list[str]:
        return [k for k, r in self.conditions.items() if not r.ok]

    def to_dict(self):
        c = self.centers
        return {
            "admissible": self.verdict,
            "conditions": {k: r.to_dict() for k, r in self.conditions.items()},
            "totals": self.totals.to_dict(),
            "centers_expected": int(c) if Fraction(c).denominator == 1 else str(c),
            "face_counts": self.counts(),
            "faces": [fc.to_dict() for fc in self.face_classes],
        }


def totals(graph: EmbeddedGraph) -> Totals:
    return Totals(
        total_valence=sum(valence(graph, w) for w in graph.white),
        total_reversals=sum(cyclic_reversals(graph, b) for b in graph.black),
        p=len(graph.black),
        q=len(graph.white),
        k=len(graph.edges),
    )


def count_centers(t: Totals) -> int | Fraction:
    """Number of center regions forced by the index formula.  Negative when
    the index inequality fails; a Fraction only for odd white valence."""
    c = Fraction(t.total_valence, 2) - t.q + 2 - (t.p + Fraction(t.total_reversals, 2))
    return int(c) if c.denominator == 1 else c


def _walk_profile(graph: EmbeddedGraph, walk):
    starts = [graph.origin(d) for d in walk]
    forward = [d.end == TAIL for d in walk]
    return starts, forward


def _coherence(forward) -> str | None:
    if all(forward):
        return "left"     # face lies to the left of every edge
    if not any(forward):
        return "right"
    return None


def classify_face(graph: EmbeddedGraph, face: Face) -> FaceClass:
    if face.isolated or not face.walks:
        return FaceClass(face.index, None, {"reason": "boundary contains an isolated vertex"})
    profiles = [_walk_profile(graph, w) for w in face.walks]
    colors = [[graph.color(v) for v in starts] for starts, _ in profiles]
    witness: dict = {
        "boundary_colors": colors,
        "boundary_vertices": [list(starts) for starts, _ in profiles],
        "edge_sides": [["left" if f else "right" for f in fwd] for _, fwd in profiles],
    }

    if face.connectivity == DOUBLY_CONNECTED:
        sides = [_coherence(fwd) for _, fwd in profiles]
        witness["walk_orientation"] = sides
        if any(c != WHITE for cs in colors for c in cs):
            witness["reason"] = "annulus boundary contains a black vertex"
            return FaceClass(face.index, None, witness)
        if None in sides:
            witness["reason"] = "annulus boundary cycle is not coherently oriented"
            return FaceClass(face.index, None, witness)
        if sides[0] == sides[1]:
            witness["reason"] = "annulus boundary cycles run in opposite senses"
            return FaceClass(face.index, None, witness)
        return FaceClass(face.index, ANNULAR, witness)

    if face.connectivity != SIMPLY_CONNECTED:
        witness["reason"] = f"face has {face.n_boundaries} boundary components"
        return FaceClass(face.index, None, witness)

    (starts, fwd), = profiles
    cols = colors[0]
    blacks = [i for i, c in enumerate(cols) if c != WHITE]
    side = _coherence(fwd)
    witness["walk_orientation"] = side
    witness["black_positions"] = blacks

    if not blacks:
        if side is None:
            witness["reason"] = "white cycle is not coherently oriented"
            return FaceClass(face.index, None, witness)
        return FaceClass(face.index, CENTER, witness)

    if len(blacks) == 1:
        if side is None:
            witness["reason"] = "cycle through one black vertex is not coherently oriented"
            return FaceClass(face.index, None, witness)
        if len(cols) < 2:
            witness["reason"] = "no white vertex on the boundary"
            return FaceClass(face.index, None, witness)
        return FaceClass(face.index, ELLIPTIC, witness)

    if len(blacks) == 2:
        i, j = blacks
        if starts[i] == starts[j]:
            witness["reason"] = "the two black boundary visits are the same vertex"
            return FaceClass(face.index, None, witness)
        seg1 = fwd[i:j]
        seg2 = fwd[j:] + fwd[:i]
        if (all(seg1) and not any(seg2)) or (all(seg2) and not any(seg1)):
            src, dst = (starts[i], starts[j]) if all(seg1) else (starts[j], starts[i])
            witness["from"], witness["to"] = src, dst
            return FaceClass(face.index, PARALLEL, witness)
        witness["reason"] = "boundary is not two directed paths between the black vertices"
        return FaceClass(face.index, None, witness)

    witness["reason"] = f"{len(blacks)} black vertex visits on the boundary"
    return FaceClass(face.index, None, witness)


def check_admissible(graph: EmbeddedGraph, face_set: FaceSet | None = None) -> AdmissibilityReport:
    if face_set is None:
        face_set = faces(graph)
    t = totals(graph)
    cond: dict[str, ConditionResult] = {}

    cond["size"] = ConditionResult(t.q >= 1 and t.k >= 2, {"q": t.q, "k": t.k})

    isolated = [v.id for v in graph.vertices if valence(graph, v.id) == 0]
    cond["a"] = ConditionResult(not isolated, {"isolated": isolated} if isolated else None)

    bad_edges = [e.id for e in graph.edges
                 if graph.color(e.tail) != WHITE and graph.color(e.head) != WHITE]
    cond["b"] = ConditionResult(not bad_edges, {"black_black_edges": bad_edges} if bad_edges else None)

    bad_white = []
    for w in graph.white:
        v, r = valence(graph, w), cyclic_reversals(graph, w)
        if v != r or v % 2 or v < 4:
            bad_white.append({"vertex": w, "valence": v, "reversals": r})
    cond["c"] = ConditionResult(not bad_white, bad_white or None)

    bad_black = []
    for b in graph.black:
        r = cyclic_reversals(graph, b)
        if r % 2:
            bad_black.append({"vertex": b, "reversals": r})
    cond["d"] = ConditionResult(not bad_black, bad_black or None)

    c = count_centers(t)
    lhs = t.p + Fraction(t.total_reversals, 2)
    rhs = 2 - t.q + Fraction(t.total_valence, 2)
    e_ok = lhs <= rhs
    cond["e"] = ConditionResult(e_ok, {"lhs": str(lhs), "rhs": str(rhs), "equality": lhs == rhs})

    classes = [classify_face(graph, f) for f in face_set]
    by_class: dict[str | None, list[int]] = {}
    for fc in classes:
        by_class.setdefault(fc.cls, []).append(fc.index)

    n_needed = graph.n_components - 1
    not_simple = [f for f in face_set if f.connectivity != SIMPLY_CONNECTED]
    multiply = [f.index for f in not_simple if f.connectivity != DOUBLY_CONNECTED]
    doubly_bad = [fc.index for fc in classes
                  if face_set[fc.index].connectivity == DOUBLY_CONNECTED and fc.cls != ANNULAR]
    f_ok = not multiply and not doubly_bad and len(not_simple) == n_needed
    cond["f"] = ConditionResult(f_ok, {
        "components": graph.n_components,
        "annular_required": n_needed,
        "doubly_connected_faces": [f.index for f in not_simple if f.connectivity == DOUBLY_CONNECTED],
        "multiply_connected_faces": multiply,
        "unclassified_doubly_connected": doubly_bad,
    })

    n_center = len(by_class.get(CENTER, []))
    g_ok = e_ok and Fraction(c) >= 0 and n_center == c
    g_wit = {"c": str(c), "center_faces": by_class.get(CENTER, [])}
    if Fraction(c) < 0:
        g_wit["reason"] = "c < 0 (index inequality fails)"
    cond["g"] = ConditionResult(g_ok, g_wit)

    n_ell = len(by_class.get(ELLIPTIC, []))
    cond["h"] = ConditionResult(n_ell == t.total_reversals,
                                {"R": t.total_reversals, "elliptic_faces": by_class.get(ELLIPTIC, [])})

    rest_bad = [fc.index for fc in classes
                if face_set[fc.index].connectivity == SIMPLY_CONNECTED and fc.cls is None]
    cond["i"] = ConditionResult(not rest_bad, {
        "parallel_faces": by_class.get(PARALLEL, []),
        "unclassified": [classes[i].to_dict() for i in rest_bad],
    })

    verdict = all(r.ok for r in cond.values())
    return AdmissibilityReport(verdict, cond, t, c, classes, face_set)
