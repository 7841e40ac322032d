"""Rectified zones of an admissible graph and the degree bookkeeping.

In rectifying coordinates the field is the unit field pointing right, so
the face on the left of an edge sees that edge on its lower boundary and
the face on its right sees it on its upper boundary.  With that convention

    center face     -> half-infinite cylinder, upper if the face is left of
                       its boundary cycle, lower otherwise; circumference =
                       total boundary length
    annular face    -> finite cylinder of height 1 (both boundaries must
                       have the same length)
    elliptic face   -> half-plane, upper or lower as for centers
    parallel face   -> strip of height 1

Edges touching a black vertex are infinite rays in every zone they bound;
their entry in a boundary word has length ``None``.  Shears are 0.

Degrees follow from the white valences alone:  a white vertex of valence v
is a pole of order v/2 - 1, so deg Q = sum (v/2 - 1) and deg P = deg Q + 2.
The same deg P must come out of the zeros: each black vertex with r
reversals is a zero of order r/2 + 1, and every center zone holds one simple
zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .admissibility import ANNULAR, CENTER, ELLIPTIC, PARALLEL, check_admissible
from .graph_core import TAIL, WHITE, EmbeddedGraph, FaceSet, GraphError, cyclic_reversals, faces, valence
from .length_solver import LengthAssignment, solve_lengths

HALF_INFINITE_CYLINDER = "half_infinite_cylinder"
FINITE_CYLINDER = "finite_cylinder"
HALF_PLANE = "half_plane"
STRIP = "strip"

ZONE_OF_CLASS = {CENTER: HALF_INFINITE_CYLINDER, ANNULAR: FINITE_CYLINDER, ELLIPTIC: HALF_PLANE, PARALLEL: STRIP}


class ZoneError(GraphError):
    """Faces cannot be turned into zones (unclassified face, length mismatch)."""


@dataclass(frozen=True)
class BoundaryWord:
    side: str                      # "lower" or "upper"
    cyclic: bool
    vertices: tuple                # vertex at the start of each edge
    edges: tuple                   # edge ids in flow order
    lengths: tuple                 # Fraction, or None for an infinite ray

    @property
    def total(self):
        if any(x is None for x in self.lengths):
            return None
        return sum(self.lengths, Fraction(0))

    def to_dict(self):
        from .io import fraction_to_str
        return {
            "side": self.side,
            "cyclic": self.cyclic,
            "vertices": list(self.vertices),
            "edges": list(self.edges),
            "lengths": [None if x is None else fraction_to_str(x) for x in self.lengths],
        }


@dataclass(frozen=True)
class Zone:
    face: int
    kind: str
    sign: int                      # +1 upper, -1 lower, 0 for finite cylinders and strips
    boundary: tuple[BoundaryWord, ...]
    circumference: Fraction | None = None
    height: Fraction | None = None
    shear: Fraction = Fraction(0)

    @property
    def euler_characteristic(self) -> int:
        # closed zones: punctured disks filled in, annuli stay annuli
        return 0 if self.kind == FINITE_CYLINDER else 1

    def to_dict(self):
        from .io import fraction_to_str
        return {
            "face": self.face,
            "kind": self.kind,
            "sign": self.sign,
            "boundary": [w.to_dict() for w in self.boundary],
            "circumference": None if self.circumference is None else fraction_to_str(self.circumference),
            "height": None if self.height is None else fraction_to_str(self.height),
            "shear": fraction_to_str(self.shear),
        }


@dataclass
class RectifiedSurface:
    zones: list[Zone]
    gluing: dict                   # edge id -> {"lower": zone face, "upper": zone face}
    punctures: list                # ("black", vertex id) and ("center", face index)
    euler_characteristic: int

    def to_dict(self):
        return {
            "zones": [z.to_dict() for z in self.zones],
            "gluing": {str(e): g for e, g in self.gluing.items()},
            "punctures": [{"kind": k, "at": a} for k, a in self.punctures],
            "euler_characteristic": self.euler_characteristic,
        }


def _word(graph, walk, lengths, side, cyclic, rotate_to=None):
    walk = list(walk)
    if rotate_to is not None:
        walk = walk[rotate_to:] + walk[:rotate_to]
    if side == "upper":
        # an upper boundary is traversed against the flow by the face walk
        walk = [graph.opposite(d) for d in reversed(walk)]
    edges = tuple(d.edge for d in walk)
    verts = tuple(graph.origin(d) for d in walk)

    def length(eid):
        e = graph.edge(eid)
        if graph.color(e.tail) != WHITE or graph.color(e.head) != WHITE:
            return None
        return Fraction(lengths[eid])

    return BoundaryWord(side, cyclic, verts, edges, tuple(length(e) for e in edges))


def build_zones(graph: EmbeddedGraph, face_set: FaceSet | None = None,
                lengths: LengthAssignment | dict | None = None) -> RectifiedSurface:
    """Requires every face to be classified (the full admissibility verdict
    is not needed, so non-generic inputs such as nested 2-cycles work)."""
    if face_set is None:
        face_set = faces(graph)
    report = check_admissible(graph, face_set)
    bad = [fc.index for fc in report.face_classes if fc.cls is None]
    if bad:
        raise ZoneError(f"faces {bad} are not center, annular, elliptic or parallel")
    if lengths is None:
        lengths = solve_lengths(graph, face_set)
    if isinstance(lengths, LengthAssignment):
        lengths = lengths.lengths

    zones = []
    for fc in report.face_classes:
        face = face_set[fc.index]
        kind = ZONE_OF_CLASS[fc.cls]
        if fc.cls in (CENTER, ELLIPTIC):
            (walk,) = face.walks
            left = walk[0].end == TAIL
            side = "lower" if left else "upper"
            if fc.cls == ELLIPTIC:
                start = fc.witness["black_positions"][0]
                word = _word(graph, walk, lengths, side, False, start)
                zones.append(Zone(fc.index, kind, 1 if left else -1, (word,)))
            else:
                word = _word(graph, walk, lengths, side, True)
                zones.append(Zone(fc.index, kind, 1 if left else -1, (word,), circumference=word.total))
        elif fc.cls == ANNULAR:
            words = []
            for walk in face.walks:
                side = "lower" if walk[0].end == TAIL else "upper"
                words.append(_word(graph, walk, lengths, side, True))
            words.sort(key=lambda w: w.side)
            if words[0].total != words[1].total:
                raise ZoneError(f"annulus {fc.index}: boundary lengths {words[0].total} != {words[1].total}")
            zones.append(Zone(fc.index, kind, 0, tuple(words), circumference=words[0].total, height=Fraction(1)))
        else:
            (walk,) = face.walks
            i, j = fc.witness["black_positions"]
            seg1, seg2 = list(walk[i:j]), list(walk[j:]) + list(walk[:i])
            fwd, bwd = (seg1, seg2) if seg1[0].end == TAIL else (seg2, seg1)
            lower = _word(graph, fwd, lengths, "lower", False)
            upper = _word(graph, bwd, lengths, "upper", False)
            zones.append(Zone(fc.index, kind, 0, (lower, upper), height=Fraction(1)))

    gluing: dict = {e.id: {} for e in graph.edges}
    for z in zones:
        for w in z.boundary:
            for eid in w.edges:
                if w.side in gluing[eid]:
                    raise ZoneError(f"edge {eid} lies on two {w.side} boundaries")
                gluing[eid][w.side] = z.face
    missing = [e for e, g in gluing.items() if set(g) != {"lower", "upper"}]
    if missing:
        raise ZoneError(f"edges {missing} are not glued on both sides")

    punctures = [("black", b) for b in graph.black]
    punctures += [("center", z.face) for z in zones if z.kind == HALF_INFINITE_CYLINDER]
    chi = len(graph.vertices) - len(graph.edges) + sum(z.euler_characteristic for z in zones)
    return RectifiedSurface(zones, gluing, punctures, chi)


@dataclass
class DegreeReport:
    deg_Q: int
    deg_P: int
    deg_P_from_zeros: int
    zero_orders: dict              # black vertex -> r/2 + 1
    pole_orders: dict              # white vertex -> v/2 - 1
    centers: int | Fraction
    zone_counts: dict              # predicted from vertex data
    face_counts: dict              # observed from the face classification
    edges: int
    total_white_valence: int
    connections: int               # white-to-white edges
    checks: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return all(self.checks.values())

    def to_dict(self):
        c = self.centers
        return {
            "deg_P": self.deg_P,
            "deg_Q": self.deg_Q,
            "deg_P_from_zeros": self.deg_P_from_zeros,
            "zero_orders": {str(k): v for k, v in self.zero_orders.items()},
            "pole_orders": {str(k): v for k, v in self.pole_orders.items()},
            "centers": int(c) if Fraction(c).denominator == 1 else str(c),
            "zone_counts": self.zone_counts,
            "face_counts": self.face_counts,
            "edges": self.edges,
            "total_white_valence": self.total_white_valence,
            "connections": self.connections,
            "checks": self.checks,
        }


def degree_report(graph: EmbeddedGraph, face_set: FaceSet | None = None) -> DegreeReport:
    report = check_admissible(graph, face_set)
    t = report.totals
    pole = {w: valence(graph, w) // 2 - 1 for w in graph.white}
    zero = {b: cyclic_reversals(graph, b) // 2 + 1 for b in graph.black}
    deg_q = sum(pole.values())
    c = report.centers
    deg_p_zeros = sum(zero.values()) + c
    h = sum(1 for e in graph.edges if graph.color(e.tail) == WHITE and graph.color(e.head) == WHITE)
    strips2 = sum(valence(graph, b) - cyclic_reversals(graph, b) for b in graph.black)
    predicted = {
        HALF_PLANE: t.total_reversals,
        STRIP: Fraction(strips2, 2),
        HALF_INFINITE_CYLINDER: c,
        FINITE_CYLINDER: graph.n_components - 1,
    }
    predicted = {k: int(v) if Fraction(v).denominator == 1 else str(v) for k, v in predicted.items()}
    counts = report.counts()
    observed = {ZONE_OF_CLASS[k]: counts[k] for k in ZONE_OF_CLASS}
    checks = {
        "deg_P_chain": deg_p_zeros == deg_q + 2,
        "white_valence": t.total_valence == 2 * (deg_q + t.q),
        "edge_count": len(graph.edges) == t.total_valence - h,
        "zone_counts": predicted == observed,
        "zone_total": sum(observed.values()) == len(report.face_set),
    }
    return DegreeReport(deg_q, deg_q + 2, int(deg_p_zeros) if Fraction(deg_p_zeros).denominator == 1 else deg_p_zeros,
                        zero, pole, c, predicted, observed, len(graph.edges), t.total_valence, h, checks)
