"""Embedded planar directed bicolored multigraphs.

A graph is given combinatorially: each vertex carries a cyclic,
counterclockwise list of half-edges (its rotation), and disconnected
graphs carry a containment forest saying which face of which component
holds every other component.  Faces are traced with the face kept on the
left of the walk, so a dart traversed along its edge direction means the
face lies to the left of that edge.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, NamedTuple, Sequence

WHITE = "white"
BLACK = "black"
COLORS = (WHITE, BLACK)

TAIL = "tail"
HEAD = "head"

SIMPLY_CONNECTED = "simply_connected"
DOUBLY_CONNECTED = "doubly_connected"
MULTIPLY_CONNECTED = "multiply_connected"


class GraphError(ValueError):
    """Malformed graph data (unknown ids, broken rotation, bad containment)."""


class EmbeddingError(GraphError):
    """The rotation system does not describe a planar embedding."""


@dataclass(frozen=True)
class Vertex:
    id: Hashable
    color: str


@dataclass(frozen=True)
class Edge:
    id: Hashable
    tail: Hashable
    head: Hashable

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


class HalfEdge(NamedTuple):
    edge: Hashable
    end: str


@dataclass(frozen=True)
class Containment:
    """``component`` (any vertex of it) sits inside face ``host_face`` of the
    component containing ``host``.  ``component_face`` is the face of the
    placed component that faces the host (its outer face)."""

    component: Hashable
    host: Hashable
    host_face: int
    component_face: int = 0


@dataclass(frozen=True)
class Face:
    index: int
    walks: tuple[tuple[HalfEdge, ...], ...]
    isolated: tuple[Hashable, ...] = ()
    components: tuple[int, ...] = ()
    outer: bool = False

    @property
    def n_boundaries(self) -> int:
        return len(self.walks) + len(self.isolated)

    @property
    def connectivity(self) -> str:
        n = self.n_boundaries
        if n <= 1:
            return SIMPLY_CONNECTED
        if n == 2:
            return DOUBLY_CONNECTED
        return MULTIPLY_CONNECTED

    @property
    def darts(self) -> tuple[HalfEdge, ...]:
        return tuple(d for w in self.walks for d in w)


@dataclass(frozen=True)
class FaceSet:
    faces: tuple[Face, ...]
    # per component, the faces found by rotation traversal before merging
    local: tuple[tuple[Face, ...], ...] = field(repr=False, default=())

    def __iter__(self):
        return iter(self.faces)

    def __len__(self):
        return len(self.faces)

    def __getitem__(self, i):
        return self.faces[i]

    def count(self, connectivity: str) -> int:
        return sum(1 for f in self.faces if f.connectivity == connectivity)

    @property
    def outer_face(self) -> Face | None:
        for f in self.faces:
            if f.outer:
                return f
        return None


class EmbeddedGraph:
    """Vertices, edges, rotation system and containment forest.

    ``rotation`` maps a vertex id to its counterclockwise list of
    ``HalfEdge`` (or ``(edge, end)`` pairs).  Vertices without edges may be
    omitted from it.  ``outer_face`` is the local face index of the root
    component that is treated as the face at infinity.
    """

    def __init__(
        self,
        vertices: Iterable[Vertex],
        edges: Iterable[Edge],
        rotation: dict,
        containment: Iterable[Containment] = (),
        outer_face: int = 0,
    ):
        self.vertices: tuple[Vertex, ...] = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(edges)
        self._vertex = {}
        for v in self.vertices:
            if v.id in self._vertex:
                raise GraphError(f"duplicate vertex id {v.id!r}")
            if v.color not in COLORS:
                raise GraphError(f"vertex {v.id!r}: color must be white or black, got {v.color!r}")
            self._vertex[v.id] = v
        self._edge = {}
        self._edge_index = {}
        for i, e in enumerate(self.edges):
            if e.id in self._edge:
                raise GraphError(f"duplicate edge id {e.id!r}")
            for x in (e.tail, e.head):
                if x not in self._vertex:
                    raise GraphError(f"edge {e.id!r} references unknown vertex {x!r}")
            self._edge[e.id] = e
            self._edge_index[e.id] = i
        self.rotation: dict = {}
        for vid in rotation:
            if vid not in self._vertex:
                raise GraphError(f"rotation given for unknown vertex {vid!r}")
        for v in self.vertices:
            self.rotation[v.id] = tuple(HalfEdge(*h) for h in rotation.get(v.id, ()))
        self._check_rotation()
        self.containment: tuple[Containment, ...] = tuple(containment)
        self.outer_face = outer_face
        self._components()

    # -- basic lookup -------------------------------------------------

    def vertex(self, vid) -> Vertex:
        try:
            return self._vertex[vid]
        except KeyError:
            raise GraphError(f"unknown vertex {vid!r}") from None

    def edge(self, eid) -> Edge:
        try:
            return self._edge[eid]
        except KeyError:
            raise GraphError(f"unknown edge {eid!r}") from None

    def color(self, vid) -> str:
        return self.vertex(vid).color

    @property
    def white(self) -> list:
        return [v.id for v in self.vertices if v.color == WHITE]

    @property
    def black(self) -> list:
        return [v.id for v in self.vertices if v.color == BLACK]

    def half_edge_id(self, h: HalfEdge) -> int:
        return 2 * self._edge_index[h.edge] + (0 if h.end == TAIL else 1)

    def origin(self, h: HalfEdge):
        """Vertex at which the half-edge sits."""
        e = self._edge[h.edge]
        return e.tail if h.end == TAIL else e.head

    @staticmethod
    def opposite(h: HalfEdge) -> HalfEdge:
        return HalfEdge(h.edge, HEAD if h.end == TAIL else TAIL)

    def _check_rotation(self):
        seen = set()
        for vid, hs in self.rotation.items():
            for h in hs:
                if h.edge not in self._edge:
                    raise GraphError(f"rotation at {vid!r} references unknown edge {h.edge!r}")
                if h.end not in (TAIL, HEAD):
                    raise GraphError(f"half-edge end must be 'tail' or 'head', got {h.end!r}")
                if h in seen:
                    raise GraphError(f"half-edge {tuple(h)} listed twice in the rotation system")
                if self.origin(h) != vid:
                    raise GraphError(f"half-edge {tuple(h)} is listed at {vid!r} but belongs to {self.origin(h)!r}")
                seen.add(h)
        missing = [(e.id, end) for e in self.edges for end in (TAIL, HEAD) if HalfEdge(e.id, end) not in seen]
        if missing:
            raise GraphError(f"half-edges missing from the rotation system: {missing}")
        self._position = {h: (vid, i) for vid, hs in self.rotation.items() for i, h in enumerate(hs)}

    def _components(self):
        parent = {v.id: v.id for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            a, b = find(e.tail), find(e.head)
            if a != b:
                parent[b] = a
        order: dict = {}
        for v in self.vertices:
            order.setdefault(find(v.id), len(order))
        self.component_of = {v.id: order[find(v.id)] for v in self.vertices}
        comps: list[list] = [[] for _ in order]
        for v in self.vertices:
            comps[self.component_of[v.id]].append(v.id)
        self.components: tuple[tuple, ...] = tuple(tuple(c) for c in comps)

    @property
    def n_components(self) -> int:
        return len(self.components)

    def successor(self, h: HalfEdge) -> HalfEdge:
        """Next half-edge counterclockwise around its vertex."""
        vid, i = self._position[h]
        hs = self.rotation[vid]
        return hs[(i + 1) % len(hs)]

    def predecessor(self, h: HalfEdge) -> HalfEdge:
        vid, i = self._position[h]
        hs = self.rotation[vid]
        return hs[(i - 1) % len(hs)]

    def __repr__(self):
        return (f"EmbeddedGraph(p={len(self.black)}, q={len(self.white)}, "
                f"k={len(self.edges)}, components={self.n_components})")


def valence(graph: EmbeddedGraph, vid) -> int:
    graph.vertex(vid)
    return len(graph.rotation[vid])


def directions(graph: EmbeddedGraph, vid) -> list[str]:
    """Cyclic in/out pattern around a vertex, in rotation order."""
    graph.vertex(vid)
    return ["out" if h.end == TAIL else "in" for h in graph.rotation[vid]]


def cyclic_reversals(graph: EmbeddedGraph, vid) -> int:
    pattern = directions(graph, vid)
    n = len(pattern)
    return sum(1 for i in range(n) if pattern[i] != pattern[(i + 1) % n])


def trace_walks(graph: EmbeddedGraph, darts: Iterable[HalfEdge] | None = None) -> list[tuple[HalfEdge, ...]]:
    """Boundary walks of the rotation system, each rotated to start at its
    smallest half-edge id.  Walks keep their face on the left."""
    if darts is None:
        darts = [HalfEdge(e.id, end) for e in graph.edges for end in (TAIL, HEAD)]
    todo = sorted(darts, key=graph.half_edge_id)
    used = set()
    walks = []
    for start in todo:
        if start in used:
            continue
        walk = []
        d = start
        while d not in used:
            used.add(d)
            walk.append(d)
            d = graph.predecessor(graph.opposite(d))
        if d != start:  # cannot happen for a permutation; guards corrupt rotations
            raise GraphError("face traversal did not close")
        walks.append(tuple(walk))
    return walks


def walk_key(graph: EmbeddedGraph, walk: Sequence[HalfEdge]) -> int:
    return min(graph.half_edge_id(d) for d in walk)


def local_faces(graph: EmbeddedGraph) -> tuple[tuple[Face, ...], ...]:
    """Faces of every component traced on its own, with genus check."""
    by_comp: list[list] = [[] for _ in graph.components]
    for e in graph.edges:
        c = graph.component_of[e.tail]
        by_comp[c].extend([HalfEdge(e.id, TAIL), HalfEdge(e.id, HEAD)])
    out = []
    for ci, darts in enumerate(by_comp):
        verts = graph.components[ci]
        if not darts:
            out.append((Face(0, (), isolated=(verts[0],), components=(ci,)),))
            continue
        walks = sorted(trace_walks(graph, darts), key=lambda w: walk_key(graph, w))
        n_edges = len(darts) // 2
        chi = len(verts) - n_edges + len(walks)
        if chi != 2:
            genus = (2 - chi) // 2
            raise EmbeddingError(
                f"non-planar embedding: component containing {verts[0]!r} has genus {genus} "
                f"(v={len(verts)}, e={n_edges}, f={len(walks)})")
        out.append(tuple(Face(i, (w,), components=(ci,)) for i, w in enumerate(walks)))
    return tuple(out)


def _containment_forest(graph: EmbeddedGraph, local) -> tuple[int, dict]:
    ncomp = graph.n_components
    placed: dict[int, Containment] = {}
    for c in graph.containment:
        if c.component not in graph._vertex or c.host not in graph._vertex:
            raise GraphError(f"containment references unknown vertex: {c}")
        ci, hi = graph.component_of[c.component], graph.component_of[c.host]
        if ci == hi:
            raise GraphError(f"component of {c.component!r} cannot contain itself")
        if ci in placed:
            raise GraphError(f"component of {c.component!r} placed twice")
        if not 0 <= c.host_face < len(local[hi]):
            raise GraphError(f"host face {c.host_face} does not exist in component of {c.host!r} "
                             f"({len(local[hi])} faces)")
        if not 0 <= c.component_face < len(local[ci]):
            raise GraphError(f"component face {c.component_face} does not exist in component of {c.component!r}")
        placed[ci] = c
    roots = [i for i in range(ncomp) if i not in placed]
    if len(roots) != 1:
        raise GraphError(
            f"containment forest must leave exactly one root component; {ncomp} components, "
            f"{len(placed)} placed")
    root = roots[0]
    for ci in placed:
        seen = {ci}
        cur = ci
        while cur != root:
            cur = graph.component_of[placed[cur].host]
            if cur in seen:
                raise GraphError("containment forest has a cycle")
            seen.add(cur)
    if not 0 <= graph.outer_face < len(local[root]):
        raise GraphError(f"outer face {graph.outer_face} does not exist in the root component")
    return root, placed


def faces(graph: EmbeddedGraph) -> FaceSet:
    """All faces of the embedding, components merged along the forest.

    Face order is by the smallest half-edge id on any boundary walk
    (half-edge id = 2 * edge position + (0 for tail, 1 for head)).
    """
    local = local_faces(graph)
    root, placed = _containment_forest(graph, local)

    parent = {(ci, fi): (ci, fi) for ci, fs in enumerate(local) for fi in range(len(fs))}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ci, c in sorted(placed.items()):
        hi = graph.component_of[c.host]
        a, b = find((hi, c.host_face)), find((ci, c.component_face))
        if a != b:
            parent[b] = a

    groups: dict = {}
    for key in parent:
        groups.setdefault(find(key), []).append(key)

    vertex_rank = {v.id: i for i, v in enumerate(graph.vertices)}
    big = 2 * len(graph.edges)
    merged = []
    outer_root = find((root, graph.outer_face))
    for rep, members in groups.items():
        walks, isolated, comps = [], [], []
        for ci, fi in sorted(members):
            f = local[ci][fi]
            walks.extend(f.walks)
            isolated.extend(f.isolated)
            comps.append(ci)
        walks.sort(key=lambda w: walk_key(graph, w))
        if walks:
            key = walk_key(graph, walks[0])
        else:
            key = big + min(vertex_rank[v] for v in isolated)
        merged.append((key, tuple(walks), tuple(isolated), tuple(sorted(set(comps))), rep == outer_root))
    merged.sort(key=lambda t: t[0])
    out = tuple(Face(i, w, iso, comps, outer) for i, (_, w, iso, comps, outer) in enumerate(merged))
    return FaceSet(out, local)


def euler_check(graph: EmbeddedGraph, face_set: FaceSet | None = None) -> tuple[bool, dict]:
    """Euler count v - e + f = 2 with f the simply connected faces only.

    The report also carries the auxiliary-edge form: one extra edge per
    annular face gives a connected graph with e + N edges and f + N faces.
    """
    if face_set is None:
        face_set = faces(graph)
    v, e = len(graph.vertices), len(graph.edges)
    f = face_set.count(SIMPLY_CONNECTED)
    n_annular = face_set.count(DOUBLY_CONNECTED)
    n_multi = face_set.count(MULTIPLY_CONNECTED)
    n_comp = graph.n_components
    chi = v - e + f
    report = {
        "v": v,
        "e": e,
        "f_simply_connected": f,
        "f_doubly_connected": n_annular,
        "f_multiply_connected": n_multi,
        "components": n_comp,
        "chi": chi,
        "auxiliary_form": {"v": v, "e": e + n_annular, "f": f + n_annular,
                           "chi": v - (e + n_annular) + (f + n_annular)},
        "annuli_match_components": n_annular == n_comp - 1 and n_multi == 0,
    }
    return chi == 2, report
