"""Named example graphs and random generators of admissible graphs.

The generators build graphs combinatorially, one family per kind of face:

* ``flower_forest``      nested white flowers (center and annular faces)
* ``elliptic_bundle``    one black and one white vertex joined by 2j edges
* ``saddle_tree``        repeated saddle insertion into parallel faces,
                         optionally with homoclinic loops (center faces)
"""
from __future__ import annotations

import random
from typing import Sequence

import sympy as sp

from .admissibility import PARALLEL, check_admissible, classify_face
from .graph_core import (
    BLACK,
    HEAD,
    TAIL,
    WHITE,
    Containment,
    Edge,
    EmbeddedGraph,
    HalfEdge,
    Vertex,
    faces,
    local_faces,
)
from .vf.field import RationalVF


def _h(code: str) -> HalfEdge:
    """``"e3t"`` -> tail end of e3, ``"e3h"`` -> head end."""
    return HalfEdge(code[:-1], TAIL if code[-1] == "t" else HEAD)


def make_graph(colors: dict, edges: Sequence, rotation: dict, containment=(), outer_face=0) -> EmbeddedGraph:
    return EmbeddedGraph(
        [Vertex(v, c) for v, c in colors.items()],
        [Edge(*e) for e in edges],
        {v: [_h(x) if isinstance(x, str) else HalfEdge(*x) for x in hs] for v, hs in rotation.items()},
        containment,
        outer_face,
    )


def gamma_elliptic() -> EmbeddedGraph:
    """Separatrix graph of z^3/(z-1): elliptic point b, saddle w, four edges."""
    return make_graph(
        {"b": BLACK, "w": WHITE},
        [("e0", "w", "b"), ("e1", "b", "w"), ("e2", "w", "b"), ("e3", "b", "w")],
        {"w": ["e0t", "e1h", "e2t", "e3h"], "b": ["e3t", "e2h", "e1t", "e0h"]},
    )


def gamma_centers() -> EmbeddedGraph:
    """Separatrix graph of i(z^2-1)(z^2-4)/(z^2+9): two saddles, four
    heteroclinic edges bounding four center zones."""
    return make_graph(
        {"w0": WHITE, "w1": WHITE},
        [("e0", "w0", "w1"), ("e1", "w1", "w0"), ("e2", "w0", "w1"), ("e3", "w1", "w0")],
        {"w0": ["e0t", "e1h", "e2t", "e3h"], "w1": ["e3t", "e2h", "e1t", "e0h"]},
    )


def directed_two_cycle() -> EmbeddedGraph:
    return make_graph({"u": WHITE, "v": WHITE}, [("e0", "u", "v"), ("e1", "v", "u")],
                      {"u": ["e0t", "e1h"], "v": ["e1t", "e0h"]})


def nested_two_cycles() -> EmbeddedGraph:
    """Two coherent 2-cycles, the inner one sitting in the left face of the
    outer one; the region between them is an annulus (white valence is 2,
    so the graph itself is not admissible)."""
    edges = [("e0", "u0", "u1"), ("e1", "u1", "u0"), ("e2", "v0", "v1"), ("e3", "v1", "v0")]
    rot = {"u0": ["e0t", "e1h"], "u1": ["e1t", "e0h"], "v0": ["e2t", "e3h"], "v1": ["e3t", "e2h"]}
    colors = {"u0": WHITE, "u1": WHITE, "v0": WHITE, "v1": WHITE}
    bare = make_graph(colors, edges, rot)
    loc = local_faces(bare)
    host = _face_with_orientation(bare, loc[bare.component_of["v0"]], forward=True)
    own = _face_with_orientation(bare, loc[bare.component_of["u0"]], forward=False)
    return make_graph(colors, edges, rot, [Containment("u0", "v0", host, own)])


def figure_eight_annulus() -> EmbeddedGraph:
    """Inner figure-eight (saddle a, loops L1, L2) inside a petal of an
    outer figure-eight (saddle b, loops L3, L4): four centers, one annulus
    with boundary equation L3 = L1 + L2."""
    colors = {"a": WHITE, "b": WHITE}
    edges = [("L1", "a", "a"), ("L2", "a", "a"), ("L3", "b", "b"), ("L4", "b", "b")]
    rot = {"a": ["L1t", "L1h", "L2t", "L2h"], "b": ["L3t", "L3h", "L4t", "L4h"]}
    bare = make_graph(colors, edges, rot)
    loc = local_faces(bare)
    host = _face_with_walk(bare, loc[bare.component_of["b"]], [_h("L3t")])
    own = _face_with_walk(bare, loc[bare.component_of["a"]], [_h("L1h"), _h("L2h")])
    return make_graph(colors, edges, rot, [Containment("a", "b", host, own)])


def three_sinks_saddle() -> EmbeddedGraph:
    """A saddle with two separatrices to one sink and one each from two
    sources: two parallel faces (degree 3 over degree 1)."""
    return make_graph(
        {"w": WHITE, "t": BLACK, "s1": BLACK, "s2": BLACK},
        [("o1", "w", "t"), ("i1", "s1", "w"), ("o2", "w", "t"), ("i2", "s2", "w")],
        {"w": ["o1t", "i1h", "o2t", "i2h"], "t": ["o2h", "o1h"], "s1": ["i1t"], "s2": ["i2t"]},
    )


def _face_with_walk(graph, fs, walk) -> int:
    for f in fs:
        w = f.walks[0]
        n = len(w)
        if n == len(walk) and any(list(w[i:] + w[:i]) == list(walk) for i in range(n)):
            return f.index
    raise ValueError("walk not found")


def _face_with_orientation(graph, fs, forward: bool) -> int:
    for f in fs:
        ends = {d.end for d in f.walks[0]}
        if ends == {TAIL if forward else HEAD}:
            return f.index
    raise ValueError("no coherent face with that orientation")


# -- random generators ------------------------------------------------------

class _Builder:
    def __init__(self):
        self.colors: dict = {}
        self.edges: list = []
        self.rot: dict = {}
        self._n = 0

    def vertex(self, color, prefix):
        vid = f"{prefix}{len(self.colors)}"
        self.colors[vid] = color
        self.rot[vid] = []
        return vid

    def edge(self, tail, head):
        eid = f"e{self._n}"
        self._n += 1
        self.edges.append((eid, tail, head))
        return eid

    def graph(self, containment=(), outer_face=0):
        return make_graph(self.colors, self.edges, self.rot, containment, outer_face)


def _add_flower(b: _Builder, petals: int, positive: bool) -> str:
    w = b.vertex(WHITE, "w")
    for _ in range(petals):
        e = b.edge(w, w)
        b.rot[w] += [HalfEdge(e, TAIL), HalfEdge(e, HEAD)] if positive else [HalfEdge(e, HEAD), HalfEdge(e, TAIL)]
    return w


def _add_bigon(b: _Builder, j: int) -> str:
    u, v = b.vertex(WHITE, "w"), b.vertex(WHITE, "w")
    es = [b.edge(u, v) if i % 2 == 0 else b.edge(v, u) for i in range(2 * j)]
    b.rot[u] = [HalfEdge(e, TAIL if i % 2 == 0 else HEAD) for i, e in enumerate(es)]
    b.rot[v] = [HalfEdge(e, HEAD if i % 2 == 0 else TAIL) for i, e in reversed(list(enumerate(es)))]
    return u


def flower_forest(rng: random.Random, max_components: int = 5) -> EmbeddedGraph:
    """White components (flowers and multi-edge bigons) nested inside each
    other so that every region between two components is an annulus."""
    b = _Builder()
    roots = []
    for _ in range(rng.randint(1, max_components)):
        if rng.random() < 0.7:
            roots.append(_add_flower(b, rng.randint(2, 4), rng.random() < 0.5))
        else:
            roots.append(_add_bigon(b, rng.randint(2, 3)))
    bare = b.graph()
    loc = local_faces(bare)

    def orientation(face):
        ends = {d.end for d in face.walks[0]}
        return "left" if ends == {TAIL} else "right"

    # faces still free to host something: every face of the root, and the
    # faces of placed components except the one used to attach them
    free = [(roots[0], f.index, orientation(f)) for f in loc[bare.component_of[roots[0]]]]
    containment = []
    for r in roots[1:]:
        fs = loc[bare.component_of[r]]
        options = []
        for own in fs:
            want = "right" if orientation(own) == "left" else "left"
            options += [(slot, own.index) for slot in free if slot[2] == want]
        slot, own_idx = rng.choice(options)
        free.remove(slot)
        containment.append(Containment(r, slot[0], slot[1], own_idx))
        free += [(r, f.index, orientation(f)) for f in fs if f.index != own_idx]
    outer = rng.randrange(len(loc[bare.component_of[roots[0]]]))
    return b.graph(containment, outer)


def elliptic_bundle(rng: random.Random) -> EmbeddedGraph:
    """Black vertex joined to one white vertex by 2j alternating edges."""
    j = rng.randint(2, 5)
    b = _Builder()
    w, k = b.vertex(WHITE, "w"), b.vertex(BLACK, "b")
    es = [b.edge(w, k) if i % 2 == 0 else b.edge(k, w) for i in range(2 * j)]
    b.rot[w] = [HalfEdge(e, TAIL if i % 2 == 0 else HEAD) for i, e in enumerate(es)]
    b.rot[k] = [HalfEdge(e, HEAD if i % 2 == 0 else TAIL) for i, e in reversed(list(enumerate(es)))]
    return b.graph()


def _corner_after(graph: EmbeddedGraph, walk, position) -> HalfEdge:
    """Half-edge after which a new half-edge must be inserted to sit in the
    face corner where ``walk`` leaves its ``position``-th vertex."""
    return walk[position]


def _insert_after(rot: dict, vid, anchor: HalfEdge, new: Sequence[HalfEdge]):
    lst = rot[vid]
    i = lst.index(anchor)
    rot[vid] = lst[: i + 1] + list(new) + lst[i + 1:]


def saddle_tree(rng: random.Random, saddles: int | None = None, loops: float = 0.3) -> EmbeddedGraph:
    """Generic-looking graph grown from one saddle between three
    sources/sinks by inserting saddles into parallel faces."""
    b = _Builder()
    w = b.vertex(WHITE, "w")
    t, s1, s2 = b.vertex(BLACK, "b"), b.vertex(BLACK, "b"), b.vertex(BLACK, "b")
    o1, i1, o2, i2 = b.edge(w, t), b.edge(s1, w), b.edge(w, t), b.edge(s2, w)
    b.rot[w] = [HalfEdge(o1, TAIL), HalfEdge(i1, HEAD), HalfEdge(o2, TAIL), HalfEdge(i2, HEAD)]
    b.rot[t] = [HalfEdge(o2, HEAD), HalfEdge(o1, HEAD)]
    b.rot[s1], b.rot[s2] = [HalfEdge(i1, TAIL)], [HalfEdge(i2, TAIL)]
    if rng.random() < 0.5:
        _reverse_all(b)
    n = rng.randint(0, 5) if saddles is None else saddles - 1
    for _ in range(n):
        g = b.graph()
        fs = faces(g)
        par = [(f, fc) for f in fs for fc in [classify_face(g, f)] if fc.cls == PARALLEL]
        f, fc = rng.choice(par)
        walk = f.walks[0]
        starts = [g.origin(d) for d in walk]
        src, dst = fc.witness["from"], fc.witness["to"]
        anchor_src = walk[starts.index(src)]
        anchor_dst = walk[starts.index(dst)]
        nw = b.vertex(WHITE, "w")
        if rng.random() < loops:
            a, lp, o = b.edge(src, nw), b.edge(nw, nw), b.edge(nw, dst)
            b.rot[nw] = [HalfEdge(a, HEAD), HalfEdge(lp, TAIL), HalfEdge(lp, HEAD), HalfEdge(o, TAIL)]
            _insert_after(b.rot, src, anchor_src, [HalfEdge(a, TAIL)])
            _insert_after(b.rot, dst, anchor_dst, [HalfEdge(o, HEAD)])
        elif rng.random() < 0.5:
            x = b.vertex(BLACK, "b")
            a, p1, ix, p2 = b.edge(src, nw), b.edge(nw, dst), b.edge(x, nw), b.edge(nw, dst)
            b.rot[nw] = [HalfEdge(a, HEAD), HalfEdge(p1, TAIL), HalfEdge(ix, HEAD), HalfEdge(p2, TAIL)]
            b.rot[x] = [HalfEdge(ix, TAIL)]
            _insert_after(b.rot, src, anchor_src, [HalfEdge(a, TAIL)])
            _insert_after(b.rot, dst, anchor_dst, [HalfEdge(p2, HEAD), HalfEdge(p1, HEAD)])
        else:
            y = b.vertex(BLACK, "b")
            a, q1, oy, q2 = b.edge(nw, dst), b.edge(src, nw), b.edge(nw, y), b.edge(src, nw)
            b.rot[nw] = [HalfEdge(a, TAIL), HalfEdge(q1, HEAD), HalfEdge(oy, TAIL), HalfEdge(q2, HEAD)]
            b.rot[y] = [HalfEdge(oy, HEAD)]
            _insert_after(b.rot, dst, anchor_dst, [HalfEdge(a, HEAD)])
            _insert_after(b.rot, src, anchor_src, [HalfEdge(q2, TAIL), HalfEdge(q1, TAIL)])
    return b.graph()


def _reverse_all(b: _Builder):
    b.edges = [(e, h, t) for e, t, h in b.edges]
    flip = {TAIL: HEAD, HEAD: TAIL}
    b.rot = {v: [HalfEdge(h.edge, flip[h.end]) for h in hs] for v, hs in b.rot.items()}


GENERATORS = {
    "flower_forest": flower_forest,
    "elliptic_bundle": elliptic_bundle,
    "saddle_tree": saddle_tree,
}


def random_admissible(rng: random.Random, family: str | None = None) -> EmbeddedGraph:
    family = family or rng.choice(sorted(GENERATORS))
    g = GENERATORS[family](rng)
    report = check_admissible(g)
    if not report.verdict:
        raise AssertionError(f"{family} produced an inadmissible graph: {report.failed()}")
    return g


# -- length systems -------------------------------------------------------------

def shared_edge_systems():
    """The two-annulus systems of the shared-edge examples: side by side
    (sharing x6) and nested (sharing x3, x5, x7)."""
    from .length_solver import LengthSystem
    side_by_side = LengthSystem.from_sides([
        (["x1", "x2"], ["x3", "x4", "x5", "x6"]),
        (["x6", "x7", "x8"], ["x9", "x10"]),
    ])
    nested = LengthSystem.from_sides([
        (["x1", "x2"], ["x3", "x5", "x7"]),
        (["x3", "x4", "x5", "x6", "x7", "x8"], ["x9", "x10"]),
    ])
    return side_by_side, nested


def random_length_system(rng: random.Random, max_equations: int = 6, max_side: int = 3):
    """Random system shaped like the annulus equations of a real graph.

    Components form a tree whose edges are the annuli.  Inside a component,
    each annulus occupies one face; the component's edges around that face
    form the annulus' boundary on that side.  An edge between two annulus
    faces of the same component is shared, so it appears once on each side
    of two different equations.
    """
    from .length_solver import LengthSystem
    n_eq = rng.randint(1, max_equations)
    parent = [None] + [rng.randrange(c) for c in range(1, n_eq + 1)]   # component tree
    counter = iter(range(10**6))
    # annulus a joins component parent[a+1] (outer side) and component a+1
    faces_of = {c: [] for c in range(n_eq + 1)}      # component -> annuli touching it
    for a in range(n_eq):
        faces_of[parent[a + 1]].append(a)
        faces_of[a + 1].append(a)
    side = {}            # (annulus, component) -> +1 if the annulus lies left of that boundary
    for a in range(n_eq):
        s = rng.choice((1, -1))
        side[a, parent[a + 1]] = s
        side[a, a + 1] = -s
    sides = [([], []) for _ in range(n_eq)]

    def put(a, comp, v):
        sides[a][0 if side[a, comp] > 0 else 1].append(v)

    for comp, annuli in faces_of.items():
        for a in annuli:
            for _ in range(rng.randint(1 if len(annuli) == 1 else 0, max_side)):
                put(a, comp, f"x{next(counter)}")
        for a in annuli:
            for b in annuli:
                if a < b and side[a, comp] != side[b, comp] and rng.random() < 0.6:
                    for _ in range(rng.randint(1, 2)):
                        v = f"x{next(counter)}"
                        put(a, comp, v)
                        put(b, comp, v)
    for a, (l, r) in enumerate(sides):
        for lst, s in ((l, 1), (r, -1)):
            if not lst:
                lst.append(f"x{next(counter)}")
    for l, r in sides:
        rng.shuffle(l)
        rng.shuffle(r)
    return LengthSystem.from_sides(sides)


def cyclic_length_system():
    """Satisfies the three structural properties yet has no positive
    solution: summing the equations forces a + b + c = 0."""
    from .length_solver import LengthSystem
    return LengthSystem.from_sides([(["x1"], ["x2", "a"]), (["x2"], ["x3", "b"]), (["x3"], ["x1", "c"])])


def random_gaussian_rational(rng: random.Random, size: int = 4, den: int = 4):
    re = sp.Rational(rng.randint(-size * den, size * den), den)
    im = sp.Rational(rng.randint(-size * den, size * den), den)
    return re + sp.I * im


def random_field(rng: random.Random, degree: int) -> RationalVF:
    """Exact field with deg P = degree, deg Q = degree - 2."""
    def poly(d):
        cs = [random_gaussian_rational(rng) for _ in range(d + 1)]
        while cs[0] == 0:
            cs[0] = random_gaussian_rational(rng)
        return cs
    return RationalVF.from_coeffs(poly(degree), poly(degree - 2), exact=True)
