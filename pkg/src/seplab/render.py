"""SVG phase portraits.

Output is plain text built with fixed-precision formatting, so the same input
gives the same bytes.  Every separatrix edge is one ``<path>`` element with
class ``sep <kind>``; every equilibrium is one marker with class ``eq <kind>``.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .graph_core import BLACK, EmbeddedGraph

EDGE_COLORS = {
    "outgoing": "#1f77b4",
    "incoming": "#d62728",
    "heteroclinic": "#2ca02c",
    "homoclinic": "#9467bd",
    "schematic": "#444444",
}
MARKERS = {                      # fill, stroke
    "saddle": ("#ffffff", "#000000"),
    "sink": ("#1f77b4", "#000000"),
    "source": ("#d62728", "#000000"),
    "elliptic": ("#000000", "#000000"),
    "center": ("#ffffff", "#2ca02c"),
    "black": ("#000000", "#000000"),
    "white": ("#ffffff", "#000000"),
}


def _f(x: float) -> str:
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Canvas:
    def __init__(self, lo: complex, hi: complex, size: int):
        self.lo, self.size = lo, size
        span = max(hi.real - lo.real, hi.imag - lo.imag) or 1.0
        self.scale = size / span
        self.items: list[str] = []

    def xy(self, z: complex) -> tuple[str, str]:
        # y axis points down in SVG
        return _f((z.real - self.lo.real) * self.scale), _f(self.size - (z.imag - self.lo.imag) * self.scale)

    def path(self, pieces, cls: str, color: str, width: float = 1.6, dash: str | None = None):
        d = []
        for piece in pieces:
            if len(piece) < 2:
                continue
            pts, last = [], None
            for i, z in enumerate(piece):
                # skip points closer than half a pixel to the previous one
                if last is not None and i < len(piece) - 1 and abs(z - last) * self.scale < 0.5:
                    continue
                pts.append(" ".join(self.xy(z)))
                last = z
            d.append("M" + " L".join(pts))
        if not d:
            return
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(f'<path class="{cls}" d="{" ".join(d)}" fill="none" stroke="{color}" '
                          f'stroke-width="{_f(width)}"{extra}/>')

    def marker(self, z: complex, kind: str, label: str):
        fill, stroke = MARKERS.get(kind, ("#888888", "#000000"))
        x, y = self.xy(z)
        if kind in ("saddle", "white"):
            shape = f'<rect x="{_f(float(x) - 5)}" y="{_f(float(y) - 5)}" width="10" height="10"'
        else:
            shape = f'<circle cx="{x}" cy="{y}" r="5"'
        self.items.append(f'{shape} class="eq {kind}" fill="{fill}" stroke="{stroke}" stroke-width="1.5">'
                          f'<title>{escape(label)}</title></{"rect" if kind in ("saddle", "white") else "circle"}>')

    def text(self, x: float, y: float, s: str, size: int = 12, cls: str = "label", opacity: float = 1.0):
        self.items.append(f'<text class="{cls}" x="{_f(x)}" y="{_f(y)}" font-family="sans-serif" '
                          f'font-size="{size}" fill="#000000" fill-opacity="{_f(opacity)}">{escape(s)}</text>')

    def svg(self, title: str = "") -> str:
        s = _f(self.size)
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">\n'
                f'<title>{escape(title)}</title>\n'
                f'<defs><clipPath id="frame"><rect x="0" y="0" width="{s}" height="{s}"/></clipPath></defs>\n'
                f'<rect x="0" y="0" width="{s}" height="{s}" fill="#ffffff"/>\n<g clip-path="url(#frame)">\n')
        return head + "\n".join(self.items) + "\n</g>\n</svg>\n"


def _frame(points) -> tuple[complex, complex]:
    pts = np.array(points, complex) if len(points) else np.zeros(1, complex)
    lo = complex(pts.real.min(), pts.imag.min())
    hi = complex(pts.real.max(), pts.imag.max())
    c = (lo + hi) / 2
    r = max(hi.real - lo.real, hi.imag - lo.imag, 1.0) * 0.75
    return c - complex(r, r), c + complex(r, r)


def _clip_pieces(line, lo: complex, hi: complex):
    """Split a polyline where it leaves a generous box around the frame, so
    that runs through the far field do not produce huge coordinates."""
    w = hi - lo
    blo, bhi = lo - 2 * w, hi + 2 * w
    pieces, cur = [], []
    for z in line:
        inside = blo.real <= z.real <= bhi.real and blo.imag <= z.imag <= bhi.imag
        if inside:
            cur.append(z)
        elif cur:
            pieces.append(cur)
            cur = []
    if cur:
        pieces.append(cur)
    return pieces


def _flow_lines(vf, eq_pts, lo, hi, per_axis: int, steps: int = 120):
    """Short trajectories of the unit field from a regular grid of seeds."""
    span = max(hi.real - lo.real, hi.imag - lo.imag)
    h = span / (6 * per_axis * 10)
    eq = np.array(eq_pts, complex)
    guard = 0.01 * span

    def unit(z):
        v = np.polyval(vf.num, z) / np.polyval(vf.den, z)
        return v / abs(v)

    out = []
    ts = (np.arange(per_axis) + 0.5) / per_axis
    for y in ts:
        for x in ts:
            z0 = lo + complex(x * (hi.real - lo.real), y * (hi.imag - lo.imag))
            if len(eq) and np.min(np.abs(eq - z0)) < guard:
                continue
            line = []
            for sgn in (-1.0, 1.0):
                z, part = z0, [z0]
                for _ in range(steps):
                    k1 = unit(z)
                    k2 = unit(z + 0.5 * sgn * h * k1)
                    k3 = unit(z + 0.5 * sgn * h * k2)
                    k4 = unit(z + sgn * h * k3)
                    z = z + sgn * h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
                    if not np.isfinite(z) or (len(eq) and np.min(np.abs(eq - z)) < guard):
                        break
                    part.append(z)
                line = part[::-1] + line[1:] if sgn < 0 else line + part[1:]
            out.append(line)
    return out


def render_portrait(doc: dict, size: int = 480, flow_lines: int = 0, title: str = "") -> str:
    """Portrait from an extraction sidecar (normalized coordinates)."""
    eqs = [(e["id"], e["kind"], complex(*e["location"])) for e in doc["equilibria"] if e["location"] is not None]
    lo, hi = _frame([z for _, _, z in eqs])
    cv = _Canvas(lo, hi, size)
    if flow_lines:
        from .io import vf_document
        from .vf.field import RationalVF
        num, den, _ = vf_document(doc["field"], exact=False)
        vf = RationalVF.from_coeffs(num, den)
        for line in _flow_lines(vf, [z for _, _, z in eqs], lo, hi, flow_lines):
            cv.path([line], "flow", "#bbbbbb", width=0.6)
    for eid in sorted(doc["edges"], key=lambda s: int(s[1:])):
        kind = doc["edges"][eid]["kind"]
        line = [complex(x, y) for x, y in doc["edges"][eid]["polyline"]]
        cv.path(_clip_pieces(line, lo, hi), f"sep {kind}", EDGE_COLORS[kind])
    for eid, kind, z in eqs:
        cv.marker(z, kind, eid)
    if not doc.get("resolved", True):
        cv.text(8, 20, "unresolved", cls="status")
    return cv.svg(title)


def render_schematic(graph: EmbeddedGraph, size: int = 480, title: str = "") -> str:
    """Layout for a bare graph: vertices on a circle in id order, parallel
    edges as arcs, loops as teardrops.  Marked with a watermark."""
    ids = [v.id for v in graph.vertices]
    n = len(ids)
    pos = {vid: complex(math.cos(2 * math.pi * i / max(n, 1) + math.pi / 2),
                        math.sin(2 * math.pi * i / max(n, 1) + math.pi / 2)) if n > 1 else 0j
           for i, vid in enumerate(ids)}
    cv = _Canvas(complex(-1.6, -1.6), complex(1.6, 1.6), size)
    seen: dict = {}
    for e in graph.edges:
        a, b = pos[e.tail], pos[e.head]
        key = frozenset((e.tail, e.head))
        k = seen.get(key, 0)
        seen[key] = k + 1
        t = np.linspace(0.0, 1.0, 25)
        if e.tail == e.head:
            out = a / abs(a) if a != 0 else 1j
            ang = 2 * math.pi * k / 6
            d = out * complex(math.cos(ang), math.sin(ang)) * 0.45
            line = a + d * np.sin(np.pi * t) * np.exp(1j * (t - 0.5) * 1.6)
        else:
            bend = (k + 1) // 2 * (1 if k % 2 else -1) * 0.25
            mid = (a + b) / 2 + bend * 1j * (b - a)
            line = (1 - t) ** 2 * a + 2 * t * (1 - t) * mid + t ** 2 * b
        cv.path([list(line)], "sep schematic", EDGE_COLORS["schematic"], width=1.2)
        tip = line[len(line) // 2 + 1]
        back = line[len(line) // 2 - 1]
        u = (tip - back) / (abs(tip - back) or 1.0)
        wing = 0.06
        cv.path([[tip - wing * u * complex(1, 0.6), tip, tip - wing * u * complex(1, -0.6)]],
                "arrow", EDGE_COLORS["schematic"], width=1.2)
    for vid in ids:
        cv.marker(pos[vid], "black" if graph.color(vid) == BLACK else "white", str(vid))
    cv.text(size * 0.25, size * 0.55, "schematic", size=max(size // 10, 12), cls="watermark", opacity=0.15)
    return cv.svg(title)
