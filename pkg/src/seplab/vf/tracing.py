"""Numerical tracing of separatrices.

Trajectories are level sets of Im phi, phi(z) = integral of Q/P dz, and real
time along a trajectory is the increment of Re phi.  Each step predicts a
point along the unit field and then corrects it with Newton's method so that
the integral of Q/P over the step (8-point Gauss-Legendre on the segment) is
exactly real.  Im phi therefore never drifts beyond quadrature error, which
keeps traces on the right side of nearby saddles.

Step length is ``kappa`` times the distance to the nearest equilibrium, so a
trace approaches its landing point geometrically.

Every zero gets an ordering circle of radius half its distance to the
nearest other equilibrium.  When a step enters that circle the crossing is
located by bisection in time, each probe being a corrected point on the
trajectory, so the angle is exact up to Newton tolerance.  Straight chords
between trace points are not good enough here: next to a weak focus two
separatrices can be far closer than a chord's sagitta.

A trace lands at a multiple zero or a saddle inside the delta ball.  At a
sink or source it lands as soon as convergence is certified in the Koenigs
coordinate (see _Basin); weak foci would otherwise need hundreds of
thousands of steps to spiral down to delta.  Beyond |z| = 2.2 the trace
moves to the chart w = 1/z and comes back below |z| = 1.8.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .field import CENTER, SADDLE, SINK, SOURCE, Equilibrium, RationalVF, separatrix_directions

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)

LANDING_AT_ZERO = "landing_at_zero"
HOMOCLINIC = "homoclinic"
HETEROCLINIC = "heteroclinic"


@dataclass(frozen=True)
class TraceConfig:
    delta_land: float | None = None     # default 1e-4 * min equilibrium spacing
    rho_seed: float | None = None       # default 1e-3 * min equilibrium spacing
    smax: float | None = None           # default 1e3 * diameter of the equilibria
    kappa: float = 0.1
    h_max: float = 0.1
    chart_out: float = 2.2
    chart_in: float = 1.8
    max_steps: int = 100_000
    tail_steps: int = 400

    def resolved(self, equilibria) -> "TraceConfig":
        pts = [e.location for e in equilibria if e.location is not None]
        gaps = [abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:]]
        spacing = min(gaps) if gaps else 1.0
        diam = max(gaps + [1.0])
        return TraceConfig(
            self.delta_land if self.delta_land is not None else 1e-4 * spacing,
            self.rho_seed if self.rho_seed is not None else 1e-3 * spacing,
            self.smax if self.smax is not None else 1e3 * diam,
            self.kappa, self.h_max, self.chart_out, self.chart_in, self.max_steps, self.tail_steps,
        )


@dataclass
class SeparatrixTrace:
    saddle: str
    direction: int
    orientation: str                   # "outgoing" or "incoming"
    theta: float
    points: list = field(default_factory=list)    # complex, normalized z coordinate
    landing: str | None = None         # equilibrium id
    landing_kind: str | None = None
    arrival_angle: float | None = None
    entry_angle: float | None = None   # last entry into the landing zero's ordering circle
    matched_direction: int | None = None
    angle_mismatch: float | None = None
    status: str = "unresolved"
    reason: str | None = None
    arclength: float = 0.0
    steps: int = 0
    closest_to_infinity: float = math.inf   # smallest |w| seen in the w = 1/z chart
    near_misses: list = field(default_factory=list)

    @property
    def resolved(self) -> bool:
        return self.status == "resolved"

    def to_dict(self, precision: int = 12):
        def r(x):
            return float(f"{x:.{precision}g}")
        return {
            "saddle": self.saddle,
            "direction": self.direction,
            "orientation": self.orientation,
            "theta": r(self.theta),
            "status": self.status,
            "reason": self.reason,
            "landing": self.landing,
            "landing_kind": self.landing_kind,
            "arrival_angle": None if self.arrival_angle is None else r(self.arrival_angle),
            "entry_angle": None if self.entry_angle is None else r(self.entry_angle),
            "matched_direction": self.matched_direction,
            "steps": self.steps,
            "arclength": r(self.arclength),
            "near_misses": self.near_misses,
            "polyline": [[r(p.real), r(p.imag)] for p in self.points],
        }


class _Chart:
    """Field in one chart, evaluated in product form.  Expanded polynomials
    lose all relative accuracy next to a multiple zero, which is exactly
    where traces land."""

    def __init__(self, vf: RationalVF, equilibria, at_infinity: bool):
        self.at_infinity = at_infinity
        f = vf.at_infinity() if at_infinity else vf
        pts, zeros, poles = [], [], []
        for e in equilibria:
            if e.location is None:
                continue
            (poles if e.kind == SADDLE else zeros).append((e.location, e.order))
            if at_infinity:
                if e.location != 0:
                    pts.append(1 / e.location)
            else:
                pts.append(e.location)
        self.eq = np.array(pts, complex)
        self.zr = np.array([r for r, _ in zeros], complex)
        self.zm = np.array([m for _, m in zeros], float)
        self.pr = np.array([r for r, _ in poles], complex)
        self.pm = np.array([m for _, m in poles], float)
        probe = complex(0.37, 0.61) * (1 + max([abs(x) for x in pts] + [1.0]))
        if at_infinity:
            probe = 1 / probe
        exact_val = np.polyval(f.num, probe) / np.polyval(f.den, probe)
        self.scale = exact_val / self._shape(probe)

    def _shape(self, u):
        if self.at_infinity:
            a, b = 1 - np.multiply.outer(u, self.zr), 1 - np.multiply.outer(u, self.pr)
        else:
            a, b = np.subtract.outer(u, self.zr), np.subtract.outer(u, self.pr)
        return np.prod(a ** self.zm, axis=-1) / np.prod(b ** self.pm, axis=-1)

    def velocity(self, u):
        return self.scale * self._shape(u)

    def integral(self, a, b):
        mid, half = (a + b) / 2, (b - a) / 2
        xs = mid + half * _GL_X
        return half * np.dot(_GL_W, 1 / self.velocity(xs))

    def nearest(self, u) -> float:
        return float(np.min(np.abs(self.eq - u))) if len(self.eq) else 1.0


def _circ(a, b):
    d = (a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def _crossing(a, b, centre, r):
    """Point where segment a -> b enters the disk |z - centre| < r."""
    a, b = a - centre, b - centre
    if abs(a) <= r:
        return b + centre
    d = b - a
    # |a + t d| = r, smaller root in [0, 1]
    qa, qb, qc = abs(d) ** 2, 2 * (a.real * d.real + a.imag * d.imag), abs(a) ** 2 - r * r
    disc = max(qb * qb - 4 * qa * qc, 0.0)
    t = (-qb - math.sqrt(disc)) / (2 * qa)
    return a + min(max(t, 0.0), 1.0) * d + centre


def ordering_radii(equilibria) -> dict:
    pts = [(e.id, e.location) for e in equilibria if e.location is not None]
    out = {}
    for i, (eid, z) in enumerate(pts):
        gaps = [abs(z - w) for j, (_, w) in enumerate(pts) if j != i]
        out[eid] = 0.5 * min(gaps) if gaps else 1.0
    return out


def _correct(chart: _Chart, start, guess, tau, iters: int = 12):
    """Newton for integral(start -> u) = tau, tau real."""
    u = guess
    for _ in range(iters):
        g = chart.integral(start, u) - tau
        du = g * chart.velocity(u)
        u = u - du
        if abs(du) <= 1e-15 * max(1.0, abs(u)) + 1e-300:
            return u, True
    return u, abs(du) <= 1e-10 * max(1.0, abs(u))


class _Basin:
    """Certified landing at a simple sink or source.

    psi(z) = (z - z0) exp(lam g(z)), g = integral from z0 of 1/R - 1/(lam (w - z0)),
    is the Koenigs coordinate: psi' R = lam psi, so |psi| is monotone along
    trajectories.  psi is holomorphic on the ordering disk and vanishes only
    at z0, so below the minimum m of |psi| on the ordering circle the
    sublevel set lies inside the disk and every trajectory in it converges
    to z0."""

    def __init__(self, chart: _Chart, e: Equilibrium, radius: float, samples: int = 1024, safety: float = 0.95):
        self.chart, self.z0, self.radius = chart, e.location, radius
        eps = 1e-7 * radius
        self.lam = chart.velocity(self.z0 + eps) / eps
        ring = self.z0 + radius * np.exp(2j * np.pi * np.arange(samples) / samples)
        self.level = safety * float(np.min(np.abs(self.psi(ring))))

    def psi(self, z):
        zeta = np.asarray(z, complex) - self.z0
        # four Gauss-Legendre panels: the nearest singularity of the
        # integrand can be as close as one radius beyond the circle
        nodes = (np.arange(4)[:, None] + (1 + _GL_X) / 2) / 4
        xs = self.z0 + np.multiply.outer(zeta, nodes.ravel())
        vals = 1 / self.chart.velocity(xs) - 1 / (self.lam * (xs - self.z0))
        g = (zeta / 8) * (vals @ np.tile(_GL_W, 4))
        return zeta * np.exp(self.lam * g)

    def captures(self, z) -> bool:
        return abs(z - self.z0) < self.radius and abs(self.psi(z)) < self.level


def _circle_entry(chart: _Chart, u0, u1, tau, centre, r, iters: int = 60):
    """Point where the trajectory from u0 (outside) to u1 (inside, reached at
    time tau) enters |z - centre| < r."""
    def dist(u):
        return abs((1 / u if chart.at_infinity else u) - centre) - r
    lo, hi, best = 0.0, 1.0, u1
    for _ in range(iters):
        t = 0.5 * (lo + hi)
        u, ok = _correct(chart, u0, u0 + t * (u1 - u0), t * tau)
        if not ok:
            break
        best = u
        if dist(u) < 0:
            hi = t
        else:
            lo = t
        if hi - lo < 1e-15:
            break
    return 1 / best if chart.at_infinity else best


class _Setup:
    """Per-field data shared by all traces."""

    def __init__(self, vf: RationalVF, equilibria):
        self.charts = {False: _Chart(vf, equilibria, False), True: _Chart(vf, equilibria, True)}
        self.radii = ordering_radii(equilibria)
        self.basins = {e.id: _Basin(self.charts[False], e, self.radii[e.id]) for e in equilibria
                       if e.location is not None and e.kind in (SINK, SOURCE) and e.order == 1}


def trace_separatrix(vf: RationalVF, saddle: Equilibrium, direction: int, equilibria,
                     config: TraceConfig | None = None, setup: _Setup | None = None) -> SeparatrixTrace:
    cfg = (config or TraceConfig()).resolved(equilibria)
    dirs = separatrix_directions(vf, saddle)
    theta, label = dirs[direction]
    s = 1.0 if label == "outgoing" else -1.0
    tr = SeparatrixTrace(saddle.id, direction, label, theta)

    setup = setup or _Setup(vf, equilibria)
    charts, radii, basins = setup.charts, setup.radii, setup.basins
    targets = [e for e in equilibria if e.location is not None and e.kind != CENTER]
    tpos = np.array([e.location for e in targets], complex)
    saddle_dirs = {e.id: separatrix_directions(vf, e) for e in targets if e.kind == SADDLE}
    zeros = [e for e in targets if e.kind != SADDLE]
    zpos = np.array([e.location for e in zeros], complex)
    zrad = np.array([radii[e.id] for e in zeros])
    entries: dict = {}

    # seed on the separatrix: integral from the saddle must be real
    zc = charts[False]
    w0 = saddle.location
    u = w0 + cfg.rho_seed * complex(math.cos(theta), math.sin(theta))
    tau0 = s * abs(zc.integral(w0, u))
    u, _ = _correct(zc, w0, u, tau0)
    inf_chart = False
    tr.points = [w0, u]
    passing = None          # saddle whose delta-ball we are crossing without landing
    tail = None             # steps left after a certified landing

    while True:
        pz = 1 / u if inf_chart else u
        if inf_chart:
            tr.closest_to_infinity = min(tr.closest_to_infinity, abs(u))
        d = np.abs(tpos - pz) if len(tpos) else np.array([])
        k = int(np.argmin(d)) if len(d) else -1
        if tail is not None:
            # already landed; keep drawing the spiral for a while
            if tail == 0 or d[k] < cfg.delta_land:
                break
            tail -= 1
        near = k >= 0 and (d[k] < cfg.delta_land or (targets[k].id in basins and basins[targets[k].id].captures(pz)))
        if tail is not None:
            pass
        elif near and not (tr.steps == 0 and targets[k].id == saddle.id):
            e = targets[k]
            ang = math.atan2((pz - e.location).imag, (pz - e.location).real)
            if e.kind != SADDLE:
                # angle on the landing circle; ordering uses entry_angle
                c = _crossing(tr.points[-2] if len(tr.points) > 1 else pz, pz, e.location, min(cfg.delta_land, d[k]))
                ang = math.atan2((c - e.location).imag, (c - e.location).real)
                tr.landing, tr.landing_kind, tr.arrival_angle = e.id, LANDING_AT_ZERO, ang
                tr.entry_angle = entries.get(e.id)
                tr.status = "resolved"
                if d[k] < cfg.delta_land:
                    break
                tail = cfg.tail_steps
                continue
            want = "incoming" if s > 0 else "outgoing"
            cands = [(i, _circ(ang, t)) for i, (t, lab) in enumerate(saddle_dirs[e.id]) if lab == want]
            i, mis = min(cands, key=lambda c: c[1])
            if mis <= math.pi / (2 * (e.order + 1)):
                tr.landing = e.id
                tr.landing_kind = HOMOCLINIC if e.id == saddle.id else HETEROCLINIC
                tr.arrival_angle, tr.matched_direction, tr.angle_mismatch = ang, i, mis
                tr.status = "resolved"
                break
            if passing != e.id:
                passing = e.id
                tr.near_misses.append({"saddle": e.id, "distance": float(d[k]), "angle_mismatch": mis})
        elif passing is not None and (k < 0 or d[k] >= cfg.delta_land):
            passing = None

        chart = charts[inf_chart]
        h = min(cfg.kappa * chart.nearest(u), cfg.h_max)
        if h < 1e-13 * max(1.0, abs(u)):
            tr.reason = None if tr.resolved else f"step size underflow at {pz:.6g}"
            break
        vel = chart.velocity(u)
        ok = False
        for _ in range(30):
            guess = u + s * h * vel / abs(vel)
            tau = s * abs(chart.integral(u, guess).real)
            u1, ok = _correct(chart, u, guess, tau)
            if ok and abs(u1 - guess) < 0.5 * h:
                break
            h *= 0.5
            ok = False
        if not ok:
            tr.reason = None if tr.resolved else f"corrector failed at {pz:.6g}"
            break
        if len(zpos):
            p0, p1 = (1 / u, 1 / u1) if inf_chart else (u, u1)
            inside = np.abs(zpos - p1) < zrad
            for i in np.flatnonzero(inside & (np.abs(zpos - p0) >= zrad)):
                c = _circle_entry(chart, u, u1, tau, zpos[i], zrad[i]) - zpos[i]
                entries[zeros[i].id] = math.atan2(c.imag, c.real)
        tr.arclength += abs(u1 - u)
        u = u1
        tr.steps += 1
        if not inf_chart and abs(u) > cfg.chart_out:
            inf_chart, u = True, 1 / u
        elif inf_chart and abs(u) > 1 / cfg.chart_in:
            inf_chart, u = False, 1 / u
        if not (inf_chart and abs(u) < 1e-12):
            tr.points.append(1 / u if inf_chart else u)
        if tr.arclength > cfg.smax:
            tr.reason = None if tr.resolved else "arc-length cap reached"
            break
        if tr.steps >= cfg.max_steps:
            tr.reason = None if tr.resolved else "step limit reached"
            break

    if tr.resolved:
        tr.points.append(next(e.location for e in targets if e.id == tr.landing))
    return tr


def trace_all(vf: RationalVF, equilibria, config: TraceConfig | None = None) -> list[SeparatrixTrace]:
    out, setup = [], _Setup(vf, equilibria)
    for e in equilibria:
        if e.kind == SADDLE and e.location is not None:
            for j in range(2 * (e.order + 1)):
                out.append(trace_separatrix(vf, e, j, equilibria, config, setup))
    return out
