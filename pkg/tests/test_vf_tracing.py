import cmath
import json
import random

import numpy as np
import pytest

from seplab.admissibility import check_admissible
from seplab.fixtures import random_field
from seplab.graph_core import cyclic_reversals, valence
from seplab.io import dumps, graph_to_dict, parse_gaussian
from seplab.realization import degree_report
from seplab.vf.assemble import extract
from seplab.vf.field import ELLIPTIC, SADDLE, SINK, SOURCE, RationalVF, classify_equilibria, separatrix_directions
from seplab.vf.tracing import HETEROCLINIC, LANDING_AT_ZERO, TraceConfig, _Basin, _Chart, ordering_radii, trace_all


def vf(num, den=("1",)):
    return RationalVF.from_coeffs([parse_gaussian(c) for c in num], [parse_gaussian(c) for c in den], exact=True)


ELLIPTIC_TWIN = vf(["1", "0", "0", "0"], ["1", "-1"])
CENTER_TWIN = vf(["i", "0", "-5i", "0", "4i"], ["1", "0", "9"])
NEWTON = vf(["-1", "0", "0", "1"], ["3", "0", "0"])


def test_elliptic_twin_traces_land_at_origin():
    eqs = classify_equilibria(ELLIPTIC_TWIN)
    traces = trace_all(ELLIPTIC_TWIN, eqs)
    assert len(traces) == 4
    origin = next(e.id for e in eqs if e.kind == ELLIPTIC)
    for t in traces:
        assert t.resolved and t.landing == origin and t.landing_kind == LANDING_AT_ZERO
        assert abs(t.points[-1]) == 0


def test_center_twin_traces_are_heteroclinic():
    eqs = classify_equilibria(CENTER_TWIN)
    traces = trace_all(CENTER_TWIN, eqs)
    assert len(traces) == 8
    by_slot = {(t.saddle, t.direction): t for t in traces}
    for t in traces:
        assert t.resolved and t.landing_kind == HETEROCLINIC and t.landing != t.saddle
        partner = by_slot[(t.landing, t.matched_direction)]
        assert partner.landing == t.saddle and partner.matched_direction == t.direction
        assert partner.orientation != t.orientation


def test_seed_points_follow_their_label():
    eqs = classify_equilibria(ELLIPTIC_TWIN)
    (s,) = [e for e in eqs if e.kind == SADDLE]
    for theta, label in separatrix_directions(ELLIPTIC_TWIN, s):
        z = s.location + 1e-4 * cmath.exp(1j * theta)
        v = ELLIPTIC_TWIN(z) / cmath.exp(1j * theta)
        assert abs(v.imag) < 1e-3 * abs(v)
        assert (v.real > 0) == (label == "outgoing")


def test_trace_starts_at_seed_radius():
    eqs = classify_equilibria(CENTER_TWIN)
    cfg = TraceConfig().resolved(eqs)
    for t in trace_all(CENTER_TWIN, eqs):
        start = next(e.location for e in eqs if e.id == t.saddle)
        assert abs(abs(t.points[1] - start) - cfg.rho_seed) < 1e-3 * cfg.rho_seed


def test_elliptic_twin_graph():
    sg = extract(ELLIPTIC_TWIN)
    g = sg.graph
    assert len(g.white) == 1 and len(g.black) == 1 and len(g.edges) == 4
    (w,), (b,) = g.white, g.black
    assert valence(g, w) == 4 and cyclic_reversals(g, b) == 4
    rep = check_admissible(g)
    assert rep.verdict and rep.counts()["elliptic"] == 4


def test_center_twin_graph():
    sg = extract(CENTER_TWIN)
    g = sg.graph
    assert len(g.white) == 2 and not g.black and len(g.edges) == 4
    assert set(sg.edge_kinds.values()) == {HETEROCLINIC}
    rep = check_admissible(g)
    assert rep.verdict and rep.centers == 4 and rep.counts()["center"] == 4


def test_newton_graph_connected_and_admissible():
    sg = extract(NEWTON)
    g = sg.graph
    assert g.n_components == 1
    rep = check_admissible(g)
    assert rep.verdict, rep.failed()
    d = degree_report(g)
    assert (d.deg_P, d.deg_Q) == (sg.vf.n, sg.vf.m) == (4, 2)


def test_triple_zero_next_to_saddles():
    # infinity of (z^2-1)/(z(z^2+1/100)) becomes a triple zero after normalizing
    sg = extract(vf(["1", "0", "-1"], ["1", "0", "1/100", "0"]))
    assert sg.resolved
    assert check_admissible(sg.graph).verdict


def test_nested_components_get_containment():
    # potential of unit charges at +-1, +-4i: figure-eight at 0 inside the
    # oval through the saddles at +-i*sqrt(7.5)
    charges = vf(["-i", "0", "-15i", "0", "16i"], ["4", "0", "30", "0"])
    sg = extract(charges)
    assert sg.resolved
    g = sg.graph
    assert g.n_components == 2 and len(g.containment) == 1
    report = check_admissible(g)
    assert report.verdict
    assert report.counts()["annular"] == 1 and report.counts()["center"] == 5
    deg = degree_report(g, report.face_set)
    assert (deg.deg_P, deg.deg_Q) == (sg.vf.n, sg.vf.m) == (5, 3)


@pytest.mark.parametrize("factor", [0.5, 2.0])
def test_seed_radius_stability(factor):
    base = extract(CENTER_TWIN)
    eqs = classify_equilibria(CENTER_TWIN)
    rho = TraceConfig().resolved(eqs).rho_seed
    other = extract(CENTER_TWIN, config=TraceConfig(rho_seed=rho * factor))
    assert graph_to_dict(other.graph) == graph_to_dict(base.graph)

    base = extract(NEWTON)
    other = extract(NEWTON, config=TraceConfig(rho_seed=rho * factor))
    assert graph_to_dict(other.graph) == graph_to_dict(base.graph)


def test_positive_scaling_gives_same_polylines():
    f = ELLIPTIC_TWIN
    g = RationalVF.from_coeffs(3 * f.num, f.den)
    eqs_f, eqs_g = classify_equilibria(f), classify_equilibria(g)
    for a, b in zip(trace_all(f, eqs_f), trace_all(g, eqs_g)):
        assert len(a.points) == len(b.points)
        assert np.max(np.abs(np.array(a.points) - np.array(b.points))) < 1e-9


def test_arc_length_cap_leaves_trace_unresolved():
    sg = extract(ELLIPTIC_TWIN, config=TraceConfig(smax=1e-3))
    assert not sg.resolved
    assert sg.graph is None
    assert all(d["kind"] == "unresolved" for d in sg.diagnostics)
    assert "arc-length" in sg.diagnostics[0]["reason"]


def test_degree_two_field_has_empty_graph():
    sg = extract(vf(["1", "0", "0"]))
    assert sg.empty and sg.resolved
    assert "empty" in sg.diagnostics[0]["message"]


def test_sidecar_is_json():
    sg = extract(NEWTON)
    doc = json.loads(dumps(sg.sidecar()))
    assert doc["resolved"] is True
    assert len(doc["edges"]) == len(sg.graph.edges)
    assert doc["mobius"]["identity"] is False


def test_random_fields_round_trip():
    rng = random.Random(11)
    for _ in range(5):
        sg = extract(random_field(rng, rng.randint(3, 5)))
        assert sg.resolved
        assert check_admissible(sg.graph).verdict
        for w in sg.graph.white:
            order = next(e.order for e in sg.equilibria if e.id == w)
            assert valence(sg.graph, w) == 2 * (order + 1)
        for b in sg.graph.black:
            e = next(e for e in sg.equilibria if e.id == b)
            assert cyclic_reversals(sg.graph, b) == (2 * (e.order - 1) if e.kind == ELLIPTIC else 0)


# sink z0 with |Re lam| / |lam| ~ 4e-3; the two incoming separatrices of p0
# spiral out of the source z2 a tiny fraction of a turn apart
WEAK_FOCUS_ORDER = vf(["1/2+5/2i", "-7/2-4i", "3/2+7/4i", "-3-1i", "11/4-11/4i"],
                      ["11/4-7/2i", "1/2-1i", "-1-5/4i"])
# sink with |Re lam| / |lam| ~ 3e-4: thousands of turns down to delta
WEAK_FOCUS_SPIRAL = vf(["9/4+15/4i", "-3+1/4i", "-1-7/2i", "9/4-2i", "1/4-13/4i", "-3/2+13/4i"],
                       ["7/2+9/4i", "2-3/4i", "-4-3/4i", "-3/2-4i"])


@pytest.mark.parametrize("field", [WEAK_FOCUS_ORDER, WEAK_FOCUS_SPIRAL], ids=["order", "spiral"])
def test_weak_foci_resolve(field):
    sg = extract(field)
    assert sg.resolved, sg.diagnostics
    report = check_admissible(sg.graph)
    assert report.verdict
    deg = degree_report(sg.graph, report.face_set)
    assert (deg.deg_P, deg.deg_Q) == (sg.vf.n, sg.vf.m)
    assert all(t.entry_angle is not None for t in sg.traces if t.landing_kind == LANDING_AT_ZERO)


def test_koenigs_coordinate_linearizes():
    eqs = classify_equilibria(WEAK_FOCUS_SPIRAL)
    chart = _Chart(WEAK_FOCUS_SPIRAL, eqs, False)
    radii = ordering_radii(eqs)
    for e in eqs:
        if e.kind not in (SINK, SOURCE):
            continue
        b = _Basin(chart, e, radii[e.id])
        assert b.level > 0
        for t in (0.3, 0.7):
            z = e.location + t * radii[e.id] * cmath.exp(1j * t)
            h = 1e-6 * radii[e.id]
            dpsi = (b.psi(z + h) - b.psi(z - h)) / (2 * h)
            # psi' R = lam psi
            assert abs(dpsi * chart.velocity(z) - b.lam * b.psi(z)) < 1e-6 * abs(b.lam * b.psi(z))
