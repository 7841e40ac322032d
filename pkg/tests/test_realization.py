import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from seplab.fixtures import (
    figure_eight_annulus,
    gamma_centers,
    gamma_elliptic,
    make_graph,
    nested_two_cycles,
    random_admissible,
    three_sinks_saddle,
)
from seplab.graph_core import WHITE, euler_check
from seplab.realization import (
    FINITE_CYLINDER,
    HALF_INFINITE_CYLINDER,
    HALF_PLANE,
    STRIP,
    ZoneError,
    build_zones,
    degree_report,
)


def _kinds(surface):
    out = {}
    for z in surface.zones:
        out[z.kind] = out.get(z.kind, 0) + 1
    return out


def _glued_twice(surface, graph):
    return all(set(surface.gluing[e.id]) == {"lower", "upper"} for e in graph.edges)


def test_center_twin_cylinders():
    g = gamma_centers()
    s = build_zones(g, lengths={e.id: Fraction(1) for e in g.edges})
    assert _kinds(s) == {HALF_INFINITE_CYLINDER: 4}
    assert all(z.circumference == 2 for z in s.zones)
    assert sorted(z.sign for z in s.zones) == [-1, -1, 1, 1]
    assert _glued_twice(s, g)
    assert len(s.punctures) == 4
    assert s.euler_characteristic == 2


def test_elliptic_twin_half_planes():
    g = gamma_elliptic()
    s = build_zones(g)
    assert _kinds(s) == {HALF_PLANE: 4}
    for z in s.zones:
        (word,) = z.boundary
        assert word.vertices[0] == "b"          # the word starts at the elliptic point
        assert all(x is None for x in word.lengths)
    assert s.punctures == [("black", "b")]
    assert s.euler_characteristic == 2


def test_nested_cycles_annulus():
    g = nested_two_cycles()
    s = build_zones(g)
    assert _kinds(s) == {FINITE_CYLINDER: 1, HALF_INFINITE_CYLINDER: 2}
    (ann,) = [z for z in s.zones if z.kind == FINITE_CYLINDER]
    lower, upper = sorted(ann.boundary, key=lambda w: w.side)
    assert lower.total == upper.total == ann.circumference
    assert ann.height == 1 and ann.shear == 0
    assert _glued_twice(s, g)


def test_figure_eight_annulus_lengths():
    g = figure_eight_annulus()
    s = build_zones(g)
    (ann,) = [z for z in s.zones if z.kind == FINITE_CYLINDER]
    assert ann.circumference == 2
    assert s.euler_characteristic == 2


def test_strips():
    g = three_sinks_saddle()
    s = build_zones(g)
    assert _kinds(s) == {STRIP: 2}
    for z in s.zones:
        assert {w.side for w in z.boundary} == {"lower", "upper"}


def test_mismatched_lengths_rejected():
    g = figure_eight_annulus()
    with pytest.raises(ZoneError, match="boundary lengths"):
        build_zones(g, lengths={"L1": Fraction(1), "L2": Fraction(1), "L3": Fraction(5), "L4": Fraction(1)})


@pytest.mark.parametrize("graph, dq, dp, centers", [
    (gamma_elliptic, 1, 3, 0),
    (gamma_centers, 2, 4, 4),
    (figure_eight_annulus, 2, 4, 4),
    (three_sinks_saddle, 1, 3, 0),
])
def test_degree_report(graph, dq, dp, centers):
    d = degree_report(graph())
    assert (d.deg_Q, d.deg_P, d.centers) == (dq, dp, centers)
    assert d.deg_P_from_zeros == dp
    assert d.consistent, d.checks


def test_elliptic_zero_order():
    d = degree_report(gamma_elliptic())
    assert d.zero_orders == {"b": 3}
    assert d.pole_orders == {"w": 1}


def test_valence_six_saddle_pole_order_two():
    # one saddle of valence 6 with three petals (homoclinic loops)
    g = make_graph({"w": WHITE}, [("L0", "w", "w"), ("L1", "w", "w"), ("L2", "w", "w")],
                   {"w": ["L0t", "L0h", "L1t", "L1h", "L2t", "L2h"]})
    d = degree_report(g)
    assert d.pole_orders == {"w": 2}
    assert (d.deg_Q, d.deg_P, d.centers) == (2, 4, 4)
    assert d.consistent


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_chain_closes_on_generated_graphs(seed):
    g = random_admissible(random.Random(seed))
    d = degree_report(g)
    assert d.consistent, d.checks
    s = build_zones(g)
    assert s.euler_characteristic == 2
    assert _glued_twice(s, g)
    assert euler_check(g)[0]
    assert len(s.punctures) == len(g.black) + d.centers
