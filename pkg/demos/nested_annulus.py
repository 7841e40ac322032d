"""Potential flow of four unit charges: a separatrix graph with two nested
components and one annulus of periodic orbits between them.

R = -i / sum 1/(z - a_j) for charges at +-1 and +-4i.  Every zero of R is a
center; the saddle at 0 carries a figure-eight around +-1, and the saddles
at +-i sqrt(7.5) carry an oval around it.  The annulus gives one length
equation, solved by the Dines reduction.
"""
import sympy as sp

from seplab.admissibility import check_admissible
from seplab.length_solver import build_system, solve_lengths
from seplab.realization import build_zones, degree_report
from seplab.vf.assemble import extract
from seplab.vf.field import RationalVF

z = sp.Symbol("z")
charges = [1, -1, 4 * sp.I, -4 * sp.I]
P = sp.expand(-sp.I * sp.prod([z - a for a in charges]))
Q = sp.expand(sp.diff(sp.prod([z - a for a in charges]), z))
vf = RationalVF.from_coeffs(sp.Poly(P, z).all_coeffs(), sp.Poly(Q, z).all_coeffs(), exact=True)

sg = extract(vf)
g = sg.graph
report = check_admissible(g)
print("components:", g.n_components, "containment:", g.containment)
print("faces:", report.counts())

system = build_system(g, report.face_set)
for eq in system.equations:
    print("annulus equation:", " + ".join(eq.left), "=", " + ".join(eq.right))
sol = solve_lengths(g, report.face_set)
print("lengths:", {k: str(v) for k, v in sol.lengths.items()})

surface = build_zones(g, report.face_set, sol.lengths)
print("zones:", sorted(zn.kind for zn in surface.zones))
deg = degree_report(g, report.face_set)
print(f"degrees from the graph: deg P = {deg.deg_P}, deg Q = {deg.deg_Q}; field: {sg.vf.n}, {sg.vf.m}")
