"""Positive edge lengths making every annulus have equal boundary lengths.

Each annular face contributes one homogeneous equation

    sum of lengths on the boundary with the annulus on its left
        = sum of lengths on the boundary with the annulus on its right.

``dines_solve`` finds a strictly positive rational solution by Dines'
elimination: the first equation is split by coefficient sign into index
sets I (a >= 0) and J (a < 0), every other equation is multiplied against
it, and the products x_i x_j become the variables of a system with one
equation fewer.  A positive solution y of the reduced system lifts back by

    x_i = sum_j |a_1j| y_ij   (i in I),        x_j = sum_i a_1i y_ij   (j in J),

which satisfies the pivot equation identically and turns each remaining
equation into its product equation.  Variables missing from the pivot
equation are carried into the reduced system as they are; pairing them with
every j would only multiply row sizes without changing the lift.

``feasibility_oracle`` decides the same question independently with an
exact Phase-I simplex on {A x = 0, x >= 1}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .admissibility import ANNULAR, check_admissible
from .graph_core import TAIL, EmbeddedGraph, FaceSet, GraphError, faces


class LengthSystemError(GraphError):
    """Length system is malformed or violates the structural properties."""


class OneSignedEquationError(ArithmeticError):
    """A reduction step produced an equation with no positive solution."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class LengthEquation:
    left: tuple
    right: tuple
    face: int | None = None

    def coefficients(self) -> dict:
        row: dict = {}
        for v in self.left:
            row[v] = row.get(v, 0) + 1
        for v in self.right:
            row[v] = row.get(v, 0) - 1
        return row


@dataclass(frozen=True)
class LengthSystem:
    variables: tuple
    equations: tuple[LengthEquation, ...]

    @classmethod
    def from_sides(cls, sides: Iterable[tuple[Sequence, Sequence]]) -> "LengthSystem":
        eqs = tuple(LengthEquation(tuple(l), tuple(r)) for l, r in sides)
        seen: dict = {}
        for e in eqs:
            for v in e.left + e.right:
                seen.setdefault(v, None)
        return cls(tuple(seen), eqs)

    def rows(self) -> list[dict]:
        return [e.coefficients() for e in self.equations]

    def residuals(self, values: dict) -> list[Fraction]:
        return [sum((Fraction(c) * values[v] for v, c in row.items()), Fraction(0)) for row in self.rows()]

    def satisfied_by(self, values: dict) -> bool:
        return all(values.get(v, 0) > 0 for v in self.variables) and not any(self.residuals(values))

    def to_dict(self):
        return {
            "variables": [str(v) for v in self.variables],
            "equations": [{"face": e.face, "left": [str(v) for v in e.left], "right": [str(v) for v in e.right]}
                          for e in self.equations],
        }


def structural_properties(rows: Sequence[dict]) -> dict[str, list]:
    """Violations of the three structural properties for a system given in
    signed form (positive coefficient = left side).  Empty lists mean the
    property holds."""
    out: dict[str, list] = {"a": [], "b": [], "c": []}
    where: dict = {}
    for r, row in enumerate(rows):
        signs = {v: (c > 0) - (c < 0) for v, c in row.items() if c}
        if 1 not in signs.values() or -1 not in signs.values():
            out["a"].append(r)
        for v, s in signs.items():
            where.setdefault(v, []).append((r, s))
    for v, occ in where.items():
        if len(occ) > 2 or (len(occ) == 2 and occ[0][1] == occ[1][1]):
            out["b"].append(str(v))
            continue
        if len(occ) == 2:
            (r1, s1), (r2, _) = occ
            # v is on side s1 of r1 and the other side of r2
            other1 = {u for u, c in rows[r1].items() if c and (c > 0) != (s1 > 0)}
            other2 = {u for u, c in rows[r2].items() if c and (c > 0) == (s1 > 0)}
            if other1 & other2:
                out["c"].append(str(v))
    return out


def build_system(graph: EmbeddedGraph, face_set: FaceSet | None = None, check: bool = True) -> LengthSystem:
    """One equation per annular face; left = boundary walk with the annulus on
    its left (every edge traversed forward)."""
    if face_set is None:
        face_set = faces(graph)
    report = check_admissible(graph, face_set)
    eqs = []
    for fc in report.face_classes:
        if fc.cls != ANNULAR:
            continue
        walks = face_set[fc.index].walks
        fwd = [all(d.end == TAIL for d in w) for w in walks]
        lw, rw = (walks[0], walks[1]) if fwd[0] else (walks[1], walks[0])
        eqs.append(LengthEquation(tuple(d.edge for d in lw), tuple(d.edge for d in rw), fc.index))
    used = {v for e in eqs for v in e.left + e.right}
    system = LengthSystem(tuple(e.id for e in graph.edges if e.id in used), tuple(eqs))
    if check:
        bad = {k: v for k, v in structural_properties(system.rows()).items() if v}
        if bad:
            raise LengthSystemError(f"length system violates structural properties: {bad}")
    return system


# -- Dines reduction ----------------------------------------------------------

@dataclass
class ReductionStep:
    pivot: dict                    # the equation eliminated at this step
    I: tuple                       # a_1i >= 0 (zero entries are carried over)
    J: tuple
    product: list[dict]            # reduced system (signed form, zero terms dropped)
    one_signed: list[bool]         # per equation of ``product``
    properties: dict[str, list]    # structural property violations of ``product``

    def to_dict(self):
        return {
            "pivot": _row_to_json(self.pivot),
            "I": [_name(v) for v in self.I],
            "J": [_name(v) for v in self.J],
            "product": [_row_to_json(r) for r in self.product],
            "one_signed": self.one_signed,
            "properties": self.properties,
        }


@dataclass
class ReductionTrace:
    initial: list[dict]
    steps: list[ReductionStep] = field(default_factory=list)
    final: dict | None = None

    def any_one_signed(self) -> bool:
        return any(_one_signed(r) for r in self.initial) or any(any(s.one_signed) for s in self.steps)

    def to_dict(self):
        return {
            "initial": [_row_to_json(r) for r in self.initial],
            "steps": [s.to_dict() for s in self.steps],
            "final": None if self.final is None else _row_to_json(self.final),
        }


@dataclass
class LengthAssignment:
    lengths: dict                  # variable -> positive Fraction
    system: LengthSystem | None = None
    trace: ReductionTrace | None = None

    def __getitem__(self, key):
        return self.lengths[key]

    def to_dict(self):
        from .io import fraction_to_str
        return {"lengths": {str(k): fraction_to_str(v) for k, v in self.lengths.items()}}


def _name(v) -> str:
    if isinstance(v, tuple):
        return "(" + "*".join(_name(t) for t in v) + ")"
    return str(v)


def _row_to_json(row: dict) -> dict:
    return {_name(v): str(c) for v, c in row.items()}


def _one_signed(row: dict) -> bool:
    pos = any(c > 0 for c in row.values())
    neg = any(c < 0 for c in row.values())
    return not (pos and neg)


def _product_system(rows: list[dict]) -> tuple[tuple, tuple, tuple, list[dict]]:
    """One elimination.  Variables absent from the pivot are carried over
    unchanged: pairing them with every j in J and lifting by
    x_z = sum_j |a_1j| y_zj only ever uses that sum, so one column suffices."""
    pivot, rest = rows[0], rows[1:]
    variables: dict = {}
    for row in rows:
        for v in row:
            variables.setdefault(v, None)
    I = tuple(v for v in variables if pivot.get(v, 0) > 0)
    J = tuple(v for v in variables if pivot.get(v, 0) < 0)
    Z = tuple(v for v in variables if v not in pivot)
    product = []
    for row in rest:
        new: dict = {}
        for i in I:
            a1i, ari = pivot[i], row.get(i, 0)
            for j in J:
                c = a1i * row.get(j, 0) - pivot[j] * ari
                if c:
                    new[(i, j)] = c
        for z in Z:
            if row.get(z):
                new[z] = row[z]
        product.append(new)
    return I, J, Z, product


def dines_solve(system: LengthSystem) -> tuple[LengthAssignment, ReductionTrace]:
    """Strictly positive exact solution, scaled so the smallest length is 1."""
    rows = [{v: c for v, c in r.items() if c} for r in system.rows()]
    trace = ReductionTrace(initial=rows)
    if not system.equations:
        return LengthAssignment({}, system, trace), trace

    # drop vacuous equations, reject one-signed ones
    def prune(rs):
        kept = []
        for r in rs:
            if not r:
                continue
            if _one_signed(r):
                raise OneSignedEquationError(f"equation with coefficients of one sign: {_row_to_json(r)}", trace)
            kept.append(r)
        return kept

    levels = []                     # (pivot, I, J) per elimination
    current = prune(rows)
    while len(current) > 1:
        I, J, Z, product = _product_system(current)
        step = ReductionStep(current[0], I + Z, J, product, [bool(p) and _one_signed(p) for p in product],
                             structural_properties(product))
        trace.steps.append(step)
        levels.append((current[0], I, J, Z))
        current = prune(product)

    values: dict = {}
    if current:
        (last,) = current
        trace.final = last
        pos = sum(c for c in last.values() if c > 0)
        neg = sum(c for c in last.values() if c < 0)
        for v, c in last.items():
            values[v] = Fraction(-neg) if c > 0 else Fraction(pos)

    for pivot, I, J, Z in reversed(levels):
        y = values
        values = {z: y.get(z, Fraction(1)) for z in Z}
        for i in I:
            values[i] = sum((abs(pivot[j]) * y.get((i, j), 1) for j in J), Fraction(0))
        for j in J:
            values[j] = sum((pivot[i] * y.get((i, j), 1) for i in I), Fraction(0))

    result = {v: values.get(v, Fraction(1)) for v in system.variables}
    if any(x <= 0 for x in result.values()):
        raise OneSignedEquationError("lifted solution is not strictly positive", trace)
    if result:
        m = min(result.values())
        result = {v: x / m for v, x in result.items()}
    if any(system.residuals(result)):
        raise ArithmeticError("lifted solution does not satisfy the system")
    return LengthAssignment(result, system, trace), trace


# -- independent oracle -------------------------------------------------------

def feasibility_oracle(system: LengthSystem | Sequence[dict]) -> tuple[bool, dict | None]:
    """Decide whether A x = 0 has a solution with every x >= 1 (equivalently
    x > 0, by homogeneity).  Exact Phase-I simplex with Bland's rule."""
    if isinstance(system, LengthSystem):
        rows, variables = system.rows(), list(system.variables)
    else:
        rows = [dict(r) for r in system]
        variables = list(dict.fromkeys(v for r in rows for v in r))
    n, m = len(variables), len(rows)
    if m == 0:
        return True, {v: Fraction(1) for v in variables}
    col = {v: k for k, v in enumerate(variables)}
    # x = 1 + s, s >= 0:  A s = -A 1
    A = [[Fraction(0)] * n for _ in range(m)]
    b = [Fraction(0)] * m
    for r, row in enumerate(rows):
        for v, c in row.items():
            A[r][col[v]] = Fraction(c)
        b[r] = -sum(A[r])
        if b[r] < 0:
            A[r] = [-a for a in A[r]]
            b[r] = -b[r]
    # tableau with artificial columns n..n+m-1
    T = [A[r] + [Fraction(int(k == r)) for k in range(m)] + [b[r]] for r in range(m)]
    basis = [n + r for r in range(m)]
    width = n + m
    obj = [-sum(T[r][k] for r in range(m)) for k in range(width)] + [-sum(b)]
    for k in range(n, width):
        obj[k] = Fraction(0)
    while True:
        enter = next((k for k in range(width) if obj[k] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for r in range(m):
            if T[r][enter] > 0:
                ratio = T[r][-1] / T[r][enter]
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:       # unbounded phase-I cannot happen; guard anyway
            break
        piv = T[leave][enter]
        T[leave] = [t / piv for t in T[leave]]
        for r in range(m):
            if r != leave and T[r][enter]:
                f = T[r][enter]
                T[r] = [a - f * p for a, p in zip(T[r], T[leave])]
        f = obj[enter]
        obj = [a - f * p for a, p in zip(obj, T[leave])]
        basis[leave] = enter
    if obj[-1] != 0:
        return False, None
    s = [Fraction(0)] * n
    for r, k in enumerate(basis):
        if k < n:
            s[k] = T[r][-1]
    return True, {v: 1 + s[col[v]] for v in variables}


# -- graph level ----------------------------------------------------------------

def solve_lengths(graph: EmbeddedGraph, face_set: FaceSet | None = None, verify: bool = False) -> LengthAssignment:
    """Lengths for every edge: annulus boundary edges from ``dines_solve``,
    every other edge gets length 1."""
    if face_set is None:
        face_set = faces(graph)
    system = build_system(graph, face_set)
    sol, trace = dines_solve(system)
    if verify:
        ok, _ = feasibility_oracle(system)
        if not ok or not system.satisfied_by(sol.lengths):
            raise ArithmeticError("length solution failed independent verification")
    lengths = {e.id: sol.lengths.get(e.id, Fraction(1)) for e in graph.edges}
    return LengthAssignment(lengths, system, trace)
