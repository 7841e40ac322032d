"""Rational vector fields dz/dt = P(z)/Q(z) and their equilibria.

Local models:

* simple zero a of P:  R'(a) = P'(a)/Q(a); Re R'(a) > 0 source, < 0 sink,
  = 0 center.  Index +1.
* zero of multiplicity k >= 2: elliptic point, index +k.
* pole of order k: saddle with 2(k+1) separatrix directions, index -k.
* infinity: in the chart w = 1/z the field is -w^2 R(1/w), which vanishes
  to order 2 + deg Q - deg P at w = 0; negative order means a pole.

Near a pole w of order k, R(z) ~ c (z - w)^(-k) with
c = P(w) / (Q^(k)(w)/k!).  A ray z = w + r e^(i theta) is invariant when
c e^(-i k theta) is a real multiple of e^(i theta), i.e.

    theta_j = (arg c + j pi) / (k + 1),     j = 0 .. 2k + 1,

outgoing for even j and incoming for odd j.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
import sympy as sp

from .polynomials import Z, coeffs_complex, derivative, exact_common_factor, exact_roots, numeric_roots, to_poly, trim

SINK, SOURCE, CENTER, ELLIPTIC, SADDLE, REGULAR = "sink", "source", "center", "elliptic", "saddle", "regular"

TOL_ROOT = 1e-8
TOL_CENTER = 1e-10


class FieldError(ValueError):
    """Invalid vector field input."""


class CommonFactorError(FieldError):
    pass


class DegenerateFieldError(FieldError):
    pass


@dataclass(frozen=True)
class RationalVF:
    num: np.ndarray
    den: np.ndarray
    exact_num: sp.Poly | None = None
    exact_den: sp.Poly | None = None

    @classmethod
    def from_coeffs(cls, num, den=(1,), exact: bool = False) -> "RationalVF":
        if exact:
            p, q = to_poly(num), to_poly(den)
            if p.is_zero or q.is_zero:
                raise FieldError("numerator and denominator must be nonzero")
            return cls(coeffs_complex(p), coeffs_complex(q), p, q)
        p, q = trim(num), trim(den)
        if not p.any() or not q.any():
            raise FieldError("numerator and denominator must be nonzero")
        return cls(p, q)

    @classmethod
    def from_exact(cls, p: sp.Poly, q: sp.Poly) -> "RationalVF":
        return cls(coeffs_complex(p), coeffs_complex(q), p, q)

    @property
    def exact(self) -> bool:
        return self.exact_num is not None

    @property
    def n(self) -> int:
        return len(self.num) - 1

    @property
    def m(self) -> int:
        return len(self.den) - 1

    @property
    def degree(self) -> int:
        """deg P once infinity is made regular: max(n, m + 2).  Degree 2
        fields have no saddles and an empty separatrix graph."""
        return max(self.n, self.m + 2)

    def __call__(self, z):
        return np.polyval(self.num, z) / np.polyval(self.den, z)

    def rectifying_density(self, z):
        """dphi/dz = Q/P for the rectifying coordinate phi."""
        return np.polyval(self.den, z) / np.polyval(self.num, z)

    def at_infinity(self) -> "RationalVF":
        """The field -w^2 R(1/w) in the chart w = 1/z."""
        n, m = self.n, self.m
        p_rev, q_rev = self.num[::-1], self.den[::-1]
        # -w^2 * w^(m-n) * p_rev / q_rev
        shift = 2 + m - n
        if shift >= 0:
            num = -np.concatenate([trim(p_rev), np.zeros(shift, complex)])
            den = trim(q_rev)
        else:
            num = -trim(p_rev)
            den = np.concatenate([trim(q_rev), np.zeros(-shift, complex)])
        return RationalVF(trim(num), trim(den))

    def to_dict(self):
        from ..io import gaussian_to_str
        if self.exact:
            return {"numerator": [gaussian_to_str(c) for c in self.exact_num.all_coeffs()],
                    "denominator": [gaussian_to_str(c) for c in self.exact_den.all_coeffs()],
                    "exact": True}
        return {"numerator": [[c.real, c.imag] for c in self.num],
                "denominator": [[c.real, c.imag] for c in self.den]}


def check_coprime(vf: RationalVF, tol_root: float = TOL_ROOT) -> None:
    if vf.exact:
        g = exact_common_factor(vf.exact_num, vf.exact_den)
        if g is not None:
            raise CommonFactorError(f"common factor {g.as_expr()} in numerator and denominator")
        return
    if vf.n == 0 or vf.m == 0:
        return
    zs = [r for r, _ in numeric_roots(vf.num, tol_root)]
    ps = [r for r, _ in numeric_roots(vf.den, tol_root)]
    for a in zs:
        for b in ps:
            if abs(a - b) < math.sqrt(tol_root) * max(1.0, abs(a)):
                raise CommonFactorError(f"numerator and denominator share the root {a:.6g}")


def index_at_infinity(vf: RationalVF) -> int:
    return 2 + vf.m - vf.n


# -- Moebius normalization ------------------------------------------------------

@dataclass(frozen=True)
class Mobius:
    """w = a z / (z - alpha); identity when ``alpha`` is None."""
    alpha: complex | None = None
    a: complex = 1
    exact_alpha: str | None = None
    exact_a: str | None = None

    @property
    def identity(self) -> bool:
        return self.alpha is None

    def forward(self, z):
        if self.identity:
            return z
        return self.a * z / (z - self.alpha)

    def inverse(self, w):
        if self.identity:
            return w
        return self.alpha * w / (w - self.a)

    def to_dict(self):
        if self.identity:
            return {"identity": True}
        return {"identity": False, "alpha": self.exact_alpha or [self.alpha.real, self.alpha.imag],
                "a": self.exact_a or [complex(self.a).real, complex(self.a).imag],
                "map": "w = a*z/(z - alpha)"}


def _np_pow(c, k):
    out = np.ones(1, complex)
    for _ in range(k):
        out = np.polymul(out, c)
    return out


def pushforward(vf: RationalVF, alpha, a) -> RationalVF:
    """Field in the coordinate w = a z/(z - alpha):

        R~(w) = -(w - a)^(2 + m - n) / (a alpha) * P_h(w) / Q_h(w),
        P_h(w) = sum_i p_i (alpha w)^i (w - a)^(n - i)   (same for Q_h).

    P_h and Q_h have exact degrees n and m (leading coefficients P(alpha),
    Q(alpha)) and do not vanish at w = a, so nothing cancels."""
    n, m = vf.n, vf.m
    e = 2 + m - n
    if vf.exact:
        w = sp.Poly(Z, Z, domain=sp.QQ_I)
        al, aa = sp.sympify(alpha), sp.sympify(a)

        def homog(poly):
            d = poly.degree()
            coeffs = poly.all_coeffs()[::-1]
            out = sp.Poly(0, Z, domain=sp.QQ_I)
            for i, ci in enumerate(coeffs):
                if ci:
                    out += sp.Poly(ci, Z, domain=sp.QQ_I) * (al * w) ** i * (w - aa) ** (d - i)
            return out

        num, den = homog(vf.exact_num), homog(vf.exact_den)
        num = num * sp.Poly(-1 / (aa * al), Z, domain=sp.QQ_I)
        if e > 0:
            num = num * (w - aa) ** e
        elif e < 0:
            den = den * (w - aa) ** (-e)
        return RationalVF.from_exact(num, den)

    alpha, a = complex(alpha), complex(a)

    def homog_np(c):
        d = len(c) - 1
        out = np.zeros(d + 1, complex)
        for i, ci in enumerate(c[::-1]):
            term = ci * alpha ** i * np.polymul(_np_pow(np.array([1, 0], complex), i), _np_pow(np.array([1, -a]), d - i))
            out = np.polyadd(out, term)
        return out

    num = -homog_np(vf.num) / (a * alpha)
    den = homog_np(vf.den)
    if e > 0:
        num = np.polymul(num, _np_pow(np.array([1, -a]), e))
    elif e < 0:
        den = np.polymul(den, _np_pow(np.array([1, -a]), -e))
    return RationalVF(trim(num), trim(den))


def _all_roots(vf: RationalVF, tol_root: float):
    if vf.exact:
        zs = [(r, k) for r, k, _ in exact_roots(vf.exact_num)]
        ps = [(r, k) for r, k, _ in exact_roots(vf.exact_den)]
    else:
        zs = numeric_roots(vf.num, tol_root) if vf.n else []
        ps = numeric_roots(vf.den, tol_root) if vf.m else []
    return zs, ps


def normalize_infinity(vf: RationalVF, seed: int = 0, attempt: int = 0,
                       tol_root: float = TOL_ROOT) -> tuple[RationalVF, Mobius]:
    """Conjugate by a Moebius map so that deg P = deg Q + 2 (infinity regular).

    The pole of the map, alpha, is drawn from a seeded generator on a grid of
    Gaussian rationals and rejected until it is nonzero and well away from
    every root of P and Q.  ``attempt`` selects later draws, which the
    extraction uses when alpha turns out to lie too close to a separatrix."""
    if vf.n == vf.m + 2 and attempt == 0:
        return vf, Mobius()
    zs, ps = _all_roots(vf, tol_root)
    pts = [r for r, _ in zs + ps]
    centre = complex(np.mean(pts)) if pts else 0j
    spread = max([abs(p - centre) for p in pts] + [1.0])
    rng = np.random.default_rng([seed, attempt])
    for _ in range(1000):
        x, y = rng.uniform(-1.5, 1.5, size=2)
        cand = complex(Fraction(round((centre.real + spread * x) * 16), 16), Fraction(round((centre.imag + spread * y) * 16), 16))
        gap = min([abs(cand - p) for p in pts] + [abs(cand)])
        if gap > 0.1 * spread:
            break
    else:
        raise DegenerateFieldError("could not find a regular point for the normalization")
    ar, ai = Fraction(round(cand.real * 16), 16), Fraction(round(cand.imag * 16), 16)
    alpha = sp.Rational(ar) + sp.I * sp.Rational(ai)
    out = pushforward(vf, alpha, 1)
    exact_alpha = f"{ar}{'+' if ai >= 0 else '-'}{abs(ai)}i"
    return out, Mobius(complex(alpha), 1, exact_alpha, "1")


# -- equilibria ----------------------------------------------------------------

@dataclass(frozen=True)
class Equilibrium:
    id: str
    location: complex | None        # None is the point at infinity
    kind: str
    order: int
    index: int
    derivative: complex | None = None       # R'(z0) for simple zeros
    leading: complex | None = None          # c in R ~ c (z - z0)^(-k) at saddles
    certainty: str | None = None            # how a center was decided
    flagged: bool = False                   # center decided within tolerance only

    def to_dict(self):
        loc = None if self.location is None else [self.location.real, self.location.imag]
        d = {"id": self.id, "location": loc, "kind": self.kind, "order": self.order, "index": self.index}
        if self.derivative is not None:
            d["re_derivative"] = self.derivative.real
        if self.certainty is not None:
            d["center_test"] = self.certainty
        if self.flagged:
            d["note"] = "center (within tolerance)"
        return d


def _simple_zero_kind(vf, root, factor, tol_center):
    """Kind of a simple zero and how sure we are about a center."""
    d = complex(np.polyval(derivative(vf.num), root) / np.polyval(vf.den, root))
    if vf.exact and factor is not None:
        # rational root: decide exactly
        rr = sp.Rational(Fraction(root.real).limit_denominator(10**6)) + \
            sp.I * sp.Rational(Fraction(root.imag).limit_denominator(10**6))
        if factor.eval(rr) == 0:
            val = sp.expand(vf.exact_num.diff(Z).eval(rr) / vf.exact_den.eval(rr))
            re = sp.re(val)
            return (CENTER if re == 0 else SOURCE if re > 0 else SINK), d, "exact", False
        # algebraic root: refine to high precision and decide at 1e-40
        with mpmath.workdps(60):
            cs = [_mp(c) for c in factor.all_coeffs()]
            z0 = mpmath.mpc(root)
            dcs = [cs[i] * (len(cs) - 1 - i) for i in range(len(cs) - 1)]
            for _ in range(20):
                z0 = z0 - mpmath.polyval(cs, z0) / mpmath.polyval(dcs, z0)
            pn = [_mp(c) for c in vf.exact_num.diff(Z).all_coeffs()]
            qd = [_mp(c) for c in vf.exact_den.all_coeffs()]
            val = mpmath.polyval(pn, z0) / mpmath.polyval(qd, z0)
            if abs(val.real) < mpmath.mpf(10) ** -40 * max(1, abs(val)):
                return CENTER, d, "high_precision", False
            return (SOURCE if val.real > 0 else SINK), d, "high_precision", False
    if abs(d.real) < tol_center * max(1.0, abs(d)):
        return CENTER, d, "tolerance", True
    return (SOURCE if d.real > 0 else SINK), d, None, False


def _mp(c):
    re, im = sp.re(c), sp.im(c)
    return mpmath.mpc(mpmath.mpf(re.p) / re.q, mpmath.mpf(im.p) / im.q)


def leading_coefficient(vf: RationalVF, pole: complex, k: int) -> complex:
    d = vf.den
    for _ in range(k):
        d = derivative(d)
    return complex(np.polyval(vf.num, pole) / (np.polyval(d, pole) / math.factorial(k)))


def classify_equilibria(vf: RationalVF, tol_root: float = TOL_ROOT,
                        tol_center: float = TOL_CENTER) -> list[Equilibrium]:
    out = []
    if vf.exact:
        zeros = exact_roots(vf.exact_num)
        poles = exact_roots(vf.exact_den)
    else:
        zeros = [(r, k, None) for r, k in numeric_roots(vf.num, tol_root)] if vf.n else []
        poles = [(r, k, None) for r, k in numeric_roots(vf.den, tol_root)] if vf.m else []
    for i, (r, k, factor) in enumerate(zeros):
        if k == 1:
            kind, d, cert, flag = _simple_zero_kind(vf, r, factor, tol_center)
            out.append(Equilibrium(f"z{i}", r, kind, 1, 1, d, None, cert if kind == CENTER else None, flag))
        else:
            out.append(Equilibrium(f"z{i}", r, ELLIPTIC, k, k))
    for i, (r, k, _) in enumerate(poles):
        out.append(Equilibrium(f"p{i}", r, SADDLE, k, -k, leading=leading_coefficient(vf, r, k)))
    idx = index_at_infinity(vf)
    if idx != 0:
        if idx < 0:
            out.append(Equilibrium("inf", None, SADDLE, -idx, idx))
        elif idx >= 2:
            out.append(Equilibrium("inf", None, ELLIPTIC, idx, idx))
        else:
            # -w^2 R(1/w) ~ -(p_n/q_m) w near w = 0
            d = -vf.num[0] / vf.den[0]
            if vf.exact:
                val = -vf.exact_num.LC() / vf.exact_den.LC()
                re = sp.re(sp.expand(val))
                kind = CENTER if re == 0 else SOURCE if re > 0 else SINK
                cert = "exact" if kind == CENTER else None
                flag = False
            else:
                flag = abs(d.real) < tol_center * max(1.0, abs(d))
                kind = CENTER if flag else SOURCE if d.real > 0 else SINK
                cert = "tolerance" if flag else None
            out.append(Equilibrium("inf", None, kind, 1, 1, complex(d), None, cert, flag))
    return out


def index_sum(equilibria) -> int:
    return sum(e.index for e in equilibria)


def directions_from_leading(c: complex, k: int) -> list[tuple[float, str]]:
    base = math.atan2(c.imag, c.real)
    out = []
    for j in range(2 * (k + 1)):
        theta = (base + j * math.pi) / (k + 1)
        out.append((theta, "outgoing" if j % 2 == 0 else "incoming"))
    return out


def separatrix_directions(vf: RationalVF, saddle: Equilibrium) -> list[tuple[float, str]]:
    if saddle.kind != SADDLE or saddle.location is None:
        raise ValueError("separatrix directions need a finite saddle")
    c = saddle.leading if saddle.leading is not None else leading_coefficient(vf, saddle.location, saddle.order)
    if abs(c) == 0 or not np.isfinite(c):
        raise ArithmeticError(f"leading coefficient vanishes at {saddle.id}: multiplicity is wrong")
    return directions_from_leading(c, saddle.order)
