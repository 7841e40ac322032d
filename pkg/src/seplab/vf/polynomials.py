"""Polynomial helpers.  Coefficient lists are highest degree first."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import sympy as sp

Z = sp.Symbol("z")


class RootFindingError(ArithmeticError):
    pass


def trim(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    nz = np.flatnonzero(c != 0)
    return c[nz[0]:] if len(nz) else np.zeros(1, complex)


def derivative(c: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    if n == 0:
        return np.zeros(1, complex)
    return c[:-1] * np.arange(n, 0, -1)


def aberth(coeffs, tol: float = 1e-15, maxiter: int = 2000) -> np.ndarray:
    """All roots by Aberth-Ehrlich simultaneous iteration, then Newton polish."""
    c = trim(coeffs)
    n = len(c) - 1
    if n <= 0:
        return np.zeros(0, complex)
    c = c / c[0]
    if n == 1:
        return np.array([-c[1]])
    dc = derivative(c)
    # Fujiwara-type radius, shifted to the centroid of the roots
    centre = -c[1] / n
    radius = 2 * max(abs(c[k]) ** (1.0 / k) for k in range(1, n + 1)) or 1.0
    z = centre + radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    eye = np.eye(n, dtype=bool)
    for _ in range(maxiter):
        p = np.polyval(c, z)
        dp = np.polyval(dc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            diff[eye] = 1
            s = (1 / diff).sum(axis=1) - 1          # remove the diagonal term 1/1
            w = ratio / (1 - ratio * s)
        bad = ~np.isfinite(w)
        if bad.any():
            w[bad] = 1e-3 * radius * np.exp(1j * np.arange(bad.sum()))
        z = z - w
        if np.all(np.abs(w) <= tol * np.maximum(1, np.abs(z))):
            break
    else:
        if not np.all(np.isfinite(z)):
            raise RootFindingError("Aberth iteration diverged")
    return polish(c, z)


def polish(c, z, steps: int = 3) -> np.ndarray:
    c = trim(c)
    dc = derivative(c)
    z = np.array(z, dtype=complex)
    for _ in range(steps):
        dp = np.polyval(dc, z)
        ok = dp != 0
        step = np.zeros_like(z)
        step[ok] = np.polyval(c, z[ok]) / dp[ok]
        z = z - step
    return z


def cluster_roots(roots: np.ndarray, radius: float) -> list[tuple[complex, int]]:
    """Group roots closer than ``radius`` (relative to max(1, |root|))."""
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) < radius * max(1.0, abs(roots[i])):
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    return [(complex(np.mean(g)), len(g)) for g in groups.values()]


def numeric_roots(coeffs, tol_root: float = 1e-8) -> list[tuple[complex, int]]:
    """Roots with multiplicities for floating point coefficients.  A root of
    multiplicity m is only resolved to about eps**(1/m), so clusters are
    formed at radius sqrt(tol_root) and their centre refined on the
    (m-1)-th derivative, where the root is simple."""
    c = trim(coeffs)
    out = []
    for r, m in cluster_roots(aberth(c), np.sqrt(tol_root)):
        d = c
        for _ in range(m - 1):
            d = derivative(d)
        out.append((complex(polish(d, [r], steps=4)[0]), m))
    return sorted(out, key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))


# -- exact (Gaussian rational) -------------------------------------------------

def _exact(c):
    if isinstance(c, (int, float, complex)) and not isinstance(c, bool):
        c = complex(c)
        return sp.Rational(Fraction(c.real)) + sp.I * sp.Rational(Fraction(c.imag))
    return sp.sympify(c)


def to_poly(coeffs) -> sp.Poly:
    """Exact polynomial over Q(i).  Floats are taken at their exact binary value."""
    return sp.Poly([_exact(c) for c in coeffs], Z, domain=sp.QQ_I)


def exact_roots(poly: sp.Poly) -> list[tuple[complex, int, sp.Poly]]:
    """Roots with exact multiplicities: split the polynomial into square-free
    factors over Q(i), then locate the (simple) roots of each factor
    numerically.  Returns (root, multiplicity, factor)."""
    out = []
    for factor, mult in poly.sqf_list()[1]:
        if factor.degree() <= 0:
            continue
        c = np.array([complex(x) for x in factor.all_coeffs()])
        for r in aberth(c):
            out.append((complex(r), mult, factor))
    return sorted(out, key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))


def exact_common_factor(p: sp.Poly, q: sp.Poly) -> sp.Poly | None:
    g = sp.gcd(p, q)
    return g if g.degree() > 0 else None


def coeffs_complex(poly: sp.Poly) -> np.ndarray:
    return np.array([complex(x) for x in poly.all_coeffs()])
