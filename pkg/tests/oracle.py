"""Independent brute-force solvability deciders built on sympy.

This module must stay decoupled from the package under test: inputs are
plain coefficient lists, every computation runs through sympy's rational
arithmetic, and solvability is decided by exhaustive linear algebra over a
deliberately oversized pole ansatz rather than any dispersion or peeling
argument. Soundness is unconditional (a nonzero nullspace vector IS a
solution); completeness holds for inputs whose pole orbits fit inside
ORBIT_SPAN, which the corpus construction guarantees.
"""
from __future__ import annotations

from fractions import Fraction

import sympy as sp
from sympy.polys.matrices import DomainMatrix

X = sp.symbols("x")

ORBIT_SPAN = 5
DEGREE_SLACK = 6
ORIGIN_POWER_CAP = 6


def _poly(coeffs: list[Fraction]) -> sp.Poly:
    """Ascending coefficient list -> sympy Poly over QQ."""
    desc = [sp.Rational(c.numerator, c.denominator) for c in reversed(coeffs)]
    return sp.Poly(desc if desc else [0], X, domain="QQ")


def _shift(p: sp.Poly, by: int) -> sp.Poly:
    return sp.Poly(p.as_expr().subs(X, X + by), X, domain="QQ")


def _scale(p: sp.Poly, c) -> sp.Poly:
    return sp.Poly(p.as_expr().subs(X, sp.Rational(c.numerator, c.denominator) * X), X, domain="QQ")


def _apply(kind: str, q, p: sp.Poly) -> sp.Poly:
    return _shift(p, 1) if kind == "shift" else _scale(p, q)


def _columns_to_matrix(cols: list[sp.Poly]) -> sp.Matrix:
    deg = max((c.degree() for c in cols if not c.is_zero), default=0)
    rows = deg + 1
    mat = sp.zeros(rows, len(cols))
    for j, c in enumerate(cols):
        for i, coeff in enumerate(reversed(c.all_coeffs())):
            mat[i, j] = coeff
    return mat


def _pole_ansatz_mult(kind: str, q, num: sp.Poly, den: sp.Poly) -> sp.Poly:
    # any solution's zeros and poles sit at most ORBIT_SPAN steps above a
    # divisor point of r, with total multiplicity bounded by the orbit sum
    w = sp.Poly(1, X, domain="QQ")
    for j in range(1, ORBIT_SPAN + 1):
        if kind == "shift":
            w = w * _shift(den, -j) * _shift(num, -j)
        else:
            qinv = Fraction(q.denominator, q.numerator)
            step = Fraction(qinv.numerator**j, qinv.denominator**j)
            w = w * _scale(den, step) * _scale(num, step)
    if kind == "qshift":
        w = w * sp.Poly(X**ORIGIN_POWER_CAP, X, domain="QQ")
    return w


def oracle_mult(kind: str, q: Fraction | None, num_c: list[Fraction], den_c: list[Fraction]) -> bool:
    """Is there a nonzero rational f with f(sigma x) = r(x) f(x)?"""
    num, den = _poly(num_c), _poly(den_c)
    if num.is_zero:
        raise ValueError("r must be nonzero")
    w = _pole_ansatz_mult(kind, q, num, den)
    w_s = _apply(kind, q, w)
    cap = w.degree() + DEGREE_SLACK
    cols = []
    for i in range(cap + 1):
        xi = sp.Poly(X**i, X, domain="QQ")
        xi_s = _apply(kind, q, xi)
        cols.append(xi_s * w * den - num * w_s * xi)
    mat = _columns_to_matrix(cols)
    null = DomainMatrix.from_Matrix(mat).nullspace()
    return null.shape[0] > 0


def _pole_ansatz_add(kind: str, q, den: sp.Poly) -> sp.Poly:
    # poles of a solution sit at most ORBIT_SPAN steps below a pole of b
    w = sp.Poly(1, X, domain="QQ")
    for j in range(ORBIT_SPAN + 1):
        if kind == "shift":
            w = w * _shift(den, j)
        else:
            step = Fraction(q.numerator**j, q.denominator**j)
            w = w * _scale(den, step)
    if kind == "qshift":
        w = w * sp.Poly(X**ORIGIN_POWER_CAP, X, domain="QQ")
    return w


def oracle_add(kind: str, q: Fraction | None, num_c: list[Fraction], den_c: list[Fraction]) -> bool:
    """Is there a rational f with f(sigma x) - f(x) = b(x)?"""
    num, den = _poly(num_c), _poly(den_c)
    if num.is_zero:
        return True
    w = _pole_ansatz_add(kind, q, den)
    w_s = _apply(kind, q, w)
    cap = w.degree() + DEGREE_SLACK
    cols = []
    for i in range(cap + 1):
        xi = sp.Poly(X**i, X, domain="QQ")
        xi_s = _apply(kind, q, xi)
        cols.append(xi_s * w * den - xi * w_s * den)
    rhs_poly = num * w * w_s
    deg = max(
        max((c.degree() for c in cols if not c.is_zero), default=0),
        rhs_poly.degree() if not rhs_poly.is_zero else 0,
    )
    rows = deg + 1
    mat = sp.zeros(rows, len(cols))
    for j, c in enumerate(cols):
        for i, coeff in enumerate(reversed(c.all_coeffs())):
            mat[i, j] = coeff
    rhs = sp.zeros(rows, 1)
    for i, coeff in enumerate(reversed(rhs_poly.all_coeffs())):
        rhs[i, 0] = coeff
    aug = mat.row_join(rhs)
    _, piv_a = DomainMatrix.from_Matrix(mat).rref()
    _, piv_b = DomainMatrix.from_Matrix(aug).rref()
    return len(piv_a) == len(piv_b)
