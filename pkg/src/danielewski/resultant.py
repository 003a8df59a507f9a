"""Sylvester resultants and Bezout cofactors.

The resultant eliminating one variable is the determinant of the Sylvester
matrix, computed by fraction-free (Bareiss) elimination over the polynomial
ring in the remaining variables.  Degenerate degrees follow the actual
degrees of the inputs: a zero companion gives resultant 0, a companion
constant in the eliminated variable gives c**deg(other).

``bezout_cofactors`` solves a*P_Z + b*P = 1 by Cramer's rule on the
Sylvester system: when the resultant is a nonzero constant the adjugate
row has polynomial entries, so the cofactors stay in K[X,Z].
"""

from __future__ import annotations

from typing import List, Tuple

from .errors import ComaximalityError
from .poly import NEG_INF, Poly, exact_div


def sylvester_matrix(p: Poly, q: Poly, var: str) -> List[List[Poly]]:
    """The (m+n) x (m+n) Sylvester matrix of p (degree m) and q (degree n)
    in ``var``; entries are coefficient polynomials over the same variable
    tuple with ``var`` zeroed out.  First n rows shift p, last m shift q."""
    m = p.degree_in(var)
    n = q.degree_in(var)
    if m < 1 or n < 1:
        raise ValueError("sylvester_matrix needs positive degrees in the eliminated variable")
    pc = p.coefficients_in(var)
    qc = q.coefficients_in(var)
    zero = Poly.zero(p.field, p.vars)
    size = m + n
    rows = []
    for i in range(n):  # row i: coefficients of var**(n-1-i) * p
        row = [zero] * size
        for k, c in pc.items():
            row[size - 1 - (k + n - 1 - i)] = c
        rows.append(row)
    for j in range(m):
        row = [zero] * size
        for k, c in qc.items():
            row[size - 1 - (k + m - 1 - j)] = c
        rows.append(row)
    return rows


def det_bareiss(matrix: List[List[Poly]], field, vars) -> Poly:
    """Exact determinant of a square matrix of polynomials."""
    n = len(matrix)
    if n == 0:
        return Poly.one(field, vars)
    m = [row[:] for row in matrix]
    sign = 1
    prev = Poly.one(field, vars)
    for k in range(n - 1):
        if m[k][k].is_zero:
            for i in range(k + 1, n):
                if not m[i][k].is_zero:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Poly.zero(field, vars)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                quo = exact_div(num, prev)
                if quo is None:
                    raise AssertionError("Bareiss division failed; matrix entries corrupted")
                m[i][j] = quo
            m[i][k] = Poly.zero(field, vars)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


def resultant_in(p: Poly, q: Poly, var: str) -> Poly:
    """Resultant of p and q eliminating ``var``; the result lives over the
    remaining variables (same tuple, ``var`` unused)."""
    p._check_compat(q)
    m = p.degree_in(var)
    n = q.degree_in(var)
    dm = 0 if m is NEG_INF else m
    dn = 0 if n is NEG_INF else n
    if dm < 1 and dn < 1:
        raise ValueError(f"both inputs are constant in {var!r}")
    if p.is_zero or q.is_zero:
        return Poly.zero(p.field, p.vars)
    if dn == 0:
        return q ** dm
    if dm == 0:
        return p ** dn
    matrix = sylvester_matrix(p, q, var)
    return det_bareiss(matrix, p.field, p.vars)


def bezout_cofactors(P: Poly, Pz: Poly, var: str = "Z") -> Tuple[Poly, Poly]:
    """Polynomials (a, b) with a*Pz + b*P = 1, for P monic of degree >= 2 in
    ``var`` with Res_var(P, Pz) a nonzero constant.  The identity is expanded
    and checked before returning; ComaximalityError otherwise."""
    P._check_compat(Pz)
    m = P.degree_in(var)
    if m is NEG_INF or m < 2:
        raise ValueError(f"P must have degree >= 2 in {var!r}")
    lead = P.coeff_in(var, m)
    if not (lead.is_constant and lead.constant_value() == 1):
        raise ValueError(f"P must be monic in {var!r}")
    field = P.field
    vars = P.vars
    one = Poly.one(field, vars)
    if Pz.is_zero:
        raise ComaximalityError("P_Z = 0, so (P, P_Z) is a proper ideal")
    n = Pz.degree_in(var)
    if n == 0:
        c = Pz  # constant in var; must be a unit of K for comaximality
        if not c.is_constant:
            raise ComaximalityError(
                f"resultant {c}**{m} is non-constant, (P, P_Z) is a proper ideal")
        a = Poly.const(field, vars, c.constant_value().inverse())
        b = Poly.zero(field, vars)
        return a, b
    res = resultant_in(P, Pz, var)
    if res.is_zero or not res.is_constant:
        raise ComaximalityError(f"Res_{var}(P, P_Z) = {res} is not a nonzero constant")
    inv_res = res.constant_value().inverse()
    matrix = sylvester_matrix(P, Pz, var)
    size = m + n
    # Cramer: w_j = det(S with row j replaced by e_const) / det(S); expanding
    # along the replaced row leaves a signed minor against the last column.
    w = []
    for j in range(size):
        minor = [row[:size - 1] for i, row in enumerate(matrix) if i != j]
        d = det_bareiss(minor, field, vars)
        if (j + size - 1) % 2 == 1:
            d = -d
        w.append(d * inv_res)
    b = Poly.zero(field, vars)
    for i in range(n):  # rows 0..n-1 are the u-part multiplying P
        b = b + w[i].mul_var_power(var, n - 1 - i)
    a = Poly.zero(field, vars)
    for j in range(m):
        a = a + w[n + j].mul_var_power(var, m - 1 - j)
    if a * Pz + b * P != one:
        raise AssertionError("Bezout self-check failed; resultant machinery broken")
    return a, b
