"""Univariate gcd, factorization, and root finding.

Internally polynomials are dense coefficient lists (ascending degree).
Over F_p: squarefree split (p-th-power aware), distinct-degree, then
equal-degree splitting -- seeded-random for odd p, a deterministic
trace-map variant for p = 2.  Over Q: Yun's squarefree decomposition,
rational roots for degree <= 2, and otherwise factorization modulo a good
prime, Hensel lifting, and subset recombination.

Each factorization re-expands its output and compares with the input
before returning.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import DanielewskiError
from .fields import FieldKind, FieldSpec, Scalar
from .poly import Poly

# ---------------------------------------------------------------------------
# dense helpers over F_p (int coefficient lists, ascending; [] is zero)
# ---------------------------------------------------------------------------


def _trim(f: List[int]) -> List[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _deg(f: List[int]) -> int:
    return len(f) - 1


def fp_add(f, g, p):
    n = max(len(f), len(g))
    return _trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p
                  for i in range(n)])


def fp_sub(f, g, p):
    n = max(len(f), len(g))
    return _trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p
                  for i in range(n)])


def fp_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def fp_divmod(f, g, p):
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    f = list(f)
    dg = _deg(g)
    inv = pow(g[-1], -1, p)
    q = [0] * max(0, len(f) - dg)
    while _deg(_trim(f)) >= dg and f:
        df = _deg(f)
        c = (f[-1] * inv) % p
        q[df - dg] = c
        for i, b in enumerate(g):
            f[df - dg + i] = (f[df - dg + i] - c * b) % p
        _trim(f)
    return _trim(q), f


def fp_monic(f, p):
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [(c * inv) % p for c in f]


def fp_gcd(f, g, p):
    while g:
        f, g = g, fp_divmod(f, g, p)[1]
    return fp_monic(f, p)


def fp_pow_mod(f, e, g, p):
    result = [1]
    base = fp_divmod(f, g, p)[1]
    while e:
        if e & 1:
            result = fp_divmod(fp_mul(result, base, p), g, p)[1]
        base = fp_divmod(fp_mul(base, base, p), g, p)[1]
        e >>= 1
    return result


def fp_diff(f, p):
    return _trim([(i * c) % p for i, c in enumerate(f)][1:])


def _fp_pth_root(f, p):
    # f = g(X^p); over the prime field coefficients are Frobenius-fixed,
    # so f = (sum f[p*i] X^i)^p.
    return [f[i] for i in range(0, len(f), p)]


def fp_squarefree_list(f, p) -> List[Tuple[List[int], int]]:
    """Monic input; returns [(g_i, m_i)] with f = prod g_i^m_i, g_i monic
    squarefree and pairwise coprime."""
    factors: List[Tuple[List[int], int]] = []
    n = 1
    while _deg(f) > 0:
        d = fp_diff(f, p)
        if not d:
            f = _fp_pth_root(f, p)
            n *= p
            continue
        g = fp_gcd(f, d, p)
        w = fp_divmod(f, g, p)[0]
        i = 1
        while _deg(w) > 0:
            y = fp_gcd(w, g, p)
            z = fp_divmod(w, y, p)[0]
            if _deg(z) > 0:
                factors.append((z, i * n))
            w = y
            g = fp_divmod(g, y, p)[0]
            i += 1
        f = g  # remaining p-th-power part, handled by the outer loop
    return factors


def fp_distinct_degree(f, p) -> List[Tuple[List[int], int]]:
    """Monic squarefree input; returns [(product of irreducibles of degree k, k)]."""
    out = []
    h = [0, 1]  # X
    k = 0
    while _deg(f) >= 2 * (k + 1):
        k += 1
        h = fp_pow_mod(h, p, f, p)
        g = fp_gcd(fp_sub(h, [0, 1], p), f, p)
        if _deg(g) > 0:
            out.append((g, k))
            f = fp_divmod(f, g, p)[0]
            h = fp_divmod(h, f, p)[1] if f else h
    if _deg(f) > 0:
        out.append((f, _deg(f)))
    return out


def _fp_edf_odd(f, k, p, rng: random.Random) -> List[List[int]]:
    n = _deg(f)
    if n == k:
        return [f]
    half = (p ** k - 1) // 2
    while True:
        r = _trim([rng.randrange(p) for _ in range(n)])
        if _deg(r) < 1:
            continue
        g = fp_gcd(r, f, p)
        if 0 < _deg(g) < n:
            break
        s = fp_pow_mod(r, half, f, p)
        g = fp_gcd(fp_sub(s, [1], p), f, p)
        if 0 < _deg(g) < n:
            break
    rest = fp_divmod(f, g, p)[0]
    return _fp_edf_odd(g, k, p, rng) + _fp_edf_odd(rest, k, p, rng)


def _fp_edf_two(f, k) -> List[List[int]]:
    """Deterministic equal-degree splitting over F_2 via trace maps."""
    p = 2
    n = _deg(f)
    if n == k:
        return [f]
    j = 1
    while True:
        r = fp_divmod([0] * j + [1], f, p)[1]  # X^j mod f
        t = []
        cur = r
        for _ in range(k):
            t = fp_add(t, cur, p)
            cur = fp_divmod(fp_mul(cur, cur, p), f, p)[1]
        g = fp_gcd(t, f, p)
        if 0 < _deg(g) < n:
            rest = fp_divmod(f, g, p)[0]
            return _fp_edf_two(g, k) + _fp_edf_two(rest, k)
        j += 1


def fp_factor_squarefree(f, p, rng: random.Random) -> List[List[int]]:
    """Monic squarefree -> list of monic irreducibles."""
    out = []
    for g, k in fp_distinct_degree(f, p):
        if p == 2:
            out.extend(_fp_edf_two(g, k))
        else:
            out.extend(_fp_edf_odd(g, k, p, rng))
    return out


def fp_factor(f, p, rng: random.Random) -> Tuple[int, List[Tuple[List[int], int]]]:
    """Any nonzero dense poly -> (leading coefficient, [(monic irred, mult)])."""
    lc = f[-1] % p
    f = fp_monic(f, p)
    factors = []
    for g, m in fp_squarefree_list(f, p):
        for q in fp_factor_squarefree(g, p, rng):
            factors.append((q, m))
    return lc, factors


# ---------------------------------------------------------------------------
# dense helpers over Z (for the Hensel/Zassenhaus route)
# ---------------------------------------------------------------------------


def zz_mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return _trim(out)


def zz_add(f, g):
    n = max(len(f), len(g))
    return _trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
                  for i in range(n)])


def zz_sub(f, g):
    n = max(len(f), len(g))
    return _trim([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)
                  for i in range(n)])


def zz_trunc_sym(f, m):
    """Reduce coefficients into the symmetric range (-m/2, m/2]."""
    out = []
    for c in f:
        c %= m
        if c > m // 2:
            c -= m
        out.append(c)
    return _trim(out)


def zz_primitive(f) -> Tuple[int, List[int]]:
    if not f:
        return 0, []
    g = 0
    for c in f:
        g = math.gcd(g, c)
    if f[-1] < 0:
        g = -g
    return g, [c // g for c in f]


def zz_div_exact(f, g) -> Optional[List[int]]:
    """Exact division in Z[X]; None when g does not divide f."""
    if not g:
        raise ZeroDivisionError
    f = list(f)
    q = [0] * max(0, len(f) - len(g) + 1)
    dg = _deg(g)
    while f:
        df = _deg(f)
        if df < dg:
            return None
        if f[-1] % g[-1] != 0:
            return None
        c = f[-1] // g[-1]
        q[df - dg] = c
        for i, b in enumerate(g):
            f[df - dg + i] -= c * b
        _trim(f)
    return _trim(q)


def _hensel_step(m, f, g, h, s, t):
    """One quadratic lift: from f = g*h and s*g + t*h = 1 (mod m), with h
    monic, to the same congruences mod m**2."""
    M = m * m

    def tr(x):
        return _trim([c % M for c in x])

    e = tr(zz_sub(f, zz_mul(g, h)))
    q, r = _zz_divmod_mod(zz_mul(s, e), h, M)
    G = tr(zz_add(zz_add(g, zz_mul(t, e)), zz_mul(q, g)))
    H = tr(zz_add(h, r))
    b = tr(zz_sub(zz_add(zz_mul(s, G), zz_mul(t, H)), [1]))
    c, d = _zz_divmod_mod(zz_mul(s, b), H, M)
    S = tr(zz_sub(s, d))
    T = tr(zz_sub(zz_sub(t, zz_mul(t, b)), zz_mul(c, G)))
    return G, H, S, T


def _zz_divmod_mod(f, g, m):
    """Division by monic g with coefficients reduced mod m."""
    f = [c % m for c in f]
    _trim(f)
    dg = _deg(g)
    q = [0] * max(0, len(f) - dg)
    while f and _deg(f) >= dg:
        df = _deg(f)
        c = f[-1] % m
        q[df - dg] = c
        for i, b in enumerate(g):
            f[df - dg + i] = (f[df - dg + i] - c * b) % m
        _trim(f)
    return _trim(q), f


def _hensel_lift(p, f, factors, l):
    """Lift monic factors of f mod p to factors mod p**l.

    f in Z[X] with lc(f) not divisible by p; factors monic mod p with
    f = lc(f) * prod(factors) (mod p).  Returns the lifted monic factors
    except that the first group absorbs the leading coefficient.
    """
    lc = f[-1]
    if len(factors) == 1:
        # monic version of f mod p**l
        m = p ** l
        inv = pow(lc, -1, m)
        return [zz_trunc_sym([c * inv % m for c in f], m)]
    k = len(factors) // 2
    d = max(1, math.ceil(math.log2(l)))
    g = [lc % p]
    for fac in factors[:k]:
        g = [c % p for c in zz_mul(g, fac)]
    h = [1]
    for fac in factors[k:]:
        h = [c % p for c in zz_mul(h, fac)]
    s, t = _fp_xgcd(g, h, p)
    m = p
    for _ in range(d):
        g, h, s, t = _hensel_step(m, f, g, h, s, t)
        m = m * m
        if m >= p ** l:
            break
    return _hensel_lift(p, g, factors[:k], l) + _hensel_lift(p, h, factors[k:], l)


def _fp_xgcd(f, g, p):
    """s, t with s*f + t*g = 1 mod p (f, g coprime mod p)."""
    r0, r1 = [c % p for c in f], [c % p for c in g]
    s0, s1 = [1], []
    t0, t1 = [], [1]
    _trim(r0)
    _trim(r1)
    while r1:
        q, r = fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, fp_sub(s0, fp_mul(q, s1, p), p)
        t0, t1 = t1, fp_sub(t0, fp_mul(q, t1, p), p)
    if _deg(r0) != 0:
        raise DanielewskiError("inputs not coprime in Hensel bootstrap")
    inv = pow(r0[0], -1, p)
    return ([c * inv % p for c in s0], [c * inv % p for c in t0])


_ZASSENHAUS_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59,
                      61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127]


def zz_factor_squarefree(f: List[int], seed_token: str) -> List[List[int]]:
    """Primitive squarefree integer polynomial of degree >= 1 -> primitive
    irreducible factors with positive leading coefficients."""
    n = _deg(f)
    if n == 1:
        return [f]
    lc = f[-1]
    # good prime: lc survives and f stays squarefree mod p
    for p in _ZASSENHAUS_PRIMES:
        if lc % p == 0:
            continue
        fp = [c % p for c in f]
        if _deg(_trim(list(fp))) != n:
            continue
        if _deg(fp_gcd(fp, fp_diff(fp, p), p)) == 0:
            break
    else:
        raise DanielewskiError(f"no good prime found for {f}")
    rng = random.Random(f"zassenhaus|{seed_token}|{p}|{f}")
    _, modular = fp_factor([c % p for c in f], p, rng)
    modular_factors = [g for g, _ in modular]
    if len(modular_factors) == 1:
        return [f]
    # Mignotte-style bound on factor coefficients, then lift to p**l > 2*bound
    max_abs = max(abs(c) for c in f)
    bound = int(math.isqrt(n + 1) + 1) * (2 ** n) * max_abs * abs(lc)
    l = 1
    while p ** l <= 2 * bound:
        l += 1
    lifted = _hensel_lift(p, f, sorted(modular_factors), l)
    m = p ** l

    result = []
    rest = f
    available = list(range(len(lifted)))
    size = 1
    while 2 * size <= len(available):
        found = False
        for combo in itertools.combinations(available, size):
            cand = [rest[-1] % m]
            for i in combo:
                cand = zz_trunc_sym(zz_mul(cand, lifted[i]), m)
            cand = zz_primitive(cand)[1]
            quo = zz_div_exact(rest, cand)
            if quo is not None:
                result.append(cand)
                rest = quo
                available = [i for i in available if i not in combo]
                found = True
                break
        if not found:
            size += 1
    if _deg(rest) > 0:
        result.append(zz_primitive(rest)[1])
    return result


# ---------------------------------------------------------------------------
# public API on Poly
# ---------------------------------------------------------------------------


def _require_univariate(p: Poly) -> str:
    used = p.used_vars()
    if len(used) > 1:
        raise ValueError(f"expected a univariate polynomial, got variables {used}")
    if used:
        return used[0]
    if len(p.vars) != 1:
        raise ValueError("constant polynomial with ambiguous variable; pass a 1-variable Poly")
    return p.vars[0]


def poly_to_dense(p: Poly, var: str) -> List:
    i = p.vars.index(var)
    if p.is_zero:
        return []
    out = [p.field.zero()] * (p.degree_in(var) + 1)
    for exps, c in p.terms.items():
        out[exps[i]] = c
    return out


def dense_to_poly(dense, field: FieldSpec, vars: Tuple[str, ...], var: str) -> Poly:
    i = tuple(vars).index(var)
    terms = {}
    zero = (0,) * len(tuple(vars))
    for e, c in enumerate(dense):
        if c != 0:
            terms[zero[:i] + (e,) + zero[i + 1:]] = c
    return Poly(field, vars, terms)


def gcd_univariate(a: Poly, b: Poly) -> Poly:
    """Monic gcd of univariate polynomials in one shared variable.

    gcd(p, 0) is the monic scalar multiple of p and gcd(0, 0) = 0.
    """
    if a.field != b.field:
        raise DanielewskiError("gcd operands over different fields")
    va = a.used_vars()
    vb = b.used_vars()
    used = set(va) | set(vb)
    if len(used) > 1:
        raise ValueError(f"gcd needs univariate inputs in one variable, got {sorted(used)}")
    var = next(iter(used)) if used else (a.vars[0] if a.vars else "X")
    vars_out = a.vars if var in a.vars else b.vars
    field = a.field
    da = poly_to_dense(a.with_vars(vars_out), var)
    db = poly_to_dense(b.with_vars(vars_out), var)
    while db:
        q, r = _field_divmod(da, db, field)
        da, db = db, r
    if not da:
        return Poly.zero(field, vars_out)
    inv = field.inv(da[-1])
    return dense_to_poly([field.mul(c, inv) for c in da], field, vars_out, var)


def _field_divmod(f, g, field: FieldSpec):
    if not g:
        raise ZeroDivisionError
    f = list(f)
    dg = len(g) - 1
    inv = field.inv(g[-1])
    q = [field.zero()] * max(0, len(f) - dg)
    while f and len(f) - 1 >= dg:
        df = len(f) - 1
        c = field.mul(f[-1], inv)
        q[df - dg] = c
        for i, b in enumerate(g):
            f[df - dg + i] = field.sub(f[df - dg + i], field.mul(c, b))
        while f and f[-1] == 0:
            f.pop()
    return q, f


@dataclass(frozen=True)
class Factorization:
    """Complete factorization: lead * prod(poly ** mult)."""

    lead: Scalar
    factors: Tuple[Tuple[Poly, int], ...]

    def expand(self) -> Poly:
        field = self.lead.field
        vars_out = self.factors[0][0].vars if self.factors else ("X",)
        acc = Poly.const(field, vars_out, self.lead)
        for q, m in self.factors:
            acc = acc * q ** m
        return acc

    def multiplicity_multiset(self) -> Tuple[int, ...]:
        return tuple(sorted(m for _, m in self.factors))

    def degree_multiset(self) -> Tuple[int, ...]:
        return tuple(sorted(int(q.total_degree()) for q, _ in self.factors))

    def is_squarefree(self) -> bool:
        return all(m == 1 for _, m in self.factors)


def _yun_squarefree(f: List, field: FieldSpec) -> List[Tuple[List, int]]:
    """Yun's algorithm, characteristic 0; f monic."""
    def diff(g):
        return _trim([field.mul(c, field.coerce(i)) for i, c in enumerate(g)][1:])

    def gcd(a, b):
        while b:
            a, b = b, _field_divmod(a, b, field)[1]
        if not a:
            return a
        inv = field.inv(a[-1])
        return [field.mul(c, inv) for c in a]

    def quo(a, b):
        return _field_divmod(a, b, field)[0]

    out = []
    fp = diff(f)
    g = gcd(f, fp)
    if len(g) == 1:
        return [(f, 1)]
    w = quo(f, g)
    y = quo(fp, g)
    i = 1
    while True:
        z = _dense_sub(y, diff(w), field)
        if not z:
            out.append((w, i))
            break
        h = gcd(w, z)
        if len(h) > 1:
            out.append((h, i))
        w = quo(w, h)
        y = quo(z, h)
        i += 1
    return [(q, m) for q, m in out if len(q) > 1]


def _dense_sub(f, g, field):
    n = max(len(f), len(g))
    out = [field.sub(f[i] if i < len(f) else field.zero(),
                     g[i] if i < len(g) else field.zero()) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _rational_roots_dense(f: List[Fraction]) -> List[Fraction]:
    """All rational roots of a nonzero Fraction polynomial, without multiplicity."""
    shift = 0
    while f and f[0] == 0:
        f = f[1:]
        shift += 1
    roots = [Fraction(0)] if shift else []
    if len(f) <= 1:
        return roots
    den = math.lcm(*[c.denominator for c in f])
    zf = [int(c * den) for c in f]
    _, zf = zz_primitive(zf)
    a0, an = abs(zf[0]), abs(zf[-1])
    for q in _divisors(an):
        for pp in _divisors(a0):
            for cand in (Fraction(pp, q), Fraction(-pp, q)):
                if cand in roots:
                    continue
                acc = Fraction(0)
                for c in reversed(zf):
                    acc = acc * cand + c
                if acc == 0:
                    roots.append(cand)
    return roots


def _divisors(n: int) -> List[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def factor_univariate(p: Poly, seed: int = 0) -> Factorization:
    """Factor a nonzero univariate polynomial into monic irreducibles.

    Over Q: Yun split, rational roots up to degree 2, Zassenhaus beyond.
    Over F_p: squarefree split, distinct-degree, equal-degree.  The result
    re-expands to the input (checked before returning).
    """
    if p.is_zero:
        raise ZeroDivisionError("cannot factor the zero polynomial")
    var = _require_univariate(p)
    field = p.field
    dense = poly_to_dense(p, var)
    if len(dense) == 1:
        return Factorization(Scalar(field, dense[0]), ())
    factors: List[Tuple[List, int]] = []
    if field.kind is FieldKind.PRIME:
        mod = field.modulus
        rng = random.Random(f"factor|{seed}|{mod}|{dense}")
        lead_raw, fac = fp_factor(dense, mod, rng)
        factors = fac
    else:
        lead_raw = dense[-1]
        monic = [c / lead_raw for c in dense]
        for g, m in _yun_squarefree(monic, field):
            for irr in _q_factor_squarefree(g, seed):
                factors.append((irr, m))
    result = Factorization(
        Scalar(field, lead_raw),
        tuple(sorted(
            ((dense_to_poly(q, field, p.vars, var), m) for q, m in factors),
            key=lambda fm: (fm[1], fm[0].sort_key()),
        )),
    )
    if result.expand() != p.with_vars(p.vars):
        raise DanielewskiError(f"factorization self-check failed for {p}")
    return result


def _q_factor_squarefree(g: List[Fraction], seed: int) -> List[List[Fraction]]:
    """Monic squarefree Fraction polynomial -> monic irreducible factors."""
    n = _deg(g)
    if n == 1:
        return [g]
    if n == 2:
        roots = _rational_roots_dense(g)
        if not roots:
            return [g]
        r = roots[0]
        rest = _field_divmod(g, [-r, Fraction(1)], FieldSpec(FieldKind.RATIONALS))[0]
        return [[-r, Fraction(1)], rest]
    den = math.lcm(*[c.denominator for c in g])
    zf = [int(c * den) for c in g]
    _, zf = zz_primitive(zf)
    out = []
    for q in zz_factor_squarefree(zf, str(seed)):
        lc = q[-1]
        out.append([Fraction(c, lc) for c in q])
    return out


def roots_in_field(p: Poly) -> List[Scalar]:
    """All roots in the coefficient field, repeated by multiplicity.

    Exhaustive evaluation over F_p; the rational-root theorem on the
    primitive part over Q.
    """
    if p.is_zero:
        raise ZeroDivisionError("the zero polynomial has every root")
    var = _require_univariate(p)
    field = p.field
    dense = poly_to_dense(p, var)
    if field.kind is FieldKind.PRIME:
        mod = field.modulus
        candidates = [c for c in range(mod)
                      if sum(co * pow(c, i, mod) for i, co in enumerate(dense)) % mod == 0]
    else:
        candidates = _rational_roots_dense(dense)
    out = []
    for root in sorted(candidates, key=lambda r: Scalar(field, r).sort_key()):
        linear = [field.neg(field.coerce(root)), field.one()]
        rest = dense
        mult = 0
        while True:
            q, r = _field_divmod(rest, linear, field)
            if r:
                break
            mult += 1
            rest = q
        out.extend([Scalar(field, root)] * mult)
    return out


def squarefree_part(p: Poly, seed: int = 0) -> Poly:
    """Monic product of the distinct irreducible factors of p."""
    fac = factor_univariate(p, seed)
    var = _require_univariate(p)
    acc = Poly.one(p.field, p.vars)
    for q, _ in fac.factors:
        acc = acc * q
    return acc


def is_squarefree(p: Poly) -> bool:
    """Squarefree over the algebraic closure: gcd(p, p') = 1, where a
    vanishing derivative (char p) means a p-th power, hence not squarefree
    unless constant."""
    var = _require_univariate(p)
    if p.total_degree() <= 0:
        return True
    d = p.derivative(var)
    if d.is_zero:
        return False
    g = gcd_univariate(p, d)
    return g.total_degree() == 0
