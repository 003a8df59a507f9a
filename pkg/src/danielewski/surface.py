"""Coordinate rings A = K[X,Y,Z]/(f(X)Y - P(X,Z)) and their elements.

``SurfaceSpec`` validates the defining pair (f, P): f monic in X of degree
r, P monic in Z of degree d (the workbench works with r >= 2, d >= 2;
degree-1 f is representable internally because stable-isomorphism partner
surfaces can have one).

Elements are kept in the unique normal form

    g = g_0(x,z) + g_1(x,z) y + ... + g_m(x,z) y^m,   deg_Z(g_i) <= d-1,

obtained by rewriting Z^d -> f(X) Y - (P - Z^d) to exhaustion.  Structural
equality of normal forms decides equality in A.  Auxiliary polynomial
variables (U, V, v, W1) ride along inside the coefficients; the rewrite
never touches them, which realizes A[U], A[U,V], A[v] for free.

Everything is immutable; the per-spec reduction cache is a deterministic
memo and never affects results.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .errors import PreconditionError, SurfaceConstraintError
from .factor import Factorization, factor_univariate, gcd_univariate, is_squarefree, squarefree_part
from .fields import FieldSpec, Scalar
from .poly import NEG_INF, Poly, exact_div, grlex_key, substitute
from .resultant import resultant_in

AUX_ORDER = ("U", "V", "v", "W1")
_BASE_VARS = ("X", "Y", "Z")


def aux_sort_key(name: str):
    try:
        return (AUX_ORDER.index(name), name)
    except ValueError:
        return (len(AUX_ORDER), name)


def _sorted_aux(names: Iterable[str]) -> Tuple[str, ...]:
    names = tuple(names)
    for n in names:
        if n in _BASE_VARS:
            raise SurfaceConstraintError(f"{n!r} cannot be an auxiliary variable")
        if n not in AUX_ORDER:
            raise SurfaceConstraintError(
                f"auxiliary variable {n!r} not among {AUX_ORDER}")
    return tuple(sorted(set(names), key=aux_sort_key))


@dataclass(frozen=True)
class SurfaceSpec:
    """Validated data of A = K[X,Y,Z]/(f(X)Y - P(X,Z))."""

    field: FieldSpec
    f: Poly                      # over ("X",), monic
    P: Poly                      # over ("X", "Z"), monic in Z
    r: int                       # deg f
    d: int                       # deg_Z P
    n: int                       # multiplicity of the root 0 in f
    _zred: Dict[int, Poly] = dc_field(default_factory=dict, compare=False, repr=False)

    # -- generators and constants ----------------------------------------

    def zero(self) -> "SurfaceElement":
        return SurfaceElement(self, (), {})

    def one(self) -> "SurfaceElement":
        return self.from_scalar(1)

    def from_scalar(self, c) -> "SurfaceElement":
        p = Poly.const(self.field, ("X", "Z"), c)
        return SurfaceElement(self, (), {0: p} if not p.is_zero else {})

    def from_xz_poly(self, p: Poly) -> "SurfaceElement":
        """Embed a polynomial in X, Z (already of Z-degree <= d-1)."""
        return normal_form(p, self)

    def x(self) -> "SurfaceElement":
        return SurfaceElement(self, (), {0: Poly.variable(self.field, ("X", "Z"), "X")})

    def z(self) -> "SurfaceElement":
        return SurfaceElement(self, (), {0: Poly.variable(self.field, ("X", "Z"), "Z")})

    def y(self) -> "SurfaceElement":
        return SurfaceElement(self, (), {1: Poly.one(self.field, ("X", "Z"))})

    def generator(self, name: str) -> "SurfaceElement":
        return {"x": self.x, "y": self.y, "z": self.z}[name]()

    # -- the rewrite cache -------------------------------------------------

    def _z_reduction(self, e: int) -> Poly:
        """Normal form of Z**e as a polynomial over ("X", "Y", "Z")."""
        d = self.d
        if e < d:
            return Poly.monomial(self.field, _BASE_VARS, (0, 0, e))
        cached = self._zred.get(e)
        if cached is not None:
            return cached
        if e == d:
            f3 = self.f.with_vars(_BASE_VARS)
            P3 = self.P.with_vars(_BASE_VARS)
            zd = Poly.monomial(self.field, _BASE_VARS, (0, 0, d))
            y = Poly.variable(self.field, _BASE_VARS, "Y")
            red = f3 * y - (P3 - zd)
        else:
            prev = self._z_reduction(e - 1).mul_var_power("Z", 1)
            red = _reduce_top_once(prev, self)
        self._zred[e] = red
        return red


def _reduce_top_once(p: Poly, spec: SurfaceSpec) -> Poly:
    """Rewrite every Z**d occurrence in a polynomial whose Z-degree is <= d.

    Helper for building the reduction cache; input Z-degree may be exactly d.
    """
    zi = p.vars.index("Z")
    d = spec.d
    plain: Dict[Tuple[int, ...], object] = {}
    carry = Poly.zero(p.field, p.vars)
    base = None
    for exps, c in p.terms.items():
        if exps[zi] < d:
            plain[exps] = c
        else:
            if base is None:
                base = spec._z_reduction(d).with_vars(p.vars)
            mono = Poly._raw(p.field, p.vars, {exps[:zi] + (exps[zi] - d,) + exps[zi + 1:]: c})
            carry = carry + mono * base
    return Poly._raw(p.field, p.vars, plain) + carry


def make_surface(field: FieldSpec, f: Poly, P: Poly, _min_r: int = 2) -> SurfaceSpec:
    """Validate and build a SurfaceSpec; rejects non-monic or low-degree data."""
    used_f = f.used_vars()
    if any(v != "X" for v in used_f):
        raise SurfaceConstraintError(f"f must be a polynomial in X alone, uses {used_f}")
    f = f.with_vars(("X",))
    if f.field != field or P.field != field:
        raise SurfaceConstraintError("f and P must live over the declared field")
    used_P = P.used_vars()
    if any(v not in ("X", "Z") for v in used_P):
        raise SurfaceConstraintError(f"P must be a polynomial in X, Z, uses {used_P}")
    P = P.with_vars(("X", "Z"))
    r = f.degree_in("X")
    if r is NEG_INF or r < _min_r:
        raise SurfaceConstraintError(f"deg f = {r}, need deg f >= {_min_r}")
    if f.coefficient((r,)) != 1:
        raise SurfaceConstraintError("f is not monic in X")
    d = P.degree_in("Z")
    if d is NEG_INF or d < 2:
        raise SurfaceConstraintError(f"deg_Z P = {d}, need deg_Z P >= 2")
    lead = P.coeff_in("Z", d)
    if not (lead.is_constant and lead.constant_value() == 1):
        raise SurfaceConstraintError("P is not monic in Z")
    n = min(exps[0] for exps in f.terms)
    return SurfaceSpec(field, f, P, r, d, n)


def shift_surface(spec: SurfaceSpec, c) -> SurfaceSpec:
    """The explicit coordinate change x -> x + c (never applied silently)."""
    cc = Poly.const(spec.field, ("X",), c)
    x = Poly.variable(spec.field, ("X",), "X")
    f2 = substitute(spec.f, {"X": x + cc})
    P2 = substitute(spec.P, {"X": (x + cc).with_vars(("X", "Z"))}, vars_out=("X", "Z"))
    return make_surface(spec.field, f2, P2, _min_r=min(2, spec.r))


def graded_surface(spec: SurfaceSpec) -> SurfaceSpec:
    """The associated graded surface: same f, P replaced by Z**d."""
    zd = Poly.monomial(spec.field, ("X", "Z"), (0, spec.d))
    return make_surface(spec.field, spec.f, zd, _min_r=min(2, spec.r))


class SurfaceElement:
    """An element of A (or A[U], A[U,V], A[v]) in normal form.

    ``coeffs`` maps the y-power i to a nonzero polynomial g_i over
    ("X", "Z") + aux with deg_Z(g_i) <= d-1.  ``aux`` lists exactly the
    auxiliary variables that occur, in canonical order, so structural
    equality is sound.
    """

    __slots__ = ("spec", "aux", "coeffs")

    def __init__(self, spec: SurfaceSpec, aux: Iterable[str], coeffs: Mapping[int, Poly]):
        aux = _sorted_aux(aux)
        # canonical pruning: keep only aux variables that actually occur
        used = set()
        clean: Dict[int, Poly] = {}
        for i, g in coeffs.items():
            if g.is_zero:
                continue
            used.update(v for v in g.used_vars() if v not in ("X", "Z"))
            clean[i] = g
        bad = used.difference(aux)
        if bad:
            raise SurfaceConstraintError(f"coefficients use undeclared variables {sorted(bad)}")
        aux = tuple(a for a in aux if a in used)
        vars_c = ("X", "Z") + aux
        final: Dict[int, Poly] = {}
        for i, g in clean.items():
            g = g.with_vars(vars_c)
            dz = g.degree_in("Z")
            if dz is not NEG_INF and dz > spec.d - 1:
                raise SurfaceConstraintError(
                    f"coefficient of y^{i} has Z-degree {dz} > d-1 = {spec.d - 1}")
            final[i] = g
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "aux", aux)
        object.__setattr__(self, "coeffs", final)

    def __setattr__(self, name, value):
        raise AttributeError("SurfaceElement is immutable")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff_vars(self) -> Tuple[str, ...]:
        return ("X", "Z") + self.aux

    def raw_vars(self) -> Tuple[str, ...]:
        return _BASE_VARS + self.aux

    def raw_lift(self) -> Poly:
        """The distinguished representative sum(g_i * Y**i) in K[X,Y,Z,aux]."""
        vars_full = self.raw_vars()
        acc = Poly.zero(self.spec.field, vars_full)
        for i, g in self.coeffs.items():
            acc = acc + g.with_vars(vars_full).mul_var_power("Y", i)
        return acc

    def _join(self, other: "SurfaceElement"):
        if self.spec != other.spec:
            raise SurfaceConstraintError("elements live on different surfaces")
        aux = _sorted_aux(self.aux + other.aux)
        return aux, ("X", "Z") + aux

    def __add__(self, other):
        if isinstance(other, (int, Scalar)):
            other = self.spec.from_scalar(other)
        if not isinstance(other, SurfaceElement):
            return NotImplemented
        aux, vars_c = self._join(other)
        out: Dict[int, Poly] = {}
        for i in set(self.coeffs) | set(other.coeffs):
            a = self.coeffs.get(i)
            b = other.coeffs.get(i)
            if a is None:
                s = b.with_vars(vars_c)
            elif b is None:
                s = a.with_vars(vars_c)
            else:
                s = a.with_vars(vars_c) + b.with_vars(vars_c)
            if not s.is_zero:
                out[i] = s
        return SurfaceElement(self.spec, aux, out)

    __radd__ = __add__

    def __neg__(self):
        return SurfaceElement(self.spec, self.aux, {i: -g for i, g in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Scalar)):
            other = self.spec.from_scalar(other)
        if not isinstance(other, SurfaceElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scaled(other)
        if not isinstance(other, SurfaceElement):
            return NotImplemented
        aux, _ = self._join(other)
        vars_full = _BASE_VARS + aux
        raw = self.raw_lift().with_vars(vars_full) * other.raw_lift().with_vars(vars_full)
        return normal_form(raw, self.spec)

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scaled(other)
        return NotImplemented

    def scaled(self, c) -> "SurfaceElement":
        raw = self.spec.field.coerce(c)
        if raw == 0:
            return self.spec.zero()
        return SurfaceElement(self.spec, self.aux,
                              {i: g.scaled(raw) for i, g in self.coeffs.items()})

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.spec.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, SurfaceElement):
            return NotImplemented
        return (self.spec == other.spec and self.aux == other.aux
                and self.coeffs == other.coeffs)

    __hash__ = None  # type: ignore[assignment]

    def __str__(self):
        from .parsing import poly_str
        if self.is_zero:
            return "0"
        parts = []
        for i in sorted(self.coeffs):
            g = poly_str(self.coeffs[i])
            if i == 0:
                parts.append(g)
            else:
                ypow = "y" if i == 1 else f"y^{i}"
                parts.append(f"({g})*{ypow}")
        return " + ".join(parts)

    def __repr__(self):
        return f"SurfaceElement({str(self)!r})"

    def substitute_aux(self, bindings: Mapping[str, Poly]) -> "SurfaceElement":
        """Substitute polynomials (in auxiliary variables only) for auxiliary
        variables; the normal form is preserved because Z is untouched."""
        for v, q in bindings.items():
            if v not in self.aux:
                raise SurfaceConstraintError(f"{v!r} is not an auxiliary variable here")
            if any(w in _BASE_VARS for w in q.used_vars()):
                raise SurfaceConstraintError("aux substitution may not introduce X, Y, Z")
        extra = [w for q in bindings.values() for w in q.used_vars()]
        aux_out = _sorted_aux([a for a in self.aux if a not in bindings] + extra)
        vars_out = ("X", "Z") + aux_out
        out: Dict[int, Poly] = {}
        for i, g in self.coeffs.items():
            s = substitute(g, {v: q.with_vars(vars_out) for v, q in bindings.items()},
                           vars_out=vars_out)
            if not s.is_zero:
                out[i] = s
        return SurfaceElement(self.spec, aux_out, out)


def normal_form(raw: Poly, spec: SurfaceSpec) -> SurfaceElement:
    """The unique normal form of an arbitrary representative.

    ``raw`` may use X, Y, Z and auxiliary variables; every Z-power at or
    above d is rewritten through the defining relation (via a cached table
    of reduced Z-powers, one pass)."""
    aux = _sorted_aux(v for v in raw.used_vars() if v not in _BASE_VARS)
    vars_full = _BASE_VARS + aux
    raw = raw.with_vars(vars_full)
    zi = vars_full.index("Z")
    plain: Dict[Tuple[int, ...], object] = {}
    by_power: Dict[int, Dict[Tuple[int, ...], object]] = {}
    for exps, c in raw.terms.items():
        e = exps[zi]
        if e < spec.d:
            plain[exps] = c
        else:
            by_power.setdefault(e, {})[exps[:zi] + (0,) + exps[zi + 1:]] = c
    acc = Poly._raw(raw.field, vars_full, plain)
    for e, monos in by_power.items():
        red = spec._z_reduction(e).with_vars(vars_full)
        acc = acc + Poly._raw(raw.field, vars_full, monos) * red
    return _split_by_y(acc, spec, aux)


def _split_by_y(p: Poly, spec: SurfaceSpec, aux: Tuple[str, ...]) -> SurfaceElement:
    yi = p.vars.index("Y")
    vars_c = ("X", "Z") + aux
    buckets: Dict[int, Dict[Tuple[int, ...], object]] = {}
    xi = p.vars.index("X")
    zi = p.vars.index("Z")
    aux_idx = [p.vars.index(a) for a in aux]
    for exps, c in p.terms.items():
        key = (exps[xi], exps[zi]) + tuple(exps[i] for i in aux_idx)
        buckets.setdefault(exps[yi], {})[key] = c
    coeffs = {i: Poly._raw(p.field, vars_c, t) for i, t in buckets.items()}
    return SurfaceElement(spec, aux, coeffs)


def normal_form_stepwise(raw: Poly, spec: SurfaceSpec, order: str = "high") -> SurfaceElement:
    """One-rewrite-at-a-time normalization; ``order`` picks which reducible
    term to rewrite next ("high": largest Z-degree first, "low": smallest).
    Exists so tests can confirm the normal form is reduction-order
    independent."""
    aux = _sorted_aux(v for v in raw.used_vars() if v not in _BASE_VARS)
    vars_full = _BASE_VARS + aux
    cur = raw.with_vars(vars_full)
    zi = vars_full.index("Z")
    f3 = spec.f.with_vars(vars_full)
    P3 = spec.P.with_vars(vars_full)
    zd = Poly.monomial(spec.field, vars_full, tuple(spec.d if i == zi else 0
                                                    for i in range(len(vars_full))))
    y = Poly.variable(spec.field, vars_full, "Y")
    relation = f3 * y - (P3 - zd)  # = Z^d in A
    choose = max if order == "high" else min
    while True:
        reducible = [e for e in cur.terms if e[zi] >= spec.d]
        if not reducible:
            break
        target = choose(reducible, key=lambda e: (e[zi], grlex_key(e)))
        c = cur.terms[target]
        stripped = target[:zi] + (target[zi] - spec.d,) + target[zi + 1:]
        cur = (cur - Poly._raw(cur.field, vars_full, {target: c})
               + Poly._raw(cur.field, vars_full, {stripped: c}) * relation)
    return _split_by_y(cur, spec, aux)


# -- filtration and the associated graded surface ---------------------------


def filtration_deg(e: SurfaceElement):
    """Degree for the filtration weighting x: 0, z: 1, y: d; -inf at 0."""
    if e.aux:
        raise PreconditionError("filtration degree is defined for elements of A only")
    if e.is_zero:
        return NEG_INF
    d = e.spec.d
    zi = 1  # coefficient polynomials live over ("X", "Z")
    return max(d * i + exps[zi] for i, g in e.coeffs.items() for exps in g.terms)


def leading_form(e: SurfaceElement) -> SurfaceElement:
    """Sum of the monomials of maximal filtration degree, read in the
    associated graded surface (x -> u, y -> v, z -> w up to renaming)."""
    if e.is_zero:
        raise PreconditionError("the zero element has no leading form")
    if e.aux:
        raise PreconditionError("leading form is defined for elements of A only")
    target = filtration_deg(e)
    d = e.spec.d
    out: Dict[int, Poly] = {}
    for i, g in e.coeffs.items():
        kept = {exps: c for exps, c in g.terms.items() if d * i + exps[1] == target}
        if kept:
            out[i] = Poly._raw(g.field, g.vars, kept)
    return SurfaceElement(graded_surface(e.spec), (), out)


# -- division by x ----------------------------------------------------------


def divide_by_x(e: SurfaceElement) -> Optional[SurfaceElement]:
    """Exact quotient e / x, or None when x does not divide e.

    Requires f(0) = 0; then divisibility in A (or A[v]) is equivalent to
    every normal-form coefficient being divisible by X as a plain
    polynomial, because P(0, Z) is monic of degree d while deg_Z g_i < d.
    """
    if e.spec.n < 1:
        raise PreconditionError("divide_by_x requires f(0) = 0")
    x = Poly.variable(e.spec.field, e.coeff_vars(), "X")
    out: Dict[int, Poly] = {}
    for i, g in e.coeffs.items():
        q = exact_div(g, x.with_vars(g.vars))
        if q is None:
            return None
        out[i] = q
    return SurfaceElement(e.spec, e.aux, out)


# -- fibers and smoothness ----------------------------------------------------


class FiberKind(enum.Enum):
    GENERIC_LINE = "GenericLine"
    EXCEPTIONAL_FIBER = "ExceptionalFiber"
    NON_REDUCED_FIBER = "NonReducedFiber"


@dataclass(frozen=True)
class FiberReport:
    """Fiber of the projection to the x-line over a K-point.

    ``closure_lines`` counts lines over the algebraic closure; nothing here
    claims the lines are K-rational."""

    point: Scalar
    f_value: Scalar
    kind: FiberKind
    factors: Factorization
    closure_lines: Optional[int]


def fiber(spec: SurfaceSpec, point) -> FiberReport:
    lam = Scalar(spec.field, point)
    f_value = spec.f.evaluate({"X": lam})
    q = substitute(spec.P, {"X": Poly.const(spec.field, ("X", "Z"), lam)},
                   vars_out=("X", "Z"))
    factors = factor_univariate(q)
    if f_value != 0:
        return FiberReport(lam, f_value, FiberKind.GENERIC_LINE, factors, None)
    if is_squarefree(q):
        return FiberReport(lam, f_value, FiberKind.EXCEPTIONAL_FIBER, factors, spec.d)
    return FiberReport(lam, f_value, FiberKind.NON_REDUCED_FIBER, factors, None)


@dataclass(frozen=True)
class SmoothnessReport:
    smooth: bool
    witness: Optional[Poly]      # squarefree locus of bad roots of f, when not smooth
    resultant: Poly              # Res_Z(P, P_Z) as a polynomial in X


def smoothness_check(spec: SurfaceSpec) -> SmoothnessReport:
    """True iff P(lam, Z) has distinct roots (over the closure) for every
    root lam of f: decided by gcd(f, Res_Z(P, P_Z)) = 1 with P_Z != 0."""
    Pz = spec.P.derivative("Z")
    if Pz.is_zero:
        res = Poly.zero(spec.field, ("X",))
    else:
        res = resultant_in(spec.P, Pz, "Z").with_vars(("X",))
    g = gcd_univariate(spec.f, res.with_vars(("X",)))
    if g.total_degree() == 0:
        return SmoothnessReport(True, None, res)
    return SmoothnessReport(False, squarefree_part(g), res)
