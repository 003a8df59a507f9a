"""Exponential maps A -> A[U] as verifiable objects.

A map is stored through its generator images (elements of A[U]); applying
it is substitution plus renormalization, and well-definedness is exactly
the check that the defining relation maps to zero.  Verification runs
three exact symbolic checks:

    (W)  f(phi x) * phi y - P(phi x, phi z) = 0 in A[U]
    (A1) setting U = 0 returns x, z, y
    (A2) phi_V(phi_U(g)) = phi_{U+V}(g) in A[U,V] for each generator g

The canonical map fixes x, sends z to z + f(x) U, and sends y to the exact
quotient that the relation forces.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Dict, Mapping

from .errors import PreconditionError, SurfaceConstraintError, VerificationInternalError
from .fields import Scalar
from .poly import NEG_INF, Poly, exact_div, substitute
from .reports import Check, VerificationReport
from .surface import SurfaceElement, SurfaceSpec, normal_form


class VerifyStatus(enum.Enum):
    UNVERIFIED = "Unverified"
    VERIFIED = "Verified"
    REFUTED = "Refuted"


@dataclass(frozen=True)
class ExpMap:
    spec: SurfaceSpec
    image_x: SurfaceElement
    image_z: SurfaceElement
    image_y: SurfaceElement
    status: VerifyStatus = VerifyStatus.UNVERIFIED
    reason: str = ""

    def __post_init__(self):
        for img in (self.image_x, self.image_z, self.image_y):
            if img.spec != self.spec:
                raise SurfaceConstraintError("image lives on the wrong surface")
            if any(a != "U" for a in img.aux):
                raise SurfaceConstraintError("generator images may only use U")

    def images(self) -> Dict[str, SurfaceElement]:
        return {"x": self.image_x, "z": self.image_z, "y": self.image_y}

    @property
    def is_nontrivial(self) -> bool:
        """Some generator image actually involves U (A != A^phi)."""
        return any("U" in img.aux for img in self.images().values())

    def verified(self) -> "ExpMap":
        """Re-verify and return a copy carrying the outcome.

        A verified nontrivial map must fix x (its invariant ring is K[x]);
        that consequence is asserted after verification as a bug detector.
        """
        report = verify_expmap(self)
        if not report.ok:
            why = "; ".join(c.line() for c in report.failures())
            return replace(self, status=VerifyStatus.REFUTED, reason=why)
        marked = replace(self, status=VerifyStatus.VERIFIED, reason="")
        if marked.is_nontrivial and not is_invariant(marked, marked.spec.x()):
            raise VerificationInternalError(
                "verified nontrivial exponential map does not fix x")
        return marked

    def __str__(self):
        return (f"x -> {self.image_x}, z -> {self.image_z}, y -> {self.image_y}"
                f" [{self.status.value}]")


def make_expmap(spec: SurfaceSpec, image_x: SurfaceElement, image_z: SurfaceElement,
                image_y: SurfaceElement) -> ExpMap:
    return ExpMap(spec, image_x, image_z, image_y)


def eval_poly_on_elements(p: Poly, assignment: Mapping[str, SurfaceElement],
                          spec: SurfaceSpec) -> SurfaceElement:
    """Evaluate a polynomial at ring elements (its used variables must all
    be assigned)."""
    for v in p.used_vars():
        if v not in assignment:
            raise PreconditionError(f"no element assigned to {v!r}")
    pow_cache: Dict[str, Dict[int, SurfaceElement]] = {
        v: {0: spec.one(), 1: el} for v, el in assignment.items()
    }

    def power(v: str, e: int) -> SurfaceElement:
        cache = pow_cache[v]
        if e not in cache:
            best = max(k for k in cache if k <= e)
            acc = cache[best]
            for k in range(best + 1, e + 1):
                acc = acc * cache[1]
                cache[k] = acc
        return cache[e]

    acc = spec.zero()
    for exps, c in p.terms.items():
        term = spec.from_scalar(Scalar(p.field, c))
        for var, e in zip(p.vars, exps):
            if e and var in assignment:
                term = term * power(var, e)
        acc = acc + term
    return acc


def canonical_expmap(spec: SurfaceSpec) -> ExpMap:
    """The exponential map x -> x, z -> z + f(x) U, y -> y + (P(x, z + f U)
    - P(x, z)) / f; verified before returning."""
    field = spec.field
    vars3 = ("X", "Z", "U")
    f3 = spec.f.with_vars(vars3)
    P3 = spec.P.with_vars(vars3)
    z3 = Poly.variable(field, vars3, "Z")
    u3 = Poly.variable(field, vars3, "U")
    shifted = substitute(P3, {"Z": z3 + f3 * u3}, vars_out=vars3)
    quotient = exact_div(shifted - P3, f3)
    if quotient is None:
        raise VerificationInternalError("P(x, z + fU) - P(x, z) not divisible by f")
    image_x = spec.x()
    image_z = normal_form(
        Poly.variable(field, ("X", "Y", "Z", "U"), "Z")
        + f3.with_vars(("X", "Y", "Z", "U")) * Poly.variable(field, ("X", "Y", "Z", "U"), "U"),
        spec)
    image_y = normal_form(
        Poly.variable(field, ("X", "Y", "Z", "U"), "Y")
        + quotient.with_vars(("X", "Y", "Z", "U")),
        spec)
    m = ExpMap(spec, image_x, image_z, image_y).verified()
    if m.status is not VerifyStatus.VERIFIED:
        raise VerificationInternalError(f"canonical map failed verification: {m.reason}")
    return m


def verify_expmap(m: ExpMap) -> VerificationReport:
    """Run the three defining checks, symbolically and exactly."""
    spec = m.spec
    checks = []

    # (W) the defining relation maps to zero
    fx = eval_poly_on_elements(spec.f, {"X": m.image_x}, spec)
    pxz = eval_poly_on_elements(spec.P, {"X": m.image_x, "Z": m.image_z}, spec)
    defect = fx * m.image_y - pxz
    checks.append(Check(
        "well-defined: f(phi x) phi y - P(phi x, phi z) = 0", "Def 2.1",
        defect.is_zero, "" if defect.is_zero else f"nonzero witness: {defect}"))

    # (A1) evaluation at U = 0 is the identity
    zero_u = Poly.zero(spec.field, ("U",))
    for name, img in m.images().items():
        at0 = img.substitute_aux({"U": zero_u}) if "U" in img.aux else img
        want = spec.generator(name)
        checks.append(Check(
            f"evaluation at U=0 returns {name}", "Def 2.1(i)",
            at0 == want, "" if at0 == want else f"got {at0}"))

    # (A2) the cocycle law in A[U,V]
    vpoly = Poly.variable(spec.field, ("V",), "V")
    raw_v = {
        "X": _raw_with_u_renamed(m.image_x, vpoly),
        "Z": _raw_with_u_renamed(m.image_z, vpoly),
        "Y": _raw_with_u_renamed(m.image_y, vpoly),
    }
    u_plus_v = Poly.variable(spec.field, ("U", "V"), "U") + Poly.variable(
        spec.field, ("U", "V"), "V")
    for name, img in m.images().items():
        raw = img.raw_lift()
        vars_out = ("X", "Y", "Z", "U", "V")
        lhs = normal_form(substitute(raw, {k: v for k, v in raw_v.items() if k in raw.vars},
                                     vars_out=vars_out), spec)
        if "U" in img.aux:
            rhs_raw = substitute(raw, {"U": u_plus_v}, vars_out=vars_out)
        else:
            rhs_raw = raw.with_vars(vars_out)
        rhs = normal_form(rhs_raw, spec)
        ok = lhs == rhs
        checks.append(Check(
            f"cocycle law on {name}: phi_V(phi_U({name})) = phi_(U+V)({name})",
            "Def 2.1(ii)", ok, "" if ok else f"difference {lhs - rhs}"))

    return VerificationReport("exponential map", tuple(checks))


def _raw_with_u_renamed(img: SurfaceElement, vpoly: Poly) -> Poly:
    if "U" in img.aux:
        return img.substitute_aux({"U": vpoly}).raw_lift()
    return img.raw_lift()


def apply_map(m: ExpMap, e: SurfaceElement, extended: bool = False) -> SurfaceElement:
    """phi(e) in A[U]; with ``extended`` the map also sends the adjoined
    variable v to v - x U (the A[v] extension used by the stable-isomorphism
    construction)."""
    if m.status is not VerifyStatus.VERIFIED:
        raise PreconditionError("refusing to apply an unverified exponential map")
    allowed = ("v",) if extended else ()
    if any(a not in allowed for a in e.aux):
        raise PreconditionError(
            f"element has auxiliary variables {e.aux}; "
            + ("only v is allowed in extended mode" if extended else "none allowed"))
    raw = e.raw_lift()
    vars_out = ("X", "Y", "Z", "U") + (("v",) if extended else ())
    bindings: Dict[str, Poly] = {}
    for gen, var in (("x", "X"), ("y", "Y"), ("z", "Z")):
        if var in raw.used_vars():
            bindings[var] = m.images()[gen].raw_lift().with_vars(vars_out)
    if extended and "v" in raw.used_vars():
        bindings["v"] = (Poly.variable(m.spec.field, vars_out, "v")
                         - Poly.variable(m.spec.field, vars_out, "X")
                         * Poly.variable(m.spec.field, vars_out, "U"))
    return normal_form(substitute(raw, bindings, vars_out=vars_out), m.spec)


def phi_degree(m: ExpMap, e: SurfaceElement, extended: bool = False):
    """U-degree of phi(e); -inf for e = 0."""
    a = apply_map(m, e, extended=extended)
    if a.is_zero:
        return NEG_INF
    if "U" not in a.aux:
        return 0
    return max(int(g.degree_in("U")) for g in a.coeffs.values()
               if g.degree_in("U") is not NEG_INF)


def derivation_coeff(m: ExpMap, e: SurfaceElement, i: int) -> SurfaceElement:
    """The coefficient of U**i in phi(e): the i-th member of the associated
    higher derivation, an element of A (zero beyond the U-degree)."""
    a = apply_map(m, e)
    if "U" not in a.aux:
        return a if i == 0 else m.spec.zero()
    out: Dict[int, Poly] = {}
    for k, g in a.coeffs.items():
        piece = g.coeff_in("U", i)
        if not piece.is_zero:
            out[k] = piece
    return SurfaceElement(m.spec, a.aux, out)


def is_invariant(m: ExpMap, e: SurfaceElement, extended: bool = False) -> bool:
    return apply_map(m, e, extended=extended) == e


def conjugate(m: ExpMap, cert) -> ExpMap:
    """The exponential map T^{-1} o phi o T for an automorphism certificate
    T of the same surface; re-verified before returning."""
    from .isomorph import certificate_images, invert_certificate, verify_iso

    if cert.source != m.spec or cert.target != m.spec:
        raise PreconditionError("conjugation needs an automorphism certificate of this surface")
    if not verify_iso(cert).ok:
        raise PreconditionError("certificate does not verify as an isomorphism")
    inv = invert_certificate(cert)
    fwd = certificate_images(cert)
    bwd_raw = {var: certificate_images(inv)[gen].raw_lift().with_vars(("X", "Y", "Z", "U"))
               for gen, var in (("x", "X"), ("y", "Y"), ("z", "Z"))}

    def conj(gen: str) -> SurfaceElement:
        mid = apply_map(m, fwd[gen])           # phi(T(gen)) in A[U]
        raw = mid.raw_lift()
        out = substitute(raw, {k: v for k, v in bwd_raw.items() if k in raw.used_vars()},
                         vars_out=("X", "Y", "Z", "U"))
        return normal_form(out, m.spec)

    result = ExpMap(m.spec, conj("x"), conj("z"), conj("y")).verified()
    if result.status is not VerifyStatus.VERIFIED:
        raise VerificationInternalError(
            f"conjugate of a verified map failed verification: {result.reason}")
    return result
