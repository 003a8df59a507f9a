import math

import pytest

from danielewski import (GF, QQ, Poly, Scalar, apply_map, automorphisms, canonical_expmap,
                         conjugate, derivation_coeff, is_invariant, make_expmap,
                         normal_form, parse_poly, phi_degree, verify_expmap)
from danielewski.errors import PreconditionError
from danielewski.expmap import VerifyStatus
from danielewski.poly import NEG_INF

from conftest import random_element, surf


def test_canonical_examples(surfaces):
    m = canonical_expmap(surfaces[0])  # (Q, X^2, Z^2+1)
    want_y = normal_form(parse_poly("Y + 2*Z*U + X^2*U^2", QQ, ("X", "Y", "Z", "U")),
                         surfaces[0])
    assert m.image_y == want_y
    m2 = canonical_expmap(surfaces[2])  # (F2, X^2+X, Z^2): the 2zU term vanishes
    want_y2 = normal_form(parse_poly("Y + (X^2+X)*U^2", GF(2), ("X", "Y", "Z", "U")),
                          surfaces[2])
    assert m2.image_y == want_y2
    for spec in surfaces:
        m = canonical_expmap(spec)
        assert m.image_x == spec.x()  # x is always fixed
        assert m.status is VerifyStatus.VERIFIED and m.is_nontrivial


def test_verify_passes_on_canonical(surfaces):
    for spec in surfaces:
        report = verify_expmap(canonical_expmap(spec))
        assert report.ok and len(report.checks) == 7


def test_verify_catches_broken_relation(surfaces):
    s45 = surfaces[2]
    m = canonical_expmap(s45)
    broken = make_expmap(s45, m.image_x, m.image_z, s45.y())
    report = verify_expmap(broken)
    failed = report.failures()
    assert failed and all("well-defined" in c.name for c in failed)
    assert broken.verified().status is VerifyStatus.REFUTED


def test_verify_catches_broken_cocycle():
    # z -> z + f U^2 with y adjusted to keep the relation: (W), (A1) pass, (A2) fails
    sq = surf(QQ, "X^2", "Z^2+1")
    image_z = normal_form(parse_poly("Z + X^2*U^2", QQ, ("X", "Y", "Z", "U")), sq)
    image_y = normal_form(parse_poly("Y + 2*Z*U^2 + X^2*U^4", QQ, ("X", "Y", "Z", "U")), sq)
    report = verify_expmap(make_expmap(sq, sq.x(), image_z, image_y))
    by_name = {c.name: c.passed for c in report.checks}
    assert by_name["well-defined: f(phi x) phi y - P(phi x, phi z) = 0"]
    assert not report.ok
    assert any("cocycle" in c.name for c in report.failures())


def test_apply_examples(surfaces):
    sq = surfaces[0]
    m = canonical_expmap(sq)
    assert apply_map(m, sq.x() ** 3) == sq.x() ** 3
    assert apply_map(m, sq.z()) == m.image_z
    assert apply_map(m, sq.y()) == m.image_y
    with pytest.raises(PreconditionError):
        apply_map(make_expmap(sq, sq.x(), sq.z(), sq.y()), sq.z())


def test_phi_degree_examples(surfaces):
    for spec in surfaces:
        m = canonical_expmap(spec)
        assert phi_degree(m, spec.x()) == 0
        assert phi_degree(m, spec.z()) == 1
        assert phi_degree(m, spec.y()) == spec.d
        assert phi_degree(m, spec.zero()) is NEG_INF


def test_derivation_coeff_examples(surfaces):
    sq = surfaces[0]
    m = canonical_expmap(sq)
    f_el = sq.from_xz_poly(sq.f.with_vars(("X", "Z")))
    assert derivation_coeff(m, sq.z(), 1) == f_el
    top = derivation_coeff(m, sq.y(), 2)
    assert top == sq.x() * sq.x()
    assert is_invariant(m, top)  # top coefficient is invariant
    for spec in surfaces:
        mm = canonical_expmap(spec)
        e = spec.z() * spec.y()
        assert derivation_coeff(mm, e, 0) == e


def test_invariance_examples(surfaces):
    sq = surfaces[0]
    m = canonical_expmap(sq)
    assert is_invariant(m, sq.x() ** 5)
    assert not is_invariant(m, sq.z())
    noisy = normal_form(parse_poly("X^2*Y - Z^2 - 1 + X^5", QQ, ("X", "Y", "Z")), sq)
    assert is_invariant(m, noisy) and noisy == sq.x() ** 5


def test_leibniz_rule(rng, surfaces):
    for spec in surfaces:
        m = canonical_expmap(spec)
        for _ in range(25):
            a = random_element(rng, spec, max_terms=3)
            b = random_element(rng, spec, max_terms=3)
            prod = a * b
            top = phi_degree(m, prod)
            top = 0 if top is NEG_INF else int(top)
            for n in range(top + 2):
                lhs = derivation_coeff(m, prod, n)
                rhs = spec.zero()
                for i in range(n + 1):
                    rhs = rhs + derivation_coeff(m, a, i) * derivation_coeff(m, b, n - i)
                assert lhs == rhs


def test_iterative_binomial_property(rng, surfaces):
    # phi^j(phi^i(a)) = C(i+j, i) phi^{i+j}(a), binomial reduced in K
    for spec in surfaces:
        m = canonical_expmap(spec)
        elements = [spec.x(), spec.z(), spec.y(), spec.z() * spec.y()]
        elements += [random_element(rng, spec, max_terms=2) for _ in range(2)]
        for a in elements:
            top = phi_degree(m, a)
            top = 0 if top is NEG_INF else int(top)
            for i in range(top + 1):
                for j in range(top + 1 - i):
                    lhs = derivation_coeff(m, derivation_coeff(m, a, i), j)
                    binom = Scalar(spec.field, math.comb(i + j, i))
                    rhs = derivation_coeff(m, a, i + j).scaled(binom)
                    assert lhs == rhs


def test_degree_inequality(rng, surfaces):
    # deg_phi(phi^i(a)) <= deg_phi(a) - i
    for spec in surfaces:
        m = canonical_expmap(spec)
        for _ in range(15):
            a = random_element(rng, spec, max_terms=3, nonzero=True)
            da = phi_degree(m, a)
            for i in range(int(da) + 1):
                ci = derivation_coeff(m, a, i)
                if ci.is_zero:
                    continue
                assert phi_degree(m, ci) <= da - i


def test_inertness_spot_check(rng, surfaces):
    # products of invariants built from noisy representatives stay invariant factorwise
    for spec in surfaces:
        m = canonical_expmap(spec)
        rel = (spec.f.with_vars(("X", "Y", "Z"))
               * Poly.variable(spec.field, ("X", "Y", "Z"), "Y")
               - spec.P.with_vars(("X", "Y", "Z")))
        for k in range(10):
            pa = Poly(spec.field, ("X", "Y", "Z"), {(k % 3, 0, 0): 1, (0, 0, 0): k})
            pb = Poly(spec.field, ("X", "Y", "Z"), {(k % 2 + 1, 0, 0): 1})
            a = normal_form(pa + rel.scaled(k % spec.field.characteristic()
                                            if spec.field.characteristic() else k), spec)
            b = normal_form(pb - rel, spec)
            prod = a * b
            if prod.is_zero:
                continue
            assert is_invariant(m, prod)
            assert is_invariant(m, a) and is_invariant(m, b)


def test_least_degree_element_properties_canonical_scope(surfaces):
    # for the canonical map z has least positive phi-degree 1, so the
    # p-power vanishing and degree-divisibility statements are checkable
    for spec in surfaces:
        m = canonical_expmap(spec)
        assert phi_degree(m, spec.z()) == 1
        for i in range(2, 6):
            assert derivation_coeff(m, spec.z(), i).is_zero
        for e in (spec.x(), spec.y(), spec.z() * spec.y()):
            d = phi_degree(m, e)
            assert d is NEG_INF or int(d) % 1 == 0


def test_trivial_map_is_representable(surfaces):
    for spec in surfaces:
        triv = make_expmap(spec, spec.x(), spec.z(), spec.y()).verified()
        assert triv.status is VerifyStatus.VERIFIED
        assert not triv.is_nontrivial


def test_conjugation(surfaces):
    s45 = surfaces[2]
    m = canonical_expmap(s45)
    autos = automorphisms(s45)
    ident = [c for c in autos if c.is_identity()][0]
    assert conjugate(m, ident) == m
    shift = [c for c in autos if c.mu == 1][0]
    mc = conjugate(m, shift)
    assert mc.status is VerifyStatus.VERIFIED
    assert is_invariant(mc, s45.x())
    # gamma = -1 over Q with P even in Z: image_z = z - f(x) U
    s3 = surf(QQ, "X^3-X^2", "Z^2+1")
    m3 = canonical_expmap(s3)
    neg = [c for c in automorphisms(s3) if c.gamma == -1][0]
    mneg = conjugate(m3, neg)
    want = normal_form(parse_poly("Z - (X^3-X^2)*U", QQ, ("X", "Y", "Z", "U")), s3)
    assert mneg.image_z == want
