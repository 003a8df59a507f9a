import dataclasses

import pytest

from danielewski import (GF, QQ, build_stable_iso, check_hypotheses, parse_poly,
                         poly_str, sigma_family, verify_stable_iso)
from danielewski.cancel import corr_by_division, eq7_defect
from danielewski.errors import (ComaximalityError, PreconditionError,
                                SurfaceConstraintError)

from conftest import surf


def test_hypotheses_examples():
    rep = check_hypotheses(surf(QQ, "X^3-X^2", "Z^2+1"))
    assert rep.ok and "4" in rep.comaximal.detail
    rep = check_hypotheses(surf(GF(2), "X^2*(X+1)", "Z^2+Z+X"))
    assert rep.ok and "1" in rep.comaximal.detail
    rep = check_hypotheses(surf(QQ, "X^3-X^2", "Z^2"))
    assert not rep.ok and not rep.comaximal.passed
    rep = check_hypotheses(surf(QQ, "X^2+1", "Z^2+1"))
    assert not rep.double_root.passed


def test_build_matches_hand_derivation():
    cert = build_stable_iso(surf(QQ, "X^3-X^2", "Z^2+1"))
    spec = cert.spec_a
    assert poly_str(cert.h) == "X^2 - X"
    v = spec.from_xz_poly(parse_poly("v", QQ, ("X", "Z", "v")))
    x, z, y = spec.x(), spec.z(), spec.y()
    h = spec.from_xz_poly(cert.h.with_vars(("X", "Z")))
    assert cert.theta == h * v + z
    assert cert.corr == (x - spec.one()) * v * v
    assert cert.s == x * y + z * v.scaled(2) + x * (x - spec.one()) * v * v
    assert poly_str(cert.a) == "-1/2*Z"
    assert poly_str(cert.b) == "1"
    assert cert.spec_b.f == cert.h and cert.spec_b.P == spec.P


def test_builder_output_verifies():
    for field, f, p in ((QQ, "X^3-X^2", "Z^2+1"),
                        (QQ, "X^4-X^3", "Z^2+1"),
                        (GF(2), "X^2*(X+1)", "Z^2+Z+X"),
                        (GF(3), "X^2*(X+1)", "Z^2+1"),
                        (QQ, "X^2*(X-1)", "Z^3 - Z + 1")):
        cert = build_stable_iso(surf(field, f, p))
        report = verify_stable_iso(cert)
        assert report.ok, (f, [c.line() for c in report.failures()])


def test_min_degree_partner_surface():
    # n = 2 with constant g: the partner has deg h = 1, representable internally
    cert = build_stable_iso(surf(QQ, "X^2", "Z^2+1"))
    assert poly_str(cert.spec_b.f) == "X" and cert.spec_b.r == 1
    assert verify_stable_iso(cert).ok


def test_eq7_identity_and_corr_cross_check():
    for field, f, p in ((QQ, "X^3-X^2", "Z^2+1"),
                        (GF(2), "X^2*(X+1)", "Z^2+Z+X")):
        cert = build_stable_iso(surf(field, f, p))
        assert eq7_defect(cert).is_zero
        assert corr_by_division(cert) == cert.corr


def test_tampered_certificates_fail():
    cert = build_stable_iso(surf(QQ, "X^3-X^2", "Z^2+1"))
    worse = dataclasses.replace(cert, s=cert.s + cert.spec_a.one())
    report = verify_stable_iso(worse)
    failed = {c.name.split()[0] for c in report.failures()}
    assert "V2" in failed
    # a := a + P leaves a nonzero defect in V3 (and shifts V4)
    worse = dataclasses.replace(cert, a=cert.a + cert.spec_a.P)
    report = verify_stable_iso(worse)
    assert any(c.name.startswith("V3") for c in report.failures())
    worse = dataclasses.replace(cert, w=cert.w + cert.spec_a.one())
    report = verify_stable_iso(worse)
    assert any(c.name.startswith("V4") for c in report.failures())


def test_build_refuses_bad_hypotheses():
    with pytest.raises(PreconditionError):
        build_stable_iso(surf(QQ, "X^2+1", "Z^2+1"))   # no double root at 0
    with pytest.raises(PreconditionError):
        build_stable_iso(surf(QQ, "X^3-X^2", "Z^2"))    # comaximality fails


def test_family_demo_rationals():
    fam = sigma_family(QQ, parse_poly("X-1", QQ, ("X",)),
                       parse_poly("Z^2+1", QQ, ("X", "Z")), 2, 4)
    assert fam.ok
    assert len(fam.surfaces) == 3 and len(fam.chain) == 2
    multisets = [fp.multiplicities for fp in fam.fingerprints]
    assert multisets == [(1, 2), (1, 3), (1, 4)]
    assert len(fam.nonisomorphic) == 3
    assert all("differ" in v for _, _, v in fam.nonisomorphic)
    for link in fam.chain:
        assert link.certificate.spec_b == link.lower
        assert link.report.ok


def test_family_demo_char2():
    fam = sigma_family(GF(2), parse_poly("X+1", GF(2), ("X",)),
                       parse_poly("Z^2+Z+X", GF(2), ("X", "Z")), 2, 3)
    assert fam.ok and len(fam.chain) == 1


def test_family_with_constant_g():
    # g = 1 is squarefree with g(0) != 0; members are X^n Y = P
    fam = sigma_family(QQ, parse_poly("1", QQ, ("X",)),
                       parse_poly("Z^2+1", QQ, ("X", "Z")), 2, 4)
    assert fam.ok and len(fam.chain) == 2
    assert [fp.multiplicities for fp in fam.fingerprints] == [(2,), (3,), (4,)]


def test_family_preconditions():
    with pytest.raises(SurfaceConstraintError):
        sigma_family(QQ, parse_poly("(X-1)^2", QQ, ("X",)),
                     parse_poly("Z^2+1", QQ, ("X", "Z")), 2, 3)
    with pytest.raises(SurfaceConstraintError):
        sigma_family(QQ, parse_poly("X", QQ, ("X",)),
                     parse_poly("Z^2+1", QQ, ("X", "Z")), 2, 3)  # g(0) = 0
    with pytest.raises(ComaximalityError):
        sigma_family(QQ, parse_poly("X-1", QQ, ("X",)),
                     parse_poly("Z^2", QQ, ("X", "Z")), 2, 3)
    # degenerate-P guard: P_Z = 0 fails at comaximality, never crashes
    with pytest.raises(ComaximalityError):
        sigma_family(GF(2), parse_poly("X+1", GF(2), ("X",)),
                     parse_poly("Z^2+X", GF(2), ("X", "Z")), 2, 3)
    with pytest.raises(PreconditionError):
        sigma_family(QQ, parse_poly("X-1", QQ, ("X",)),
                     parse_poly("Z^2+1", QQ, ("X", "Z")), 1, 3)
