import pytest

from danielewski import GF, QQ, Poly, bezout_cofactors, parse_poly, poly_str, resultant_in
from danielewski.errors import ComaximalityError
from danielewski.resultant import det_bareiss, sylvester_matrix

from conftest import random_poly
from oracles import naive_det

V = ("X", "Z")


def q(text):
    return parse_poly(text, QQ, V)


def test_resultant_examples():
    assert poly_str(resultant_in(q("Z^2+1"), q("2*Z"), "Z")) == "4"
    f2 = GF(2)
    assert poly_str(resultant_in(parse_poly("Z^2+Z+X", f2, V),
                                 parse_poly("1", f2, V), "Z")) == "1"
    assert resultant_in(q("Z^2"), q("2*Z"), "Z").is_zero


def test_resultant_degenerate_conventions():
    # zero companion reports 0; both-constant inputs are an error
    assert resultant_in(q("Z^2"), q("0"), "Z").is_zero
    with pytest.raises(ValueError):
        resultant_in(q("X"), q("1"), "Z")
    # constant companion: c ** deg
    assert poly_str(resultant_in(q("Z^3+X"), q("2"), "Z")) == "8"


def test_resultant_vanishes_iff_common_factor(rng):
    for _ in range(40):
        a = random_poly(rng, QQ, V, max_exp=2, max_terms=3, nonzero=True)
        b = random_poly(rng, QQ, V, max_exp=2, max_terms=3, nonzero=True)
        common = q("Z + X")
        if (a * common).degree_in("Z") >= 1 and (b * common).degree_in("Z") >= 1:
            assert resultant_in(a * common, b * common, "Z").is_zero


def test_bareiss_matches_cofactor_oracle(rng):
    # all sampled degrees <= 4 in the fixed corpus
    for trial in range(80):
        field = QQ if trial % 2 else GF(5)
        p = random_poly(rng, field, V, max_exp=2, max_terms=4)
        s = random_poly(rng, field, V, max_exp=2, max_terms=4)
        if p.degree_in("Z") in (0,) or s.degree_in("Z") in (0,):
            continue
        if p.is_zero or s.is_zero:
            continue
        matrix = sylvester_matrix(p, s, "Z")
        assert det_bareiss(matrix, field, V) == naive_det(matrix, field, V)


def test_bezout_examples():
    P = q("Z^2+1")
    a, b = bezout_cofactors(P, P.derivative("Z"))
    assert poly_str(a) == "-1/2*Z" and poly_str(b) == "1"
    f2 = GF(2)
    P = parse_poly("Z^2+Z+X", f2, V)
    a, b = bezout_cofactors(P, P.derivative("Z"))
    assert poly_str(a) == "1" and b.is_zero
    P = q("Z^2")
    with pytest.raises(ComaximalityError):
        bezout_cofactors(P, P.derivative("Z"))


def test_bezout_identity_reverified(rng):
    cases = [q("Z^2 + 1"), q("Z^2 + X*Z + 1/4*X^2 - 1/4"), q("Z^4 + Z + 1"),
             q("Z^3 - Z + 1"), parse_poly("Z^3 + Z^2 + Z + X", GF(3), V)]
    one_q = Poly.one(QQ, V)
    for P in cases:
        Pz = P.derivative("Z")
        try:
            a, b = bezout_cofactors(P, Pz)
        except ComaximalityError:
            continue
        assert a * Pz + b * P == Poly.one(P.field, V)
    assert bezout_cofactors(q("Z^2+1"), q("2*Z"))[1] * q("Z^2+1") \
        + bezout_cofactors(q("Z^2+1"), q("2*Z"))[0] * q("2*Z") == one_q


def test_bezout_rejects_pz_zero():
    with pytest.raises(ComaximalityError):
        bezout_cofactors(q("Z^2 + X"), q("0"))


def test_bezout_rejects_nonconstant_resultant():
    P = q("Z^2 + X")  # disc = -4X, vanishes at X = 0
    with pytest.raises(ComaximalityError):
        bezout_cofactors(P, P.derivative("Z"))
