"""JSON document formats for surfaces, elements, maps and certificates.

All expressions use the polynomial grammar; field tags are "Q" or "F<p>".
Readers raise InputError on malformed documents so the CLI can map them to
exit code 2.  Writers are deterministic: same object, same document.
"""

from __future__ import annotations

import json
from typing import Dict

from .cancel import FamilyReport, StableIsoCertificate
from .errors import DanielewskiError, InputError
from .expmap import ExpMap
from .fields import parse_field_tag
from .isomorph import IsoCertificate, Obstruction
from .parsing import parse_poly, parse_scalar, poly_str, scalar_str
from .poly import Poly
from .surface import SurfaceElement, SurfaceSpec, make_surface, normal_form


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def _require(doc: dict, key: str, kind: str):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"{kind} document is missing {key!r}")
    return doc[key]


def _wrap(kind: str, fn, *args):
    try:
        return fn(*args)
    except InputError:
        raise
    except DanielewskiError as exc:
        raise InputError(f"bad {kind} document: {exc}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad {kind} document: {exc}") from exc


# -- surfaces -----------------------------------------------------------------


def surface_to_doc(spec: SurfaceSpec) -> dict:
    return {"field": spec.field.tag(), "f": poly_str(spec.f), "phi": poly_str(spec.P)}


def surface_from_doc(doc: dict) -> SurfaceSpec:
    def build():
        field = parse_field_tag(_require(doc, "field", "surface"))
        f = parse_poly(_require(doc, "f", "surface"), field, ("X",))
        P = parse_poly(_require(doc, "phi", "surface"), field, ("X", "Z"))
        return make_surface(field, f, P)
    return _wrap("surface", build)


# -- elements -----------------------------------------------------------------


def element_to_doc(e: SurfaceElement) -> dict:
    return {"coeffs": {str(i): poly_str(g) for i, g in sorted(e.coeffs.items())},
            "aux": list(e.aux)}


def element_from_doc(doc: dict, spec: SurfaceSpec) -> SurfaceElement:
    def build():
        aux = tuple(_require(doc, "aux", "element")) if "aux" in doc else ()
        coeffs_doc = _require(doc, "coeffs", "element")
        vars_c = ("X", "Z") + tuple(aux)
        coeffs: Dict[int, Poly] = {}
        for key, text in coeffs_doc.items():
            coeffs[int(key)] = parse_poly(text, spec.field, vars_c)
        return SurfaceElement(spec, aux, coeffs)
    return _wrap("element", build)


# -- exponential maps ----------------------------------------------------------


def expmap_to_doc(m: ExpMap) -> dict:
    return {
        "surface": surface_to_doc(m.spec),
        "x": poly_str(m.image_x.raw_lift().with_vars(("X", "Z", "Y", "U"))),
        "z": poly_str(m.image_z.raw_lift().with_vars(("X", "Z", "Y", "U"))),
        "y": poly_str(m.image_y.raw_lift().with_vars(("X", "Z", "Y", "U"))),
    }


def expmap_from_doc(doc: dict) -> ExpMap:
    def build():
        spec = surface_from_doc(_require(doc, "surface", "exponential map"))
        images = {}
        for key in ("x", "z", "y"):
            raw = parse_poly(_require(doc, key, "exponential map"),
                             spec.field, ("X", "Z", "Y", "U"))
            images[key] = normal_form(raw.with_vars(("X", "Y", "Z", "U")), spec)
        return ExpMap(spec, images["x"], images["z"], images["y"])
    return _wrap("exponential map", build)


# -- isomorphism certificates ----------------------------------------------------


def iso_to_doc(cert: IsoCertificate) -> dict:
    return {
        "source": surface_to_doc(cert.source),
        "target": surface_to_doc(cert.target),
        "lambda": scalar_str(cert.lam),
        "mu": scalar_str(cert.mu),
        "gamma": scalar_str(cert.gamma),
        "delta": poly_str(cert.delta),
        "u": scalar_str(cert.u),
        "theta": poly_str(cert.theta_rem),
    }


def iso_from_doc(doc: dict) -> IsoCertificate:
    def build():
        source = surface_from_doc(_require(doc, "source", "certificate"))
        target = surface_from_doc(_require(doc, "target", "certificate"))
        field = source.field
        return IsoCertificate(
            source, target,
            parse_scalar(_require(doc, "lambda", "certificate"), field),
            parse_scalar(_require(doc, "mu", "certificate"), field),
            parse_scalar(_require(doc, "gamma", "certificate"), field),
            parse_poly(_require(doc, "delta", "certificate"), field, ("X",)),
            parse_scalar(_require(doc, "u", "certificate"), field),
            parse_poly(_require(doc, "theta", "certificate"), field, ("X", "Z")),
        )
    return _wrap("certificate", build)


def obstruction_to_doc(o: Obstruction) -> dict:
    return {"kind": o.kind.label, "item": o.kind.tag, "detail": o.detail}


# -- stable-isomorphism certificates ----------------------------------------------


def stable_to_doc(cert: StableIsoCertificate) -> dict:
    return {
        "surfaceA": surface_to_doc(cert.spec_a),
        "surfaceB": surface_to_doc(cert.spec_b),
        "h": poly_str(cert.h),
        "theta": element_to_doc(cert.theta),
        "corr": element_to_doc(cert.corr),
        "s": element_to_doc(cert.s),
        "a": poly_str(cert.a),
        "b": poly_str(cert.b),
        "w": element_to_doc(cert.w),
    }


def stable_from_doc(doc: dict) -> StableIsoCertificate:
    def build():
        spec_a = surface_from_doc(_require(doc, "surfaceA", "stable certificate"))
        spec_b_doc = _require(doc, "surfaceB", "stable certificate")
        field = spec_a.field
        fb = parse_poly(_require(spec_b_doc, "f", "surface"), field, ("X",))
        Pb = parse_poly(_require(spec_b_doc, "phi", "surface"), field, ("X", "Z"))
        spec_b = make_surface(field, fb, Pb, _min_r=1)
        return StableIsoCertificate(
            spec_a, spec_b,
            parse_poly(_require(doc, "h", "stable certificate"), field, ("X",)),
            element_from_doc(_require(doc, "theta", "stable certificate"), spec_a),
            element_from_doc(_require(doc, "corr", "stable certificate"), spec_a),
            element_from_doc(_require(doc, "s", "stable certificate"), spec_a),
            parse_poly(_require(doc, "a", "stable certificate"), field, ("X", "Z")),
            parse_poly(_require(doc, "b", "stable certificate"), field, ("X", "Z")),
            element_from_doc(_require(doc, "w", "stable certificate"), spec_a),
        )
    return _wrap("stable certificate", build)


# -- family reports ----------------------------------------------------------------


def family_to_doc(report: FamilyReport) -> dict:
    return {
        "surfaces": [surface_to_doc(s) for s in report.surfaces],
        "fingerprints": [
            {"d": fp.d, "r": fp.r, "multiplicities": list(fp.multiplicities),
             "degrees": list(fp.degrees)}
            for fp in report.fingerprints
        ],
        "pairwise": [
            {"i": i, "j": j, "verdict": verdict}
            for i, j, verdict in report.nonisomorphic
        ],
        "chain": [
            {
                "upper": surface_to_doc(link.upper),
                "lower": surface_to_doc(link.lower),
                "certificate": stable_to_doc(link.certificate),
                "verification": link.report.to_doc(),
            }
            for link in report.chain
        ],
        "ok": report.ok,
    }
