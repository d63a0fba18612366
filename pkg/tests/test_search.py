import itertools
import time

import pytest

from asanuma.algebra import AsanumaParams, asanuma_algebra, asanuma_gr_algebra, polynomial_ring
from asanuma.errors import InvalidParameters, SearchSpaceTooLarge
from asanuma.expmap import ExpMap, apply, check_exponential
from asanuma.poly import parse_poly
from asanuma.search import y_fixed_template, search_expmaps

M2 = AsanumaParams(2, 2, 2, 3)
PHI3_TEMPLATE = {"t": ["x^2*U"], "y": ["U", "x^2*t^4*U^2", "x^6*t^2*U^4", "x^10*U^6"]}


def brute(A, template, invariant=()):
    """Try every coefficient vector with check_exponential directly."""
    A = A.with_params(["U", "V"])
    slots = [(g, m) for g, ms in template.items() for m in ms]
    found = []
    for coeffs in itertools.product(range(A.p), repeat=len(slots)):
        images = {g: A.parse(g).nf for g in template}
        for (g, m), c in zip(slots, coeffs):
            images[g] = images[g] + parse_poly(m, A.vars, A.field).scale(c)
        phi = ExpMap(A, images)
        if phi.is_trivial() or not check_exponential(phi).verified:
            continue
        if all(apply(phi, A.parse(a)) == A.parse(a) for a in invariant):
            found.append({g: str(phi.images[g]) for g in A.generators})
    return found


def as_dicts(maps):
    return [{g: str(phi.images[g]) for g in phi.algebra.generators} for phi in maps]


def test_recovers_phi3_exactly():
    A = asanuma_algebra(M2)
    found = search_expmaps(A, PHI3_TEMPLATE)
    assert len(found) == 1
    phi = found[0]
    assert phi.images["t"] == phi.algebra.parse("t + x^2*U")
    assert phi.images["y"] == phi.algebra.parse("y + U + x^2*t^4*U^2 + x^6*t^2*U^4 + x^10*U^6")
    assert phi.status.verified


def test_search_matches_brute_force_on_phi3_template():
    A = asanuma_algebra(M2)
    assert as_dicts(search_expmaps(A, PHI3_TEMPLATE)) == brute(A, PHI3_TEMPLATE)


def test_search_matches_brute_force_on_b():
    B = asanuma_gr_algebra(M2)
    template = {"t": ["x^2*U", "U"], "y": ["x^2*t^4*U^2", "x^6*t^2*U^4", "x^10*U^6", "U"], "z": ["x^2*U"]}
    assert as_dicts(search_expmaps(B, template)) == brute(B, template)
    got = search_expmaps(B, template, {"invariant": ["y"]})
    assert as_dicts(got) == brute(B, template, invariant=["y"])
    assert got == []  # moving z or t forces a correction in y
    assert search_expmaps(B, template)  # but without the constraint maps exist


def test_search_over_f3_matches_brute_force():
    R = polynomial_ring(3, ("X", "Y"))
    template = {"X": ["U", "Y*U", "Y^2*U", "U^2"], "Y": ["U", "X*U"]}
    got = as_dicts(search_expmaps(R, template))
    assert got == brute(R, template)
    assert {"X": "X + U", "Y": "Y"} in got and {"X": "X + Y*U", "Y": "Y"} in got


def test_empty_template():
    assert search_expmaps(asanuma_algebra(M2), {}) == []


def test_y_fixed_template_20_unknowns_is_empty():
    B = asanuma_gr_algebra(M2)
    template = y_fixed_template()
    assert sum(len(v["unknown"]) for v in template.values()) == 20
    t0 = time.perf_counter()
    assert search_expmaps(B, template, {"invariant": ["y"]}) == []
    assert time.perf_counter() - t0 < 600


def test_y_fixed_template_24_unknowns_is_empty():
    B = asanuma_gr_algebra(M2)
    template = y_fixed_template(("x", "z", "t"))
    assert sum(len(v["unknown"]) for v in template.values()) == 24
    assert search_expmaps(B, template, {"invariant": ["y"]}) == []


def test_y_fixed_template_is_not_vacuous():
    # widen z by x^2 U and let y move by x^6 U^4: exactly the graded analogue of phi4 appears
    B = asanuma_gr_algebra(M2)
    template = y_fixed_template()
    template["z"]["unknown"].append("x^2*U")
    template["y"] = {"fixed": "y", "unknown": ["x^6*U^4"]}
    found = search_expmaps(B, template)
    assert as_dicts(found) == [{"x": "x", "y": "x^6*U^4 + y", "z": "x^2*U + z", "t": "t"}]
    assert check_exponential(found[0]).verified


def test_search_space_guard():
    B = asanuma_gr_algebra(M2)
    template = y_fixed_template(("x", "z", "t"))
    template["y"]["unknown"] = ["U"]
    with pytest.raises(SearchSpaceTooLarge):
        search_expmaps(B, template)


def test_template_validation():
    A = asanuma_algebra(M2)
    with pytest.raises(InvalidParameters):
        search_expmaps(A, {"t": ["x^2"]})  # not divisible by U
    with pytest.raises(InvalidParameters):
        search_expmaps(A, {"t": ["x^2*y*U"]})  # not normal
    with pytest.raises(InvalidParameters):
        search_expmaps(A, {"w": ["U"]})
