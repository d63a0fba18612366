import itertools

import pytest

from asanuma.acceptance import valid_params
from asanuma.algebra import AsanumaParams, asanuma_algebra, asanuma_gr_algebra
from asanuma.errors import MissingCoordinate, NotAsanumaShape, TooLarge, UnsupportedRelation
from asanuma.field import GF, PrimeField, field_of_order
from asanuma.geometry import count_points, singular_at, smoothness_certificate
from asanuma.poly import evaluate, parse_poly

M2 = AsanumaParams(2, 2, 2, 3)
P3 = AsanumaParams(3, 2, 2, 2)


def rel(P):
    return asanuma_algebra(P).relation_over_generators()


def naive_count(f, q):
    """Independent count: field objects and poly.evaluate, no tables."""
    F = field_of_order(q)
    els = F.elements()
    n = len(f.vars)
    return sum(
        1 for pt in itertools.product(els, repeat=n) if evaluate(f, dict(zip(f.vars, pt))).is_zero()
    )


def test_count_examples():
    assert count_points(rel(M2), 2).count == 8
    assert count_points(rel(M2), 4).count == 64
    hyper = parse_poly("x", ("x", "y", "z", "t"), PrimeField(3))
    assert count_points(hyper, 3).count == 27


@pytest.mark.parametrize("P,q", [(M2, 2), (M2, 4), (P3, 3)])
def test_table_count_matches_naive_count(P, q):
    assert count_points(rel(P), q).count == naive_count(rel(P), q)


@pytest.mark.parametrize("P,qs", [(M2, (2, 4, 8)), (P3, (3, 9))])
def test_q_cubed_and_methods_agree(P, qs):
    for q in qs:
        b = count_points(rel(P), q, "brute")
        s = count_points(rel(P), q, "stratified")
        assert b.count == s.count == q**3
        assert (b.method, s.method) == ("brute", "stratified")


def test_other_valid_instances_have_q_cubed_points():
    for P in (AsanumaParams(2, 3, 2, 3), AsanumaParams(2, 1, 3, 3), AsanumaParams(3, 1, 2, 2)):
        for q in (P.p, P.p**2):
            assert count_points(rel(P), q, "stratified").count == q**3


def test_jobs_do_not_change_the_count():
    assert count_points(rel(M2), 8, jobs=3).count == count_points(rel(M2), 8, jobs=1).count


def test_count_guards():
    with pytest.raises(TooLarge):
        count_points(rel(M2), 2**8)
    with pytest.raises(UnsupportedRelation):
        count_points(parse_poly("x*y + x*z", ("x", "y", "z"), PrimeField(2)), 2, "stratified")
    with pytest.raises(UnsupportedRelation):
        count_points(rel(M2), 3)


def test_singular_examples():
    F2 = PrimeField(2)
    g = parse_poly("z^2 + t^3 + 1", ("z", "t"), F2)
    cert = singular_at(g, {"z": 1, "t": 0})
    assert cert.singular and cert.value == 0 and all(d == 0 for d in cert.gradient.values())
    assert singular_at(parse_poly("z + t", ("z", "t"), F2), {"z": 0, "t": 0}).verdict == "smooth_at_P"
    assert singular_at(parse_poly("t^2", ("z", "t"), F2), {"t": 0}).singular
    with pytest.raises(MissingCoordinate):
        singular_at(g, {"z": 1})


@pytest.mark.parametrize("p,e,m,alpha,beta,lam", [(2, 1, 3, 1, 1, 1), (3, 1, 2, 1, 1, 2), (5, 2, 3, 2, 3, 2)])
def test_cusp_family_singular_point(p, e, m, alpha, beta, lam):
    assert pow(lam, p**e, p) == -beta % p
    g = parse_poly(f"z^{p**e} - {alpha}*t^{m} + {beta}", ("z", "t"), PrimeField(p))
    assert singular_at(g, {"t": 0, "z": lam}).singular
    # the verdict survives extending the field of the coordinates
    F = GF(p, 2)
    assert singular_at(g, {"t": F(0), "z": F(lam)}).singular


def test_extension_invariance_on_all_points():
    g = parse_poly("z^2 + t^3 + z*t + 1", ("z", "t"), PrimeField(2))
    F4 = GF(2, 2)
    for z, t in itertools.product(range(2), repeat=2):
        small = singular_at(g, {"z": z, "t": t}).verdict
        big = singular_at(g, {"z": F4(z), "t": F4(t)}).verdict
        assert small == big


def test_smoothness_certificates():
    cert = smoothness_certificate(asanuma_algebra(M2))
    assert cert.derivative == "1" and cert.verdict == "smooth"
    assert smoothness_certificate(asanuma_algebra(AsanumaParams(3, 2, 2, 2))).derivative == "1"
    for P in valid_params():
        assert smoothness_certificate(asanuma_algebra(P)).derivative == "1"
    with pytest.raises(NotAsanumaShape):
        smoothness_certificate(asanuma_gr_algebra(M2))


def test_b_is_singular_along_the_line():
    g = asanuma_gr_algebra(M2).relation_over_generators()
    for y in range(2):
        assert singular_at(g, {"x": 0, "y": y, "z": 0, "t": 0}).singular
