import itertools

import pytest

from asanuma.algebra import AsanumaParams, asanuma_algebra, asanuma_gr_algebra, polynomial_ring
from asanuma.errors import UnsupportedGrading, ZeroElement
from asanuma.grading import (
    WeightGrading,
    check_filtration_axioms,
    first_grading,
    gr_presentation,
    homogeneous_components,
    leading_form,
    second_grading,
    trinomial_grading,
    weight_degree,
)

P223 = AsanumaParams(2, 2, 2, 3)


@pytest.fixture(scope="module")
def A():
    return asanuma_algebra(P223)


def test_second_grading_weights(A):
    W = second_grading(P223)
    assert W.resolve(A) == {"x": 0, "y": 12, "z": 3, "t": 2, "U": 0, "V": 0}


def test_gr_examples(A):
    gp = gr_presentation(A, second_grading(P223))
    assert gp.relation_text() == "x^2*y + z^4 + t^6"
    assert not gp.is_isomorphic_to_source
    first = gr_presentation(A, first_grading(2))
    assert first.algebra is A and first.relation_text() == "x^2*y + z^4 + t^6 + t"
    zero = gr_presentation(A, WeightGrading({"x": 0, "y": 0, "z": 0, "t": 0}))
    assert zero.algebra is A


def test_trinomial_grading_on_b_is_the_second_grading():
    B = asanuma_gr_algebra(P223)
    W2 = trinomial_grading(P223.p, P223.e, P223.sp)  # exponent of t in B
    assert W2.resolve(B)["y"] == second_grading(P223).resolve(B)["y"]
    assert gr_presentation(B, W2).algebra is B


@pytest.mark.parametrize("p,e,s", [(2, 2, 3), (3, 2, 2), (2, 3, 3)])
@pytest.mark.parametrize("m", [2, 3])
def test_graded_relation_and_degree_drop(p, e, s, m):
    P = AsanumaParams(p, m, e, s)
    A = asanuma_algebra(P)
    W = second_grading(P)
    assert gr_presentation(A, W).relation_text() == P.relation_text(linear_t=False)
    total = A.parse(P.relation_text(linear_t=False))
    assert total == -A.gen("t")
    assert weight_degree(total, W) == p ** (e - P.r - 1) < P.q * P.pe


def test_weight_degree_and_zero(A):
    W = second_grading(P223)
    assert weight_degree(A.parse("z^4 + t"), W) == 12
    assert weight_degree(A.one(), W) == 0
    with pytest.raises(ZeroElement):
        weight_degree(A.zero(), W)
    with pytest.raises(ZeroElement):
        leading_form(A.zero(), W)


def test_filtration_level_agrees_with_laurent_embedding(A):
    # y = -(z^4 + t + t^6) x^{-2} inside k[x, 1/x, z, t]; x has weight 0 there,
    # so the level of a normal form is the top weight after this substitution
    W = second_grading(P223)
    w = {"x": 0, "z": 3, "t": 2}
    for text in ("x*y", "y^2 + z", "x*y*t + z^5", "y*t^3 + x^4"):
        a = A.parse(text)
        top = 0
        for e in a.nf.terms:
            ex, ey, ez, et = e[:4]
            # y^ey expands to terms z^{4i} t^{j + 6k} with i + j + k = ey
            best = max(
                4 * i * w["z"] + (j + 6 * k) * w["t"]
                for i, j in itertools.product(range(ey + 1), repeat=2)
                if i + j <= ey
                for k in [ey - i - j]
            )
            top = max(top, best + ez * w["z"] + et * w["t"])
        assert weight_degree(a, W) == top


def test_first_grading_example(A):
    W = first_grading(2)
    x, y = A.gen("x"), A.gen("y")
    assert weight_degree(x * y, W) == 1 == weight_degree(x, W) + weight_degree(y, W)
    assert weight_degree(A.one() * A.one(), W) == 0
    assert str(leading_form(x + y, W)) == "y"


def test_non_additivity_pair(A):
    W = second_grading(P223)
    a, b = A.parse("z^4 + t"), A.parse("z^4")
    assert str(leading_form(a + b, W)) == "t"
    assert (leading_form(a, W) + leading_form(b, W)).is_zero()


def test_homogeneous_components(A):
    parts = homogeneous_components(A.parse("x^2*y"), second_grading(P223))
    assert {d: str(c) for d, c in parts.items()} == {2: "t", 12: "z^4 + t^6"}


@pytest.mark.parametrize("which", ["first", "second"])
def test_filtration_axioms_1000_samples(A, which):
    W = first_grading(2) if which == "first" else second_grading(P223)
    report = check_filtration_axioms(A, W, samples=1000, seed=5)
    assert report.passed, report.failures[:3]
    assert report.samples == 1000


def test_filtration_report_catches_a_bad_grading():
    # the relation x*y + z is not homogeneous for these weights and its
    # leading form drops x*y, so gr is not presentable this way
    R = asanuma_algebra(AsanumaParams(2, 1, 2, 3))
    with pytest.raises(UnsupportedGrading):
        gr_presentation(R, WeightGrading({"x": 0, "y": 0, "z": 5, "t": 0}))


def test_derive_needs_rule():
    R = polynomial_ring(2, ("x", "y"))
    with pytest.raises(UnsupportedGrading):
        WeightGrading({"x": 0}, derive="y").resolve(R)


def test_json_round_trip():
    W = WeightGrading.from_json({"x": 0, "z": 3, "t": 2, "derive_y": True})
    assert W == second_grading(P223)
    assert WeightGrading.from_json(W.to_json()) == W
