"""Integer weight gradings, filtration degrees, leading forms and gr presentations.

A grading assigns an integer weight to every generator (parameters default to
weight 0).  The filtration level of an element is the largest weight among the
monomials of its normal form, and its leading form is the sum of the normal
form terms attaining that weight, read in the associated graded algebra.
Filtrations are never materialized as subspaces.
"""

from __future__ import annotations

import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgebraElement, PresentedAlgebra
from .errors import UnsupportedGrading, ZeroElement
from .poly import Polynomial, format_poly


class WeightGrading:
    """Weights per variable, optionally deriving one generator's weight.

    With ``derive="y"`` the weight of ``y`` is chosen so the rule monomial
    ``x^m*y`` has the weight of the top part of the relation tail.
    Gradings induced by generator weights are always admissible: every normal
    form is a sum of generator monomials each lying in its own filtration level.
    """

    admissible = True

    def __init__(self, weights: Mapping[str, int], derive: str | None = None):
        self.weights = {k: int(v) for k, v in weights.items()}
        self.derive = derive

    @classmethod
    def from_json(cls, data: Mapping) -> WeightGrading:
        weights = dict(data.get("weights", {}))
        for k, v in data.items():
            if k not in ("weights", "derive_y", "derive") and isinstance(v, int):
                weights[k] = v
        derive = data.get("derive")
        if data.get("derive_y"):
            derive = "y"
        return cls(weights, derive)

    def to_json(self) -> dict:
        out = {"weights": dict(self.weights)}
        if self.derive:
            out["derive"] = self.derive
        return out

    def scaled(self, k: int) -> WeightGrading:
        return WeightGrading({v: k * w for v, w in self.weights.items()}, self.derive)

    def with_weight(self, var: str, w: int) -> WeightGrading:
        return WeightGrading({**self.weights, var: w}, self.derive)

    def _key(self):
        return (tuple(sorted(self.weights.items())), self.derive)

    def __eq__(self, other):
        return isinstance(other, WeightGrading) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        extra = f", derive={self.derive!r}" if self.derive else ""
        return f"WeightGrading({self.weights}{extra})"

    def resolve(self, A: PresentedAlgebra) -> dict[str, int]:
        """Weights of every variable of A, deriving the designated one if asked."""
        w = {v: 0 for v in A.params}
        w.update(self.weights)
        if self.derive:
            w[self.derive] = self.derived_weight(A)
        missing = [g for g in A.generators if g not in w]
        if missing:
            raise UnsupportedGrading(f"no weight for generators {missing}")
        return {v: w[v] for v in A.vars}

    def derived_weight(self, A: PresentedAlgebra) -> int:
        y = self.derive
        if A.rule is None or y not in A.vars:
            raise UnsupportedGrading(f"cannot derive the weight of {y!r} without a rule monomial")
        i = A.vars.index(y)
        mu = A.rule
        if mu[i] == 0:
            raise UnsupportedGrading(f"{y!r} does not occur in the rule monomial")
        if any(e[i] for e in A.neg_tail.terms):
            raise UnsupportedGrading(f"{y!r} occurs in the relation tail; its weight cannot be derived")
        others = {v: self.weights.get(v, 0) for v in A.vars}
        for v in A.generators:
            if v != y and v not in self.weights and v in A.relation.support_vars():
                raise UnsupportedGrading(f"no weight for {v!r}")
        top = max(
            sum(k * others[v] for v, k in zip(A.vars, e)) for e in A.neg_tail.terms
        )
        rest = sum(k * others[v] for j, (v, k) in enumerate(zip(A.vars, mu)) if j != i)
        derived = Fraction(top - rest, mu[i])
        if derived.denominator != 1:
            raise UnsupportedGrading(f"derived weight of {y!r} is not an integer: {derived}")
        return int(derived)


def _weight(exps, wvec) -> int:
    return sum(a * b for a, b in zip(exps, wvec))


def _weight_vector(A: PresentedAlgebra, W: WeightGrading) -> list[int]:
    resolved = W.resolve(A)
    return [resolved[v] for v in A.vars]


def poly_weight_degree(f: Polynomial, wvec) -> int:
    if f.is_zero():
        raise ZeroElement("the zero element has no filtration degree")
    return max(_weight(e, wvec) for e in f.terms)


def top_part(f: Polynomial, wvec) -> Polynomial:
    d = poly_weight_degree(f, wvec)
    return Polynomial(f.field, f.vars, {e: c for e, c in f.terms.items() if _weight(e, wvec) == d}, _trusted=True)


def weight_degree(a: AlgebraElement, W: WeightGrading) -> int:
    """Filtration level of a: the top weight over its normal-form monomials."""
    return poly_weight_degree(a.nf, _weight_vector(a.owner, W))


def homogeneous_components(a: AlgebraElement, W: WeightGrading) -> dict[int, AlgebraElement]:
    wvec = _weight_vector(a.owner, W)
    parts: dict[int, dict] = {}
    for e, c in a.nf.terms.items():
        parts.setdefault(_weight(e, wvec), {})[e] = c
    return {
        d: AlgebraElement(a.owner, Polynomial(a.nf.field, a.nf.vars, t, _trusted=True))
        for d, t in sorted(parts.items())
    }


@dataclass
class GradedPresentation:
    """gr(A) for a weight grading, together with the leading-form map from A."""

    source: PresentedAlgebra
    algebra: PresentedAlgebra
    grading: WeightGrading
    weights: dict = field(default_factory=dict)

    @property
    def is_isomorphic_to_source(self) -> bool:
        return self.algebra is self.source

    def lead(self, a: AlgebraElement) -> AlgebraElement:
        wvec = [self.weights[v] for v in self.source.vars]
        top = top_part(a.nf, wvec)
        return AlgebraElement(self.algebra, self.algebra.reduce(top))

    def relation_text(self) -> str:
        return format_poly(self.algebra.relation_over_generators())


_GR_CACHE: dict = {}


def gr_presentation(A: PresentedAlgebra, W: WeightGrading) -> GradedPresentation:
    """Present gr(A) by the leading form of the relation.

    A homogeneous relation gives back A itself; a leading form that loses the
    rule monomial raises UnsupportedGrading.
    """
    key = (id(A), W)
    cached = _GR_CACHE.get(key)
    if cached is not None and cached.source is A:
        return cached
    weights = W.resolve(A)
    wvec = [weights[v] for v in A.vars]
    if A.rule is None:
        gp = GradedPresentation(A, A, W, weights)
    else:
        lead_rel = top_part(A.relation, wvec)
        if A.rule not in lead_rel.terms:
            raise UnsupportedGrading(
                f"leading form {format_poly(lead_rel.embed(A.generators))} of the relation loses the rule monomial"
            )
        if lead_rel == A.relation:
            gr = A
        else:
            gr = PresentedAlgebra(
                A.field, A.generators, lead_rel.embed(A.generators), A.rule[: len(A.generators)], A.params
            )
        gp = GradedPresentation(A, gr, W, weights)
    _GR_CACHE[key] = gp
    return gp


def leading_form(a: AlgebraElement, W: WeightGrading) -> AlgebraElement:
    """rho(a): the top-weight part of nf(a), as an element of gr(A)."""
    if a.is_zero():
        raise ZeroElement("the leading form of 0 is undefined")
    return gr_presentation(a.owner, W).lead(a)


@dataclass
class FiltrationReport:
    passed: bool
    samples: int
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"passed": self.passed, "samples": self.samples, "failures": self.failures[:10]}


def check_filtration_axioms(
    A: PresentedAlgebra, W: WeightGrading, samples: int = 1000, seed: int = 0, pairs=None
) -> FiltrationReport:
    """Sampled check of deg(ab) = deg a + deg b and rho(ab) = rho(a) rho(b)."""
    gp = gr_presentation(A, W)
    rng = random.Random(seed)
    failures = []
    if pairs is None:
        pairs = []
        while len(pairs) < samples:
            a = A.random_element(rng, terms=rng.randint(1, 4), degree=4)
            b = A.random_element(rng, terms=rng.randint(1, 4), degree=4)
            if a and b:
                pairs.append((a, b))
    n = 0
    for a, b in pairs:
        n += 1
        ab = a * b
        da, db, dab = weight_degree(a, W), weight_degree(b, W), weight_degree(ab, W)
        if dab != da + db:
            failures.append(f"deg({a} * {b}) = {dab} != {da} + {db}")
            continue
        if gp.lead(ab) != gp.lead(a) * gp.lead(b):
            failures.append(f"rho({a} * {b}) != rho({a}) * rho({b})")
    return FiltrationReport(not failures, n, failures)


# -- the gradings used for the Asanuma rings -------------------------------------


def first_grading(m: int) -> WeightGrading:
    """x, y, z, t of weights -1, m, 0, 0 (x^m y has weight 0)."""
    return WeightGrading({"x": -1, "y": m, "z": 0, "t": 0})


def second_grading(params) -> WeightGrading:
    """x, z, t of weights 0, q, p^{e-r-1}; the weight q p^e of y is derived."""
    return WeightGrading({"x": 0, "z": params.q, "t": params.p ** (params.e - params.r - 1)}, derive="y")


def trinomial_grading(p: int, e: int, s: int) -> WeightGrading:
    """For the relation x^m y + t^s + z^{p^e} with s = q p^r: weights 0, q p^e, q, p^{e-r}."""
    q, r = s, 0
    while q % p == 0:
        q //= p
        r += 1
    return WeightGrading({"x": 0, "y": q * p**e, "z": q, "t": p ** (e - r)})
