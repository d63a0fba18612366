"""Quotient algebras k[gens, params]/(relation) with a single rewrite rule.

The relation is scaled so the distinguished monomial ``mu`` has coefficient 1
and split as ``mu + tail``; normalization rewrites ``mu -> -tail`` until no
monomial is divisible by ``mu``.  For the Asanuma rings ``mu = x^m*y`` and the
normal forms are exactly sums of ``x^n * g(z,t)`` and ``x^i * y^j * g(z,t)``
with ``i < m`` and ``j >= 1``.

Extra central parameters (``U``, ``V``, unknown coefficients, ...) extend the
variable universe without touching the rule, so A, A[U] and A[V,U] are one
algebra object with a widened parameter list.
"""

from __future__ import annotations

import random
import warnings
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field as dc_field

from .errors import (
    InvalidParameters,
    OwnerMismatch,
    UnknownVariable,
    UnsupportedRelation,
)
from .field import FieldElement, PrimeField
from .poly import Polynomial, _add_into, format_poly, parse_poly


class PresentedAlgebra:
    def __init__(
        self,
        field: PrimeField | int,
        generators: Sequence[str],
        relation: Polynomial | str | None = None,
        rule_monomial: str | Mapping[str, int] | None = None,
        params: Sequence[str] = (),
        asanuma: AsanumaParams | None = None,
    ):
        if isinstance(field, int):
            field = PrimeField(field)
        self.field = field
        self.generators = tuple(generators)
        self.params = tuple(params)
        if len(set(self.vars)) != len(self.vars):
            raise InvalidParameters(f"duplicate variable names in {self.vars}")
        self.asanuma = asanuma

        if relation is None:
            relation = Polynomial.zero(field, self.vars)
        elif isinstance(relation, str):
            relation = parse_poly(relation, self.generators, field)
        extra = relation.support_vars() - set(self.generators)
        if extra:
            raise UnsupportedRelation(f"relation uses non-generator variables {sorted(extra)}")
        relation = relation.embed(self.vars)

        self._pow_cache: dict[int, dict] = {}
        if relation.is_zero():
            self.relation = relation
            self.rule = None
            self.neg_tail = None
            self._support = ()
            return

        if rule_monomial is None:
            mu = _pick_rule(relation, self.generators)
        else:
            if isinstance(rule_monomial, str):
                m = parse_poly(rule_monomial, self.vars, field)
                if len(m) != 1:
                    raise UnsupportedRelation(f"rule monomial must be a single monomial: {rule_monomial!r}")
                mu = next(iter(m.terms))
            elif isinstance(rule_monomial, Mapping):
                mu = relation.exponents(rule_monomial)
            else:
                mu = tuple(rule_monomial)
                mu = mu + (0,) * (len(self.vars) - len(mu))
        if mu not in relation.terms:
            raise UnsupportedRelation(f"rule monomial does not occur in the relation {format_poly(relation)}")
        if not any(mu):
            raise UnsupportedRelation("rule monomial must be non-constant")
        support = tuple(i for i, k in enumerate(mu) if k)
        inv = pow(relation.terms[mu], -1, field.p)
        relation = relation.scale(inv)
        tail = {e: c for e, c in relation.terms.items() if e != mu}
        mu_weight = sum(mu[i] for i in support)
        for e in tail:
            # strict drop in mu-variable degree makes rewriting terminate and
            # mu the leading monomial of a weight order (hence confluent)
            if sum(e[i] for i in support) >= mu_weight:
                raise UnsupportedRelation(
                    f"tail monomial {format_poly(Polynomial(field, self.vars, {e: 1}))} "
                    f"does not have lower degree than the rule monomial in {[self.vars[i] for i in support]}"
                )
        self.relation = relation
        self.rule = mu
        self._support = support
        self.neg_tail = -Polynomial(field, self.vars, tail, _trusted=True)
        if self.relation_is_irreducible() is False:
            warnings.warn(f"relation {format_poly(relation)} is reducible; the quotient is not a domain")

    # -- identity ------------------------------------------------------------

    @property
    def vars(self) -> tuple[str, ...]:
        return self.generators + self.params

    @property
    def p(self) -> int:
        return self.field.p

    def _key(self):
        key = self.__dict__.get("_cached_key")
        if key is None:
            key = (self.field, self.generators, self.params, frozenset(self.relation.terms.items()), self.rule)
            self._cached_key = key
        return key

    def __eq__(self, other):
        return other is self or (isinstance(other, PresentedAlgebra) and self._key() == other._key())

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        rel = format_poly(self.relation.embed(self.vars))
        params = f", params={list(self.params)}" if self.params else ""
        return f"PresentedAlgebra(GF({self.p})[{', '.join(self.generators)}]/({rel}){params})"

    def is_polynomial_ring(self) -> bool:
        return self.rule is None

    def with_params(self, params: Sequence[str]) -> PresentedAlgebra:
        """Same ring with extra central parameters appended (existing ones kept)."""
        new = tuple(self.params) + tuple(v for v in params if v not in self.params)
        if new == self.params:
            return self
        return PresentedAlgebra(
            self.field,
            self.generators,
            self.relation.embed(self.generators) if self.rule else None,
            self.rule[: len(self.generators)] if self.rule else None,
            new,
            self.asanuma,
        )

    def relation_over_generators(self) -> Polynomial:
        return self.relation.embed(self.generators)

    def relation_is_irreducible(self):
        """Exact check for relations of the shape ``a*y + b`` with ``a`` a monomial.

        Such a relation is irreducible iff it is primitive in ``y``, i.e. no
        variable of ``a`` divides ``b``.  Returns None for other shapes.
        """
        if self.rule is None:
            return None
        for i in self._support:
            if self.rule[i] != 1:
                continue
            if any(e[i] for e in self.neg_tail.terms):
                continue
            a_vars = [j for j in self._support if j != i]
            tail = self.neg_tail.terms
            if not tail:
                return not a_vars
            return all(any(e[j] == 0 for e in tail) for j in a_vars)
        return None

    # -- element construction -----------------------------------------------

    def __call__(self, value) -> AlgebraElement:
        if isinstance(value, AlgebraElement):
            if value.owner is self or value.owner == self:
                return value
            return self.lift(value)
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Polynomial):
            return self.normalize(value.embed(self.vars) if value.vars != self.vars else value)
        if isinstance(value, (int, FieldElement)):
            return AlgebraElement(self, Polynomial.constant(int(value), self.field, self.vars))
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")

    def lift(self, a: AlgebraElement) -> AlgebraElement:
        """Move an element of the same ring with fewer parameters into this one."""
        src = a.owner
        n = len(self.generators)
        same_ring = (
            src.field == self.field
            and src.generators == self.generators
            and (src.rule or ())[:n] == (self.rule or ())[:n]
            and src.relation_over_generators() == self.relation_over_generators()
        )
        if not same_ring:
            raise OwnerMismatch(f"{src!r} is not a parameter-restriction of {self!r}")
        return AlgebraElement(self, a.nf.embed(self.vars))

    def parse(self, text: str) -> AlgebraElement:
        return self.normalize(parse_poly(text, self.vars, self.field))

    def gen(self, name: str) -> AlgebraElement:
        return AlgebraElement(self, Polynomial.variable(name, self.field, self.vars))

    def gens(self) -> dict[str, AlgebraElement]:
        return {g: self.gen(g) for g in self.generators}

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, Polynomial.zero(self.field, self.vars))

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, Polynomial.constant(1, self.field, self.vars))

    # -- normal form ----------------------------------------------------------

    def _rule_power(self, k: int) -> dict:
        """Terms of ``(-tail)^k``."""
        cached = self._pow_cache.get(k)
        if cached is None:
            cached = (self.neg_tail**k).terms
            self._pow_cache[k] = cached
        return cached

    def _times(self, e: tuple) -> int:
        mu = self.rule
        return min(e[i] // mu[i] for i in self._support)

    def is_normal(self, f: Polynomial) -> bool:
        if self.rule is None:
            return True
        return all(self._times(e) == 0 for e in f.terms)

    def reduce(self, f: Polynomial) -> Polynomial:
        """Normal form polynomial of f (f must live in this algebra's universe)."""
        if f.vars != self.vars:
            f = f.embed(self.vars)
        if self.rule is None or self.is_normal(f):
            return f
        p = self.p
        mu = self.rule
        out: dict = {}
        work = dict(f.terms)
        while work:
            e, c = work.popitem()
            k = self._times(e)
            if k == 0:
                _add_into(out, e, c, p)
                continue
            base = tuple(a - k * b for a, b in zip(e, mu))
            for e2, c2 in self._rule_power(k).items():
                _add_into(work, tuple([a + b for a, b in zip(base, e2)]), c * c2, p)
        return Polynomial(self.field, self.vars, out, _trusted=True)

    def normalize(self, f: Polynomial) -> AlgebraElement:
        return AlgebraElement(self, self.reduce(f))

    def reduce_randomly(self, f: Polynomial, rng: random.Random) -> Polynomial:
        """Normal form via single ``mu -> -tail`` steps at randomly chosen monomials.

        Exists to test that the result is independent of the rewriting order.
        """
        if f.vars != self.vars:
            f = f.embed(self.vars)
        if self.rule is None:
            return f
        p = self.p
        mu = self.rule
        step = self._rule_power(1)
        cur = dict(f.terms)
        while True:
            reducible = sorted(e for e in cur if self._times(e))
            if not reducible:
                break
            e = rng.choice(reducible)
            c = cur.pop(e)
            base = tuple(a - b for a, b in zip(e, mu))
            for e2, c2 in step.items():
                _add_into(cur, tuple(a + b for a, b in zip(base, e2)), c * c2, p)
        return Polynomial(self.field, self.vars, cur, _trusted=True)

    def normal_monomials(self, bound: int, weights: Mapping[str, int] | None = None) -> list[tuple[int, ...]]:
        """Normal-form monomials in the generators with degree <= bound.

        Degree is total degree, or the weighted degree when ``weights`` (with
        strictly positive generator weights) is given.  Ordered by degree
        descending, then lex descending.
        """
        n = len(self.generators)
        w = [1] * n if weights is None else [weights[g] for g in self.generators]
        if any(k <= 0 for k in w):
            raise InvalidParameters("weighted monomial enumeration needs positive weights")
        out = []

        def rec(i, prefix, used):
            if i == n:
                out.append(tuple(prefix))
                return
            k = 0
            while used + k * w[i] <= bound:
                rec(i + 1, prefix + [k], used + k * w[i])
                k += 1

        rec(0, [], 0)
        pad = (0,) * len(self.params)
        mons = [e + pad for e in out]
        if self.rule is not None:
            mons = [e for e in mons if self._times(e) == 0]
        mons.sort(key=lambda e: (sum(a * b for a, b in zip(e, w)), e), reverse=True)
        return mons

    # -- substitution ---------------------------------------------------------

    def substitute(self, f: Polynomial, mapping: Mapping[str, object]) -> AlgebraElement:
        """Image of ``f`` under ``var -> mapping[var]`` as an element of this algebra.

        Variables of ``f`` missing from ``mapping`` must be variables of this
        algebra and map to themselves.
        """
        images = {v: self(val) for v, val in mapping.items()}
        mapped_idx = [i for i, v in enumerate(f.vars) if v in images]
        fixed = []
        for i, v in enumerate(f.vars):
            if v not in images:
                if v not in self.vars:
                    if any(e[i] for e in f.terms):
                        raise UnknownVariable(f"{v} has no image in {self!r}")
                    continue
                fixed.append((i, self.vars.index(v)))
        powers: dict[tuple[int, int], Polynomial] = {}
        products: dict[tuple, Polynomial] = {}
        n = len(self.vars)
        p = self.p
        acc: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                if k == 1:
                    powers[key] = images[f.vars[i]].nf
                else:
                    half = power(i, k // 2)
                    sq = self.reduce(half * half)
                    powers[key] = self.reduce(sq * powers[(i, 1)]) if k % 2 else sq
            return powers[key]

        for e, c in f.terms.items():
            sub = tuple(e[i] for i in mapped_idx)
            prod = products.get(sub)
            if prod is None:
                prod = Polynomial.constant(1, self.field, self.vars)
                for i, k in zip(mapped_idx, sub):
                    if k:
                        prod = self.reduce(prod * power(i, k))
                products[sub] = prod
            shift = [0] * n
            for i, j in fixed:
                shift[j] += e[i]
            for e2, c2 in prod.terms.items():
                _add_into(acc, tuple([a + b for a, b in zip(e2, shift)]), c * c2, p)
        return self.normalize(Polynomial(self.field, self.vars, acc, _trusted=True))

    # -- helpers ---------------------------------------------------------------

    def random_element(self, rng: random.Random, terms: int = 4, degree: int = 4, params: bool = False) -> AlgebraElement:
        n = len(self.generators) + (len(self.params) if params else 0)
        acc = {}
        for _ in range(terms):
            d = rng.randint(0, degree)
            e = [0] * len(self.vars)
            for _ in range(d):
                e[rng.randrange(n)] += 1
            acc[tuple(e)] = rng.randrange(1, self.p) if self.p > 2 else 1
        return self.normalize(Polynomial(self.field, self.vars, acc))


def _pick_rule(relation: Polynomial, generators) -> tuple:
    n = len(generators)
    for mu in relation.monomials():
        if not any(mu[:n]) or any(mu[n:]):
            continue
        support = [i for i, k in enumerate(mu) if k]
        w = sum(mu[i] for i in support)
        if all(sum(e[i] for i in support) < w for e in relation.terms if e != mu):
            return mu
    raise UnsupportedRelation(f"no admissible rule monomial in {format_poly(relation)}")


class AlgebraElement:
    """An element of a PresentedAlgebra, held in normal form."""

    __slots__ = ("owner", "nf")

    def __init__(self, owner: PresentedAlgebra, nf: Polynomial):
        self.owner = owner
        self.nf = nf

    def _other(self, other):
        if isinstance(other, AlgebraElement):
            if other.owner is not self.owner and other.owner != self.owner:
                raise OwnerMismatch(f"{other.owner!r} vs {self.owner!r}")
            return other.nf
        if isinstance(other, (int, FieldElement)):
            return Polynomial.constant(int(other), self.owner.field, self.owner.vars)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return AlgebraElement(self.owner, self.nf + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return AlgebraElement(self.owner, self.nf - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return AlgebraElement(self.owner, o - self.nf)

    def __neg__(self):
        return AlgebraElement(self.owner, -self.nf)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.owner.normalize(self.nf * o)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.owner.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return self.nf.is_zero()

    def __bool__(self):
        return not self.nf.is_zero()

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return equals(self, other)
        if isinstance(other, (int, FieldElement)):
            return self.nf == other
        return NotImplemented

    def __hash__(self):
        return hash(self.nf)

    def uses(self, var: str) -> bool:
        return var in self.nf.support_vars()

    def __str__(self):
        return format_poly(self.nf)

    def __repr__(self):
        return f"AlgebraElement({format_poly(self.nf)!r})"


# -- operations ------------------------------------------------------------------


def normalize(f: Polynomial, A: PresentedAlgebra) -> AlgebraElement:
    return A.normalize(f)


def equals(a: AlgebraElement, b: AlgebraElement) -> bool:
    """Structural comparison of normal forms (sound by uniqueness of normal forms)."""
    if a.owner is not b.owner and a.owner != b.owner:
        raise OwnerMismatch(f"{a.owner!r} vs {b.owner!r}")
    return a.nf.terms == b.nf.terms


@dataclass(frozen=True)
class SubringProfile:
    occurs: dict
    y_free: bool

    def within(self, names: Sequence[str]) -> bool:
        return all(not used or v in names for v, used in self.occurs.items())

    def to_json(self) -> dict:
        return {"occurs": dict(self.occurs), "y_free": self.y_free}


def subring_profile(a: AlgebraElement, y: str = "y") -> SubringProfile:
    """Which variables occur in nf(a); ``y_free`` iff a lies in k[other generators]."""
    used = a.nf.support_vars()
    occurs = {v: v in used for v in a.owner.vars}
    return SubringProfile(occurs, y not in used)


def _coerce_images(
    target: PresentedAlgebra, images: Mapping[str, object], source: PresentedAlgebra | None = None
) -> dict[str, AlgebraElement]:
    """Images as target elements; source generators without an image go to the
    same-named target generator when there is one."""
    out = {g: target(v) for g, v in images.items()}
    if source is not None:
        for g in source.generators:
            if g not in out and g in target.generators:
                out[g] = target.gen(g)
    return out


def verify_hom(source: PresentedAlgebra, target: PresentedAlgebra, images: Mapping[str, object]) -> bool:
    """True iff the source relation maps to 0 under the generator images.

    Source parameters map to the same-named target parameters; generators
    left out of ``images`` map to the same-named target generator.
    """
    images = _coerce_images(target, images, source)
    missing = [g for g in source.generators if g not in images]
    if missing:
        raise UnknownVariable(f"no image for generators {missing}")
    if source.rule is None:
        return True
    rel = source.relation_over_generators()
    return target.substitute(rel, images).is_zero()


def compose_images(
    source: PresentedAlgebra,
    middle: PresentedAlgebra,
    target: PresentedAlgebra,
    first: Mapping[str, object],
    second: Mapping[str, object],
) -> dict[str, AlgebraElement]:
    """Generator images of ``second o first``: source -> middle -> target."""
    first = _coerce_images(middle, first, source)
    second = _coerce_images(target, second, middle)
    return {g: target.substitute(first[g].nf, second) for g in source.generators}


def verify_isomorphism_pair(
    Aa: PresentedAlgebra,
    Bb: PresentedAlgebra,
    fwd: Mapping[str, object],
    bwd: Mapping[str, object],
) -> bool:
    """Both maps are homomorphisms and both composites fix every generator."""
    try:
        if not (verify_hom(Aa, Bb, fwd) and verify_hom(Bb, Aa, bwd)):
            return False
        there_back = compose_images(Aa, Bb, Aa, fwd, bwd)
        back_there = compose_images(Bb, Aa, Bb, bwd, fwd)
    except UnknownVariable:
        return False
    return all(there_back[g] == Aa.gen(g) for g in Aa.generators) and all(
        back_there[g] == Bb.gen(g) for g in Bb.generators
    )


# -- the Asanuma family ---------------------------------------------------------


@dataclass(frozen=True)
class AsanumaParams:
    """Parameters of k[X,Y,Z,T]/(X^m Y + Z^{p^e} + T + T^{sp}), s = q p^r with p not dividing q."""

    p: int
    m: int
    e: int
    s: int
    q: int = dc_field(init=False)
    r: int = dc_field(init=False)

    def __post_init__(self):
        PrimeField(self.p)
        for name in ("m", "e", "s"):
            if getattr(self, name) < 1:
                raise InvalidParameters(f"{name} must be a positive integer")
        q, r = self.s, 0
        while q % self.p == 0:
            q //= self.p
            r += 1
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        pe, sp = self.p**self.e, self.s * self.p
        if sp % pe == 0:
            raise InvalidParameters(f"p^e = {pe} divides sp = {sp}")
        if pe % sp == 0:
            raise InvalidParameters(f"sp = {sp} divides p^e = {pe}")
        if self.m > 1:
            # both follow from the two divisibility conditions
            assert self.q > 1 and self.e - self.r - 1 > 0

    @property
    def pe(self) -> int:
        return self.p**self.e

    @property
    def sp(self) -> int:
        return self.s * self.p

    def relation_text(self, linear_t: bool = True) -> str:
        mid = " + t" if linear_t else ""
        return f"x^{self.m}*y + z^{self.pe}{mid} + t^{self.sp}".replace("x^1*", "x*")

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "e": self.e, "s": self.s}


def asanuma_algebra(params: AsanumaParams, extra: Sequence[str] = ("U", "V")) -> PresentedAlgebra:
    """A = F_p[x,y,z,t]/(x^m y + z^{p^e} + t + t^{sp})."""
    return PresentedAlgebra(
        params.p, ("x", "y", "z", "t"), params.relation_text(True), {"x": params.m, "y": 1}, extra, params
    )


def asanuma_gr_algebra(params: AsanumaParams, extra: Sequence[str] = ("U", "V")) -> PresentedAlgebra:
    """B = F_p[x,y,z,t]/(x^m y + z^{p^e} + t^{sp}), the graded ring without the linear t."""
    return PresentedAlgebra(
        params.p, ("x", "y", "z", "t"), params.relation_text(False), {"x": params.m, "y": 1}, extra
    )


def polynomial_ring(p: int, generators: Sequence[str], params: Sequence[str] = ("U", "V")) -> PresentedAlgebra:
    return PresentedAlgebra(p, generators, None, None, params)
