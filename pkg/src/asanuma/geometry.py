"""Finite-field geometry: point counts, Jacobian singularity and smoothness certificates."""

from __future__ import annotations

from collections.abc import Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product

from .algebra import PresentedAlgebra
from .errors import NotAsanumaShape, TooLarge, UnsupportedRelation
from .field import ExtensionElement, field_of_order
from .poly import Polynomial, evaluate, format_poly, partial_derivative

MAX_BRUTE = 10**8


@dataclass(frozen=True)
class PointCountResult:
    q: int
    count: int
    method: str

    def to_json(self) -> dict:
        return {"q": self.q, "count": self.count, "method": self.method}


class _Tables:
    """F_q with elements coded 0..q-1 (enumeration order) and table arithmetic."""

    def __init__(self, q: int):
        F = field_of_order(q)
        self.q = q
        self.field = F
        els = F.elements()
        index = {self._code(a): i for i, a in enumerate(els)}
        self.add = [[index[self._code(a + b)] for b in els] for a in els]
        self.mul = [[index[self._code(a * b)] for b in els] for a in els]
        self.coerce = [index[self._code(F(c))] for c in range(F.p)]

    @staticmethod
    def _code(a) -> tuple:
        return a.coeffs if isinstance(a, ExtensionElement) else (a.value,)

    def powers(self, a: int, top: int) -> list[int]:
        out = [self.coerce[1]]
        for _ in range(top):
            out.append(self.mul[out[-1]][a])
        return out


def _compile(f: Polynomial, tables: _Tables):
    """Terms as (coefficient code, [(var index, exponent)]) for table evaluation."""
    return [
        (tables.coerce[c], [(i, k) for i, k in enumerate(e) if k])
        for e, c in sorted(f.terms.items())
    ]


def _eval(terms, point, tables: _Tables, pw) -> int:
    add, mul = tables.add, tables.mul
    total = 0
    for c, mono in terms:
        v = c
        for i, k in mono:
            v = mul[v][pw[i][point[i]][k]]
        total = add[total][v]
    return total


def _count_slice(args) -> int:
    f, q, first = args
    tables = _Tables(q)
    terms = _compile(f, tables)
    n = len(f.vars)
    degs = [max((e[i] for e in f.terms), default=0) for i in range(n)]
    pw = [[tables.powers(a, degs[i]) for a in range(q)] for i in range(n)]
    count = 0
    for rest in product(range(q), repeat=n - 1):
        if _eval(terms, (first,) + rest, tables, pw) == 0:
            count += 1
    return count


def _brute(f: Polynomial, q: int, jobs: int) -> int:
    n = len(f.vars)
    if n == 0:
        return 1 if f.is_zero() else 0
    tasks = [(f, q, a) for a in range(q)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return sum(ex.map(_count_slice, tasks))
    return sum(map(_count_slice, tasks))


def _split_shape(f: Polynomial):
    """Find f = c*x^m*y + g with g free of x and y; returns (x, y, g) or None."""
    for e, c in f.terms.items():
        used = [i for i, k in enumerate(e) if k]
        if len(used) != 2:
            continue
        for xi, yi in (used, used[::-1]):
            if e[yi] != 1:
                continue
            rest = {k: v for k, v in f.terms.items() if k != e}
            if all(k[xi] == 0 and k[yi] == 0 for k in rest):
                return xi, yi, Polynomial(f.field, f.vars, rest, _trusted=True)
    return None


def _stratified(f: Polynomial, q: int) -> int:
    shape = _split_shape(f)
    if shape is None:
        raise UnsupportedRelation(f"{format_poly(f)} does not have the shape c*x^m*y + g(other variables)")
    xi, yi, g = shape
    keep = [v for i, v in enumerate(f.vars) if i not in (xi, yi)]
    n = len(f.vars)
    # x != 0: y is determined by the rest; x = 0: g must vanish, y is free
    on_curve = _brute(g.embed(keep), q, 1) if keep else (1 if g.is_zero() else 0)
    return (q - 1) * q ** (n - 2) + q * on_curve


def count_points(rel: Polynomial, q: int, method: str = "brute", jobs: int = 1) -> PointCountResult:
    """Number of F_q-points of V(rel) in affine space over rel's variables."""
    field_of_order(q)  # validates q
    if q % rel.field.p:
        raise UnsupportedRelation(f"q = {q} is not a power of the characteristic {rel.field.p}")
    n = len(rel.vars)
    if method == "brute":
        if q**n > MAX_BRUTE:
            raise TooLarge(f"{q}^{n} points exceed the enumeration limit {MAX_BRUTE}")
        return PointCountResult(q, _brute(rel, q, jobs), "brute")
    if method == "stratified":
        if q ** max(n - 2, 0) > MAX_BRUTE:
            raise TooLarge(f"{q}^{n - 2} points exceed the enumeration limit {MAX_BRUTE}")
        return PointCountResult(q, _stratified(rel, q), "stratified")
    raise ValueError(f"unknown method {method!r}; expected brute or stratified")


def count_algebra_points(A: PresentedAlgebra, q: int, method: str = "brute", jobs: int = 1) -> PointCountResult:
    return count_points(A.relation_over_generators(), q, method, jobs)


@dataclass
class SingularityCertificate:
    polynomial: str
    point: dict
    value: object
    gradient: dict
    verdict: str

    @property
    def singular(self) -> bool:
        return self.verdict == "singular"

    def to_json(self) -> dict:
        return {
            "polynomial": self.polynomial,
            "point": {k: str(v) for k, v in self.point.items()},
            "value": str(self.value),
            "gradient": {k: str(v) for k, v in self.gradient.items()},
            "verdict": self.verdict,
        }


def singular_at(g: Polynomial, point: Mapping[str, object]) -> SingularityCertificate:
    """Jacobian test: singular iff g and all its first partials vanish at the point."""
    value = evaluate(g, point)
    support = [v for v in g.vars if v in g.support_vars()]
    gradient = {v: evaluate(partial_derivative(g, v), point) for v in support}
    singular = value.is_zero() and all(d.is_zero() for d in gradient.values())
    return SingularityCertificate(
        format_poly(g), dict(point), value, gradient, "singular" if singular else "smooth_at_P"
    )


@dataclass
class SmoothnessCertificate:
    relation: str
    variable: str
    derivative: str
    verdict: str = "smooth"

    def to_json(self) -> dict:
        return {
            "relation": self.relation,
            "variable": self.variable,
            "derivative": self.derivative,
            "verdict": self.verdict,
        }


def smoothness_certificate(A: PresentedAlgebra, var: str = "t") -> SmoothnessCertificate:
    """Proof of smoothness by a unit partial derivative of the relation.

    The partial in ``var`` being a nonzero constant means the gradient never
    vanishes, over any extension of the base field.
    """
    if A.relation is None:
        raise NotAsanumaShape("a polynomial ring has no relation to certify")
    rel = A.relation_over_generators()
    if var not in rel.vars:
        raise NotAsanumaShape(f"{var!r} is not a generator")
    d = partial_derivative(rel, var)
    if not (d.is_constant() and not d.is_zero()):
        raise NotAsanumaShape(
            f"d/d{var} of {format_poly(rel)} is {format_poly(d)}, not a nonzero constant"
        )
    return SmoothnessCertificate(format_poly(rel), var, format_poly(d))
