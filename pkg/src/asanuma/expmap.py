"""Exponential maps (G_a-actions) given by generator images in A[U].

A map phi: A -> A[U] is stored by the images of the generators.  It is an
exponential map when it respects the relation, reduces to the identity at
U = 0, and satisfies phi_V(phi_U(g)) = phi_{V+U}(g) in A[V,U] for every
generator g (phi_V acts on coefficients and fixes U).
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .algebra import (
    AlgebraElement,
    PresentedAlgebra,
    polynomial_ring,
    subring_profile,
)
from .errors import (
    ConstructionFailed,
    DegreeBoundTooLarge,
    FamilyUnavailable,
    InducedMapTrivial,
    InvalidParameters,
    NotDivisible,
    UnverifiedMap,
    VerificationFailed,
)
from .grading import WeightGrading, gr_presentation, weight_degree
from .linalg import Echelon, nullspace
from .poly import Polynomial, exact_divide, parse_poly

MAX_MONOMIALS = 10**5


@dataclass
class ExpStatus:
    state: str = "unverified"  # unverified | verified | refuted
    axiom: str | None = None  # relation | identity | composition
    generator: str | None = None
    reason: str = ""

    @property
    def verified(self) -> bool:
        return self.state == "verified"

    def to_json(self) -> dict:
        return {
            "status": self.state,
            "failing_axiom": self.axiom,
            "generator": self.generator,
            "reason": self.reason,
        }


class ExpMap:
    """Candidate exponential map; generators without an image are fixed."""

    def __init__(self, algebra: PresentedAlgebra, images: Mapping[str, object], u: str = "U", v: str = "V", name: str = ""):
        A = algebra.with_params([u, v])
        self.algebra = A
        self.u, self.v = u, v
        self.name = name
        self.images: dict[str, AlgebraElement] = {}
        for g in A.generators:
            img = A(images[g]) if g in images else A.gen(g)
            if img.uses(v):
                raise InvalidParameters(f"image of {g} must not involve {v}")
            self.images[g] = img
        unknown = set(images) - set(A.generators)
        if unknown:
            raise InvalidParameters(f"images given for non-generators {sorted(unknown)}")
        self.status = ExpStatus()

    def image(self, g: str) -> AlgebraElement:
        return self.images[g]

    def is_trivial(self) -> bool:
        return all(self.images[g] == self.algebra.gen(g) for g in self.algebra.generators)

    def u_coefficients(self, g: str) -> dict[int, AlgebraElement]:
        """{i: a_i} with phi(g) = sum_i a_i U^i."""
        A = self.algebra
        return {k: AlgebraElement(A, c) for k, c in self.images[g].nf.split_by(self.u).items()}

    def to_json(self) -> dict:
        return {g: str(img) for g, img in self.images.items()}

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        body = ", ".join(f"{g} -> {img}" for g, img in self.images.items() if img != self.algebra.gen(g))
        return f"ExpMap({label}{body or 'identity'}; {self.status.state})"


# -- applying and verifying ------------------------------------------------------


def apply(phi: ExpMap, a) -> AlgebraElement:
    """phi(a) in A[U]; ``a`` must not involve U or V."""
    A = phi.algebra
    a = A(a)
    if a.uses(phi.u) or a.uses(phi.v):
        raise InvalidParameters(f"apply expects an element of A, got {a}")
    return A.substitute(a.nf, phi.images)


def _relation_residual(A: PresentedAlgebra, images) -> AlgebraElement:
    if A.rule is None:
        return A.zero()
    return A.substitute(A.relation_over_generators(), images)


def _identity_residual(A: PresentedAlgebra, images, g: str, u: str) -> AlgebraElement:
    return A.substitute(images[g].nf, {u: A.zero()}) - A.gen(g)


def _composition_residual(A: PresentedAlgebra, images, g: str, u: str, v: str, images_v=None) -> AlgebraElement:
    if images_v is None:
        images_v = {h: A.substitute(images[h].nf, {u: A.gen(v)}) for h in A.generators}
    lhs = A.substitute(images[g].nf, images_v)
    rhs = A.substitute(images[g].nf, {u: A.gen(v) + A.gen(u)})
    return lhs - rhs


def check_exponential(phi: ExpMap) -> ExpStatus:
    """Verify relation preservation and both exponential-map axioms symbolically."""
    A, imgs, u, v = phi.algebra, phi.images, phi.u, phi.v
    status = None
    if _relation_residual(A, imgs):
        status = ExpStatus("refuted", "relation", None, "the relation does not map to 0")
    if status is None:
        for g in A.generators:
            if _identity_residual(A, imgs, g, u):
                status = ExpStatus("refuted", "identity", g, f"image of {g} at {u}=0 is not {g}")
                break
    if status is None:
        images_v = {h: A.substitute(imgs[h].nf, {u: A.gen(v)}) for h in A.generators}
        for g in A.generators:
            if _composition_residual(A, imgs, g, u, v, images_v):
                status = ExpStatus("refuted", "composition", g, f"phi_V phi_U({g}) != phi_(V+U)({g})")
                break
    if status is None:
        status = ExpStatus("verified")
    phi.status = status
    return status


def _require_verified(phi: ExpMap) -> None:
    if not phi.status.verified:
        raise UnverifiedMap(f"map is {phi.status.state}; run check_exponential first")


def is_invariant(phi: ExpMap, a) -> bool:
    _require_verified(phi)
    a = phi.algebra(a)
    return apply(phi, a) == a


def is_nontrivial(phi: ExpMap) -> bool:
    return not phi.is_trivial()


# -- invariants ------------------------------------------------------------------


@dataclass
class InvariantBasis:
    degree_bound: int
    basis: list
    monomials: list
    weighted: bool = False

    def __len__(self):
        return len(self.basis)

    def to_json(self) -> dict:
        return {
            "degree_bound": self.degree_bound,
            "weighted": self.weighted,
            "monomial_count": len(self.monomials),
            "basis": [str(b) for b in self.basis],
            "y_free": all(subring_profile(b).y_free for b in self.basis),
        }


def monomial_images(phi: ExpMap, monomials: Sequence[tuple]) -> dict[tuple, Polynomial]:
    """phi(mu) for each normal-form monomial mu, built by repeated products."""
    A = phi.algebra
    n = len(A.generators)
    cache: dict[tuple, Polynomial] = {(0,) * len(A.vars): Polynomial.constant(1, A.field, A.vars)}

    def img(e):
        got = cache.get(e)
        if got is None:
            i = next(j for j in range(n) if e[j])
            parent = e[:i] + (e[i] - 1,) + e[i + 1:]
            got = A.reduce(img(parent) * phi.images[A.generators[i]].nf)
            cache[e] = got
        return got

    return {e: img(e) for e in monomials}


def invariant_basis(phi: ExpMap, D: int, grading: WeightGrading | None = None) -> InvariantBasis:
    """Basis (reduced echelon over F_p) of the invariants spanned by normal-form monomials of degree <= D."""
    _require_verified(phi)
    A = phi.algebra
    n = len(A.generators)
    if grading is None and comb(n + D, D) > MAX_MONOMIALS:
        raise DegreeBoundTooLarge(f"more than {MAX_MONOMIALS} monomials of degree <= {D}")
    weights = grading.resolve(A) if grading is not None else None
    mons = A.normal_monomials(D, weights)
    if len(mons) > MAX_MONOMIALS:
        raise DegreeBoundTooLarge(f"{len(mons)} monomials exceed the cap of {MAX_MONOMIALS}")
    images = monomial_images(phi, mons)
    p = A.p
    row_of: dict[tuple, int] = {}
    rows: list[dict[int, int]] = []
    for j, mu in enumerate(mons):
        diff = dict(images[mu].terms)
        diff[mu] = (diff.get(mu, 0) - 1) % p
        for e, c in diff.items():
            if not c:
                continue
            r = row_of.get(e)
            if r is None:
                r = row_of[e] = len(rows)
                rows.append({})
            rows[r][j] = c
    vectors = nullspace(rows, len(mons), p)
    basis = [
        AlgebraElement(A, Polynomial(A.field, A.vars, {mons[j]: c for j, c in vec.items()}))
        for vec in vectors
    ]
    return InvariantBasis(D, basis, mons, grading is not None)


# -- induced map on gr ---------------------------------------------------------------


def induce_on_gr(phi: ExpMap, W: WeightGrading) -> ExpMap:
    """The map induced on gr(A) by keeping, per generator, the top-weight U-terms.

    U gets weight -d with d = max (deg a_i - deg g)/i over the U^i-coefficients
    a_i of the generator images; the grading is scaled first if d is not an
    integer.  The result is re-verified; ``shift`` and ``grading`` record d and
    the (possibly scaled) grading used.
    """
    _require_verified(phi)
    if phi.is_trivial():
        raise InducedMapTrivial("the identity map induces the identity on gr")
    A = phi.algebra
    coeffs = {g: {i: a for i, a in phi.u_coefficients(g).items() if i > 0} for g in A.generators}
    weights = W.resolve(A)
    d = max(
        Fraction(weight_degree(a, W) - weights[g], i)
        for g in A.generators
        for i, a in coeffs[g].items()
    )
    if d.denominator != 1:
        W = W.scaled(d.denominator)
        weights = W.resolve(A)
        d = d * d.denominator
    d = int(d)
    gp = gr_presentation(A, W)
    G = gp.algebra
    U = G.gen(phi.u)
    images = {}
    for g in A.generators:
        img = G.gen(g)
        for i, a in coeffs[g].items():
            if weight_degree(a, W) == weights[g] + i * d:
                img = img + gp.lead(a) * U**i
        images[g] = img
    induced = ExpMap(G, images, phi.u, phi.v, name=f"{phi.name}-bar" if phi.name else "")
    induced.shift = d
    induced.grading = W
    induced.presentation = gp
    if induced.is_trivial():
        raise InducedMapTrivial("induced map on gr is the identity")
    status = check_exponential(induced)
    if not status.verified:
        raise VerificationFailed(f"induced map failed verification: {status.reason}")
    return induced


@dataclass
class ContainmentReport:
    checked: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"checked": self.checked, "passed": self.passed, "failures": self.failures}


def check_lead_containment(phi: ExpMap, induced: ExpMap, basis: InvariantBasis) -> ContainmentReport:
    """Every rho(b), b in the invariant basis of phi, is invariant under the induced map."""
    gp = induced.presentation
    failures = []
    for b in basis.basis:
        lead = gp.lead(b)
        if not is_invariant(induced, lead):
            failures.append(str(b))
    return ContainmentReport(len(basis.basis), failures)


# -- concrete families -------------------------------------------------------------


def translation_maps(n: int, p: int = 2) -> list[ExpMap]:
    """X_i -> X_i + U on F_p[X_1..X_n], each verified."""
    if n < 1:
        raise InvalidParameters("n must be >= 1")
    R = polynomial_ring(p, [f"X{i}" for i in range(1, n + 1)])
    maps = []
    for i in range(1, n + 1):
        phi = ExpMap(R, {f"X{i}": f"X{i} + U"}, name=f"translate-X{i}")
        check_exponential(phi)
        maps.append(phi)
    return maps


_FAMILY_VARS = {
    "phi1": ("y", "z"),
    "phi2": ("y", "t"),
    "phi3": ("x", "z"),
    "phi4": ("x", "t"),
}


def asanuma_maps(A: PresentedAlgebra, family: str, parameter=1) -> ExpMap:
    """Explicit exponential maps on x^m y + z^{p^e} + t + t^{sp}.

    phi1 (m = 1): t -> t + y f U, x -> x - f U - ((t + y f U)^{sp} - t^{sp})/y, f in k[y,z]
    phi2 (m = 1): z -> z + y g U, x -> x - y^{p^e-1} g^{p^e} U^{p^e}, g in k[y,t]
    phi3: t -> t + x^m c U, y -> y - c U - ((t + x^m c U)^{sp} - t^{sp})/x^m, c in k[x,z]
    phi4: z -> z + x^m c U, y -> y - x^{m(p^e-1)} c^{p^e} U^{p^e}, c in k[x,t]
    """
    P = A.asanuma
    if P is None:
        raise FamilyUnavailable("the explicit families need an algebra built from AsanumaParams")
    family = family.lower().replace("φ", "phi").replace("_", "")
    if family not in _FAMILY_VARS:
        raise FamilyUnavailable(f"unknown family {family!r}; expected one of {sorted(_FAMILY_VARS)}")
    if family in ("phi1", "phi2") and P.m != 1:
        raise FamilyUnavailable(f"{family} needs m = 1 (got m = {P.m})")
    A = A.with_params(["U", "V"])
    F, vars = A.field, A.vars
    if isinstance(parameter, str):
        c = parse_poly(parameter, A.generators, F)
    elif isinstance(parameter, Polynomial):
        c = parameter.embed(A.generators)
    else:
        c = Polynomial.constant(int(parameter), F, A.generators)
    allowed = _FAMILY_VARS[family]
    if not c.support_vars() <= set(allowed):
        raise FamilyUnavailable(f"{family} parameter must lie in k[{', '.join(allowed)}], got {c}")
    c = c.embed(vars)

    def var(name):
        return Polynomial.variable(name, F, vars)

    x, y, z, t, U = (var(n) for n in ("x", "y", "z", "t", "U"))
    pe, sp = P.pe, P.sp
    try:
        if family == "phi1":
            moved = t + y * c * U
            images = {"t": moved, "x": x - c * U - exact_divide(moved**sp - t**sp, y)}
        elif family == "phi2":
            images = {"z": z + y * c * U, "x": x - y ** (pe - 1) * c**pe * U**pe}
        elif family == "phi3":
            xm = x**P.m
            moved = t + xm * c * U
            images = {"t": moved, "y": y - c * U - exact_divide(moved**sp - t**sp, xm)}
        else:
            images = {"z": z + x**P.m * c * U, "y": y - x ** (P.m * (pe - 1)) * c**pe * U**pe}
    except NotDivisible as exc:
        raise ConstructionFailed(f"{family}: correction term is not divisible ({exc})") from exc
    phi = ExpMap(A, images, name=family)
    status = check_exponential(phi)
    if not status.verified:
        raise VerificationFailed(f"{family} failed {status.axiom}: {status.reason}")
    return phi


# -- Derksen-style report --------------------------------------------------------------


@dataclass
class DerksenReport:
    maps: int
    degree_bound: int
    basis_sizes: list = field(default_factory=list)
    recovered: dict = field(default_factory=dict)
    y_free: bool = True
    span_dimension: int = 0
    invariants: list = field(default_factory=list)

    @property
    def full(self) -> bool:
        return bool(self.recovered) and all(self.recovered.values())

    def to_json(self) -> dict:
        return {
            "maps": self.maps,
            "degree_bound": self.degree_bound,
            "basis_sizes": self.basis_sizes,
            "witnesses": self.recovered,
            "full": self.full,
            "y_free": self.y_free,
            "span_dimension": self.span_dimension,
            "invariants": self.invariants,
        }


def derksen_report(maps: Sequence[ExpMap], D: int) -> DerksenReport:
    """Which generators lie in the product closure (up to degree D) of the invariant bases."""
    if not maps:
        return DerksenReport(0, D)
    A = maps[0].algebra
    for phi in maps[1:]:
        if phi.algebra != A:
            raise InvalidParameters("all maps must act on the same algebra")
    bases = [invariant_basis(phi, D) for phi in maps]
    union = [b for basis in bases for b in basis.basis]

    col: dict[tuple, int] = {}

    def vec(a: AlgebraElement):
        return {col.setdefault(e, len(col)): c for e, c in a.nf.terms.items()}

    ech = Echelon(A.p)
    span: list[AlgebraElement] = []
    pending = list(union)
    while pending:
        a = pending.pop(0)
        if a.nf.total_degree() > D or not ech.add(vec(a)):
            continue
        for b in span + [a]:
            prod = a * b
            if prod and prod.nf.total_degree() <= D:
                pending.append(prod)
        span.append(a)
    recovered = {g: ech.contains(vec(A.gen(g))) for g in A.generators}
    y_free = all(subring_profile(b).y_free for b in union)
    return DerksenReport(
        len(maps), D, [len(b) for b in bases], recovered, y_free, ech.rank, sorted({str(b) for b in union})
    )
