"""Exhaustive search for exponential maps inside a coefficient template.

Each generator image is ``fixed part + sum_j c_j * m_j`` with unknown
coefficients ``c_j`` in F_p on user-chosen U-positive monomials ``m_j``.
Rather than verifying all p^n candidates one by one, the axioms are expanded
once with the ``c_j`` as symbols; every coefficient of the residuals becomes a
polynomial equation over F_p in the ``c_j`` (reduced by c^p = c).  A
depth-first enumeration of assignments in lexicographic order evaluates each
equation as soon as its last unknown is fixed, so a pruned subtree is a
proven-infeasible block of candidates.  Survivors are re-verified with
check_exponential.
"""

from __future__ import annotations

from collections.abc import Mapping

from .algebra import PresentedAlgebra
from .errors import InvalidParameters, SearchSpaceTooLarge, VerificationFailed
from .expmap import (
    ExpMap,
    _composition_residual,
    _identity_residual,
    _relation_residual,
    check_exponential,
)
from .poly import Polynomial, parse_poly

MAX_UNKNOWNS = 24


def _read_template(A: PresentedAlgebra, template: Mapping, u: str, v: str):
    entries = []
    for g in A.generators:
        entry = template.get(g)
        if entry is None:
            entries.append((g, A.gen(g).nf, []))
            continue
        if isinstance(entry, (list, tuple)):
            entry = {"unknown": list(entry)}
        fixed = A(entry.get("fixed", g)).nf
        support = []
        for text in entry.get("unknown", []):
            m = parse_poly(text, A.vars, A.field) if isinstance(text, str) else text
            if len(m) != 1:
                raise InvalidParameters(f"support entry {text!r} must be a single monomial")
            e = next(iter(m.terms))
            if e[A.vars.index(u)] == 0:
                raise InvalidParameters(f"support entry {text!r} must be divisible by {u}")
            if e[A.vars.index(v)]:
                raise InvalidParameters(f"support entry {text!r} must not involve {v}")
            if not A.is_normal(m):
                raise InvalidParameters(f"support entry {text!r} is not in normal form")
            support.append(Polynomial(A.field, A.vars, {e: 1}, _trusted=True))
        entries.append((g, fixed, support))
    extra = set(template) - set(A.generators)
    if extra:
        raise InvalidParameters(f"template names non-generators {sorted(extra)}")
    return entries


def _equations(residuals, offset: int, n: int, p: int):
    """Split residual polynomials into F_p-equations in the unknowns."""
    groups: dict[tuple, dict[tuple, int]] = {}
    for f in residuals:
        for e, c in f.terms.items():
            key = e[:offset] + e[offset + n:]
            unk = tuple(0 if k == 0 else (k - 1) % (p - 1) + 1 for k in e[offset:offset + n])
            eq = groups.setdefault(key, {})
            eq[unk] = (eq.get(unk, 0) + c) % p
    eqs = []
    for key in sorted(groups):
        terms = [(c, [(i, k) for i, k in enumerate(unk) if k]) for unk, c in sorted(groups[key].items()) if c]
        if terms:
            eqs.append(terms)
    return eqs


def _solve(eqs, n: int, p: int):
    """All assignments in F_p^n satisfying every equation, lexicographic order."""
    by_last: list[list] = [[] for _ in range(n)]
    for terms in eqs:
        last = max((i for _, mono in terms for i, _ in mono), default=-1)
        if last < 0:
            return []  # nonzero constant equation
        by_last[last].append(terms)

    vals = [0] * n
    out = []

    def ok(level):
        for terms in by_last[level]:
            total = 0
            for c, mono in terms:
                t = c
                for i, k in mono:
                    t = t * pow(vals[i], k, p)
                    if not t:
                        break
                total += t
            if total % p:
                return False
        return True

    def rec(level):
        if level == n:
            out.append(tuple(vals))
            return
        for a in range(p):
            vals[level] = a
            if ok(level):
                rec(level + 1)
        vals[level] = 0

    rec(0)
    return out


def search_expmaps(
    A: PresentedAlgebra,
    template: Mapping,
    constraints: Mapping | None = None,
    u: str = "U",
    v: str = "V",
) -> list[ExpMap]:
    """Every non-identity exponential map within the template, each verified.

    ``template`` maps a generator to ``{"fixed": text, "unknown": [monomial
    texts]}`` (or just the list, with the generator itself as fixed part);
    unlisted generators are fixed.  ``constraints={"invariant": ["y"]}``
    additionally requires the listed elements to be invariant.
    """
    A = A.with_params([u, v])
    entries = _read_template(A, template, u, v)
    n = sum(len(s) for _, _, s in entries)
    if n == 0:
        return []
    if n > MAX_UNKNOWNS:
        raise SearchSpaceTooLarge(f"{n} unknown coefficients exceed the exhaustive limit of {MAX_UNKNOWNS}")
    p = A.p
    names = [f"_c{i}" for i in range(n)]
    S = A.with_params(names)
    offset = len(A.vars)

    sym_images = {}
    j = 0
    for g, fixed, support in entries:
        f = fixed.embed(S.vars)
        for m in support:
            f = f + m.embed(S.vars) * Polynomial.variable(names[j], S.field, S.vars)
            j += 1
        sym_images[g] = S.normalize(f)

    residuals = [_relation_residual(S, sym_images).nf]
    residuals += [_identity_residual(S, sym_images, g, u).nf for g in S.generators]
    images_v = {h: S.substitute(sym_images[h].nf, {u: S.gen(v)}) for h in S.generators}
    residuals += [_composition_residual(S, sym_images, g, u, v, images_v).nf for g in S.generators]
    for text in (constraints or {}).get("invariant", []):
        a = S(text)
        residuals.append((S.substitute(a.nf, sym_images) - a).nf)

    solutions = _solve(_equations(residuals, offset, n, p), n, p)

    found = []
    for sol in solutions:
        images = {}
        j = 0
        for g, fixed, support in entries:
            f = fixed
            for m in support:
                f = f + m.scale(sol[j])
                j += 1
            images[g] = f
        phi = ExpMap(A, images, u, v, name="found")
        if phi.is_trivial():
            continue
        status = check_exponential(phi)
        if not status.verified:
            raise VerificationFailed(f"symbolic solution {sol} fails {status.axiom}: {status.reason}")
        found.append(phi)
    return found


def candidate_count(A: PresentedAlgebra, template: Mapping) -> int:
    n = 0
    for entry in template.values():
        n += len(entry) if isinstance(entry, (list, tuple)) else len(entry.get("unknown", []))
    return A.p**n


def y_fixed_template(unknown_degree2: tuple[str, ...] = ("z", "t")) -> dict:
    """y fixed; x, z, t get unknown coefficients on {1, x, z, t}*U, and also on
    {1, x, z, t}*U^2 for the generators in ``unknown_degree2``.

    The default has 20 unknowns (2^20 candidates over F_2); passing all of
    x, z, t gives the 24-unknown version.
    """
    coeffs = ("", "x*", "z*", "t*")
    template = {"y": {"fixed": "y", "unknown": []}}
    for g in ("x", "z", "t"):
        unknown = [f"{c}U" for c in coeffs]
        if g in unknown_degree2:
            unknown += [f"{c}U^2" for c in coeffs]
        template[g] = {"fixed": g, "unknown": unknown}
    return template
