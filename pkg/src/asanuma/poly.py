"""Sparse multivariate polynomials over F_p.

A polynomial lives in a fixed variable universe (an ordered tuple of names)
and stores ``{exponent tuple: coefficient}`` with coefficients as canonical
residues in ``[1, p)``.  Monomials are exponent tuples aligned with the
universe; zero exponents are simply zeros in the tuple.

Canonical printing is lexicographic-descending in the declared variable order,
so ``x^2*y + z^4 + t^6 + t`` for universe ``(x, y, z, t)``.
"""

from __future__ import annotations

import re
from collections.abc import Mapping, Sequence

from .errors import (
    ExponentOverflow,
    FieldMismatch,
    MissingCoordinate,
    NotDivisible,
    PolySyntaxError,
    UnknownVariable,
    VariableMismatch,
)
from .field import ExtensionElement, FieldElement, PrimeField

MAX_EXPONENT = 2**31


def _add_into(acc: dict, exps: tuple, c: int, p: int) -> None:
    v = (acc.get(exps, 0) + c) % p
    if v:
        acc[exps] = v
    else:
        acc.pop(exps, None)


class Polynomial:
    __slots__ = ("field", "vars", "terms", "_hash")

    def __init__(self, field: PrimeField, vars: Sequence[str], terms: Mapping | None = None, *, _trusted=False):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "vars", tuple(vars))
        if _trusted:
            clean = terms
        else:
            p = field.p
            n = len(self.vars)
            clean = {}
            for exps, c in (terms or {}).items():
                exps = tuple(exps)
                if len(exps) != n:
                    raise VariableMismatch(f"exponent tuple {exps} does not match universe {self.vars}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                if any(e >= MAX_EXPONENT for e in exps):
                    raise ExponentOverflow(f"exponent in {exps} exceeds 2^31")
                c = int(c) % p
                if c:
                    _add_into(clean, exps, c, p)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (self.field, self.vars, self.terms))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field, vars) -> Polynomial:
        return cls(field, vars, {}, _trusted=True)

    @classmethod
    def constant(cls, c, field, vars) -> Polynomial:
        c = int(c) % field.p
        return cls(field, vars, {(0,) * len(vars): c} if c else {}, _trusted=True)

    @classmethod
    def variable(cls, name: str, field, vars) -> Polynomial:
        vars = tuple(vars)
        if name not in vars:
            raise UnknownVariable(name)
        exps = tuple(1 if v == name else 0 for v in vars)
        return cls(field, vars, {exps: 1}, _trusted=True)

    @classmethod
    def monomial(cls, exps, field, vars, c=1) -> Polynomial:
        return cls(field, vars, {tuple(exps): c})

    def _new(self, terms) -> Polynomial:
        return Polynomial(self.field, self.vars, terms, _trusted=True)

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self) -> int:
        return self.terms.get((0,) * len(self.vars), 0)

    def coeff(self, monomial) -> FieldElement:
        if isinstance(monomial, Mapping):
            monomial = self.exponents(monomial)
        return FieldElement(self.terms.get(tuple(monomial), 0), self.field)

    def exponents(self, mapping: Mapping[str, int]) -> tuple[int, ...]:
        for name in mapping:
            if name not in self.vars:
                raise UnknownVariable(name)
        return tuple(mapping.get(v, 0) for v in self.vars)

    def monomials(self) -> list[tuple[int, ...]]:
        """Exponent tuples in canonical (lex-descending) order."""
        return sorted(self.terms, reverse=True)

    def items(self):
        return [(e, self.terms[e]) for e in self.monomials()]

    def total_degree(self) -> int:
        """Largest total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: str) -> int:
        i = self._index(var)
        return max((e[i] for e in self.terms), default=-1)

    def support_vars(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(v for v, k in zip(self.vars, e) if k)
        return used

    def leading_term(self) -> tuple[tuple[int, ...], int]:
        e = max(self.terms)
        return e, self.terms[e]

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise UnknownVariable(var) from None

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: Polynomial) -> None:
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if other.vars != self.vars:
            raise VariableMismatch(f"universe {self.vars} vs {other.vars}")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return Polynomial.constant(other, self.field, self.vars)
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return Polynomial.constant(other.value, self.field, self.vars)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            a, b = dict(other.terms), self.terms
        else:
            a, b = dict(self.terms), other.terms
        p = self.field.p
        for e, c in b.items():
            _add_into(a, e, c, p)
        return self._new(a)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return self._new({e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if not self.terms or not other.terms:
            return self._new({})
        if self.total_degree() + other.total_degree() >= MAX_EXPONENT:
            raise ExponentOverflow("product degree exceeds 2^31")
        p = self.field.p
        acc: dict = {}
        get = acc.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple([a + b for a, b in zip(e1, e2)])
                acc[e] = (get(e, 0) + c1 * c2) % p
        return self._new({e: c for e, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        if n and self.total_degree() * n >= MAX_EXPONENT:
            raise ExponentOverflow("power degree exceeds 2^31")
        result = Polynomial.constant(1, self.field, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: int) -> Polynomial:
        p = self.field.p
        c %= p
        if not c:
            return self._new({})
        return self._new({e: v * c % p for e, v in self.terms.items()})

    def shift(self, exps: tuple[int, ...], c: int = 1) -> Polynomial:
        """Multiply by the monomial ``c * X^exps``."""
        p = self.field.p
        c %= p
        if not c:
            return self._new({})
        return self._new({tuple([a + b for a, b in zip(e, exps)]): v * c % p for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return other.field == self.field and other.vars == self.vars and other.terms == self.terms
        if isinstance(other, (int, FieldElement)):
            return self == Polynomial.constant(int(other), self.field, self.vars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.field, self.vars, frozenset(self.terms.items()))))
        return self._hash

    # -- universe changes --------------------------------------------------

    def embed(self, vars: Sequence[str]) -> Polynomial:
        """Re-express in a different universe containing every used variable."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        index = {v: i for i, v in enumerate(vars)}
        for v in self.support_vars():
            if v not in index:
                raise UnknownVariable(f"{v} not in target universe {vars}")
        pos = [(index[v], i) for i, v in enumerate(self.vars) if v in index]
        n = len(vars)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for j, i in pos:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return Polynomial(self.field, vars, out, _trusted=True)

    def rename(self, mapping: Mapping[str, str]) -> Polynomial:
        return Polynomial(self.field, [mapping.get(v, v) for v in self.vars], self.terms, _trusted=True)

    def split_by(self, var: str) -> dict[int, Polynomial]:
        """Coefficients with respect to ``var``: ``{k: coefficient of var^k}``."""
        i = self._index(var)
        groups: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            groups.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: self._new(t) for k, t in sorted(groups.items())}

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, vars={self.vars}, p={self.field.p})"


# -- module-level operations ---------------------------------------------------


def mul(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check(g)
    return f * g


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """Return q with f = q*g, or raise NotDivisible.

    Leading-term division in lex order; any leading term of the running
    remainder that the leading term of g does not divide proves g does not
    divide f.
    """
    f._check(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    p = f.field.p
    lg, cg = g.leading_term()
    inv = pow(cg, -1, p)
    rem = dict(f.terms)
    quot: dict = {}
    while rem:
        lr = max(rem)
        if any(a < b for a, b in zip(lr, lg)):
            raise NotDivisible(f"{format_poly(g)} does not divide {format_poly(f)}")
        qe = tuple(a - b for a, b in zip(lr, lg))
        qc = rem[lr] * inv % p
        quot[qe] = qc
        for e, c in g.terms.items():
            _add_into(rem, tuple(a + b for a, b in zip(qe, e)), -qc * c, p)
    return Polynomial(f.field, f.vars, quot, _trusted=True)


def partial_derivative(f: Polynomial, var: str) -> Polynomial:
    i = f._index(var)
    p = f.field.p
    out = {}
    for e, c in f.terms.items():
        k = e[i]
        v = c * k % p
        if v:
            out[e[:i] + (k - 1,) + e[i + 1:]] = v
    return f._new(out)


def evaluate(f: Polynomial, point: Mapping[str, object]):
    """Value of f at ``point`` (variable -> element of F_p or an extension).

    The result lives in the field of the extension coordinates when any are
    given, otherwise in F_p.  Only variables that actually occur are required.
    """
    target = f.field
    for val in point.values():
        if isinstance(val, ExtensionElement):
            target = val.field
            break
    coords = []
    for i, v in enumerate(f.vars):
        if any(e[i] for e in f.terms):
            if v not in point:
                raise MissingCoordinate(v)
            coords.append((i, target(point[v])))
    total = target(0)
    powers: dict = {}
    for e, c in f.terms.items():
        term = target(c)
        for i, val in coords:
            k = e[i]
            if k:
                key = (i, k)
                if key not in powers:
                    powers[key] = val**k
                term = term * powers[key]
        total = total + term
    return total


def format_poly(f: Polynomial) -> str:
    parts = []
    for e in f.monomials():
        c = f.terms[e]
        factors = []
        for v, k in zip(f.vars, e):
            if k == 1:
                factors.append(v)
            elif k:
                factors.append(f"{v}^{k}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts) or "0"


# -- parser --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(\^|\*|\+|-)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("var", m.group(2), start))
        elif m.group(3):
            tokens.append((m.group(3), m.group(3), start))
        else:
            raise PolySyntaxError(f"unexpected character {m.group(4)!r}", text, start)
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, vars, field):
        self.text = text
        self.vars = tuple(vars)
        self.index = {v: i for i, v in enumerate(self.vars)}
        self.field = field
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            expected = {"num": "integer", "var": "variable", "end": "end of input"}.get(kind, repr(kind))
            found = tok[1] or "end of input"
            raise PolySyntaxError(f"expected {expected}, found {found!r}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self):
        acc: dict = {}
        p = self.field.p
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        while True:
            exps, c = self.term()
            _add_into(acc, exps, sign * c, p)
            kind = self.peek()[0]
            if kind == "end":
                break
            if kind not in ("+", "-"):
                tok = self.peek()
                raise PolySyntaxError(f"expected '+', '-' or end, found {tok[1]!r}", self.text, tok[2])
            sign = -1 if self.take()[0] == "-" else 1
            if self.peek()[0] == "-":
                self.take()
                sign = -sign
        return Polynomial(self.field, self.vars, acc, _trusted=True)

    def term(self):
        exps = [0] * len(self.vars)
        c = 1
        kind = self.peek()[0]
        if kind == "num":
            c = int(self.take()[1])
            if self.peek()[0] != "*":
                return tuple(exps), c
            self.take("*")
        elif kind != "var":
            tok = self.peek()
            raise PolySyntaxError(f"expected a term, found {tok[1] or 'end of input'!r}", self.text, tok[2])
        self.factor(exps)
        while self.peek()[0] == "*":
            self.take()
            self.factor(exps)
        return tuple(exps), c

    def factor(self, exps):
        tok = self.take("var")
        name = tok[1]
        if name not in self.index:
            raise UnknownVariable(f"{name!r} (position {tok[2]}) not among {list(self.vars)}")
        k = 1
        if self.peek()[0] == "^":
            self.take()
            k = int(self.take("num")[1])
        j = self.index[name]
        exps[j] += k
        if exps[j] >= MAX_EXPONENT:
            raise ExponentOverflow(f"exponent of {name} exceeds 2^31")


def parse_poly(text: str, vars: Sequence[str], field: PrimeField) -> Polynomial:
    """Parse ``text`` in the universe ``vars``; integers are reduced mod p.

    Grammar: ``poly := term (('+'|'-') term)*``, ``term := coeff ('*' factor)*
    | factor ('*' factor)*``, ``factor := var ('^' uint)?``; a unary minus may
    lead any term.
    """
    if isinstance(field, int):
        field = PrimeField(field)
    return _Parser(text, vars, field).parse()
