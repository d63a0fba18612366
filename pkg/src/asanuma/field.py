"""Exact arithmetic in prime fields F_p and their extensions F_{p^a}.

Prime-field scalars are canonical residues in ``[0, p)``.  Extension
elements are coefficient tuples ``(c_0, ..., c_{a-1})`` over the power basis
of a monic irreducible modulus.  Everything is immutable.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import DivisionByZero, FieldMismatch, InvalidParameters, NotIrreducible

MAX_PRIME = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The prime field F_p."""

    __slots__ = ("p",)

    degree = 1

    def __init__(self, p: int):
        p = int(p)
        if p > MAX_PRIME or not is_prime(p):
            raise InvalidParameters(f"characteristic must be a prime <= 2^31, got {p}")
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeField is immutable")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        return self.p

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self)

    @property
    def prime_field(self) -> PrimeField:
        return self

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value.field} element used in {self}")
            return value
        return FieldElement(int(value), self)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(v, self) for v in range(self.p)]

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def __reduce__(self):
        return (PrimeField, (self.p,))


class FieldElement:
    """An element of F_p stored as its least non-negative residue."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value % field.p)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def __reduce__(self):
        return (FieldElement, (self.value, self.field))

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field.p != self.field.p:
                raise FieldMismatch(f"cannot combine {self.field} and {other.field}")
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.value + v, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.value - v, self.field)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FieldElement(v - self.value, self.field)

    def __neg__(self):
        return FieldElement(-self.value, self.field)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.value * v, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return self * FieldElement(v, self.field).inverse()

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FieldElement(v, self.field) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FieldElement(pow(self.value, n, self.field.p), self.field)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise DivisionByZero(f"0 has no inverse in {self.field}")
        return FieldElement(pow(self.value, -1, self.field.p), self.field)

    def frobenius(self, i: int = 1) -> FieldElement:
        # x^p = x on F_p
        return self

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return other.field == self.field and other.value == self.value
        if isinstance(other, int):
            return (other - self.value) % self.field.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.value))

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"FieldElement({self.value}, {self.field!r})"


# -- univariate helpers over F_p, little-endian coefficient lists ------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _upoly_mulmod(a, b, mod, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _upoly_rem(prod, mod, p)


def _upoly_rem(a, mod, p):
    a = _trim(a)
    d = len(mod) - 1
    inv_lead = pow(mod[-1], -1, p)
    while len(a) - 1 >= d:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - d
        for i, mi in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _trim(a)
    return a


def _upoly_gcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _upoly_rem(a, b, p)
    return a


def _upoly_powmod(base, n, mod, p):
    result = [1]
    base = _upoly_rem(base, mod, p)
    while n:
        if n & 1:
            result = _upoly_mulmod(result, base, mod, p)
        base = _upoly_mulmod(base, base, mod, p)
        n >>= 1
    return result


def is_irreducible(modulus, p: int) -> bool:
    """Rabin-style test: no common factor with x^{p^i} - x for i <= deg/2."""
    f = _trim([c % p for c in modulus])
    a = len(f) - 1
    if a < 1:
        return False
    if a == 1:
        return True
    if f[0] == 0:
        return False
    for i in range(1, a // 2 + 1):
        h = _upoly_powmod([0, 1], p**i, f, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_upoly_gcd(f, h, p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """Monic irreducible of the given degree with the smallest integer code sum c_i p^i."""
    for code in range(p**degree):
        low = [(code // p**i) % p for i in range(degree)]
        f = low + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise NotIrreducible(f"no irreducible polynomial of degree {degree} over GF({p})")


class ExtensionField:
    """F_{p^a} = F_p[w]/(modulus) with a monic irreducible modulus.

    ``modulus`` may be a little-endian coefficient sequence, polynomial text in
    ``name`` (e.g. ``"w^2 + w + 1"``), or ``None`` for the smallest irreducible.
    """

    __slots__ = ("base", "degree", "modulus", "name")

    def __init__(self, p: int, degree: int, modulus=None, name: str = "w"):
        base = p if isinstance(p, PrimeField) else PrimeField(p)
        if degree < 1:
            raise InvalidParameters("extension degree must be >= 1")
        if modulus is None:
            mod = smallest_irreducible(base.p, degree)
        elif isinstance(modulus, str):
            mod = _parse_modulus(modulus, name, base)
        else:
            mod = tuple(int(c) % base.p for c in modulus)
        mod = tuple(_trim(mod))
        if len(mod) - 1 != degree or mod[-1] != 1:
            raise NotIrreducible(f"modulus must be monic of degree {degree}, got {mod}")
        if not is_irreducible(mod, base.p):
            raise NotIrreducible(f"modulus {mod} is reducible over {base}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "name", name)

    def __setattr__(self, name, value):
        raise AttributeError("ExtensionField is immutable")

    def __reduce__(self):
        return (ExtensionField, (self.base.p, self.degree, self.modulus, self.name))

    @property
    def p(self) -> int:
        return self.base.p

    characteristic = p

    @property
    def prime_field(self) -> PrimeField:
        return self.base

    @property
    def order(self) -> int:
        return self.base.p**self.degree

    @property
    def zero(self) -> ExtensionElement:
        return ExtensionElement((0,) * self.degree, self)

    @property
    def one(self) -> ExtensionElement:
        return self(1)

    @property
    def gen(self) -> ExtensionElement:
        """The class of the indeterminate (``w``)."""
        if self.degree == 1:
            return self(-self.modulus[0])
        return self((0, 1))

    def __call__(self, value) -> ExtensionElement:
        if isinstance(value, ExtensionElement):
            if value.field != self:
                raise FieldMismatch(f"{value.field} element used in {self}")
            return value
        if isinstance(value, FieldElement):
            if value.field != self.base:
                raise FieldMismatch(f"{value.field} element used in {self}")
            value = value.value
        if isinstance(value, int):
            return ExtensionElement((value % self.p,) + (0,) * (self.degree - 1), self)
        coeffs = _upoly_rem([int(c) % self.p for c in value], list(self.modulus), self.p)
        return ExtensionElement(tuple(coeffs) + (0,) * (self.degree - len(coeffs)), self)

    def from_code(self, code: int) -> ExtensionElement:
        p = self.p
        return ExtensionElement(tuple((code // p**i) % p for i in range(self.degree)), self)

    def elements(self) -> list[ExtensionElement]:
        return [self.from_code(c) for c in range(self.order)]

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.p == self.p
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("GF", self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.degree}; {_format_upoly(self.modulus, self.name)})"


class ExtensionElement:
    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: tuple[int, ...], field: ExtensionField):
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("ExtensionElement is immutable")

    def __reduce__(self):
        return (ExtensionElement, (self.coeffs, self.field))

    def _coerce(self, other):
        if isinstance(other, ExtensionElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine {self.field} and {other.field}")
            return other
        if isinstance(other, (int, FieldElement)):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return ExtensionElement(tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)), self.field)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return ExtensionElement(tuple(-a % p for a in self.coeffs), self.field)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        F = self.field
        prod = _upoly_mulmod(list(self.coeffs), list(o.coeffs), list(F.modulus), F.p)
        return ExtensionElement(tuple(prod) + (0,) * (F.degree - len(prod)), F)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> ExtensionElement:
        if self.is_zero():
            raise DivisionByZero(f"0 has no inverse in {self.field}")
        return self ** (self.field.order - 2)

    def frobenius(self, i: int = 1) -> ExtensionElement:
        i %= self.field.degree
        return self ** (self.field.p**i)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    @property
    def code(self) -> int:
        p = self.field.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    def __eq__(self, other):
        if isinstance(other, ExtensionElement):
            return other.field == self.field and other.coeffs == self.coeffs
        if isinstance(other, (int, FieldElement)):
            try:
                return self.coeffs == self.field(other).coeffs
            except FieldMismatch:
                return False
        return NotImplemented

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash((self.field.p, self.coeffs[0]))
        return hash((self.field.p, self.field.modulus, self.coeffs))

    def __str__(self):
        return _format_upoly(self.coeffs, self.field.name)

    def __repr__(self):
        return f"ExtensionElement({self}, {self.field!r})"


def _format_upoly(coeffs, name):
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (name if i == 1 else f"{name}^{i}")
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts) or "0"


def _parse_modulus(text, name, base):
    from .poly import parse_poly

    f = parse_poly(text, [name], base)
    deg = f.total_degree()
    coeffs = [0] * (deg + 1)
    for (e,), c in f.terms.items():
        coeffs[e] = c
    return coeffs


def GF(p: int, degree: int = 1, modulus=None, name: str = "w"):
    """F_p when ``degree == 1`` and no modulus is given, otherwise F_{p^degree}."""
    if degree == 1 and modulus is None:
        return PrimeField(p)
    return ExtensionField(p, degree, modulus, name)


def field_of_order(q: int, name: str = "w"):
    """The field with ``q = p^a`` elements, using the default modulus."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    a, n = 0, q
    while n % p == 0:
        n //= p
        a += 1
    if n != 1 or not is_prime(p):
        raise InvalidParameters(f"{q} is not a prime power")
    return GF(p, a, name=name)


def invert(x):
    """Multiplicative inverse; raises DivisionByZero on 0."""
    return x.inverse()


def frobenius(x, i: int = 1):
    """x^{p^i}."""
    if i < 0:
        raise InvalidParameters("Frobenius exponent must be >= 0")
    return x.frobenius(i)


def enumerate_elements(F) -> list:
    """Every element once, ordered by the integer code sum c_i p^i."""
    return F.elements()

