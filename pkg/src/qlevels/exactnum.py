"""Exact coefficient arithmetic.

Rationals are :class:`fractions.Fraction`.  Elements of the cyclotomic field
Q(zeta_N) are stored in the power basis ``1, z, ..., z^(phi(N)-1)`` and every
result is reduced modulo the N-th cyclotomic polynomial.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from .errors import FieldMismatchError, SchemaError

__all__ = [
    "CycloNum",
    "DEFAULT_ORDER",
    "cyclotomic_poly",
    "euler_phi",
    "zeta",
    "embed",
    "format_rational",
    "parse_rational",
]

DEFAULT_ORDER = 6


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError(f"euler_phi needs n >= 1, got {n}")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (lowest degree first), den monic."""
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for k in range(len(quot) - 1, -1, -1):
        c = num[k + dd]
        quot[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    assert not any(num), "non-exact polynomial division"
    return quot


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first.

    >>> cyclotomic_poly(6)
    (1, -1, 1)
    """
    if n < 1:
        raise ValueError(f"cyclotomic order must be >= 1, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


def _reduce(poly: list[Fraction], n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    poly = list(poly)
    for k in range(len(poly) - 1, deg - 1, -1):
        c = poly[k]
        if c:
            # z^k = z^(k-deg) * z^deg and z^deg = -(phi[0] + ... + phi[deg-1] z^(deg-1))
            for i in range(deg):
                if phi[i]:
                    poly[k - deg + i] -= c * phi[i]
    poly = poly[:deg] + [Fraction(0)] * (deg - len(poly))
    return tuple(poly)


# -- polynomial helpers over Q, lowest degree first -------------------------

def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [], _trim(a)
    q = [Fraction(0)] * (len(a) - db)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + db] / lead
        q[k] = c
        if c:
            for i, bi in enumerate(b):
                a[k + i] -= c * bi
    return _trim(q), _trim(a[:db])


def _psub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(c) for c in out])


def _pmul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


class CycloNum:
    """An element of Q(zeta_N), immutable and hashable."""

    __slots__ = ("_order", "_coords")

    def __init__(self, coords: Iterable = (0,), order: int = DEFAULT_ORDER):
        if order < 1:
            raise ValueError(f"cyclotomic order must be >= 1, got {order}")
        raw = [Fraction(c) for c in coords]
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_coords", _reduce(raw, order))

    @classmethod
    def _raw(cls, coords: tuple[Fraction, ...], order: int) -> CycloNum:
        # caller guarantees coords are already reduced and of length phi(order)
        obj = object.__new__(cls)
        object.__setattr__(obj, "_order", order)
        object.__setattr__(obj, "_coords", coords)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CycloNum is immutable")

    @property
    def order(self) -> int:
        return self._order

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return self._coords

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self._coords)

    def is_one(self) -> bool:
        return self._coords[0] == 1 and not any(self._coords[1:])

    def is_rational(self) -> bool:
        return not any(self._coords[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    def rational_part(self) -> Fraction:
        return self._coords[0]

    # -- coercion ----------------------------------------------------------

    def _coerce(self, other) -> CycloNum:
        if isinstance(other, CycloNum):
            if other._order != self._order:
                raise FieldMismatchError(
                    f"cannot combine Q(zeta_{self._order}) with Q(zeta_{other._order})"
                )
            return other
        if isinstance(other, (int, _RationalABC)):
            return embed(other, self._order)
        return NotImplemented

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloNum._raw(
            tuple(a + b for a, b in zip(self._coords, other._coords)), self._order
        )

    __radd__ = __add__

    def __neg__(self) -> CycloNum:
        return CycloNum._raw(tuple(-a for a in self._coords), self._order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloNum._raw(
            tuple(a - b for a, b in zip(self._coords, other._coords)), self._order
        )

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._coords, other._coords
        if len(a) == 1:
            return CycloNum._raw((a[0] * b[0],), self._order)
        if not any(a[1:]):
            c = a[0]
            return CycloNum._raw(tuple(c * y for y in b), self._order)
        if not any(b[1:]):
            c = b[0]
            return CycloNum._raw(tuple(c * x for x in a), self._order)
        prod = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycloNum._raw(_reduce(prod, self._order), self._order)

    __rmul__ = __mul__

    def inverse(self) -> CycloNum:
        """Multiplicative inverse via the extended Euclidean algorithm in Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_N)")
        if self.is_rational():
            c = 1 / self._coords[0]
            return CycloNum._raw((c,) + self._coords[1:], self._order)
        # s*a + t*phi = gcd; track only s
        r0 = [Fraction(c) for c in cyclotomic_poly(self._order)]
        r1 = _trim(list(self._coords))
        s0: list[Fraction] = []
        s1 = [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        # r1 is a nonzero constant because phi is irreducible
        c = r1[0]
        return CycloNum([x / c for x in s1], self._order)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int) -> CycloNum:
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = embed(1, self._order)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conjugate(self) -> CycloNum:
        """Complex conjugation, i.e. the automorphism z -> z^-1."""
        zinv = zeta(self._order).inverse()
        out = embed(0, self._order)
        power = embed(1, self._order)
        for c in self._coords:
            if c:
                out = out + power * c
            power = power * zinv
        return out

    def to_complex(self) -> complex:
        w = cmath.exp(2j * math.pi / self._order)
        return complex(sum(float(c) * w**k for k, c in enumerate(self._coords)))

    # -- comparison and hashing ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, CycloNum):
            return self._order == other._order and self._coords == other._coords
        if isinstance(other, (int, _RationalABC)):
            return self.is_rational() and self._coords[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self._coords[0])
        return hash((self._order, self._coords))

    # -- text ----------------------------------------------------------------

    def __str__(self) -> str:
        parts: list[str] = []
        for k, c in enumerate(self._coords):
            if not c:
                continue
            if k == 0:
                mag = format_rational(abs(c))
            else:
                zk = "z" if k == 1 else f"z^{k}"
                mag = zk if abs(c) == 1 else f"{format_rational(abs(c))}*{zk}"
            if not parts:
                parts.append(mag if c > 0 else f"-{mag}")
            else:
                parts.append(f"+ {mag}" if c > 0 else f"- {mag}")
        return " ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"CycloNum({str(self)!r}, order={self._order})"

    @classmethod
    def parse(cls, text: str, order: int = DEFAULT_ORDER) -> CycloNum:
        """Inverse of ``str``: ``"1/2 - 3*z + z^2"``."""
        s = text.replace(" ", "")
        if not s:
            raise SchemaError("empty cyclotomic number")
        if s[0] not in "+-":
            s = "+" + s
        coords: dict[int, Fraction] = {}
        for m in re.finditer(r"([+-])([^+-]+)", s):
            sign, body = m.group(1), m.group(2)
            tm = _TERM.fullmatch(body)
            if tm is None:
                raise SchemaError(f"cannot parse cyclotomic term {body!r} in {text!r}")
            coeff_s, zpart, power_s = tm.group(1), tm.group(2), tm.group(3)
            if zpart is None:
                if coeff_s is None:
                    raise SchemaError(f"cannot parse {text!r}")
                k, c = 0, parse_rational(coeff_s)
            else:
                k = int(power_s) if power_s else 1
                c = parse_rational(coeff_s) if coeff_s else Fraction(1)
            if sign == "-":
                c = -c
            coords[k] = coords.get(k, Fraction(0)) + c
        if "".join(m.group(0) for m in re.finditer(r"([+-])([^+-]+)", s)) != s:
            raise SchemaError(f"cannot parse cyclotomic number {text!r}")
        top = max(coords)
        return cls([coords.get(k, 0) for k in range(top + 1)], order)

    def to_json(self) -> dict:
        return {"order": self._order, "coords": [format_rational(c) for c in self._coords]}

    @classmethod
    def from_json(cls, obj) -> CycloNum:
        if not isinstance(obj, dict) or "coords" not in obj:
            raise SchemaError(f"constant must be an object with 'order' and 'coords', got {obj!r}")
        order = obj.get("order", DEFAULT_ORDER)
        if not isinstance(order, int) or order < 1:
            raise SchemaError(f"constant 'order' must be a positive integer, got {order!r}")
        coords = obj["coords"]
        if not isinstance(coords, list) or len(coords) != euler_phi(order):
            raise SchemaError(
                f"constant 'coords' must be a list of length phi({order}) = {euler_phi(order)}"
            )
        return cls([parse_rational(c) for c in coords], order)


_TERM = re.compile(r"(?:(\d+(?:/\d+)?)\*?)?(z(?:\^(\d+))?)?")


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not a rational: {value!r}") from exc
    raise SchemaError(f"not a rational: {value!r}")


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


@lru_cache(maxsize=None)
def embed(x, order: int = DEFAULT_ORDER) -> CycloNum:
    """The rational ``x`` as an element of Q(zeta_order)."""
    zeros = (Fraction(0),) * (euler_phi(order) - 1)
    return CycloNum._raw((Fraction(x),) + zeros, order)


@lru_cache(maxsize=None)
def zeta(n: int) -> CycloNum:
    """The primitive n-th root of unity exp(2 pi i / n) as the basis element z."""
    if n < 1:
        raise ValueError(f"zeta needs n >= 1, got {n}")
    return CycloNum([0, 1], n)


def as_cyclo(x, order: int = DEFAULT_ORDER) -> CycloNum:
    if isinstance(x, CycloNum):
        if x.order != order:
            raise FieldMismatchError(f"expected Q(zeta_{order}), got Q(zeta_{x.order})")
        return x
    return embed(Fraction(x), order)


def vector(values: Sequence, order: int = DEFAULT_ORDER) -> list[CycloNum]:
    return [as_cyclo(v, order) for v in values]
