"""Truncated Laurent series in q over Q(zeta_N).

A :class:`QSeries` stores a sparse map ``exponent -> coefficient`` together
with ``trunc``: every coefficient at an exponent ``<= trunc`` is exact, and
nothing is known above it.  Arithmetic propagates ``trunc`` so that results
never claim more precision than their inputs support.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping

from .errors import FieldMismatchError, SchemaError
from .exactnum import DEFAULT_ORDER, CycloNum, as_cyclo, embed

__all__ = ["QSeries", "qs_pochhammer", "monomial", "geometric"]


class QSeries:
    """Immutable truncated Laurent series ``sum c_k q^k + O(q^(trunc+1))``."""

    __slots__ = ("_coeffs", "_trunc", "_order")

    def __init__(
        self,
        coeffs: Mapping[int, object] | None = None,
        trunc: int = 0,
        field_order: int = DEFAULT_ORDER,
    ):
        clean: dict[int, CycloNum] = {}
        for k, c in (coeffs or {}).items():
            k = int(k)
            if k > trunc:
                continue
            c = as_cyclo(c, field_order)
            if c:
                clean[k] = c
        self._init(clean, int(trunc), field_order)

    def _init(self, coeffs: dict[int, CycloNum], trunc: int, order: int) -> None:
        object.__setattr__(self, "_coeffs", coeffs)
        object.__setattr__(self, "_trunc", trunc)
        object.__setattr__(self, "_order", order)

    @classmethod
    def _make(cls, coeffs: dict[int, CycloNum], trunc: int, order: int) -> QSeries:
        # coeffs must already be pruned (no zeros, nothing above trunc)
        obj = object.__new__(cls)
        obj._init(coeffs, trunc, order)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, trunc: int, field_order: int = DEFAULT_ORDER) -> QSeries:
        return cls._make({}, trunc, field_order)

    @classmethod
    def one(cls, trunc: int, field_order: int = DEFAULT_ORDER) -> QSeries:
        return monomial(1, 0, trunc, field_order)

    @classmethod
    def from_list(cls, values: Iterable, trunc: int | None = None, start: int = 0,
                  field_order: int = DEFAULT_ORDER) -> QSeries:
        values = list(values)
        if trunc is None:
            trunc = start + len(values) - 1
        return cls({start + i: v for i, v in enumerate(values)}, trunc, field_order)

    # -- accessors -----------------------------------------------------------

    @property
    def trunc(self) -> int:
        return self._trunc

    @property
    def field_order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> dict[int, CycloNum]:
        return dict(self._coeffs)

    def __getitem__(self, k: int) -> CycloNum:
        if k > self._trunc:
            raise IndexError(f"coefficient of q^{k} is beyond trunc {self._trunc}")
        return self._coeffs.get(k, embed(0, self._order))

    def exponents(self) -> list[int]:
        return sorted(self._coeffs)

    def items(self) -> list[tuple[int, CycloNum]]:
        return sorted(self._coeffs.items())

    def is_zero(self) -> bool:
        return not self._coeffs

    def valuation(self) -> int:
        """Lowest exponent with nonzero coefficient; ``trunc + 1`` for the zero series."""
        return min(self._coeffs) if self._coeffs else self._trunc + 1

    # -- helpers -------------------------------------------------------------

    def _check(self, other: QSeries) -> None:
        if other._order != self._order:
            raise FieldMismatchError(
                f"series over Q(zeta_{self._order}) and Q(zeta_{other._order}) cannot be combined"
            )

    def _lift(self, other):
        if isinstance(other, QSeries):
            self._check(other)
            return other
        if isinstance(other, (int, _RationalABC, CycloNum)):
            return monomial(other, 0, self._trunc, self._order)
        return NotImplemented

    def truncate(self, trunc: int) -> QSeries:
        """Forget everything above ``trunc``; cannot raise precision."""
        t = min(trunc, self._trunc)
        return QSeries._make({k: c for k, c in self._coeffs.items() if k <= t}, t, self._order)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        t = min(self._trunc, other._trunc)
        out = {k: c for k, c in self._coeffs.items() if k <= t}
        for k, c in other._coeffs.items():
            if k > t:
                continue
            s = out[k] + c if k in out else c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return QSeries._make(out, t, self._order)

    __radd__ = __add__

    def __neg__(self) -> QSeries:
        return QSeries._make({k: -c for k, c in self._coeffs.items()}, self._trunc, self._order)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, _RationalABC, CycloNum)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        self._check(other)
        va, vb = self.valuation(), other.valuation()
        t = min(self._trunc + vb, other._trunc + va)
        out: dict[int, CycloNum] = {}
        b_items = sorted(other._coeffs.items())
        for i, x in self._coeffs.items():
            for j, y in b_items:
                k = i + j
                if k > t:
                    break
                p = x * y
                out[k] = out[k] + p if k in out else p
        return QSeries._make({k: c for k, c in out.items() if c}, t, self._order)

    __rmul__ = __mul__

    def scale(self, c) -> QSeries:
        c = as_cyclo(c, self._order)
        if not c:
            return QSeries.zero(self._trunc, self._order)
        return QSeries._make({k: x * c for k, x in self._coeffs.items()}, self._trunc, self._order)

    def shift(self, k: int) -> QSeries:
        """Multiply by ``q^k`` (exact, so trunc moves with it)."""
        return QSeries._make({e + k: c for e, c in self._coeffs.items()}, self._trunc + k, self._order)

    def invert(self) -> QSeries:
        """Multiplicative inverse, factoring out the lowest monomial first.

        If ``a = c q^v (1 + ...)`` is known through ``q^T`` then the inverse is
        known through ``q^(T - 2v)``.
        """
        if not self._coeffs:
            raise ZeroDivisionError("inverse of a series that is zero through its truncation")
        v = self.valuation()
        unit_trunc = self._trunc - v
        u = [self._coeffs.get(v + i) for i in range(unit_trunc + 1)]
        c0inv = u[0].inverse()
        support = [(i, c) for i, c in enumerate(u) if i and c is not None]
        b: list[CycloNum] = [c0inv]
        zero = embed(0, self._order)
        for k in range(1, unit_trunc + 1):
            acc = zero
            for i, c in support:
                if i > k:
                    break
                bk = b[k - i]
                if bk:
                    acc = acc + c * bk
            b.append(-acc * c0inv)
        out = {k - v: c for k, c in enumerate(b) if c}
        return QSeries._make(out, unit_trunc - v, self._order)

    def __truediv__(self, other):
        if isinstance(other, (int, _RationalABC, CycloNum)):
            return self.scale(1 / as_cyclo(other, self._order))
        if not isinstance(other, QSeries):
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other * self.invert()

    def __pow__(self, k: int) -> QSeries:
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return QSeries.one(self._trunc, self._order)
        base = self if k > 0 else self.invert()
        k = abs(k)
        result = None
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def subst_power(self, d: int) -> QSeries:
        """Apply ``q -> q^d``.

        Exponents up to ``trunc`` were known, the first unknown one was
        ``trunc + 1`` and maps to ``d (trunc + 1)``, so the new trunc is
        ``d trunc + d - 1``.
        """
        if d < 1:
            raise ValueError(f"substitution power must be >= 1, got {d}")
        if d == 1:
            return self
        return QSeries._make({k * d: c for k, c in self._coeffs.items()},
                             d * self._trunc + d - 1, self._order)

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self._order == other._order and self._trunc == other._trunc
                and self._coeffs == other._coeffs)

    def __hash__(self) -> int:
        return hash((self._order, self._trunc, frozenset(self._coeffs.items())))

    def agrees_with(self, other: QSeries) -> bool:
        """Equality through the smaller of the two truncations."""
        self._check(other)
        t = min(self._trunc, other._trunc)
        return self.truncate(t) == other.truncate(t)

    def first_difference(self, other: QSeries) -> int | None:
        """Lowest exponent (within the common truncation) where coefficients differ."""
        self._check(other)
        t = min(self._trunc, other._trunc)
        keys = {k for k in self._coeffs if k <= t} | {k for k in other._coeffs if k <= t}
        for k in sorted(keys):
            if self[k] != other[k]:
                return k
        return None

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self._coeffs.values())

    # -- text and JSON -------------------------------------------------------

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        out: list[str] = []
        for k, c in self.items():
            body = str(c)
            compound = " " in body or (c.order > 2 and not c.is_rational())
            neg = c.is_rational() and c.rational_part() < 0
            if neg:
                body = str(-c)
            qk = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if qk:
                if compound:
                    term = f"({body})*{qk}"
                elif body == "1":
                    term = qk
                else:
                    term = f"{body}*{qk}"
            else:
                term = f"({body})" if compound else body
            if not out:
                out.append(f"-{term}" if neg else term)
            else:
                out.append(f"- {term}" if neg else f"+ {term}")
        return " ".join(out)

    def __repr__(self) -> str:
        return f"QSeries({str(self)!r}, trunc={self._trunc})"

    def to_json(self) -> dict:
        return {
            "trunc": self._trunc,
            "field_order": self._order,
            "coeffs": [[k, str(c)] for k, c in self.items()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj) -> QSeries:
        if not isinstance(obj, dict):
            raise SchemaError("series JSON must be an object")
        trunc = obj.get("trunc")
        if not isinstance(trunc, int) or isinstance(trunc, bool):
            raise SchemaError("series field 'trunc' must be an integer")
        order = obj.get("field_order", DEFAULT_ORDER)
        if not isinstance(order, int) or order < 1:
            raise SchemaError("series field 'field_order' must be a positive integer")
        raw = obj.get("coeffs")
        if not isinstance(raw, list):
            raise SchemaError("series field 'coeffs' must be a list of [exp, coeff] pairs")
        coeffs: dict[int, CycloNum] = {}
        for pair in raw:
            if (not isinstance(pair, list) or len(pair) != 2 or not isinstance(pair[0], int)
                    or not isinstance(pair[1], str)):
                raise SchemaError(f"bad coefficient entry {pair!r} in 'coeffs'")
            coeffs[pair[0]] = CycloNum.parse(pair[1], order)
        return cls(coeffs, trunc, order)


def monomial(c, e: int, trunc: int, field_order: int = DEFAULT_ORDER) -> QSeries:
    """``c q^e`` known exactly through ``trunc``."""
    c = as_cyclo(c, field_order)
    coeffs = {e: c} if c and e <= trunc else {}
    return QSeries._make(coeffs, trunc, field_order)


def geometric(c, m: int, power: int, trunc: int, field_order: int = DEFAULT_ORDER) -> QSeries:
    """``(1 - c q^m)^power`` for ``m > 0`` as a power series through ``trunc``.

    Uses the binomial series, so negative powers need no division.
    """
    if m <= 0:
        raise ValueError(f"geometric needs a positive q-exponent, got {m}")
    c = as_cyclo(c, field_order)
    out: dict[int, CycloNum] = {}
    # (1 - x)^p = sum_k binom(p, k) (-x)^k, generalized binomial for p < 0
    coef = Fraction(1)
    term = embed(1, field_order)
    k = 0
    while k * m <= trunc:
        if coef:
            val = term * coef
            if val:
                out[k * m] = val
        elif power >= 0:
            break
        coef = coef * (power - k) / (k + 1)
        term = term * (-c)
        k += 1
    return QSeries._make(out, trunc, field_order)


def qs_pochhammer(c, j0: int, n: int, trunc: int, field_order: int = DEFAULT_ORDER) -> QSeries:
    """``prod_{i=0}^{n-1} (1 - c q^(j0+i))`` truncated at ``trunc``.

    The product is a Laurent polynomial, so it is expanded exactly and only
    the final result is cut at ``trunc``.
    """
    if n < 0:
        raise ValueError(f"Pochhammer length must be >= 0, got {n}")
    c = as_cyclo(c, field_order)
    poly: dict[int, CycloNum] = {0: embed(1, field_order)}
    for i in range(n):
        e = j0 + i
        nxt = dict(poly)
        for k, a in poly.items():
            p = -(a * c)
            nxt[k + e] = nxt[k + e] + p if k + e in nxt else p
        poly = {k: a for k, a in nxt.items() if a}
    return QSeries(poly, trunc, field_order)
