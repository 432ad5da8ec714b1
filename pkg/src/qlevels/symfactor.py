"""Symbolic degree terms and their specialization to q-series.

A degree term is ``prefix * prod (1 - M q^j)^power * Q^f`` where ``prefix``
and every ``M`` are Laurent monomials in named symbols.  A
:class:`Specialization` sends every symbol to ``c q^e`` in the final
variable and rescales the formula's own q by ``q -> q^d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import PoleError, SchemaError, UnmappedSymbolError
from .exactnum import DEFAULT_ORDER, CycloNum, as_cyclo, embed, parse_rational
from .qlaurent import QSeries, geometric

__all__ = [
    "SymbolTable",
    "ParamMonomial",
    "BinomFactor",
    "DegreeTerm",
    "Specialization",
    "novikov_names",
    "specialize_term",
    "min_q_order",
    "term_vanishes",
]


def novikov_names(s: int) -> tuple[str, ...]:
    """Names of the Novikov variables for a rank-``s`` torus."""
    return ("Q",) if s == 1 else tuple(f"Q_{a + 1}" for a in range(s))


class SymbolTable:
    """Ordered list of distinct symbol names."""

    def __init__(self, names: Iterable[str] = ()):
        self._names: list[str] = []
        self._index: dict[str, int] = {}
        for n in names:
            self.add(n)

    def add(self, name: str) -> int:
        if name in self._index:
            raise ValueError(f"duplicate symbol name {name!r}")
        self._index[name] = len(self._names)
        self._names.append(name)
        return self._index[name]

    def index(self, name: str) -> int:
        return self._index[name]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __iter__(self):
        return iter(self._names)

    def __len__(self) -> int:
        return len(self._names)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolTable) and self._names == other._names

    def __repr__(self) -> str:
        return f"SymbolTable({self._names!r})"


def _norm_syms(syms) -> tuple[tuple[str, int], ...]:
    items = syms.items() if isinstance(syms, Mapping) else syms
    acc: dict[str, int] = {}
    for name, k in items:
        acc[name] = acc.get(name, 0) + int(k)
    return tuple(sorted((n, k) for n, k in acc.items() if k))


@dataclass(frozen=True)
class ParamMonomial:
    """``coeff * q^q_exp * prod sym^k``."""

    coeff: Fraction = Fraction(1)
    q_exp: int = 0
    sym_exps: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "q_exp", int(self.q_exp))
        object.__setattr__(self, "sym_exps", _norm_syms(self.sym_exps))

    @classmethod
    def of(cls, coeff=1, q_exp: int = 0, **syms: int) -> ParamMonomial:
        return cls(Fraction(coeff), q_exp, tuple(syms.items()))

    def exponent(self, name: str) -> int:
        return dict(self.sym_exps).get(name, 0)

    def symbols(self) -> set[str]:
        return {n for n, _ in self.sym_exps}

    def __mul__(self, other: ParamMonomial) -> ParamMonomial:
        if not isinstance(other, ParamMonomial):
            return NotImplemented
        return ParamMonomial(self.coeff * other.coeff, self.q_exp + other.q_exp,
                             self.sym_exps + other.sym_exps)

    def __pow__(self, k: int) -> ParamMonomial:
        return ParamMonomial(self.coeff ** k, self.q_exp * k,
                             tuple((n, e * k) for n, e in self.sym_exps))

    def with_q(self, j: int) -> ParamMonomial:
        return ParamMonomial(self.coeff, self.q_exp + j, self.sym_exps)

    def _key(self):
        return (self.q_exp, self.sym_exps, self.coeff)

    def __str__(self) -> str:
        parts = [] if self.coeff == 1 else [str(self.coeff)]
        if self.q_exp:
            parts.append("q" if self.q_exp == 1 else f"q^{self.q_exp}")
        for n, k in self.sym_exps:
            parts.append(n if k == 1 else f"{n}^{k}")
        return "*".join(parts) or "1"

    def to_json(self) -> dict:
        return {"coeff": str(self.coeff), "q_exp": self.q_exp, "syms": dict(self.sym_exps)}

    @classmethod
    def from_json(cls, obj) -> ParamMonomial:
        if not isinstance(obj, dict):
            raise SchemaError(f"monomial must be an object, got {obj!r}")
        q_exp = obj.get("q_exp", 0)
        syms = obj.get("syms", {})
        if not isinstance(q_exp, int) or not isinstance(syms, dict):
            raise SchemaError(f"bad monomial {obj!r}")
        if not all(isinstance(v, int) for v in syms.values()):
            raise SchemaError(f"monomial 'syms' exponents must be integers in {obj!r}")
        return cls(parse_rational(obj.get("coeff", "1")), q_exp, tuple(syms.items()))


@dataclass(frozen=True)
class BinomFactor:
    """``(1 - mono)^power``; the q-exponent of the factor lives in ``mono.q_exp``."""

    mono: ParamMonomial
    power: int

    def __post_init__(self):
        if self.power == 0:
            raise ValueError("binomial factor with power 0")

    def __str__(self) -> str:
        base = f"(1 - {self.mono})"
        return base if self.power == 1 else f"{base}^{self.power}"


@dataclass(frozen=True)
class DegreeTerm:
    """``prefix * prod factors * Q^degree`` in canonical form.

    Factors with the same monomial are merged and the list is sorted, so two
    terms denoting the same product compare equal.
    """

    degree: tuple[int, ...]
    prefix: ParamMonomial = field(default_factory=ParamMonomial)
    factors: tuple[BinomFactor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "degree", tuple(int(x) for x in self.degree))
        merged: dict[ParamMonomial, int] = {}
        for f in self.factors:
            merged[f.mono] = merged.get(f.mono, 0) + f.power
        canon = tuple(
            BinomFactor(m, p)
            for m, p in sorted(merged.items(), key=lambda kv: kv[0]._key())
            if p
        )
        object.__setattr__(self, "factors", canon)

    def __mul__(self, other: DegreeTerm) -> DegreeTerm:
        if not isinstance(other, DegreeTerm):
            return NotImplemented
        if len(self.degree) != len(other.degree):
            raise ValueError("degree tuples of different rank")
        return DegreeTerm(tuple(a + b for a, b in zip(self.degree, other.degree)),
                          self.prefix * other.prefix, self.factors + other.factors)

    def with_prefix(self, extra: ParamMonomial) -> DegreeTerm:
        return DegreeTerm(self.degree, self.prefix * extra, self.factors)

    def symbols(self) -> set[str]:
        out = self.prefix.symbols()
        for f in self.factors:
            out |= f.mono.symbols()
        return out

    def __str__(self) -> str:
        num = [str(f) if f.power == 1 else f"(1 - {f.mono})^{f.power}"
               for f in self.factors if f.power > 0]
        den = [str(BinomFactor(f.mono, -f.power)) for f in self.factors if f.power < 0]
        body = "*".join([str(self.prefix)] + num)
        if den:
            body += " / (" + "*".join(den) + ")"
        return f"[{','.join(map(str, self.degree))}] {body}"

    def to_json(self) -> dict:
        return {
            "degree": list(self.degree),
            "prefix": self.prefix.to_json(),
            "factors": [{"mono": f.mono.to_json(), "power": f.power} for f in self.factors],
        }

    @classmethod
    def from_json(cls, obj) -> DegreeTerm:
        if not isinstance(obj, dict) or not isinstance(obj.get("degree"), list):
            raise SchemaError("degree term needs a 'degree' list")
        factors = []
        for f in obj.get("factors", []):
            if not isinstance(f, dict) or not isinstance(f.get("power"), int) or f["power"] == 0:
                raise SchemaError(f"bad factor {f!r}: needs 'mono' and nonzero integer 'power'")
            factors.append(BinomFactor(ParamMonomial.from_json(f.get("mono")), f["power"]))
        return cls(tuple(obj["degree"]), ParamMonomial.from_json(obj.get("prefix", {})),
                   tuple(factors))


def _parse_value(obj, order: int, where: str) -> tuple[CycloNum, int]:
    if not isinstance(obj, dict) or "c" not in obj:
        raise SchemaError(f"{where}: expected an object with 'c' and 'e'")
    e = obj.get("e", 0)
    if not isinstance(e, int) or isinstance(e, bool):
        raise SchemaError(f"{where}.e must be an integer")
    c = obj["c"]
    if isinstance(c, dict):
        val = CycloNum.from_json(c)
        if val.order != order:
            raise SchemaError(f"{where}.c has order {val.order}, expected {order}")
    elif isinstance(c, (str, int)) and not isinstance(c, bool):
        val = CycloNum.parse(str(c), order)
    else:
        raise SchemaError(f"{where}.c must be a constant object or string")
    return val, e


@dataclass(frozen=True)
class Specialization:
    """Symbol values ``c q^e`` in the final variable plus an internal ``q -> q^d``."""

    sym_map: Mapping[str, tuple[CycloNum, int]]
    novikov_map: Mapping[str, tuple[CycloNum, int]]
    series_power: int = 1
    field_order: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.series_power < 1:
            raise ValueError(f"series_power must be >= 1, got {self.series_power}")
        norm = {}
        for label, mp in (("sym_map", self.sym_map), ("novikov_map", self.novikov_map)):
            out = {}
            for name, (c, e) in mp.items():
                c = as_cyclo(c, self.field_order)
                if not c:
                    raise ValueError(f"{label}[{name!r}] maps to zero")
                out[name] = (c, int(e))
            norm[label] = out
        object.__setattr__(self, "sym_map", norm["sym_map"])
        object.__setattr__(self, "novikov_map", norm["novikov_map"])
        object.__setattr__(self, "_sym_cache", {})

    def replace(self, **changes) -> Specialization:
        sym = dict(self.sym_map)
        nov = dict(self.novikov_map)
        for name, val in changes.items():
            if name in nov:
                nov[name] = val
            else:
                sym[name] = val
        return Specialization(sym, nov, self.series_power, self.field_order)

    def missing(self, symbols: Iterable[str], rank: int) -> list[str]:
        miss = [s for s in symbols if s not in self.sym_map]
        miss += [n for n in novikov_names(rank) if n not in self.novikov_map]
        return miss

    def value(self, mono: ParamMonomial) -> tuple[CycloNum, int]:
        """``mono`` evaluated as ``c q^e`` in the final variable."""
        hit = self._sym_cache.get(mono.sym_exps)
        if hit is None:
            c, e = embed(1, self.field_order), 0
            for name, k in mono.sym_exps:
                try:
                    sc, se = self.sym_map[name]
                except KeyError:
                    raise UnmappedSymbolError(f"symbol {name!r} is not specialized") from None
                c = c * sc ** k
                e += se * k
            hit = self._sym_cache[mono.sym_exps] = (c, e)
        c, e = hit
        if mono.coeff != 1:
            c = c * mono.coeff
        return c, e + self.series_power * mono.q_exp

    def to_json(self) -> dict:
        def enc(mp):
            return {n: {"c": c.to_json(), "e": e} for n, (c, e) in mp.items()}
        return {
            "series_power": self.series_power,
            "field_order": self.field_order,
            "sym_map": enc(self.sym_map),
            "novikov_map": enc(self.novikov_map),
        }

    @classmethod
    def from_json(cls, obj) -> Specialization:
        if not isinstance(obj, dict):
            raise SchemaError("specialization must be a JSON object")
        order = obj.get("field_order", DEFAULT_ORDER)
        if not isinstance(order, int) or order < 1:
            raise SchemaError("'field_order' must be a positive integer")
        d = obj.get("series_power", 1)
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise SchemaError("'series_power' must be a positive integer")
        maps = {}
        for key in ("sym_map", "novikov_map"):
            raw = obj.get(key, {})
            if not isinstance(raw, dict):
                raise SchemaError(f"'{key}' must be an object")
            maps[key] = {n: _parse_value(v, order, f"{key}.{n}") for n, v in raw.items()}
        try:
            return cls(maps["sym_map"], maps["novikov_map"], d, order)
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc


def _analyse(term: DegreeTerm, spec: Specialization):
    """Split a specialized term into ``const * q^val * prod (1 - c q^m)^p`` with m > 0.

    Returns ``None`` when a numerator factor is identically zero.
    """
    const, val = spec.value(term.prefix)
    names = novikov_names(len(term.degree))
    for name, f in zip(names, term.degree):
        if not f:
            continue
        try:
            c, e = spec.novikov_map[name]
        except KeyError:
            raise UnmappedSymbolError(f"Novikov variable {name!r} is not specialized") from None
        const = const * c ** f
        val += e * f
    units: list[tuple[CycloNum, int, int]] = []
    vanishes = False
    for fac in term.factors:
        c, m = spec.value(fac.mono)
        p = fac.power
        if m == 0:
            if c.is_one():
                if p < 0:
                    raise PoleError(f"denominator factor {fac} specializes to 1 - 1")
                vanishes = True
                continue
            const = const * (1 - c) ** p
        elif m > 0:
            units.append((c, m, p))
        else:
            # 1 - c q^m = (-c q^m)(1 - c^-1 q^-m)
            const = const * (-c) ** p
            val += m * p
            units.append((c.inverse(), -m, p))
    if vanishes:
        return None
    return const, val, units


def term_vanishes(term: DegreeTerm, spec: Specialization) -> bool:
    return _analyse(term, spec) is None


def min_q_order(term: DegreeTerm, spec: Specialization) -> int:
    """Lowest final-variable exponent of the specialized term.

    The remaining factors are units with constant term 1, so the bound is
    attained.  Raises ``ValueError`` if the term vanishes identically.
    """
    parts = _analyse(term, spec)
    if parts is None:
        raise ValueError("term vanishes under this specialization")
    return parts[1]


def specialize_term(term: DegreeTerm, spec: Specialization, trunc: int) -> QSeries:
    """Exact expansion of ``term`` under ``spec`` through ``q^trunc``."""
    return _expand(_analyse(term, spec), spec, trunc)


def _expand(parts, spec: Specialization, trunc: int) -> QSeries:
    order = spec.field_order
    if parts is None:
        return QSeries.zero(trunc, order)
    const, val, units = parts
    prec = trunc - val
    if prec < 0:
        return QSeries.zero(trunc, order)
    series = QSeries.one(prec, order).scale(const)
    for c, m, p in units:
        if m <= prec:
            series = series * geometric(c, m, p, prec, order)
    return series.shift(val)
