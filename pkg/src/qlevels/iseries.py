"""Level-l toric I-functions, determinantal modification, and basic hypergeometric series."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import ConvergenceError, DegreeError, PoleError, SchemaError, UnmappedSymbolError
from .exactnum import DEFAULT_ORDER, CycloNum, as_cyclo
from .qlaurent import QSeries, monomial, qs_pochhammer
from .symfactor import (
    BinomFactor,
    DegreeTerm,
    ParamMonomial,
    Specialization,
    SymbolTable,
    _analyse,
    _expand,
    novikov_names,
)

__all__ = [
    "PrefixConvention",
    "ChargeModel",
    "i_term",
    "det_modify",
    "level_factor",
    "i_function",
    "q_hypergeometric",
    "DEFAULT_DEGREE_CAP",
    "STOP_AFTER",
]

DEFAULT_DEGREE_CAP = 500
# number of consecutive degrees beyond the truncation before a sum stops
STOP_AFTER = 3


class PrefixConvention(enum.Enum):
    """How the level-l prefix of a degree term is written.

    ``PROP_LITERAL`` uses ``(L^beta q^(beta(beta-1)/2))^l`` per Chern root,
    the form displayed for the rank-one examples.  ``THM_DETMODIFY`` uses
    ``(L^-beta q^((beta+1)beta/2))^l``, the determinantal modification.
    """

    PROP_LITERAL = "prop_literal"
    THM_DETMODIFY = "thm_detmodify"


@dataclass(frozen=True)
class ChargeModel:
    """Charge data of a toric GIT quotient ``C^m // (C*)^s`` with a level structure.

    ``degrees`` is ``None`` for automatic enumeration (``s == 1`` only,
    ``n = 1, 2, ...`` optionally capped by ``n_max``); otherwise it is the
    explicit list of degree tuples to sum over.
    """

    charges: tuple[tuple[int, ...], ...]
    rep_charges: tuple[tuple[int, ...], ...] = ((1,),)
    level: int = 0
    lambda_flags: tuple[bool, ...] | None = None
    lambda_names: tuple[str, ...] | None = None
    p_names: tuple[str, ...] | None = None
    degrees: tuple[tuple[int, ...], ...] | None = None
    n_max: int | None = None

    def __post_init__(self):
        charges = tuple(tuple(int(x) for x in row) for row in self.charges)
        object.__setattr__(self, "charges", charges)
        if not charges or not charges[0]:
            raise ValueError("charge matrix must be non-empty")
        s, m = len(charges), len(charges[0])
        if any(len(row) != m for row in charges):
            raise ValueError("charge matrix rows have different lengths")
        reps = tuple(tuple(int(x) for x in r) for r in self.rep_charges)
        object.__setattr__(self, "rep_charges", reps)
        if any(len(r) != s for r in reps):
            raise ValueError(f"each representation charge must have length s = {s}")
        if self.level != 0 and not reps:
            raise ValueError("rep_charges must be non-empty when level != 0")
        flags = (True,) * m if self.lambda_flags is None else tuple(bool(f) for f in self.lambda_flags)
        if len(flags) != m:
            raise ValueError(f"lambda_flags must have length m = {m}")
        object.__setattr__(self, "lambda_flags", flags)
        lnames = (tuple(f"Lambda_{r + 1}" for r in range(m)) if self.lambda_names is None
                  else tuple(self.lambda_names))
        if len(lnames) != m:
            raise ValueError(f"lambda_names must have length m = {m}")
        object.__setattr__(self, "lambda_names", lnames)
        pnames = (("p",) if s == 1 else tuple(f"p_{a + 1}" for a in range(s))) \
            if self.p_names is None else tuple(self.p_names)
        if len(pnames) != s:
            raise ValueError(f"p_names must have length s = {s}")
        object.__setattr__(self, "p_names", pnames)
        if self.degrees is not None:
            degs = tuple(tuple(int(x) for x in d) for d in self.degrees)
            if any(len(d) != s for d in degs):
                raise ValueError(f"each degree must have length s = {s}")
            object.__setattr__(self, "degrees", degs)
        elif s != 1:
            raise ValueError("automatic degree enumeration is only available for s = 1")
        # raises on duplicates
        self.symbol_table()

    @property
    def s(self) -> int:
        return len(self.charges)

    @property
    def m(self) -> int:
        return len(self.charges[0])

    def symbol_table(self) -> SymbolTable:
        names = list(self.p_names)
        names += [n for n, flag in zip(self.lambda_names, self.lambda_flags) if flag]
        return SymbolTable(names)

    def symbols(self) -> tuple[str, ...]:
        return self.symbol_table().names

    def novikov(self) -> tuple[str, ...]:
        return novikov_names(self.s)

    def with_level(self, level: int) -> ChargeModel:
        return ChargeModel(self.charges, self.rep_charges, level, self.lambda_flags,
                           self.lambda_names, self.p_names, self.degrees, self.n_max)

    def beta(self, f: Sequence[int]) -> list[int]:
        """Pairings ``beta_rho = sum_a Q[a][rho] f_a``."""
        return [sum(self.charges[a][r] * f[a] for a in range(self.s)) for r in range(self.m)]

    def u_monomial(self, rho: int) -> ParamMonomial:
        syms = [(self.p_names[a], self.charges[a][rho]) for a in range(self.s)]
        if self.lambda_flags[rho]:
            syms.append((self.lambda_names[rho], -1))
        return ParamMonomial(1, 0, tuple(syms))

    def iter_degrees(self) -> Iterator[tuple[int, ...]]:
        if self.degrees is not None:
            yield from self.degrees
            return
        n = 1
        while self.n_max is None or n <= self.n_max:
            yield (n,)
            n += 1

    def check_degree(self, f: Sequence[int]) -> tuple[int, ...]:
        f = tuple(f)
        if self.degrees is not None:
            if f not in self.degrees:
                raise DegreeError(f"degree {f} is not in the model's degree list")
        elif len(f) != 1 or f[0] < 0 or (self.n_max is not None and f[0] > self.n_max):
            raise DegreeError(f"degree {f} is outside n = 0..{self.n_max or 'inf'}")
        return f

    # -- JSON ----------------------------------------------------------------

    def to_json(self, convention: PrefixConvention | None = None) -> dict:
        out = {
            "s": self.s,
            "m": self.m,
            "charges": [list(r) for r in self.charges],
            "rep_charges": [list(r) for r in self.rep_charges],
            "level": self.level,
            "lambda_flags": list(self.lambda_flags),
            "lambda_names": list(self.lambda_names),
            "p_names": list(self.p_names),
        }
        if convention is not None:
            out["convention"] = convention.value
        if self.degrees is not None:
            out["degrees"] = [list(d) for d in self.degrees]
        if self.n_max is not None:
            out["n_max"] = self.n_max
        return out

    @classmethod
    def from_json(cls, obj) -> tuple[ChargeModel, PrefixConvention]:
        """Parse a model file; returns the model and its prefix convention."""
        if not isinstance(obj, dict):
            raise SchemaError("model must be a JSON object")

        def int_matrix(key, required=True):
            val = obj.get(key)
            if val is None and not required:
                return None
            if (not isinstance(val, list) or not all(isinstance(r, list) for r in val)
                    or not all(isinstance(x, int) and not isinstance(x, bool) for r in val for x in r)):
                raise SchemaError(f"model field '{key}' must be a list of integer lists")
            return tuple(tuple(r) for r in val)

        charges = int_matrix("charges")
        reps = int_matrix("rep_charges")
        for key in ("s", "m"):
            if key in obj and not isinstance(obj[key], int):
                raise SchemaError(f"model field '{key}' must be an integer")
        if "s" in obj and obj["s"] != len(charges):
            raise SchemaError(f"model field 's' = {obj['s']} but 'charges' has {len(charges)} rows")
        if "m" in obj and charges and obj["m"] != len(charges[0]):
            raise SchemaError(f"model field 'm' = {obj['m']} but 'charges' has {len(charges[0])} columns")
        level = obj.get("level", 0)
        if not isinstance(level, int) or isinstance(level, bool):
            raise SchemaError("model field 'level' must be an integer")
        flags = obj.get("lambda_flags")
        if flags is not None and (not isinstance(flags, list)
                                  or not all(isinstance(x, bool) for x in flags)):
            raise SchemaError("model field 'lambda_flags' must be a list of booleans")
        names = {}
        for key in ("lambda_names", "p_names"):
            v = obj.get(key)
            if v is not None and (not isinstance(v, list) or not all(isinstance(x, str) for x in v)):
                raise SchemaError(f"model field '{key}' must be a list of strings")
            names[key] = tuple(v) if v is not None else None
        conv_raw = obj.get("convention", PrefixConvention.PROP_LITERAL.value)
        try:
            conv = PrefixConvention(conv_raw)
        except ValueError:
            raise SchemaError(
                f"model field 'convention' must be 'prop_literal' or 'thm_detmodify', got {conv_raw!r}"
            ) from None
        n_max = obj.get("n_max")
        if n_max is not None and (not isinstance(n_max, int) or n_max < 1):
            raise SchemaError("model field 'n_max' must be a positive integer")
        try:
            model = cls(charges, reps, level, tuple(flags) if flags is not None else None,
                        names["lambda_names"], names["p_names"], int_matrix("degrees", False), n_max)
        except ValueError as exc:
            raise SchemaError(f"invalid model: {exc}") from exc
        return model, conv


def level_factor(degree: Sequence[int], rep_charges: Sequence[Sequence[int]], level: int,
                 conv: PrefixConvention, p_names: Sequence[str]) -> ParamMonomial:
    """Monomial multiplying a degree-``degree`` term at level ``level``."""
    out = ParamMonomial()
    if level == 0:
        return out
    for r in rep_charges:
        b = sum(ri * fi for ri, fi in zip(r, degree))
        if conv is PrefixConvention.PROP_LITERAL:
            sign, qe = 1, b * (b - 1) // 2
        else:
            sign, qe = -1, b * (b + 1) // 2
        chern_root = ParamMonomial(1, 0, tuple(zip(p_names, r)))
        out = out * (chern_root ** (sign * b * level)).with_q(qe * level)
    return out


def i_term(model: ChargeModel, f: Sequence[int], conv: PrefixConvention) -> DegreeTerm:
    """The degree-``f`` summand of the level-l I-function (without the Q^f bookkeeping)."""
    f = model.check_degree(f)
    factors = []
    for rho, b in enumerate(model.beta(f)):
        u = model.u_monomial(rho)
        if b > 0:
            factors += [BinomFactor(u.with_q(j), -1) for j in range(1, b + 1)]
        elif b < 0:
            factors += [BinomFactor(u.with_q(j), 1) for j in range(b + 1, 1)]
    prefix = level_factor(f, model.rep_charges, model.level, conv, model.p_names)
    return DegreeTerm(f, prefix, tuple(factors))


def det_modify(term: DegreeTerm, rep_charges: Sequence[Sequence[int]], level: int,
               conv: PrefixConvention, p_names: Sequence[str] | None = None) -> DegreeTerm:
    """Multiply the term's prefix by the level-``level`` determinantal factor."""
    if p_names is None:
        s = len(term.degree)
        p_names = ("p",) if s == 1 else tuple(f"p_{a + 1}" for a in range(s))
    return term.with_prefix(level_factor(term.degree, rep_charges, level, conv, p_names))


def _check_spec(model: ChargeModel, spec: Specialization) -> None:
    missing = spec.missing(model.symbols(), model.s)
    if missing:
        raise UnmappedSymbolError(f"specialization does not map {', '.join(missing)}")


def i_function(model: ChargeModel, conv: PrefixConvention, spec: Specialization, trunc: int,
               degree_cap: int = DEFAULT_DEGREE_CAP) -> QSeries:
    """``1 + sum_f specialize(i_term(f))`` through ``q^trunc``.

    With automatic enumeration the sum stops once ``STOP_AFTER`` consecutive
    degrees have minimal q-order above ``trunc`` (vanishing terms count as
    such); reaching ``degree_cap`` first raises :class:`ConvergenceError`.
    """
    _check_spec(model, spec)
    total = QSeries.one(trunc, spec.field_order)
    quiet = 0
    for count, f in enumerate(model.iter_degrees(), start=1):
        if not any(f):
            # the constant term is already the leading 1
            continue
        if model.degrees is None and count > degree_cap:
            raise ConvergenceError(
                f"I-function did not converge q-adically within {degree_cap} degrees"
            )
        term = i_term(model, f, conv)
        parts = _analyse(term, spec)
        if parts is None or parts[1] > trunc:
            quiet += 1
            if model.degrees is None and quiet >= STOP_AFTER:
                break
            continue
        quiet = 0
        total = total + _expand(parts, spec, trunc)
    return total


# -- basic hypergeometric series -----------------------------------------------

def _poch_valuation(c: CycloNum, e: int, n: int) -> int | None:
    """Exact valuation of ``(c q^e; q)_n``; ``None`` if it vanishes identically."""
    v = 0
    for i in range(n):
        k = e + i
        if k < 0:
            v += k
        elif k == 0 and c.is_one():
            return None
    return v


def q_hypergeometric(r: int, s: int, alphas: Sequence[tuple], betas: Sequence[tuple],
                     z: tuple, trunc: int, field_order: int = DEFAULT_ORDER,
                     degree_cap: int = DEFAULT_DEGREE_CAP) -> QSeries:
    """The basic hypergeometric series r-phi-s with monomial parameters.

    ``sum_n (a_1;q)_n...(a_r;q)_n / ((b_1;q)_n...(b_s;q)_n (q;q)_n)
    z^n [(-1)^n q^(n(n-1)/2)]^(1+s-r)``, each parameter given as ``(c, e)``
    meaning ``c q^e``.  Computed directly from Pochhammer products.
    """
    if len(alphas) != r or len(betas) != s:
        raise ValueError(f"expected {r} alphas and {s} betas")
    alphas = [(as_cyclo(c, field_order), int(e)) for c, e in alphas]
    betas = [(as_cyclo(c, field_order), int(e)) for c, e in betas] + [(as_cyclo(1, field_order), 1)]
    zc, ze = as_cyclo(z[0], field_order), int(z[1])
    twist = 1 + s - r
    total = QSeries.zero(trunc, field_order)
    quiet = 0
    for n in range(degree_cap + 1):
        vn = 0
        dead = False
        for c, e in alphas:
            v = _poch_valuation(c, e, n)
            if v is None:
                dead = True
                break
            vn += v
        den_val = 0
        for c, e in betas:
            v = _poch_valuation(c, e, n)
            if v is None:
                raise PoleError(f"denominator Pochhammer ({c} q^{e}; q)_{n} vanishes")
            den_val += v
        q_shift = ze * n + twist * (n * (n - 1) // 2)
        if dead or q_shift + vn - den_val > trunc:
            quiet += 1
            if quiet >= STOP_AFTER:
                return total
            continue
        quiet = 0
        # working precision: num known to W exactly (a polynomial); the inverse of
        # den (valuation dv, known to W) is known to W - 2 dv
        work = trunc - q_shift - vn + 2 * abs(den_val) + abs(vn) + 2
        num = QSeries.one(work, field_order)
        for c, e in alphas:
            num = num * qs_pochhammer(c, e, n, work, field_order)
        den = QSeries.one(work, field_order)
        for c, e in betas:
            den = den * qs_pochhammer(c, e, n, work, field_order)
        sign = -1 if (twist * n) % 2 else 1
        term = (num * den.invert()).scale(zc ** n * sign).shift(q_shift)
        assert term.trunc >= trunc, "insufficient working precision"
        total = total + term.truncate(trunc)
    raise ConvergenceError(f"q-hypergeometric series did not converge within {degree_cap} terms")
