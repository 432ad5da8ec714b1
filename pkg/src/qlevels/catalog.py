"""Registry of mock theta identities and their independent right-hand sides.

Each right-hand side is summed directly from its displayed form using only
:mod:`qlevels.qlaurent`; none of it goes through the symbolic layer, so a
passing identity compares two genuinely separate computations.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import QLevelsError
from .exactnum import DEFAULT_ORDER, CycloNum, embed, zeta
from .iseries import ChargeModel, PrefixConvention, i_function, q_hypergeometric
from .qlaurent import QSeries, monomial
from .symfactor import Specialization

__all__ = [
    "IdentitySpec",
    "Report",
    "mock_theta",
    "oracle_ids",
    "prefactor",
    "PREFACTORS",
    "registry",
    "lookup",
    "list_identities",
    "verify_identity",
    "verify_prop4_family",
    "prop4_model",
    "prop4_parameters",
    "DEFAULT_TRUNC",
    "PROP4_SHAPES",
]

DEFAULT_TRUNC = 30
PROP4_SHAPES = ((1, 1), (2, 1), (1, 2))
PROP4_TRIALS = 5
PROP4_TRUNC = 20
PROP4_NAME = "prop4.family"


# -- right-hand-side oracles ---------------------------------------------------

def _one(T: int) -> QSeries:
    return QSeries.one(T)


def _poly(coeffs: dict[int, int], T: int) -> QSeries:
    return QSeries(coeffs, T)


def _sum(first: int, lead: Callable[[int], int], denominator: Callable[[int, int], QSeries],
         T: int, constant: int = 0) -> QSeries:
    """``constant + sum_{n >= first} q^lead(n) / denominator(n)``.

    ``lead`` must be increasing from ``first`` on; the sum stops at the first
    ``n`` with ``lead(n) > T``.  Every displayed denominator is a product of
    polynomials with constant term 1, so ``q^lead(n)`` is the exact valuation.
    """
    total = QSeries({0: constant}, T)
    n = first
    while lead(n) <= T:
        prec = T - lead(n)
        den = denominator(n, prec)
        total = total + den.invert().shift(lead(n))
        n += 1
    return total


def _prod(factors, prec: int) -> QSeries:
    out = QSeries.one(prec)
    for f in factors:
        out = out * f
    return out


def _binom(sign: int, e: int, prec: int) -> QSeries:
    """``1 + sign q^e``."""
    return _poly({0: 1, e: sign}, prec)


# order 3, rank-one space at level 1
def _p1_o3_a(T):
    return _sum(1, lambda n: n * n,
                lambda n, P: _prod((_binom(1, 2 * j, P) for j in range(1, n + 1)), P), T, 1)


def _p1_o3_b(T):
    return _sum(1, lambda n: n * n,
                lambda n, P: _prod((_binom(-1, 2 * j - 1, P) for j in range(1, n + 1)), P), T, 1)


def _p1_o3_c(T):
    return _sum(1, lambda n: n * (n - 1),
                lambda n, P: _prod((_binom(1, 2 * j - 1, P) for j in range(1, n + 1)), P), T, 1)


# order 5, rank-one space at level 2
def _p1_o5_a(T):
    return _sum(1, lambda n: n * n,
                lambda n, P: _prod((_binom(1, j, P) for j in range(1, n + 1)), P), T, 1)


def _p1_o5_b(T):
    return _sum(1, lambda n: 2 * n * n,
                lambda n, P: _prod((_binom(-1, 2 * j - 1, P) for j in range(1, n + 1)), P), T, 1)


def _p1_o5_c(T):
    return _sum(1, lambda n: n * (n + 1),
                lambda n, P: _prod((_binom(1, j, P) for j in range(1, n + 1)), P), T, 1)


def _p1_o5_d(T):
    return _sum(1, lambda n: 2 * n * n + 2 * n,
                lambda n, P: _prod((_binom(-1, 2 * j - 1, P) for j in range(1, n + 1)), P), T, 1)


# order 3, two charge-one coordinates at level 2
def _p2_o3_a(T):
    return _sum(1, lambda n: n * n,
                lambda n, P: _prod((_binom(1, j, P) for j in range(1, n + 1)), P) ** 2, T, 1)


def _p2_o3_b(T):
    return _sum(1, lambda n: n * n,
                lambda n, P: _prod((_poly({0: 1, j: -1, 2 * j: 1}, P) for j in range(1, n + 1)), P),
                T, 1)


def _p2_o3_c(T):
    return _sum(0, lambda n: 2 * n * n + 2 * n,
                lambda n, P: _prod((_binom(-1, 2 * j + 1, P) for j in range(0, n + 1)), P) ** 2, T)


def _p2_o3_d(T):
    return _sum(0, lambda n: 2 * n * n + 2 * n,
                lambda n, P: _prod((_poly({0: 1, 2 * j + 1: 1, 4 * j + 2: 1}, P)
                                    for j in range(0, n + 1)), P), T)


# order 7, charges (2, -1) at level 3
def _p3_o7_a(T):
    return _sum(1, lambda n: n * n,
                lambda n, P: _prod((_binom(-1, k, P) for k in range(n + 1, 2 * n + 1)), P), T, 1)


def _p3_o7_b(T):
    return _sum(1, lambda n: n * n,
                lambda n, P: _prod((_binom(-1, k, P) for k in range(n, 2 * n)), P), T)


def _p3_o7_c(T):
    return _sum(1, lambda n: n * n - n,
                lambda n, P: _prod((_binom(-1, k, P) for k in range(n, 2 * n)), P), T)


_ORACLES: dict[str, tuple[Callable[[int], QSeries], str]] = {
    "p1.o3.a": (_p1_o3_a, "1 + sum_{n>=1} q^(n^2) / ((1+q^2)(1+q^4)...(1+q^(2n)))"),
    "p1.o3.b": (_p1_o3_b, "1 + sum_{n>=1} q^(n^2) / ((1-q)(1-q^3)...(1-q^(2n-1)))"),
    "p1.o3.c": (_p1_o3_c, "1 + sum_{n>=1} q^(n(n-1)) / ((1+q)(1+q^3)...(1+q^(2n-1)))"),
    "p1.o5.a": (_p1_o5_a, "1 + sum_{n>=1} q^(n^2) / ((1+q)(1+q^2)...(1+q^n))"),
    "p1.o5.b": (_p1_o5_b, "1 + sum_{n>=1} q^(2n^2) / ((1-q)(1-q^3)...(1-q^(2n-1)))"),
    "p1.o5.c": (_p1_o5_c, "1 + sum_{n>=1} q^(n(n+1)) / ((1+q)(1+q^2)...(1+q^n))"),
    "p1.o5.d": (_p1_o5_d, "1 + sum_{n>=1} q^(2n^2+2n) / ((1-q)(1-q^3)...(1-q^(2n-1)))"),
    "p2.o3.a": (_p2_o3_a, "1 + sum_{n>=1} q^(n^2) / ((1+q)(1+q^2)...(1+q^n))^2  [third-order f(q)]"),
    "p2.o3.b": (_p2_o3_b, "1 + sum_{n>=1} q^(n^2) / ((1-q+q^2)(1-q^2+q^4)...(1-q^n+q^(2n)))"),
    "p2.o3.c": (_p2_o3_c, "sum_{n>=0} q^(2n^2+2n) / ((1-q)(1-q^3)...(1-q^(2n+1)))^2"),
    "p2.o3.d": (_p2_o3_d, "sum_{n>=0} q^(2n^2+2n) / ((1+q+q^2)(1+q^3+q^6)...(1+q^(2n+1)+q^(4n+2)))"),
    "p3.o7.a": (_p3_o7_a, "1 + sum_{n>=1} q^(n^2) / ((1-q^(n+1))...(1-q^(2n)))"),
    "p3.o7.b": (_p3_o7_b, "sum_{n>=1} q^(n^2) / ((1-q^n)...(1-q^(2n-1)))"),
    "p3.o7.c": (_p3_o7_c, "sum_{n>=1} q^(n^2-n) / ((1-q^n)...(1-q^(2n-1)))"),
}


def oracle_ids() -> list[str]:
    return list(_ORACLES)


def mock_theta(oracle_id: str, trunc: int) -> QSeries:
    """The displayed right-hand-side series ``oracle_id`` through ``q^trunc``."""
    try:
        fn, _ = _ORACLES[oracle_id]
    except KeyError:
        raise KeyError(f"unknown oracle {oracle_id!r}") from None
    return fn(trunc)


# -- prefactors ------------------------------------------------------------------

PREFACTORS: dict[str, str] = {
    "unit": "1",
    "inv_one_minus_q_sq": "1/(1-q)^2",
    "inv_one_plus_q_plus_q2": "1/(1+q+q^2)",
    "q_over_one_minus_q": "q/(1-q)",
    "inv_one_minus_q": "1/(1-q)",
}


def prefactor(recipe: str, trunc: int) -> QSeries:
    if recipe == "unit":
        return QSeries.one(trunc)
    if recipe == "inv_one_minus_q_sq":
        return QSeries({0: 1, 1: -1}, trunc).invert() ** 2
    if recipe == "inv_one_plus_q_plus_q2":
        return QSeries({0: 1, 1: 1, 2: 1}, trunc).invert()
    if recipe == "q_over_one_minus_q":
        return QSeries({0: 1, 1: -1}, trunc).invert().shift(1).truncate(trunc)
    if recipe == "inv_one_minus_q":
        return QSeries({0: 1, 1: -1}, trunc).invert()
    raise KeyError(f"unknown prefactor {recipe!r}")


# -- identity records ------------------------------------------------------------

@dataclass(frozen=True)
class IdentitySpec:
    name: str
    reference: str
    description: str
    model: ChargeModel
    convention: PrefixConvention
    spec: Specialization
    prefactor: str
    rhs_oracle: str
    offset: int
    default_trunc: int = DEFAULT_TRUNC
    classical: str = ""

    def __post_init__(self):
        if self.rhs_oracle not in _ORACLES:
            raise ValueError(f"identity {self.name}: unknown oracle {self.rhs_oracle!r}")
        if self.prefactor not in PREFACTORS:
            raise ValueError(f"identity {self.name}: unknown prefactor {self.prefactor!r}")
        missing = self.spec.missing(self.model.symbols(), self.model.s)
        if missing:
            raise ValueError(f"identity {self.name}: specialization misses {missing}")

    def lhs(self, trunc: int) -> QSeries:
        series = i_function(self.model, self.convention, self.spec, trunc)
        return (prefactor(self.prefactor, trunc) * series).truncate(trunc)

    def rhs(self, trunc: int) -> QSeries:
        return mock_theta(self.rhs_oracle, trunc)

    def summary(self) -> dict:
        return {
            "name": self.name,
            "reference": self.reference,
            "description": self.description,
            "prefactor": PREFACTORS[self.prefactor],
            "rhs": _ORACLES[self.rhs_oracle][1],
            "rhs_oracle": self.rhs_oracle,
            "offset": self.offset,
            "classical": self.classical,
            "model": self.model.to_json(self.convention),
            "specialization": self.spec.to_json(),
        }


LIT = PrefixConvention.PROP_LITERAL
_ST = ((1,),)
_ST_DUAL = ((-1,),)


def _v(c, e=0):
    return (c if isinstance(c, CycloNum) else embed(c), e)


def _spec(syms: dict, Q, d: int) -> Specialization:
    return Specialization({k: _v(*v) for k, v in syms.items()}, {"Q": _v(*Q)}, d)


def _build_registry() -> list[IdentitySpec]:
    x = ChargeModel(((1,),), _ST, 1, lambda_names=("lambda",))
    x_l2 = x.with_level(2)
    x_dual_l2 = ChargeModel(((1,),), _ST_DUAL, 2, lambda_names=("lambda",))
    x11 = ChargeModel(((1, 1),), _ST, 2, lambda_names=("lambda_1", "lambda_2"))
    x11_dual = ChargeModel(((1, 1),), _ST_DUAL, 2, lambda_names=("lambda_1", "lambda_2"))
    x2m1 = ChargeModel(((2, -1),), _ST, 3, lambda_names=("lambda", "mu"))

    w = zeta(6)            # (1 + sqrt(3) i)/2
    w_bar = 1 - w          # (1 - sqrt(3) i)/2
    omega = w * w          # (-1 + sqrt(3) i)/2
    omega_bar = -w         # (-1 - sqrt(3) i)/2

    def rec(name, ref, desc, model, spec, pref, oracle, offset, classical=""):
        return IdentitySpec(name, ref, desc, model, LIT, spec, pref, oracle, offset,
                            classical=classical)

    return [
        rec("prop1.order3.a", "Proposition 1 (order 3, first)",
            "I^{St,l=1}(q^2,Q) at lambda=-1, Q=q", x,
            _spec({"p": (1,), "lambda": (-1,)}, (1, 1), 2), "unit", "p1.o3.a", 1),
        rec("prop1.order3.b", "Proposition 1 (order 3, second)",
            "I^{St,l=1}(q^2,Q) at lambda=q, Q=q", x,
            _spec({"p": (1,), "lambda": (1, 1)}, (1, 1), 2), "unit", "p1.o3.b", 1),
        rec("prop1.order3.c", "Proposition 1 (order 3, third)",
            "I^{St,l=1}(q^2,Q) at lambda=-q, Q=1", x,
            _spec({"p": (1,), "lambda": (-1, 1)}, (1, 0), 2), "unit", "p1.o3.c", 1),
        rec("prop1.order5.a", "Proposition 1 (order 5, first)",
            "I^{St,l=2}(q,Q) at lambda=-1, Q=q", x_l2,
            _spec({"p": (1,), "lambda": (-1,)}, (1, 1), 1), "unit", "p1.o5.a", 1),
        rec("prop1.order5.b", "Proposition 1 (order 5, second)",
            "I^{St,l=2}(q^2,Q) at lambda=q, Q=q^2", x_l2,
            _spec({"p": (1,), "lambda": (1, 1)}, (1, 2), 2), "unit", "p1.o5.b", 1),
        rec("prop1.order5.c", "Proposition 1 (order 5, third)",
            "I^{St^v,l=2}(q,Q) at lambda=-1, Q=1", x_dual_l2,
            _spec({"p": (1,), "lambda": (-1,)}, (1, 0), 1), "unit", "p1.o5.c", 1),
        rec("prop1.order5.d", "Proposition 1 (order 5, fourth)",
            "I^{St^v,l=2}(q^2,Q) at lambda=q, Q=1", x_dual_l2,
            _spec({"p": (1,), "lambda": (1, 1)}, (1, 0), 2), "unit", "p1.o5.d", 1),
        # the displayed I(q^2, Q) does not reproduce f(q); I(q, Q) does
        rec("prop2.order3.a", "Proposition 2 (first)",
            "I^{St,l=2}_{X_{1,1}}(q,Q) at p=1, lambda_1=lambda_2=-1, Q=q", x11,
            _spec({"p": (1,), "lambda_1": (-1,), "lambda_2": (-1,)}, (1, 1), 1),
            "unit", "p2.o3.a", 1, classical="third-order f(q)"),
        rec("prop2.order3.b", "Proposition 2 (second)",
            "I^{St,l=2}_{X_{1,1}}(q,Q) at p=1, lambda_{1,2}=(1 +- sqrt(3) i)/2, Q=q", x11,
            _spec({"p": (1,), "lambda_1": (w,), "lambda_2": (w_bar,)}, (1, 1), 1),
            "unit", "p2.o3.b", 1, classical="third-order chi(q)"),
        rec("prop2.order3.c", "Proposition 2 (third)",
            "1/(1-q)^2 I^{St^v,l=2}_{X_{1,1}}(q^2,Q) at p=1, lambda_1=lambda_2=q^-1, Q=1", x11_dual,
            _spec({"p": (1,), "lambda_1": (1, -1), "lambda_2": (1, -1)}, (1, 0), 2),
            "inv_one_minus_q_sq", "p2.o3.c", 0, classical="third-order omega(q)"),
        rec("prop2.order3.d", "Proposition 2 (fourth)",
            "1/(1+q+q^2) I^{St^v,l=2}_{X_{1,1}}(q^2,Q) at p=1, "
            "lambda_{1,2}=(-1 +- sqrt(3) i)/2 q^-1, Q=1", x11_dual,
            _spec({"p": (1,), "lambda_1": (omega, -1), "lambda_2": (omega_bar, -1)}, (1, 0), 2),
            "inv_one_plus_q_plus_q2", "p2.o3.d", 0, classical="third-order rho(q)"),
        rec("prop3.order7.a", "Proposition 3 (first)",
            "I^{St,l=3}_{X_{2,-1}}(q,Q) at p=1, lambda=1, mu=q, Q=-q^2", x2m1,
            _spec({"p": (1,), "lambda": (1,), "mu": (1, 1)}, (-1, 2), 1),
            "unit", "p3.o7.a", 1, classical="seventh-order F0(q)"),
        rec("prop3.order7.b", "Proposition 3 (second)",
            "q/(1-q) I^{St,l=3}_{X_{2,-1}}(q,Q) at p=1, lambda=q^-1, mu=q, Q=-q^4", x2m1,
            _spec({"p": (1,), "lambda": (1, -1), "mu": (1, 1)}, (-1, 4), 1),
            "q_over_one_minus_q", "p3.o7.b", 1, classical="seventh-order F1(q)"),
        rec("prop3.order7.c", "Proposition 3 (third)",
            "1/(1-q) I^{St,l=3}_{X_{2,-1}}(q,Q) at p=1, lambda=q^-1, mu=q, Q=-q^3", x2m1,
            _spec({"p": (1,), "lambda": (1, -1), "mu": (1, 1)}, (-1, 3), 1),
            "inv_one_minus_q", "p3.o7.c", 1, classical="seventh-order F2(q)"),
    ]


_REGISTRY: list[IdentitySpec] | None = None


def registry() -> list[IdentitySpec]:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _build_registry()
    return list(_REGISTRY)


def lookup(name: str) -> IdentitySpec | None:
    for ident in registry():
        if ident.name == name:
            return ident
    return None


def list_identities() -> list[tuple[str, str, str]]:
    out = [(i.name, i.reference, i.description) for i in registry()]
    out.append((PROP4_NAME, "Proposition 4",
                "I^{St,l=1+s} of X_{1,-1} equals r-phi-s for seeded random rational parameters, "
                f"(r,s) in {list(PROP4_SHAPES)}"))
    return out


# -- verification -----------------------------------------------------------------

@dataclass
class Report:
    name: str
    status: str
    trunc: int
    first_mismatch: dict | None = None
    elapsed_ms: float = 0.0
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "status": self.status,
            "trunc": self.trunc,
            "first_mismatch": self.first_mismatch,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }
        if self.detail:
            out["detail"] = self.detail
        return out

    def __str__(self) -> str:
        line = f"{self.status.upper():4s} {self.name} (trunc {self.trunc}, {self.elapsed_ms:.0f} ms)"
        if self.first_mismatch:
            fm = self.first_mismatch
            line += f": first mismatch at q^{fm['exp']}: lhs {fm['lhs']}, rhs {fm['rhs']}"
        if self.detail:
            line += f" [{self.detail}]"
        return line


def compare(name: str, lhs: QSeries, rhs: QSeries, trunc: int, started: float) -> Report:
    k = lhs.truncate(trunc).first_difference(rhs.truncate(trunc))
    mismatch = None if k is None else {"exp": k, "lhs": str(lhs[k]), "rhs": str(rhs[k])}
    status = "pass" if k is None else "fail"
    return Report(name, status, trunc, mismatch, (time.perf_counter() - started) * 1e3)


def verify_identity(ident: IdentitySpec, trunc: int | None = None) -> Report:
    """Expand both sides through ``q^trunc`` and compare coefficient by coefficient."""
    trunc = ident.default_trunc if trunc is None else trunc
    started = time.perf_counter()
    return compare(ident.name, ident.lhs(trunc), ident.rhs(trunc), trunc, started)


# -- r-phi-s family ----------------------------------------------------------------

def prop4_model(r: int, s: int) -> ChargeModel:
    """``O(-1)^r`` over ``P^s``: s+1 charge-one coordinates and r charge minus one.

    The last charge-one coordinate carries no equivariant parameter, so at
    ``p = 1`` it produces the ``(q;q)_n`` denominator of r-phi-s.
    """
    lam = tuple(f"lambda_{i + 1}" for i in range(s)) + ("lambda_0",)
    mus = tuple(f"mu_{j + 1}" for j in range(r))
    flags = (True,) * s + (False,) + (True,) * r
    charges = ((1,) * (s + 1) + (-1,) * r,)
    return ChargeModel(charges, _ST, 1 + s, flags, lam + mus)


def _small_rational(rng: random.Random, avoid: set[Fraction]) -> Fraction:
    while True:
        x = Fraction(rng.randint(-7, 7), rng.randint(1, 5))
        if x and x not in avoid:
            return x


def prop4_parameters(r: int, s: int, rng: random.Random):
    """Random rational alphas, betas and z = c q; betas avoid 1 so no Pochhammer pole."""
    alphas = [_small_rational(rng, {Fraction(1)}) for _ in range(r)]
    betas = [_small_rational(rng, {Fraction(1)}) for _ in range(s)]
    zc = _small_rational(rng, set())
    return alphas, betas, zc


def prop4_specialization(r: int, s: int, alphas, betas, zc) -> Specialization:
    """p=1, lambda_i^-1 q = beta_i, mu_j = alpha_j, Q = (-1)^(1+s) z prod alpha_j with z = zc q."""
    sym = {"p": _v(1)}
    for i, b in enumerate(betas):
        sym[f"lambda_{i + 1}"] = (embed(1 / b), 1)
    for j, a in enumerate(alphas):
        sym[f"mu_{j + 1}"] = (embed(a), 0)
    qc = Fraction((-1) ** (1 + s)) * zc
    for a in alphas:
        qc *= a
    return Specialization(sym, {"Q": (embed(qc), 1)}, 1)


def verify_prop4_family(seed: int = 0, trunc: int = PROP4_TRUNC,
                        trials: int = PROP4_TRIALS, shapes=PROP4_SHAPES) -> list[Report]:
    rng = random.Random(seed)
    reports = []
    for r, s in shapes:
        model = prop4_model(r, s)
        for t in range(trials):
            alphas, betas, zc = prop4_parameters(r, s, rng)
            started = time.perf_counter()
            spec = prop4_specialization(r, s, alphas, betas, zc)
            lhs = i_function(model, LIT, spec, trunc)
            rhs = q_hypergeometric(r, s, [(a, 0) for a in alphas], [(b, 0) for b in betas],
                                   (zc, 1), trunc)
            rep = compare(f"{PROP4_NAME}[r={r},s={s},trial={t}]", lhs, rhs, trunc, started)
            rep.detail = (f"alphas={[str(a) for a in alphas]} betas={[str(b) for b in betas]} "
                          f"z={zc}*q")
            reports.append(rep)
    return reports


def summarize_family(reports: list[Report], trunc: int) -> Report:
    failed = [r for r in reports if not r.passed]
    elapsed = sum(r.elapsed_ms for r in reports)
    if not failed:
        return Report(PROP4_NAME, "pass", trunc, None, elapsed, f"{len(reports)} trials")
    first = failed[0]
    return Report(PROP4_NAME, "fail", trunc, first.first_mismatch, elapsed,
                  f"{len(failed)}/{len(reports)} trials failed; first: {first.name}")
