"""Seeded randomized invariant suites for every layer of the engine.

Each suite draws its cases from a ``random.Random`` seeded by the caller and
returns a :class:`SuiteResult`; nothing depends on wall-clock time, so two
runs with the same seed produce identical reports.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .exactnum import CycloNum, cyclotomic_poly, embed, zeta
from .iseries import ChargeModel, PrefixConvention, det_modify, i_function, i_term
from .qlaurent import QSeries, qs_pochhammer
from .symfactor import DegreeTerm, Specialization, min_q_order, specialize_term, term_vanishes


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: int = 0
    first_failure: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, what: Callable[[], str]) -> None:
        self.cases += 1
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = what()

    def to_json(self) -> dict:
        return {"suite": self.name, "cases": self.cases, "failures": self.failures,
                "first_failure": self.first_failure}

    def __str__(self) -> str:
        tag = "ok  " if self.passed else "FAIL"
        line = f"{tag} {self.name}: {self.cases} cases, {self.failures} failures"
        if self.first_failure:
            line += f" (first: {self.first_failure})"
        return line


# -- random generators -------------------------------------------------------

def rand_rational(rng: random.Random, span: int = 9, den: int = 6) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def rand_cyclo(rng: random.Random, order: int = 6, nonzero: bool = False) -> CycloNum:
    while True:
        c = CycloNum([rand_rational(rng) for _ in range(len(embed(0, order).coords))], order)
        if c or not nonzero:
            return c


def rand_series(rng: random.Random, order: int = 6, density: float = 0.6) -> QSeries:
    lo = rng.randint(-3, 3)
    trunc = lo + rng.randint(0, 10)
    coeffs = {k: rand_cyclo(rng, order) for k in range(lo, trunc + 1) if rng.random() < density}
    return QSeries(coeffs, trunc, order)


def rand_unitish_series(rng: random.Random, order: int = 6) -> QSeries:
    """A series whose lowest coefficient sits at a random Laurent exponent."""
    v = rng.randint(-3, 3)
    trunc = v + rng.randint(0, 10)
    coeffs = {k: rand_cyclo(rng, order) for k in range(v + 1, trunc + 1) if rng.random() < 0.6}
    coeffs[v] = rand_cyclo(rng, order, nonzero=True)
    return QSeries(coeffs, trunc, order)


def rand_charge_model(rng: random.Random, level: int | None = None) -> ChargeModel:
    m = rng.randint(1, 4)
    charges = (tuple(rng.randint(-3, 3) for _ in range(m)),)
    reps = tuple((rng.randint(-3, 3),) for _ in range(rng.randint(1, 2)))
    flags = tuple(rng.random() < 0.7 for _ in range(m))
    lvl = rng.randint(0, 3) if level is None else level
    return ChargeModel(charges, reps, lvl, flags)


# -- suites ------------------------------------------------------------------

def field_axioms(rng: random.Random, cases: int = 1000, order: int = 6) -> SuiteResult:
    res = SuiteResult(f"Q(zeta_{order}) field axioms")
    for _ in range(cases):
        a, b, c = (rand_cyclo(rng, order) for _ in range(3))
        ok = ((a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
              and a + b == b + a and a * b == b * a and a * (b + c) == a * b + a * c
              and a + (-a) == 0 and a * 1 == a)
        if a:
            ok = ok and a * a.inverse() == 1
        res.record(ok, lambda: f"a={a}, b={b}, c={c}")
    for n in (1, 2, 3, 4, 6):
        z = zeta(n)
        val = sum((z ** k * c for k, c in enumerate(cyclotomic_poly(n))), embed(0, n))
        res.record(val == 0 and z ** n == 1, lambda: f"zeta({n}) is not a primitive root")
    return res


def rational_embedding(rng: random.Random, cases: int = 200) -> SuiteResult:
    res = SuiteResult("rational embedding is a ring homomorphism")
    for _ in range(cases):
        x, y = rand_rational(rng), rand_rational(rng)
        ok = embed(x) * embed(y) == embed(x * y) and embed(x) + embed(y) == embed(x + y)
        res.record(ok, lambda: f"x={x}, y={y}")
    return res


def ring_axioms(rng: random.Random, cases: int = 1000) -> SuiteResult:
    res = SuiteResult("QSeries ring axioms up to truncation")
    for _ in range(cases):
        a, b, c = rand_series(rng), rand_series(rng), rand_series(rng)
        ok = (((a * b) * c).agrees_with(a * (b * c)) and (a * b).agrees_with(b * a)
              and (a * (b + c)).agrees_with(a * b + a * c)
              and ((a + b) + c).agrees_with(a + (b + c)) and (a + b) == (b + a))
        res.record(ok, lambda: f"a={a!r}, b={b!r}, c={c!r}")
    return res


def truncation_consistency(rng: random.Random, cases: int = 1000) -> SuiteResult:
    """Truncating the inputs to the orders a product needs leaves it unchanged."""
    res = SuiteResult("QSeries truncation consistency")
    for _ in range(cases):
        a, b = rand_unitish_series(rng), rand_unitish_series(rng)
        full = a * b
        # below the product's valuation, truncation erases the lowest terms
        T = max(full.trunc - rng.randint(0, 3), a.valuation() + b.valuation())
        lhs = full.truncate(T)
        rhs = a.truncate(T - b.valuation()) * b.truncate(T - a.valuation())
        res.record(lhs == rhs.truncate(T) and rhs.trunc >= T, lambda: f"a={a!r}, b={b!r}, T={T}")
    return res


def inverse_suite(rng: random.Random, cases: int = 300) -> SuiteResult:
    res = SuiteResult("qs_invert two-sided inverse")
    for _ in range(cases):
        a = rand_unitish_series(rng)
        inv = a.invert()
        left, right = a * inv, inv * a
        one = QSeries.one(left.trunc)
        ok = left.agrees_with(one) and right.agrees_with(one) and left.trunc >= 0
        res.record(ok, lambda: f"a={a!r}")
    return res


def pochhammer_recursion(rng: random.Random, cases: int = 200) -> SuiteResult:
    res = SuiteResult("Pochhammer recursion")
    for _ in range(cases):
        c = rand_cyclo(rng, nonzero=True)
        j0, n, T = rng.randint(-4, 4), rng.randint(0, 8), rng.randint(0, 25)
        step = QSeries.one(T + 40) - QSeries({j0 + n: c}, T + 40)
        lhs = qs_pochhammer(c, j0, n + 1, T)
        rhs = (qs_pochhammer(c, j0, n, T + 40) * step).truncate(T)
        res.record(lhs == rhs, lambda: f"c={c}, j0={j0}, n={n}, T={T}")
    return res


def substitution_homomorphism(rng: random.Random, cases: int = 200) -> SuiteResult:
    res = SuiteResult("q -> q^d substitution homomorphism")
    for _ in range(cases):
        a, b = rand_series(rng), rand_series(rng)
        d = rng.randint(1, 4)
        ok = ((a * b).subst_power(d).agrees_with(a.subst_power(d) * b.subst_power(d))
              and (a + b).subst_power(d) == a.subst_power(d) + b.subst_power(d))
        res.record(ok, lambda: f"a={a!r}, b={b!r}, d={d}")
    return res


def _rand_spec(rng: random.Random, model: ChargeModel, exps: bool = True,
               d: int | None = None) -> Specialization:
    sym = {}
    for name in model.symbols():
        c = rand_cyclo(rng, nonzero=True)
        sym[name] = (c, rng.randint(-1, 2) if exps else 0)
    nov = {"Q": (rand_cyclo(rng, nonzero=True), rng.randint(1, 3) if exps else 0)}
    return Specialization(sym, nov, d if d is not None else rng.randint(1, 3))


def det_modify_oracle(rng: random.Random, models: int = 50, max_degree: int = 10) -> SuiteResult:
    res = SuiteResult("det_modify(level-0 i_term) == level-l i_term")
    for _ in range(models):
        model = rand_charge_model(rng)
        base = model.with_level(0)
        for conv in PrefixConvention:
            for n in range(max_degree + 1):
                direct = i_term(model, (n,), conv)
                modified = det_modify(i_term(base, (n,), conv), model.rep_charges,
                                      model.level, conv, model.p_names)
                res.record(direct == modified,
                           lambda: f"model={model.to_json()}, n={n}, conv={conv.value}")
    return res


def det_modify_additive(rng: random.Random, cases: int = 200) -> SuiteResult:
    res = SuiteResult("det_modify levels add")
    for _ in range(cases):
        model = rand_charge_model(rng, level=0)
        conv = rng.choice(list(PrefixConvention))
        l1, l2 = rng.randint(-3, 3), rng.randint(-3, 3)
        t = i_term(model, (rng.randint(1, 10),), conv)
        twice = det_modify(det_modify(t, model.rep_charges, l1, conv), model.rep_charges, l2, conv)
        once = det_modify(t, model.rep_charges, l1 + l2, conv)
        res.record(twice == once, lambda: f"model={model.to_json()}, l1={l1}, l2={l2}")
    return res


def vanishing_mechanism(rng: random.Random, models: int = 50, max_degree: int = 8) -> SuiteResult:
    """Coordinates with beta_rho < 0 and U_rho -> 1 kill their degree terms."""
    res = SuiteResult("beta_rho < 0 with U_rho -> 1 contributes zero")
    done = 0
    while done < models:
        model = rand_charge_model(rng)
        negative = [r for r, c in enumerate(model.charges[0]) if c < 0]
        if not negative:
            continue
        rho = rng.choice(negative)
        sym = {"p": (embed(1), 0)}
        for r, name in enumerate(model.lambda_names):
            if model.lambda_flags[r]:
                sym[name] = (embed(1), 0) if r == rho else (rand_cyclo(rng, nonzero=True), 0)
        spec = Specialization(sym, {"Q": (embed(1), rng.randint(1, 3))}, rng.randint(1, 2))
        done += 1
        for n in range(1, max_degree + 1):
            term = i_term(model, (n,), PrefixConvention.PROP_LITERAL)
            if model.beta((n,))[rho] >= 0:
                continue
            series = specialize_term(term, spec, 15)
            res.record(term_vanishes(term, spec) and series.is_zero() and series.trunc == 15,
                       lambda: f"model={model.to_json()}, rho={rho}, n={n}")
    return res


def specialization_suite(rng: random.Random, cases: int = 100) -> SuiteResult:
    """Order bound, product compatibility, and series_power versus q -> q^d."""
    res = SuiteResult("specialize_term invariants")
    done = 0
    while done < cases:
        model = rand_charge_model(rng)
        conv = rng.choice(list(PrefixConvention))
        n1, n2 = rng.randint(1, 4), rng.randint(1, 4)
        t1, t2 = i_term(model, (n1,), conv), i_term(model, (n2,), conv)
        spec = _rand_spec(rng, model)
        try:
            if term_vanishes(t1, spec) or term_vanishes(t2, spec):
                continue
            T = 12
            bound, v2 = min_q_order(t1, spec), min_q_order(t2, spec)
            # deep negative valuations only cost time without adding coverage
            if min(bound, v2) < -12:
                continue
            s1 = specialize_term(t1, spec, T)
            ok = all(k >= bound for k in s1.exponents()) and (bound > T or s1[bound] != 0)
            prod = specialize_term(t1 * t2, spec, T)
            sep = specialize_term(t1, spec, T - v2) * specialize_term(t2, spec, T - bound)
            ok = ok and prod.agrees_with(sep)
            flat = _rand_spec(rng, model, exps=False, d=1)
            d = rng.randint(2, 3)
            scaled = Specialization(flat.sym_map, flat.novikov_map, d)
            ok = ok and specialize_term(t1, scaled, T).agrees_with(
                specialize_term(t1, flat, T).subst_power(d))
        except ZeroDivisionError:
            continue
        done += 1
        res.record(ok, lambda: f"model={model.to_json()}, n1={n1}, n2={n2}")
    return res


SUITES: dict[str, Callable[[random.Random], SuiteResult]] = {
    "field_axioms": field_axioms,
    "rational_embedding": rational_embedding,
    "ring_axioms": ring_axioms,
    "truncation_consistency": truncation_consistency,
    "inverse": inverse_suite,
    "pochhammer_recursion": pochhammer_recursion,
    "substitution_homomorphism": substitution_homomorphism,
    "det_modify_oracle": det_modify_oracle,
    "det_modify_additive": det_modify_additive,
    "vanishing": vanishing_mechanism,
    "specialization": specialization_suite,
}

SMALL_SIZES = {
    "field_axioms": {"cases": 200},
    "rational_embedding": {"cases": 100},
    "ring_axioms": {"cases": 150},
    "truncation_consistency": {"cases": 150},
    "inverse": {"cases": 100},
    "pochhammer_recursion": {"cases": 100},
    "substitution_homomorphism": {"cases": 100},
    "det_modify_oracle": {"models": 20},
    "det_modify_additive": {"cases": 100},
    "vanishing": {"models": 20},
    "specialization": {"cases": 40},
}


def run_all(seed: int = 0, small: bool = True) -> list[SuiteResult]:
    """Run every suite with its own stream derived from ``seed``."""
    out = []
    for name, fn in SUITES.items():
        rng = random.Random(f"{seed}:{name}")
        kwargs = SMALL_SIZES[name] if small else {}
        out.append(fn(rng, **kwargs))
    return out
