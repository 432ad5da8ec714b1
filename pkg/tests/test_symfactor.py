from fractions import Fraction

import pytest

from qlevels.errors import PoleError, SchemaError, UnmappedSymbolError
from qlevels.exactnum import embed, zeta
from qlevels.iseries import ChargeModel, PrefixConvention, i_term
from qlevels.qlaurent import QSeries
from qlevels.symfactor import (
    BinomFactor,
    DegreeTerm,
    ParamMonomial,
    Specialization,
    min_q_order,
    novikov_names,
    specialize_term,
    term_vanishes,
)

LIT = PrefixConvention.PROP_LITERAL
X = ChargeModel(((1,),), ((1,),), 1, lambda_names=("lambda",))
X2M1 = ChargeModel(((2, -1),), ((1,),), 3, lambda_names=("lambda", "mu"))


def spec(syms, Q, d=1):
    return Specialization({k: (embed(c), e) for k, (c, e) in syms.items()},
                          {"Q": (embed(Q[0]), Q[1])}, d)


def test_novikov_names():
    assert novikov_names(1) == ("Q",)
    assert novikov_names(3) == ("Q_1", "Q_2", "Q_3")


def test_monomial_algebra():
    a = ParamMonomial.of(2, 1, p=1, lam=-1)
    b = ParamMonomial.of(Fraction(1, 2), 3, lam=1)
    assert a * b == ParamMonomial.of(1, 4, p=1)
    assert (a ** 2).coeff == 4 and (a ** 2).exponent("lam") == -2
    assert a.with_q(5).q_exp == 6
    assert ParamMonomial.of(1, 0, x=0).symbols() == set()


def test_degree_term_canonical_form():
    m = ParamMonomial.of(1, 1, p=1)
    t1 = DegreeTerm((1,), factors=(BinomFactor(m, -1), BinomFactor(m, 2)))
    t2 = DegreeTerm((1,), factors=(BinomFactor(m, 1),))
    assert t1 == t2
    assert DegreeTerm((1,), factors=(BinomFactor(m, 1), BinomFactor(m, -1))).factors == ()
    prod = t2 * DegreeTerm((2,), ParamMonomial.of(3))
    assert prod.degree == (3,) and prod.prefix.coeff == 3


def test_degree_term_json_roundtrip():
    t = i_term(X2M1, (3,), LIT)
    assert DegreeTerm.from_json(t.to_json()) == t


def test_specialization_json_roundtrip():
    s = Specialization({"lambda": (zeta(6), -1), "p": (1, 0)}, {"Q": (Fraction(-1, 2), 2)}, 2)
    assert Specialization.from_json(s.to_json()) == s
    with pytest.raises(SchemaError):
        Specialization.from_json({"sym_map": {}, "novikov_map": {}, "series_power": 0})


def test_specialization_rejects_zero_constant():
    with pytest.raises(ValueError):
        Specialization({"p": (0, 0)}, {"Q": (1, 1)})


def test_prop1_first_term():
    # degree-one term p Q / (1 - p q / lambda) at p=1, lambda=-1, Q=q, q -> q^2 internally
    term = i_term(X, (1,), LIT)
    s = spec({"p": (1, 0), "lambda": (-1, 0)}, (1, 1), d=2)
    assert specialize_term(term, s, 6) == QSeries({1: 1, 3: -1, 5: 1}, 6)
    assert min_q_order(term, s) == 1


def test_vanishing_numerator():
    term = i_term(X2M1, (2,), LIT)
    s = spec({"p": (1, 0), "lambda": (1, 0), "mu": (1, 0)}, (1, 1))
    assert term_vanishes(term, s)
    assert specialize_term(term, s, 10).is_zero()
    with pytest.raises(ValueError):
        min_q_order(term, s)


def test_pole_in_denominator():
    term = i_term(X, (2,), LIT)
    s = spec({"p": (1, 0), "lambda": (1, 1)}, (1, 1))
    with pytest.raises(PoleError):
        specialize_term(term, s, 5)


def test_unmapped_symbol():
    term = i_term(X, (1,), LIT)
    with pytest.raises(UnmappedSymbolError):
        specialize_term(term, spec({"p": (1, 0)}, (1, 1)), 5)
    s = spec({"p": (1, 0), "lambda": (1, 0)}, (1, 1))
    assert s.missing(["p", "lambda", "nu"], 2) == ["nu", "Q_1", "Q_2"]


def test_negative_exponent_factor_unit_extraction():
    # 1/(1 - 2 q^-1) = -q/2 * 1/(1 - q/2)
    term = DegreeTerm((0,), factors=(BinomFactor(ParamMonomial.of(2, -1), -1),))
    s = Specialization({}, {"Q": (1, 0)})
    expected = QSeries({k: -Fraction(1, 2) ** k for k in range(1, 8)}, 7)
    assert specialize_term(term, s, 7) == expected
    assert min_q_order(term, s) == 1


@pytest.mark.parametrize("lam, Q, growth", [
    ((1, 0), (-1, 2), lambda n: n * n),
    ((1, -1), (-1, 4), lambda n: n * n + 2 * n),
    ((1, -1), (-1, 3), lambda n: n * n + n),
])
def test_seventh_order_terms_grow_quadratically(lam, Q, growth):
    s = spec({"p": (1, 0), "lambda": lam, "mu": (1, 1)}, Q)
    orders = [min_q_order(i_term(X2M1, (n,), LIT), s) for n in range(1, 11)]
    assert orders == [growth(n) for n in range(1, 11)]
    assert all(a < b for a, b in zip(orders, orders[1:]))


def test_min_q_order_is_attained():
    s = spec({"p": (1, 0), "lambda": (1, -1), "mu": (1, 1)}, (-1, 3))
    for n in range(1, 6):
        term = i_term(X2M1, (n,), LIT)
        v = min_q_order(term, s)
        series = specialize_term(term, s, v + 3)
        assert series.valuation() == v
