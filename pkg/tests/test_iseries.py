import pytest

from qlevels.errors import ConvergenceError, DegreeError, SchemaError, UnmappedSymbolError
from qlevels.exactnum import embed
from qlevels.iseries import (
    ChargeModel,
    PrefixConvention,
    det_modify,
    i_function,
    i_term,
    level_factor,
    q_hypergeometric,
)
from qlevels.qlaurent import QSeries
from qlevels.symfactor import BinomFactor, ParamMonomial, Specialization

LIT = PrefixConvention.PROP_LITERAL
THM = PrefixConvention.THM_DETMODIFY
X = ChargeModel(((1,),), ((1,),), 1, lambda_names=("lambda",))
X2M1 = ChargeModel(((2, -1),), ((1,),), 3, lambda_names=("lambda", "mu"))


def int_product(factors, trunc):
    """Plain-integer truncated product of (1 - q^k)^power, used as an independent oracle."""
    out = [1] + [0] * trunc
    for k, power in factors:
        for _ in range(abs(power)):
            if power > 0:
                for i in range(trunc, k - 1, -1):
                    out[i] -= out[i - k]
            else:
                for i in range(k, trunc + 1):
                    out[i] += out[i - k]
    return out


def test_i_term_prop1_shape():
    t = i_term(X, (3,), LIT)
    assert t.prefix == ParamMonomial.of(1, 3, p=3)
    den = [BinomFactor(ParamMonomial.of(1, j, p=1, **{"lambda": -1}), -1) for j in (1, 2, 3)]
    assert t.factors == tuple(sorted(den, key=lambda f: f.mono._key()))


def test_i_term_negative_charge_numerators():
    t = i_term(X2M1, (2,), LIT)
    nums = [f for f in t.factors if f.power > 0]
    # beta = -2 gives numerators at j = -1, 0
    assert sorted(f.mono.q_exp for f in nums) == [-1, 0]
    assert all(f.mono.exponent("p") == -1 and f.mono.exponent("mu") == -1 for f in nums)
    assert sum(-f.power for f in t.factors if f.power < 0) == 4


def test_degree_zero_term_is_one():
    t = i_term(X2M1, (0,), LIT)
    assert t.factors == () and t.prefix == ParamMonomial()


def test_level_factor_conventions():
    assert level_factor((4,), ((1,),), 2, LIT, ("p",)) == ParamMonomial.of(1, 12, p=8)
    assert level_factor((4,), ((1,),), 2, THM, ("p",)) == ParamMonomial.of(1, 20, p=-8)
    assert level_factor((3,), ((-1,),), 1, LIT, ("p",)) == ParamMonomial.of(1, 6, p=3)
    assert level_factor((5,), ((1,),), 0, THM, ("p",)) == ParamMonomial()


def test_rank_two_representation():
    n, level = 3, 2
    got = level_factor((n,), ((1,), (1,)), level, THM, ("p",))
    assert got == ParamMonomial.of(1, n * (n + 1) // 2 * 2 * level, p=-2 * n * level)


def test_det_modify_matches_direct_level():
    base = X2M1.with_level(0)
    for conv in (LIT, THM):
        for n in range(6):
            direct = i_term(X2M1.with_level(2), (n,), conv)
            assert det_modify(i_term(base, (n,), conv), ((1,),), 2, conv) == direct


def test_check_degree():
    with pytest.raises(DegreeError):
        i_term(X, (1, 2), LIT)


def test_i_function_trunc_zero():
    s = Specialization({"p": (1, 0), "lambda": (-1, 0)}, {"Q": (1, 1)}, 2)
    assert i_function(X, LIT, s, 0) == QSeries.one(0)


def test_i_function_unmapped():
    with pytest.raises(UnmappedSymbolError):
        i_function(X, LIT, Specialization({"p": (1, 0)}, {"Q": (1, 1)}), 5)


def test_i_function_convergence_error():
    flat = X.with_level(0)
    s = Specialization({"p": (1, 0), "lambda": (2, 0)}, {"Q": (1, 0)})
    with pytest.raises(ConvergenceError):
        i_function(flat, LIT, s, 3, degree_cap=40)


def test_explicit_degrees_skip_convergence_rule():
    m = ChargeModel(((1,),), ((1,),), 0, lambda_names=("lambda",), degrees=((0,), (1,)))
    s = Specialization({"p": (1, 0), "lambda": (2, 0)}, {"Q": (1, 0)})
    # 1 + 1/(1 - q/2)
    expected = QSeries({0: 2, 1: embed(1) / 2, 2: embed(1) / 4, 3: embed(1) / 8}, 3)
    assert i_function(m, LIT, s, 3) == expected


def test_euler_pentagonal():
    trunc = 40
    got = q_hypergeometric(0, 0, [], [], (1, 1), trunc)
    expected = int_product([(k, 1) for k in range(1, trunc + 1)], trunc)
    assert got == QSeries.from_list(expected, trunc)


def test_q_binomial_theorem():
    # (a z; q)_inf / (z; q)_inf with a = q^2, z = q is 1/((1-q)(1-q^2))
    trunc = 25
    got = q_hypergeometric(1, 0, [(1, 2)], [], (1, 1), trunc)
    expected = int_product([(1, -1), (2, -1)], trunc)
    assert got == QSeries.from_list(expected, trunc)


def test_q_hypergeometric_terminates_on_zero_numerator():
    # a = q^-2, z = q: the terms 1, -q^-1 - 1, q^-1 cancel exactly
    got = q_hypergeometric(1, 0, [(1, -2)], [], (1, 1), 20)
    assert got.is_zero() and got.trunc == 20


def test_model_json_roundtrip():
    obj = X2M1.to_json(THM)
    model, conv = ChargeModel.from_json(obj)
    assert model == X2M1 and conv is THM


@pytest.mark.parametrize("patch, field", [
    ({"charges": "nope"}, "charges"),
    ({"level": "2"}, "level"),
    ({"lambda_flags": [1, 0]}, "lambda_flags"),
    ({"convention": "other"}, "convention"),
    ({"s": 2}, "'s'"),
    ({"rep_charges": [[1, 2]]}, "rep"),
])
def test_model_schema_errors_name_the_field(patch, field):
    obj = {**X2M1.to_json(LIT), **patch}
    with pytest.raises(SchemaError, match=field):
        ChargeModel.from_json(obj)
