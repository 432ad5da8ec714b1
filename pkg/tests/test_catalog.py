import random

import pytest

from qlevels import catalog
from qlevels.catalog import (
    IdentitySpec,
    lookup,
    mock_theta,
    prefactor,
    prop4_model,
    registry,
    verify_identity,
    verify_prop4_family,
)
from qlevels.exactnum import embed
from qlevels.qlaurent import QSeries


def coeffs(series, upto):
    return [int(series[k].rational_part()) for k in range(upto + 1)]


def test_registry_shape():
    names = [i.name for i in registry()]
    assert len(names) == 14 == len(set(names))
    rows = catalog.list_identities()
    assert len(rows) == 15 and rows[-1][0] == catalog.PROP4_NAME
    assert lookup("nope") is None
    assert lookup("prop3.order7.b").prefactor == "q_over_one_minus_q"


def test_registry_is_a_copy():
    registry().clear()
    assert len(registry()) == 14


def test_seventh_order_b_parameters():
    ident = lookup("prop3.order7.b")
    c, e = ident.spec.novikov_map["Q"]
    assert (c, e) == (embed(-1), 4)


@pytest.mark.parametrize("oracle, expected", [
    # third-order f(q)
    ("p2.o3.a", [1, 1, -2, 3, -3, 3, -5, 7, -6, 6, -10, 12, -11]),
    # third-order chi(q)
    ("p2.o3.b", [1, 1, 1, 0, 0, 0, 1, 1, 0, 0, -1, 0, 1]),
    # seventh-order F0(q)
    ("p3.o7.a", [1, 1, 0, 1, 1, 1, 0, 2, 1, 2, 1, 2, 1]),
])
def test_classical_oracle_coefficients(oracle, expected):
    assert coeffs(mock_theta(oracle, 12), 12) == expected


def test_oracles_are_rational_and_truncated():
    for oid in catalog.oracle_ids():
        s = mock_theta(oid, 15)
        assert s.trunc == 15 and s.is_rational()


def test_unknown_oracle():
    with pytest.raises(KeyError):
        mock_theta("p9.o9.z", 5)
    with pytest.raises(KeyError):
        prefactor("not_a_recipe", 5)


def test_prefactors():
    assert prefactor("unit", 4) == QSeries.one(4)
    assert prefactor("inv_one_minus_q", 4) == QSeries.from_list([1] * 5, 4)
    assert prefactor("q_over_one_minus_q", 4) == QSeries.from_list([0, 1, 1, 1, 1], 4)
    assert prefactor("inv_one_plus_q_plus_q2", 6) == QSeries.from_list([1, -1, 0, 1, -1, 0, 1], 6)


@pytest.mark.parametrize("ident", registry(), ids=lambda i: i.name)
def test_identity_holds(ident: IdentitySpec):
    rep = verify_identity(ident, 20)
    assert rep.passed, str(rep)


def test_truncation_monotonicity():
    for name in ("prop1.order5.b", "prop2.order3.d", "prop3.order7.c"):
        ident = lookup(name)
        big = ident.lhs(24)
        for t in (0, 5, 13):
            assert verify_identity(ident, t).passed
            assert ident.lhs(t) == big.truncate(t)


def test_trunc_zero_values():
    # the degree-zero term is not the only contributor at q^0 in every case
    for ident in registry():
        assert verify_identity(ident, 0).passed
    assert lookup("prop1.order3.c").lhs(0)[0] == 2
    assert lookup("prop1.order3.a").lhs(0)[0] == 1


def test_complex_identities_are_rational():
    for name in ("prop2.order3.b", "prop2.order3.d"):
        lhs = lookup(name).lhs(30)
        assert lhs.is_rational()
        params = [c for c, _ in lookup(name).spec.sym_map.values()]
        assert any(not c.is_rational() for c in params)


def test_negative_control_first_mismatch():
    ident = lookup("prop1.order3.a")
    broken = IdentitySpec(**{**ident.__dict__, "spec": ident.spec.replace(**{"lambda": (embed(1), 0)})})
    rep = verify_identity(broken, 30)
    assert not rep.passed
    assert rep.first_mismatch == {"exp": 3, "lhs": "1", "rhs": "-1"}


def test_prop4_model_layout():
    m = prop4_model(2, 1)
    assert m.charges == ((1, 1, -1, -1),)
    assert m.lambda_flags == (True, False, True, True)
    assert m.level == 2


def test_prop4_family_is_seed_deterministic():
    a = verify_prop4_family(seed=7, trunc=8, trials=2)
    b = verify_prop4_family(seed=7, trunc=8, trials=2)
    assert [r.detail for r in a] == [r.detail for r in b]
    assert all(r.passed for r in a)


def test_prop4_parameters_avoid_poles():
    rng = random.Random(3)
    for _ in range(100):
        alphas, betas, zc = catalog.prop4_parameters(2, 2, rng)
        assert 1 not in betas and zc != 0 and all(alphas)


def test_report_json():
    rep = verify_identity(lookup("prop2.order3.a"), 5)
    js = rep.to_json()
    assert js["status"] == "pass" and js["first_mismatch"] is None and js["trunc"] == 5
