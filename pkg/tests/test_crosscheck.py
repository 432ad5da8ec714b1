"""Left-hand sides recomputed with sympy's ring series over Q(sqrt(-3)).

The parameter table below is written out by hand from the identities, not
read from the catalog, so it checks the encoded specializations as well as
the series engine.
"""

import cmath

import pytest
import sympy as sp
from sympy.polys.ring_series import rs_mul, rs_series_inversion
from sympy.polys.rings import ring

from qlevels.catalog import lookup

K = sp.QQ.algebraic_field(sp.sqrt(-3))
R, x = ring("q", K)
W = (1 + sp.sqrt(3) * sp.I) / 2
W_BAR = (1 - sp.sqrt(3) * sp.I) / 2
OMEGA = (-1 + sp.sqrt(3) * sp.I) / 2
OMEGA_BAR = (-1 - sp.sqrt(3) * sp.I) / 2
SHIFT = 100


def const(c):
    return R(K.from_sympy(sp.nsimplify(c)))


def rs_lhs(charges, rep, level, d, lams, Q, prefactor, trunc, n_max):
    """1 + sum_n Q^n q^(d*level*b(b-1)/2) prod_rho (factors) with p = 1, all in the final q.

    ``lams`` holds (c, e) for each lambda (value c q^e), ``Q`` likewise;
    ``prefactor`` is (numerator, denominator) polynomial coefficient lists.
    """
    prec = trunc + SHIFT + 1
    total = x ** SHIFT
    for n in range(1, n_max + 1):
        b = rep * n
        shift = d * level * b * (b - 1) // 2 + Q[1] * n
        num, den = const(sp.nsimplify(Q[0]) ** n), R(1)
        for charge, (lc, le) in zip(charges, lams):
            beta = charge * n
            uc = 1 / sp.nsimplify(lc)
            js = range(1, beta + 1) if beta > 0 else range(beta + 1, 1)
            for j in js:
                k = d * j - le
                if k >= 0:
                    f = R(1) - const(uc) * x ** k
                else:
                    # 1 - u q^k = q^k (q^-k - u)
                    assert beta < 0
                    shift += k
                    f = x ** (-k) - const(uc)
                if beta > 0:
                    assert k > 0
                    den = den * f
                else:
                    num = num * f
        term = rs_mul(num, rs_series_inversion(den, x, prec), x, prec)
        total += term * x ** (SHIFT + shift)
    pnum = sum((const(c) * x ** i for i, c in enumerate(prefactor[0])), R(0))
    pden = sum((const(c) * x ** i for i, c in enumerate(prefactor[1])), R(0))
    total = rs_mul(rs_mul(total, pnum, x, prec), rs_series_inversion(pden, x, prec), x, prec)
    out = {}
    for (e,), c in total.terms():
        if e - SHIFT <= trunc:
            out[e - SHIFT] = complex(sp.N(K.to_sympy(c)))
    return out


UNIT = ([1], [1])
TABLE = {
    "prop1.order3.a": ([1], 1, 1, 2, [(-1, 0)], (1, 1), UNIT),
    "prop1.order3.b": ([1], 1, 1, 2, [(1, 1)], (1, 1), UNIT),
    "prop1.order3.c": ([1], 1, 1, 2, [(-1, 1)], (1, 0), UNIT),
    "prop1.order5.a": ([1], 1, 2, 1, [(-1, 0)], (1, 1), UNIT),
    "prop1.order5.b": ([1], 1, 2, 2, [(1, 1)], (1, 2), UNIT),
    "prop1.order5.c": ([1], -1, 2, 1, [(-1, 0)], (1, 0), UNIT),
    "prop1.order5.d": ([1], -1, 2, 2, [(1, 1)], (1, 0), UNIT),
    "prop2.order3.a": ([1, 1], 1, 2, 1, [(-1, 0), (-1, 0)], (1, 1), UNIT),
    "prop2.order3.b": ([1, 1], 1, 2, 1, [(W, 0), (W_BAR, 0)], (1, 1), UNIT),
    "prop2.order3.c": ([1, 1], -1, 2, 2, [(1, -1), (1, -1)], (1, 0), ([1], [1, -2, 1])),
    "prop2.order3.d": ([1, 1], -1, 2, 2, [(OMEGA, -1), (OMEGA_BAR, -1)], (1, 0), ([1], [1, 1, 1])),
    "prop3.order7.a": ([2, -1], 1, 3, 1, [(1, 0), (1, 1)], (-1, 2), UNIT),
    "prop3.order7.b": ([2, -1], 1, 3, 1, [(1, -1), (1, 1)], (-1, 4), ([0, 1], [1, -1])),
    "prop3.order7.c": ([2, -1], 1, 3, 1, [(1, -1), (1, 1)], (-1, 3), ([1], [1, -1])),
}
TRUNC = 12


@pytest.mark.parametrize("name", sorted(TABLE))
def test_lhs_matches_ring_series(name):
    ident = lookup(name)
    got = ident.lhs(TRUNC)
    want = rs_lhs(*TABLE[name], trunc=TRUNC, n_max=TRUNC + 2)
    for k in range(-2, TRUNC + 1):
        assert cmath.isclose(got[k].to_complex(), want.get(k, 0), abs_tol=1e-9), (name, k)
