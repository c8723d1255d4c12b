import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_complex
from symkit.errors import CapExceededError, PreconditionError
from symkit.linalg import as_matrix
from symkit.series import (TruncatedSeries, det_identity_check, det_resolvent_series, det_series, geometric_tail,
                           macmahon_lhs_coeff, series_inverse, series_mul, verify_macmahon)
from symkit.sphere import exact_integral
from symkit.symfun import h_direct
from symkit.symtensor import c_nk

F = Fraction


def var(i, n=2, D=4):
    return TruncatedSeries.variable(i, n, D)


def naive_mul(f, g):
    out = {}
    for (a, u), (b, v) in itertools.product(f.coeffs.items(), g.coeffs.items()):
        key = tuple(x + y for x, y in zip(a, b))
        if sum(key) <= f.max_degree:
            out[key] = out.get(key, 0) + u * v
    return {k: v for k, v in out.items() if v != 0}


def test_series_basics():
    x = var(0)
    one = TruncatedSeries.constant(2, 4)
    assert x * one == x
    assert (1 + x) * (1 - x) == 1 - x * x
    s = TruncatedSeries(2, 2, {(3, 0): 1, (1, 1): 0, (0, 1): 5})
    assert s.coeffs == {(0, 1): 5}
    with pytest.raises(PreconditionError):
        series_mul(var(0, 2, 4), var(0, 2, 3))
    with pytest.raises(PreconditionError):
        var(0, 2, 4) + var(0, 3, 4)


def test_series_inverse():
    x = var(0, 1, 6)
    inv = series_inverse(1 - x)
    assert inv.coeffs == {(j,): 1 for j in range(7)}
    assert series_inverse(TruncatedSeries.constant(2, 3)) == TruncatedSeries.constant(2, 3)
    with pytest.raises(PreconditionError):
        series_inverse(x)
    two = TruncatedSeries.constant(1, 6, 2) - x
    assert two * two.inverse() == TruncatedSeries.constant(1, 6)


def sparse_series(rng, n, D, unit=False):
    coeffs = {}
    for _ in range(6):
        key = tuple(int(v) for v in rng.multinomial(int(rng.integers(0, D + 1)), [1 / n] * n))
        coeffs[key] = F(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
    if unit:
        coeffs[(0,) * n] = F(1)
    return TruncatedSeries(n, D, coeffs)


def test_series_random_against_naive(rng):
    for _ in range(20):
        f, g = sparse_series(rng, 3, 4), sparse_series(rng, 3, 4)
        assert series_mul(f, g).coeffs == naive_mul(f, g)
        u = sparse_series(rng, 3, 5, unit=True)
        assert u * u.inverse() == TruncatedSeries.constant(3, 5)


def test_series_ring_laws(rng):
    for _ in range(10):
        f, g, h = (sparse_series(rng, 2, 5) for _ in range(3))
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f - f == TruncatedSeries(2, 5)


def test_resolvent_scalar():
    s = det_resolvent_series([[3]], 6)
    assert s.coeffs == {(j,): 3 ** j for j in range(7)}


def test_resolvent_identity():
    s = det_resolvent_series(np.eye(3, dtype=int), 4)
    for d in range(5):
        for a in itertools.product(range(d + 1), repeat=3):
            if sum(a) == d:
                assert s.coeff(a) == 1


def test_resolvent_all_ones():
    ones = [[1, 1], [1, 1]]
    assert det_series(ones, 4).coeffs == {(0, 0): 1, (1, 0): -1, (0, 1): -1}
    s = det_resolvent_series(ones, 4)
    assert s.coeff((1, 1)) == 2
    for a in itertools.product(range(5), repeat=2):
        if sum(a) <= 4:
            assert s.coeff(a) == math.comb(sum(a), a[0])


def test_macmahon_lhs():
    assert macmahon_lhs_coeff(np.eye(3, dtype=int), (2, 0, 1)) == 1
    assert macmahon_lhs_coeff([[1, 1], [1, 1]], (1, 1)) == 2
    with pytest.raises(PreconditionError):
        macmahon_lhs_coeff([[1, 1], [1, 1]], (1, 1, 0))


# coefficients of 1/det(I - diag(x) M), extracted by an independent symbolic series expansion
FROZEN_M = [[2, -1, 0], [1, 1, 3], [0, -2, 1]]
FROZEN_MACMAHON = {(2, 1, 1): -24, (1, 1, 1): -11, (2, 0, 1): 4, (0, 1, 1): -5, (2, 1, 0): 0}


@pytest.mark.parametrize("alpha", sorted(FROZEN_MACMAHON))
def test_macmahon_frozen(alpha):
    assert macmahon_lhs_coeff(FROZEN_M, alpha) == FROZEN_MACMAHON[alpha]
    assert det_resolvent_series(FROZEN_M, 4).coeff(alpha) == FROZEN_MACMAHON[alpha]


def test_verify_macmahon_trivial():
    rep = verify_macmahon(np.zeros((2, 2), dtype=int), 4)
    assert rep.ok and rep.checked == 15
    assert det_resolvent_series(np.zeros((2, 2), dtype=int), 4).coeffs == {(0, 0): 1}
    assert verify_macmahon(np.eye(3, dtype=int), 5).ok


def test_verify_macmahon_rational_and_permuted(rng):
    A = as_matrix([["1/2", -1, 0], [2, "3/4", 1], [1, 0, "-2/5"]], exact=True)
    assert verify_macmahon(A, 5).ok
    for _ in range(5):
        M = rng.integers(-3, 4, size=(3, 3))
        perm = rng.permutation(3)
        P = M[perm][:, perm]
        s, t = det_resolvent_series(M, 4), det_resolvent_series(P, 4)
        assert verify_macmahon(P, 4).ok
        for a, v in s.coeffs.items():
            assert t.coeff(tuple(a[p] for p in perm)) == v


def test_generating_function_slices():
    d = [F(1, 2), F(-1, 3), F(2, 5)]
    s = det_resolvent_series(np.diag(np.array(d, dtype=object)), 6)
    for k in range(7):
        assert sum(s.homogeneous(k).values(), F(0)) == h_direct(k, d)


def test_series_caps():
    with pytest.raises(CapExceededError):
        det_resolvent_series(np.eye(6, dtype=int), 2)
    with pytest.raises(CapExceededError):
        det_resolvent_series(np.eye(2, dtype=int), 9)


def test_det_identity_trivial():
    rep = det_identity_check(np.zeros((2, 2)), 100, 0, partial_sum_degree=3)
    assert rep.passed and rep.estimate.value == 1 and rep.reference == 1 and rep.partial_sum == 1
    rep = det_identity_check(-0.4 * np.eye(3), 100, 0)
    assert rep.passed and rep.estimate.stderr == 0
    assert abs(rep.reference - 1.4 ** -3) < 1e-15


def test_det_identity_random(rng):
    B = random_complex(rng, 3)
    B *= 0.5 / np.linalg.norm(B, 2)
    rep = det_identity_check(B, 100_000, 1, partial_sum_degree=10)
    assert rep.passed and rep.partial_sum_passed
    assert abs(rep.norm - 0.5) < 1e-8
    out = rep.to_json()
    assert {"estimate_re", "stderr", "reference_re", "passed", "tail_bound"} <= set(out)


def test_det_identity_gate():
    with pytest.raises(PreconditionError, match=r"\|\|B\|\|_2 < 1"):
        det_identity_check(np.eye(2), 10, 0)


def test_geometric_tail():
    n, r, D = 2, 0.5, 4
    direct = sum(c_nk(n, k) * r ** k for k in range(D + 1, 400))
    assert abs(geometric_tail(n, r, D) - direct) < 1e-12


def test_partial_sum_scalar_exact():
    c = F(1, 3)
    B = np.diag(np.array([c, c], dtype=object))
    total = sum(c_nk(2, k) * exact_integral(B, k) for k in range(9))
    assert total == sum(c_nk(2, k) * c ** k for k in range(9))


@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4), st.integers(0, 4))
def test_macmahon_property_2x2(entries, D):
    assert verify_macmahon(np.array(entries).reshape(2, 2), D).ok
