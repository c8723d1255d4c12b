import itertools
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_complex, rel_close
from symkit.errors import CapExceededError, PreconditionError
from symkit.linalg import as_matrix, eigenvalues, spectra_match
from symkit.sphere import exact_integral
from symkit.symfun import h_direct
from symkit.symtensor import (c_nk, sym_basis, sym_power, sym_power_monomial, sym_power_trace,
                              sym_trace_via_kron, trace_formula_k)


def test_c_nk():
    assert all(c_nk(n, 0) == 1 for n in range(1, 6))
    assert all(c_nk(n, 1) == n for n in range(1, 6))
    assert c_nk(2, 3) == 4
    assert c_nk(10, 10) == 92378


def test_sym_basis_order_and_size():
    assert sym_basis(2, 2) == [(0, 0), (0, 1), (1, 1)]
    for n in range(1, 5):
        for k in range(1, 5):
            assert len(sym_basis(n, k)) == c_nk(n, k)


def test_sym_power_identity_and_diagonal():
    assert np.allclose(sym_power(np.eye(2), 2), np.eye(3))
    a, b = 2.0, -3.0
    assert np.allclose(sym_power(np.diag([a, b]), 2), np.diag([a * a, a * b, b * b]))
    S = sym_power(np.diag([1.0, 2.0, 5.0]), 3)
    assert np.count_nonzero(S - np.diag(np.diag(S))) == 0


def test_sym_power_trace_equals_h(rng):
    for n in range(1, 5):
        A = random_complex(rng, n)
        lam = eigenvalues(A).values
        for k in range(1, 6):
            assert rel_close(np.trace(sym_power(A, k)), h_direct(k, lam), 1e-8)
            assert rel_close(sym_power_trace(A, k), h_direct(k, lam), 1e-8)


def test_sym_power_spectrum_law(rng):
    for n in range(1, 4):
        A = random_complex(rng, n)
        lam = eigenvalues(A).values
        for k in range(1, 4):
            prods = [np.prod(lam[list(idx)]) for idx in itertools.combinations_with_replacement(range(n), k)]
            got = eigenvalues(sym_power(A, k)).values
            assert spectra_match(got, prods, 1e-7 * (1 + np.linalg.norm(A)) ** k)


def test_sym_power_functorial(rng):
    for n, k in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        A, B = random_complex(rng, n), random_complex(rng, n)
        assert np.allclose(sym_power(A @ B, k), sym_power(A, k) @ sym_power(B, k), atol=1e-8)


def test_sym_power_unitary_stays_unitary(rng):
    q, _ = np.linalg.qr(random_complex(rng, 3))
    S = sym_power(q, 3)
    assert np.allclose(S.conj().T @ S, np.eye(c_nk(3, 3)), atol=1e-12)


def test_sym_power_monomial_exact():
    A = as_matrix([[1, "1/2"], [0, 3]], exact=True)
    M = sym_power_monomial(A, 2)
    assert sum(M[i, i] for i in range(3)) == 1 + 3 + 9


def test_kron_oracle(rng):
    assert rel_close(sym_trace_via_kron(np.eye(3), 3), c_nk(3, 3), 1e-12)
    assert rel_close(sym_trace_via_kron(np.diag([1.0, 0.0]), 2), 1, 1e-12)
    for _ in range(10):
        A = random_complex(rng, 2)
        assert rel_close(sym_trace_via_kron(A, 4), np.trace(sym_power(A, 4)), 1e-9)
    A = random_complex(rng, 3)
    assert rel_close(sym_trace_via_kron(A, 3), np.trace(sym_power(A, 3)), 1e-9)


def test_caps():
    with pytest.raises(CapExceededError):
        sym_trace_via_kron(np.eye(5), 6)
    with pytest.raises(CapExceededError):
        sym_power(np.eye(10), 6)
    with pytest.raises(PreconditionError):
        sym_power(np.eye(2), 0)


def test_trace_formula_small_cases():
    assert rel_close(trace_formula_k(np.eye(2), 2), 3, 1e-15)
    assert rel_close(trace_formula_k(np.eye(2), 3), 4, 1e-15)
    for k in (1, 7):
        with pytest.raises(PreconditionError):
            trace_formula_k(np.eye(2), k)


def test_trace_formula_exact_rational():
    A = as_matrix([["1/2", 1, 0], [2, "-1/3", 1], [0, 1, 1]], exact=True)
    for k in range(2, 7):
        assert trace_formula_k(A, k) == sym_power_trace(A, k) == c_nk(3, k) * exact_integral(A, k)


def test_trace_formula_random(rng):
    for k in range(2, 7):
        A = random_complex(rng, 3)
        assert rel_close(trace_formula_k(A, k), h_direct(k, eigenvalues(A).values), 1e-8)
