"""Explicit k-th symmetric tensor powers and traces over the symmetric subspace."""
from __future__ import annotations

import bisect
import itertools
import math
from collections import defaultdict
from fractions import Fraction

import numpy as np

from .errors import CapExceededError, PreconditionError
from .linalg import as_matrix, matrix_power, trace
from .partitions import multi_factorial
from .symfun import c_nk

SYM_POWER_MAX_DIM = 2000
KRON_MAX_DIM = 4096

__all__ = [
    "c_nk",
    "sym_basis",
    "sym_power",
    "sym_power_monomial",
    "sym_power_trace",
    "sym_trace_via_kron",
    "trace_formula_k",
]


def sym_basis(n: int, k: int) -> list[tuple[int, ...]]:
    """Weakly increasing index tuples ``i_1 <= ... <= i_k`` (0-based), lexicographic."""
    return list(itertools.combinations_with_replacement(range(n), k))


def _content(idx: tuple[int, ...], n: int) -> tuple[int, ...]:
    counts = [0] * n
    for i in idx:
        counts[i] += 1
    return tuple(counts)


def _check_dim(n: int, k: int) -> int:
    if k < 1:
        raise PreconditionError("symmetric power needs k >= 1")
    dim = c_nk(n, k)
    if dim > SYM_POWER_MAX_DIM:
        raise CapExceededError(f"c_(n,k) = {dim} exceeds the cap {SYM_POWER_MAX_DIM}")
    return dim


def _image_column(A, idx: tuple[int, ...]) -> dict:
    """Coefficients of ``prod_t (sum_j A[j, idx_t] y_j)`` keyed by sorted index tuple.

    This is the image of the symmetric product ``e_{idx_1} v ... v e_{idx_k}``
    written in the monomial basis.
    """
    n = A.shape[0]
    poly = {(): A[0, 0] * 0 + 1}
    for col in idx:
        nxt: dict = defaultdict(lambda: 0)
        for key, val in poly.items():
            for j in range(n):
                a = A[j, col]
                if a == 0:
                    continue
                lst = list(key)
                bisect.insort(lst, j)
                nxt[tuple(lst)] = nxt[tuple(lst)] + val * a
        poly = dict(nxt)
    return poly


def sym_power_monomial(A, k: int) -> np.ndarray:
    """Matrix of the k-th symmetric power in the (non-normalised) monomial basis.

    Rational whenever ``A`` is; similar to ``sym_power`` by a diagonal scaling,
    so it has the same trace and spectrum.
    """
    exact = A.dtype == object
    n = A.shape[0]
    dim = _check_dim(n, k)
    basis = sym_basis(n, k)
    pos = {b: i for i, b in enumerate(basis)}
    M = np.full((dim, dim), Fraction(0), dtype=object) if exact else np.zeros((dim, dim), dtype=complex)
    for col, idx in enumerate(basis):
        for key, val in _image_column(A, idx).items():
            M[pos[key], col] = val
    return M


def sym_power(A, k: int) -> np.ndarray:
    """The k-th symmetric power on the orthonormal symmetrised basis.

    Basis vector ``e_alpha = sqrt(k!/alpha!)`` times the average of the
    permuted tensor basis vectors; entry ``[beta, alpha]`` equals
    ``sqrt(beta!/alpha!)`` times the monomial-basis coefficient.
    """
    A = as_matrix(A)
    n = A.shape[0]
    M = sym_power_monomial(A, k)
    fact = np.array([math.sqrt(multi_factorial(_content(b, n))) for b in sym_basis(n, k)])
    return M * fact[:, None] / fact[None, :]


def sym_power_trace(A, k: int):
    """``tr`` of the k-th symmetric power; exact for exact ``A``."""
    if A.dtype != object:
        A = as_matrix(A)
    n = A.shape[0]
    _check_dim(n, k)
    total = None
    for idx in sym_basis(n, k):
        v = _image_column(A, idx).get(idx, 0)
        total = v if total is None else total + v
    return total


def sym_trace_via_kron(A, k: int):
    """``trace(P_sym (A x ... x A))`` with ``P_sym`` the symmetrizer on ``(C^n)^{x k}``.

    ``P_sym[v, w] = alpha!/k!`` when the words ``v`` and ``w`` are
    rearrangements of each other (content ``alpha``) and ``0`` otherwise, so
    the trace splits into blocks of words sharing a content.
    """
    exact = A.dtype == object
    if not exact:
        A = as_matrix(A)
    n = A.shape[0]
    if k < 1:
        raise PreconditionError("k must be >= 1")
    if n ** k > KRON_MAX_DIM:
        raise CapExceededError(f"n^k = {n ** k} exceeds the cap {KRON_MAX_DIM}")
    groups: dict = defaultdict(list)
    for word in itertools.product(range(n), repeat=k):
        groups[tuple(sorted(word))].append(word)
    kfact = math.factorial(k)
    total = Fraction(0) if exact else 0j
    for key, words in groups.items():
        W = np.asarray(words, dtype=np.int64)
        block = A[W[:, 0][:, None], W[:, 0][None, :]]
        for t in range(1, k):
            block = block * A[W[:, t][:, None], W[:, t][None, :]]
        s = block.sum()
        weight = multi_factorial(_content(key, n))
        if exact:
            total = total + s * Fraction(weight, kfact)
        else:
            total += complex(s) * weight / kfact
    return total


# Coefficients of the closed forms for k = 2..6, as products of tr(A^r):
# each entry maps a tuple of powers (r_1, r_2, ...) to its rational weight.
_TRACE_FORMULAS = {
    2: {(2,): (1, 2), (1, 1): (1, 2)},
    3: {(3,): (1, 3), (2, 1): (1, 2), (1, 1, 1): (1, 6)},
    4: {(4,): (1, 4), (3, 1): (1, 3), (2, 2): (1, 8), (2, 1, 1): (1, 4), (1, 1, 1, 1): (1, 24)},
    5: {
        (5,): (1, 5), (4, 1): (1, 4), (3, 2): (1, 6), (3, 1, 1): (1, 6),
        (2, 2, 1): (1, 8), (2, 1, 1, 1): (1, 12), (1, 1, 1, 1, 1): (1, 120),
    },
    6: {
        (6,): (1, 6), (5, 1): (1, 5), (4, 2): (1, 8), (3, 3): (1, 18),
        (4, 1, 1): (1, 8), (3, 2, 1): (1, 6), (2, 2, 2): (1, 48),
        (3, 1, 1, 1): (1, 18), (2, 2, 1, 1): (1, 16),
        (2, 1, 1, 1, 1): (1, 48), (1, 1, 1, 1, 1, 1): (1, 720),
    },
}


def trace_formula_k(A, k: int):
    """Closed-form ``tr`` of the k-th symmetric power in traces of powers of ``A``, 2 <= k <= 6."""
    if k not in _TRACE_FORMULAS:
        raise PreconditionError("trace_formula_k is tabulated for 2 <= k <= 6 only")
    exact = A.dtype == object
    if not exact:
        A = as_matrix(A)
    t = {r: trace(matrix_power(A, r)) for r in range(1, k + 1)}
    total = Fraction(0) if exact else 0j
    for powers, (num, den) in _TRACE_FORMULAS[k].items():
        term = Fraction(num, den) if exact else num / den
        for r in powers:
            term = term * t[r]
        total = total + term
    return total
