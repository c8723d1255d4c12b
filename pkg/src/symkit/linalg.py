"""Dense small-matrix kernel.

Matrices are plain numpy arrays: ``complex128`` in floating mode, ``object``
arrays of ``Fraction``/``QQi`` in exact mode.  The eigen-solver is a
self-contained Hessenberg + shifted QR iteration that also yields the Schur
form used by the triangular integration path.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ConvergenceError, PreconditionError
from .exact import is_exact, make_complex, real_imag, to_exact

EPS = np.finfo(float).eps


def as_matrix(data, exact: bool = False) -> np.ndarray:
    """Validate and normalise a square matrix.

    ``data`` may be a nested list, an ndarray or a dict in the JSON wire
    format ``{"n", "re", "im"}``.
    """
    if isinstance(data, dict):
        return matrix_from_json(data, exact=exact)
    if isinstance(data, np.ndarray) and data.dtype == object:
        arr = data
    else:
        arr = np.asarray(data)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise PreconditionError(f"expected a non-empty square matrix, got shape {arr.shape}")
    if exact:
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = to_exact(v)
        return out
    if arr.dtype == object or arr.dtype.kind in "US":
        arr = np.array([[complex(to_exact(v)) for v in row] for row in arr], dtype=complex)
    arr = arr.astype(complex)
    if not np.all(np.isfinite(arr)):
        raise PreconditionError("matrix entries must be finite")
    return arr


def is_exact_matrix(A) -> bool:
    return isinstance(A, np.ndarray) and A.dtype == object and all(is_exact(v) for v in A.flat)


def matrix_from_json(obj: dict, exact: bool = False) -> np.ndarray:
    try:
        n = int(obj["n"])
        re = obj["re"]
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"matrix JSON needs 'n' and 're': {exc}") from None
    im = obj.get("im")
    if im is None:
        im = [[0] * n for _ in range(n)]
    if len(re) != n or len(im) != n or any(len(r) != n for r in re) or any(len(r) != n for r in im):
        raise PreconditionError("matrix JSON rows do not match 'n'")
    if exact:
        out = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                out[i, j] = make_complex(re[i][j], im[i][j])
        return out
    arr = np.array(re, dtype=float) + 1j * np.array(im, dtype=float)
    return as_matrix(arr)


def matrix_to_json(A, exact: bool = False) -> dict:
    n = A.shape[0]
    if exact:
        parts = [[real_imag(v) for v in row] for row in A]
        return {
            "n": n,
            "re": [[str(Fraction(p[0])) for p in row] for row in parts],
            "im": [[str(Fraction(p[1])) for p in row] for row in parts],
        }
    A = np.asarray(A, dtype=complex)
    return {"n": n, "re": A.real.tolist(), "im": A.imag.tolist()}


def load_matrix(path, exact: bool = False) -> np.ndarray:
    return matrix_from_json(json.loads(Path(path).read_text()), exact=exact)


def identity(n: int, exact: bool = False) -> np.ndarray:
    if exact:
        out = np.full((n, n), Fraction(0), dtype=object)
        for i in range(n):
            out[i, i] = Fraction(1)
        return out
    return np.eye(n, dtype=complex)


def vec_transpose(A) -> np.ndarray:
    """``vec(A^T)``: the rows of ``A`` stacked into one vector."""
    return np.asarray(A).reshape(-1)


def trace(A):
    total = A[0, 0]
    for i in range(1, A.shape[0]):
        total = total + A[i, i]
    return total


def kron(A, B) -> np.ndarray:
    return np.kron(A, B)


def matmul(A, B) -> np.ndarray:
    return A @ B


def matrix_power(A, r: int) -> np.ndarray:
    if r < 0:
        raise PreconditionError("matrix_power needs r >= 0")
    out = identity(A.shape[0], exact=A.dtype == object)
    for _ in range(r):
        out = A @ out
    return out


def conj_transpose(A) -> np.ndarray:
    if A.dtype == object:
        return np.vectorize(lambda v: v.conjugate(), otypes=[object])(A).T
    return A.conj().T


def det(A):
    """Determinant; exact Gaussian elimination for exact input, LU otherwise."""
    if A.dtype != object:
        return complex(np.linalg.det(A))
    M = [list(row) for row in A]
    n = len(M)
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            result = -result
        p = M[col][col]
        result = result * p
        for r in range(col + 1, n):
            f = M[r][col] / p
            if f != 0:
                M[r] = [M[r][c] - f * M[col][c] for c in range(n)]
    return result


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with multiplicity; compared as an unordered multiset."""

    values: np.ndarray

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def matches(self, other, tol: float) -> bool:
        return spectra_match(self.values, np.asarray(list(other), dtype=complex), tol)


def spectra_match(a, b, tol: float) -> bool:
    """Greedy nearest pairing of two multisets of complex numbers."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    if len(a) != len(b):
        return False
    for x in a:
        j = min(range(len(b)), key=lambda i: abs(b[i] - x))
        if abs(b[j] - x) > tol:
            return False
        b.pop(j)
    return True


def _givens(a: complex, b: complex) -> np.ndarray:
    """Unitary 2x2 ``G`` with ``G @ [a, b] = [r, 0]``."""
    r = np.hypot(abs(a), abs(b))
    if r == 0:
        return np.eye(2, dtype=complex)
    return np.array([[np.conj(a) / r, np.conj(b) / r], [-b / r, a / r]], dtype=complex)


def hessenberg(A) -> tuple[np.ndarray, np.ndarray]:
    """Householder reduction ``A = Q H Q^*`` with ``H`` upper Hessenberg."""
    H = np.array(A, dtype=complex)
    n = H.shape[0]
    Q = np.eye(n, dtype=complex)
    for j in range(n - 2):
        x = H[j + 1:, j].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        H[j + 1:, :] -= 2.0 * np.outer(v, v.conj() @ H[j + 1:, :])
        H[:, j + 1:] -= 2.0 * np.outer(H[:, j + 1:] @ v, v.conj())
        Q[:, j + 1:] -= 2.0 * np.outer(Q[:, j + 1:] @ v, v.conj())
        H[j + 2:, j] = 0
    return H, Q


def schur(A, max_iter: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Complex Schur form ``A = Z T Z^*`` by shifted QR on the Hessenberg form.

    Raises ``ConvergenceError`` when the budget (default ``100 n``) runs out.
    """
    A = as_matrix(A)
    n = A.shape[0]
    H, Z = hessenberg(A)
    if n == 1:
        return H, Z
    budget = 100 * n if max_iter is None else max_iter
    scale = max(np.abs(A).max(), np.finfo(float).tiny)
    hi = n - 1
    total = 0
    since_deflation = 0
    while hi > 0:
        lo = 0
        for l in range(hi, 0, -1):
            s = abs(H[l, l]) + abs(H[l - 1, l - 1])
            if abs(H[l, l - 1]) <= EPS * max(s, scale * EPS * n):
                H[l, l - 1] = 0
                lo = l
                break
        if lo == hi:
            hi -= 1
            since_deflation = 0
            continue
        total += 1
        since_deflation += 1
        if total > budget:
            raise ConvergenceError(f"QR iteration did not converge in {budget} steps")
        a, b = H[hi - 1, hi - 1], H[hi - 1, hi]
        c, d = H[hi, hi - 1], H[hi, hi]
        if since_deflation % 11 == 0:
            mu = d + abs(c) * 1.5
        else:
            half = (a - d) / 2
            disc = np.sqrt(half * half + b * c)
            m1, m2 = (a + d) / 2 + disc, (a + d) / 2 - disc
            mu = m1 if abs(m1 - d) <= abs(m2 - d) else m2
        for j in range(lo, hi + 1):
            H[j, j] -= mu
        rots = []
        for j in range(lo, hi):
            G = _givens(H[j, j], H[j + 1, j])
            H[j:j + 2, j:] = G @ H[j:j + 2, j:]
            H[j + 1, j] = 0
            rots.append(G)
        for j, G in zip(range(lo, hi), rots):
            top = min(j + 2, hi) + 1
            H[:top, j:j + 2] = H[:top, j:j + 2] @ G.conj().T
            Z[:, j:j + 2] = Z[:, j:j + 2] @ G.conj().T
        for j in range(lo, hi + 1):
            H[j, j] += mu
    return np.triu(H), Z


def eigenvalues(A, max_iter: int | None = None) -> Spectrum:
    T, _ = schur(A, max_iter=max_iter)
    return Spectrum(np.diag(T).copy())


def op_norm2(A, max_iter: int = 500, rtol: float = 1e-12) -> float:
    """Spectral norm via power iteration on ``A^* A``.

    The iteration is accelerated by repeated squaring of the normalised
    Gram matrix, so each step applies twice as many powers as the last.
    """
    A = as_matrix(A)
    G = A.conj().T @ A
    top = np.abs(G).max()
    if top == 0:
        return 0.0
    M = G / top
    prev = None
    for _ in range(max_iter):
        M = M @ M
        m = np.abs(M).max()
        if m == 0:
            break
        M /= m
        est = np.linalg.norm(M[:, np.argmax(np.linalg.norm(M, axis=0))])
        if prev is not None and abs(est - prev) <= rtol * abs(est):
            break
        prev = est
    v = M[:, np.argmax(np.linalg.norm(M, axis=0))]
    for _ in range(3):
        v = G @ v
        v /= np.linalg.norm(v)
    lam = np.real(v.conj() @ G @ v) / np.real(v.conj() @ v)
    return float(np.sqrt(max(lam, 0.0)))


def is_scalar_matrix(A):
    """Return ``c`` if ``A == c I`` exactly, else ``None``."""
    c = A[0, 0]
    n = A.shape[0]
    for i in range(n):
        for j in range(n):
            if (A[i, j] != c) if i == j else (A[i, j] != 0):
                return None
    return c
