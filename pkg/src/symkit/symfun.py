"""Power sums and complete homogeneous symmetric polynomials.

Three evaluators of ``h_k`` are provided and kept deliberately independent:

* ``h_direct``   -- sum of every degree-``k`` monomial;
* ``h_powersum`` -- the expansion over partitions weighted by ``1/z_beta``;
* ``h_newton``   -- the recurrence ``k h_k = sum_i p_i h_{k-i}``.

Points given entirely as ints/``Fraction``/``QQi`` are evaluated exactly.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import CapExceededError, PreconditionError
from .exact import is_exact
from .partitions import as_partition, compositions, partitions_of, z_beta

DIRECT_MAX_N = 8
DIRECT_MAX_K = 10
ALGOS = ("direct", "powersum", "newton")


def as_point(z) -> list:
    """Validated evaluation point; all-exact input stays exact."""
    vals = list(np.asarray(z, dtype=object).reshape(-1)) if not isinstance(z, (list, tuple)) else list(z)
    if not vals:
        raise PreconditionError("evaluation point needs at least one coordinate")
    if all(is_exact(v) for v in vals):
        return [Fraction(v) if isinstance(v, int) else v for v in vals]
    out = [complex(v) for v in vals]
    if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in out):
        raise PreconditionError("evaluation point entries must be finite")
    return out


def _one(z):
    return Fraction(1) if is_exact(z[0]) else 1.0 + 0j


def power_sum(r: int, z) -> complex:
    if r < 1:
        raise PreconditionError("power_sum needs r >= 1")
    z = as_point(z)
    total = z[0] ** r
    for v in z[1:]:
        total = total + v ** r
    return total


def h_direct(k: int, z) -> complex:
    """Sum of ``z^alpha`` over all multi-indices of degree ``k``."""
    if k < 0:
        raise PreconditionError("k must be non-negative")
    z = as_point(z)
    n = len(z)
    if n > DIRECT_MAX_N or k > DIRECT_MAX_K:
        raise CapExceededError(f"h_direct is capped at n <= {DIRECT_MAX_N}, k <= {DIRECT_MAX_K}")
    total = 0 * _one(z)
    for alpha in compositions(k, n):
        term = _one(z)
        for v, a in zip(z, alpha):
            if a:
                term = term * v ** a
        total = total + term
    return total


def h_powersum(k: int, z) -> complex:
    if k < 0:
        raise PreconditionError("k must be non-negative")
    z = as_point(z)
    p = {r: power_sum(r, z) for r in range(1, k + 1)}
    total = 0 * _one(z)
    for beta in partitions_of(k):
        term = _one(z)
        for part in beta:
            term = term * p[part]
        total = total + term / z_beta(beta)
    return total


def h_newton(k: int, z) -> complex:
    if k < 0:
        raise PreconditionError("k must be non-negative")
    z = as_point(z)
    p = [None] + [power_sum(r, z) for r in range(1, k + 1)]
    h = [_one(z)]
    for m in range(1, k + 1):
        acc = 0 * _one(z)
        for i in range(1, m + 1):
            acc = acc + p[i] * h[m - i]
        h.append(acc / m)
    return h[k]


def h(k: int, z, algo: str = "direct"):
    try:
        fn = {"direct": h_direct, "powersum": h_powersum, "newton": h_newton}[algo]
    except KeyError:
        raise PreconditionError(f"unknown algorithm {algo!r}; choose from {ALGOS}") from None
    return fn(k, z)


def c_nk(n: int, k: int) -> int:
    """Dimension ``C(n+k-1, k)`` of the k-th symmetric power of an n-space."""
    if n < 1 or k < 0:
        raise PreconditionError("c_nk needs n >= 1 and k >= 0")
    return math.comb(n + k - 1, k)


def H_norm(k: int, z, algo: str = "direct"):
    z = as_point(z)
    return h(k, z, algo) / c_nk(len(z), k)


def H_lambda(lam, z, algo: str = "direct"):
    lam = as_partition(lam)
    z = as_point(z)
    out = _one(z)
    for part in lam:
        out = out * H_norm(part, z, algo)
    return out


def frak_H(lam, x, algo: str = "direct") -> float:
    """Real ``|lam|``-th root of ``H_lam(x)``."""
    lam = as_partition(lam)
    w = sum(lam)
    if w < 1:
        raise PreconditionError("frak_H needs |lambda| >= 1")
    val = complex(H_lambda(lam, x, algo))
    if abs(val.imag) > 1e-12 * max(1.0, abs(val.real)):
        raise PreconditionError("frak_H needs a real point")
    if val.real < 0:
        raise PreconditionError(f"negative radicand {val.real!r} for frak_H")
    return val.real ** (1.0 / w)


def h_table(x, kmax: int) -> np.ndarray:
    """Vectorised ``h_0 .. h_kmax`` for a batch of real points.

    ``x`` has shape ``(m, n)``; returns shape ``(m, kmax + 1)``.  Uses the
    variable-by-variable recurrence ``h_k(x_1..x_j) = h_k(x_1..x_{j-1}) +
    x_j h_{k-1}(x_1..x_j)``, which only adds products of coordinates.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    m, n = x.shape
    H = np.zeros((m, kmax + 1))
    H[:, 0] = 1.0
    for j in range(n):
        xj = x[:, j]
        for k in range(1, kmax + 1):
            H[:, k] = H[:, k] + xj * H[:, k - 1]
    return H


def H_table(x, kmax: int) -> np.ndarray:
    """Normalised ``H_0 .. H_kmax`` for a batch of points."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n = x.shape[1]
    c = np.array([c_nk(n, k) for k in range(kmax + 1)], dtype=float)
    return h_table(x, kmax) / c
