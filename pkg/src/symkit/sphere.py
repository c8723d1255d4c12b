"""Integration over the unit sphere of C^n.

Exact monomial integrals, exact evaluation of the k-th moment of the
numerical value ``<A xi, xi>`` through the multinomial expansion, and seeded
Monte-Carlo estimators.

Random streams: sample chunk ``i`` of a run with seed ``s`` is drawn from a
Philox-4x64 counter generator keyed by ``s`` and jumped ``i`` times, so the
result does not depend on how chunks are scheduled across threads.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import CapExceededError, PreconditionError
from .linalg import as_matrix, is_scalar_matrix, schur
from .partitions import compositions, compositions_array, multi_factorial, multinomial

CHUNK = 4096
MAX_ALPHA_TERMS = 10_000_000
SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class MCEstimate:
    value: complex
    stderr: float
    samples: int
    seed: int

    def within(self, reference, nsigma: float = 4.0, floor: float = 0.0) -> bool:
        return abs(self.value - reference) <= nsigma * self.stderr + floor


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SYMKIT_THREADS", "1")))
    except ValueError:
        return 1


def _bitgen(seed: int, stream: int) -> np.random.Generator:
    bg = np.random.Philox(key=int(seed) & SEED_MASK)
    if stream:
        bg = bg.jumped(stream)
    return np.random.Generator(bg)


def _gaussian_rows(gen: np.random.Generator, m: int, n: int) -> np.ndarray:
    """``m`` standard complex Gaussian vectors via Box-Muller."""
    u = gen.random((m, n, 2))
    radius = np.sqrt(-np.log1p(-u[..., 0]))
    return radius * np.exp(2j * np.pi * u[..., 1])


def _unit_rows(gen: np.random.Generator, m: int, n: int) -> np.ndarray:
    g = _gaussian_rows(gen, m, n)
    norms = np.linalg.norm(g, axis=1)
    bad = norms == 0
    while np.any(bad):
        g[bad] = _gaussian_rows(gen, int(bad.sum()), n)
        norms = np.linalg.norm(g, axis=1)
        bad = norms == 0
    return g / norms[:, None]


def sample_sphere(n: int, rng: np.random.Generator | None = None, size: int | None = None) -> np.ndarray:
    """Uniform point(s) on the unit sphere of C^n (normalised complex Gaussian)."""
    if n < 1:
        raise PreconditionError("sphere dimension must be >= 1")
    rng = np.random.Generator(np.random.Philox(0)) if rng is None else rng
    rows = _unit_rows(rng, 1 if size is None else size, n)
    return rows[0] if size is None else rows


def sphere_chunks(n: int, samples: int, seed: int, chunk: int = CHUNK):
    """Yield ``(index, unit_rows)`` for every chunk of a seeded run."""
    for i, start in enumerate(range(0, samples, chunk)):
        yield i, _unit_rows(_bitgen(seed, i), min(chunk, samples - start), n)


def _chunk_stats(vals: np.ndarray):
    vals = np.asarray(vals, dtype=complex)
    m = len(vals)
    if np.all(vals == vals[0]):
        return m, complex(vals[0]), 0.0, 0.0
    mean = vals.mean()
    d = vals - mean
    return m, complex(mean), float(np.sum(d.real ** 2)), float(np.sum(d.imag ** 2))


def _merge(a, b):
    na, ma, ra, ia = a
    nb, mb, rb, ib = b
    n = na + nb
    delta = mb - ma
    mean = ma + delta * (nb / n) if delta != 0 else ma
    return (n, mean,
            ra + rb + delta.real ** 2 * na * nb / n,
            ia + ib + delta.imag ** 2 * na * nb / n)


def mc_integrate(integrand: Callable[[np.ndarray], np.ndarray], n: int, samples: int, seed: int,
                 chunk: int = CHUNK) -> MCEstimate:
    """Plain Monte-Carlo mean of ``integrand`` over the sphere of C^n.

    ``integrand`` maps an ``(m, n)`` array of unit vectors to ``m`` values.
    Chunks are merged in index order whatever the thread count.
    """
    if samples < 2:
        raise PreconditionError("Monte-Carlo needs at least 2 samples")
    starts = list(range(0, samples, chunk))

    def work(i):
        rows = _unit_rows(_bitgen(seed, i), min(chunk, samples - starts[i]), n)
        return _chunk_stats(integrand(rows))

    threads = _threads()
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(threads) as pool:
            stats = list(pool.map(work, range(len(starts))))
    else:
        stats = [work(i) for i in range(len(starts))]
    acc = stats[0]
    for s in stats[1:]:
        acc = _merge(acc, s)
    total, mean, m2r, m2i = acc
    var_r, var_i = m2r / (total - 1), m2i / (total - 1)
    stderr = math.sqrt((var_r + var_i) / total)
    return MCEstimate(value=complex(mean), stderr=stderr, samples=samples, seed=seed)


def numerical_values(A, xi: np.ndarray) -> np.ndarray:
    """``<A xi, xi> = sum_ij a_ij conj(xi_i) xi_j`` for each row of ``xi``.

    A scalar matrix ``c I`` gives exactly ``c`` (the rows are unit vectors).
    """
    c = is_scalar_matrix(A)
    if c is not None:
        return np.full(len(xi), complex(c))
    return np.einsum("mi,ij,mj->m", xi.conj(), A, xi)


def monomial_integral(alpha: Sequence[int], beta: Sequence[int], n: int | None = None) -> Fraction:
    """``int xi^alpha conj(xi)^beta dsigma`` over the unit sphere of C^n."""
    alpha, beta = tuple(alpha), tuple(beta)
    n = len(alpha) if n is None else n
    if len(alpha) != n or len(beta) != n:
        raise PreconditionError("multi-index lengths must equal n")
    if any(a < 0 for a in alpha + beta):
        raise PreconditionError("multi-indices must be non-negative")
    if alpha != beta:
        return Fraction(0)
    return Fraction(math.factorial(n - 1) * multi_factorial(alpha), math.factorial(n - 1 + sum(alpha)))


def alpha_term_count(n: int, k: int, triangular: bool = False) -> int:
    slots = n * (n + 1) // 2 if triangular else n * n
    return math.comb(k + slots - 1, k)


def _is_upper_triangular(A) -> bool:
    n = A.shape[0]
    return all(A[i, j] == 0 for i in range(n) for j in range(i))


def exact_integral(A, k: int, triangular: bool = False):
    """``int <A xi, xi>^k dsigma`` by the multinomial expansion over ``n x n`` exponent matrices.

    No eigenvalues are used unless ``triangular=True``, in which case ``A``
    is first brought to upper-triangular form (a Schur form for float input;
    exact input must already be triangular) and only upper-triangular
    exponent matrices are enumerated.  On that path every contributing
    exponent matrix is checked to be diagonal.

    Exact (rational) entries give an exact result.
    """
    exact = A.dtype == object
    if not exact:
        A = as_matrix(A)
    if k < 0:
        raise PreconditionError("k must be non-negative")
    n = A.shape[0]
    if triangular:
        if not _is_upper_triangular(A):
            if exact:
                raise PreconditionError("exact triangular path needs an upper-triangular matrix")
            A, _ = schur(A)
        slots = [(i, j) for i in range(n) for j in range(i, n)]
    else:
        slots = [(i, j) for i in range(n) for j in range(n)]
    count = math.comb(k + len(slots) - 1, k)
    if count > MAX_ALPHA_TERMS:
        raise CapExceededError(f"{count} exponent matrices exceed the cap {MAX_ALPHA_TERMS}")
    if k == 0:
        return Fraction(1) if exact else 1.0 + 0j
    if exact:
        return _exact_alpha_sum(A, k, slots, triangular)
    return _float_alpha_sum(A, k, slots, triangular)


def _exact_alpha_sum(A, k, slots, triangular):
    n = A.shape[0]
    coeffs = [A[i, j] for i, j in slots]
    total = Fraction(0)
    for alpha in compositions(k, len(slots)):
        rows, cols = [0] * n, [0] * n
        for (i, j), a in zip(slots, alpha):
            rows[i] += a
            cols[j] += a
        if rows != cols:
            continue
        if triangular and any(a and i != j for (i, j), a in zip(slots, alpha)):
            raise AssertionError(f"non-diagonal balanced exponent matrix {alpha} on the triangular path")
        weight = multinomial(k, alpha) * monomial_integral(cols, rows, n)
        term = weight
        for c, a in zip(coeffs, alpha):
            if a:
                term = term * c ** a
        total = total + term
    return total


def _float_alpha_sum(A, k, slots, triangular):
    n = A.shape[0]
    coeffs = np.array([A[i, j] for i, j in slots], dtype=complex)
    R = np.zeros((len(slots), n), dtype=np.int64)
    C = np.zeros((len(slots), n), dtype=np.int64)
    for s, (i, j) in enumerate(slots):
        R[s, i] = 1
        C[s, j] = 1
    offdiag = np.array([i != j for i, j in slots])
    lf = np.array([math.lgamma(m + 1) for m in range(k + 1)])
    log_const = math.lgamma(k + 1) + math.lgamma(n) - math.lgamma(n + k)
    total = 0j
    for block in compositions_array(k, len(slots)):
        rows, cols = block @ R, block @ C
        keep = np.all(rows == cols, axis=1)
        if not np.any(keep):
            continue
        block, cols = block[keep], cols[keep]
        if triangular and np.any(block[:, offdiag]):
            raise AssertionError("non-diagonal balanced exponent matrix on the triangular path")
        # k!/alpha! * (n-1)! gamma! / (n-1+k)!   with gamma the common row/column sums
        logw = log_const - lf[block].sum(axis=1) + lf[cols].sum(axis=1)
        mono = np.prod(np.where(block > 0, coeffs[None, :] ** block, 1), axis=1)
        total += np.sum(np.exp(logw) * mono)
    return total


def mc_numerical_power(A, k: int, samples: int, seed: int) -> MCEstimate:
    """Monte-Carlo estimate of ``int <A xi, xi>^k dsigma``."""
    A = as_matrix(A)
    if k < 0:
        raise PreconditionError("k must be non-negative")
    return mc_integrate(lambda xi: numerical_values(A, xi) ** k, A.shape[0], samples, seed)


def mc_H_p(x, p: float, samples: int, seed: int) -> MCEstimate:
    """Monte-Carlo ``H_p(x) = int <X xi, xi>^p dsigma`` with ``X = diag(x)``, ``x >= 0``.

    ``x = 0`` gives ``0`` by definition.  Negative ``p`` with a zero
    coordinate is refused: the integral is finite but the plain estimator
    has no usable error bar there.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size < 1 or not np.all(np.isfinite(x)):
        raise PreconditionError("point must be a non-empty finite real vector")
    if np.any(x < 0):
        raise PreconditionError("H_p is defined on the non-negative orthant only")
    if not np.any(x):
        return MCEstimate(0j, 0.0, samples, seed)
    if p < 0 and np.any(x == 0):
        raise PreconditionError("p < 0 with a zero coordinate: only the bounds max(x)^p <= H_p <= min_nonzero(x)^p are available")
    X = np.diag(x).astype(complex)
    return mc_integrate(lambda xi: numerical_values(X, xi).real ** p, x.size, samples, seed)


def mc_moment_squared(x, p: float, samples: int, seed: int) -> MCEstimate:
    """Monte-Carlo ``int (<X xi, xi>^2)^p dsigma`` for real ``x`` of any sign, ``p >= 0``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if p < 0:
        raise PreconditionError("squared moments are only used with p >= 0")
    if not np.any(x):
        return MCEstimate(0j, 0.0, samples, seed)
    X = np.diag(x).astype(complex)
    return mc_integrate(lambda xi: (numerical_values(X, xi).real ** 2) ** p, x.size, samples, seed)


def H_p_bounds(x, p: float) -> tuple[float, float]:
    """``(max(x)^p, min_nonzero(x)^p)`` bracket for ``p < 0`` (reversed order for ``p >= 0``)."""
    x = np.asarray(x, dtype=float)
    nz = x[x > 0]
    if nz.size == 0:
        raise PreconditionError("bounds need a nonzero point")
    lo, hi = nz.max() ** p, nz.min() ** p
    return (min(lo, hi), max(lo, hi))
