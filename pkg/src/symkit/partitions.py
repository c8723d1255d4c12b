"""Integer partitions, multi-indices, centralizer orders and majorization."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import PreconditionError

Partition = tuple  # weakly decreasing positive ints, no trailing zeros
MultiIndex = tuple  # non-negative ints

MAJORIZATION_TOL = 1e-12


def as_partition(parts: Sequence[int]) -> Partition:
    """Canonical partition: validated, sorted decreasingly, zeros dropped."""
    out = []
    for p in parts:
        if int(p) != p or p < 0:
            raise PreconditionError(f"partition parts must be non-negative integers, got {p!r}")
        if p:
            out.append(int(p))
    return tuple(sorted(out, reverse=True))


def weight(beta: Sequence) -> int:
    return sum(beta)


def partitions_of(k: int) -> list[Partition]:
    """All partitions of ``k`` in reverse-lexicographic order; ``k = 0`` gives ``[()]``."""
    if k < 0:
        raise PreconditionError("k must be non-negative")
    out: list[Partition] = []

    def rec(remaining: int, largest: int, prefix: tuple):
        if remaining == 0:
            out.append(prefix)
            return
        for part in range(min(remaining, largest), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(k, k, ())
    return out


def partitions_by_length(k: int) -> dict[int, list[Partition]]:
    if k < 1:
        raise PreconditionError("partitions_by_length needs k >= 1")
    groups: dict[int, list[Partition]] = {l: [] for l in range(1, k + 1)}
    for beta in partitions_of(k):
        groups[len(beta)].append(beta)
    return groups


def z_beta(beta: Sequence[int]) -> int:
    """Centralizer order ``prod_i i^{m_i} m_i!`` (exact integer)."""
    beta = as_partition(beta)
    out = 1
    for i, m in Counter(beta).items():
        out *= i ** m * math.factorial(m)
    return out


def compositions(k: int, n: int) -> Iterator[MultiIndex]:
    """All length-``n`` non-negative integer vectors summing to ``k``.

    Lexicographically decreasing, starting at ``(k, 0, ..., 0)``.
    """
    if n == 0:
        if k == 0:
            yield ()
        return
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in compositions(k - first, n - 1):
            yield (first,) + rest


def compositions_array(k: int, n: int, chunk: int = 200_000) -> Iterator[np.ndarray]:
    """Stars-and-bars enumeration of ``compositions(k, n)`` as int arrays, in chunks."""
    if n == 1:
        yield np.array([[k]], dtype=np.int64)
        return
    bars = itertools.combinations(range(k + n - 1), n - 1)
    while True:
        block = list(itertools.islice(bars, chunk))
        if not block:
            return
        pos = np.asarray(block, dtype=np.int64)
        edges = np.hstack([np.full((len(pos), 1), -1), pos, np.full((len(pos), 1), k + n - 1)])
        yield np.diff(edges, axis=1) - 1


def multi_factorial(alpha: Sequence[int]) -> int:
    return math.prod(math.factorial(a) for a in alpha)


def multinomial(k: int, alpha: Sequence[int]) -> int:
    return math.factorial(k) // multi_factorial(alpha)


def matrix_row_sums(alpha: Sequence[int], n: int) -> MultiIndex:
    """Row sums of an ``n x n`` index stored row-major as length ``n^2``."""
    return tuple(sum(alpha[i * n:(i + 1) * n]) for i in range(n))


def matrix_col_sums(alpha: Sequence[int], n: int) -> MultiIndex:
    return tuple(sum(alpha[i * n + j] for i in range(n)) for j in range(n))


def _padded_sorted(x, m):
    vals = sorted(x, reverse=True)
    return vals + [0] * (m - len(vals))


def majorizes(lam: Sequence, mu: Sequence, tol: float = MAJORIZATION_TOL) -> bool:
    """``lam`` is majorized by ``mu`` (both zero-padded to a common length)."""
    m = max(len(lam), len(mu))
    a, b = _padded_sorted(lam, m), _padded_sorted(mu, m)
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa > sb + tol:
            return False
    return abs(sa - sb) <= tol


def normalized_majorizes(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """``lam/|lam|`` majorized by ``mu/|mu|``, decided in integers as ``|mu| lam <= |lam| mu``."""
    lam, mu = as_partition(lam), as_partition(mu)
    wl, wm = weight(lam), weight(mu)
    if wl == 0 or wm == 0:
        raise PreconditionError("normalized majorization needs partitions of positive weight")
    return majorizes([wm * p for p in lam], [wl * p for p in mu], tol=0)


def repeated_majorizes(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """Each part of ``lam`` repeated ``|mu|`` times is majorized by each part of ``mu`` repeated ``|lam|`` times.

    Agrees with ``normalized_majorizes`` for partitions of equal weight.
    Otherwise neither relation implies the other: ``(2)`` vs ``(1)`` holds only
    after normalizing, ``(1)`` vs ``(1, 1)`` only after repeating.
    """
    lam, mu = as_partition(lam), as_partition(mu)
    wl, wm = weight(lam), weight(mu)
    if wl == 0 or wm == 0:
        raise PreconditionError("repeated majorization needs partitions of positive weight")
    return majorizes([p for p in lam for _ in range(wm)], [p for p in mu for _ in range(wl)], tol=0)


def centralizer_sum(k: int) -> Fraction:
    return sum((Fraction(1, z_beta(b)) for b in partitions_of(k)), Fraction(0))
