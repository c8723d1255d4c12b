"""Exact truncated multivariate power series and the MacMahon Master Theorem."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import CapExceededError, PreconditionError
from .exact import real_imag, to_exact
from .linalg import as_matrix, det, is_exact_matrix, op_norm2
from .partitions import compositions
from .sphere import MCEstimate, exact_integral, mc_integrate, numerical_values
from .symfun import c_nk

MAX_VARS = 5
MAX_DEGREE = 8


class TruncatedSeries:
    """Power series in ``nvars`` variables with exact coefficients, truncated above total degree ``max_degree``.

    ``coeffs`` maps exponent tuples to non-zero coefficients.
    """

    __slots__ = ("nvars", "max_degree", "coeffs")

    def __init__(self, nvars: int, max_degree: int, coeffs: dict | None = None):
        if nvars < 1 or max_degree < 0:
            raise PreconditionError("series needs nvars >= 1 and max_degree >= 0")
        self.nvars = nvars
        self.max_degree = max_degree
        self.coeffs = {}
        for key, val in (coeffs or {}).items():
            key = tuple(int(e) for e in key)
            if len(key) != nvars or any(e < 0 for e in key):
                raise PreconditionError(f"bad exponent {key} for {nvars} variables")
            if sum(key) <= max_degree and val != 0:
                self.coeffs[key] = val

    @classmethod
    def constant(cls, nvars, max_degree, c=1):
        return cls(nvars, max_degree, {(0,) * nvars: to_exact(c)})

    @classmethod
    def variable(cls, i, nvars, max_degree):
        key = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, max_degree, {key: Fraction(1)})

    def coeff(self, alpha) -> Fraction:
        return self.coeffs.get(tuple(alpha), Fraction(0))

    def _check(self, other):
        if not isinstance(other, TruncatedSeries):
            return None
        if other.nvars != self.nvars or other.max_degree != self.max_degree:
            raise PreconditionError("series have different variable counts or truncation degrees")
        return other

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.nvars, self.max_degree, other)
        self._check(other)
        out = dict(self.coeffs)
        for key, val in other.coeffs.items():
            out[key] = out.get(key, 0) + val
        return TruncatedSeries(self.nvars, self.max_degree, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.nvars, self.max_degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = to_exact(other)
            return TruncatedSeries(self.nvars, self.max_degree, {k: v * c for k, v in self.coeffs.items()})
        return series_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.nvars, self.max_degree, self.coeffs) == (other.nvars, other.max_degree, other.coeffs)

    def __repr__(self):
        return f"TruncatedSeries(nvars={self.nvars}, max_degree={self.max_degree}, terms={len(self.coeffs)})"

    def homogeneous(self, d: int) -> dict:
        return {k: v for k, v in self.coeffs.items() if sum(k) == d}

    def inverse(self):
        return series_inverse(self)


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    f._check(g)
    D = f.max_degree
    out: dict = defaultdict(lambda: 0)
    for ka, va in f.coeffs.items():
        da = sum(ka)
        for kb, vb in g.coeffs.items():
            if da + sum(kb) > D:
                continue
            key = tuple(a + b for a, b in zip(ka, kb))
            out[key] = out[key] + va * vb
    return TruncatedSeries(f.nvars, D, out)


def series_inverse(f: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse up to the truncation degree, built degree by degree."""
    zero = (0,) * f.nvars
    c0 = f.coeffs.get(zero, 0)
    if c0 == 0:
        raise PreconditionError("series with zero constant term has no inverse")
    D = f.max_degree
    fh = [f.homogeneous(d) for d in range(D + 1)]
    gh: list[dict] = [{zero: Fraction(1) / c0}]
    for d in range(1, D + 1):
        acc: dict = defaultdict(lambda: 0)
        for j in range(1, d + 1):
            for ka, va in fh[j].items():
                for kb, vb in gh[d - j].items():
                    key = tuple(a + b for a, b in zip(ka, kb))
                    acc[key] = acc[key] + va * vb
        gh.append({k: -v / c0 for k, v in acc.items() if v != 0})
    out = {}
    for part in gh:
        out.update(part)
    return TruncatedSeries(f.nvars, D, out)


def _exact_matrix(A):
    if isinstance(A, np.ndarray) and A.dtype == object and is_exact_matrix(A):
        return A
    return as_matrix(A, exact=True)


def _check_caps(n, D):
    if n > MAX_VARS or D > MAX_DEGREE:
        raise CapExceededError(f"exact series work is capped at n <= {MAX_VARS}, D <= {MAX_DEGREE}")


def _poly_det(M: list[list[TruncatedSeries]]) -> TruncatedSeries:
    """Cofactor expansion along the first row."""
    n = len(M)
    if n == 1:
        return M[0][0]
    total = None
    for j in range(n):
        if not M[0][j].coeffs:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _poly_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return TruncatedSeries(M[0][0].nvars, M[0][0].max_degree)
    return total


def det_series(A, D: int) -> TruncatedSeries:
    """``det(I - diag(x) A)`` as an exact polynomial (truncated at ``D``)."""
    A = _exact_matrix(A)
    n = A.shape[0]
    _check_caps(n, D)
    M = []
    for i in range(n):
        xi = TruncatedSeries.variable(i, n, D)
        row = []
        for j in range(n):
            entry = xi * (-A[i, j])
            if i == j:
                entry = entry + 1
            row.append(entry)
        M.append(row)
    return _poly_det(M)


def det_resolvent_series(A, D: int) -> TruncatedSeries:
    """Expansion of ``det(I - diag(x) A)^{-1}`` up to total degree ``D``."""
    return series_inverse(det_series(A, D))


def macmahon_lhs_coeff(A, alpha) -> Fraction:
    """Coefficient of ``x^alpha`` in ``prod_i (sum_j a_ij x_j)^{alpha_i}``."""
    A = _exact_matrix(A)
    n = A.shape[0]
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n:
        raise PreconditionError("alpha must have one entry per row of A")
    poly = {(0,) * n: Fraction(1)}
    for i, a in enumerate(alpha):
        for _ in range(a):
            nxt: dict = defaultdict(lambda: 0)
            for key, val in poly.items():
                for j in range(n):
                    if A[i, j] == 0 or key[j] >= alpha[j]:
                        continue
                    new = key[:j] + (key[j] + 1,) + key[j + 1:]
                    nxt[new] = nxt[new] + val * A[i, j]
            poly = nxt
    return poly.get(alpha, Fraction(0))


@dataclass
class MacMahonReport:
    checked: int
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"checked": self.checked, "mismatches": self.mismatches}


def _fmt(v) -> str:
    re, im = real_imag(v)
    return str(re) if im == 0 else f"{re}{'+' if im >= 0 else '-'}{abs(im)}i"


def verify_macmahon(A, D: int) -> MacMahonReport:
    """Compare both sides of the Master Theorem for every ``|alpha| <= D``."""
    A = _exact_matrix(A)
    n = A.shape[0]
    series = det_resolvent_series(A, D)
    report = MacMahonReport(checked=0)
    for d in range(D + 1):
        for alpha in compositions(d, n):
            lhs = macmahon_lhs_coeff(A, alpha)
            rhs = series.coeff(alpha)
            report.checked += 1
            if lhs != rhs:
                report.mismatches.append({"alpha": list(alpha), "lhs": _fmt(lhs), "rhs": _fmt(rhs)})
    return report


@dataclass
class DetIdentityReport:
    estimate: MCEstimate
    reference: complex
    norm: float
    passed: bool
    partial_sum: complex | None = None
    partial_sum_degree: int | None = None
    tail_bound: float | None = None
    partial_sum_passed: bool | None = None

    def to_json(self) -> dict:
        out = {
            "estimate_re": self.estimate.value.real,
            "estimate_im": self.estimate.value.imag,
            "stderr": self.estimate.stderr,
            "samples": self.estimate.samples,
            "seed": self.estimate.seed,
            "reference_re": self.reference.real,
            "reference_im": self.reference.imag,
            "op_norm2": self.norm,
            "passed": self.passed,
        }
        if self.partial_sum is not None:
            out.update({
                "partial_sum_degree": self.partial_sum_degree,
                "partial_sum_re": self.partial_sum.real,
                "partial_sum_im": self.partial_sum.imag,
                "tail_bound": self.tail_bound,
                "partial_sum_passed": self.partial_sum_passed,
            })
        return out


ROUNDOFF = 1e-12


def geometric_tail(n: int, r: float, D: int) -> float:
    """``sum_{k > D} c_{n,k} r^k = (1 - r)^{-n} - sum_{k <= D} c_{n,k} r^k`` for ``0 <= r < 1``."""
    head = math.fsum(c_nk(n, k) * r ** k for k in range(D + 1))
    return max((1.0 - r) ** (-n) - head, 0.0)


def det_identity_check(B, samples: int, seed: int, partial_sum_degree: int | None = None,
                       nsigma: float = 4.0) -> DetIdentityReport:
    """Monte-Carlo check of ``int <(I - B) xi, xi>^{-n} dsigma = 1/det(I - B)`` for ``||B||_2 < 1``."""
    B = as_matrix(B)
    n = B.shape[0]
    norm = op_norm2(B)
    if not norm < 1:
        raise PreconditionError(f"the determinant identity needs ||B||_2 < 1, got {norm:.6g}")
    M = np.eye(n, dtype=complex) - B
    est = mc_integrate(lambda xi: numerical_values(M, xi) ** (-n), n, samples, seed)
    reference = 1.0 / det(M)
    passed = est.within(reference, nsigma, floor=ROUNDOFF * abs(reference))
    report = DetIdentityReport(est, complex(reference), norm, bool(passed))
    if partial_sum_degree is not None:
        total = 0j
        for k in range(partial_sum_degree + 1):
            total += c_nk(n, k) * exact_integral(B, k)
        tail = geometric_tail(n, norm, partial_sum_degree)
        report.partial_sum = complex(total)
        report.partial_sum_degree = partial_sum_degree
        report.tail_bound = tail
        report.partial_sum_passed = bool(abs(total - reference) <= tail + ROUNDOFF * abs(reference))
    return report
