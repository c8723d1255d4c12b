"""Randomised property harness for the monotonicity and convexity results
about normalised complete symmetric polynomials.

Every check validates its majorization hypothesis before comparing, so a
bad generator surfaces as ``PreconditionError`` rather than as a spurious
counterexample.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import PreconditionError
from .partitions import as_partition, majorizes, normalized_majorizes, partitions_of, repeated_majorizes
from .sphere import mc_H_p, mc_moment_squared
from .symfun import H_table

SLACK = 1e-12
NSIGMA = 4.0
STRATA = ("box", "log", "near_zero")


@dataclass
class IneqReport:
    name: str
    trials: int = 0
    failures: list = field(default_factory=list)
    inconclusive: int = 0
    comparisons: int = 0

    @property
    def status(self) -> str:
        if self.failures:
            return "fail"
        if self.inconclusive:
            return "inconclusive"
        return "pass"

    def add_failure(self, point, lhs, rhs, **extra):
        self.failures.append({
            "input": [float(v) for v in np.ravel(point)],
            "lhs": float(lhs),
            "rhs": float(rhs),
            "margin": float(lhs - rhs),
            **extra,
        })

    def to_json(self, max_failures: int = 20) -> dict:
        failures = sorted(self.failures, key=lambda f: (-f["margin"], f["input"]))
        return {
            "name": self.name,
            "status": self.status,
            "trials": self.trials,
            "comparisons": self.comparisons,
            "inconclusive": self.inconclusive,
            "failure_count": len(self.failures),
            "failures": failures[:max_failures],
        }


def _exceeds(lhs, rhs):
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
    return lhs > rhs + SLACK * scale


def random_points(rng: np.random.Generator, count: int, n: int, domain: str = "positive") -> np.ndarray:
    """Stratified random points: uniform box, log-uniform magnitudes, and near-zero coordinates.

    ``domain='positive'`` draws from the closed non-negative orthant;
    ``domain='real'`` attaches random signs.  No returned point is zero.
    """
    strata = rng.integers(0, len(STRATA), size=count)
    x = rng.uniform(0.0, 1.0, size=(count, n))
    log = strata == 1
    x[log] = 10.0 ** rng.uniform(-3, 3, size=(int(log.sum()), n))
    nz = strata == 2
    if np.any(nz):
        block = rng.uniform(0.0, 1.0, size=(int(nz.sum()), n))
        tiny = rng.random(block.shape) < 0.5
        block[tiny] = rng.choice([0.0, 1e-9, 1e-6], size=int(tiny.sum()))
        x[nz] = block
    if domain == "real":
        x *= rng.choice([-1.0, 1.0], size=x.shape)
    elif domain != "positive":
        raise PreconditionError(f"unknown domain {domain!r}")
    zero = ~np.any(x != 0, axis=1)
    x[zero, 0] = 1.0
    return x


def check_positivity(kmax: int, trials: int, seed: int, n: int = 4) -> IneqReport:
    """``H_{2k}(x) > 0`` for nonzero real ``x`` and ``H_{2k}(0) = 0``, ``1 <= k <= kmax``."""
    if kmax < 1:
        raise PreconditionError("kmax must be >= 1")
    rng = np.random.default_rng(seed)
    report = IneqReport("positivity")
    x = random_points(rng, trials, n, "real")
    H = H_table(x, 2 * kmax)
    for k in range(1, kmax + 1):
        vals = H[:, 2 * k]
        report.comparisons += len(vals)
        for i in np.flatnonzero(~(vals > 0)):
            report.add_failure(x[i], 0.0, vals[i], k=k)
    zero = H_table(np.zeros((1, n)), 2 * kmax)[0]
    for k in range(1, kmax + 1):
        report.comparisons += 1
        if zero[2 * k] != 0:
            report.add_failure(np.zeros(n), zero[2 * k], 0.0, k=k)
    report.trials = trials
    return report


def frak_H_batch(lam: Sequence[int], x: np.ndarray) -> np.ndarray:
    """``|lam|``-th root of ``prod_i H_{lam_i}(x)`` for each row of ``x``."""
    lam = as_partition(lam)
    H = H_table(x, max(lam))
    prod = np.prod(H[:, list(lam)], axis=1)
    if np.any(prod < 0):
        raise PreconditionError("negative radicand: point outside the domain of frak_H")
    return prod ** (1.0 / sum(lam))


RELATIONS = {"normalized": normalized_majorizes, "repeated": repeated_majorizes}


def check_monotone(lam, mu, trials: int, seed: int, domain: str = "positive", n: int = 3,
                   relation: str = "normalized") -> IneqReport:
    """``frak_H(lam, x) <= frak_H(mu, x)`` whenever ``lam`` precedes ``mu``.

    The hypothesis is ``normalized_majorizes`` by default; ``relation='repeated'``
    uses ``repeated_majorizes`` instead.  ``domain='real-even'`` needs every
    part even and draws sign-mixed points.
    """
    lam, mu = as_partition(lam), as_partition(mu)
    if relation not in RELATIONS:
        raise PreconditionError(f"unknown relation {relation!r}")
    if not RELATIONS[relation](lam, mu):
        raise PreconditionError(f"hypothesis violated: {lam} does not precede {mu} ({relation})")
    if domain == "real-even":
        if any(p % 2 for p in lam + mu):
            raise PreconditionError("real-even domain needs partitions with even parts")
        pts = random_points(np.random.default_rng(seed), trials, n, "real")
    elif domain == "positive":
        pts = random_points(np.random.default_rng(seed), trials, n, "positive")
    else:
        raise PreconditionError(f"unknown domain {domain!r}")
    report = IneqReport(f"monotone {list(lam)} <= {list(mu)} [{domain}]", trials=trials)
    lhs, rhs = frak_H_batch(lam, pts), frak_H_batch(mu, pts)
    report.comparisons = trials
    for i in np.flatnonzero(_exceeds(lhs, rhs)):
        report.add_failure(pts[i], lhs[i], rhs[i])
    return report


def _is_integer_vector(v) -> bool:
    return all(float(e).is_integer() for e in v)


def integer_pairs(m: int = 3, top: int = 6) -> Callable[[np.random.Generator], tuple]:
    """Generator of integer exponent pairs ``(lam, mu)`` with ``lam`` majorized by ``mu``.

    ``lam`` is obtained from ``mu`` by a few Robin Hood transfers.
    """
    def draw(rng):
        mu = rng.integers(0, top + 1, size=m)
        lam = mu.copy()
        for _ in range(rng.integers(0, 3)):
            i, j = np.argmax(lam), np.argmin(lam)
            gap = lam[i] - lam[j]
            if gap >= 2:
                t = rng.integers(1, gap // 2 + 1)
                lam[i] -= t
                lam[j] += t
        return lam.tolist(), mu.tolist()
    return draw


def real_pairs(m: int = 2, top: float = 3.0) -> Callable[[np.random.Generator], tuple]:
    """Generator of real exponent pairs via a random convex T-transform."""
    def draw(rng):
        mu = rng.uniform(0.0, top, size=m)
        i, j = np.argmax(mu), np.argmin(mu)
        t = rng.uniform(0.0, 0.5)
        lam = mu.copy()
        d = t * (mu[i] - mu[j])
        lam[i] -= d
        lam[j] += d
        return lam.tolist(), mu.tolist()
    return draw


def _F_exact(exps, x: np.ndarray, squared: bool) -> float:
    """``prod_i H_{e_i}(x)`` for integer exponents (``H_{2 e_i}`` when ``squared``)."""
    exps = [int(round(e)) * (2 if squared else 1) for e in exps]
    H = H_table(x[None, :], max(exps + [0]))[0]
    return float(np.prod([H[e] for e in exps]))


def _F_mc(exps, x, squared, samples, seed):
    """``(value, stderr)`` of ``prod_i int f^{e_i}`` with MC for non-integer exponents."""
    value, rel2 = 1.0, 0.0
    for idx, e in enumerate(exps):
        if float(e).is_integer():
            v, s = _F_exact([e], x, squared), 0.0
        else:
            est = (mc_moment_squared(x, e, samples, seed + idx) if squared
                   else mc_H_p(x, e, samples, seed + idx))
            v, s = est.value.real, est.stderr
        if v == 0:
            return 0.0, 0.0
        value *= v
        rel2 += (s / v) ** 2
    return value, abs(value) * math.sqrt(rel2)


def check_schur_convex(pairs: Callable[[np.random.Generator], tuple], trials: int, seed: int,
                       x_domain: str = "positive", n: int = 3, samples: int = 100_000) -> IneqReport:
    """``F(lam) <= F(mu)`` whenever ``lam`` is majorized by ``mu``.

    ``F(lam) = prod_i int f^{lam_i} dsigma`` with ``f = <X xi, xi>`` on the
    positive orthant (``x_domain='positive'``), or ``f = <X xi, xi>^2`` on
    all of R^n (``x_domain='real'``).  Integer exponents are compared in
    closed form; others by Monte Carlo, where a difference within 4 combined
    standard errors is reported as inconclusive.
    """
    if x_domain not in ("positive", "real"):
        raise PreconditionError(f"unknown domain {x_domain!r}")
    squared = x_domain == "real"
    rng = np.random.default_rng(seed)
    report = IneqReport(f"schur-convex [{x_domain}]", trials=trials)
    for t in range(trials):
        lam, mu = pairs(rng)
        if not majorizes(lam, mu):
            raise PreconditionError(f"hypothesis violated: {lam} is not majorized by {mu}")
        m = max(len(lam), len(mu))
        lam = list(lam) + [0] * (m - len(lam))
        mu = list(mu) + [0] * (m - len(mu))
        x = random_points(rng, 1, n, x_domain)[0]
        report.comparisons += 1
        if _is_integer_vector(lam) and _is_integer_vector(mu):
            lhs, rhs = _F_exact(lam, x, squared), _F_exact(mu, x, squared)
            if _exceeds(lhs, rhs):
                report.add_failure(x, lhs, rhs, lam=lam, mu=mu)
            continue
        base = int(rng.integers(0, 2 ** 62))
        lhs, sl = _F_mc(lam, x, squared, samples, base)
        rhs, sr = _F_mc(mu, x, squared, samples, base + 1000)
        band = NSIGMA * math.hypot(sl, sr)
        if lhs - rhs > band and _exceeds(lhs, rhs):
            report.add_failure(x, lhs, rhs, lam=lam, mu=mu, band=band)
        elif abs(lhs - rhs) <= band:
            report.inconclusive += 1
    return report


def check_midpoint_convexity(trials: int, seed: int, m: int = 3, n: int = 3, top: int = 6) -> IneqReport:
    """``F((lam + mu)/2) <= (F(lam) + F(mu))/2`` for integer ``lam``, ``mu`` of equal parity.

    ``F(lam) = prod_i H_{lam_i}(x)`` on the positive orthant.
    """
    rng = np.random.default_rng(seed)
    report = IneqReport("midpoint-convexity", trials=trials)
    for _ in range(trials):
        lam = rng.integers(0, top + 1, size=m)
        mu = rng.integers(0, top // 2 + 1, size=m) * 2 + lam % 2
        mid = (lam + mu) // 2
        x = random_points(rng, 1, n, "positive")[0]
        lhs = _F_exact(mid.tolist(), x, False)
        rhs = 0.5 * (_F_exact(lam.tolist(), x, False) + _F_exact(mu.tolist(), x, False))
        report.comparisons += 1
        if _exceeds(lhs, rhs):
            report.add_failure(x, lhs, rhs, lam=lam.tolist(), mu=mu.tolist())
    return report


def newton_like_chain(x, kmax: int) -> IneqReport:
    """The two chains for even-degree normalised complete symmetric polynomials.

    * root chain:    ``H_{2k-2}^{1/(2k-2)} <= H_{2k}^{1/(2k)}``
    * product chain: ``H_{2k-2} H_{2k+2} <= H_{2k}^2``

    for ``2 <= k <= kmax``.  ``x`` is one real point or a batch of rows.
    """
    if kmax < 2:
        raise PreconditionError("kmax must be >= 2")
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    if np.any(~np.any(pts != 0, axis=1)):
        raise PreconditionError("newton_like_chain needs nonzero points")
    H = H_table(pts, 2 * kmax + 2)
    report = IneqReport("newton-like", trials=len(pts))
    for k in range(2, kmax + 1):
        lhs = H[:, 2 * k - 2] ** (1.0 / (2 * k - 2))
        rhs = H[:, 2 * k] ** (1.0 / (2 * k))
        report.comparisons += len(pts)
        for i in np.flatnonzero(_exceeds(lhs, rhs)):
            report.add_failure(pts[i], lhs[i], rhs[i], chain="root", k=k)
        lhs = H[:, 2 * k - 2] * H[:, 2 * k + 2]
        rhs = H[:, 2 * k] ** 2
        report.comparisons += len(pts)
        for i in np.flatnonzero(_exceeds(lhs, rhs)):
            report.add_failure(pts[i], lhs[i], rhs[i], chain="product", k=k)
    return report


def comparable_pairs(max_weight: int, even_only: bool = False, relation: str = "normalized") -> list[tuple]:
    """All ordered partition pairs ``(lam, mu)``, weights ``<= max_weight``, with ``lam`` preceding ``mu``."""
    if even_only:
        parts = [tuple(2 * q for q in p) for w in range(1, max_weight // 2 + 1) for p in partitions_of(w)]
    else:
        parts = [p for w in range(1, max_weight + 1) for p in partitions_of(w)]
    rel = RELATIONS[relation]
    return [(a, b) for a in parts for b in parts if rel(a, b)]
