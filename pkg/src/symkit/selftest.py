"""Built-in smoke checks: the small hand-checkable cases of every module."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import inequalities as iq
from .linalg import eigenvalues, kron, matrix_power, op_norm2
from .partitions import majorizes, normalized_majorizes, partitions_by_length, partitions_of, z_beta
from .series import TruncatedSeries, det_identity_check, det_resolvent_series, macmahon_lhs_coeff, verify_macmahon
from .sphere import exact_integral, mc_H_p, mc_numerical_power, monomial_integral
from .symfun import H_lambda, H_norm, frak_H, h_direct, h_newton, h_powersum, power_sum
from .symtensor import c_nk, sym_power, sym_trace_via_kron, trace_formula_k


def _close(a, b, tol=1e-12):
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(b)))


def _checks(quick: bool):
    I2, I3 = np.eye(2), np.eye(3)
    nil = np.array([[0, 1], [0, 0]])
    F = Fraction
    yield "linalg.kron", np.array_equal(kron(I2, I2), np.eye(4)) and kron([[2]], [[3]])[0, 0] == 6
    yield "linalg.eigenvalues", (eigenvalues(np.diag([1, 2, 3])).matches([1, 2, 3], 1e-10)
                                 and eigenvalues(nil).matches([0, 0], 1e-10))
    yield "linalg.op_norm2", _close(op_norm2(np.diag([1, -3])), 3, 1e-8)
    yield "linalg.matrix_power", np.allclose(matrix_power(np.diag([2, 3]), 2), np.diag([4, 9]))

    yield "partitions.partitions_of", partitions_of(0) == [()] and partitions_of(1) == [(1,)]
    yield "partitions.by_length", partitions_by_length(3) == {1: [(3,)], 2: [(2, 1)], 3: [(1, 1, 1)]}
    yield "partitions.z_beta", z_beta((1, 1, 1, 1)) == 24 and z_beta((4,)) == 4 and z_beta((2, 1)) == 2
    yield "partitions.majorizes", majorizes((1, 1), (2, 0)) and not majorizes((2, 0), (1, 1))
    yield "partitions.normalized", normalized_majorizes((1,), (2,)) and normalized_majorizes((1, 1), (2,))

    yield "symfun.power_sum", power_sum(1, [1, 2, 3]) == 6 and power_sum(2, [1, -1]) == 2
    yield "symfun.h_direct", h_direct(2, [1, 1]) == 3 and h_direct(3, [2, 3]) == 65
    yield "symfun.h_powersum", h_powersum(2, [1, 1]) == 3 and h_powersum(0, [5]) == 1
    yield "symfun.h_newton", h_newton(3, [1, 1]) == 4 and h_newton(1, [2, 5]) == 7
    yield "symfun.H_norm", H_norm(2, [1, 0]) == F(1, 3) and H_norm(4, [1, 1, 1]) == 1
    yield "symfun.H_lambda", H_lambda((2, 1), [2, 3]) == F(95, 6)
    yield "symfun.frak_H", _close(frak_H((2,), [1, 0]), 3 ** -0.5)

    yield "symtensor.c_nk", c_nk(5, 0) == 1 and c_nk(5, 1) == 5 and c_nk(2, 3) == 4
    yield "symtensor.sym_power", np.allclose(sym_power(I2, 2), I3) and np.allclose(
        sym_power(np.diag([2, 3]), 2), np.diag([4, 6, 9]))
    yield "symtensor.kron_trace", _close(sym_trace_via_kron(I2, 3), 4) and _close(
        sym_trace_via_kron(np.diag([1, 0]), 2), 1)
    yield "symtensor.trace_formula", _close(trace_formula_k(I2, 2), 3) and _close(trace_formula_k(I2, 3), 4)

    yield "sphere.monomial_integral", (monomial_integral((1, 0, 0), (1, 0, 0)) == F(1, 3)
                                       and monomial_integral((1, 0), (0, 1)) == 0
                                       and monomial_integral((1, 1), (1, 1)) == F(1, 6))
    yield "sphere.exact_integral", exact_integral(np.eye(3, dtype=object), 4) == 1 and _close(
        exact_integral(nil, 2), 0)
    est = mc_numerical_power(I3, 7, 10, 0)
    yield "sphere.mc_constant", est.value == 1 and est.stderr == 0
    est = mc_H_p([2.0, 2.0], 1.5, 10, 0)
    yield "sphere.mc_H_p_constant", _close(est.value, 2 ** 1.5) and est.stderr == 0
    if not quick:
        est = mc_numerical_power(np.diag([1, 0]), 1, 20_000, 0)
        yield "sphere.mc_trace", est.within(0.5)

    x1 = TruncatedSeries.variable(0, 2, 4)
    yield "series.mul", (1 + x1) * (1 - x1) == 1 - x1 * x1
    inv = (1 - x1).inverse()
    yield "series.inverse", all(inv.coeff((j, 0)) == 1 for j in range(5)) and len(inv.coeffs) == 5
    ones = np.array([[1, 1], [1, 1]], dtype=object)
    yield "series.resolvent", det_resolvent_series(ones, 4).coeff((1, 1)) == 2
    yield "series.lhs", macmahon_lhs_coeff(ones, (1, 1)) == 2
    yield "series.macmahon", verify_macmahon(ones, 4).ok and verify_macmahon(np.eye(2, dtype=object), 4).ok
    rep = det_identity_check(0.3 * I2, 10, 0)
    yield "series.det_identity", rep.passed and rep.estimate.stderr == 0

    yield "ineq.positivity", iq.check_positivity(2, 50 if quick else 500, 0).status == "pass"
    yield "ineq.monotone_equal", iq.check_monotone((2, 1), (2, 1), 50, 0).status == "pass"
    yield "ineq.newton_ones", iq.newton_like_chain([1.0, 1.0, 1.0], 4).status == "pass"


def run_selftest(quick: bool = False) -> list[dict]:
    out = []
    for name, ok in _checks(quick):
        out.append({"name": name, "ok": bool(ok)})
    return out
