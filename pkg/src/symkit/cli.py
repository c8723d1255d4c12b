"""``symkit`` command line: every subcommand prints one JSON document.

Exit codes: 0 success, 1 a checked identity or inequality failed,
2 precondition violated (structured error JSON), 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SymkitError
from .exact import make_complex, real_imag
from .linalg import load_matrix
from .symfun import ALGOS, h
from .symtensor import c_nk, sym_power, sym_power_trace

EXIT_OK, EXIT_FINDING, EXIT_PRECONDITION, EXIT_USAGE = 0, 1, 2, 64


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int = 100_000
    tol: float = 1e-8
    degree: int = 6
    exact: bool = False


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _int_list(text):
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def load_point(path, exact: bool = False) -> list:
    """Point JSON: a plain list of numbers, or ``{"re": [...], "im": [...]}`` with ``im`` optional."""
    obj = json.loads(Path(path).read_text())
    if isinstance(obj, dict):
        re = obj["re"]
        im = obj.get("im") or [0] * len(re)
    else:
        re, im = obj, [0] * len(obj)
    if len(im) != len(re):
        raise SymkitError("point JSON 're' and 'im' lengths differ")
    if exact:
        return [make_complex(a, b) for a, b in zip(re, im)]
    return [complex(float(a), float(b)) for a, b in zip(re, im)]


def _num(value, exact: bool) -> dict:
    re, im = real_imag(value)
    if exact:
        return {"re": str(re), "im": str(im)}
    return {"re": float(re), "im": float(im)}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=_positive(int), default=100_000)
    common.add_argument("--tol", type=_positive(float), default=1e-8)
    common.add_argument("--degree", type=_nonneg_int, default=6)
    common.add_argument("--exact", action="store_true")

    parser = _Parser(prog="symkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("hpoly", parents=[common], help="complete homogeneous polynomial h_k")
    p.add_argument("--k", type=_nonneg_int, required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--algo", choices=ALGOS, default="direct")

    p = sub.add_parser("sympower", parents=[common], help="k-th symmetric tensor power")
    p.add_argument("--k", type=_positive(int), required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--trace-only", action="store_true")

    p = sub.add_parser("integrate", parents=[common], help="sphere integral of <A xi, xi>^k")
    p.add_argument("--matrix", required=True)
    p.add_argument("--k", type=_nonneg_int, required=True)
    p.add_argument("--method", choices=("exact", "mc"), default="exact")

    p = sub.add_parser("hp", parents=[common], help="real-power H_p by Monte Carlo")
    p.add_argument("--point", required=True)
    p.add_argument("--p", type=float, required=True)

    p = sub.add_parser("macmahon", parents=[common], help="verify the MacMahon Master Theorem")
    p.add_argument("--matrix", required=True)

    p = sub.add_parser("det-identity", parents=[common], help="sphere integral of det(I - B)^{-1}")
    p.add_argument("--matrix", required=True)
    p.add_argument("--partial-sum-degree", type=_nonneg_int, default=None)

    p = sub.add_parser("ineq", parents=[common], help="inequality property suites")
    p.add_argument("--suite", choices=("positivity", "monotone", "schur", "newton"), required=True)
    p.add_argument("--trials", type=_positive(int), default=1000)
    p.add_argument("--lambda", dest="lam", type=_int_list)
    p.add_argument("--mu", type=_int_list)
    p.add_argument("--kmax", type=_positive(int), default=None)
    p.add_argument("--n", type=_positive(int), default=None)
    p.add_argument("--domain", default=None, help="positive | real-even (monotone); positive | real (schur)")
    p.add_argument("--relation", choices=("normalized", "repeated"), default="normalized")

    p = sub.add_parser("selftest", parents=[common], help="run the built-in smoke checks")
    p.add_argument("--quick", action="store_true")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(seed=args.seed, samples=args.samples, tol=args.tol, degree=args.degree, exact=args.exact)


def cmd_hpoly(args):
    z = load_point(args.point, exact=args.exact)
    value = h(args.k, z, args.algo)
    return {"value": _num(value, args.exact), "algo": args.algo}, EXIT_OK


def cmd_sympower(args):
    A = load_matrix(args.matrix, exact=args.exact)
    n = A.shape[0]
    out = {"dim": c_nk(n, args.k)}
    if args.trace_only or args.exact:
        t = sym_power_trace(A, args.k)
    else:
        S = sym_power(A, args.k)
        t = complex(np.trace(S))
        out["re"] = S.real.tolist()
        out["im"] = S.imag.tolist()
    re, im = real_imag(t)
    if args.exact:
        out.update(trace_re=str(re), trace_im=str(im))
    else:
        out.update(trace_re=float(re), trace_im=float(im))
    return out, EXIT_OK


def cmd_integrate(args):
    from .sphere import exact_integral, mc_numerical_power
    exact = args.exact and args.method == "exact"
    A = load_matrix(args.matrix, exact=exact)
    if args.method == "mc":
        est = mc_numerical_power(A, args.k, args.samples, args.seed)
        return {"value_re": est.value.real, "value_im": est.value.imag, "stderr": est.stderr,
                "samples": est.samples, "seed": est.seed, "method": "mc"}, EXIT_OK
    value = exact_integral(A, args.k)
    re, im = real_imag(value)
    if exact:
        re, im = str(re), str(im)
    else:
        re, im = float(re), float(im)
    return {"value_re": re, "value_im": im, "stderr": 0.0, "samples": 0, "method": "exact"}, EXIT_OK


def cmd_hp(args):
    from .sphere import mc_H_p
    x = [complex(v).real for v in load_point(args.point)]
    est = mc_H_p(x, args.p, args.samples, args.seed)
    return {"value": est.value.real, "stderr": est.stderr, "samples": est.samples, "seed": est.seed,
            "p": args.p}, EXIT_OK


def cmd_macmahon(args):
    from .series import verify_macmahon
    report = verify_macmahon(load_matrix(args.matrix, exact=True), args.degree)
    return report.to_json(), EXIT_OK if report.ok else EXIT_FINDING


def cmd_det_identity(args):
    from .series import det_identity_check
    report = det_identity_check(load_matrix(args.matrix), args.samples, args.seed, args.partial_sum_degree)
    ok = report.passed and report.partial_sum_passed is not False
    return report.to_json(), EXIT_OK if ok else EXIT_FINDING


def cmd_ineq(args):
    from . import inequalities as iq
    if args.suite == "positivity":
        report = iq.check_positivity(args.kmax or 4, args.trials, args.seed, n=args.n or 4)
    elif args.suite == "monotone":
        if args.lam is None or args.mu is None:
            raise UsageError("ineq --suite monotone needs --lambda and --mu")
        report = iq.check_monotone(args.lam, args.mu, args.trials, args.seed, domain=args.domain or "positive",
                                   n=args.n or 3, relation=args.relation)
    elif args.suite == "schur":
        domain = args.domain or "positive"
        report = iq.check_schur_convex(iq.integer_pairs(), args.trials, args.seed, x_domain=domain,
                                       n=args.n or 3, samples=args.samples)
    else:
        rng = np.random.default_rng(args.seed)
        pts = iq.random_points(rng, args.trials, args.n or 3, "real")
        report = iq.newton_like_chain(pts, args.kmax or 5)
    return report.to_json(), EXIT_FINDING if report.status == "fail" else EXIT_OK


def cmd_selftest(args):
    from .selftest import run_selftest
    checks = run_selftest(quick=args.quick)
    ok = all(c["ok"] for c in checks)
    return {"passed": ok, "checks": checks}, EXIT_OK if ok else EXIT_FINDING


COMMANDS = {
    "hpoly": cmd_hpoly,
    "sympower": cmd_sympower,
    "integrate": cmd_integrate,
    "hp": cmd_hp,
    "macmahon": cmd_macmahon,
    "det-identity": cmd_det_identity,
    "ineq": cmd_ineq,
    "selftest": cmd_selftest,
}


def _emit(payload: dict, stream=None):
    stream = sys.stdout if stream is None else stream
    stream.write(json.dumps(payload, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage())
        config = _config(args)
        payload, code = COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(str(exc).rstrip() + "\n")
        return EXIT_USAGE
    except (SymkitError, OSError, ValueError, KeyError, TypeError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)},
               "config": asdict(_config(args)), "version": __version__})
        return EXIT_PRECONDITION
    payload.update(config=asdict(config), version=__version__)
    _emit(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
