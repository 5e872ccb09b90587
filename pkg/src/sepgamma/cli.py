"""Command-line interface: ``sepgamma <gen|bounds|certify|sweep|selftest>``.

Exit codes report operational status only: 0 success, 2 invalid input,
3 numeric failure. Verdicts live in the output files. ``certify --verify``
and ``selftest`` additionally exit 1 when a check fails.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import io
from .baselines import ppt_check
from .crossnorm import (
    SearchConfig,
    certify,
    lower_bounds,
    upper_bound_search,
)
from .crossnorm.certify import as_elementary
from .errors import SepGammaError, ValidationError
from .selftest import MUTATIONS, run_selftest
from .states import (
    RANDOM_KINDS,
    RandomSpec,
    bell,
    max_entangled,
    maximally_mixed,
    random_state,
    werner,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
SWEEP_HEADER = ["param", "gamma_lower", "gamma_upper", "measure_lo", "measure_hi", "ppt_min_eig", "verdict"]


class UsageError(ValidationError):
    pass


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    d = SearchConfig()
    g = p.add_argument_group("search budget and tolerances")
    g.add_argument("--restarts", type=int, default=d.restarts)
    g.add_argument("--max-iters", type=int, default=d.max_iters)
    g.add_argument("--step-init", type=float, default=d.step_init)
    g.add_argument("--step-shrink", type=float, default=d.step_shrink)
    g.add_argument("--rank-padding", type=int, default=d.rank_padding)
    g.add_argument("--seed", type=int, default=d.seed)
    g.add_argument("--entangled-tol", type=float, default=d.entangled_tol)
    g.add_argument("--sep-tol", type=float, default=d.sep_tol)
    g.add_argument("--sep-reconstruction-tol", type=float, default=d.sep_reconstruction_tol)
    g.add_argument("--convergence-tol", type=float, default=d.convergence_tol)


def _config(args) -> SearchConfig:
    return SearchConfig(
        restarts=args.restarts,
        max_iters=args.max_iters,
        step_init=args.step_init,
        step_shrink=args.step_shrink,
        seed=args.seed,
        rank_padding=args.rank_padding,
        entangled_tol=args.entangled_tol,
        sep_tol=args.sep_tol,
        sep_reconstruction_tol=args.sep_reconstruction_tol,
        convergence_tol=args.convergence_tol,
    )


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_gen(args) -> int:
    if args.family == "bell":
        rho = bell()
    elif args.family == "werner":
        if args.p is None:
            raise UsageError("gen werner needs --p")
        rho = werner(args.p)
    elif args.family == "max_entangled":
        rho = max_entangled(args.d)
    elif args.family == "maximally_mixed":
        rho = maximally_mixed(args.dims)
    else:
        params = {}
        if args.k is not None:
            params["k"] = args.k
        if args.rank is not None:
            params["rank"] = args.rank
        rho = random_state(RandomSpec(args.seed, args.kind, params), args.dims)
    _emit(io.dumps(io.state_to_obj(rho)), args.out)
    if args.provenance_out is not None:
        if rho.provenance is None:
            raise UsageError("--provenance-out needs a state with a separable provenance (random --kind separable)")
        io.write_json(args.provenance_out, io.separable_to_obj(rho.provenance))
    return EXIT_OK


def cmd_bounds(args) -> int:
    rho = io.state_from_obj(io.read_json(args.input))
    config = _config(args)
    lower, method, _, spectrum = lower_bounds(rho, config)
    ub = upper_bound_search(rho, config)
    out = {
        "gamma_lower": float(lower),
        "gamma_upper": float(ub.value),
        "lower_method": method,
        "spectrum": [float(s) for s in spectrum],
    }
    sys.stdout.write(io.dumps(out))
    return EXIT_OK


def cmd_certify(args) -> int:
    if args.verify is not None:
        report = io.verify_certificate(io.read_json(args.verify))
        for name, ok, detail in report.checks:
            sys.stdout.write(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "") + "\n")
        sys.stdout.write(f"verdict {report.verdict}: {'verified' if report.ok else 'NOT verified'}\n")
        return EXIT_OK if report.ok else EXIT_FAIL
    if args.input is None:
        raise UsageError("certify needs --in (or --verify)")
    rho = io.state_from_obj(io.read_json(args.input))
    seed_dec = None
    if args.seed_dec is not None:
        seed_dec = io.decomposition_from_obj(io.read_json(args.seed_dec))
    cert = certify(rho, _config(args), as_elementary(seed_dec))
    _emit(io.dumps(io.certificate_to_obj(cert, rho)), args.out)
    return EXIT_OK


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def sweep_rows(family: str, lo: float, hi: float, steps: int, config: SearchConfig) -> list[list[str]]:
    if family != "werner":
        raise UsageError(f"sweep supports the werner family, got {family!r}")
    if steps < 1 or not (0.0 <= lo <= 1.0 and 0.0 <= hi <= 1.0):
        raise UsageError("sweep needs steps >= 1 and a range inside [0, 1]")
    rows = []
    for p in np.linspace(lo, hi, steps):
        rho = werner(float(p))
        cert = certify(rho, config)
        upper = cert.bounds.upper
        if upper is None:
            upper = upper_bound_search(rho, config).value
        lower = cert.bounds.lower
        rows.append([
            _fmt(p), _fmt(lower), _fmt(upper), _fmt(lower - 1.0), _fmt(upper - 1.0),
            _fmt(ppt_check(rho).min_eigenvalue), cert.verdict.value,
        ])
    return rows


def cmd_sweep(args) -> int:
    lo, hi = args.param_range
    rows = sweep_rows(args.family, lo, hi, args.steps, _config(args))
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    writer.writerows(rows)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    rows = run_selftest(seed=args.seed, mutate=args.mutate)
    failed = 0
    for name, ok, seconds, detail in rows:
        failed += not ok
        sys.stdout.write(f"{'PASS' if ok else 'FAIL'}  {name:<38} {seconds * 1e3:8.1f} ms  {detail}\n")
    sys.stdout.write(f"{len(rows) - failed}/{len(rows)} checks passed\n")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sepgamma", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sepgamma {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a state file")
    p.add_argument("family", choices=["werner", "bell", "max_entangled", "maximally_mixed", "random"])
    p.add_argument("--p", type=float, help="Werner singlet weight in [0, 1]")
    p.add_argument("--d", type=int, default=2, help="local dimension for max_entangled")
    p.add_argument("--dims", type=int, nargs=2, default=[2, 2], metavar=("D1", "D2"))
    p.add_argument("--kind", choices=RANDOM_KINDS, default="mixed_hs")
    p.add_argument("--k", type=int, help="number of product terms (kind separable)")
    p.add_argument("--rank", type=int, help="Ginibre rank")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--provenance-out", help="also write the separable decomposition used to build the state")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bounds", help="print lower and upper bounds as JSON")
    p.add_argument("--in", dest="input", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("certify", help="write a certificate file, or verify one")
    p.add_argument("--in", dest="input")
    p.add_argument("--seed-dec", help="decomposition file to start the search from")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--verify", metavar="CERT", help="re-check an existing certificate and exit")
    _add_config_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", help="CSV of bounds along a state family")
    p.add_argument("family", choices=["werner"])
    p.add_argument("--param-range", type=float, nargs=2, default=[0.0, 1.0], metavar=("LO", "HI"))
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--out", help="output path (default: stdout)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--mutate", choices=MUTATIONS, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (SepGammaError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"sepgamma: error: {exc}\n")
        return EXIT_INPUT
    except (np.linalg.LinAlgError, FloatingPointError, ArithmeticError) as exc:
        sys.stderr.write(f"sepgamma: numeric failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
