"""Command-line interface: ``fracdirac {kernel,solution,verify}``.

Exit codes: 0 success, 1 failed verification or non-convergence, 2 invalid
arguments.  ``FRACDIRAC_THREADS`` caps the worker processes used for
pointwise kernel evaluation on grids.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .errors import ConvergenceError, FracDiracError, ParameterError
from .kernel import METHODS, KernelQuery, kernel
from .solution import (airy_reference_check, solution_field_projection, solution_field_singular,
                       solution_field_spectral, spectral_data, validate_params)
from .spectral import GridSpec
from . import verification as ver

KERNEL_HELP = """\
CSV columns: r, re_K, im_K, method, est_error
  r          radius |x|
  re_K/im_K  real and imaginary part of K_{alpha,n}(r, tau)
  method     route actually used (wright, quadrature, mellin, origin)
  est_error  absolute error estimate reported by that route
"""

SOLUTION_HELP = """\
CSV columns: x1..xn (or xi1..xin for --space spectral), then re_<blade>, im_<blade>
for every basis blade of Cl(0, n) in bit-mask order (1, e1, e2, e12, e3, ...).
The JSON variant holds the same data plus the setup and grid header.
"""

VERIFY_HELP = """\
Suites:
  residual    spectral ODE residual and physical-space central-difference residual
  semigroup   delta initial condition, zero-mode mass and semigroup property
  crosscheck  three-way kernel table (Wright, quadrature, Mellin-Barnes)
  airy        odd-order reference check against an oscillatory-integral oracle (m = 1, 2)
  all         every suite above
Prints one JSON document; exits 1 if any check fails.
"""


def fmt(x: float) -> str:
    """17 significant digits, enough to round-trip a double."""
    return f"{float(x):.17g}"


def blade_names(n: int) -> list[str]:
    return ["".join(f"e{j + 1}" for j in range(n) if mask >> j & 1) or "1" for mask in range(1 << n)]


def _default_half_width(alpha: float, t: float) -> float:
    # room for the bulk of the kernel plus a margin for its algebraic tail
    return 8.0 * max(t, 1e-3) ** (1.0 / alpha) + 8.0


# -- kernel -------------------------------------------------------------------------

def cmd_kernel(args) -> int:
    validate_params(args.alpha, 0.0, allow_m0=args.allow_m0)
    tau = complex(args.tau_re, args.tau_im)
    kw = {}
    if args.tol is not None:
        kw = {"accuracy": args.tol} if args.method == "wright" else {"tol": args.tol}
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["r", "re_K", "im_K", "method", "est_error"])
    for r in args.r:
        q = KernelQuery(args.alpha, args.n, r, tau)
        value, info = kernel(q, args.method, full_output=True, **kw)
        w.writerow([fmt(r), fmt(value.real), fmt(value.imag), info["method"], fmt(info["est_error"])])
    _emit(out.getvalue(), args.out)
    return 0


# -- solution -----------------------------------------------------------------------

def cmd_solution(args) -> int:
    s = validate_params(args.alpha, args.theta, allow_m0=args.allow_m0)
    L = args.grid_L if args.grid_L is not None else _default_half_width(s.alpha, args.t)
    grid = GridSpec(args.n, args.grid_N, L)
    if args.space == "spectral":
        if args.path != "spectral":
            raise ParameterError("--space spectral is only available with --path spectral")
        field = spectral_data(s, grid, args.t)
        coords = grid.frequencies()
        prefix = "xi"
    else:
        if args.t < 0:
            raise ParameterError("t must be nonnegative")
        if args.path == "spectral":
            field = solution_field_spectral(s, grid, args.t)
        elif args.path == "projection":
            field = solution_field_projection(s, grid, args.t)
        else:
            field = solution_field_singular(s, grid, args.t)
        coords = grid.coords()
        prefix = "x"
    names = blade_names(grid.n)
    pts = coords.reshape(-1, grid.n)
    vals = field.values.reshape(-1, grid.blades)
    fmt_out = "json" if (args.out or "").endswith(".json") else args.format
    if fmt_out == "json":
        doc = {"setup": s.to_dict(), "t": args.t, "path": args.path, "space": args.space,
               "grid": grid.to_dict(), "blades": names,
               "coords": [[float(fmt(c)) for c in p] for p in pts],
               "coefficients": {nm: {"re": [float(fmt(v)) for v in vals[:, i].real],
                                     "im": [float(fmt(v)) for v in vals[:, i].imag]}
                                for i, nm in enumerate(names)}}
        text = json.dumps(doc) + "\n"
    else:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        header = [f"{prefix}{j + 1}" for j in range(grid.n)]
        for nm in names:
            header += [f"re_{nm}", f"im_{nm}"]
        w.writerow(header)
        for p, v in zip(pts, vals):
            row = [fmt(c) for c in p]
            for c in v:
                row += [fmt(c.real), fmt(c.imag)]
            w.writerow(row)
        text = out.getvalue()
    _emit(text, args.out)
    return 0


# -- verify -------------------------------------------------------------------------

DEFAULT_TOLS = {"ode": 1e-12, "pde": 1e-5, "semigroup": 1e-12, "crosscheck": 1e-6, "airy": 1e-5}


def _tol(args, name: str) -> float:
    specific = getattr(args, f"{name}_tol")
    if specific is not None:
        return specific
    if args.tol is not None:
        return args.tol
    return DEFAULT_TOLS[name]


def _suite_residual(args) -> list[dict]:
    out = []
    # (alpha, theta, N, L): the theta = 1 case keeps dt |xi_max|**alpha small
    cases = [(2.0, 0.0, 1024, 20.0), (2.5, 0.5, 1024, 20.0), (3.0, 1.0, 32, 20.0)]
    for alpha, theta, N, L in cases:
        s = validate_params(alpha, theta)
        g = GridSpec(1, N, L)
        for t in (0.0, 1.0):
            rep = ver.spectral_ode_residual(s, g, t)
            d = rep.report(_tol(args, "ode")).to_dict()
            d["passed"] = bool(rep.relative <= _tol(args, "ode") and rep.relative_linf <= _tol(args, "ode"))
            out.append(d)
        r1 = ver.pde_residual(s, g, 1.0, 1e-4)
        r2 = ver.pde_residual(s, g, 1.0, 5e-5)
        d = r1.report(_tol(args, "pde")).to_dict()
        ratio = r1.relative / r2.relative if r2.relative > 0 else math.inf
        d["metrics"]["halving_ratio"] = float(fmt(ratio))
        d["passed"] = bool(d["passed"] and 3.5 <= ratio <= 4.5)
        out.append(d)
    return out


def _suite_semigroup(args) -> list[dict]:
    out = []
    for alpha, theta in [(2.0, 0.0), (2.5, 0.5), (3.0, 1.0), (4.0, 0.0), (5.0, -1.0)]:
        s = validate_params(alpha, theta)
        # grids with eps t max|xi|**alpha below 1e-13, where the product is resolvable
        for g in (GridSpec(1, 64, 32.0), GridSpec(2, 16, 10.0)):
            out.append(ver.delta_ic_check(s, g).to_dict())
            out.append(ver.semigroup_check(s, g, 0.3, 0.9, tol=_tol(args, "semigroup")).to_dict())
    return out


def _suite_crosscheck(args) -> list[dict]:
    return [ver.crosscheck_report(ver.crosscheck_methods(), tol=_tol(args, "crosscheck")).to_dict()]


def _suite_airy(args) -> list[dict]:
    out = []
    g = GridSpec(1, 256, 20.0)
    for m in (1, 2):
        for sign in (1, -1):
            rep = airy_reference_check(m, g, 1.0, sign, tol=_tol(args, "airy"))
            out.append({"check": "odd_order_reference", "setup": {"alpha": 2 * m + 1, "theta": sign, "m": m},
                        "grid": g.to_dict(), "metrics": rep.to_dict(), "passed": rep.passed})
    return out


SUITES = {"residual": _suite_residual, "semigroup": _suite_semigroup,
          "crosscheck": _suite_crosscheck, "airy": _suite_airy}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    checks = []
    for name in names:
        checks += SUITES[name](args)
    passed = all(c["passed"] for c in checks)
    doc = {"suite": args.suite, "checks": checks, "passed": passed}
    _emit(json.dumps(doc, indent=1) + "\n", args.out)
    return 0 if passed else 1


# -- plumbing -----------------------------------------------------------------------

def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracdirac", description="Clifford-valued heat kernels "
                                "for skew fractional Dirac evolution equations.")
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="evaluate the radial kernel K_{alpha,n}(r, tau)",
                       epilog=KERNEL_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    k.add_argument("--alpha", type=float, required=True)
    k.add_argument("--n", type=_positive_int, required=True, help="space dimension")
    k.add_argument("--r", type=float, nargs="+", required=True, help="one or more radii")
    k.add_argument("--tau-re", type=float, default=1.0)
    k.add_argument("--tau-im", type=float, default=0.0)
    k.add_argument("--method", choices=METHODS, default="auto")
    k.add_argument("--tol", type=float, default=None, help="accuracy target of the chosen route")
    k.add_argument("--allow-m0", action="store_true", help="admit 0 < alpha < 2")
    k.add_argument("--out", default=None)
    k.set_defaults(func=cmd_kernel)

    s = sub.add_parser("solution", help="dump the fundamental solution on a grid",
                       epilog=SOLUTION_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--theta", type=float, default=0.0)
    s.add_argument("--n", type=int, default=1, choices=(1, 2, 3))
    s.add_argument("--t", type=float, default=1.0)
    s.add_argument("--grid-N", type=int, default=256, help="points per axis (even)")
    s.add_argument("--grid-L", type=float, default=None,
                   help="half width L of [-L, L)^n (default 8 t^(1/alpha) + 8)")
    s.add_argument("--path", choices=("spectral", "projection", "singular"), default="spectral",
                   help="spectral multipliers, projection form on kernel values, or "
                        "principal-value form (n <= 2)")
    s.add_argument("--space", choices=("physical", "spectral"), default="physical")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--allow-m0", action="store_true", help="admit 0 < alpha < 2")
    s.add_argument("--out", default=None, help="output file; a .json suffix selects JSON")
    s.set_defaults(func=cmd_solution)

    v = sub.add_parser("verify", help="run verification suites",
                       epilog=VERIFY_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    v.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    v.add_argument("--tol", type=float, default=None, help="override every tolerance")
    for name, val in DEFAULT_TOLS.items():
        v.add_argument(f"--{name}-tol", type=float, default=None, help=f"default {val:g}")
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"fracdirac {args.command}: invalid arguments: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"fracdirac {args.command}: not converged: {exc}", file=sys.stderr)
        return 1
    except FracDiracError as exc:
        print(f"fracdirac {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
