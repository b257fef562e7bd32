"""Command line front end.

Exit status: 0 on success, 2 on usage errors (argparse), 1 on numerical or
domain errors, which also print ``{"error": <code>, "detail": <text>}`` on
standard error.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import jsonio
from .analysis import (
    convergence_sweep,
    decompose_frobenius_error,
    eigenvalue_matching,
    fit_rate,
    rate_check_banded_rhs,
    rate_check_eigenvalues,
    rate_check_pseries,
    records_to_csv,
)
from .dft import is_power_of_two
from .emulator import EmulationConfig, Grover, run_pipeline
from .errors import DomainError, ToeplitzError
from .matrices import associated_circulant, circulant_solve, toeplitz_from_symbol
from .rhs import RHS_GRAMMAR, rhs_from_spec
from .symbols import PSeries, SYMBOL_GRAMMAR, SymbolSyntaxError, parse_symbol

__all__ = ["main", "parse_n_list", "build_parser"]

N_LIST_GRAMMAR = """\
n-list grammar (--n-list):
  A:B:dyadic      powers of two from A to B inclusive (A, B powers of two)
  A:B:S           A, A+S, ... up to B
  N1,N2,...       explicit ascending list"""

EPILOG = "\n\n".join([SYMBOL_GRAMMAR, RHS_GRAMMAR, N_LIST_GRAMMAR])


class UsageError(Exception):
    pass


def parse_n_list(text: str) -> list[int]:
    try:
        if ":" in text:
            a, b, step = text.split(":")
            a, b = int(a), int(b)
            if step == "dyadic":
                if not (is_power_of_two(a) and is_power_of_two(b)):
                    raise UsageError("dyadic bounds must be powers of two")
                out = []
                n = a
                while n <= b:
                    out.append(n)
                    n *= 2
            else:
                s = int(step)
                if s <= 0:
                    raise UsageError("step must be positive")
                out = list(range(a, b + 1, s))
        else:
            out = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse n-list {text!r}") from None
    if not out or out != sorted(out) or len(set(out)) != len(out) or out[0] < 1:
        raise UsageError(f"n-list {text!r} must be non-empty, positive and strictly ascending")
    return out


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _amplification(text):
    if text == "analytic":
        return "analytic"
    kind, _, k = text.partition(":")
    if kind == "grover":
        try:
            return Grover(int(k))
        except (ValueError, DomainError):
            pass
    raise argparse.ArgumentTypeError("expected 'analytic' or 'grover:K' with K >= 0")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    p = argparse.ArgumentParser(
        prog="circtoep",
        description="Toeplitz systems through their associated circulant.",
        epilog=EPILOG,
        formatter_class=fmt,
    )
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_text, output_default):
        sp = sub.add_parser(name, help=help_text, description=help_text, epilog=EPILOG, formatter_class=fmt)
        sp.add_argument("--symbol", required=True, help="generating function, see grammar below")
        sp.add_argument("--output", choices=("csv", "json"), default=output_default)
        sp.add_argument("--output-path", "-o", help="write here instead of standard output")
        return sp

    sp = add("solve", "solve C_n(f) x = b with the DFT", "json")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--rhs", default="basis:0")

    sp = add("emulate", "emulate the quantum circulant solver on a statevector", "json")
    sp.add_argument("--n", type=_positive_int, required=True, help="power of two")
    sp.add_argument("--rhs", default="basis:0")
    sp.add_argument("--m", type=float, default=None, help="rotation constant (default: f_min)")
    sp.add_argument("--bits", type=int, default=0, help="value register fractional bits, 0 = exact")
    sp.add_argument("--amplification", type=_amplification, default="analytic",
                    help="'analytic' or 'grover:K'")
    sp.add_argument("--mode", choices=("symbol", "wiener"), default="symbol")

    sp = add("converge", "error of the circulant solution over a sweep of n", "csv")
    sp.add_argument("--n-list", required=True)
    sp.add_argument("--rhs", default="random:7")
    sp.add_argument("--epsilon-only", action="store_true",
                    help="skip the dense solve; only the Frobenius distance column is filled")

    sp = add("decompose", "split the Frobenius error into sampling and wrap-around parts", "json")
    sp.add_argument("--n-list", required=True)

    sp = add("rates", "check an error rate over a sweep of n", "json")
    sp.add_argument("--n-list", required=True)
    sp.add_argument("--check", choices=("pseries", "banded", "eigen"), required=True)
    sp.add_argument("--L", type=int, default=2, help="half width of the banded rhs")
    sp.add_argument("--seed", type=int, default=7, help="rhs seed for the pseries check")

    sp = add("eigens", "largest gap between sorted Toeplitz and circulant spectra", "json")
    sp.add_argument("--n-list", required=True)
    return p


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([jsonio.format_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _solve(args, f):
    b = rhs_from_spec(args.rhs, args.n)
    C = associated_circulant(f, args.n)
    x = circulant_solve(C, b)
    res = float(np.linalg.norm(C.matvec(x) - b) / np.linalg.norm(b))
    if args.output == "csv":
        return _rows_csv(("index", "re", "im"), ((j, float(z.real), float(z.imag)) for j, z in enumerate(x)))
    return jsonio.dumps({
        "symbol": f.spec,
        "n": args.n,
        "rhs": args.rhs,
        "x": [float(z.real) for z in x],
        "x_imag": [float(z.imag) for z in x],
        "residual": res,
    }) + "\n"


def _emulate(args, f):
    if not is_power_of_two(args.n):
        raise UsageError(f"--n {args.n} is not a power of two")
    b = rhs_from_spec(args.rhs, args.n)
    cfg = EmulationConfig(m=args.m, value_register_bits=args.bits,
                          amplification=args.amplification, mode=args.mode)
    if args.mode == "wiener":
        t = f.coefficients(args.n)
        source = np.concatenate([t[:0:-1], t])
    else:
        source = f
    rep = run_pipeline(b, source, cfg)
    if args.output == "csv":
        d = rep.to_dict()
        d.pop("output_state", None)
        return _rows_csv(list(d), [list(d.values())])
    return rep.to_json() + "\n"


def _converge(args, f):
    ns = parse_n_list(args.n_list)
    recs = convergence_sweep(f, ns, args.rhs, solve=not args.epsilon_only)
    for r in recs:
        if r.error is not None:
            code, _, detail = r.error.partition(": ")
            print(jsonio.dumps({"error": code, "detail": detail, "n": r.n}, indent=None), file=sys.stderr)
    if args.output == "csv":
        return records_to_csv(recs)
    return jsonio.dumps([vars(r) for r in recs]) + "\n"


def _decompose(args, f):
    ns = parse_n_list(args.n_list)
    rows = [(n, decompose_frobenius_error(f, n)) for n in ns]
    fields = ("sampling_term", "wrap_term", "total_rel", "theorem_bound")
    if args.output == "csv":
        return _rows_csv(("n",) + fields, ([n] + [getattr(d, k) for k in fields] for n, d in rows))
    return jsonio.dumps([dict(n=n, **{k: getattr(d, k) for k in fields}) for n, d in rows]) + "\n"


def _rates(args, f):
    ns = parse_n_list(args.n_list)
    if args.check == "pseries":
        if not isinstance(f, PSeries):
            raise UsageError("--check pseries needs a pseries:P,T0 symbol")
        fit = rate_check_pseries(f.p, f.t0, ns, seed=args.seed)
    elif args.check == "banded":
        fit = rate_check_banded_rhs(f, args.L, ns)
    else:
        fit = rate_check_eigenvalues(f, ns)
    if args.output == "csv":
        return _rows_csv(("n", "error", "normalized_constant", "model", "verdict", "tolerance_factor"),
                         ((n, e, c, fit.model, fit.verdict, fit.tolerance_factor)
                          for n, e, c in zip(fit.n_values, fit.errors, fit.normalized_constants)))
    return fit.to_json() + "\n"


def _eigens(args, f):
    ns = parse_n_list(args.n_list)
    gaps = [eigenvalue_matching(toeplitz_from_symbol(f, n), associated_circulant(f, n)) for n in ns]
    if args.output == "csv":
        return _rows_csv(("n", "max_gap"), zip(ns, gaps))
    fit = fit_rate(ns, gaps, "inv_n")
    return jsonio.dumps({"n": ns, "max_gap": gaps, "gap_times_n": fit.normalized_constants}) + "\n"


COMMANDS = {
    "solve": _solve,
    "emulate": _emulate,
    "converge": _converge,
    "decompose": _decompose,
    "rates": _rates,
    "eigens": _eigens,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        f = parse_symbol(args.symbol)
        text = COMMANDS[args.command](args, f)
    except (UsageError, SymbolSyntaxError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ToeplitzError as exc:
        print(jsonio.dumps({"error": exc.code, "detail": str(exc)}, indent=None), file=sys.stderr)
        return 1
    if args.output_path:
        with open(args.output_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0
