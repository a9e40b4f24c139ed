"""Command-line entry point: ``condextremes <command> ...``.

Commands write CSV (17 significant digits, header row, ``#`` comment lines)
to stdout or ``--output``.  Exit status: 0 success, 1 domain or validation
error, 2 usage error, 3 numerical failure (including a verification run that
misses its tolerance).

Every command accepts ``--config FILE`` holding ``key = value`` lines whose
keys are the long option names; options given on the command line win.
"""
from __future__ import annotations

import argparse
import math
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import empirical, ht_model, hw_model, invlogistic, laplace_engine, numerics
from .errors import CondExtremesError, DomainError, NumericalError
from .margins import ProbLevel

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

FIG1_Y = (10, 20, 30, 40, 50, 100)
FIG_GAMMAS = (1.0, 1.5, 2.0, 5.0)
FIG4_SEED_NOTE = "fig 4 draws a fresh sample and needs --seed"


class VerificationFailed(NumericalError):
    pass


class SpliceCheckFailed(DomainError):
    pass


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.17g}"


def csv_line(values: Iterable) -> str:
    return ",".join(fmt(v) for v in values)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def finite_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"{text!r} is not finite")
    return v


def float_list(text: str) -> list[float]:
    """Comma list ``1,2,5`` or range ``start:stop:step`` (stop included)."""
    text = text.strip()
    if ":" in text:
        parts = [finite_float(t) for t in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
            raise argparse.ArgumentTypeError(f"bad range {text!r}; expected start:stop:step")
        start, stop, step = parts
        k = int(math.floor((stop - start) / step + 1e-9))
        return [start + i * step for i in range(k + 1)]
    return [finite_float(t) for t in text.split(",") if t.strip()]


def read_config(path) -> list[str]:
    """``key = value`` lines to argv tokens (``--key value``)."""
    tokens: list[str] = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("_", "-"), value.strip()
        if not sep or not key:
            raise argparse.ArgumentTypeError(f"{path}:{lineno}: expected 'key = value'")
        if value.lower() in ("true", "yes", "on"):
            tokens.append(f"--{key}")
        elif value.lower() in ("false", "no", "off"):
            continue
        else:
            tokens += [f"--{key}", value]
    return tokens


def merge_config(argv: Sequence[str]) -> list[str]:
    """Splice config-file options in front of the command-line options."""
    argv = list(argv)
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise argparse.ArgumentTypeError("--config needs a file name")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    n_pos = 0
    while n_pos < len(rest) and not rest[n_pos].startswith("-"):
        n_pos += 1
    return rest[:n_pos] + read_config(path) + rest[n_pos:]


@contextmanager
def output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


# ---------------------------------------------------------------------------
# laplace-verify
# ---------------------------------------------------------------------------

def gamma_ratio(a: float) -> float:
    """``Gamma(a + 1) e^a a^(-a - 1/2)``; the Stirling series avoids cancellation for large ``a``."""
    if a < 10:
        return math.exp(numerics.log_gamma_fn(a + 1) + a - (a + 0.5) * math.log(a))
    series = 1 / (12 * a) - 1 / (360 * a**3) + 1 / (1260 * a**5) - 1 / (1680 * a**7)
    return math.sqrt(2 * math.pi) * math.exp(series)


def laplace_rows(example: int, n_list, p: int = 2, alpha_fn=None, beta_fn=None, rel_tol=1e-12):
    """``(n, scaled_integral, reference)`` for the three worked examples.

    Example 1 uses the ``n^(1/p)`` normalisation (reference ``Gamma(1/p + 1)``),
    example 2 the ``sqrt(n)`` one over the whole line (reference
    ``sqrt(pi) exp(1/(4n))``), example 3 the curvature scaling
    ``sqrt(-g_n''(x*))`` (reference ``Gamma(a+1) e^a a^(-a-1/2)``).
    """
    rows = []
    for n in n_list:
        if example == 1:
            fam = laplace_engine.power_family(p)
            log_int = numerics.integrate_log(lambda x: fam.g(n, x), (0.0, math.inf), rel_tol,
                                             points=[n ** (-1 / p)], scale=n ** (-1 / p))
            rows.append((n, math.exp(log_int + math.log(n) / p), math.gamma(1 / p + 1)))
        elif example == 2:
            fam = laplace_engine.linear_quadratic_family(whole_line=True)
            rep = laplace_engine.scaled_integral(fam, n, rel_tol=rel_tol)
            g_star = float(fam.g(n, np.array([rep.x_star]))[0])
            val = math.exp(rep.log_integral + g_star + 0.5 * math.log(n))
            rows.append((n, val, math.sqrt(math.pi) * math.exp(1 / (4 * n))))
        elif example == 3:
            a, b = alpha_fn(n), beta_fn(n)
            fam = laplace_engine.gamma_family(alpha_fn, beta_fn)
            rep = laplace_engine.scaled_integral(fam, n, k0=2, rel_tol=rel_tol)
            ref = gamma_ratio(a)
            rows.append((n, rep.scaled_integral, ref))
        else:
            raise DomainError(f"unknown example {example}")
    return rows


def cmd_laplace_verify(args) -> int:
    if args.example == 3:
        alpha_fn = lambda n: args.alpha_scale * n
        beta_fn = lambda n: args.beta_const
    else:
        alpha_fn = beta_fn = None
    rows = laplace_rows(args.example, args.n, args.p, alpha_fn, beta_fn)
    worst = 0.0
    with output(args.output) as fh:
        fh.write("example,n,scaled_integral,reference,abs_err\n")
        for n, val, ref in rows:
            err = abs(val - ref)
            worst = max(worst, err)
            fh.write(csv_line([args.example, n, val, ref, err]) + "\n")
    if worst > args.tol:
        raise VerificationFailed(f"largest abs_err {worst:.3g} exceeds tolerance {args.tol:g}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

def hw_params_from_args(args) -> hw_model.HwParams:
    if args.params in (None, "table_s1"):
        base = hw_model.hw_table_s1().to_dict()
    else:
        base = hw_model.HwParams.from_file(args.params).to_dict()
    for key in hw_model.PARAM_KEYS:
        v = getattr(args, "lam" if key == "lambda" else key, None)
        if v is not None:
            base[key] = v
    return hw_model.HwParams.from_dict(base, renormalize=args.renormalize)


def ht_params_from_args(args) -> ht_model.HtParams:
    base = {} if args.params is None else ht_model.HtParams.from_file(args.params).to_dict()
    for key in ht_model.PARAM_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            base[key] = v
    return ht_model.HtParams.from_dict(base)


def check_splice(p: hw_model.HwParams, force: bool) -> hw_model.HwDiagnostics:
    d = hw_model.validate(p)
    if not d.ok and not force:
        raise SpliceCheckFailed(
            f"splice diagnostics out of tolerance: mass={d.mass:.6g}, density gap={d.density_gap_rel:.3g}"
        )
    return d


def fig1(args, fh) -> None:
    p = hw_params_from_args(args)
    check_splice(p, args.skip_splice_check)
    xs = np.geomspace(args.x_min, args.x_max, args.points)
    fh.write("x,y,log_g\n")
    for y in args.y:
        vals = hw_model.log_integrand(p, y, xs)
        for x, v in zip(xs, vals):
            fh.write(csv_line([x, y, v]) + "\n")


def _unit_grid(k: int) -> np.ndarray:
    """``k`` cell midpoints of ``(0, 1)``."""
    return (np.arange(k) + 0.5) / k


def fig2(args, fh) -> None:
    fh.write("gamma,alpha,beta,boundary_fn,c0,region\n")
    for g in args.gamma:
        for a in _unit_grid(args.grid):
            for b in _unit_grid(args.grid):
                d = 1.0 / (1.0 - b)
                c0 = ht_model.solve_c0(a, g, d)
                region = "2a" if c0 < 1 else "2b"
                fh.write(csv_line([g, a, b, ht_model.boundary_fn(a, g, d), c0, region]) + "\n")


def fig3(args, fh) -> None:
    fh.write("gamma,alpha,beta,eta\n")
    steps = np.round(np.arange(0.0, 1.0 - 1e-9, args.step), 12)
    for g in args.gamma:
        for a in steps:
            for b in steps:
                p = ht_model.HtParams(float(a), float(b), g, 1.0 / (1.0 - b))
                fh.write(csv_line([g, a, b, ht_model.eta(p).eta]) + "\n")


def fig4(args, fh) -> None:
    if args.seed is None:
        raise UsageError(FIG4_SEED_NOTE)
    xi = args.xi
    eta_true = invlogistic.eta_exact(xi).eta
    p_ht = invlogistic.ht_limit(xi, u_thr=args.ht_u_thr)
    eta_ht = ht_model.eta(p_ht).eta
    us = float_list(args.u_grid) if isinstance(args.u_grid, str) else args.u_grid
    sample = invlogistic.simulate(xi, args.n, args.seed)
    cross = ht_model.crossing_level(p_ht, eta_true, (max(us[0], 1.0), us[-1]), args.margin)
    fh.write(f"# xi={xi!r}, seed={args.seed}, n={args.n}, margin={args.margin}, u_thr={args.ht_u_thr!r}\n")
    fh.write(f"# crossing_u={cross:.17g}\n")
    fh.write("u,p,eta,eta_ht,eta_ht_p,eta_hat,ci_lo,ci_hi,m_joint\n")
    for u in us:
        lv = ProbLevel(u)
        curve = ht_model.eta_at(p_ht, lv, args.rel_tol, args.margin)
        est = None
        if lv.p < 1 - 1.0 / args.n:
            est = empirical.eta_hat_curve(sample, [lv])[0]
        row = [u, lv.p, eta_true, eta_ht, curve]
        row += [est.eta_hat, est.ci_lo, est.ci_hi, est.m_joint] if est else [None] * 4
        fh.write(csv_line(row) + "\n")


class UsageError(Exception):
    pass


def cmd_fig(args) -> int:
    with output(args.output) as fh:
        {1: fig1, 2: fig2, 3: fig3, 4: fig4}[args.figure](args, fh)
    return EXIT_OK


# ---------------------------------------------------------------------------
# eta, simulate, estimate
# ---------------------------------------------------------------------------

def cmd_eta(args) -> int:
    if args.model == "hw":
        p = hw_params_from_args(args)
        check_splice(p, args.skip_splice_check)
        s = hw_model.eta_closed(p)
        line = ["hw", s.chi, s.eta, s.note]
    elif args.model == "ht":
        p = ht_params_from_args(args)
        s = ht_model.eta(p)
        line = ["ht", s.chi, s.eta if s.eta_defined else "undefined", s.note]
    else:
        s = invlogistic.eta_exact(args.xi)
        line = ["invlog", s.chi, s.eta, s.note]
    with output(args.output) as fh:
        fh.write(csv_line(line) + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    s = invlogistic.simulate(args.xi, args.n, args.seed)
    with output(args.output) as fh:
        fh.write(invlogistic.format_sample_csv(s))
    return EXIT_OK


def cmd_estimate(args) -> int:
    text = sys.stdin.read() if args.sample == "-" else Path(args.sample).read_text()
    s = invlogistic.parse_sample_csv(text)
    if args.p is not None:
        levels = [ProbLevel.from_p(p) for p in args.p]
    else:
        levels = [ProbLevel(u) for u in args.u]
    curve = empirical.eta_hat_curve(s, levels)
    with output(args.output) as fh:
        fh.write(empirical.format_curve_csv(curve))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(sp) -> None:
    sp.add_argument("-o", "--output", help="output file (default stdout)")
    sp.add_argument("--rel-tol", type=finite_float, default=numerics.DEFAULT_REL_TOL,
                    help="relative quadrature tolerance")


def _hw_options(sp) -> None:
    sp.add_argument("--params", default="table_s1", help="'table_s1' or a name = value file")
    for key in hw_model.PARAM_KEYS:
        dest = "lam" if key == "lambda" else key
        sp.add_argument(f"--{key.replace('_', '-')}", dest=dest, type=finite_float)
    sp.add_argument("--renormalize", action="store_true", help="divide f_X by its total mass")
    sp.add_argument("--skip-splice-check", action="store_true",
                    help="do not fail when the splice diagnostics are out of tolerance")


def _ht_options(sp) -> None:
    sp.add_argument("--params", help="name = value file with alpha, beta, gamma, delta, u_thr")
    for key in ht_model.PARAM_KEYS:
        sp.add_argument(f"--{key.replace('_', '-')}", dest=key, type=finite_float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="condextremes", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key = value file of default options")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("laplace-verify", help="check the worked Laplace examples")
    sp.add_argument("--example", type=int, choices=(1, 2, 3), required=True)
    sp.add_argument("--n", type=float_list, default=[1e2, 1e4, 1e6], help="n values (list or range)")
    sp.add_argument("--p", type=int, choices=(1, 2, 3, 4), default=2, help="power for example 1")
    sp.add_argument("--alpha-scale", type=finite_float, default=1.0, help="example 3: alpha_n = scale * n")
    sp.add_argument("--beta-const", type=finite_float, default=1.0, help="example 3: beta_n")
    sp.add_argument("--tol", type=finite_float, default=1e-6, help="largest allowed abs_err")
    _common(sp)
    sp.set_defaults(func=cmd_laplace_verify)

    sp = sub.add_parser("fig", help="CSV data behind figures 1-4")
    sp.add_argument("figure", type=int, choices=(1, 2, 3, 4))
    _common(sp)
    _hw_options(sp)
    sp.add_argument("--y", type=float_list, default=list(FIG1_Y), help="fig 1: y values")
    sp.add_argument("--x-min", type=finite_float, default=1e-3)
    sp.add_argument("--x-max", type=finite_float, default=300.0)
    sp.add_argument("--points", type=int, default=400)
    sp.add_argument("--gamma", type=float_list, default=list(FIG_GAMMAS), help="figs 2-3: gamma values")
    sp.add_argument("--grid", type=int, default=40, help="fig 2: cells per axis")
    sp.add_argument("--step", type=finite_float, default=0.05, help="fig 3: alpha/beta step")
    sp.add_argument("--xi", type=finite_float, default=0.35)
    sp.add_argument("--n", type=int, default=10_000)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--u-grid", default="2:200:0.25", help="fig 4: u values (list or range)")
    sp.add_argument("--ht-u-thr", type=finite_float, default=1.0, help="fig 4: HT model threshold")
    sp.add_argument("--margin", choices=ht_model.MARGINS, default="exponential",
                    help="fig 4: scale on which eta_HT(p) thresholds are set")
    sp.set_defaults(func=cmd_fig)

    sp = sub.add_parser("eta", help="limiting chi and eta of a model")
    msub = sp.add_subparsers(dest="model", required=True)
    m = msub.add_parser("hw")
    _hw_options(m)
    _common(m)
    m = msub.add_parser("ht")
    _ht_options(m)
    _common(m)
    m = msub.add_parser("invlog")
    m.add_argument("--xi", type=finite_float, required=True)
    _common(m)
    sp.set_defaults(func=cmd_eta)

    sp = sub.add_parser("simulate", help="inverted-logistic sample on Laplace margins")
    sp.add_argument("--xi", type=finite_float, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    _common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("estimate", help="empirical eta(p) with 95% intervals from a sample CSV")
    sp.add_argument("sample", help="sample CSV file, or - for stdin")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--p", type=float_list, help="probability levels")
    g.add_argument("--u", type=float_list, help="levels as u = -log(1 - p)")
    _common(sp)
    sp.set_defaults(func=cmd_estimate)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = merge_config(argv)
    except (argparse.ArgumentTypeError, OSError) as exc:
        print(f"condextremes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"condextremes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (NumericalError, ArithmeticError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (CondExtremesError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
