"""Command-line front end: ``stgaps <subcommand> ...`` printing JSON reports.

Exit codes: 0 success, 1 domain error, 2 usage error. Real numbers are written
as decimal strings with 17 significant digits.
"""

import argparse
import csv
import json
import logging
import sys
from math import pi
from pathlib import Path

from mpmath.libmp import to_str

from . import __version__
from .bv_audit import bv_sum_trig, bv_sum_vm
from .cache import angle_digits, cache_manage, cached_angle_table
from .config import load_config
from .errors import StgapsError
from .minorant import chebyshev_minorant, dominance_margin, quality_report
from .newforms import (
    BUILTIN_LABELS,
    angle_table,
    builtin_by_label,
    ingest_coefficients,
    joint_prime_count,
)
from .rankin_selberg import SymPair
from .sato_tate import Interval, st_measure
from .sieve import (
    LambdaProvider,
    PolynomialG,
    explicit_gap_bound,
    mk_lower_bound,
    prime_tuple,
    rho_default,
    s_sums_empirical,
    sieve_setup,
)

log = logging.getLogger("stgaps")


def real(v):
    """17 significant digits."""
    return format(float(v), ".16e")


def _pair_ints(text):
    try:
        a, b = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'a,b', got {text!r}") from None
    return a, b


def _interval(text):
    try:
        return Interval.parse(text)
    except StgapsError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _labels(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two form labels 'f1,f2'")
    return tuple(parts)


# ---------------------------------------------------------------------------
# shared helpers


def _table(cfg, label):
    return cached_angle_table(
        cfg.cache_dir,
        label,
        cfg.pmax,
        cfg.precision_bits,
        lambda: angle_table(builtin_by_label(label, cfg.pmax), cfg.precision_bits),
    )


def _tables(cfg, labels):
    return tuple(_table(cfg, lab) for lab in labels)


def _quality_json(rep):
    out = {}
    for k, v in rep.items():
        if isinstance(v, bool):
            out[k] = v
        elif isinstance(v, (tuple, list)):
            out[k] = list(v)
        else:
            out[k] = real(v)
    return out


def _bv_json(report):
    return {
        "x": real(report.x),
        "theta": real(report.theta),
        "ident": report.ident,
        "per_q": {str(q): real(v) for q, v in sorted(report.per_q.items())},
        "total": real(report.total),
        "normalized": real(report.normalized),
    }


def _write_csv(path, report):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["q", "max_error"])
        for q, v in sorted(report.per_q.items()):
            w.writerow([q, real(v)])


# ---------------------------------------------------------------------------
# subcommands


def cmd_angles(args, cfg):
    if args.coefficients:
        if args.weight is None:
            raise StgapsError("--weight is required with --coefficients")
        table = ingest_coefficients(args.coefficients, args.weight, args.level, args.form)
        A = angle_table(table, cfg.precision_bits)
    else:
        A = _table(cfg, args.form)
    limit = A.pmax if args.limit is None else args.limit
    digits = angle_digits(A.precision_bits)
    entries = [[p, to_str(A.entries[p]._mpf_, digits)] for p in sorted(A.entries) if p <= limit]
    return {
        "label": A.label,
        "weight": A.spec.weight,
        "level": A.spec.level,
        "precision_bits": A.precision_bits,
        "pmax": A.pmax,
        "count": len(entries),
        "entries": entries,
    }


def cmd_measure(args, cfg):
    I = args.interval
    return {"interval": [real(I.a), real(I.b)], "measure": real(st_measure(I))}


def cmd_minorant(args, cfg):
    m1, m2 = args.degrees if args.degrees else (None, None)
    F = chebyshev_minorant(args.i1, args.i2, m1, m2)
    out = _quality_json(quality_report(F))
    if args.dominance:
        grid = args.grid or cfg.grid
        out["dominance_margin"] = real(dominance_margin(F, grid))
        out["grid"] = grid
    return out


def cmd_jointcount(args, cfg):
    A1, A2 = _tables(cfg, args.forms)
    count, pi_x = joint_prime_count(A1, A2, args.i1, args.i2, args.x)
    expected = st_measure(args.i1) * st_measure(args.i2)
    return {
        "forms": list(args.forms),
        "x": args.x,
        "count": count,
        "pi_x": pi_x,
        "ratio": real(count / pi_x if pi_x else 0.0),
        "expected": real(expected),
    }


def cmd_rs_coeff(args, cfg):
    A1, A2 = _tables(cfg, args.forms)
    pair = SymPair(args.pair[0], args.pair[1], A1, A2, cfg.cache_dir)
    lo, hi = (args.n, args.n) if args.upto is None else (1, args.upto)
    series = pair.stream(hi).series(args.kind)
    return {
        "pair": list(args.pair),
        "forms": list(args.forms),
        "kind": args.kind,
        "entries": [[n, real(series[n])] for n in range(lo, hi + 1)],
    }


def cmd_sieve_mk(args, cfg):
    return {"k": args.k, "degree": args.degree, "mk": real(mk_lower_bound(args.k, args.degree))}


def cmd_sieve_bound(args, cfg):
    N1, N2 = args.levels
    M1, M2 = args.degrees
    b = explicit_gap_bound(args.m, N1, N2, args.fhat00, M1, M2, args.c1)
    return {
        "log_k": real(b["log_k"]),
        "theta": real(b["theta"]),
        "theta_tilde": real(b["theta_tilde"]),
        "log_diam_bound": real(b["log_diam_bound"]),
        "c1": real(b["c1"]),
        "c1_is_placeholder": True,
        "k": b["k"],
        "diam_exact": b["diam_exact"],
    }


def cmd_sieve_scan(args, cfg):
    A1, A2 = _tables(cfg, args.forms)
    F = chebyshev_minorant(args.i1, args.i2, *(args.degrees or (None, None)))
    H = prime_tuple(args.k)
    bad = A1.spec.level * A2.spec.level
    sc = sieve_setup(args.theta, args.delta, args.d0, args.x, bad, H, degrees=F.degrees, R=args.r)
    G = PolynomialG.one_minus_sum(H.k)
    Mk = mk_lower_bound(H.k, 3) if H.k >= 2 else 1.0
    rho = args.rho if args.rho is not None else rho_default(bad, F.fhat00, args.theta, Mk)
    S1, S2, S = s_sums_empirical(args.x, sc, H, F, (A1, A2), rho, LambdaProvider(G, sc))
    return {
        "x": real(args.x),
        "k": H.k,
        "h": list(H.h),
        "R": real(sc.R),
        "W": sc.W,
        "U": sc.U,
        "u0": sc.u0,
        "rho": real(rho),
        "S1": real(S1),
        "S2": real(S2),
        "S": real(S),
    }


def cmd_bv_vm(args, cfg):
    A1, A2 = _tables(cfg, args.forms)
    rep = bv_sum_vm(args.x, args.theta, SymPair(args.pair[0], args.pair[1], A1, A2, cfg.cache_dir))
    if args.csv:
        _write_csv(args.csv, rep)
    return _bv_json(rep)


def cmd_bv_trig(args, cfg):
    A1, A2 = _tables(cfg, args.forms)
    F = chebyshev_minorant(args.i1, args.i2, *(args.degrees or (None, None)))
    rep = bv_sum_trig(args.x, args.theta, F, (A1, A2))
    if args.csv:
        _write_csv(args.csv, rep)
    return _bv_json(rep)


def cmd_cache(args, cfg):
    result = cache_manage(args.action, cfg.cache_dir)
    if args.action == "list":
        return {"cache_dir": str(cfg.cache_dir), "files": result}
    if args.action == "clear":
        return {"cache_dir": str(cfg.cache_dir), "removed": result}
    return {"cache_dir": result}


# ---------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(prog="stgaps", description="Sato-Tate bounded gaps toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", type=Path, help="key=value configuration file")
    p.add_argument("--cache-dir", type=Path)
    p.add_argument("--precision", type=int, dest="precision_bits")
    p.add_argument("--pmax", type=int)
    p.add_argument("--grid", type=int)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    forms_default = ("delta", "w16")
    form_choices = sorted(BUILTIN_LABELS.values())

    a = sub.add_parser("angles", help="Sato-Tate angles of a newform")
    a.add_argument("--form", default="delta", help=f"builtin label ({', '.join(form_choices)})")
    a.add_argument("--coefficients", type=Path, help="CSV file 'p,ap' to ingest instead")
    a.add_argument("--weight", type=int)
    a.add_argument("--level", type=int, default=1)
    a.add_argument("--limit", type=int, help="only report p <= limit")
    a.set_defaults(func=cmd_angles, schema="angles")

    m = sub.add_parser("measure", help="Sato-Tate measure of an interval")
    m.add_argument("--interval", type=_interval, required=True)
    m.set_defaults(func=cmd_measure, schema="measure")

    mi = sub.add_parser("minorant", help="build and audit a Chebyshev minorant")
    mi.add_argument("--i1", type=_interval, required=True)
    mi.add_argument("--i2", type=_interval, required=True)
    mi.add_argument("--degrees", type=_pair_ints)
    mi.add_argument("--dominance", action="store_true", help="also scan the dominance grid")
    mi.set_defaults(func=cmd_minorant, schema="minorant")

    j = sub.add_parser("jointcount", help="joint Sato-Tate prime count")
    j.add_argument("--forms", type=_labels, default=forms_default)
    j.add_argument("--i1", type=_interval, required=True)
    j.add_argument("--i2", type=_interval, required=True)
    j.add_argument("--x", type=int, required=True)
    j.set_defaults(func=cmd_jointcount, schema="jointcount")

    r = sub.add_parser("rs-coeff", help="Rankin-Selberg Dirichlet coefficients")
    r.add_argument("--forms", type=_labels, default=forms_default)
    r.add_argument("--pair", type=_pair_ints, default=(1, 1))
    r.add_argument("--kind", choices=("vm", "lambda", "mu"), default="vm")
    g = r.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--upto", type=int)
    r.set_defaults(func=cmd_rs_coeff, schema="rs_coeff")

    s = sub.add_parser("sieve", help="sieve computations")
    ss = s.add_subparsers(dest="sieve_command", required=True)
    smk = ss.add_parser("mk", help="lower bound for M_k")
    smk.add_argument("--k", type=int, required=True)
    smk.add_argument("--degree", type=int, default=3)
    smk.set_defaults(func=cmd_sieve_mk, schema="sieve_mk")
    sb = ss.add_parser("bound", help="explicit gap bound in log space")
    sb.add_argument("--m", type=int, default=1)
    sb.add_argument("--c1", type=float, default=3.0, help="placeholder absolute constant")
    sb.add_argument("--fhat00", type=float, required=True)
    sb.add_argument("--degrees", type=_pair_ints, default=(27, 27))
    sb.add_argument("--levels", type=_pair_ints, default=(1, 1))
    sb.set_defaults(func=cmd_sieve_bound, schema="sieve_bound")
    sc = ss.add_parser("scan", help="empirical S1, S2 sums")
    sc.add_argument("--x", type=float, required=True)
    sc.add_argument("--k", type=int, default=2)
    sc.add_argument("--r", type=float, default=10.0)
    sc.add_argument("--theta", type=float, required=True)
    sc.add_argument("--delta", type=float, required=True)
    sc.add_argument("--d0", type=int)
    sc.add_argument("--rho", type=float)
    sc.add_argument("--forms", type=_labels, default=forms_default)
    sc.add_argument("--i1", type=_interval, default=Interval(0.0, pi))
    sc.add_argument("--i2", type=_interval, default=Interval(0.0, pi))
    sc.add_argument("--degrees", type=_pair_ints, default=(1, 1))
    sc.set_defaults(func=cmd_sieve_scan, schema="sieve_scan")

    b = sub.add_parser("bv", help="Bombieri-Vinogradov audits")
    bs = b.add_subparsers(dest="bv_command", required=True)
    bvm = bs.add_parser("vm", help="von Mangoldt audit")
    bvm.add_argument("--x", type=float, required=True)
    bvm.add_argument("--theta", type=float, required=True)
    bvm.add_argument("--pair", type=_pair_ints, default=(1, 1))
    bvm.add_argument("--forms", type=_labels, default=forms_default)
    bvm.add_argument("--csv", type=Path)
    bvm.set_defaults(func=cmd_bv_vm, schema="bv")
    bvt = bs.add_parser("trig", help="minorant-weighted audit")
    bvt.add_argument("--x", type=float, required=True)
    bvt.add_argument("--theta", type=float, required=True)
    bvt.add_argument("--i1", type=_interval, required=True)
    bvt.add_argument("--i2", type=_interval, required=True)
    bvt.add_argument("--degrees", type=_pair_ints)
    bvt.add_argument("--forms", type=_labels, default=forms_default)
    bvt.add_argument("--csv", type=Path)
    bvt.set_defaults(func=cmd_bv_trig, schema="bv")

    c = sub.add_parser("cache", help="manage the on-disk cache")
    c.add_argument("action", choices=("list", "clear", "path"))
    c.set_defaults(func=cmd_cache, schema="cache")
    return p


def dispatch(argv=None, stdout=None):
    """Run one command; returns the process exit code."""
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = load_config(
            args.config,
            cache_dir=args.cache_dir,
            precision_bits=args.precision_bits,
            pmax=args.pmax,
            grid=args.grid,
        )
        result = args.func(args, cfg)
    except StgapsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    json.dump(result, stdout, sort_keys=True, indent=1)
    stdout.write("\n")
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
