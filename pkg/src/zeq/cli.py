"""Command-line entry point: ``zeq <command> [flags]``.

``zeros`` builds the ordinate cache; every other command reads it and writes a
JSON report or a CSV grid to stdout (or ``--out``).  Output depends only on the
flags and the cache contents.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import band_stats, equidist, prime_poly, sign_approx, spacing
from .zero_finder import (
    CompletenessError,
    ZeroFileError,
    find_zeros,
    first_n_zeros,
    import_zeros,
    read_cache,
    write_cache,
)

DEFAULT_CACHE = Path.home() / ".cache" / "zeq" / "zeros.csv"


class UsageError(Exception):
    pass


def cache_path(arg: str | None) -> Path:
    if arg:
        return Path(arg)
    env = os.environ.get("ZEQ_CACHE")
    return Path(env) if env else DEFAULT_CACHE


def _config(args) -> dict:
    skip = {"func", "out"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cfg["cache"] = str(cache_path(args.cache))
    return cfg


def _clean(obj):
    """Make floats JSON-safe: non-finite values become strings, complex becomes [re, im]."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else repr(f)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _emit_json(args, t_max, payload: dict) -> None:
    doc = {"version": __version__, "command": args.command, "t_max": t_max,
           "config": _config(args), "report": payload}
    text = json.dumps(_clean(doc), indent=2, sort_keys=True) + "\n"
    _write(args, text)


def _write(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt(x) -> str:
    return repr(float(x)) if not isinstance(x, (int, np.integer)) else str(int(x))


def _csv(header, rows) -> str:
    out = [",".join(header)]
    out += [",".join(_fmt(v) for v in r) for r in rows]
    return "\n".join(out) + "\n"


def _load(args):
    path = cache_path(args.cache)
    if not path.exists():
        raise OSError(f"no zero cache at {path}; run `zeq zeros` first")
    return read_cache(path)


def _parse_grid(text: str):
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"grid must be lo:hi:n, got {text!r}") from None
    if n < 1 or not lo <= hi:
        raise UsageError(f"bad grid {text!r}")
    return np.linspace(lo, hi, n)


def _parse_floats(text: str):
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


# ------------------------------------------------------------------ commands

def cmd_zeros(args) -> int:
    if (args.tmax is None) == (args.count is None):
        raise UsageError("give exactly one of --tmax or --count")
    if args.tmax is not None and not args.tmax > 0:
        raise UsageError("--tmax must be positive")
    if args.count is not None and args.count < 1:
        raise UsageError("--count must be >= 1")
    path = cache_path(args.cache)
    t0 = time.perf_counter()
    table, origin = None, "computed"
    if path.exists() and not args.import_path:
        cached = read_cache(path)
        if cached.complete and cached.first_index == 1:
            if args.tmax is not None and cached.t_max >= args.tmax:
                table, origin = cached.up_to(args.tmax), "cache"
            elif args.count is not None and len(cached) >= args.count:
                table, origin = cached.head(args.count), "cache"
    if table is None:
        if args.import_path:
            table, origin = import_zeros(args.import_path, args.tmax), "imported"
            if args.count is not None:
                table = table.head(args.count)
        elif args.tmax is not None:
            table = find_zeros(0.0, args.tmax, workers=args.workers)
        else:
            table = first_n_zeros(args.count, workers=args.workers)
        path.parent.mkdir(parents=True, exist_ok=True)
        write_cache(table, path)
    dt = time.perf_counter() - t0
    print(f"zeros: {len(table)}  t_max: {table.t_max!r}  complete: {table.complete}  "
          f"source: {origin}  cache: {path}")
    print(f"time: {dt:.2f}s", file=sys.stderr)
    if not table.complete:
        print(f"completeness check failed: {len(table.failures)} Gram block(s) short",
              file=sys.stderr)
        return 2
    return 0


def cmd_clt(args) -> int:
    if args.band == "full":
        a, b = -math.inf, math.inf
    elif args.band is not None:
        raise UsageError("--band accepts only 'full'")
    else:
        a, b = args.a, args.b
    norm = {"gamma": "per_gamma", "T": "per_T"}[args.normalization]
    try:
        band = band_stats.BandSpec(a, b, norm)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    table = _load(args)
    report = band_stats.count_in_band(table, band)
    if args.hist:
        edges, counts, expected = band_stats.histogram(table, norm, args.hist)
        rows = zip(edges[:-1], edges[1:], counts, expected)
        text = _csv(["lo", "hi", "count", "expected"], rows)
        if args.hist_out:
            Path(args.hist_out).write_text(text)
        else:
            _write(args, text)
            return 0
    _emit_json(args, table.t_max, report.to_dict())
    return 0


def cmd_equidist(args) -> int:
    if args.ellmax < 1:
        raise UsageError("--ellmax must be >= 1")
    table = _load(args)
    if args.scale == "unit":
        scale = equidist.UNIT
    else:
        scale = equidist.SequenceScale("log_T_over_2pi", table.t_max)
    band = None
    if args.a is not None or args.b is not None:
        a = -math.inf if args.a is None else args.a
        b = math.inf if args.b is None else args.b
        try:
            band = band_stats.BandSpec(a, b, "per_gamma")
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    report = equidist.equidist_report(table, args.ellmax, scale, band)
    _emit_json(args, table.t_max, report.to_dict())
    return 0


def cmd_explicit(args) -> int:
    if (args.x is None) == (args.xgrid is None):
        raise UsageError("give exactly one of --x or --xgrid")
    xs = _parse_floats(args.x) if args.x is not None else list(_parse_grid(args.xgrid))
    if any(x == 1 for x in xs):
        raise UsageError("x = 1 is excluded: the sum there is just N(T)")
    if any(not x > 0 for x in xs):
        raise UsageError("x must be positive")
    if not 0 < args.epsilon < 0.5:
        raise UsageError("--epsilon must lie in (0, 1/2)")
    table = _load(args)
    T = table.t_max
    rows = []
    for x in xs:
        obs, pred = equidist.landau_gonek(table, float(x), T)
        bound = equidist.conjecture_bound(max(x, 1 / x), T, args.epsilon)
        rows.append((x, obs.real, obs.imag, pred.main, pred.e1, pred.e2, pred.e3, bound,
                     int(abs(obs) > bound)))
    _write(args, _csv(["x", "re_observed", "im_observed", "main", "e1", "e2", "e3", "bound",
                       "flag"], rows))
    return 0


def cmd_spacing(args) -> int:
    lams = _parse_floats(args.lambdas)
    if not lams or any(not 0 < l < 1 for l in lams):
        raise UsageError("lambdas must lie in (0, 1)")
    table = _load(args)
    reps = [spacing.small_gap_fraction(table, l, args.delta) for l in sorted(lams)]
    rows = [(r.lam, r.fraction, r.fraction_over_lambda) for r in reps]
    _write(args, _csv(["lambda", "fraction", "fraction_over_lambda"], rows))
    return 0


def cmd_approx(args) -> int:
    try:
        cfg = sign_approx.MollifierConfig(args.omega)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    xs = _parse_grid(args.grid)
    rows = sign_approx.sgn_error_rows(cfg, xs, c_env=args.c_env)
    _write(args, _csv(["x", "F", "abs_error", "envelope", "flag"], rows))
    return 0


def cmd_proxy(args) -> int:
    if args.x2 < 2:
        raise UsageError("--x2 must be >= 2")
    table = _load(args)
    basis = prime_poly.sieve(args.x2)
    rep = prime_poly.proxy_report(table, basis)
    moments = [prime_poly.moment_report(table, basis, k).to_dict() for k in (2, 4)]
    _emit_json(args, table.t_max, {"proxy": rep.to_dict(), "moments": moments})
    return 0


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", help="zero cache path (default: $ZEQ_CACHE or ~/.cache/zeq)")
    common.add_argument("--out", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="zeq", description="Statistics of zeta zeros on the critical line.")
    p.add_argument("--version", action="version", version=f"zeq {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("zeros", parents=[common], help="compute or import zeros into the cache")
    s.add_argument("--tmax", type=float)
    s.add_argument("--count", type=int)
    s.add_argument("--import", dest="import_path")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_zeros)

    s = sub.add_parser("clt", parents=[common], help="band counts of the log-derivative statistic")
    s.add_argument("--a", type=float, default=-math.inf)
    s.add_argument("--b", type=float, default=math.inf)
    s.add_argument("--band")
    s.add_argument("--normalization", choices=("gamma", "T"), default="gamma")
    s.add_argument("--hist", type=int, default=0, help="number of histogram bins")
    s.add_argument("--hist-out")
    s.set_defaults(func=cmd_clt)

    s = sub.add_parser("equidist", parents=[common], help="Weyl sums and discrepancy mod one")
    s.add_argument("--scale", choices=("unit", "logT"), default="unit")
    s.add_argument("--ellmax", type=int, default=50)
    s.add_argument("--a", type=float)
    s.add_argument("--b", type=float)
    s.set_defaults(func=cmd_equidist)

    s = sub.add_parser("explicit", parents=[common], help="sum of x^(i gamma) versus its main term")
    s.add_argument("--x")
    s.add_argument("--xgrid")
    s.add_argument("--epsilon", type=float, default=0.25)
    s.set_defaults(func=cmd_explicit)

    s = sub.add_parser("spacing", parents=[common], help="small normalized gap fractions")
    s.add_argument("--lambdas", default="0.1,0.2,0.4,0.8")
    s.add_argument("--delta", type=float, default=1.0)
    s.set_defaults(func=cmd_spacing)

    s = sub.add_parser("approx", parents=[common], help="error of F_Omega against sgn")
    s.add_argument("--omega", type=float, required=True)
    s.add_argument("--grid", default="-5:5:1001")
    s.add_argument("--c-env", type=float, default=sign_approx.C_CAL)
    s.set_defaults(func=cmd_approx)

    s = sub.add_parser("proxy", parents=[common], help="prime polynomial proxy and moments")
    s.add_argument("--x2", type=int, default=1000, help="prime cutoff X^2")
    s.set_defaults(func=cmd_proxy)
    return p


_VALUE_FLAGS = ("--grid", "--xgrid", "--x", "--lambdas")


def _glue_values(argv):
    """Attach values like '-5:5:100' to their flag; argparse would read them as options."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        return args.func(args)
    except UsageError as exc:
        parser.exit(2, f"zeq {args.command}: error: {exc}\n")
    except CompletenessError as exc:
        print(f"zeq: {exc}", file=sys.stderr)
        return 2
    except (OSError, ZeroFileError) as exc:
        print(f"zeq: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
