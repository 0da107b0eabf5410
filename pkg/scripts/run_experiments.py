#!/usr/bin/env python3
"""Run the desk-scale experiments and write plot-ready CSV/JSON into an output directory.

    python3 scripts/run_experiments.py --count 10000 --out results/
"""
import argparse
import json
import math
from pathlib import Path

import numpy as np

from zeq import __version__
from zeq.band_stats import BandSpec, count_in_band, histogram, ks_distance, normalized_values
from zeq.equidist import SequenceScale, UNIT, conjecture_scan, equidist_report, landau_gonek
from zeq.prime_poly import moment_report, proxy_report, sieve
from zeq.sign_approx import MollifierConfig, calibrate_envelope_constant, sgn_error_rows
from zeq.spacing import fitted_exponent, normalized_gaps, small_gap_fraction, write_gap_csv
from zeq.zero_finder import first_n_zeros, read_cache, write_cache


def load_or_compute(count, cache, workers):
    if cache.exists():
        tab = read_cache(cache)
        if tab.complete and len(tab) >= count:
            return tab.head(count)
    tab = first_n_zeros(count, workers=workers)
    write_cache(tab, cache)
    return tab


def band_experiment(tab, out):
    rows = {}
    for norm in ("per_gamma", "per_T"):
        v, ok = normalized_values(tab, norm)
        vu = v[ok]
        bands = [(-math.inf, 0.0), (0.0, math.inf), (-1.0, 1.0), (1.0, math.inf)]
        rows[norm] = {
            "mean": float(vu.mean()), "sd": float(vu.std()), "ks": ks_distance(vu),
            "bands": [count_in_band(tab, BandSpec(a, b, norm)).to_dict() for a, b in bands],
        }
        edges, counts, expected = histogram(tab, norm, 40)
        with open(out / f"hist_{norm}.csv", "w") as fh:
            fh.write("lo,hi,count,expected\n")
            for r in zip(edges[:-1], edges[1:], counts, expected):
                fh.write(",".join(repr(float(x)) for x in r) + "\n")
    return rows


def equidist_experiment(tab):
    out = []
    for n in (100, 300, 1000, 3000, len(tab)):
        sub = tab.head(n)
        for sc in (UNIT, SequenceScale("log_T_over_2pi", sub.t_max)):
            r = equidist_report(sub, 50, sc)
            out.append({"n": n, "scale": sc.kind, "d_star": r.d_star, "et_bound": r.et_bound,
                        "weyl_1": r.weyl[0]["mod"]})
    return out


def explicit_experiment(tab, out):
    rows = conjecture_scan(tab, np.linspace(2.0, 30.0, 561), 0.25)
    with open(out / "explicit_scan.csv", "w") as fh:
        fh.write("x,abs_observed,main,envelope,bound,flag\n")
        for r in rows:
            p = r.prediction
            fh.write(f"{r.x!r},{r.observed_mod!r},{p.main!r},{p.envelope!r},{r.bound!r},{int(r.flag)}\n")
    deviations = []
    for x in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16):
        obs, p = landau_gonek(tab, float(x))
        deviations.append({"x": x, "observed": [obs.real, obs.imag], "main": p.main,
                      "scaled_dev": abs(obs - p.main) / p.envelope})
    return deviations


def prime_experiment(tab):
    res = []
    for x2 in (100, 1000, 10_000):
        basis = sieve(x2)
        res.append({
            "x2": x2,
            "proxy": proxy_report(tab, basis).to_dict(),
            "moments": [moment_report(tab, basis, k).to_dict() for k in (2, 4, 6)],
        })
    return res


def spacing_experiment(tab, out):
    lams = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    reps = [small_gap_fraction(tab, lam) for lam in lams]
    with open(out / "small_gaps.csv", "w") as fh:
        write_gap_csv(fh, reps)
    _, mean = normalized_gaps(tab)
    return {"mean_normalized_gap": mean,
            "fitted_exponent": fitted_exponent(lams, [r.fraction for r in reps])}


def mollifier_experiment(out):
    for om in (1.0, 4.0):
        rows = sgn_error_rows(MollifierConfig(om), np.linspace(-4 / om, 4 / om, 801))
        with open(out / f"sgn_error_omega{om:g}.csv", "w") as fh:
            fh.write("x,F,abs_error,envelope,flag\n")
            for r in rows:
                fh.write(",".join(repr(v) for v in r) + "\n")
    return {"calibrated_constant": calibrate_envelope_constant()}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--count", type=int, default=10_000)
    ap.add_argument("--out", default="results")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tab = load_or_compute(args.count, out / "zeros.csv", args.workers)
    summary = {
        "version": __version__,
        "n_zeros": len(tab),
        "t_max": tab.t_max,
        "band": band_experiment(tab, out),
        "equidist": equidist_experiment(tab),
        "explicit": explicit_experiment(tab, out),
        "prime_poly": prime_experiment(tab),
        "spacing": spacing_experiment(tab, out),
        "mollifier": mollifier_experiment(out),
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True, default=str) + "\n")
    print(f"wrote {out}/summary.json for {len(tab)} zeros up to {tab.t_max:.4f}")


if __name__ == "__main__":
    main()
