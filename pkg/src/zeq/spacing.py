"""Normalized gaps between consecutive ordinates and small-gap frequencies."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .zero_finder import ZeroTable


@dataclass(frozen=True)
class GapRecord:
    gamma: float
    gap_raw: float
    gap_normalized: float


def gap_density(gamma) -> np.ndarray:
    """Local zero density log(gamma/2pi)/2pi used to unfold the gaps."""
    return np.log(np.asarray(gamma, dtype=float) / (2 * math.pi)) / (2 * math.pi)


def gap_arrays(table: ZeroTable | np.ndarray):
    """(gamma, raw gaps, normalized gaps) as arrays of length N-1."""
    g = table.gammas if isinstance(table, ZeroTable) else np.asarray(table, dtype=float)
    if g.size < 2:
        raise ValueError("need at least two ordinates")
    raw = np.diff(g)
    if np.any(raw <= 0):
        raise ValueError("ordinates must be strictly increasing")
    return g[:-1], raw, raw * gap_density(g[:-1])


def normalized_gaps(table: ZeroTable | np.ndarray):
    """GapRecords for consecutive pairs, plus the mean normalized gap."""
    g, raw, norm = gap_arrays(table)
    recs = [GapRecord(float(a), float(b), float(c)) for a, b, c in zip(g, raw, norm)]
    return recs, float(np.mean(norm))


@dataclass(frozen=True)
class SmallGapReport:
    lam: float
    fraction: float
    fraction_over_lambda: float
    fraction_over_lambda_delta: float
    delta: float

    def to_dict(self):
        return asdict(self)


def small_gap_fraction(table: ZeroTable, lam: float, delta: float = 1.0) -> SmallGapReport:
    """(1/N) #{gamma : gamma^+ - gamma <= lam / log T} with T = table.t_max."""
    if not 0 < lam < 1:
        raise ValueError("lambda must lie in (0, 1)")
    if not delta > 0:
        raise ValueError("delta must be positive")
    _, raw, _ = gap_arrays(table)
    n = len(table)
    frac = np.count_nonzero(raw <= lam / math.log(table.t_max)) / n
    return SmallGapReport(lam, frac, frac / lam, frac / lam**delta, delta)


def fitted_exponent(lams, fractions) -> float:
    """Least-squares slope of log fraction against log lambda (zero fractions dropped)."""
    lams = np.asarray(lams, dtype=float)
    fr = np.asarray(fractions, dtype=float)
    keep = fr > 0
    if keep.sum() < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(lams[keep]), np.log(fr[keep]), 1)
    return float(slope)


def write_gap_csv(fh, reports) -> None:
    fh.write("lambda,fraction,fraction_over_lambda\n")
    for r in reports:
        fh.write(f"{r.lam!r},{r.fraction!r},{r.fraction_over_lambda!r}\n")
