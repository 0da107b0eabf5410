"""The normalized log-derivative statistic at zeros and its Gaussian band counts.

For a simple zero, |zeta'(1/2 + i gamma)| = |Z'(gamma)|, so the statistic is

    v(gamma) = log(|Z'(gamma)| / log H) / sqrt(log log H / 2)

with H = gamma (``per_gamma``) or H = T (``per_T``).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import ndtr

from .zero_finder import SUSPECT_FACTOR, Ordinate, ZeroTable

NORMALIZATIONS = ("per_gamma", "per_T")
DEFAULT_CUTOFF = 10.0


@dataclass(frozen=True)
class BandSpec:
    a: float = -math.inf
    b: float = math.inf
    normalization: str = "per_gamma"
    cutoff: float = DEFAULT_CUTOFF

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"band needs a < b, got [{self.a}, {self.b}]")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
        if not self.cutoff >= 10.0:
            raise ValueError("cutoff must be >= 10 so that log log gamma > 0")

    def check_regime(self, T: float) -> bool:
        """Warn when a finite edge exceeds 10*sqrt(log log log T)."""
        lll = math.log(math.log(math.log(T))) if T > math.e**math.e else 0.0
        limit = 10.0 * math.sqrt(max(lll, 0.0))
        edges = [abs(x) for x in (self.a, self.b) if math.isfinite(x)]
        if edges and max(edges) > limit:
            warnings.warn(
                f"band edge {max(edges):g} beyond 10*sqrt(logloglog T) = {limit:.3g}",
                stacklevel=3,
            )
            return False
        return True


@dataclass(frozen=True)
class BandReport:
    t_max: float
    a: float
    b: float
    normalization: str
    count: int
    prediction: float
    ks: float
    excluded: int

    def to_dict(self) -> dict:
        return asdict(self)


def normalized_value(o: Ordinate, normalization: str = "per_gamma", T: float | None = None) -> float:
    if o.gamma < DEFAULT_CUTOFF:
        raise ValueError(f"domain error: gamma = {o.gamma} < {DEFAULT_CUTOFF}")
    if o.suspect:
        raise ValueError(f"ordinate {o.index} flagged as possibly multiple; excluded")
    if normalization == "per_gamma":
        H = o.gamma
    elif normalization == "per_T":
        if T is None or T < DEFAULT_CUTOFF:
            raise ValueError("per_T normalization needs T >= 10")
        H = T
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    L = math.log(H)
    return math.log(o.z_prime_abs / L) / math.sqrt(0.5 * math.log(L))


def normalized_values(table: ZeroTable, normalization: str = "per_gamma",
                      cutoff: float = DEFAULT_CUTOFF, T: float | None = None):
    """Vectorized statistic over a table.

    Returns (values, usable_mask); values are NaN where the ordinate is below
    the cutoff or flagged suspect.
    """
    g = table.gammas
    zp = table.z_prime_abs
    usable = (g >= cutoff) & ~(zp < SUSPECT_FACTOR * np.log(np.maximum(g, 1.0)))
    if normalization == "per_gamma":
        L = np.log(np.maximum(g, cutoff))
    elif normalization == "per_T":
        T = table.t_max if T is None else T
        if T < cutoff:
            raise ValueError("per_T normalization needs T >= cutoff")
        L = np.full(g.shape, math.log(T))
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    v = np.full(g.shape, np.nan)
    with np.errstate(divide="ignore"):
        v[usable] = np.log(zp[usable] / L[usable]) / np.sqrt(0.5 * np.log(L[usable]))
    return v, usable


def gaussian_mass(a: float, b: float) -> float:
    """Standard normal probability of [a, b]."""
    if not a < b:
        raise ValueError("need a < b")
    # pick the tail that avoids cancellation
    if a >= 0:
        return float(ndtr(-a) - ndtr(-b))
    if b <= 0:
        return float(ndtr(b) - ndtr(a))
    return float(1.0 - ndtr(a) - ndtr(-b))


def ks_distance(values) -> float:
    """sup |F_n - Phi| for the empirical distribution of `values`."""
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    if n == 0:
        return 0.0
    cdf = ndtr(x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))


def in_band(values, a: float, b: float, left_closed: bool = True) -> np.ndarray:
    v = np.asarray(values)
    lower = v >= a if left_closed else v > a
    return lower & (v <= b)


def count_in_band(table: ZeroTable, band: BandSpec) -> BandReport:
    """N_[a,b](T) versus N(T) times the Gaussian mass of [a, b]."""
    if len(table) == 0:
        return BandReport(table.t_max, band.a, band.b, band.normalization, 0, 0.0, 0.0, 0)
    if band.normalization == "per_T":
        band.check_regime(table.t_max)
    v, usable = normalized_values(table, band.normalization, band.cutoff)
    vu = v[usable]
    count = int(np.count_nonzero(in_band(vu, band.a, band.b)))
    return BandReport(
        t_max=table.t_max,
        a=band.a,
        b=band.b,
        normalization=band.normalization,
        count=count,
        prediction=len(vu) * gaussian_mass(band.a, band.b),
        ks=ks_distance(vu),
        excluded=int(len(table) - len(vu)),
    )


def simple_zero_count(table: ZeroTable, band: BandSpec) -> int:
    """Same count restricted to ordinates whose simplicity is not in doubt.

    Usable ordinates already exclude suspect ones, so on a table with no
    flagged zeros this agrees with count_in_band.
    """
    v, usable = normalized_values(table, band.normalization, band.cutoff)
    simple = usable & (table.multiplicities == 1)
    return int(np.count_nonzero(in_band(v[simple], band.a, band.b)))


def histogram(table: ZeroTable, normalization: str = "per_gamma", bins: int = 40,
              cutoff: float = DEFAULT_CUTOFF):
    """Counts of v over `bins` equal cells, with the matching Gaussian expectation."""
    v, usable = normalized_values(table, normalization, cutoff)
    vu = v[usable]
    if vu.size == 0:
        return np.zeros(bins + 1), np.zeros(bins, dtype=int), np.zeros(bins)
    counts, edges = np.histogram(vu, bins=bins)
    expected = vu.size * (ndtr(edges[1:]) - ndtr(edges[:-1]))
    return edges, counts, expected
