"""Equidistribution of zero ordinates modulo one.

Weyl sums S_l = sum e(l s(gamma)), the exact star discrepancy of the
fractional parts, the Erdos-Turan bound, and the explicit formula for
sum_{0 < gamma <= T} x^(i gamma) with its prime-power main term.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._summation import chunked_sum, chunked_sum_complex
from .band_stats import BandSpec, in_band, normalized_values
from .zero_finder import ZeroTable

ET_CONSTANT = 3.0
PRIME_POWER_TOL = 1e-9
SPLIT_ABOVE = 1e6
_SPLIT = 2.0**20  # gamma = hi + lo with hi a multiple of 2^-20


@dataclass(frozen=True)
class SequenceScale:
    kind: str = "unit"
    T: float | None = None

    def __post_init__(self):
        if self.kind not in ("unit", "log_T_over_2pi"):
            raise ValueError("kind must be 'unit' or 'log_T_over_2pi'")
        if self.kind == "log_T_over_2pi" and (self.T is None or self.T < 100):
            raise ValueError("log_T_over_2pi scale needs T >= 100")

    @property
    def factor(self) -> float:
        return 1.0 if self.kind == "unit" else math.log(self.T) / (2 * math.pi)

    def to_dict(self):
        return {"kind": self.kind, "T": self.T}


UNIT = SequenceScale()


def fractional_parts(gammas, multiplier: float = 1.0) -> np.ndarray:
    """{multiplier * gamma} in [0, 1).

    Above 1e6 gamma is split into a coarse part (exact in binary) and a small
    remainder so the product keeps its low-order digits.
    """
    g = np.asarray(gammas, dtype=float)
    if g.size and g.max() > SPLIT_ABOVE:
        hi = np.floor(g * _SPLIT) / _SPLIT
        lo = g - hi
        a = hi * multiplier
        b = lo * multiplier
        fa = a - np.floor(a)
        x = fa + b
    else:
        x = g * multiplier
    f = x - np.floor(x)
    f[f >= 1.0] = 0.0
    return f


def _phases(table_gammas, ell: int, scale: SequenceScale) -> np.ndarray:
    return fractional_parts(table_gammas, ell * scale.factor)


def weyl_sum(table: ZeroTable | np.ndarray, ell: int, scale: SequenceScale = UNIT) -> complex:
    """sum e(ell * s(gamma)); ell = 0 gives the count."""
    g = table.gammas if isinstance(table, ZeroTable) else np.asarray(table, dtype=float)
    if g.size == 0:
        return 0j
    if ell == 0:
        return complex(g.size, 0.0)
    ph = 2 * math.pi * _phases(g, ell, scale)
    return complex(chunked_sum(np.cos(ph)), chunked_sum(np.sin(ph)))


def star_discrepancy(points) -> float:
    """Exact D*_N = sup_x |#{p < x}/N - x| via the sorted-point formula."""
    x = np.sort(np.asarray(points, dtype=float))
    if x.size == 0:
        return 0.0
    if x[0] < 0 or x[-1] >= 1:
        raise ValueError("points must lie in [0, 1)")
    n = x.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - x), np.max(x - (i - 1) / n)))


def erdos_turan_bound(table: ZeroTable | np.ndarray, L: int, scale: SequenceScale = UNIT,
                      weyl=None) -> float:
    """(N/(L+1) + 3 sum_{l<=L} |S_l|/l) / N."""
    if L < 1:
        raise ValueError("L must be >= 1")
    g = table.gammas if isinstance(table, ZeroTable) else np.asarray(table, dtype=float)
    n = g.size
    if n == 0:
        return 1.0 / (L + 1)
    if weyl is None:
        weyl = [abs(weyl_sum(g, ell, scale)) for ell in range(1, L + 1)]
    tail = math.fsum(m / ell for ell, m in enumerate(weyl, 1))
    return (n / (L + 1) + ET_CONSTANT * tail) / n


@dataclass(frozen=True)
class EquidistReport:
    scale: dict
    L: int
    n_points: int
    weyl: list
    d_star: float
    et_bound: float
    band: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def equidist_report(table: ZeroTable, L: int, scale: SequenceScale = UNIT,
                    band: BandSpec | None = None) -> EquidistReport:
    g = table.gammas
    if band is not None:
        g = g[_band_mask(table, band)]
    weyl = [abs(weyl_sum(g, ell, scale)) for ell in range(1, L + 1)]
    n = g.size
    return EquidistReport(
        scale=scale.to_dict(),
        L=L,
        n_points=n,
        weyl=[{"ell": ell, "mod": (m / n if n else 0.0)} for ell, m in enumerate(weyl, 1)],
        d_star=star_discrepancy(fractional_parts(g, scale.factor)) if n else 0.0,
        et_bound=erdos_turan_bound(g, L, scale, weyl=weyl),
        band=None if band is None else {"a": band.a, "b": band.b,
                                        "normalization": band.normalization},
    )


def _band_mask(table: ZeroTable, band: BandSpec) -> np.ndarray:
    v, usable = normalized_values(table, band.normalization, band.cutoff)
    mask = np.zeros(len(table), dtype=bool)
    mask[usable] = in_band(v[usable], band.a, band.b)
    return mask


def restricted_weyl(table: ZeroTable, band: BandSpec, ell: int, scale: SequenceScale = UNIT):
    """Weyl sum over the ordinates whose band statistic lies in [a, b]; returns (sum, n_band)."""
    g = table.gammas[_band_mask(table, band)]
    if g.size == 0:
        return 0j, 0
    return weyl_sum(g, ell, scale), int(g.size)


# ------------------------------------------------------- explicit formula

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power_base(n: int) -> int | None:
    """p if n = p^k with k >= 1, else None."""
    if n < 2:
        return None
    for k in range(int(math.log2(n)), 0, -1):
        p = round(n ** (1.0 / k))
        for q in (p - 1, p, p + 1):
            if q >= 2 and q**k == n and _is_prime(q):
                return q
    return None


def von_mangoldt(x: float, tol: float = PRIME_POWER_TOL) -> float:
    """log p when x is within tol of a prime power p^k, else 0 (extended to reals)."""
    n = round(x)
    if abs(x - n) >= tol:
        return 0.0
    p = prime_power_base(int(n))
    return math.log(p) if p else 0.0


def nearest_prime_power_distance(x: float) -> float:
    """<x>: distance from x to the nearest prime power other than x itself.

    Prime powers are enumerated in [x/2, 2x] (widened if that range is empty).
    """
    lo = max(2, math.floor(x / 2))
    hi = max(math.ceil(2 * x), 3)
    while True:
        best = math.inf
        for n in range(lo, hi + 1):
            if abs(n - x) < PRIME_POWER_TOL:
                continue
            if prime_power_base(n):
                best = min(best, abs(n - x))
        if math.isfinite(best):
            return best
        hi *= 2


@dataclass(frozen=True)
class ExplicitPrediction:
    x: float
    T: float
    main: float
    e1: float
    e2: float
    e3: float
    lambda_x: float
    near_dist: float

    @property
    def envelope(self) -> float:
        return self.e1 + self.e2 + self.e3

    def to_dict(self) -> dict:
        return asdict(self)


def explicit_prediction(x: float, T: float) -> ExplicitPrediction:
    """Main term and error envelopes (implicit constants set to 1).

    For 0 < x < 1 the right-hand side is evaluated at 1/x.
    """
    if not x > 0 or x == 1:
        raise ValueError("x must be positive and != 1 (x = 1 gives N(T); use power_sum)")
    y = 1.0 / x if x < 1 else x
    lam = von_mangoldt(y)
    near = nearest_prime_power_distance(y)
    sy = math.sqrt(y)
    ly = math.log(y)
    main = -(T / (2 * math.pi)) * lam / sy + 0.0  # no -0.0
    e1 = sy * math.log(2 * y * T) * math.log(math.log(3 * y))
    e2 = ly * min(T / sy, sy / near)
    e3 = math.log(2 * T) * min(T / sy, 1.0 / (sy * ly))
    return ExplicitPrediction(x, T, main, e1, e2, e3, lam, near)


def power_sum(table: ZeroTable | np.ndarray, x: float) -> complex:
    """sum_{gamma} x^(i gamma); exactly the count at x = 1."""
    g = table.gammas if isinstance(table, ZeroTable) else np.asarray(table, dtype=float)
    if not x > 0:
        raise ValueError("x must be positive")
    if x == 1:
        return complex(g.size, 0.0)
    # x^(i gamma) = e(gamma * log x / 2pi)
    ph = 2 * math.pi * fractional_parts(g, math.log(x) / (2 * math.pi))
    return chunked_sum_complex(np.exp(1j * ph))


def landau_gonek(table: ZeroTable, x: float, T: float | None = None):
    """(observed sum, ExplicitPrediction) at x for the zeros of `table`."""
    pred = explicit_prediction(x, table.t_max if T is None else T)
    return power_sum(table, x), pred


@dataclass(frozen=True)
class ConjectureRow:
    x: float
    observed: complex
    observed_mod: float
    bound: float
    flag: bool
    prediction: ExplicitPrediction | None = field(default=None)


def conjecture_bound(x: float, T: float, epsilon: float) -> float:
    return T * x ** (-0.5 + epsilon) + math.sqrt(T) * x**epsilon


def conjecture_scan(table: ZeroTable, x_grid, epsilon: float, T: float | None = None):
    """|sum x^(i gamma)| against T x^(-1/2+eps) + T^(1/2) x^eps; exceedances are flagged."""
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    T = table.t_max if T is None else T
    rows = []
    for x in x_grid:
        x = float(x)
        if x < 2:
            raise ValueError("conjecture scan needs x >= 2")
        obs = power_sum(table, x)
        bound = conjecture_bound(x, T, epsilon)
        rows.append(ConjectureRow(x, obs, abs(obs), bound, abs(obs) > bound,
                                  explicit_prediction(x, T)))
    return rows
