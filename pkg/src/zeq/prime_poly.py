"""The prime Dirichlet polynomial P(gamma) = sum_{p <= X^2} p^(-1/2 - i gamma).

Re P(gamma)/sqrt(log log T / 2) is the model for the band statistic; this
module evaluates P at zeros, compares the two, and reports moments against
the Gaussian with variance sigma^2 = (1/2) sum_{p <= X^2} 1/p.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import logsumexp

from ._summation import neumaier_sum
from .band_stats import in_band, normalized_values
from .zero_finder import ZeroTable

SIEVE_CAP = 10**9
_SEGMENT = 1 << 18


class CapacityError(ValueError):
    pass


def _small_primes(n: int) -> np.ndarray:
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p)


def primes_up_to(limit: int) -> np.ndarray:
    """Segmented sieve of Eratosthenes."""
    limit = int(limit)
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    if limit > SIEVE_CAP:
        raise CapacityError(f"sieve limit {limit} exceeds cap {SIEVE_CAP}")
    root = int(math.isqrt(limit))
    base = _small_primes(root)
    out = [base.astype(np.int64)]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + _SEGMENT, limit + 1)
        seg = np.ones(hi - lo, dtype=bool)
        for p in base:
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start >= hi:
                continue
            seg[start - lo :: p] = False
        out.append(np.flatnonzero(seg).astype(np.int64) + lo)
        lo = hi
    return np.concatenate(out)


@dataclass(frozen=True, eq=False)
class PrimeBasis:
    """Primes p <= limit with p^(-1/2) and log p precomputed."""

    limit: int
    primes: np.ndarray = field(repr=False)
    inv_sqrt: np.ndarray = field(repr=False)
    log_p: np.ndarray = field(repr=False)

    @classmethod
    def up_to(cls, limit: int) -> "PrimeBasis":
        p = primes_up_to(limit) if limit >= 2 else np.zeros(0, dtype=np.int64)
        pf = p.astype(float)
        arrays = [p, 1.0 / np.sqrt(pf), np.log(pf)]
        for a in arrays:
            a.setflags(write=False)
        return cls(int(limit), *arrays)

    @property
    def x_limit(self) -> float:
        """X with X^2 = limit."""
        return math.sqrt(self.limit)

    def __len__(self):
        return self.primes.size

    @property
    def sigma2(self) -> float:
        """Model variance of Re P: (1/2) sum 1/p."""
        return 0.5 * float(neumaier_sum(1.0 / self.primes.astype(float))) if len(self) else 0.0


def sieve(limit: int) -> PrimeBasis:
    if limit < 2:
        raise ValueError("limit must be >= 2")
    return PrimeBasis.up_to(limit)


def eval_P(gamma, basis: PrimeBasis, chunk: int = 2048):
    """P(gamma) for a scalar or an array of gamma, with compensated summation over primes."""
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    out = np.empty(g.shape, dtype=complex)
    if len(basis) == 0:
        out[:] = 0.0
    for i in range(0, g.size, chunk):
        gi = g[i : i + chunk]
        ph = np.outer(gi, basis.log_p)
        re = neumaier_sum(np.cos(ph) * basis.inv_sqrt, axis=1)
        im = neumaier_sum(-np.sin(ph) * basis.inv_sqrt, axis=1)
        out[i : i + chunk] = re + 1j * im
    return complex(out[0]) if np.ndim(gamma) == 0 else out


@dataclass(frozen=True)
class AsymptoticParams:
    T: float
    X: float
    X_formula: float
    Omega: float
    K: int
    clamped: bool

    def __post_init__(self):
        if self.K % 2 or self.K < 0:
            raise ValueError("K must be even")
        if not self.Omega > 0:
            raise ValueError("Omega must be > 0")


def asymptotic_parameters(T: float) -> AsymptoticParams:
    """X = T^(1/(loglog T)^20), Omega = (loglog T)^2, K = 2 floor((loglog T)^6).

    X is clamped to 3 (so that P has at least one prime); the raw formula
    value is kept alongside.
    """
    if T < 100:
        raise ValueError("T must be >= 100")
    ll = math.log(math.log(T))
    x_formula = T ** (1.0 / ll**20)
    return AsymptoticParams(
        T=float(T),
        X=max(x_formula, 3.0),
        X_formula=x_formula,
        Omega=ll**2,
        K=2 * math.floor(ll**6),
        clamped=x_formula < 3.0,
    )


@dataclass(frozen=True)
class ProxyReport:
    n: int
    mean: float
    variance: float
    quantiles: dict
    agreement: float
    band: tuple
    degenerate: bool
    re_p_mean: float
    re_p_variance: float
    sigma2: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["quantiles"] = {str(k): v for k, v in self.quantiles.items()}
        return d


def proxy_values(table: ZeroTable, basis: PrimeBasis, T: float | None = None):
    """Per-ordinate (Re P, Im P, v_per_T, d) over usable ordinates."""
    T = table.t_max if T is None else T
    v, usable = normalized_values(table, "per_T", T=T)
    P = eval_P(table.gammas[usable], basis) if usable.any() else np.zeros(0, dtype=complex)
    scale = math.sqrt(0.5 * math.log(math.log(T)))
    proxy = P.real / scale
    return table.gammas[usable], P, v[usable], v[usable] - proxy, proxy


def proxy_report(table: ZeroTable, basis: PrimeBasis, T: float | None = None,
                 band: tuple = (-math.inf, math.inf)) -> ProxyReport:
    """How closely Re P(gamma)/sqrt(loglog T/2) tracks the per-T statistic."""
    g, P, v, d, proxy = proxy_values(table, basis, T)
    a, b = band
    agree = float(np.mean(in_band(v, a, b) == in_band(proxy, a, b))) if v.size else 1.0
    qs = (0.05, 0.25, 0.5, 0.75, 0.95)
    quant = dict(zip(qs, np.quantile(d, qs).tolist())) if d.size else {q: math.nan for q in qs}
    return ProxyReport(
        n=int(v.size),
        mean=float(np.mean(d)) if d.size else math.nan,
        variance=float(np.var(d)) if d.size else math.nan,
        quantiles=quant,
        agreement=agree,
        band=(a, b),
        degenerate=len(basis) == 0,
        re_p_mean=float(np.mean(P.real)) if P.size else math.nan,
        re_p_variance=float(np.var(P.real)) if P.size else math.nan,
        sigma2=basis.sigma2,
    )


@dataclass(frozen=True)
class MomentReport:
    k: int
    empirical: float
    gaussian: float
    ratio: float
    moment_bound_c1: float

    def to_dict(self) -> dict:
        return asdict(self)


def _double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def moment_report(table: ZeroTable, basis: PrimeBasis, k: int, T: float | None = None) -> MomentReport:
    """(1/N) sum |Re P(gamma)|^k against (k-1)!! sigma^k.

    ``moment_bound_c1`` is (K Psi)^(K/2) with K = k, Psi = log log T and the
    unknown constant set to 1; reported for reference only.
    """
    if k % 2 or not 2 <= k <= 20:
        raise ValueError("k must be even with 2 <= k <= 20")
    if len(table) == 0:
        raise ValueError("empty table")
    x = np.abs(eval_P(table.gammas, basis).real)
    n = x.size
    if k > 12:
        with np.errstate(divide="ignore"):
            emp = math.exp(float(logsumexp(k * np.log(x))) - math.log(n))
    else:
        emp = float(neumaier_sum(x**k)) / n
    sigma = math.sqrt(basis.sigma2)
    gauss = _double_factorial(k - 1) * sigma**k
    T = table.t_max if T is None else T
    psi = math.log(math.log(T)) if T > math.e else math.nan
    return MomentReport(k, emp, gauss, emp / gauss if gauss else math.nan, (k * psi) ** (k / 2))


def write_proxy_csv(fh, table: ZeroTable, basis: PrimeBasis, T: float | None = None) -> int:
    g, P, v, d, _ = proxy_values(table, basis, T)
    fh.write("gamma,re_P,im_P,v_per_T,d\n")
    for row in zip(g, P.real, P.imag, v, d):
        fh.write(",".join(repr(float(x)) for x in row) + "\n")
    return len(g)
