"""Locating zeta zeros on the critical line, counting them, caching them.

Zeros are located as sign changes of Hardy's Z between Gram points. A Gram
point g_n (theta(g_n) = n pi) is *good* when (-1)^n Z(g_n) > 0. Between two
consecutive good Gram points g_j < g_k (a Gram block) there should be exactly
k - j zeros (Rosser's rule, valid far beyond the heights handled here); blocks
showing fewer sign changes are refined by bisection of their sub-intervals
until the count matches. A good Gram point g_n then has N(g_n) = n + 1.

This is an empirical completeness check, not a Turing-method certificate.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.special import lambertw

from .critical_line import hardy_z, hardy_z_prime, theta

log = logging.getLogger(__name__)

T_LIMIT = 1e7
ROOT_TOL = 1e-9
MAX_REFINE_ROUNDS = 12
SUSPECT_FACTOR = 1e-6
CACHE_MAGIC = "zeta-zeros v1"

TWO_PI = 2.0 * math.pi


class CompletenessError(RuntimeError):
    """A Gram block did not yield the number of zeros Rosser's rule predicts."""

    def __init__(self, failures):
        self.failures = list(failures)
        desc = ", ".join(
            f"[g_{f.n_start}, g_{f.n_end}] expected {f.expected} found {f.found}"
            for f in self.failures[:5]
        )
        super().__init__(f"zero count incomplete in Gram block(s): {desc}")


class ZeroFileError(ValueError):
    """Malformed zero list or cache file."""


@dataclass(frozen=True)
class GramFailure:
    n_start: int
    n_end: int
    t_start: float
    t_end: float
    expected: int
    found: int


@dataclass(frozen=True)
class Ordinate:
    index: int
    gamma: float
    z_prime_abs: float
    multiplicity: int = 1
    source: str = "computed"

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be > 0")
        if not self.z_prime_abs >= 0:
            raise ValueError("z_prime_abs must be >= 0")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")

    @property
    def suspect(self) -> bool:
        """|Z'| too small to trust simplicity; excluded from band statistics."""
        return self.z_prime_abs < SUSPECT_FACTOR * math.log(self.gamma)


@dataclass(frozen=True, eq=False)
class ZeroTable:
    """Immutable, strictly increasing ordinates on (t_min, t_max]."""

    gammas: np.ndarray
    z_prime_abs: np.ndarray
    t_max: float
    complete: bool
    source: str = "computed"
    first_index: int = 1
    t_min: float = 0.0
    failures: tuple = field(default=())

    def __post_init__(self):
        g = np.array(self.gammas, dtype=float).ravel()
        zp = np.array(self.z_prime_abs, dtype=float).ravel()
        if g.shape != zp.shape:
            raise ValueError("gammas and z_prime_abs must align")
        if g.size and np.any(np.diff(g) <= 0):
            raise ValueError("ordinates must be strictly increasing")
        if g.size and (g[0] <= self.t_min or g[-1] > self.t_max):
            raise ValueError("ordinates must lie in (t_min, t_max]")
        if np.any(zp < 0):
            raise ValueError("z_prime_abs must be >= 0")
        g.setflags(write=False)
        zp.setflags(write=False)
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "z_prime_abs", zp)

    def __len__(self):
        return self.gammas.size

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.first_index, self.first_index + len(self))

    @property
    def suspect(self) -> np.ndarray:
        return self.z_prime_abs < SUSPECT_FACTOR * np.log(self.gammas)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.ones(len(self), dtype=int)

    @property
    def ordinates(self) -> list:
        return [
            Ordinate(int(i), float(g), float(z), 1, self.source)
            for i, g, z in zip(self.indices, self.gammas, self.z_prime_abs)
        ]

    def head(self, n: int) -> "ZeroTable":
        """The first n ordinates, with t_max moved to the n-th one."""
        if n > len(self):
            raise ValueError(f"table holds {len(self)} ordinates, asked for {n}")
        if n == 0:
            return replace(self, gammas=self.gammas[:0], z_prime_abs=self.z_prime_abs[:0],
                           t_max=self.t_min)
        return replace(self, gammas=self.gammas[:n], z_prime_abs=self.z_prime_abs[:n],
                       t_max=float(self.gammas[n - 1]))

    def up_to(self, T: float) -> "ZeroTable":
        if T > self.t_max:
            raise ValueError("cannot extend a table beyond its t_max")
        k = int(np.searchsorted(self.gammas, T, side="right"))
        return replace(self, gammas=self.gammas[:k], z_prime_abs=self.z_prime_abs[:k],
                       t_max=float(T))


def count_zeros_main_term(T: float) -> float:
    """(T/2pi) log(T/2pi) - T/2pi, the smooth part of N(T)."""
    if not T > TWO_PI:
        raise ValueError(f"domain error: T must exceed 2*pi, got {T}")
    x = T / TWO_PI
    return x * math.log(x) - x


def theta_count(T: float) -> float:
    """theta(T)/pi + 1, i.e. N(T) - S(T)."""
    return theta(T) / math.pi + 1.0


# ---------------------------------------------------------------- Gram points

def gram_points(n) -> np.ndarray:
    """Solve theta(g_n) = n pi for integer n >= -1 by Newton from a Lambert-W start."""
    n = np.atleast_1d(np.asarray(n, dtype=float))
    if np.any(n < -1):
        raise ValueError("Gram points are defined here for n >= -1")
    g = TWO_PI * math.e * np.exp(lambertw((8 * n + 1) / (8 * math.e)).real)
    for _ in range(8):
        d = theta(g) - n * math.pi
        g = g - d / (0.5 * np.log(g / TWO_PI) - 1.0 / (48.0 * g * g))
    return g


def gram_index(t: float) -> int:
    """Largest n >= -1 with g_n <= t (or -1 when t is below g_-1)."""
    if t < 10.0:
        return -1
    n = int(math.floor(theta(t) / math.pi))
    return max(n, -1)


def _is_good(n: np.ndarray, z: np.ndarray) -> np.ndarray:
    sign = np.where(np.asarray(n) % 2 == 0, 1.0, -1.0)
    return sign * z > 0


def _good_below(n: int) -> int:
    while n > -1:
        if _is_good(np.array([n]), np.atleast_1d(hardy_z(gram_points(n))))[0]:
            return n
        n -= 1
    return -1


def _good_above(n: int) -> int:
    n = max(n, -1)
    while True:
        if _is_good(np.array([n]), np.atleast_1d(hardy_z(gram_points(n))))[0]:
            return n
        n += 1


# ------------------------------------------------------------ block scanning

def _sign_changes(z: np.ndarray) -> np.ndarray:
    return np.flatnonzero(np.signbit(z[:-1]) != np.signbit(z[1:]))


def _scan_blocks(blocks):
    """Resolve Gram blocks into root brackets.

    `blocks` is a list of (n_start, n_end, t_points, z_values). Returns the
    bracket endpoints/values for every sign change plus the failed blocks.
    """
    state = [(ns, ne, np.asarray(t), np.asarray(z)) for ns, ne, t, z in blocks]
    for _ in range(MAX_REFINE_ROUNDS):
        short = [i for i, (ns, ne, t, z) in enumerate(state) if _sign_changes(z).size < ne - ns]
        if not short:
            break
        mids = [0.5 * (state[i][2][:-1] + state[i][2][1:]) for i in short]
        zm = hardy_z(np.concatenate(mids))
        off = 0
        for i, m in zip(short, mids):
            ns, ne, t, z = state[i]
            zi = zm[off : off + m.size]
            off += m.size
            tt = np.empty(t.size + m.size)
            zz = np.empty_like(tt)
            tt[0::2], tt[1::2] = t, m
            zz[0::2], zz[1::2] = z, zi
            state[i] = (ns, ne, tt, zz)

    a, b, fa, fb, failures = [], [], [], [], []
    for ns, ne, t, z in state:
        idx = _sign_changes(z)
        if idx.size != ne - ns:
            failures.append(GramFailure(ns, ne, float(t[0]), float(t[-1]), ne - ns, int(idx.size)))
        a.append(t[idx])
        b.append(t[idx + 1])
        fa.append(z[idx])
        fb.append(z[idx + 1])
    cat = (lambda xs: np.concatenate(xs) if xs else np.zeros(0))
    return cat(a), cat(b), cat(fa), cat(fb), failures


def refine_roots(a, b, fa, fb, tol: float = ROOT_TOL, max_iter: int = 80) -> np.ndarray:
    """Shrink sign-change brackets [a, b] of Z to width <= tol.

    Each pass takes a regula-falsi point x and probes x +/- 0.4 tol on the side
    where the root lies, so a converged secant estimate collapses the bracket
    in one step; every third pass bisects to guarantee progress.
    """
    a, b, fa, fb = (np.array(v, dtype=float) for v in (a, b, fa, fb))
    delta = 0.4 * tol
    for it in range(max_iter):
        act = np.flatnonzero(b - a > tol)
        if act.size == 0:
            break
        aa, bb, ffa, ffb = a[act], b[act], fa[act], fb[act]
        w = bb - aa
        if it % 3 == 2:
            x = 0.5 * (aa + bb)
        else:
            x = aa - ffa * w / (ffb - ffa)
            x = np.clip(x, aa + 0.01 * w, bb - 0.01 * w)
        fx = hardy_z(x)
        right = np.signbit(fx) == np.signbit(ffa)  # root in (x, b)
        probe = np.where(right, np.minimum(x + delta, bb), np.maximum(x - delta, aa))
        fp = hardy_z(probe)
        # new bracket from the four ordered candidates
        lo_r = np.where(np.signbit(fp) != np.signbit(fx), x, probe)
        hi_r = np.where(np.signbit(fp) != np.signbit(fx), probe, bb)
        flo_r = np.where(np.signbit(fp) != np.signbit(fx), fx, fp)
        fhi_r = np.where(np.signbit(fp) != np.signbit(fx), fp, ffb)
        lo_l = np.where(np.signbit(fp) != np.signbit(fx), probe, aa)
        hi_l = np.where(np.signbit(fp) != np.signbit(fx), x, probe)
        flo_l = np.where(np.signbit(fp) != np.signbit(fx), fp, ffa)
        fhi_l = np.where(np.signbit(fp) != np.signbit(fx), fx, fp)
        a[act] = np.where(right, lo_r, lo_l)
        b[act] = np.where(right, hi_r, hi_l)
        fa[act] = np.where(right, flo_r, flo_l)
        fb[act] = np.where(right, fhi_r, fhi_l)
        exact = fx == 0
        if np.any(exact):
            e = act[exact]
            a[e] = b[e] = x[exact]
            fa[e] = fb[e] = 0.0
    else:
        if np.any(b - a > tol):
            raise RuntimeError("root refinement did not converge")
    denom = fb - fa
    with np.errstate(invalid="ignore", divide="ignore"):
        x = np.where(denom != 0, a - fa * (b - a) / denom, 0.5 * (a + b))
    return np.clip(x, a, b)


def _resolve_chunk(blocks):
    a, b, fa, fb, failures = _scan_blocks(blocks)
    roots = refine_roots(a, b, fa, fb) if a.size else np.zeros(0)
    return roots, failures


def _scan_range(n_lo: int, n_hi: int, workers: int = 1):
    """Zeros on (g_{n_lo}, g_{n_hi}] for good Gram points n_lo < n_hi."""
    if n_hi <= n_lo:
        return np.zeros(0), []
    n = np.arange(n_lo, n_hi + 1)
    g = gram_points(n)
    z = hardy_z(g)
    good = _is_good(n, z)
    good[0] = good[-1] = True
    cut = np.flatnonzero(good)
    blocks = [
        (int(n[i]), int(n[j]), g[i : j + 1], z[i : j + 1]) for i, j in zip(cut[:-1], cut[1:])
    ]
    if workers > 1 and len(blocks) > 4 * workers:
        parts = np.array_split(np.arange(len(blocks)), workers)
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_resolve_chunk, [[blocks[k] for k in p] for p in parts]))
    else:
        results = [_resolve_chunk(blocks)]
    roots = np.concatenate([r for r, _ in results]) if results else np.zeros(0)
    failures = [f for _, fs in results for f in fs]
    roots = np.sort(roots)
    # merge-level recount against Gram's prediction
    if not failures and roots.size != n_hi - n_lo:
        failures.append(GramFailure(n_lo, n_hi, float(g[0]), float(g[-1]), n_hi - n_lo,
                                    int(roots.size)))
    return roots, failures


def find_zeros(t_min: float, t_max: float, workers: int = 1, strict: bool = False) -> ZeroTable:
    """All ordinates in (t_min, t_max] with |Z'| attached.

    Completeness is judged block by block; a failed block leaves
    ``complete=False`` and is listed in ``failures`` (or raises with strict).
    """
    if not (0 <= t_min < t_max <= T_LIMIT):
        raise ValueError(f"need 0 <= t_min < t_max <= {T_LIMIT:g}")
    n_lo = _good_below(gram_index(t_min))
    n_hi = _good_above(gram_index(t_max) + 1)
    roots, failures = _scan_range(n_lo, n_hi, workers)
    if failures:
        log.warning("Gram block failures: %s", failures)
        if strict:
            raise CompletenessError(failures)
    below = int(np.searchsorted(roots, t_min, side="right"))
    keep = roots[below : int(np.searchsorted(roots, t_max, side="right"))]
    zp = np.abs(hardy_z_prime(keep)) if keep.size else np.zeros(0)
    return ZeroTable(
        gammas=keep,
        z_prime_abs=zp,
        t_max=float(t_max),
        complete=not failures,
        source="computed",
        first_index=n_lo + 2 + below,
        t_min=float(t_min),
        failures=tuple(failures),
    )


def zero_count(T: float) -> int:
    """N(T) from the Gram block containing T (local work only)."""
    if T < 14.0:
        return 0
    n_lo = _good_below(gram_index(T))
    n_hi = _good_above(n_lo + 1)
    roots, failures = _scan_range(n_lo, n_hi)
    if failures:
        raise CompletenessError(failures)
    return n_lo + 1 + int(np.searchsorted(roots, T, side="right"))


def first_n_zeros(n: int, workers: int = 1) -> ZeroTable:
    """The first n ordinates; t_max is set to gamma_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lo, hi = 7.0, 20.0
    while hi <= TWO_PI or count_zeros_main_term(hi) < n + 2:
        hi *= 2
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if mid > TWO_PI and count_zeros_main_term(mid) >= n + 2:
            hi = mid
        else:
            lo = mid
    table = find_zeros(0.0, hi + 5.0, workers=workers)
    while len(table) < n:
        hi *= 1.05
        table = find_zeros(0.0, hi + 5.0, workers=workers)
    return table.head(n)


# ------------------------------------------------------------------ file I/O

def _parse_ordinates(lines, where: str):
    out = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            val = float(line)
        except ValueError:
            raise ZeroFileError(f"{where}:{lineno}: cannot parse ordinate {line!r}") from None
        if not math.isfinite(val) or val <= 0:
            raise ZeroFileError(f"{where}:{lineno}: ordinate must be positive, got {line!r}")
        if out and val <= out[-1]:
            raise ZeroFileError(
                f"{where}:{lineno}: ordinates not strictly increasing ({val!r} after {out[-1]!r})"
            )
        out.append(val)
    return out


def import_zeros(path, t_max: float | None = None) -> ZeroTable:
    """Read one ordinate per line ('#' comments allowed) and attach |Z'|.

    The table is marked complete when it starts at the first zero and its
    size equals the Gram count N(t_max).
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read zero list {path}: {exc}") from exc
    vals = np.array(_parse_ordinates(text.splitlines(), str(path)))
    if t_max is None:
        t_max = float(vals[-1]) if vals.size else 0.0
    vals = vals[vals <= t_max]
    zp = np.abs(hardy_z_prime(vals)) if vals.size else np.zeros(0)
    complete = vals.size == zero_count(t_max) if t_max > 0 else True
    return ZeroTable(vals, zp, float(t_max), bool(complete), source="imported")


def write_cache(table: ZeroTable, path) -> None:
    path = Path(path)
    lines = [f"{CACHE_MAGIC} tmax={table.t_max!r} complete={int(table.complete)}"]
    for i, g, z in zip(table.indices, table.gammas, table.z_prime_abs):
        lines.append(f"{i},{g:.14g},{z:.14g}")
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text("\n".join(lines) + "\n")
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"cannot write zero cache {path}: {exc}") from exc


def read_cache(path) -> ZeroTable:
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read zero cache {path}: {exc}") from exc
    if not lines or not lines[0].startswith(CACHE_MAGIC + " "):
        raise ZeroFileError(f"{path}:1: not a zeta-zeros v1 cache header")
    fields = dict(kv.split("=", 1) for kv in lines[0][len(CACHE_MAGIC) + 1 :].split() if "=" in kv)
    try:
        t_max = float(fields["tmax"])
        complete = {"0": False, "1": True}[fields["complete"]]
    except (KeyError, ValueError):
        raise ZeroFileError(f"{path}:1: bad cache header {lines[0]!r}") from None
    idx, g, zp = [], [], []
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        parts = line.split(",")
        try:
            i, gv, zv = int(parts[0]), float(parts[1]), float(parts[2])
        except (IndexError, ValueError):
            raise ZeroFileError(f"{path}:{lineno}: bad row {line!r}") from None
        idx.append(i)
        g.append(gv)
        zp.append(zv)
    if idx and list(idx) != list(range(idx[0], idx[0] + len(idx))):
        raise ZeroFileError(f"{path}: index column is not consecutive")
    first = idx[0] if idx else 1
    t_min = 0.0 if first == 1 or not g else math.nextafter(g[0], 0.0)
    try:
        return ZeroTable(np.array(g), np.array(zp), t_max, complete, "computed", first, t_min)
    except ValueError as exc:
        raise ZeroFileError(f"{path}: {exc}") from None


def cache_roundtrip(table: ZeroTable, path) -> ZeroTable:
    write_cache(table, path)
    return read_cache(path)
