"""Compensated (Neumaier) summation helpers.

Oscillatory sums over zeros or primes have terms of modulus ~1 that cancel
heavily; a running error term keeps the result accurate to a few ulps of the
largest partial sum instead of drifting with the number of terms.
"""
from __future__ import annotations

import numpy as np


def neumaier_sum(values, axis: int = -1) -> np.ndarray:
    """Compensated sum of `values` along `axis`.

    Terms are visited in index order, so the result is bit-reproducible for a
    fixed input layout.
    """
    arr = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    if arr.shape[0] == 0:
        return np.zeros(arr.shape[1:])
    s = arr[0].copy()
    c = np.zeros_like(s)
    for term in arr[1:]:
        t = s + term
        big = np.abs(s) >= np.abs(term)
        c += np.where(big, (s - t) + term, (term - t) + s)
        s = t
    return s + c


def neumaier_sum_complex(values, axis: int = -1) -> np.ndarray:
    arr = np.asarray(values)
    return neumaier_sum(arr.real, axis) + 1j * neumaier_sum(arr.imag, axis)


def chunked_sum(values) -> float:
    """Compensated sum of a long 1-d array.

    The array is folded into a near-square matrix; rows are accumulated with
    `neumaier_sum` and the resulting column partials are summed again. The
    Python loop is O(sqrt(n)) and the visiting order is fixed.
    """
    x = np.asarray(values, dtype=float).ravel()
    n = x.size
    if n <= 64:
        return float(neumaier_sum(x))
    width = int(np.ceil(np.sqrt(n)))
    rows = -(-n // width)
    padded = np.zeros(rows * width)
    padded[:n] = x
    partial = neumaier_sum(padded.reshape(rows, width), axis=0)
    return float(neumaier_sum(partial))


def chunked_sum_complex(values) -> complex:
    z = np.asarray(values, dtype=complex).ravel()
    return complex(chunked_sum(z.real), chunked_sum(z.imag))
