"""Configuration-enumeration contraction kernels.

A compiled graph is a flat description: concatenated factor values,
per-factor offsets, a (factor x variable) stride matrix, output strides
for the external variables, and per-variable alphabet sizes.  The kernels
walk every joint configuration with an odometer (last variable fastest)
and accumulate the semiring product of factor values into the output
bucket selected by the external digits.

Two interchangeable backends exist: numba ``@njit`` kernels (the default
whenever numba is importable) and pure-numpy fallbacks.  Set
``NFG_BACKEND=numpy`` to force the fallback, ``NFG_BACKEND=numba`` to
require the jitted path.  Both enumerate configurations in the same order
and apply the same per-element operation order, so their results agree
bitwise; ``benchmarks/benchmark_kernels.py`` compares their speed.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised via NFG_BACKEND=numpy
    NUMBA_AVAILABLE = False


def _resolve_backend(env_value, numba_available):
    value = (env_value or "").strip().lower()
    if value in ("", "auto"):
        return "numba" if numba_available else "numpy"
    if value == "numba":
        if not numba_available:
            raise RuntimeError("NFG_BACKEND=numba requested but numba is not importable")
        return "numba"
    if value == "numpy":
        return "numpy"
    raise RuntimeError(f"unrecognized NFG_BACKEND value {env_value!r} (use 'numba' or 'numpy')")


BACKEND = _resolve_backend(os.environ.get("NFG_BACKEND"), NUMBA_AVAILABLE)


def _digit_columns(cfg, sizes, divisors):
    # (chunk, n_vars) digit matrix for flat configuration numbers.
    return (cfg[:, None] // divisors[None, :]) % sizes[None, :]


def _divisors(sizes):
    n = sizes.shape[0]
    div = np.ones(n, dtype=np.int64)
    for v in range(n - 2, -1, -1):
        div[v] = div[v + 1] * sizes[v + 1]
    return div


def contract_sum_product_numpy(values, offsets, strides, out_strides, sizes, out, chunk=1 << 15):
    """Pure-numpy contraction over complex128 values."""
    n_fac = offsets.shape[0] - 1
    total = int(np.prod(sizes)) if sizes.shape[0] else 1
    div = _divisors(sizes)
    for start in range(0, total, chunk):
        cfg = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = _digit_columns(cfg, sizes, div)
        prod = np.ones(cfg.shape[0], dtype=np.complex128)
        for k in range(n_fac):
            flat = digits @ strides[k]
            prod *= values[offsets[k] + flat]
        np.add.at(out, digits @ out_strides, prod)


def contract_min_sum_numpy(values, offsets, strides, out_strides, sizes, out, chunk=1 << 15):
    """Pure-numpy contraction over extended reals (min of sums)."""
    n_fac = offsets.shape[0] - 1
    total = int(np.prod(sizes)) if sizes.shape[0] else 1
    div = _divisors(sizes)
    for start in range(0, total, chunk):
        cfg = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = _digit_columns(cfg, sizes, div)
        acc = np.zeros(cfg.shape[0], dtype=np.float64)
        for k in range(n_fac):
            flat = digits @ strides[k]
            acc += values[offsets[k] + flat]
        np.minimum.at(out, digits @ out_strides, acc)


if NUMBA_AVAILABLE:

    @njit(cache=True, nogil=True)
    def _sum_product_jit(values, offsets, strides, out_strides, sizes, out):
        n_vars = sizes.shape[0]
        n_fac = offsets.shape[0] - 1
        total = 1
        for v in range(n_vars):
            total *= sizes[v]
        digits = np.zeros(n_vars, np.int64)
        fidx = np.zeros(n_fac, np.int64)
        oidx = 0
        for _ in range(total):
            prod = 1.0 + 0.0j
            for k in range(n_fac):
                prod *= values[offsets[k] + fidx[k]]
            out[oidx] += prod
            v = n_vars - 1
            while v >= 0:
                digits[v] += 1
                for k in range(n_fac):
                    fidx[k] += strides[k, v]
                oidx += out_strides[v]
                if digits[v] < sizes[v]:
                    break
                for k in range(n_fac):
                    fidx[k] -= strides[k, v] * sizes[v]
                oidx -= out_strides[v] * sizes[v]
                digits[v] = 0
                v -= 1

    @njit(cache=True, nogil=True)
    def _min_sum_jit(values, offsets, strides, out_strides, sizes, out):
        n_vars = sizes.shape[0]
        n_fac = offsets.shape[0] - 1
        total = 1
        for v in range(n_vars):
            total *= sizes[v]
        digits = np.zeros(n_vars, np.int64)
        fidx = np.zeros(n_fac, np.int64)
        oidx = 0
        for _ in range(total):
            acc = 0.0
            for k in range(n_fac):
                acc += values[offsets[k] + fidx[k]]
            if acc < out[oidx]:
                out[oidx] = acc
            v = n_vars - 1
            while v >= 0:
                digits[v] += 1
                for k in range(n_fac):
                    fidx[k] += strides[k, v]
                oidx += out_strides[v]
                if digits[v] < sizes[v]:
                    break
                for k in range(n_fac):
                    fidx[k] -= strides[k, v] * sizes[v]
                oidx -= out_strides[v] * sizes[v]
                digits[v] = 0
                v -= 1

    def contract_sum_product_numba(values, offsets, strides, out_strides, sizes, out):
        _sum_product_jit(values, offsets, strides, out_strides, sizes, out)

    def contract_min_sum_numba(values, offsets, strides, out_strides, sizes, out):
        _min_sum_jit(values, offsets, strides, out_strides, sizes, out)


if BACKEND == "numba":
    contract_sum_product = contract_sum_product_numba
    contract_min_sum = contract_min_sum_numba
else:
    contract_sum_product = contract_sum_product_numpy
    contract_min_sum = contract_min_sum_numpy

CONTRACTIONS = {"sum_product": contract_sum_product, "min_sum": contract_min_sum}
