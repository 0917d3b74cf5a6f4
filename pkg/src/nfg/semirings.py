"""Commutative semirings that evaluation is generic over.

Two instances are provided: the usual sum-product semiring over complex
doubles, and the min-sum semiring over the extended reals R u {+inf}
(where "addition" is min and "multiplication" is +).
"""

from __future__ import annotations

import numpy as np

from .errors import ContractError


class Semiring:
    """A commutative semiring with vectorized numpy operations.

    ``plus``/``times`` act elementwise on arrays; ``reduce`` folds ``plus``
    over the given axes.  ``coerce`` converts complex128 tensor storage to
    the semiring's working dtype (and rejects values outside the element
    domain).
    """

    def __init__(self, name, dtype, zero, one, plus, times, reduce, coerce):
        self.name = name
        self.dtype = np.dtype(dtype)
        self.zero = zero
        self.one = one
        self._plus = plus
        self._times = times
        self._reduce = reduce
        self._coerce = coerce

    def __repr__(self):
        return f"Semiring({self.name})"

    def plus(self, a, b):
        return self._plus(a, b)

    def times(self, a, b):
        return self._times(a, b)

    def reduce(self, values, axis=None):
        """Fold the additive operation over ``axis`` (all axes if None)."""
        return self._reduce(values, axis=axis)

    def coerce(self, values):
        """Convert an array of stored (complex) values into this semiring's
        element domain, raising ContractError for values outside it."""
        return self._coerce(np.asarray(values))

    def coerce_scalar(self, value):
        return self.coerce(np.asarray(value)).item()


def _as_complex(values):
    return np.ascontiguousarray(values, dtype=np.complex128)


def _as_extended_real(values):
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        if np.any(arr.imag != 0.0):
            raise ContractError(
                "min-sum semiring elements are extended reals; "
                "found values with nonzero imaginary part"
            )
        arr = arr.real
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr == -np.inf):
        raise ContractError("min-sum semiring elements must lie in R u {+inf}")
    return arr


SUM_PRODUCT = Semiring(
    "sum_product",
    np.complex128,
    zero=0.0 + 0.0j,
    one=1.0 + 0.0j,
    plus=np.add,
    times=np.multiply,
    reduce=np.sum,
    coerce=_as_complex,
)

MIN_SUM = Semiring(
    "min_sum",
    np.float64,
    zero=np.inf,
    one=0.0,
    plus=np.minimum,
    times=np.add,
    reduce=np.min,
    coerce=_as_extended_real,
)

SEMIRINGS = {s.name: s for s in (SUM_PRODUCT, MIN_SUM)}
