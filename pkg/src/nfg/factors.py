"""Constructors for the special factors used throughout: equality
indicators, Kronecker delta, sign inverter, Levi-Civita, the Fourier
factor over prime-field vector spaces, and dense wrappers.

Constructors return unbound :class:`~nfg.graph.FactorTensor` values with
placeholder port names ("p0", "p1", ...); bind them to variables with
``GraphBuilder.factor`` or ``with_ports``.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractError
from .graph import Alphabet, FactorTensor


def _ports(n):
    return tuple(f"p{i}" for i in range(n))


def equality_indicator(alphabet: Alphabet, degree: int, id: str = "eq") -> FactorTensor:
    """Indicator that all ``degree`` incident values agree (degree >= 2)."""
    if degree < 2:
        raise ContractError(f"equality indicator needs degree >= 2, got {degree}")
    values = np.zeros((alphabet.size,) * degree, dtype=np.complex128)
    for x in range(alphabet.size):
        values[(x,) * degree] = 1.0
    return FactorTensor(id, _ports(degree), (alphabet,) * degree, values)


def kronecker_delta(alphabet: Alphabet, id: str = "delta") -> FactorTensor:
    """Degree-2 equality indicator (the identity matrix)."""
    return equality_indicator(alphabet, 2, id=id)


def sign_inverter(alphabet: Alphabet, id: str = "inv") -> FactorTensor:
    """Indicator that its two arguments are additive inverses in the
    alphabet's vector space (digitwise negation mod p)."""
    if not alphabet.is_vector_space:
        raise ContractError(f"sign inverter requires a vector-space alphabet, got {alphabet.id!r}")
    values = np.zeros((alphabet.size, alphabet.size), dtype=np.complex128)
    for x in range(alphabet.size):
        values[x, alphabet.negate(x)] = 1.0
    return FactorTensor(id, _ports(2), (alphabet, alphabet), values)


def levi_civita(alphabet: Alphabet | None = None, id: str = "eps") -> FactorTensor:
    """Totally antisymmetric degree-3 tensor over a size-3 alphabet:
    +1 on even permutations of (0, 1, 2), -1 on odd ones, 0 otherwise."""
    if alphabet is None:
        alphabet = Alphabet("ijk", 3)
    if alphabet.size != 3:
        raise ContractError(f"levi_civita requires a size-3 alphabet, got size {alphabet.size}")
    values = np.zeros((3, 3, 3), dtype=np.complex128)
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        values[i, j, k] = 1.0
    for i, j, k in ((0, 2, 1), (2, 1, 0), (1, 0, 2)):
        values[i, j, k] = -1.0
    return FactorTensor(id, _ports(3), (alphabet,) * 3, values)


def roots_of_unity(p: int) -> np.ndarray:
    """The p complex p-th roots of unity, exact at +-1 and +-i."""
    table = np.exp(2j * np.pi * np.arange(p) / p)
    table[0] = 1.0
    if p % 2 == 0:
        table[p // 2] = -1.0
    if p % 4 == 0:
        table[p // 4] = 1.0j
        table[3 * p // 4] = -1.0j
    return table


def fourier_factor(alphabet: Alphabet, id: str = "F") -> FactorTensor:
    """Fourier transform factor over a vector-space alphabet.

    Entry (ahat, a) is omega**<ahat, a> with omega = exp(2*pi*i/p) and the
    inner product taken digitwise mod p, so the exponent never touches
    floating point.  The matrix is symmetric; port order is (ahat, a).
    No 1/sqrt(size) normalization is applied.
    """
    if not alphabet.is_vector_space:
        raise ContractError(f"fourier factor requires a vector-space alphabet, got {alphabet.id!r}")
    p, _ = alphabet.field
    omega = roots_of_unity(p)
    n = alphabet.size
    values = np.empty((n, n), dtype=np.complex128)
    for ahat in range(n):
        for a in range(n):
            values[ahat, a] = omega[alphabet.inner(ahat, a)]
    return FactorTensor(id, _ports(2), (alphabet, alphabet), values)


def dense_vector(values, alphabet: Alphabet | None = None, id: str = "v") -> FactorTensor:
    """Degree-1 factor wrapping a vector verbatim."""
    arr = np.asarray(values, dtype=np.complex128).reshape(-1)
    if alphabet is None:
        alphabet = Alphabet("n", arr.shape[0])
    if arr.shape[0] != alphabet.size:
        raise ContractError(f"vector length {arr.shape[0]} != alphabet size {alphabet.size}")
    return FactorTensor(id, _ports(1), (alphabet,), arr)


def dense_matrix(values, row_alphabet=None, col_alphabet=None, id: str = "m") -> FactorTensor:
    """Degree-2 factor wrapping a matrix verbatim, ports (row, column)."""
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 2:
        raise ContractError(f"dense_matrix expects a 2-d array, got shape {arr.shape}")
    if row_alphabet is None:
        row_alphabet = Alphabet("r", arr.shape[0])
    if col_alphabet is None:
        col_alphabet = Alphabet("c", arr.shape[1])
    if arr.shape != (row_alphabet.size, col_alphabet.size):
        raise ContractError(
            f"matrix shape {arr.shape} != alphabet sizes "
            f"({row_alphabet.size}, {col_alphabet.size})"
        )
    return FactorTensor(id, _ports(2), (row_alphabet, col_alphabet), arr)
