"""Brute-force partition-function evaluation.

This is the package's reference path: it enumerates every internal
configuration and sums semiring products of factor values.  Everything
else (message passing, holographic rewrites, dualization, loop series) is
tested against it.  No contraction-order optimization is attempted by
design; the sum-product module is the efficient path for trees.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import ContractError, ValidationError
from .graph import FactorTensor, Nfg, validate
from .semirings import SUM_PRODUCT, Semiring


class _Compiled:
    """Flattened form of a graph, ready for the contraction kernels."""

    __slots__ = ("sizes", "out_strides", "strides", "offsets", "values", "ext_ids", "ext_alphabets")

    def __init__(self, nfg: Nfg, semiring: Semiring):
        ext = sorted(v for v, var in nfg.variables.items() if var.is_external)
        ext_set = set(ext)
        internal = sorted(v for v in nfg.variables if v not in ext_set)
        order = ext + internal
        index = {v: i for i, v in enumerate(order)}
        sizes = np.array([nfg.variables[v].alphabet.size for v in order], dtype=np.int64)

        out_strides = np.zeros(len(order), dtype=np.int64)
        acc = 1
        for i in range(len(ext) - 1, -1, -1):
            out_strides[i] = acc
            acc *= sizes[i]

        fids = sorted(nfg.factors)
        strides = np.zeros((len(fids), len(order)), dtype=np.int64)
        chunks = []
        offsets = np.zeros(len(fids) + 1, dtype=np.int64)
        for k, fid in enumerate(fids):
            f = nfg.factors[fid]
            chunk = semiring.coerce(f.values).reshape(-1)
            chunks.append(chunk)
            offsets[k + 1] = offsets[k] + chunk.shape[0]
            stride = 1
            for axis in range(f.degree - 1, -1, -1):
                strides[k, index[f.ports[axis]]] += stride
                stride *= f.alphabets[axis].size
        self.values = (
            np.concatenate(chunks) if chunks else np.zeros(0, dtype=semiring.dtype)
        )
        self.offsets = offsets
        self.strides = strides
        self.out_strides = out_strides
        self.sizes = sizes
        self.ext_ids = tuple(ext)
        self.ext_alphabets = tuple(nfg.variables[v].alphabet for v in ext)

    def run(self, semiring: Semiring) -> np.ndarray:
        try:
            kernel = _kernels.CONTRACTIONS[semiring.name]
        except KeyError:
            raise ContractError(
                f"no contraction kernel for semiring {semiring.name!r}"
            ) from None
        n_ext = len(self.ext_ids)
        total = int(np.prod(self.sizes[:n_ext])) if n_ext else 1
        out = np.full(total, semiring.zero, dtype=semiring.dtype)
        kernel(self.values, self.offsets, self.strides, self.out_strides, self.sizes, out)
        return out


def _checked(nfg: Nfg) -> Nfg:
    violations = validate(nfg)
    if violations:
        raise ValidationError(violations)
    return nfg


def eval_external(nfg: Nfg, semiring: Semiring = SUM_PRODUCT) -> FactorTensor:
    """Partition function as a tensor over the external variables.

    Output ports are the external variable ids in ascending order.  With
    no external variables the result is a degree-0 tensor holding the
    scalar partition function.
    """
    compiled = _Compiled(_checked(nfg), semiring)
    out = compiled.run(semiring)
    out = semiring.times(out, semiring.coerce_scalar(nfg.prefactor))
    shape = tuple(a.size for a in compiled.ext_alphabets)
    return FactorTensor("Z", compiled.ext_ids, compiled.ext_alphabets, out.reshape(shape))


def eval_scalar(nfg: Nfg, semiring: Semiring = SUM_PRODUCT):
    """Scalar partition function of a graph with no external variables."""
    _checked(nfg)
    ext = nfg.external_ids()
    if ext:
        raise ContractError(f"eval_scalar requires no external variables, found {list(ext)}")
    compiled = _Compiled(nfg, semiring)
    out = compiled.run(semiring)
    return semiring.times(out[0], semiring.coerce_scalar(nfg.prefactor)).item()


def external_signature(nfg: Nfg) -> tuple[tuple[str, int], ...]:
    return tuple((v, nfg.variables[v].alphabet.size) for v in nfg.external_ids())


def eval_linear_combination(terms) -> FactorTensor:
    """Sum-product evaluation of ``sum_i coefficient_i * Z_i``.

    All graphs must expose identical external signatures (same variable
    ids over same-size alphabets).  Only defined over the sum-product
    semiring, where coefficient -1 provides subtraction.
    """
    terms = list(terms)
    if not terms:
        raise ContractError("eval_linear_combination requires at least one term")
    signature = external_signature(terms[0][1])
    acc = None
    result = None
    for coeff, graph in terms:
        if external_signature(graph) != signature:
            raise ContractError(
                f"external signature mismatch: {external_signature(graph)} != {signature}"
            )
        part = eval_external(graph, SUM_PRODUCT)
        contribution = complex(coeff) * part.values
        acc = contribution if acc is None else acc + contribution
        result = part
    return FactorTensor("Z", result.ports, result.alphabets, acc)
