"""Partition functions of normal factor graphs.

Graphs whose vertices are dense factors, whose ordinary edges are
internal (summed-over) variables, and whose half-edges are the external
variables of the resulting function.  The package evaluates these
partition functions over pluggable commutative semirings and provides the
classic partition-function-preserving rewrites: normalization, cutting
and tapping edges, exact sum-product message passing on trees (plus
flooding on loopy graphs), holographic edge replacement, Fourier
dualization, message reparameterization, and the loop-series expansion.
"""

from .errors import (
    ContractError,
    CyclicGraphError,
    DisconnectedError,
    DocumentError,
    GraphError,
    NfgError,
    NotIdentityError,
    SingularEdgeError,
    ValidationError,
    ZeroMessageError,
)
from .semirings import MIN_SUM, SEMIRINGS, SUM_PRODUCT, Semiring
from .graph import (
    EXTERNAL,
    INTERNAL,
    Alphabet,
    FactorTensor,
    GraphBuilder,
    Nfg,
    Variable,
    Violation,
    components,
    validate,
)
from .evaluate import eval_external, eval_linear_combination, eval_scalar
from .factors import (
    dense_matrix,
    dense_vector,
    equality_indicator,
    fourier_factor,
    kronecker_delta,
    levi_civita,
    roots_of_unity,
    sign_inverter,
)
from .transform import cut_edge, insert_tap, normalize
from .sum_product import (
    Message,
    MessageState,
    Schedule,
    build_schedule,
    global_z,
    marginal,
    run_loopy,
    run_tree,
    update_message,
)
from .holographic import (
    GENERALIZED_LOOP,
    LOOSE_END,
    ZERO_ORDER,
    HoloTriple,
    LoopTerm,
    fourier_dual,
    fourier_transform_factor,
    insert_triple,
    loop_series,
    loop_series_total,
    make_triple,
    reparameterize_edge,
    transform_external,
)
from .document import NfgDocument, build_nfg, doc_from_nfg, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "ContractError",
    "CyclicGraphError",
    "DisconnectedError",
    "DocumentError",
    "EXTERNAL",
    "FactorTensor",
    "GENERALIZED_LOOP",
    "GraphBuilder",
    "GraphError",
    "HoloTriple",
    "INTERNAL",
    "LOOSE_END",
    "LoopTerm",
    "MIN_SUM",
    "Message",
    "MessageState",
    "Nfg",
    "NfgDocument",
    "NfgError",
    "NotIdentityError",
    "SEMIRINGS",
    "SUM_PRODUCT",
    "Schedule",
    "Semiring",
    "SingularEdgeError",
    "ValidationError",
    "Variable",
    "Violation",
    "ZERO_ORDER",
    "ZeroMessageError",
    "build_nfg",
    "build_schedule",
    "components",
    "cut_edge",
    "dense_matrix",
    "dense_vector",
    "doc_from_nfg",
    "equality_indicator",
    "eval_external",
    "eval_linear_combination",
    "eval_scalar",
    "fourier_dual",
    "fourier_factor",
    "fourier_transform_factor",
    "global_z",
    "insert_tap",
    "insert_triple",
    "kronecker_delta",
    "levi_civita",
    "loop_series",
    "loop_series_total",
    "make_triple",
    "marginal",
    "normalize",
    "parse",
    "reparameterize_edge",
    "roots_of_unity",
    "run_loopy",
    "run_tree",
    "serialize",
    "sign_inverter",
    "transform_external",
    "update_message",
    "validate",
]
