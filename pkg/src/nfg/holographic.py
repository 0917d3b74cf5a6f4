"""Holographic graph rewrites.

Everything here preserves the partition function, with any scale change
made explicit: replacing an edge by a factor chain U-S-V whose matrix
product is c * I multiplies the partition function by c, so the graph's
prefactor is divided by c at insertion.  Fourier dualization, message
reparameterization, and the loop-series expansion are all instances of
this one move.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractError,
    GraphError,
    NotIdentityError,
    SingularEdgeError,
    ValidationError,
)
from .evaluate import eval_scalar
from .factors import fourier_factor, sign_inverter
from .graph import EXTERNAL, INTERNAL, FactorTensor, Nfg, Variable, uniquify, validate
from .sum_product import MessageState, edge_endpoints
from .transform import split_edge


@dataclass(frozen=True, eq=False)
class HoloTriple:
    """Degree-2 factors U, S, V with alphabets A-B, B-B, B-A whose matrix
    product is ``scale`` times the identity on A."""

    u: FactorTensor
    s: FactorTensor
    v: FactorTensor
    scale: complex

    @property
    def edge_alphabet(self):
        return self.u.alphabets[0]

    @property
    def coupling_alphabet(self):
        return self.u.alphabets[1]


def make_triple(u: FactorTensor, s: FactorTensor, v: FactorTensor, tol: float = 1e-9) -> HoloTriple:
    """Verify that U.S.V = c * I and record c.

    Raises NotIdentityError when the product deviates from a scalar
    multiple of the identity by more than ``tol`` (relative to the
    product's magnitude), or when c is numerically zero.
    """
    for t, want in ((u, 2), (s, 2), (v, 2)):
        if t.degree != want:
            raise ContractError(f"triple factor {t.id!r} must have degree 2, got {t.degree}")
    a, b = u.alphabets
    if s.alphabets != (b, b) or v.alphabets != (b, a):
        raise ContractError(
            "triple alphabets must chain A-B, B-B, B-A; got "
            f"{[x.id for x in u.alphabets]}, {[x.id for x in s.alphabets]}, "
            f"{[x.id for x in v.alphabets]}"
        )
    product = u.values @ s.values @ v.values
    scale = complex(np.trace(product) / a.size)
    bound = tol * max(1.0, float(np.abs(product).max()))
    deviation = float(np.abs(product - scale * np.eye(a.size)).max())
    if deviation > bound:
        raise NotIdentityError(
            f"U.S.V deviates from scale * identity by {deviation:.3e} (allowed {bound:.3e})"
        )
    if abs(scale) <= tol * max(1.0, float(np.abs(product).max())):
        raise NotIdentityError("U.S.V is numerically zero; the chain is not invertible")
    return HoloTriple(u, s, v, scale)


def _register_alphabet(alphabets: dict, alphabet) -> None:
    seen = alphabets.get(alphabet.id)
    if seen is None:
        alphabets[alphabet.id] = alphabet
    elif seen != alphabet:
        raise GraphError(f"alphabet id {alphabet.id!r} already declared with different parameters")


def insert_triple(nfg: Nfg, edge, triple: HoloTriple) -> Nfg:
    """Replace an internal edge by the chain U-S-V.

    The prefactor is divided by the triple's scale, so the partition
    function is preserved.
    """
    var = nfg.variables.get(edge)
    if var is None:
        raise ContractError(f"unknown variable {edge!r}")
    if var.alphabet != triple.edge_alphabet:
        raise ContractError(
            f"edge {edge!r} has alphabet {var.alphabet.id!r}, "
            f"triple expects {triple.edge_alphabet.id!r}"
        )
    alphabets, variables, factors, fwd, bwd = split_edge(nfg, edge)
    _register_alphabet(alphabets, triple.coupling_alphabet)

    ub = uniquify(variables, f"{edge}.us")
    variables[ub] = Variable(ub, triple.coupling_alphabet, INTERNAL)
    vb = uniquify(variables, f"{edge}.sv")
    variables[vb] = Variable(vb, triple.coupling_alphabet, INTERNAL)

    for tensor, ports, tag in (
        (triple.u, (fwd, ub), "U"),
        (triple.s, (ub, vb), "S"),
        (triple.v, (vb, bwd), "V"),
    ):
        fid = uniquify(factors, f"{edge}.{tag}")
        factors[fid] = dataclasses.replace(tensor, id=fid, ports=ports)
    return Nfg(
        alphabets.values(),
        variables.values(),
        factors.values(),
        nfg.prefactor / triple.scale,
    )


def transform_external(nfg: Nfg, variable, w: FactorTensor) -> Nfg:
    """Transform an external variable by a degree-2 factor W.

    The result's tensor satisfies new[w] = sum_x old[x] * W(x, w); the
    transformed external keeps the original variable id (over W's second
    alphabet), and the old variable turns into an internal edge feeding W.
    """
    var = nfg.variables.get(variable)
    if var is None:
        raise ContractError(f"unknown variable {variable!r}")
    if not var.is_external:
        raise ContractError(f"variable {variable!r} is not external")
    if w.degree != 2:
        raise ContractError(f"transform factor must have degree 2, got {w.degree}")
    if w.alphabets[0] != var.alphabet:
        raise ContractError(
            f"transform factor's first alphabet {w.alphabets[0].id!r} does not match "
            f"variable {variable!r} alphabet {var.alphabet.id!r}"
        )
    alphabets, variables, factors = dict(nfg.alphabets), dict(nfg.variables), dict(nfg.factors)
    _register_alphabet(alphabets, w.alphabets[1])

    inner = uniquify(variables, f"{variable}.in")
    variables[inner] = Variable(inner, var.alphabet, INTERNAL)
    (fid, idx), = nfg.slots(variable)
    f = factors[fid]
    ports = list(f.ports)
    ports[idx] = inner
    factors[fid] = dataclasses.replace(f, ports=tuple(ports))

    variables[variable] = Variable(variable, w.alphabets[1], EXTERNAL)
    wid = uniquify(factors, f"{variable}.W")
    factors[wid] = dataclasses.replace(w, id=wid, ports=(inner, variable))
    return Nfg(alphabets.values(), variables.values(), factors.values(), nfg.prefactor)


def fourier_transform_factor(tensor: FactorTensor) -> FactorTensor:
    """Multidimensional Fourier transform of a factor, one transform per
    port; all port alphabets must carry vector-space structure.

    Applying the transform twice multiplies by the product of the port
    alphabet sizes and reverses signs: (F F f)(a) = |A| * f(-a).
    """
    for a in tensor.alphabets:
        if not a.is_vector_space:
            raise ContractError(
                f"factor {tensor.id!r} port alphabet {a.id!r} has no vector-space structure"
            )
    values = tensor.values
    for axis, alphabet in enumerate(tensor.alphabets):
        f = fourier_factor(alphabet).values
        values = np.moveaxis(np.tensordot(f, values, axes=(1, axis)), 0, axis)
    return dataclasses.replace(tensor, values=values)


def fourier_dual(nfg: Nfg) -> tuple[Nfg, int]:
    """The dual graph: every factor Fourier-transformed, a sign inverter in
    the middle of every internal edge, externals replaced by their
    transformed counterparts.

    Returns ``(dual, scale)`` with scale the product of the internal
    alphabet sizes: eval_external(dual) equals scale times the Fourier
    transform of eval_external(nfg).
    """
    violations = validate(nfg)
    if violations:
        raise ValidationError(violations)
    for a in nfg.alphabets.values():
        if not a.is_vector_space:
            raise ContractError(f"alphabet {a.id!r} has no vector-space structure")

    dual = nfg.replace(
        factors=[fourier_transform_factor(f) for f in nfg.factors.values()]
    )
    scale = 1
    for edge in nfg.internal_ids():
        scale *= nfg.variables[edge].alphabet.size
        alphabets, variables, factors, fwd, bwd = split_edge(dual, edge)
        inv_id = uniquify(factors, f"{edge}.inv")
        alphabet = nfg.variables[edge].alphabet
        factors[inv_id] = sign_inverter(alphabet, id=inv_id).with_ports((fwd, bwd))
        dual = Nfg(alphabets.values(), variables.values(), factors.values(), dual.prefactor)
    return dual, scale


def reparameterize_edge(nfg: Nfg, edge, mu_bwd, mu_fwd) -> Nfg:
    """Rewrite an edge as diag(mu_bwd) - diag(1/(mu_bwd*mu_fwd)) - diag(mu_fwd).

    ``mu_fwd`` is read as the message toward the edge's second endpoint
    (factor-id order) and ``mu_bwd`` toward the first; both must be
    strictly positive real vectors.  The chain multiplies to the identity,
    so the partition function is unchanged, while the edge between the
    first two inserted factors now carries the componentwise product
    mu_bwd * mu_fwd as a message: with fixed-point messages that is the
    edge marginal.
    """
    var = nfg.variables.get(edge)
    if var is None:
        raise ContractError(f"unknown variable {edge!r}")
    size = var.alphabet.size
    vectors = []
    for name, vec in (("mu_bwd", mu_bwd), ("mu_fwd", mu_fwd)):
        arr = np.asarray(vec, dtype=np.float64).reshape(-1)
        if arr.shape[0] != size:
            raise ContractError(f"{name} has length {arr.shape[0]}, edge alphabet size is {size}")
        if np.any(arr == 0.0):
            raise ZeroDivisionError(f"{name} contains a zero entry; reparameterization divides by it")
        if np.any(arr < 0.0):
            raise ContractError(f"{name} must be strictly positive")
        vectors.append(arr)
    back, fwd = vectors

    a = var.alphabet
    ports = ("p0", "p1")
    u = FactorTensor("U", ports, (a, a), np.diag(back).astype(np.complex128))
    s = FactorTensor("S", ports, (a, a), np.diag(1.0 / (back * fwd)).astype(np.complex128))
    v = FactorTensor("V", ports, (a, a), np.diag(fwd).astype(np.complex128))
    return insert_triple(nfg, edge, make_triple(u, s, v))


@dataclass(frozen=True)
class LoopTerm:
    """One of the 2**n components of the loop-series expansion."""

    subset: tuple[int, ...]
    value: complex
    classification: str


ZERO_ORDER = "zero_order"
LOOSE_END = "loose_end"
GENERALIZED_LOOP = "generalized_loop"


def loop_series(nfg: Nfg, state: MessageState) -> list[LoopTerm]:
    """Expand the partition function of a binary-alphabet graph into 2**n
    loop-series terms, one per subset of its n edges.

    Every edge's identity is resolved as U_j S_j V_j built from the two
    directed messages on that edge, with S_j split into its two rank-1
    diagonal parts; term ``subset`` selects one part per edge (subset[i]
    belongs to the i-th internal variable in ascending id order).  The
    terms sum to the partition function for any messages with nonzero
    determinant D_j; at a sum-product fixed point every term containing a
    vertex of effective degree 1 (a loose end) vanishes, and the all-zero
    subset is the Bethe-Peierls-style zero-order term.
    """
    edges = edge_endpoints(nfg)
    if nfg.external_ids():
        raise ContractError("loop_series requires a graph with no external variables")
    order = sorted(edges)
    n = len(order)
    factor_ids = sorted(nfg.factors)
    factor_pos = {fid: i for i, fid in enumerate(factor_ids)}

    # per edge: rank-1 side vectors of the two parts of U_j S_j V_j.
    # half[j][bit] = (alpha, beta): alpha faces the first endpoint, beta
    # the second; bit 0 carries the messages themselves, bit 1 the
    # orthogonal complements.
    half = []
    inv_delta = 1.0 + 0.0j
    for edge in order:
        if nfg.variables[edge].alphabet.size != 2:
            raise ContractError(
                f"loop_series requires binary alphabets; edge {edge!r} has size "
                f"{nfg.variables[edge].alphabet.size}"
            )
        s0, s1 = edges[edge]
        if s0[0] == s1[0]:
            raise ContractError(f"edge {edge!r} is a self-loop; no message pair exists")
        try:
            mu_bwd = np.asarray(state.messages[(edge, s0[0])].values, dtype=np.complex128)
            mu_fwd = np.asarray(state.messages[(edge, s1[0])].values, dtype=np.complex128)
        except KeyError as missing:
            raise ContractError(f"state lacks message {missing.args[0]!r}") from None
        delta = mu_fwd[0] * mu_bwd[0] + mu_fwd[1] * mu_bwd[1]
        if abs(delta) <= 1e-12:
            raise SingularEdgeError(
                f"edge {edge!r}: message determinant {delta!r} is numerically zero"
            )
        inv_delta /= delta
        half.append(
            (
                (mu_bwd, mu_fwd),
                (np.array([-mu_fwd[1], mu_fwd[0]]), np.array([-mu_bwd[1], mu_bwd[0]])),
            )
        )

    # Every component graph falls apart into per-factor scalars: edge j
    # contributes the rank-1 factor alpha (x) beta / D_j, so each factor is
    # fully contracted against one vector per port.  Tabulate each factor's
    # contraction over all 2**degree choices of incident-edge bits.
    sigma = np.arange(1 << n, dtype=np.int64)
    values = np.full(1 << n, nfg.prefactor * inv_delta, dtype=np.complex128)
    factor_masks = np.zeros(len(factor_ids), dtype=np.int64)
    for fid in factor_ids:
        f = nfg.factors[fid]
        port_edges = []
        for axis, port in enumerate(f.ports):
            j = order.index(port)
            side = 0 if edges[port][0] == (fid, axis) else 1
            port_edges.append((j, side))
            factor_masks[factor_pos[fid]] |= 1 << j
        table = np.empty(1 << f.degree, dtype=np.complex128)
        for combo in range(1 << f.degree):
            acc = f.values
            for axis in range(f.degree - 1, -1, -1):
                j, side = port_edges[axis]
                acc = acc @ half[j][(combo >> axis) & 1][side]
            table[combo] = acc
        combo_idx = np.zeros(1 << n, dtype=np.int64)
        for axis, (j, _) in enumerate(port_edges):
            combo_idx |= ((sigma >> j) & 1) << axis
        values *= table[combo_idx]

    # classification: a factor with exactly one selected incident edge is a
    # loose end; selected-edge counts of zero do not participate.
    loose = np.zeros(1 << n, dtype=bool)
    for mask in factor_masks:
        hit = sigma & mask
        loose |= (hit != 0) & ((hit & (hit - 1)) == 0)

    terms = []
    for s in range(1 << n):
        if s == 0:
            kind = ZERO_ORDER
        elif loose[s]:
            kind = LOOSE_END
        else:
            kind = GENERALIZED_LOOP
        subset = tuple((s >> i) & 1 for i in range(n))
        terms.append(LoopTerm(subset, complex(values[s]), kind))
    return terms


def loop_series_total(terms) -> complex:
    """Ordered sum of the term values (deterministic reduction)."""
    total = 0.0 + 0.0j
    for t in terms:
        total += t.value
    return total
