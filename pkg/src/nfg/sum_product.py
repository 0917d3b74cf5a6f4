"""Sum-product message passing.

On a cycle-free graph with no external variables, the two directed
messages on an edge are exactly the partition functions of the two halves
obtained by cutting that edge; their componentwise product is the
marginal partition function of the edge, and its sum is the global
partition function (the same value from every edge).  ``run_tree``
computes all messages exactly along a leaf-to-root schedule.

``run_loopy`` iterates the same update rule synchronously (flooding) on
graphs with cycles, L1-normalizing messages each round; it reports a
fixed-point residual rather than exact sub-partition functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ContractError,
    CyclicGraphError,
    DisconnectedError,
    ValidationError,
    ZeroMessageError,
)
from .graph import Nfg, components, validate
from .semirings import SUM_PRODUCT, Semiring


@dataclass(frozen=True, eq=False)
class Message:
    """A vector over one edge's alphabet, directed toward one endpoint."""

    edge: str
    toward: str
    values: np.ndarray


@dataclass(frozen=True)
class Schedule:
    """(edge, toward) pairs grouped by depth; a message at round d only
    needs messages from rounds before d."""

    rounds: tuple[tuple[tuple[str, str], ...], ...]

    @property
    def diameter(self) -> int:
        return len(self.rounds)

    def messages(self):
        for rnd in self.rounds:
            yield from rnd


@dataclass
class MessageState:
    """Messages keyed by (edge, toward-factor), plus iteration metadata.

    ``prefactor`` carries the source graph's scalar prefactor (None means
    the semiring's multiplicative identity); messages themselves are
    prefactor-free, and :func:`marginal` folds it back in so that
    marginals match the tap oracle and ``global_z`` matches
    ``eval_scalar``.
    """

    messages: dict[tuple[str, str], Message]
    semiring: Semiring = field(default=SUM_PRODUCT)
    iterations: int = 0
    residual: float = 0.0
    converged: bool = True
    prefactor: complex | None = None


def edge_endpoints(nfg: Nfg) -> dict[str, tuple[tuple[str, int], tuple[str, int]]]:
    """Map each internal variable to its two (factor, port) slots."""
    violations = validate(nfg)
    if violations:
        raise ValidationError(violations)
    return {v: nfg.slots(v) for v in nfg.internal_ids()}


def _check_message_graph(nfg: Nfg, edges):
    if nfg.external_ids():
        raise ContractError(
            "message passing requires a graph with no external variables; "
            f"found {list(nfg.external_ids())}"
        )
    for edge, (s0, s1) in edges.items():
        if s0[0] == s1[0]:
            raise CyclicGraphError(f"edge {edge!r} is a self-loop on factor {s0[0]!r}")


def build_schedule(nfg: Nfg) -> Schedule:
    """Leaf-to-root schedule for a connected cycle-free graph.

    Rounds never exceed the graph diameter; ties within a round are broken
    by ascending (edge, toward) ids.
    """
    edges = edge_endpoints(nfg)
    _check_message_graph(nfg, edges)
    if len(components(nfg)) > 1:
        raise DisconnectedError("graph is not connected")

    incident: dict[str, list[str]] = {fid: [] for fid in nfg.factors}
    for edge, (s0, s1) in edges.items():
        incident[s0[0]].append(edge)
        incident[s1[0]].append(edge)

    # message (edge, toward) is computed at the opposite endpoint (source);
    # it waits on every message into the source from the source's other edges
    source = {}
    for edge, (s0, s1) in edges.items():
        source[(edge, s0[0])] = s1[0]
        source[(edge, s1[0])] = s0[0]
    pending = {
        key: len(incident[src]) - 1 for key, src in source.items()
    }

    done = set()
    rounds = []
    frontier = sorted(key for key, n in pending.items() if n == 0)
    while frontier:
        rounds.append(tuple(frontier))
        done.update(frontier)
        ready = []
        for edge, toward in frontier:
            # the message just produced feeds every message leaving `toward`
            # on the other edges of `toward`
            for out_edge in incident[toward]:
                if out_edge == edge:
                    continue
                s0, s1 = edges[out_edge]
                key = (out_edge, s1[0] if s0[0] == toward else s0[0])
                pending[key] -= 1
                if pending[key] == 0:
                    ready.append(key)
        frontier = sorted(ready)
    if len(done) != len(pending):
        raise CyclicGraphError("graph has a cycle; no cycle-free schedule exists")
    return Schedule(tuple(rounds))


def update_message(nfg: Nfg, edge, toward, incoming, semiring: Semiring = SUM_PRODUCT) -> Message:
    """One application of the sum-product update rule.

    Contracts the source factor (the edge endpoint opposite ``toward``)
    with the incoming messages on all its other ports, reducing with the
    semiring sum; a degree-1 source returns its values verbatim.
    """
    slots = nfg.slots(edge)
    if len(slots) != 2:
        raise ContractError(f"variable {edge!r} is not an internal edge")
    ends = [fid for fid, _ in slots]
    if toward not in ends:
        raise ContractError(f"factor {toward!r} is not an endpoint of edge {edge!r}")
    if ends[0] == ends[1]:
        raise CyclicGraphError(f"edge {edge!r} is a self-loop on factor {ends[0]!r}")
    src = nfg.factors[ends[0] if ends[1] == toward else ends[1]]

    values = semiring.coerce(src.values)
    target_axis = src.ports.index(edge)
    for axis, port in enumerate(src.ports):
        if axis == target_axis:
            continue
        msg = incoming.get((port, src.id))
        if msg is None:
            raise ContractError(f"missing incoming message ({port!r} toward {src.id!r})")
        shape = [1] * values.ndim
        shape[axis] = -1
        values = semiring.times(values, np.asarray(msg.values).reshape(shape))
    other_axes = tuple(i for i in range(values.ndim) if i != target_axis)
    if other_axes:
        values = semiring.reduce(values, axis=other_axes)
    return Message(edge, toward, values)


def run_tree(nfg: Nfg, semiring: Semiring = SUM_PRODUCT) -> MessageState:
    """Compute all 2 * #edges exact messages of a cycle-free graph."""
    schedule = build_schedule(nfg)
    messages: dict[tuple[str, str], Message] = {}
    for edge, toward in schedule.messages():
        messages[(edge, toward)] = update_message(nfg, edge, toward, messages, semiring)
    return MessageState(messages, semiring, iterations=schedule.diameter, prefactor=nfg.prefactor)


def marginal(state: MessageState, edge) -> np.ndarray:
    """Componentwise semiring product of the two directed messages on an
    edge, times the graph prefactor: the marginal partition function over
    that edge's alphabet."""
    pair = [state.messages[k] for k in sorted(state.messages) if k[0] == edge]
    if len(pair) != 2:
        raise ContractError(f"state holds {len(pair)} messages for edge {edge!r}, expected 2")
    product = state.semiring.times(pair[0].values, pair[1].values)
    if state.prefactor is None:
        return product
    return state.semiring.times(product, state.semiring.coerce_scalar(state.prefactor))


def global_z(state: MessageState, edge):
    """Semiring sum of an edge's marginal: the global partition function."""
    return state.semiring.reduce(marginal(state, edge)).item()


def _l1(values: np.ndarray) -> float:
    return float(np.abs(values).sum())


def run_loopy(
    nfg: Nfg,
    semiring: Semiring = SUM_PRODUCT,
    max_iters: int = 10000,
    damping: float = 0.0,
    tol: float = 1e-10,
) -> MessageState:
    """Synchronous (flooding) iteration of the update rule on a graph that
    may contain cycles.

    Messages start uniform and are L1-normalized after every update.  The
    residual is the largest change a fresh normalized update would make to
    the current messages, so ``converged`` certifies an approximate fixed
    point regardless of damping.  Non-convergence is reported through the
    flag, not raised.
    """
    if semiring.name != "sum_product":
        raise ContractError("run_loopy is defined over the sum-product semiring only")
    if not 0.0 <= damping < 1.0:
        raise ContractError(f"damping must lie in [0, 1), got {damping}")
    edges = edge_endpoints(nfg)
    _check_message_graph(nfg, edges)

    keys = sorted(
        (edge, end[0]) for edge, pair in edges.items() for end in pair
    )
    state = {
        (edge, toward): Message(
            edge,
            toward,
            np.full(
                nfg.variables[edge].alphabet.size,
                1.0 / nfg.variables[edge].alphabet.size,
                dtype=semiring.dtype,
            ),
        )
        for edge, toward in keys
    }

    iterations = 0
    residual = np.inf
    for iterations in range(1, max_iters + 1):
        fresh = {}
        residual = 0.0
        for key in keys:
            raw = update_message(nfg, key[0], key[1], state, semiring)
            norm = _l1(raw.values)
            if norm == 0.0:
                raise ZeroMessageError(f"message {key} is identically zero")
            normalized = raw.values / norm
            residual = max(residual, float(np.abs(normalized - state[key].values).max()))
            blended = (1.0 - damping) * normalized + damping * state[key].values
            blended_norm = _l1(blended)
            if blended_norm == 0.0:
                raise ZeroMessageError(f"damped message {key} is identically zero")
            fresh[key] = Message(key[0], key[1], blended / blended_norm)
        state = fresh
        if residual < tol:
            break

    return MessageState(
        state,
        semiring,
        iterations=iterations,
        residual=float(residual),
        converged=bool(residual < tol),
        prefactor=nfg.prefactor,
    )
