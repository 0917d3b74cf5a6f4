"""Partition-function-preserving core rewrites: normalization of general
realizations, edge cutting, and tap insertion."""

from __future__ import annotations

import dataclasses

from .errors import ContractError
from .factors import equality_indicator
from .graph import EXTERNAL, INTERNAL, Nfg, Variable, uniquify


def _parts(nfg: Nfg):
    return dict(nfg.alphabets), dict(nfg.variables), dict(nfg.factors)


def _rewire(factors, slot, new_port):
    fid, idx = slot
    f = factors[fid]
    ports = list(f.ports)
    ports[idx] = new_port
    factors[fid] = dataclasses.replace(f, ports=tuple(ports))


def normalize(realization: Nfg) -> Nfg:
    """Rewrite an arbitrary realization into an equivalent normal one.

    Every external variable appearing in p > 1 port slots is replaced by p
    internal replicas tied together (with the original variable) by one
    degree-(p+1) equality indicator; every internal variable in q > 2
    slots by q replicas and a degree-q equality indicator.  Degree-1
    external and degree-2 internal variables pass through unchanged.

    Internal variables of degree 0 or 1 and external variables of degree 0
    are rejected: the procedure does not define a meaning for them.
    """
    alphabets, variables, factors = _parts(realization)

    for vid in sorted(realization.variables):
        var = realization.variables[vid]
        slots = realization.slots(vid)
        deg = len(slots)
        if var.is_external:
            if deg == 0:
                raise ContractError(f"external variable {vid!r} appears in no factor")
            if deg == 1:
                continue
        else:
            if deg < 2:
                raise ContractError(
                    f"internal variable {vid!r} appears in {deg} port slots; "
                    "normalization requires at least 2"
                )
            if deg == 2:
                continue
        replicas = []
        for slot in slots:
            rid = uniquify(variables, f"{vid}.{len(replicas) + 1}")
            variables[rid] = Variable(rid, var.alphabet, INTERNAL)
            _rewire(factors, slot, rid)
            replicas.append(rid)
        eq_ports = ([vid] if var.is_external else []) + replicas
        eq_id = uniquify(factors, f"{vid}.eq")
        factors[eq_id] = equality_indicator(var.alphabet, len(eq_ports), id=eq_id).with_ports(eq_ports)
        if not var.is_external:
            del variables[vid]

    return Nfg(alphabets.values(), variables.values(), factors.values(), realization.prefactor)


def _internal_slots(nfg: Nfg, variable: str):
    var = nfg.variables.get(variable)
    if var is None:
        raise ContractError(f"unknown variable {variable!r}")
    if var.is_external:
        raise ContractError(f"variable {variable!r} is external, expected internal")
    slots = nfg.slots(variable)
    if len(slots) != 2:
        raise ContractError(
            f"internal variable {variable!r} appears in {len(slots)} port slots, expected 2"
        )
    return var, slots


def split_edge(nfg: Nfg, variable: str):
    """Replace an internal edge by two fresh internal half-sides.

    Returns ``(alphabets, variables, factors, fwd, bwd)`` where ``fwd``
    replaces the edge at its first (factor-id-sorted) port slot and
    ``bwd`` at the second.  The original variable is removed; callers add
    whatever sits between the two new variables and fix their kinds.
    """
    var, slots = _internal_slots(nfg, variable)
    alphabets, variables, factors = _parts(nfg)
    del variables[variable]
    fwd = uniquify(variables, f"{variable}.fwd")
    variables[fwd] = Variable(fwd, var.alphabet, INTERNAL)
    bwd = uniquify(variables, f"{variable}.bwd")
    variables[bwd] = Variable(bwd, var.alphabet, INTERNAL)
    _rewire(factors, slots[0], fwd)
    _rewire(factors, slots[1], bwd)
    return alphabets, variables, factors, fwd, bwd


def cut_edge(nfg: Nfg, variable: str) -> Nfg:
    """Cut an internal edge into two external half-edges.

    The new externals are named ``<edge>.fwd`` (at the first port slot in
    factor-id order) and ``<edge>.bwd`` (at the second).
    """
    alphabets, variables, factors, fwd, bwd = split_edge(nfg, variable)
    variables[fwd] = dataclasses.replace(variables[fwd], kind=EXTERNAL)
    variables[bwd] = dataclasses.replace(variables[bwd], kind=EXTERNAL)
    return Nfg(alphabets.values(), variables.values(), factors.values(), nfg.prefactor)


def insert_tap(nfg: Nfg, variable: str) -> Nfg:
    """Expose an internal edge's value as a new external variable.

    The edge becomes ``fwd -- equality -- bwd`` with a half-edge carrying
    the original variable id attached to the equality indicator.  Summing
    the result over that external variable recovers the original
    partition function.
    """
    var = nfg.variables.get(variable)
    alphabets, variables, factors, fwd, bwd = split_edge(nfg, variable)
    variables[variable] = Variable(variable, var.alphabet, EXTERNAL)
    eq_id = uniquify(factors, f"{variable}.tap")
    factors[eq_id] = equality_indicator(var.alphabet, 3, id=eq_id).with_ports((fwd, bwd, variable))
    return Nfg(alphabets.values(), variables.values(), factors.values(), nfg.prefactor)
