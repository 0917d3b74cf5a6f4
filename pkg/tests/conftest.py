"""Shared helpers: random graph generators and reference oracles.

The reference oracles deliberately avoid the package's contraction
kernels: sum-product references go through numpy.einsum, min-sum
references through explicit broadcast joins, so library results are
always checked against an independent computation.
"""

from __future__ import annotations

import string

import numpy as np
import pytest

import nfg

RTOL = 1e-9
ATOL = 1e-12


def assert_close(actual, desired, rtol=RTOL, atol=ATOL):
    np.testing.assert_allclose(np.asarray(actual), np.asarray(desired), rtol=rtol, atol=atol)


def complex_uniform(rng, shape=()):
    return rng.uniform(-1.0, 1.0, shape) + 1j * rng.uniform(-1.0, 1.0, shape)


def random_nfg(
    rng,
    n_vars=None,
    max_alphabet=4,
    p_external=0.35,
    allow_self_loops=True,
    ensure_cycle=False,
    field_alphabets=False,
):
    """Random graph satisfying the normality degree rules.

    ``field_alphabets`` restricts sizes to 2 and 3 with prime-field
    structure (needed by Fourier operations); ``ensure_cycle`` adds a
    doubled edge so the graph is guaranteed cyclic.
    """
    n_vars = int(rng.integers(1, 7)) if n_vars is None else n_vars
    n_factors = max(3, (2 * n_vars + 2) // 3)
    b = nfg.GraphBuilder()
    cache = {}

    def alph(size):
        if size not in cache:
            field = (size, 1) if field_alphabets else None
            cache[size] = b.alphabet(f"a{size}", size, field=field)
        return cache[size]

    ports = {f"f{k}": [] for k in range(n_factors)}

    def pick_factor():
        open_factors = [fid for fid, ps in ports.items() if len(ps) < 4]
        return open_factors[rng.integers(len(open_factors))]

    for i in range(n_vars):
        size = int(rng.integers(2, 4 if field_alphabets else max_alphabet + 1))
        vid = f"v{i}"
        if rng.random() < p_external:
            b.external(vid, alph(size))
            ports[pick_factor()].append(vid)
        else:
            b.internal(vid, alph(size))
            if allow_self_loops and rng.random() < 0.1:
                fid = pick_factor()
                if len(ports[fid]) < 3:
                    ports[fid] += [vid, vid]
                    continue
            ports[pick_factor()].append(vid)
            ports[pick_factor()].append(vid)
    if ensure_cycle:
        size = 2
        first, second = "f0", "f1"
        for j in range(2):
            vid = f"cyc{j}"
            b.internal(vid, alph(size))
            ports[first].append(vid)
            ports[second].append(vid)
    for fid, ps in ports.items():
        if not ps:
            continue
        shape = tuple(b.variable(p).alphabet.size for p in ps)
        b.factor(fid, ps, complex_uniform(rng, shape))
    return b.build(prefactor=complex_uniform(rng))


def random_general_realization(rng, n_vars=None, max_alphabet=3, max_normalized_configs=60_000):
    """Random realization that usually breaks the degree rules: externals
    may sit in up to 3 factors, internals in up to 4.

    Normalization turns every port slot of a replicated variable into a
    fresh internal replica, so brute-force cost grows with the product of
    slot alphabet sizes; candidates whose normalized form enumerates more
    than ``max_normalized_configs`` configurations are rejected."""

    def candidate():
        n = int(rng.integers(1, 5)) if n_vars is None else n_vars
        b = nfg.GraphBuilder()
        cache = {}

        def alph(size):
            if size not in cache:
                cache[size] = b.alphabet(f"a{size}", size)
            return cache[size]

        slots = []
        for i in range(n):
            size = int(rng.integers(2, max_alphabet + 1))
            vid = f"v{i}"
            if rng.random() < 0.5:
                b.external(vid, alph(size))
                count = int(rng.integers(1, 4))
            else:
                b.internal(vid, alph(size))
                count = int(rng.integers(2, 5))
            slots += [vid] * count
        rng.shuffle(slots)
        n_factors = max(2, len(slots) // 3)
        ports = {k: [] for k in range(n_factors)}
        for i, vid in enumerate(slots):
            ports[i % n_factors].append(vid)
        for k, ps in ports.items():
            if not ps:
                continue
            # a variable may appear at most twice within one factor
            trimmed = []
            for p in ps:
                if trimmed.count(p) < 2:
                    trimmed.append(p)
            shape = tuple(b.variable(p).alphabet.size for p in trimmed)
            b.factor(f"f{k}", trimmed, complex_uniform(rng, shape))
        return b.build(prefactor=complex_uniform(rng))

    while True:
        g = candidate()
        try:
            normed = nfg.normalize(g)
        except nfg.ContractError:
            continue
        total = 1
        for v in normed.variables.values():
            total *= v.alphabet.size
        if total <= max_normalized_configs:
            return g


def random_tree_nfg(rng, n_factors=None, max_alphabet=4, integer_values=False, prefactor=None):
    """Random tree: no external variables, factor i > 0 hangs off a random
    earlier factor through a fresh edge.  ``integer_values`` builds
    min-sum-friendly real integer factors (and defaults the prefactor to
    the min-sum identity 0)."""
    if prefactor is None:
        prefactor = 0.0 if integer_values else 1.0
    n_factors = int(rng.integers(2, 13)) if n_factors is None else n_factors
    b = nfg.GraphBuilder()
    cache = {}

    def alph(size):
        if size not in cache:
            cache[size] = b.alphabet(f"a{size}", size)
        return cache[size]

    ports = {k: [] for k in range(n_factors)}
    for i in range(1, n_factors):
        parent = int(rng.integers(i))
        size = int(rng.integers(2, max_alphabet + 1))
        eid = f"e{i}"
        b.internal(eid, alph(size))
        ports[parent].append(eid)
        ports[i].append(eid)
    for k, ps in ports.items():
        shape = tuple(b.variable(p).alphabet.size for p in ps)
        if integer_values:
            vals = rng.integers(0, 8, size=shape).astype(np.float64)
        else:
            vals = complex_uniform(rng, shape)
        b.factor(f"f{k}", ps, vals)
    return b.build(prefactor=prefactor)


def reference_external(graph):
    """Independent sum-product oracle via numpy.einsum (handles general
    realizations and self-loops); output axes are sorted external ids."""
    letters = {}

    def letter(v):
        if v not in letters:
            letters[v] = string.ascii_letters[len(letters)]
        return letters[v]

    subs, operands = [], []
    for fid in sorted(graph.factors):
        f = graph.factors[fid]
        subs.append("".join(letter(p) for p in f.ports))
        operands.append(f.values)
    out = "".join(letter(v) for v in graph.external_ids())
    return graph.prefactor * np.einsum(",".join(subs) + "->" + out, *operands)


def reference_minsum_joint(graph):
    """Broadcast join of all factors (min-sum), axes = sorted variable ids.

    Requires every factor's ports to be distinct (no self-loops)."""
    order = sorted(graph.variables)
    axis = {v: i for i, v in enumerate(order)}
    shape = tuple(graph.variables[v].alphabet.size for v in order)
    joint = np.zeros(shape)
    for f in graph.factors.values():
        src = np.real(f.values)
        src = src.reshape(src.shape + (1,) * (len(order) - src.ndim))
        targets = [axis[p] for p in f.ports]
        rest = [i for i in range(len(order)) if i not in targets]
        joint = joint + np.moveaxis(src, range(len(order)), targets + rest)
    return joint + graph.prefactor.real, order


def reference_minsum_scalar(graph):
    joint, _ = reference_minsum_joint(graph)
    return float(joint.min())


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
