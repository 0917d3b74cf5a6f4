"""Built-in identity corpus.

Classic tensor-contraction identities, each realized as graphs and checked
against an independently computed oracle: trace cyclicity, the
determinant as a Levi-Civita contraction, the contracted-epsilon
identity, and the two cross-product reduction identities.

Corpus inputs are deterministic: they come from the linear congruential
generator x_{n+1} = (6364136223846793005 * x_n + 1442695040888963407)
mod 2**63 with seed 20177, mapping states to uniforms via x / 2**63, so
every run (and any reimplementation of the generator) sees identical
inputs.
"""

from __future__ import annotations

import numpy as np

from .evaluate import eval_external, eval_linear_combination, eval_scalar
from .factors import levi_civita
from .graph import Alphabet, GraphBuilder

LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
LCG_MODULUS = 1 << 63
CORPUS_SEED = 20177

REL_TOL = 1e-9

IDX3 = Alphabet("ijk", 3)


class Lcg:
    """The corpus's fixed linear congruential generator."""

    def __init__(self, seed: int = CORPUS_SEED):
        self.state = seed % LCG_MODULUS

    def uniform(self) -> float:
        """Next value in [0, 1)."""
        self.state = (LCG_MULTIPLIER * self.state + LCG_INCREMENT) % LCG_MODULUS
        return self.state / LCG_MODULUS

    def signed(self) -> float:
        """Next value in [-1, 1)."""
        return 2.0 * self.uniform() - 1.0

    def complex_signed(self) -> complex:
        return complex(self.signed(), self.signed())

    def integer(self, lo: int, hi: int) -> int:
        """Next integer in [lo, hi]."""
        return lo + int(self.uniform() * (hi - lo + 1))

    def complex_matrix(self, rows: int, cols: int) -> np.ndarray:
        return np.array([[self.complex_signed() for _ in range(cols)] for _ in range(rows)])

    def real_vector(self, n: int) -> np.ndarray:
        return np.array([self.signed() for _ in range(n)])


def _close(a, b, rel=REL_TOL) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    return bool(np.all(np.abs(a - b) <= rel * max(1.0, float(np.abs(b).max(initial=0.0)))))


def matrix_cycle(matrices) -> "GraphBuilder":
    """Closed chain of square matrices; its scalar value is the trace of
    their product."""
    b = GraphBuilder()
    n = matrices[0].shape[0]
    a = b.alphabet("n", n)
    k = len(matrices)
    for i in range(k):
        b.internal(f"y{i}", a)
    for i, m in enumerate(matrices):
        b.factor(f"m{i}", (f"y{i}", f"y{(i + 1) % k}"), np.asarray(m))
    return b


def determinant_graph(m) -> "GraphBuilder":
    """Rows of a 3x3 matrix contracted through the Levi-Civita tensor."""
    b = GraphBuilder()
    b.add_alphabet(IDX3)
    for v in ("i", "j", "k"):
        b.internal(v, IDX3)
    b.factor("eps", ("i", "j", "k"), levi_civita(IDX3))
    for r, row in enumerate(np.asarray(m)):
        b.factor(f"row{r}", ("i", "j", "k")[r : r + 1], row)
    return b


def _epsilon_pair():
    # two Levi-Civita factors joined on their third/first index; externals
    # i, j, l, m
    b = GraphBuilder()
    b.add_alphabet(IDX3)
    for v in ("i", "j", "l", "m"):
        b.external(v, IDX3)
    b.internal("k", IDX3)
    eps = levi_civita(IDX3)
    b.factor("e1", ("i", "j", "k"), eps)
    b.factor("e2", ("k", "l", "m"), eps)
    return b.build()


def _delta_pair(first, second):
    # product of two Kronecker deltas over the four externals i, j, l, m
    b = GraphBuilder()
    b.add_alphabet(IDX3)
    for v in ("i", "j", "l", "m"):
        b.external(v, IDX3)
    b.factor("d1", first, np.eye(3))
    b.factor("d2", second, np.eye(3))
    return b.build()


def _cofactor_det(m) -> complex:
    m = [list(row) for row in m]
    if len(m) == 1:
        return m[0][0]
    total = 0
    for j in range(len(m)):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _cofactor_det(minor)
    return total


def _cross_lhs_triple(u, v, w):
    # (u x v) x w with the result index external
    b = GraphBuilder()
    b.add_alphabet(IDX3)
    b.external("i", IDX3)
    for t in ("j", "k", "l", "m"):
        b.internal(t, IDX3)
    eps = levi_civita(IDX3)
    b.factor("e1", ("i", "j", "k"), eps)
    b.factor("e2", ("j", "l", "m"), eps)
    b.factor("u", ("l",), u)
    b.factor("v", ("m",), v)
    b.factor("w", ("k",), w)
    return b.build()


def _scaled_vector(dotted_a, dotted_b, out_vec):
    # (a . b) c with c's index external
    b = GraphBuilder()
    b.add_alphabet(IDX3)
    b.external("i", IDX3)
    b.internal("p", IDX3)
    b.factor("a", ("p",), dotted_a)
    b.factor("b", ("p",), dotted_b)
    b.factor("c", ("i",), out_vec)
    return b.build()


def _cross_lhs_dot(u, v, w, x):
    # (u x v) . (w x x)
    b = GraphBuilder()
    b.add_alphabet(IDX3)
    for t in ("i", "j", "k", "l", "m"):
        b.internal(t, IDX3)
    eps = levi_civita(IDX3)
    b.factor("e1", ("i", "j", "k"), eps)
    b.factor("e2", ("i", "l", "m"), eps)
    b.factor("u", ("j",), u)
    b.factor("v", ("k",), v)
    b.factor("w", ("l",), w)
    b.factor("x", ("m",), x)
    return b.build()


def _dot_product_pair(a, b_vec, c, d):
    # (a . b)(c . d) as a disconnected graph
    b = GraphBuilder()
    b.add_alphabet(IDX3)
    b.internal("p", IDX3)
    b.internal("q", IDX3)
    b.factor("a", ("p",), a)
    b.factor("b", ("p",), b_vec)
    b.factor("c", ("q",), c)
    b.factor("d", ("q",), d)
    return b.build()


def check_trace_cyclicity(rng: Lcg):
    for _ in range(4):
        a, b, c = (rng.complex_matrix(4, 4) for _ in range(3))
        z_abc = eval_scalar(matrix_cycle([a, b, c]).build())
        z_bca = eval_scalar(matrix_cycle([b, c, a]).build())
        oracle = np.trace(a @ b @ c)
        if not (_close(z_abc, z_bca) and _close(z_abc, oracle)):
            return False, f"Tr ABC = {z_abc}, Tr BCA = {z_bca}, direct = {oracle}"
    return True, "trace invariant under cyclic reordering (4x4 complex, 4 trials)"


def check_determinant(rng: Lcg):
    for _ in range(4):
        m = np.array([[rng.integer(-5, 5) for _ in range(3)] for _ in range(3)], dtype=float)
        z = eval_scalar(determinant_graph(m).build())
        oracle = _cofactor_det(m.tolist())
        if z != complex(oracle):
            return False, f"graph det {z} != cofactor det {oracle} for {m.tolist()}"
    return True, "Levi-Civita determinant matches cofactor expansion exactly"


def check_contracted_epsilon(rng: Lcg):
    lhs = eval_external(_epsilon_pair())
    rhs = eval_linear_combination(
        [
            (1.0, _delta_pair(("i", "l"), ("j", "m"))),
            (-1.0, _delta_pair(("i", "m"), ("j", "l"))),
        ]
    )
    if not np.array_equal(lhs.values, rhs.values) or lhs.ports != rhs.ports:
        return False, "81-entry tensors differ"
    return True, "sum_k eps_ijk eps_klm = d_il d_jm - d_im d_jl, exact on all 81 entries"


def check_cross_product_triple(rng: Lcg):
    for _ in range(4):
        u, v, w = (rng.real_vector(3) for _ in range(3))
        lhs = eval_external(_cross_lhs_triple(u, v, w)).values
        rhs = eval_linear_combination(
            [(1.0, _scaled_vector(u, w, v)), (-1.0, _scaled_vector(v, w, u))]
        ).values
        oracle = np.cross(np.cross(u, v), w)
        if not (_close(lhs, rhs) and _close(lhs, oracle)):
            return False, f"(u x v) x w: graph {lhs}, combination {rhs}, direct {oracle}"
    return True, "(u x v) x w = (u.w)v - (v.w)u on random 3-vectors"


def check_cross_product_dot(rng: Lcg):
    for _ in range(4):
        u, v, w, x = (rng.real_vector(3) for _ in range(4))
        lhs = eval_scalar(_cross_lhs_dot(u, v, w, x))
        rhs = eval_linear_combination(
            [(1.0, _dot_product_pair(u, w, v, x)), (-1.0, _dot_product_pair(u, x, v, w))]
        ).values.item()
        oracle = np.dot(np.cross(u, v), np.cross(w, x))
        if not (_close(lhs, rhs) and _close(lhs, oracle)):
            return False, f"(u x v).(w x x): graph {lhs}, combination {rhs}, direct {oracle}"
    return True, "(u x v).(w x x) = (u.w)(v.x) - (u.x)(v.w) on random 3-vectors"


IDENTITIES = (
    ("trace_cyclicity", check_trace_cyclicity),
    ("determinant_cofactor", check_determinant),
    ("contracted_epsilon", check_contracted_epsilon),
    ("cross_product_triple", check_cross_product_triple),
    ("cross_product_dot", check_cross_product_dot),
)


def run_corpus(seed: int = CORPUS_SEED):
    """Run every identity; returns [(name, passed, detail), ...]."""
    results = []
    rng = Lcg(seed)
    for name, check in IDENTITIES:
        passed, detail = check(rng)
        results.append((name, passed, detail))
    return results
