import numpy as np
import pytest
from hypothesis import given, strategies as st

import nfg
from nfg import Alphabet, FactorTensor, GraphBuilder, GraphError, Nfg, Variable

from conftest import assert_close, complex_uniform, random_nfg, reference_external


def test_alphabet_basics():
    a = Alphabet("a", 4, field=(2, 2))
    assert a.is_vector_space
    assert a.digits(3) == (1, 1)
    assert a.from_digits((1, 1)) == 3
    assert a.digits(2) == (0, 1)
    assert all(a.from_digits(a.digits(v)) == v for v in range(4))
    # inner product is digitwise mod p
    assert a.inner(3, 3) == 0  # 1*1 + 1*1 mod 2
    assert a.inner(1, 3) == 1


def test_alphabet_negate():
    f3 = Alphabet("f3", 3, field=(3, 1))
    assert [f3.negate(v) for v in range(3)] == [0, 2, 1]
    f9 = Alphabet("f9", 9, field=(3, 2))
    for v in range(9):
        digits = f9.digits(v)
        neg = f9.digits(f9.negate(v))
        assert all((d + n) % 3 == 0 for d, n in zip(digits, neg))


def test_alphabet_validation():
    with pytest.raises(GraphError):
        Alphabet("bad", 0)
    with pytest.raises(GraphError):
        Alphabet("bad", 4, field=(4, 1))  # 4 is not prime
    with pytest.raises(GraphError):
        Alphabet("bad", 5, field=(2, 2))  # 5 != 2**2
    with pytest.raises(GraphError):
        Alphabet("bad", 2, field=(2, 0))


def test_plain_alphabet_has_no_field_ops():
    a = Alphabet("a", 3)
    with pytest.raises(GraphError):
        a.digits(1)


def test_factor_tensor_layout():
    a2 = Alphabet("a", 2)
    a3 = Alphabet("b", 3)
    flat = np.arange(6, dtype=float)
    t = FactorTensor("f", ("x", "y"), (a2, a3), flat)
    # last port's index varies fastest
    assert t.values[1, 2] == 5
    assert t.values[0, 1] == 1
    np.testing.assert_array_equal(t.flat(), flat)


@given(st.lists(st.integers(min_value=1, max_value=4), min_size=0, max_size=4))
def test_factor_tensor_flat_roundtrip(sizes):
    # flat index <-> multi-index is a bijection under the C layout
    alphabets = tuple(Alphabet(f"a{i}", s) for i, s in enumerate(sizes))
    total = int(np.prod(sizes)) if sizes else 1
    t = FactorTensor("f", tuple(f"p{i}" for i in range(len(sizes))), alphabets, np.arange(total))
    seen = [int(t.values[idx].real) for idx in np.ndindex(*t.shape)]
    assert seen == list(range(total))


def test_factor_tensor_shape_mismatch():
    a2 = Alphabet("a", 2)
    with pytest.raises(GraphError):
        FactorTensor("f", ("x", "y"), (a2, a2), np.arange(5))
    with pytest.raises(GraphError):
        FactorTensor("f", ("x",), (a2, a2), np.arange(4))


def test_factor_tensor_immutable():
    t = FactorTensor("f", ("x",), (Alphabet("a", 2),), [1.0, 2.0])
    with pytest.raises(ValueError):
        t.values[0] = 5.0


def test_nfg_reference_checks():
    a = Alphabet("a", 2)
    x = Variable("x", a, "external")
    f = FactorTensor("f", ("x",), (a,), [1.0, 2.0])
    Nfg([a], [x], [f])  # fine
    with pytest.raises(GraphError):
        Nfg([a], [], [f])  # dangling port
    with pytest.raises(GraphError):
        Nfg([], [x], [f])  # variable's alphabet undeclared
    with pytest.raises(GraphError):
        Nfg([a], [x, x], [f])  # duplicate variable
    b = Alphabet("b", 2)
    with pytest.raises(GraphError):
        # tensor alphabet disagrees with the variable's
        Nfg([a, b], [x], [FactorTensor("f", ("x",), (b,), [1.0, 2.0])])


def test_nfg_immutable():
    g = random_nfg(np.random.default_rng(0))
    with pytest.raises(AttributeError):
        g.prefactor = 2.0
    with pytest.raises(TypeError):
        g.factors["new"] = None


def test_validate_matrix_chain_graph():
    # w -- M -- external: the canonical vector-matrix product graph
    b = GraphBuilder()
    ai = b.alphabet("i", 2)
    aj = b.alphabet("j", 2)
    b.internal("I", ai)
    b.external("J", aj)
    b.factor("w", ["I"], [1.0, 2.0])
    b.factor("M", ["I", "J"], np.eye(2))
    assert nfg.validate(b.build()) == []


def test_validate_internal_degree_three():
    b = GraphBuilder()
    a = b.alphabet("a", 2)
    b.internal("y", a)
    b.factor("f", ["y"], [1.0, 0.0])
    b.factor("g", ["y"], [1.0, 0.0])
    b.factor("h", ["y"], [1.0, 0.0])
    report = nfg.validate(b.build())
    assert len(report) == 1
    assert report[0].subject == "y"
    assert report[0].rule == "internal-degree"


def test_validate_external_degree_two():
    b = GraphBuilder()
    a = b.alphabet("a", 2)
    b.external("x", a)
    b.factor("f", ["x"], [1.0, 0.0])
    b.factor("g", ["x"], [1.0, 0.0])
    report = nfg.validate(b.build())
    assert [v.subject for v in report] == ["x"]
    assert report[0].rule == "external-degree"


def test_components_split_and_multiply(rng):
    # two disjoint pieces: Z factors into the product of component Z's
    b = GraphBuilder()
    a = b.alphabet("a", 2)
    b.internal("y1", a)
    b.internal("y2", a)
    b.factor("f1", ["y1", "y1"], complex_uniform(rng, (2, 2)))
    b.factor("f2", ["y2"], complex_uniform(rng, 2))
    b.factor("f3", ["y2"], complex_uniform(rng, 2))
    g = b.build(prefactor=1.5 + 0.25j)
    parts = nfg.components(g)
    assert len(parts) == 2
    product = np.prod([nfg.eval_scalar(p) for p in parts])
    assert_close(product, nfg.eval_scalar(g))
    assert_close(product, reference_external(g))


def test_components_rejects_unused_variable():
    a = Alphabet("a", 2)
    g = Nfg([a], [Variable("x", a, "external")], [])
    with pytest.raises(GraphError):
        nfg.components(g)


def test_slots_are_sorted():
    b = GraphBuilder()
    a = b.alphabet("a", 2)
    b.internal("y", a)
    b.factor("zz", ["y"], [1.0, 0.0])
    b.factor("aa", ["y"], [1.0, 0.0])
    g = b.build()
    assert g.slots("y") == (("aa", 0), ("zz", 0))


def test_builder_errors():
    b = GraphBuilder()
    a = b.alphabet("a", 2)
    with pytest.raises(GraphError):
        b.alphabet("a", 3)  # conflicting redefinition
    b.external("x", a)
    with pytest.raises(GraphError):
        b.external("x", a)
    with pytest.raises(GraphError):
        b.factor("f", ["missing"], [1.0])
