import itertools

import numpy as np
import pytest

import nfg
from nfg import (
    Alphabet,
    ContractError,
    GraphBuilder,
    dense_matrix,
    dense_vector,
    equality_indicator,
    fourier_factor,
    kronecker_delta,
    levi_civita,
    roots_of_unity,
    sign_inverter,
)

from conftest import assert_close

F2 = Alphabet("f2", 2, field=(2, 1))
F3 = Alphabet("f3", 3, field=(3, 1))
F4 = Alphabet("f4", 4, field=(2, 2))


def test_equality_degree_three():
    t = equality_indicator(Alphabet("a", 2), 3)
    nonzero = {idx for idx in np.ndindex(*t.shape) if t.values[idx] != 0}
    assert nonzero == {(0, 0, 0), (1, 1, 1)}
    assert t.values[0, 0, 0] == 1 and t.values[1, 1, 1] == 1


def test_equality_degree_two_is_identity():
    t = kronecker_delta(Alphabet("a", 4))
    np.testing.assert_array_equal(t.values, np.eye(4))


@pytest.mark.parametrize("size,degree", [(2, 2), (3, 3), (4, 5)])
def test_equality_nonzero_count(size, degree):
    t = equality_indicator(Alphabet("a", size), degree)
    assert np.count_nonzero(t.values) == size


def test_equality_degree_error():
    with pytest.raises(ContractError):
        equality_indicator(Alphabet("a", 2), 1)


@pytest.mark.parametrize("size,degree", [(2, 3), (3, 4), (4, 3)])
def test_equality_contracted_with_ones_drops_degree(size, degree):
    t = equality_indicator(Alphabet("a", size), degree)
    reduced = t.values @ np.ones(size)
    np.testing.assert_array_equal(
        reduced, equality_indicator(Alphabet("a", size), degree - 1).values
    )


def test_sign_inverter_characteristic_two_is_identity():
    np.testing.assert_array_equal(sign_inverter(F2).values, np.eye(2))
    np.testing.assert_array_equal(sign_inverter(F4).values, np.eye(4))


def test_sign_inverter_mod_three():
    t = sign_inverter(F3).values
    nonzero = {idx for idx in np.ndindex(3, 3) if t[idx] != 0}
    assert nonzero == {(0, 0), (1, 2), (2, 1)}


@pytest.mark.parametrize("alphabet", [F2, F3, F4, Alphabet("f9", 9, field=(3, 2))])
def test_sign_inverter_is_involution(alphabet):
    t = sign_inverter(alphabet).values
    np.testing.assert_array_equal(t @ t, np.eye(alphabet.size))


def test_sign_inverter_needs_field():
    with pytest.raises(ContractError):
        sign_inverter(Alphabet("plain", 3))


def test_levi_civita_entries():
    eps = levi_civita().values
    assert eps[0, 1, 2] == 1
    assert eps[1, 0, 2] == -1
    assert eps[0, 0, 1] == 0
    assert np.count_nonzero(eps) == 6


def test_levi_civita_antisymmetry():
    eps = levi_civita().values
    for i, j, k in itertools.product(range(3), repeat=3):
        assert eps[i, j, k] == -eps[j, i, k]
        assert eps[i, j, k] == -eps[i, k, j]


def test_levi_civita_size_check():
    with pytest.raises(ContractError):
        levi_civita(Alphabet("a", 2))


def test_roots_of_unity_anchors():
    np.testing.assert_array_equal(roots_of_unity(2), [1.0, -1.0])
    r4 = roots_of_unity(4)
    np.testing.assert_array_equal(r4, [1.0, 1.0j, -1.0, -1.0j])
    r3 = roots_of_unity(3)
    assert_close(r3**3, np.ones(3))


def test_fourier_f2_exact():
    np.testing.assert_array_equal(fourier_factor(F2).values, [[1, 1], [1, -1]])


def test_fourier_f3_unitary():
    f = fourier_factor(F3).values
    assert_close(f @ f.conj().T, 3 * np.eye(3))
    omega = np.exp(2j * np.pi / 3)
    expected = np.array([[omega ** ((a * b) % 3) for b in range(3)] for a in range(3)])
    assert_close(f, expected)


def test_fourier_f4_is_kronecker_power():
    # the digitwise inner product makes F over F_2^2 the 2-fold tensor
    # power of F over F_2
    f = fourier_factor(F4).values
    f2 = fourier_factor(F2).values
    np.testing.assert_array_equal(f, np.kron(f2, f2))


def test_fourier_symmetric():
    for a in (F2, F3, F4):
        f = fourier_factor(a).values
        np.testing.assert_array_equal(f, f.T)


def test_fourier_needs_field():
    with pytest.raises(ContractError):
        fourier_factor(Alphabet("plain", 4))


@pytest.mark.parametrize("alphabet", [F2, F3, F4])
def test_fourier_orthogonality_through_sign_inverter(alphabet):
    f = fourier_factor(alphabet).values
    inv = sign_inverter(alphabet).values
    assert_close(f @ inv @ f, alphabet.size * np.eye(alphabet.size))


def test_dense_vector_dot_product():
    b = GraphBuilder()
    a = b.alphabet("i", 3)
    b.internal("I", a)
    b.factor("u", ["I"], dense_vector([1.0, 2.0, 3.0]))
    b.factor("v", ["I"], dense_vector([1.0, 2.0, 3.0]))
    assert nfg.eval_scalar(b.build()) == 14


def test_cross_product_basis_vectors():
    b = GraphBuilder()
    a = b.alphabet("i", 3)
    b.external("I", a)
    b.internal("J", a)
    b.internal("K", a)
    b.factor("eps", ["I", "J", "K"], levi_civita())
    b.factor("u", ["J"], dense_vector([1.0, 0.0, 0.0]))
    b.factor("v", ["K"], dense_vector([0.0, 1.0, 0.0]))
    np.testing.assert_array_equal(nfg.eval_external(b.build()).values, [0, 0, 1])


def test_determinant_graph_matches_cofactor(rng):
    from nfg.corpus import _cofactor_det, determinant_graph

    m = rng.integers(-4, 5, size=(3, 3)).astype(float)
    z = nfg.eval_scalar(determinant_graph(m).build())
    assert z == complex(_cofactor_det(m.tolist()))
    assert_close(z, np.linalg.det(m), rtol=1e-9, atol=1e-9)


def test_dense_wrappers_check_lengths():
    with pytest.raises(ContractError):
        dense_vector([1.0, 2.0], Alphabet("a", 3))
    with pytest.raises(ContractError):
        dense_matrix(np.ones((2, 3)), Alphabet("r", 2), Alphabet("c", 2))
    with pytest.raises(ContractError):
        dense_matrix(np.ones(4))
