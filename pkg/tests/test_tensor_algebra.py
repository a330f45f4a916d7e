import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ellaybe import tensor_algebra as ta
from ellaybe.errors import DegeneracyError, ParameterError

PAIRS = [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3), (5, 2)]


def random_tensor(n, legs=2, seed=0):
    rng = np.random.default_rng(seed)
    shape = (n,) * (2 * legs)
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_matrix(n, seed=0):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


@pytest.mark.parametrize("n,d", PAIRS)
def test_heisenberg_relations(n, d):
    p = ta.heisenberg_pair(n, d)
    I = np.eye(n)
    assert np.allclose(np.linalg.matrix_power(p.X, n), I, atol=1e-13)
    assert np.allclose(np.linalg.matrix_power(p.Y, n), I)
    # with X diagonal and Y[j, j+1] = 1 the commutation factor is eps^-1
    assert np.allclose(p.X @ p.Y, p.Y @ p.X / p.eps, atol=1e-14)


@pytest.mark.parametrize("n,d", [(2, 2), (4, 2), (3, 0), (3, 3), (6, 4)])
def test_heisenberg_rejects_bad_parameters(n, d):
    with pytest.raises(ParameterError):
        ta.heisenberg_pair(n, d)


def test_heisenberg_envelope():
    with pytest.raises(ParameterError):
        ta.heisenberg_pair(17, 1)


@pytest.mark.parametrize("n,d", PAIRS)
def test_dual_basis(n, d):
    p = ta.heisenberg_pair(n, d)
    idx = ta.index_set(n)
    gram = np.array([[ta.trace_pairing(ta.z_dual(p, *a), ta.z_basis(p, *b)) for b in idx]
                     for a in idx])
    assert np.allclose(gram, np.eye(n * n), atol=1e-13)
    assert abs(np.linalg.det(ta.change_of_basis(p))) > 0.5


def test_index_set_order():
    assert ta.index_set(2) == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert ta.index_set(3)[-1] == (3, 3)


def test_last_basis_element_is_identity():
    p = ta.heisenberg_pair(3, 1)
    assert np.allclose(ta.z_basis(p, 3, 3), np.eye(3))
    assert np.allclose(ta.basis_tensors(p)[-1], ta.identity_tensor(3) / 3)


@pytest.mark.parametrize("n,d", PAIRS)
def test_adjoint_eigenvalues(n, d):
    # measured: Ad_X Z_(k,l) = eps^-k Z_(k,l), Ad_Y Z_(k,l) = eps^-l Z_(k,l)
    p = ta.heisenberg_pair(n, d)
    for k, l in ta.index_set(n):
        Z = ta.z_basis(p, k, l)
        assert np.allclose(ta.ad(p.X, Z), p.eps ** (-k) * Z, atol=1e-13)
        assert np.allclose(ta.ad(p.Y, Z), p.eps ** (-l) * Z, atol=1e-13)


def test_z_index_checks():
    p = ta.heisenberg_pair(3, 1)
    for k, l in [(0, 1), (1, 4), (4, 4)]:
        with pytest.raises(ParameterError):
            ta.z_basis(p, k, l)
        with pytest.raises(ParameterError):
            ta.z_dual(p, k, l)


def test_ad_singular():
    with pytest.raises(DegeneracyError):
        ta.ad(np.zeros((2, 2)), np.eye(2))


def test_vec_is_column_major():
    Z = np.arange(9).reshape(3, 3)
    v = ta.vec(Z)
    assert v[1] == Z[1, 0] and v[3] == Z[0, 1]
    assert np.array_equal(ta.unvec(v, 3), Z)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_operator_form_is_kron(n):
    A, B, C = random_matrix(n, 1), random_matrix(n, 2), random_matrix(n, 3)
    assert np.allclose(ta.to_operator(ta.simple_tensor(A, B)), np.kron(A, B))
    assert np.allclose(ta.to_operator(ta.simple_tensor(A, B, C)), np.kron(np.kron(A, B), C))
    t = random_tensor(n)
    assert np.array_equal(ta.from_operator(ta.to_operator(t), n), t)
    s = random_tensor(n, 3)
    assert np.array_equal(ta.from_operator(ta.to_operator(s), n, 3), s)


def test_from_operator_shape_check():
    with pytest.raises(ParameterError):
        ta.from_operator(np.eye(5), 2)


@pytest.mark.parametrize("n", [2, 3])
def test_can_of_simple_tensor(n):
    A, B, Z = random_matrix(n, 1), random_matrix(n, 2), random_matrix(n, 3)
    L = ta.can(ta.simple_tensor(A, B))
    assert np.allclose(ta.apply_endo(L, Z), np.trace(A @ Z) * B)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(0, 10**6))
def test_can_round_trip(n, seed):
    t = random_tensor(n, seed=seed)
    assert np.array_equal(ta.can_inv(ta.can(t)), t)
    L = random_tensor(n, seed=seed + 1).reshape(n * n, n * n)
    assert np.array_equal(ta.can(ta.can_inv(L)), L)


def test_can_inv_shape_check():
    with pytest.raises(ParameterError):
        ta.can_inv(np.eye(3))


def test_can_of_identity_is_trace_map():
    n = 3
    Z = random_matrix(n)
    assert np.allclose(ta.apply_endo(ta.can(ta.identity_tensor(n)), Z), np.trace(Z) * np.eye(n))


def test_embeddings():
    n = 2
    A, B = random_matrix(n, 1), random_matrix(n, 2)
    I = np.eye(n)
    t = ta.simple_tensor(A, B)
    assert np.allclose(ta.embed(t, 12), ta.simple_tensor(A, B, I))
    assert np.allclose(ta.embed(t, 13), ta.simple_tensor(A, I, B))
    assert np.allclose(ta.embed(t, "23"), ta.simple_tensor(I, A, B))
    with pytest.raises(ParameterError):
        ta.embed(t, 21)


@pytest.mark.parametrize("n", [2, 3])
def test_products(n):
    s, t, u = random_tensor(n, 3, 1), random_tensor(n, 3, 2), random_tensor(n, 3, 3)
    assert np.allclose(ta.three_mul(ta.three_mul(s, t), u), ta.three_mul(s, ta.three_mul(t, u)))
    A, B, C, D = (random_matrix(n, i) for i in range(4))
    assert np.allclose(ta.two_mul(ta.simple_tensor(A, B), ta.simple_tensor(C, D)),
                       ta.simple_tensor(A @ C, B @ D))
    assert np.allclose(ta.commutator(s, t), ta.three_mul(s, t) - ta.three_mul(t, s))
    with pytest.raises(ParameterError):
        ta.two_mul(random_tensor(2), random_tensor(3))


def test_leg_maps():
    A, B = random_matrix(3, 1), random_matrix(3, 2)
    t = ta.simple_tensor(A, B)
    assert np.allclose(ta.swap_legs(t), ta.simple_tensor(B, A))
    assert np.allclose(ta.leg_transpose(t), ta.simple_tensor(A.T, B.T))
    assert np.array_equal(ta.swap_legs(ta.swap_legs(t)), t)
    assert np.array_equal(ta.leg_transpose(ta.leg_transpose(t)), t)


def test_partial_trace_and_projection():
    n = 3
    A, B = random_matrix(n, 1), random_matrix(n, 2)
    t = ta.simple_tensor(A, B)
    assert np.allclose(ta.partial_trace(t, 1), np.trace(A) * B)
    assert np.allclose(ta.partial_trace(t, 2), np.trace(B) * A)
    p = ta.sl_project(random_tensor(n))
    assert np.allclose(ta.partial_trace(p, 1), 0, atol=1e-13)
    assert np.allclose(ta.partial_trace(p, 2), 0, atol=1e-13)
    assert np.allclose(ta.sl_project(p), p)
    assert np.allclose(ta.sl_project(ta.identity_tensor(n)), 0)
    with pytest.raises(ParameterError):
        ta.partial_trace(t, 3)


def test_tensor_shape_validation():
    with pytest.raises(ParameterError):
        ta.swap_legs(np.zeros((2, 2, 2)))
    with pytest.raises(ParameterError):
        ta.trace_pairing(np.eye(2), np.eye(3))
