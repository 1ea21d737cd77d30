import random

import pytest
from hypothesis import given, strategies as st

from spincms import finite as fin
from spincms.errors import DimensionMismatch, IndexOutOfRange, NotInvariant
from spincms.scalars import SYMBOLIC, ScalarField
from spincms.suites import finite_H1_identity, finite_H2_identity, finite_H_minus_d, finite_H_minus_d_shifted

from .strategies import tensor_state

beta = SYMBOLIC.beta
D = fin.heckman_dunkl_apply
d = fin.dunkl_d_apply


@pytest.mark.parametrize("N,s", [(2, 1), (2, 2), (3, 1), (3, 2)])
@given(data=st.data())
def test_hecke_exchange(N, s, data):
    v = data.draw(tensor_state(N, s))
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            if i != j:
                K = lambda w: fin.permutation_apply("K", i, j, w)
                assert K(D(i, v)) == D(j, K(v))


@pytest.mark.parametrize("N,s", [(2, 1), (3, 2)])
@given(data=st.data())
def test_hecke_commutator(N, s, data):
    v = data.draw(tensor_state(N, s))
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            Kv = fin.permutation_apply("K", i, j, v)
            assert D(i, D(j, v)) - D(j, D(i, v)) == (D(j, Kv) - D(i, Kv)).scale(beta)


@pytest.mark.parametrize("N,s", [(2, 2), (3, 1), (3, 2)])
@given(data=st.data())
def test_dunkl_d_commute_and_forms_agree(N, s, data):
    v = data.draw(tensor_state(N, s))
    for i in range(1, N + 1):
        assert d(i, v, "direct") == d(i, v, "hecke")
        for j in range(i + 1, N + 1):
            assert d(i, d(j, v)) == d(j, d(i, v))


def test_dunkl_example():
    v = fin.TensorState.basis((1, 1), (1, 0))
    assert d(2, v).is_zero()
    # D_1 x_1 = x_1 + beta * (x_1 - x_2 K)(x_1) / (x_1 - x_2) picks up divided differences
    assert not D(1, v).is_zero()


@given(tensor_state(3, 2))
def test_permutations_are_involutions(v):
    for kind in ("K", "P", "sigma"):
        assert fin.permutation_apply(kind, 1, 3, fin.permutation_apply(kind, 1, 3, v)) == v


@given(tensor_state(3, 2))
def test_sigma_is_product_of_k_and_p(v):
    assert fin.permutation_apply("sigma", 1, 2, v) == fin.permutation_apply(
        "K", 1, 2, fin.permutation_apply("P", 1, 2, v))


def test_gl_action_commutator():
    v = fin.TensorState.basis((1, 2), (0, 1), s=2)
    E = lambda a, b, w: fin.gl_action(a, b, "global", w)
    lhs = E(1, 2, E(2, 1, v)) - E(2, 1, E(1, 2, v))
    assert lhs == E(1, 1, v) - E(2, 2, v)


@pytest.mark.parametrize("N,s", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2)])
def test_hamiltonian_identities_on_invariants(N, s):
    for v in fin.invariant_basis(N, s, 2):
        assert finite_H_minus_d_shifted(v).is_zero()
        assert finite_H1_identity(v).is_zero()
        assert finite_H2_identity(v).is_zero()
        assert fin.hamiltonian_Hn_apply(1, fin.hamiltonian_Hn_apply(2, v)) == \
            fin.hamiltonian_Hn_apply(2, fin.hamiltonian_Hn_apply(1, v))


def test_sum_d2_minus_beta_d_holds_only_at_two_particles():
    # H differs from sum(d_i^2 - beta d_i) by -beta (N-2) deg - beta^2 N(N-1)(N-2)/3.
    for v in fin.invariant_basis(2, 2, 2):
        assert finite_H_minus_d(v).is_zero()
    for N in (1, 3):
        for v in fin.invariant_basis(N, 1, 2):
            deg = max(sum(k) for (_, k) in v.terms)
            want = v.scale(-beta * (N - 2) * deg - beta * beta * N * (N - 1) * (N - 2) / 3)
            assert finite_H_minus_d(v) == want


def test_invariant_basis_and_outputs():
    B = fin.invariant_basis(3, 2, 2)
    assert all(v.is_invariant() for v in B)
    for v in B[:6]:
        fin.hamiltonian_Hn_apply(2, v).check_invariant()
        assert fin.permutation_apply("K", 1, 2, v) == fin.permutation_apply("P", 1, 2, v)


def test_yangian_modes_commute_with_hamiltonians():
    for v in fin.invariant_basis(2, 2, 2):
        for k in (0, 1):
            t = fin.yangian_finite_mode(1, 2, k, v)
            for n in (1, 2):
                assert fin.hamiltonian_Hn_apply(n, t) == fin.yangian_finite_mode(
                    1, 2, k, fin.hamiltonian_Hn_apply(n, v))


def test_seeded_random_states_are_reproducible():
    a = fin.random_state(random.Random(5), 3, 2, 3)
    b = fin.random_state(random.Random(5), 3, 2, 3)
    assert a == b and not a.is_zero()
    assert fin.random_invariant(random.Random(1), 3, 2, 2).is_invariant()


def test_errors():
    v = fin.TensorState.basis((1, 2), (0, 1), s=2)
    with pytest.raises(IndexOutOfRange):
        D(3, v)
    with pytest.raises(DimensionMismatch):
        v + fin.TensorState.basis((1,), (0,), s=2)
    with pytest.raises(NotInvariant):
        v.check_invariant()


def test_specialized_beta():
    f = ScalarField.get(2)
    v = fin.orbit_sum((1, 1), (1, 0), 1, f)
    assert finite_H_minus_d(v).is_zero()
