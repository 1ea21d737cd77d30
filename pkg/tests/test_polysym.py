from itertools import product

import pytest
from hypothesis import given, strategies as st

from spincms import finite as fin
from spincms import fock
from spincms import polysym as ps
from spincms.errors import DimensionMismatch
from spincms.scalars import SYMBOLIC
from spincms.suites import gamma, polysym_basis, polysym_residual, vector_polysym_basis, weights

WEIGHTS = [(1,), (2,), (3,), (1, 1), (2, 1), (1, 2)]


def test_power_sum_expansion():
    F = ps.PolysymElement.p((2, 1), 2, 1)
    assert str(ps.expand_powersums(F)) == "x[1,2]^2 + x[1,1]^2"
    assert ps.PolysymElement.p((2, 1), 0, 1) == ps.PolysymElement.one((2, 1)).scale(2)


def test_gamma_of_power_sum():
    # p_{1,1} at weight (1,1): x_i for the slot i holding spin 1
    g = gamma(ps.PolysymElement.p((1, 1), 1, 1), (1, 1))
    want = fin.TensorState(2, 2, SYMBOLIC, {((1, 2), (1, 0)): 1, ((2, 1), (0, 1)): 1})
    assert g == want


@pytest.mark.parametrize("lam", WEIGHTS)
def test_iota_then_symmetrize(lam):
    N = sum(lam)
    for F in polysym_basis(lam, 2, SYMBOLIC):
        for i in range(1, N + 1):
            assert ps.gamma_lambda_i(i, ps.iota_lambda(F)) == gamma(F, lam)


@pytest.mark.parametrize("lam", WEIGHTS)
def test_dunkl_intertwined(lam):
    N = sum(lam)
    for u in vector_polysym_basis(lam, 2, SYMBOLIC):
        for i in range(1, N + 1):
            assert ps.gamma_lambda_i(i, ps.D_fin_apply(u)) == fin.heckman_dunkl_apply(i, ps.gamma_lambda_i(i, u))


@pytest.mark.parametrize("lam", [(2, 1), (1, 2), (1, 1)])
def test_averaging_intertwined(lam):
    N = sum(lam)
    for u in vector_polysym_basis(lam, 2, SYMBOLIC):
        for a, b in product((1, 2), repeat=2):
            if lam[b - 1] == 0:
                continue
            tgt = tuple(l + (c == a) - (c == b) for c, l in enumerate(lam, start=1))
            rhs = sum((fin.gl_action(a, b, i, ps.gamma_lambda_i(i, u)) for i in range(1, N + 1)),
                      fin.TensorState(N, 2))
            assert gamma(ps.E_ab_fin_apply(a, b, u), tgt) == rhs


@pytest.mark.parametrize("lam", [(2, 1), (3,)])
def test_gamma_equivariance(lam):
    N = sum(lam)
    for u in vector_polysym_basis(lam, 2, SYMBOLIC):
        for i, j in product(range(1, N + 1), repeat=2):
            if i != j:
                assert fin.permutation_apply("sigma", i, j, ps.gamma_lambda_i(i, u)) == ps.gamma_lambda_i(j, u)


@pytest.mark.parametrize("rational", [False, True])
def test_yangian_mode_matches_finite(rational):
    lam = (1, 1)
    for F in polysym_basis(lam, 2, SYMBOLIC):
        G = gamma(F, lam)
        for k in range(3):
            lhs = gamma(ps.t_ab_k_fin(1, 2, k, F, rational=rational), (2, 0))
            assert lhs == fin.yangian_finite_mode(1, 2, k, G, rational=rational)


@given(st.sampled_from(WEIGHTS), st.integers(0, 3))
def test_fock_hamiltonians_project_to_finite(lam, g):
    beta = SYMBOLIC.beta
    for F in fock.graded_basis(g, len(lam)):
        v = gamma(ps.pi_lambda(lam, F), lam)
        h1 = gamma(ps.pi_lambda(lam, fock.hamiltonian_H1_apply(F)), lam)
        assert h1 == fin.hamiltonian_Hn_apply(1, v)
        h = gamma(ps.pi_lambda(lam, fock.hamiltonian_H_apply(F, corrected=True)), lam)
        assert h == fin.hamiltonian_Hn_apply(2, v) - fin.hamiltonian_Hn_apply(1, v).scale(beta)


def test_tau_drops_one_particle():
    F = ps.PolysymElement.p((2, 1), 2, 1)
    assert ps.tau_a(1, F).weight() == (1, 1)
    with pytest.raises(DimensionMismatch):
        ps.tau_a(2, ps.tau_a(2, F))


def test_weights_enumeration():
    assert weights(2, 2) == [(0, 2), (1, 1), (2, 0)]
