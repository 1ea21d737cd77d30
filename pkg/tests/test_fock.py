from itertools import product

import pytest
from hypothesis import given, strategies as st

from spincms import fock
from spincms.errors import BetaZero, DimensionMismatch, WrongSpinCount
from spincms.scalars import SYMBOLIC, ScalarField

from .strategies import fock_element

beta = SYMBOLIC.beta
lam1 = SYMBOLIC.lam(1)


def p(n, a, s=1):
    return fock.FockElement.vacuum(s).mul_p(n, a)


@given(fock_element(2), st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 2), st.integers(1, 2))
def test_heisenberg_commutation(F, n, m, a, b):
    A = lambda w: fock.heisenberg_apply(n, a, w)
    B = lambda w: fock.heisenberg_apply(m, b, w)
    bracket = A(B(F)) - B(A(F))
    want = F.scale(n) if (a == b and n + m == 0) else F.zero()
    assert bracket == want


def test_zero_mode_is_sector_charge():
    F = fock.FockElement.vacuum(2, nu=(1, -1))
    assert fock.heisenberg_apply(0, 1, F) == F.scale(SYMBOLIC.lam(1) + 1)
    assert fock.heisenberg_apply(0, 2, F) == F.scale(SYMBOLIC.lam(2) - 1)


def test_vertex_substitution():
    # V_1(z) p_{2,1} = (p_{2,1} + z^2), moved to the sector with one particle fewer
    V = fock.vertex_apply(1, "z", p(2, 1))
    assert sorted(V.coeffs) == [0, 2]
    assert V.coeff(2) == fock.FockElement.vacuum(1, nu=(-1,))
    assert V.coeff(0) == fock.FockElement.vacuum(1, nu=(-1,)).mul_p(2, 1)


@given(fock_element(2, max_grade=3))
def test_iota_shifts_sector_and_keeps_grade(F):
    u = fock.iota_apply(F)
    for c in (1, 2):
        assert all(lab == tuple(-int(d == c) for d in (1, 2)) for (lab, _, _) in u[c].terms)
    # with deg z = 1 the substitution p_n -> p_n + z^n is homogeneous
    assert u.grades() <= F.grades()


@pytest.mark.parametrize("s,g", [(1, 3), (2, 2)])
def test_graded_basis_sizes(s, g):
    # number of s-coloured partitions
    counts = {(1, 3): 3, (2, 2): 5}
    assert len(fock.graded_basis(g, s)) == counts[(s, g)]


@pytest.mark.parametrize("s", [1, 2])
def test_hamiltonians_commute(s):
    for g in range(4):
        for F in fock.graded_basis(g, s):
            for corrected in (False, True):
                H = lambda w: fock.hamiltonian_H_apply(w, corrected=corrected)
                assert fock.hamiltonian_H1_apply(H(F)) == H(fock.hamiltonian_H1_apply(F))


@pytest.mark.parametrize("s,g", [(1, 3), (2, 2), (3, 1)])
def test_composition_matches_explicit_modes(s, g):
    for F in fock.graded_basis(g, s):
        for a, b, k in product(range(1, s + 1), range(1, s + 1), (0, 1)):
            assert fock.T_ab_k(a, b, k, F) == fock.T_ab_explicit(a, b, k, F)


def test_t0_diagonal_counts_particles():
    # T^{aa}_0 acts on the sector-nu vacuum as the particle count lam_a + nu_a
    F = fock.FockElement.vacuum(2)
    assert fock.T_ab_k(1, 1, 0, F) == F.scale(SYMBOLIC.lam(1))


@pytest.mark.parametrize("g", range(5))
def test_scalar_closed_form(g):
    for F in fock.graded_basis(g, 1):
        assert fock.hamiltonian_H2_scalar_apply(F) == fock.moment_Sk(2, F)


def test_scalar_closed_form_example():
    assert fock.hamiltonian_H2_scalar_apply(p(1, 1)) == p(1, 1).scale(1 - beta + beta * lam1)
    want = p(2, 1).scale(4 - 4 * beta + 2 * beta * lam1) + p(1, 1).mul_p(1, 1).scale(2 * beta)
    assert fock.hamiltonian_H2_scalar_apply(p(2, 1)) == want


@pytest.mark.parametrize("s,g", [(1, 3), (2, 2)])
def test_rational_second_hamiltonian(s, g):
    for F in fock.graded_basis(g, s):
        assert fock.rational_H2_apply(F) == fock.rational_moment_Sk(2, F)


def test_corrected_vacuum_value():
    vac = fock.FockElement.vacuum(1)
    assert fock.hamiltonian_H_apply(vac).is_zero()
    c = beta * beta * lam1 * (lam1 - 1) * (lam1 - 2) / 3
    assert fock.hamiltonian_H_apply(vac, corrected=True) == vac.scale(c)


def test_grade_preserved_by_hamiltonian():
    for F in fock.graded_basis(3, 2, nu=(1, -1)):
        img = fock.hamiltonian_H_apply(F)
        assert img.grades() <= {3}
        assert img.labels() <= {(1, -1)}


def test_errors():
    with pytest.raises(WrongSpinCount):
        fock.hamiltonian_H2_scalar_apply(fock.FockElement.vacuum(2))
    with pytest.raises(BetaZero):
        fock.T_ab_k(1, 1, 1, fock.FockElement.vacuum(1, ScalarField.get(0)))
    with pytest.raises(DimensionMismatch):
        fock.graded_basis(1, 2, nu=(0,))
