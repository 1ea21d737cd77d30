from fractions import Fraction

import pytest

from spincms import yangian as yg
from spincms.errors import BetaZero
from spincms.scalars import SYMBOLIC, ScalarField
from spincms.yangian import T, OpPoly


def test_oppoly_algebra():
    x = T(1, 2, 0) + T(2, 1, 0).scale(Fraction(1, 2))
    assert x.commutator(x).is_zero()
    assert not T(1, 2, 0).commutator(T(2, 1, 0)).is_zero()
    assert T(1, 1, -1).terms == OpPoly.identity().terms
    assert T(1, 2, -1).is_zero()
    assert (x ** 2).max_mode() == 0


def test_rtt_expansion_is_nontrivial():
    res = yg.rtt_series_residual(1, 2, 2, 1, 1)
    assert any(not op.is_zero() for op in res.values())


def test_qdet_single_spin_is_first_mode_series():
    # for s = 1 the q-determinant is T(u) itself
    for i in range(3):
        assert yg.qdet_delta_direct(i, 1).terms == T(1, 1, i).terms


@pytest.mark.parametrize("rep", [
    yg.FiniteRep(2, 2, SYMBOLIC), yg.FiniteRep(3, 1, SYMBOLIC), yg.FockRep(2, SYMBOLIC)],
    ids=["finite-N2-s2", "finite-N3-s1", "fock-s2"])
def test_rtt_and_centrality(rep):
    B = rep.basis(2)
    assert yg.rtt_check(rep, B, 1)["residual_terms"] == 0
    assert yg.centrality_check(rep, B, 2, "corrected")["residual_terms"] == 0
    assert yg.delta_form_check(rep, B, "corrected")["residual_terms"] == 0


@pytest.mark.parametrize("rep", [yg.FiniteRep(2, 2, SYMBOLIC), yg.FiniteRep(3, 2, SYMBOLIC)],
                         ids=["N2", "N3"])
def test_finite_hamiltonians_from_qdet(rep):
    B = rep.basis(2)
    for form in ("direct", "corrected"):
        assert yg.hamiltonian_identity_check(rep, B, form)["residual_terms"] == 0
    assert yg.hamiltonian_identity_check(rep, B, "modes")["residual_terms"] == 0


@pytest.mark.parametrize("s", [1, 2])
def test_fock_hamiltonians_from_qdet_need_corrected_h(s):
    good = yg.FockRep(s, SYMBOLIC, corrected=True)
    B = good.basis(2)
    assert yg.hamiltonian_identity_check(good, B, "corrected")["residual_terms"] == 0
    assert yg.hamiltonian_identity_check(good, B, "modes")["residual_terms"] == 0
    bad = yg.FockRep(s, SYMBOLIC)
    assert yg.hamiltonian_identity_check(bad, B, "modes")["residual_terms"] > 0


def test_displayed_second_delta_differs_from_expansion():
    rep = yg.FiniteRep(2, 2, SYMBOLIC)
    report = yg.delta_form_check(rep, rep.basis(1), "displayed")
    assert report["status"] == "fail"
    assert all(f["i"] == 2 for f in report["failures"])


def test_report_shape():
    rep = yg.FockRep(1, SYMBOLIC)
    r = yg.rtt_check(rep, rep.basis(1), 1)
    assert set(r) == {"check", "rep", "params", "residual_terms", "failures", "status"}
    assert r["status"] == "pass"


def test_beta_zero_rejected():
    with pytest.raises(BetaZero):
        yg.FiniteRep(2, 1, ScalarField.get(0))
    with pytest.raises(BetaZero):
        yg.FockRep(1, ScalarField.get(0))


def test_specialized_beta_rep():
    rep = yg.FiniteRep(2, 2, ScalarField.get(Fraction(1, 3)))
    assert yg.rtt_check(rep, rep.basis(1), 1)["residual_terms"] == 0
