"""Acceptance criteria 1-11, each at exact (zero) tolerance.

Every test appends one line to ``LINES``; the conftest hook prints them at the
end of the session.  Criteria 2 and 7 check displayed formulas that are
wrong as written; they are strict xfails, and the corrected formulas are
checked by the ``*_corrected`` tests next to them.
"""
from functools import lru_cache

import pytest

from spincms.cli import main
from spincms.suites import RunConfig, report_lines, run_suite

LINES: dict = {}


@lru_cache(maxsize=None)
def report(suite: str, **kw):
    return run_suite(RunConfig(suite, **kw))


def select(rep, names, where=None) -> list:
    return [r for r in rep["records"] if r["name"] in names and (where is None or where(r["params"]))]


def verdict(key, title: str, records: list, note: str = "") -> bool:
    bad = [r for r in records if r["status"] != "pass"]
    residual = sum(r["residual_terms"] for r in records)
    ok = bool(records) and not bad
    line = (f"criterion {key}: {'PASS' if ok else 'FAIL'} {title} "
            f"[{len(records) - len(bad)}/{len(records)} checks, residual terms {residual}]")
    if note:
        line += f" -- {note}"
    LINES[str(key)] = line
    return ok


def test_criterion_01_hecke():
    rep = report("hecke", n=4, s=3, degree=3, trials=6)
    recs = select(rep, {"hecke_exchange", "hecke_commutator", "dunkl_d_commute"})
    states = sum(r["params"]["states"] for r in recs if r["name"] == "hecke_exchange")
    assert states >= 50
    assert verdict(1, f"Hecke relations and [d_i,d_j]=0, N<=4, s<=3, degree<=3, {states} states", recs)


FINITE_2 = dict(n=3, s=2, degree=3)


@pytest.mark.xfail(strict=True, reason="H = sum(d_i^2 - beta d_i) fails for N != 2; "
                                       "the correct polynomial is tested by the corrected variant")
def test_criterion_02_finite_hamiltonian():
    rep = report("dunkl-commute", **FINITE_2)
    recs = select(rep, {"H_equals_sum_d2_minus_beta_d", "H1_spin_particle_identity", "H2_spin_particle_identity"})
    note = ("H - sum(d^2 - beta d) = -beta(N-2)deg - beta^2 N(N-1)(N-2)/3; "
            "spin/particle identities for H_1, H_2 hold")
    assert verdict(2, "H = sum(d_i^2 - beta d_i) and H_1/H_2 identities on invariants", recs, note)


def test_criterion_02_corrected():
    rep = report("dunkl-commute", **FINITE_2)
    recs = select(rep, {"H_equals_shifted_d_polynomial", "H1_spin_particle_identity",
                        "H2_spin_particle_identity", "H1_H2_commute", "Hn_commute_with_yangian"})
    assert verdict("2c", "H = sum d^2 - beta(N-1) sum d + beta^2 N(N-1)(N-2)/6 and H_1/H_2 identities", recs)


def test_criterion_03_diagram():
    rep = report("diagram-finite", **FINITE_2)
    recs = select(rep, {"iota_symmetrization", "dunkl_symmetrization", "averaging_symmetrization"})
    assert verdict(3, "symmetrization intertwines iota, D, E^{ab}; N<=3, s<=2, degree<=3", recs)


def test_criterion_04_projection():
    rep = report("prop3", **FINITE_2)
    recs = select(rep, {"iota_projection", "dunkl_projection", "averaging_projection", "yangian_projection"})
    assert verdict(4, "pi_lambda intertwines iota, D, E^{ab} and T^{ab}_k (k<=2)", recs)


def test_criterion_05_yangian_explicit():
    rep = report("yangian-explicit", s=3, grade=4)
    recs = select(rep, {"T_composition_equals_explicit"})
    assert verdict(5, "T^{ab}_0, T^{ab}_1 composition = explicit integrals, grade<=4, s<=3", recs)


def test_criterion_06_rtt():
    rep = report("rtt", n=3, s=2, degree=2, grade=3)
    recs = select(rep, {"rtt_finite", "rtt_fock"})
    assert verdict(6, "RTT residuals: finite r,t<=2 (N<=3, s<=2), Fock r,t<=1 (grade<=3, s<=2)", recs)


def _qdet_records(corrected: bool) -> list:
    suffix = "_corrected" if corrected else ""
    out = []
    for s in (1, 2, 3):
        rep = report("qdet", n=3 if s < 3 else 1, s=s, degree=3, grade=4)
        ham = report("hamiltonian-identities", n=3 if s < 3 else 1, s=s, degree=3, grade=4)
        keep = lambda p, s=s: p.get("s") == s and (p["rep"] == "fock" or s <= 2)
        out += select(rep, {"qdet_centrality" + suffix}, keep)
        out += select(ham, {"hamiltonians_via_qdet" + suffix}, keep)
    return out


@pytest.mark.xfail(strict=True, reason="the displayed Delta_2 and the displayed Fock Hamiltonian are wrong; "
                                       "the corrected forms are tested by the corrected variant")
def test_criterion_07_qdet():
    note = ("displayed Delta_2 has sum_{a>1} where sum_a is needed; displayed Fock H lacks "
            "-beta*grade + beta^2 p0(p0-1)(p0-2)/3")
    assert verdict(7, "q-det centrality and H_1, H_2 via Delta_i in both reps", _qdet_records(False), note)


def test_criterion_07_corrected():
    assert verdict("7c", "corrected Delta_2 central; H_1, H_2 via Delta_i with corrected Fock H",
                   _qdet_records(True))


def test_criterion_08_fock_hamiltonians():
    rep = report("fock-hamiltonian-commute", s=2, grade=5)
    recs = select(rep, {"grade_and_sector_preserved", "H1_H_commute"})
    recs += select(report("scalar-h2", grade=5), {"H2_closed_form_equals_pipeline"})
    assert verdict(8, "grade/sector preserved, [H_1,H]=0 (grade<=5, s<=2), scalar H_2 closed form", recs)


def test_criterion_09_rational():
    rep = report("rational", **FINITE_2)
    assert verdict(9, "rational D, E^{ab}, H_2: diagram, projection and oracle checks", rep["records"])


def test_criterion_10_classical():
    eom = report("classical-eom", s=2, mode_cutoff=4)
    lax = report("classical-lax", s=2, mode_cutoff=4, zmax=2)
    recs = select(eom, {"eom_plus_two_routes", "eom_minus_two_routes"})
    recs += select(lax, {"lax_dL_vs_comm", "lax_dL_vs_common", "lax_comm_vs_common"})
    assert verdict(10, "EOM two routes and Lax three-way, s<=2, M<=4, k<=2", recs)


DETERMINISM = [
    ("hecke", dict(n=3, s=2, degree=2, trials=3, seed=11)),
    ("classical-eom", dict(s=1, mode_cutoff=2, trials=3, seed=5)),
    ("prop3", dict(n=2, s=2, degree=2)),
    ("qdet", dict(n=2, s=1, degree=2, grade=2)),
]


def test_criterion_11_determinism(tmp_path, capsys):
    same = []
    for name, kw in DETERMINISM:
        a = "\n".join(report_lines(run_suite(RunConfig(name, **kw))))
        b = "\n".join(report_lines(run_suite(RunConfig(name, **kw))))
        same.append({"name": name, "params": kw, "status": "pass" if a == b else "fail", "residual_terms": 0})
    args = ["verify", "hecke", "--n", "3", "--s", "2", "--degree", "2", "--trials", "3", "--seed", "2"]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    capsys.readouterr()
    ok = (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()
    same.append({"name": "cli", "params": {}, "status": "pass" if ok else "fail", "residual_terms": 0})
    assert verdict(11, "same seed gives byte-identical reports", same)
