"""Named verification suites and their structured reports.

Each suite runs a grid of exact checks and returns check records
``{name, params, status, residual_terms}``; a record passes only when the
residual is exactly zero.  Records are sorted by name and parameters so the
report is byte-identical for a fixed configuration.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction
from itertools import product as iproduct

from . import classical as cl
from . import finite as fin
from . import fock
from . import polysym as ps
from . import yangian as yg
from .errors import InvalidConfig, UnknownSuite
from .scalars import ScalarField
from .sparse import SparsePoly


@dataclass
class RunConfig:
    """Parameters of a suite run; ``None`` means the suite's default."""

    suite: str
    s: int | None = None
    n: int | None = None
    degree: int | None = None
    grade: int | None = None
    beta: str = "sym"
    lam: str = "sym"
    mode_cutoff: int | None = None
    zmax: int | None = None
    trials: int | None = None
    seed: int = 0
    out: str | None = None
    timing: bool = False

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("timing")
        return d


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidConfig(f"not a rational number: {text!r}") from None


def field_from_config(cfg: RunConfig) -> ScalarField:
    beta = None if cfg.beta in (None, "sym") else parse_rational(cfg.beta)
    lam = None
    if cfg.lam not in (None, "sym"):
        lam = [parse_rational(t) for t in cfg.lam.split(",") if t.strip()]
        if not lam:
            raise InvalidConfig("empty lambda list")
    return ScalarField.get(beta, lam)


# ---------------------------------------------------------------------------
# report assembly


class Collector:
    def __init__(self, timing: bool):
        self.records: list = []
        self.timing = timing

    def add(self, name: str, params: dict, residual: int, status: str | None = None,
            note: str | None = None, elapsed: float | None = None) -> None:
        if status is None:
            status = "pass" if residual == 0 else "fail"
        rec = {"name": name, "params": params, "status": status, "residual_terms": residual}
        if note:
            rec["note"] = note
        if self.timing and elapsed is not None:
            rec["wall_time"] = round(elapsed, 3)
        self.records.append(rec)

    def run(self, name: str, params: dict, fn, note: str | None = None) -> None:
        t = time.perf_counter()
        residual = fn()
        self.add(name, params, residual, note=note, elapsed=time.perf_counter() - t)

    def skip(self, name: str, params: dict, note: str) -> None:
        self.add(name, params, 0, status="skipped", note=note)


def _sort_key(rec: dict) -> tuple:
    return (rec["name"], json.dumps(rec["params"], sort_keys=True))


def run_suite(cfg: RunConfig) -> dict:
    """Run one suite and return the report (config echo, records, summary)."""
    fn = SUITES.get(cfg.suite)
    if fn is None:
        raise UnknownSuite(f"unknown suite {cfg.suite!r}; choose from {', '.join(sorted(SUITES))}")
    for key in ("s", "n", "degree", "grade", "mode_cutoff", "zmax", "trials"):
        v = getattr(cfg, key)
        if v is not None and v < 1 and not (key in ("degree", "grade") and v == 0):
            raise InvalidConfig(f"{key} must be at least 1")
    fld = field_from_config(cfg)
    col = Collector(cfg.timing)
    fn(cfg, fld, col)
    records = sorted(col.records, key=_sort_key)
    counts = {st: sum(1 for r in records if r["status"] == st) for st in ("pass", "fail", "skipped")}
    return {"config": cfg.echo(), "records": records, "summary": counts,
            "ok": counts["fail"] == 0}


def report_lines(report: dict) -> list:
    """The report as JSON lines: config, one line per record, summary."""
    lines = [json.dumps({"config": report["config"]}, sort_keys=True)]
    lines += [json.dumps(r, sort_keys=True) for r in report["records"]]
    lines.append(json.dumps({"summary": report["summary"], "ok": report["ok"]}, sort_keys=True))
    return lines


SUITES: dict = {}


def suite(name: str):
    def deco(fn):
        SUITES[name] = fn
        return fn
    return deco


def _opt(v, default):
    return default if v is None else v


def _need_beta(fld: ScalarField, what: str) -> None:
    if fld.beta_value is not None and fld.beta_value == 0:
        raise InvalidConfig(f"{what} needs beta to be invertible")


def _need_symbolic_lam(fld: ScalarField, what: str) -> None:
    if not fld.symbolic_lam:
        raise InvalidConfig(f"{what} projects lam to particle counts and needs symbolic lam")


def _nterms(x) -> int:
    return len(x.terms)


# ---------------------------------------------------------------------------
# residual helpers for the polysymmetric side


def polysym_residual(F, G) -> int:
    """Number of explicit-variable terms of F - G, weight by weight."""
    tot = 0
    for lab in F.labels() | G.labels():
        f = F._new({k: c for k, c in F.terms.items() if k[0] == lab})
        g = G._new({k: c for k, c in G.terms.items() if k[0] == lab})
        tot += len((ps.expand_powersums(f) - ps.expand_powersums(g)).terms)
    return tot


def vector_residual(u: ps.VectorPolysym, w: ps.VectorPolysym) -> int:
    if u.weight != w.weight:
        raise InvalidConfig("vector weights differ")
    return sum(polysym_residual(a, b) for a, b in zip(u.comps, w.comps) if a is not None)


def gamma(F: ps.PolysymElement, weight) -> fin.TensorState:
    return ps.gamma_lambda(ps.expand_powersums(F, tuple(weight)), weight)


def weights(N: int, s: int) -> list:
    """All lambda in Z_{>=0}^s with |lambda| = N, in lexicographic order."""
    return sorted(w for w in iproduct(range(N + 1), repeat=s) if sum(w) == N)


def polysym_basis(weight: tuple, max_grade: int, fld: ScalarField) -> list:
    """p-monomials of grade <= max_grade using only colours present in ``weight``."""
    s = len(weight)
    out = []
    for g in range(max_grade + 1):
        for pm in fock.colored_partitions(g, s):
            if all(weight[a - 1] > 0 for (_, a), _ in pm):
                out.append(ps.PolysymElement.from_poly(weight, {pm: 1}, fld))
    return out


def vector_polysym_basis(weight: tuple, max_degree: int, fld: ScalarField) -> list:
    """Vectors with one component z^j * (p-monomial), j + grade <= max_degree."""
    s = len(weight)
    out = []
    for c in range(1, s + 1):
        if weight[c - 1] == 0:
            continue
        w = list(weight)
        w[c - 1] -= 1
        w = tuple(w)
        for j in range(max_degree + 1):
            for F in polysym_basis(w, max_degree - j, fld):
                comp = F.with_aux(("z",)).mul_aux({"z": j})
                comps = [comp if d == c else None for d in range(1, s + 1)]
                out.append(ps.VectorPolysym(weight, comps, fld))
    return out


def vector_fock_basis(s: int, max_degree: int, fld: ScalarField) -> list:
    """Vector Fock elements with one component z^j * (p-monomial) in the sector -e_c."""
    out = []
    for c in range(1, s + 1):
        nu = tuple(-1 if d == c else 0 for d in range(1, s + 1))
        for j in range(max_degree + 1):
            for g in range(max_degree - j + 1):
                for F in fock.graded_basis(g, s, fld, nu):
                    comps = []
                    for d in range(1, s + 1):
                        if d == c:
                            comps.append(F.with_aux(("z",)).mul_aux({"z": j}))
                        else:
                            comps.append(fock.FockElement(s, fld, aux=("z",)))
                    out.append(fock.VectorFock(comps))
    return out


def fock_basis(s: int, max_grade: int, fld: ScalarField, nu=None) -> list:
    return [x for g in range(max_grade + 1) for x in fock.graded_basis(g, s, fld, nu)]


# ---------------------------------------------------------------------------
# finite model


@suite("hecke")
def suite_hecke(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """Degenerate affine Hecke relations and commutativity of the d_i on random states."""
    nmax, smax, deg = _opt(cfg.n, 4), _opt(cfg.s, 3), _opt(cfg.degree, 3)
    trials = _opt(cfg.trials, 6)
    rng = random.Random(cfg.seed)
    beta = fld.beta
    for N in range(2, nmax + 1):
        for s in range(1, smax + 1):
            states = [fin.random_state(rng, N, s, deg, 3, fld) for _ in range(trials)]
            p = {"N": N, "s": s, "degree": deg, "states": trials}

            def exchange():
                r = 0
                for v in states:
                    for i in range(1, N + 1):
                        for j in range(1, N + 1):
                            if i != j:
                                lhs = fin.permutation_apply("K", i, j, fin.heckman_dunkl_apply(i, v))
                                rhs = fin.heckman_dunkl_apply(j, fin.permutation_apply("K", i, j, v))
                                r += _nterms(lhs - rhs)
                return r

            def commutator():
                r = 0
                for v in states:
                    for i in range(1, N + 1):
                        for j in range(i + 1, N + 1):
                            D = fin.heckman_dunkl_apply
                            lhs = D(i, D(j, v)) - D(j, D(i, v))
                            Kv = fin.permutation_apply("K", i, j, v)
                            rhs = (D(j, Kv) - D(i, Kv)).scale(beta)
                            r += _nterms(lhs - rhs)
                return r

            def d_commute():
                r = 0
                for v in states:
                    d = {i: fin.dunkl_d_apply(i, v) for i in range(1, N + 1)}
                    for i in range(1, N + 1):
                        for j in range(i + 1, N + 1):
                            r += _nterms(fin.dunkl_d_apply(i, d[j]) - fin.dunkl_d_apply(j, d[i]))
                return r

            def d_forms():
                return sum(_nterms(fin.dunkl_d_apply(i, v, "direct") - fin.dunkl_d_apply(i, v, "hecke"))
                           for v in states for i in range(1, N + 1))

            col.run("hecke_exchange", p, exchange)
            col.run("hecke_commutator", p, commutator)
            col.run("dunkl_d_commute", p, d_commute)
            col.run("dunkl_d_two_forms", p, d_forms)


def _sum_d(v: fin.TensorState, power: int) -> fin.TensorState:
    out = v.zero()
    for i in range(1, v.N + 1):
        w = v
        for _ in range(power):
            w = fin.dunkl_d_apply(i, w)
        out = out + w
    return out


def finite_H_minus_d(v: fin.TensorState) -> fin.TensorState:
    """H v - sum_i (d_i^2 - beta d_i) v."""
    b = v.field.beta
    return fin.hamiltonian_H_apply(v) - _sum_d(v, 2) + _sum_d(v, 1).scale(b)


def finite_H_minus_d_shifted(v: fin.TensorState) -> fin.TensorState:
    """H v - [sum d_i^2 - beta (N-1) sum d_i + beta^2 N(N-1)(N-2)/6] v."""
    b = v.field.beta
    N = v.N
    rhs = _sum_d(v, 2) - _sum_d(v, 1).scale(b * (N - 1)) + v.scale(b * b * Fraction(N * (N - 1) * (N - 2), 6))
    return fin.hamiltonian_H_apply(v) - rhs


def _casimir2(v, s):
    r = range(1, s + 1)
    out = v.zero()
    for a in r:
        for c in r:
            out = out + fin.gl_action(a, c, "global", fin.gl_action(c, a, "global", v))
    return out


def finite_H1_identity(v: fin.TensorState) -> fin.TensorState:
    """H_1 - [sum D_i + (beta/2) sum E^{ab}E^{ba} - (beta/2) s N]."""
    b = v.field.beta
    N, s = v.N, v.s
    SD = sum((fin.heckman_dunkl_apply(i, v) for i in range(1, N + 1)), v.zero())
    rhs = SD + _casimir2(v, s).scale(b / 2) - v.scale(b * s * N / 2)
    return fin.hamiltonian_Hn_apply(1, v) - rhs


def finite_H2_identity(v: fin.TensorState) -> fin.TensorState:
    """H_2 against the expression in D_i, E_i^{ab} and the global gl_s action."""
    b = v.field.beta
    N, s = v.N, v.s
    r = range(1, s + 1)
    D = fin.heckman_dunkl_apply
    SD = sum((D(i, v) for i in range(1, N + 1)), v.zero())
    SD2 = sum((D(i, D(i, v)) for i in range(1, N + 1)), v.zero())
    E = fin.gl_action
    EEE = v.zero()
    for a in r:
        for c in r:
            for d in r:
                EEE = EEE + E(a, c, "global", E(c, d, "global", E(d, a, "global", v)))
    mix = v.zero()
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            Dj = D(j, v)
            for a in r:
                for c in r:
                    mix = mix + E(a, c, i, E(c, a, j, Dj))
    rhs = (SD2 + mix.scale(b) - SD.scale(b * s) + EEE.scale(b * b / 3)
           - _casimir2(v, s).scale(2 * s * b * b / 3) + v.scale(b * b * (2 * s * s + N - 1) * N / 6))
    return fin.hamiltonian_Hn_apply(2, v) - rhs


@suite("dunkl-commute")
def suite_dunkl_commute(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """Finite Hamiltonians: the relation to the d_i, commutativity, Yangian symmetry."""
    nmax, smax, deg = _opt(cfg.n, 3), _opt(cfg.s, 2), _opt(cfg.degree, 3)
    invertible = not (fld.beta_value is not None and fld.beta_value == 0)
    for N in range(1, nmax + 1):
        for s in range(1, smax + 1):
            B = fin.invariant_basis(N, s, deg, fld)
            p = {"N": N, "s": s, "degree": deg, "basis": len(B)}
            col.run("H_equals_sum_d2_minus_beta_d", p,
                    lambda: sum(_nterms(finite_H_minus_d(v)) for v in B))
            col.run("H_equals_shifted_d_polynomial", p,
                    lambda: sum(_nterms(finite_H_minus_d_shifted(v)) for v in B))
            col.run("H1_spin_particle_identity", p, lambda: sum(_nterms(finite_H1_identity(v)) for v in B))
            col.run("H2_spin_particle_identity", p, lambda: sum(_nterms(finite_H2_identity(v)) for v in B))
            col.run("K_equals_P_on_invariants", p, lambda: sum(
                _nterms(fin.permutation_apply("K", i, j, v) - fin.permutation_apply("P", i, j, v))
                for v in B for i in range(1, N + 1) for j in range(i + 1, N + 1)))
            col.run("Hn_output_invariant", p, lambda: sum(
                0 if fin.hamiltonian_Hn_apply(n, v).is_invariant() else 1 for v in B for n in (1, 2)))
            col.run("H1_H2_commute", p, lambda: sum(_nterms(
                fin.hamiltonian_Hn_apply(1, fin.hamiltonian_Hn_apply(2, v))
                - fin.hamiltonian_Hn_apply(2, fin.hamiltonian_Hn_apply(1, v))) for v in B))
            if not invertible:
                col.skip("Hn_commute_with_yangian", p, "beta = 0")
                continue

            def yangian_commute():
                r = 0
                for v in B:
                    for a, b in iproduct(range(1, s + 1), repeat=2):
                        for k in (0, 1):
                            tv = fin.yangian_finite_mode(a, b, k, v)
                            for n in (1, 2):
                                lhs = fin.hamiltonian_Hn_apply(n, tv)
                                rhs = fin.yangian_finite_mode(a, b, k, fin.hamiltonian_Hn_apply(n, v))
                                r += _nterms(lhs - rhs)
                return r

            col.run("Hn_commute_with_yangian", p, yangian_commute)


# ---------------------------------------------------------------------------
# finite polysymmetric diagram


@suite("diagram-finite")
def suite_diagram(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """Symmetrization maps intertwine iota, the Dunkl operators and the averaging."""
    _need_symbolic_lam(fld, "diagram-finite")
    nmax, smax, deg = _opt(cfg.n, 3), _opt(cfg.s, 2), _opt(cfg.degree, 3)
    for N in range(1, nmax + 1):
        for s in range(1, smax + 1):
            for lam in weights(N, s):
                FB = polysym_basis(lam, deg, fld)
                UB = vector_polysym_basis(lam, deg, fld)
                p = {"lambda": list(lam), "degree": deg}
                col.run("iota_symmetrization", p, lambda: sum(
                    _nterms(ps.gamma_lambda_i(i, ps.iota_lambda(F)) - gamma(F, lam))
                    for F in FB for i in range(1, N + 1)))
                col.run("dunkl_symmetrization", p, lambda: sum(
                    _nterms(ps.gamma_lambda_i(i, ps.D_fin_apply(u))
                            - fin.heckman_dunkl_apply(i, ps.gamma_lambda_i(i, u)))
                    for u in UB for i in range(1, N + 1)))

                def averaging(lam=lam, UB=UB, s=s, N=N):
                    r = 0
                    for u in UB:
                        for a, b in iproduct(range(1, s + 1), repeat=2):
                            if lam[b - 1] == 0:
                                continue
                            tgt = tuple(l + (1 if c == a else 0) - (1 if c == b else 0)
                                        for c, l in enumerate(lam, start=1))
                            lhs = gamma(ps.E_ab_fin_apply(a, b, u), tgt)
                            rhs = sum((fin.gl_action(a, b, i, ps.gamma_lambda_i(i, u))
                                       for i in range(1, N + 1)), fin.TensorState(N, s, fld))
                            r += _nterms(lhs - rhs)
                    return r

                col.run("averaging_symmetrization", p, averaging)
                col.run("gamma_equivariance", p, lambda: sum(
                    _nterms(fin.permutation_apply("sigma", i, j, ps.gamma_lambda_i(i, u))
                            - ps.gamma_lambda_i(j, u))
                    for u in UB for i in range(1, N + 1) for j in range(1, N + 1) if i != j))
                if fld.beta_value is not None and fld.beta_value == 0:
                    col.skip("yangian_symmetrization", p, "beta = 0")
                    continue

                def yangian(lam=lam, FB=FB, s=s):
                    r = 0
                    for F in FB:
                        G = gamma(F, lam)
                        for a, b in iproduct(range(1, s + 1), repeat=2):
                            if lam[b - 1] == 0:
                                continue
                            tgt = tuple(l + (1 if c == a else 0) - (1 if c == b else 0)
                                        for c, l in enumerate(lam, start=1))
                            for k in range(3):
                                lhs = gamma(ps.t_ab_k_fin(a, b, k, F), tgt)
                                r += _nterms(lhs - fin.yangian_finite_mode(a, b, k, G))
                    return r

                col.run("yangian_symmetrization", p, yangian)


# ---------------------------------------------------------------------------
# projections from the Fock space


def _pi_vec_residual(lam, u: fock.VectorFock, w: ps.VectorPolysym) -> int:
    return vector_residual(ps.pi_lambda_vector(lam, u), w)


@suite("prop3")
def suite_projection(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """The projections pi_lambda intertwine iota, D, E^{ab} and the Yangian modes."""
    _need_symbolic_lam(fld, "prop3")
    _need_beta(fld, "prop3")
    nmax, smax, deg = _opt(cfg.n, 3), _opt(cfg.s, 2), _opt(cfg.degree, 3)
    for s in range(1, smax + 1):
        FB = fock_basis(s, deg, fld)
        UB = vector_fock_basis(s, deg, fld)
        for N in range(1, nmax + 1):
            for lam in weights(N, s):
                p = {"lambda": list(lam), "degree": deg}

                def iota_pi(lam=lam, FB=FB):
                    r = 0
                    for F in FB:
                        piF = ps.pi_lambda(lam, F)
                        rhs = ps.pi_lambda_vector(lam, fock.iota_apply(F))
                        if piF.is_zero():
                            r += sum(polysym_residual(c, c.zero()) for c in rhs.comps if c is not None)
                        else:
                            r += vector_residual(ps.iota_lambda(piF), rhs)
                    return r

                col.run("iota_projection", p, iota_pi)
                col.run("dunkl_projection", p, lambda lam=lam, UB=UB: sum(
                    _pi_vec_residual(lam, fock.D_apply(u), ps.D_fin_apply(ps.pi_lambda_vector(lam, u)))
                    for u in UB))

                def averaging(lam=lam, UB=UB, s=s):
                    r = 0
                    for u in UB:
                        pu = ps.pi_lambda_vector(lam, u)
                        for a, b in iproduct(range(1, s + 1), repeat=2):
                            lhs = ps.pi_lambda(lam, fock.E_ab_apply(a, b, u))
                            r += polysym_residual(lhs, ps.E_ab_fin_apply(a, b, pu))
                    return r

                col.run("averaging_projection", p, averaging)

                def yangian(lam=lam, FB=FB, s=s):
                    r = 0
                    for F in FB:
                        piF = ps.pi_lambda(lam, F)
                        for a, b in iproduct(range(1, s + 1), repeat=2):
                            for k in range(3):
                                lhs = ps.pi_lambda(lam, fock.T_ab_k(a, b, k, F))
                                rhs = ps.t_ab_k_fin(a, b, k, piF) if not piF.is_zero() else lhs.zero()
                                r += polysym_residual(lhs, rhs)
                    return r

                col.run("yangian_projection", p, yangian)

                def zero_eval(lam=lam, FB=FB, s=s):
                    r = 0
                    for F in FB:
                        for a in range(1, s + 1):
                            if lam[a - 1] == 0:
                                continue
                            low = tuple(l - (1 if c == a else 0) for c, l in enumerate(lam, start=1))
                            piF = ps.pi_lambda(lam, F)
                            lhs = ps.tau_a(a, piF) if not piF.is_zero() else piF
                            r += polysym_residual(lhs, ps.pi_lambda(low, F))
                    return r

                col.run("zero_evaluation_projection", p, zero_eval)


# ---------------------------------------------------------------------------
# Fock space


@suite("yangian-explicit")
def suite_yangian_explicit(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """The composition E D^k iota against the explicit integrals for k = 0, 1."""
    _need_beta(fld, "yangian-explicit")
    smax, grade = _opt(cfg.s, 3), _opt(cfg.grade, 4)
    for s in range(1, smax + 1):
        for g in range(grade + 1):
            B = fock.graded_basis(g, s, fld)
            for k in (0, 1):
                col.run("T_composition_equals_explicit", {"s": s, "grade": g, "k": k}, lambda B=B, k=k, s=s: sum(
                    _nterms(fock.T_ab_k(a, b, k, F) - fock.T_ab_explicit(a, b, k, F))
                    for F in B for a in range(1, s + 1) for b in range(1, s + 1)))


@suite("rtt")
def suite_rtt(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """Generating-function RTT residuals in the finite (modes <= 2) and Fock (modes <= 1) reps."""
    _need_beta(fld, "rtt")
    nmax, smax = _opt(cfg.n, 3), _opt(cfg.s, 2)
    deg, grade = _opt(cfg.degree, 2), _opt(cfg.grade, 3)
    for s in range(1, smax + 1):
        for N in range(1, nmax + 1):
            rep = yg.FiniteRep(N, s, fld)
            B = rep.basis(deg)
            col.run("rtt_finite", {"N": N, "s": s, "degree": deg, "R": 2},
                    lambda rep=rep, B=B: yg.rtt_check(rep, B, 2)["residual_terms"])
        rep = yg.FockRep(s, fld)
        B = rep.basis(grade)
        col.run("rtt_fock", {"s": s, "grade": grade, "R": 1},
                lambda rep=rep, B=B: yg.rtt_check(rep, B, 1)["residual_terms"])


def _reps(cfg: RunConfig, fld: ScalarField, corrected: bool = False) -> list:
    nmax, smax = _opt(cfg.n, 3), _opt(cfg.s, 2)
    deg, grade = _opt(cfg.degree, 3), _opt(cfg.grade, 4)
    out = []
    for s in range(1, smax + 1):
        for N in range(1, nmax + 1):
            rep = yg.FiniteRep(N, s, fld)
            out.append((rep, rep.basis(deg), {"rep": "finite", "N": N, "s": s, "degree": deg}))
        rep = yg.FockRep(s, fld, corrected=corrected)
        out.append((rep, rep.basis(grade), {"rep": "fock", "s": s, "grade": grade}))
    return out


@suite("qdet")
def suite_qdet(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """Centrality of the displayed q-det modes and their agreement with the q-det expansion."""
    _need_beta(fld, "qdet")
    checks = [("qdet_centrality", yg.centrality_check, (2, "displayed")),
              ("qdet_centrality_corrected", yg.centrality_check, (2, "corrected")),
              ("qdet_closed_forms", yg.delta_form_check, ("displayed",)),
              ("qdet_closed_forms_corrected", yg.delta_form_check, ("corrected",))]
    for rep, B, p in _reps(cfg, fld):
        for name, check, args in checks:
            col.run(name, p, lambda rep=rep, B=B, check=check, args=args:
                    check(rep, B, *args)["residual_terms"])


def vacuum_constant_residual(s: int, fld: ScalarField, corrected: bool) -> int:
    """H applied to the vacuum against the finite value of H_2 - beta H_1 on 1, for N = 1..4.

    In the finite model d_i 1 = beta (i-1), so the value is
    beta^2 N(N-1)(N-2)/3; lam is specialized so that p0 = N.
    """
    vac = fock.FockElement.vacuum(s, fld)
    h = fock.hamiltonian_H_apply(vac, corrected=corrected)
    r = 0
    for N in range(1, 5):
        lam = (N,) + (0,) * (s - 1)
        got = ps.pi_lambda(lam, h)
        b = fld.beta
        v = fin.orbit_sum([1] * N, [0] * N, 1, fld)
        expect = _sum_d(v, 2) - _sum_d(v, 1).scale(b)
        c = expect.terms.get(((1,) * N, (0,) * N), fld.zero)
        want = ps.PolysymElement.from_poly(lam, {(): c}, fld)
        r += polysym_residual(got, want)
    return r


def fock_projection_residual(lam, F, n: int, corrected) -> fin.TensorState:
    """gamma pi_lambda of a Fock Hamiltonian minus its finite counterpart.

    n = 1 compares H_1; n = 2 compares H with the finite H_2 - beta H_1.
    """
    v = gamma(ps.pi_lambda(lam, F), lam)
    if n == 1:
        img, want = fock.hamiltonian_H1_apply(F), fin.hamiltonian_Hn_apply(1, v)
    else:
        img = fock.hamiltonian_H_apply(F, corrected=corrected)
        want = fin.hamiltonian_Hn_apply(2, v) - fin.hamiltonian_Hn_apply(1, v).scale(F.field.beta)
    return gamma(ps.pi_lambda(lam, img), lam) - want


@suite("hamiltonian-identities")
def suite_hamiltonian_identities(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """H_1, H_2 in terms of the q-det modes and the Yangian modes, both representations."""
    _need_beta(fld, "hamiltonian-identities")

    def identity(rep, B, form):
        return lambda: yg.hamiltonian_identity_check(rep, B, form)["residual_terms"]

    for rep, B, p in _reps(cfg, fld):
        col.run("hamiltonians_via_qdet", p, identity(rep, B, "displayed"))
        col.run("hamiltonians_via_modes", p, identity(rep, B, "modes"))
    for rep, B, p in _reps(cfg, fld, corrected=True):
        if rep.name == "finite":
            col.run("hamiltonians_via_qdet_corrected", p, identity(rep, B, "corrected"))
            continue
        q = dict(p, hamiltonian="corrected")
        col.run("hamiltonians_via_qdet_corrected", q, identity(rep, B, "corrected"))
        col.run("hamiltonians_via_modes_corrected", q, identity(rep, B, "modes"))
    if fld.symbolic_lam:
        deg = _opt(cfg.degree, 3)
        for s in range(1, _opt(cfg.s, 2) + 1):
            FB = fock_basis(s, deg, fld)
            for N in range(1, _opt(cfg.n, 3) + 1):
                for lam in weights(N, s):
                    p = {"lambda": list(lam), "grade": deg}
                    col.run("H1_projects_to_finite", p, lambda lam=lam, FB=FB: sum(
                        _nterms(fock_projection_residual(lam, F, 1, None)) for F in FB))
                    col.run("hamiltonian_projects_to_finite", p, lambda lam=lam, FB=FB: sum(
                        _nterms(fock_projection_residual(lam, F, 2, False)) for F in FB))
                    col.run("hamiltonian_projects_to_finite_corrected", p, lambda lam=lam, FB=FB: sum(
                        _nterms(fock_projection_residual(lam, F, 2, True)) for F in FB))
            col.run("hamiltonian_vacuum_value", {"s": s}, lambda s=s: vacuum_constant_residual(s, fld, False))
            col.run("hamiltonian_vacuum_value_corrected", {"s": s},
                    lambda s=s: vacuum_constant_residual(s, fld, True))


def _grade_sector_violations(outputs, grade: int, nu: tuple) -> int:
    bad = 0
    for (lab, pm, ax) in outputs.terms:
        g = fock.pmono_grade(pm) + (ax[0] if ax else 0)
        if g != grade or tuple(lab) != tuple(nu):
            bad += 1
    return bad


@suite("fock-hamiltonian-commute")
def suite_fock_hamiltonian(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """Grading and sectors of the Fock operators, [H_1, H] = 0, Yangian symmetry of both."""
    smax, grade = _opt(cfg.s, 2), _opt(cfg.grade, 5)
    for s in range(1, smax + 1):
        sectors = [(0,) * s] + ([tuple([1] + [0] * (s - 2) + [-1])] if s > 1 else [])
        for nu in sectors:
            for g in range(grade + 1):
                B = fock.graded_basis(g, s, fld, nu)
                p = {"s": s, "grade": g, "nu": list(nu)}

                def preserve(B=B, g=g, nu=nu, s=s):
                    bad = 0
                    for F in B:
                        bad += _grade_sector_violations(fock.hamiltonian_H1_apply(F), g, nu)
                        bad += _grade_sector_violations(fock.hamiltonian_H_apply(F), g, nu)
                        u = fock.iota_apply(F)
                        Du = fock.D_apply(u)
                        for c in range(1, s + 1):
                            shifted = tuple(x - (1 if d == c else 0) for d, x in enumerate(nu, start=1))
                            bad += _grade_sector_violations(u[c], g, shifted)
                            bad += _grade_sector_violations(Du[c], g, shifted)
                        for a, b in iproduct(range(1, s + 1), repeat=2):
                            tgt = tuple(x + (1 if d == a else 0) - (1 if d == b else 0)
                                        for d, x in enumerate(nu, start=1))
                            bad += _grade_sector_violations(fock.E_ab_apply(a, b, Du), g, tgt)
                    return bad

                col.run("grade_and_sector_preserved", p, preserve)
                col.run("H1_H_commute", p, lambda B=B: sum(_nterms(
                    fock.hamiltonian_H1_apply(fock.hamiltonian_H_apply(F))
                    - fock.hamiltonian_H_apply(fock.hamiltonian_H1_apply(F))) for F in B))
        if fld.beta_value is not None and fld.beta_value == 0:
            col.skip("hamiltonians_commute_with_yangian", {"s": s}, "beta = 0")
            continue
        B = fock_basis(s, min(grade, 3), fld)

        def yangian(B=B, s=s):
            r = 0
            for F in B:
                for a, b in iproduct(range(1, s + 1), repeat=2):
                    for k in (0, 1):
                        TF = fock.T_ab_k(a, b, k, F)
                        for H in (fock.hamiltonian_H1_apply, fock.hamiltonian_H_apply):
                            r += _nterms(H(TF) - fock.T_ab_k(a, b, k, H(F)))
            return r

        col.run("hamiltonians_commute_with_yangian", {"s": s, "grade": min(grade, 3)}, yangian)


@suite("scalar-h2")
def suite_scalar_h2(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """The one-colour closed form of H_2 against E D^2 iota."""
    grade = _opt(cfg.grade, 5)
    for g in range(grade + 1):
        B = fock.graded_basis(g, 1, fld)
        col.run("H2_closed_form_equals_pipeline", {"grade": g}, lambda B=B: sum(
            _nterms(fock.hamiltonian_H2_scalar_apply(F) - fock.moment_Sk(2, F)) for F in B))


# ---------------------------------------------------------------------------
# rational model


@suite("rational")
def suite_rational(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """Rational Dunkl operators: finite diagram, projections and the second Hamiltonian."""
    _need_symbolic_lam(fld, "rational")
    _need_beta(fld, "rational")
    nmax, smax, deg = _opt(cfg.n, 3), _opt(cfg.s, 2), _opt(cfg.degree, 3)
    for N in range(1, nmax + 1):
        for s in range(1, smax + 1):
            for lam in weights(N, s):
                FB = polysym_basis(lam, deg, fld)
                UB = vector_polysym_basis(lam, deg, fld)
                p = {"lambda": list(lam), "degree": deg}
                col.run("rational_dunkl_symmetrization", p, lambda UB=UB, N=N: sum(
                    _nterms(ps.gamma_lambda_i(i, ps.rational_D_fin_apply(u))
                            - fin.rational_dunkl_apply(i, ps.gamma_lambda_i(i, u)))
                    for u in UB for i in range(1, N + 1)))

                def yangian(lam=lam, FB=FB, s=s):
                    r = 0
                    for F in FB:
                        G = gamma(F, lam)
                        for a, b in iproduct(range(1, s + 1), repeat=2):
                            if lam[b - 1] == 0:
                                continue
                            tgt = tuple(l + (1 if c == a else 0) - (1 if c == b else 0)
                                        for c, l in enumerate(lam, start=1))
                            for k in range(3):
                                lhs = gamma(ps.t_ab_k_fin(a, b, k, F, rational=True), tgt)
                                r += _nterms(lhs - fin.yangian_finite_mode(a, b, k, G, rational=True))
                    return r

                col.run("rational_yangian_symmetrization", p, yangian)

                def moment(lam=lam, FB=FB, N=N):
                    r = 0
                    for F in FB:
                        G = gamma(F, lam)
                        rhs = sum((fin.rational_dunkl_apply(i, fin.rational_dunkl_apply(i, G))
                                   for i in range(1, N + 1)), G.zero())
                        r += _nterms(gamma(ps.moment_fin(2, F, rational=True), lam) - rhs)
                    return r

                col.run("rational_moment_symmetrization", p, moment)
    for s in range(1, smax + 1):
        FB = fock_basis(s, deg, fld)
        UB = vector_fock_basis(s, deg, fld)
        col.run("rational_H2_equals_moment", {"s": s, "grade": deg}, lambda FB=FB: sum(
            _nterms(fock.rational_H2_apply(F) - fock.rational_moment_Sk(2, F)) for F in FB))
        for N in range(1, nmax + 1):
            for lam in weights(N, s):
                p = {"lambda": list(lam), "degree": deg}
                col.run("rational_dunkl_projection", p, lambda lam=lam, UB=UB: sum(
                    _pi_vec_residual(lam, fock.rational_D_apply(u),
                                     ps.rational_D_fin_apply(ps.pi_lambda_vector(lam, u))) for u in UB))

                def yangian_pi(lam=lam, FB=FB, s=s):
                    r = 0
                    for F in FB:
                        piF = ps.pi_lambda(lam, F)
                        for a, b in iproduct(range(1, s + 1), repeat=2):
                            for k in range(3):
                                lhs = ps.pi_lambda(lam, fock.rational_T_ab_k(a, b, k, F))
                                rhs = (ps.t_ab_k_fin(a, b, k, piF, rational=True)
                                       if not piF.is_zero() else lhs.zero())
                                r += polysym_residual(lhs, rhs)
                    return r

                col.run("rational_yangian_projection", p, yangian_pi)
                col.run("rational_H2_projection", p, lambda lam=lam, FB=FB: sum(
                    polysym_residual(ps.pi_lambda(lam, fock.rational_H2_apply(F)),
                                     ps.moment_fin(2, ps.pi_lambda(lam, F), rational=True)
                                     if not ps.pi_lambda(lam, F).is_zero() else ps.pi_lambda(lam, F))
                    for F in FB))


# ---------------------------------------------------------------------------
# classical limit


def random_observable(rng: random.Random, s: int, nmodes: int, fld: ScalarField, nterms: int = 3):
    terms: dict = {}
    for _ in range(nterms):
        mono: dict = {}
        for _ in range(rng.randint(1, 3)):
            g = (rng.randint(-nmodes, nmodes), rng.randint(1, s))
            mono[g] = mono.get(g, 0) + 1
        m = tuple(sorted(mono.items()))
        terms[m] = terms.get(m, 0) + (rng.randint(-3, 3) or 1)
    return cl.ClassicalObservable(terms, fld, cl.UNBOUNDED)


def _bracket_axioms(rng, s, fld, trials) -> int:
    r = 0
    PB = cl.poisson_bracket
    for _ in range(trials):
        f, g, h = (random_observable(rng, s, 2, fld) for _ in range(3))
        r += len((PB(f, g) + PB(g, f)).terms)
        r += len((PB(f, g * h) - PB(f, g) * h - g * PB(f, h)).terms)
        r += len((PB(f, PB(g, h)) + PB(g, PB(h, f)) + PB(h, PB(f, g))).terms)
    return r


def _field_bracket(s: int, M: int, fld: ScalarField) -> int:
    """{phi_a(x), phi_b(y)} = delta_ab sum_n n (x/y)^n, compared mode by mode for |n| <= M."""
    r = 0
    for a, b in iproduct(range(1, s + 1), repeat=2):
        for n in range(-M, M + 1):
            for m in range(-M, M + 1):
                got = cl.poisson_bracket(cl.ClassicalObservable.alpha(n, a, fld, cl.UNBOUNDED),
                                         cl.ClassicalObservable.alpha(m, b, fld, cl.UNBOUNDED))
                want = n if (a == b and m == -n) else 0
                r += len((got - want).terms)
    return r


def _vertex_bracket(sysm: cl.ClassicalSystem) -> int:
    """{phi_a^-(x), V_b(y)} = -delta_ab (y/x)/(1 - y/x) V_b(y), at x^{-n} y^k for n, k <= M."""
    r = 0
    M = sysm.M
    for a, b in iproduct(range(1, sysm.s + 1), repeat=2):
        V = sysm.vertex(b, "y")
        for n in range(0, M + 1):
            alpha = sysm.alpha(-n, a)
            for k in range(0, M + 1):
                got = cl.poisson_bracket(alpha, V.coeff(k), M)
                want = sysm.obs({})
                if a == b and 1 <= n <= k:
                    want = V.coeff(k - n).scale(-1)
                r += len((got - want).terms)
    return r


def _conservation(sysm: cl.ClassicalSystem) -> int:
    c = sysm.obs({})
    for a in range(1, sysm.s + 1):
        for n in range(1, sysm.M + 1):
            c = c + sysm.alpha(-n, a) * sysm.alpha(n, a)
    H = sysm.hamiltonian()
    return len(sysm.flow(c).terms) + len(sysm.flow(H).terms)


def _lax_point_examples(sysm: cl.ClassicalSystem, K: int) -> int:
    """At alpha = 0 except alpha_{0,a} = c_a: L z^k = (k + sum c) z^k, M z^k = (k^2 + 2k sum c) z^k (k >= 1)."""
    cs = {a: 2 * a + 1 for a in range(1, sysm.s + 1)}
    C = sum(cs.values())
    vals = {}
    r = 0

    def at(c):
        gens = c.gens()
        return c.substitute({g: (cs[g[1]] if g[0] == 0 else 0) for g in gens})

    for k in range(0, K + 1):
        Lf = sysm.lax_apply("L", sysm.monomial(k))
        Mf = sysm.lax_apply("M", sysm.monomial(k))
        for e in range(0, sysm.M + k + 1):
            wantL = (k + C) if (e == k and k >= 1) else 0
            wantM = (k * k + 2 * k * C) if (e == k and k >= 1) else 0
            vals[(k, e)] = (at(Lf.coeff(e)), at(Mf.coeff(e)))
            r += len((vals[(k, e)][0] - wantL).terms) + len((vals[(k, e)][1] - wantM).terms)
    return r


@suite("classical-eom")
def suite_classical_eom(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """Bracket axioms, field brackets, the two routes to the equations of motion, conservation."""
    smax, Mmax = _opt(cfg.s, 2), _opt(cfg.mode_cutoff, 4)
    rng = random.Random(cfg.seed)
    trials = _opt(cfg.trials, 5)
    for s in range(1, smax + 1):
        col.run("poisson_axioms", {"s": s, "trials": trials}, lambda s=s: _bracket_axioms(rng, s, fld, trials))
        col.run("field_bracket_delta_prime", {"s": s, "M": Mmax}, lambda s=s: _field_bracket(s, Mmax, fld))
        for M in range(1, Mmax + 1):
            sysm = cl.ClassicalSystem(s, M, fld)
            p = {"s": s, "M": M}
            col.run("vertex_bracket", p, lambda sysm=sysm: _vertex_bracket(sysm))
            for form in (1, 2):
                col.run("eom_plus_two_routes", dict(p, form=form), lambda sysm=sysm, form=form: sum(
                    len(cl.compare_series(sysm.eom_bracket(a, "+"), sysm.eom_displayed(a, "+", form), -M, M))
                    for a in range(1, s + 1)))
            col.run("eom_minus_two_routes", p, lambda sysm=sysm: sum(
                len(cl.compare_series(sysm.eom_bracket(a, "-"), sysm.eom_displayed(a, "-"), -M, M))
                for a in range(1, s + 1)))
            col.run("conservation", p, lambda sysm=sysm: _conservation(sysm))


@suite("classical-lax")
def suite_classical_lax(cfg: RunConfig, fld: ScalarField, col: Collector) -> None:
    """dL/dt, [M, L] and the common expression on z^k, k <= K."""
    smax, Mmax, K = _opt(cfg.s, 2), _opt(cfg.mode_cutoff, 4), _opt(cfg.zmax, 2)
    for s in range(1, smax + 1):
        for M in range(1, Mmax + 1):
            sysm = cl.ClassicalSystem(s, M, fld)
            p = {"s": s, "M": M, "K": K}
            res = {}

            def sides(sysm=sysm):
                if not res:
                    res.update(cl.lax_check(sysm, K))
                return res

            for key in ("dL-vs-comm", "dL-vs-common", "comm-vs-common"):
                col.run(f"lax_{key.replace('-', '_')}", p,
                        lambda key=key, sides=sides: sum(len(v[key]) for v in sides().values()))
            col.run("lax_zero_mode_point", p, lambda sysm=sysm: _lax_point_examples(sysm, K))
