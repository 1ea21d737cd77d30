"""Yangian relations and quantum-determinant modes, for any representation.

Operators are noncommutative polynomials in the modes T^{ab}_k, stored as
``{word: Fraction}`` where a word is a tuple of ``(a, b, k)`` read as an
operator product (the rightmost letter acts first).  Series in the spectral
parameter are dicts ``{n: OpPoly}`` holding the coefficient of ``u^{-n}``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import comb

from .errors import BetaZero, DimensionMismatch
from . import finite as fin
from . import fock


class OpPoly:
    """Formal linear combination of mode words with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {w: Fraction(c) for w, c in (terms or {}).items() if c}

    @classmethod
    def identity(cls, c=1) -> "OpPoly":
        return cls({(): c})

    @classmethod
    def mode(cls, a: int, b: int, k: int) -> "OpPoly":
        """T^{ab}_k; mode -1 is delta_ab times the identity."""
        if k == -1:
            return cls.identity(1 if a == b else 0)
        return cls({((a, b, k),): 1})

    def __add__(self, other: "OpPoly") -> "OpPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return OpPoly(out)

    def __neg__(self):
        return OpPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "OpPoly":
        return OpPoly({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, OpPoly):
            return self.scale(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return OpPoly(out)

    __rmul__ = scale

    def __pow__(self, n: int) -> "OpPoly":
        out = OpPoly.identity()
        for _ in range(n):
            out = out * self
        return out

    def commutator(self, other: "OpPoly") -> "OpPoly":
        return self * other - other * self

    def is_zero(self) -> bool:
        return not self.terms

    def max_mode(self) -> int:
        return max((k for w in self.terms for _, _, k in w), default=-1)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            mono = "*".join(f"T[{a},{b}]_{k}" for a, b, k in w) or "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)


def _sum(items) -> OpPoly:
    out = OpPoly()
    for x in items:
        out = out + x
    return out


T = OpPoly.mode


# ---------------------------------------------------------------------------
# representations


class Representation:
    """Backing representation of the modes: a basis of states and the action."""

    name = "abstract"

    def __init__(self, s: int, field):
        self.s = s
        self.field = field
        bv = field.beta_value
        if bv is not None and bv == 0:
            raise BetaZero("Yangian modes need beta to be invertible")

    def mode(self, a: int, b: int, k: int, v):
        raise NotImplementedError

    def apply(self, op: OpPoly, v):
        """Apply an operator polynomial, sharing common word suffixes."""
        memo = {(): v}

        def word(w):
            r = memo.get(w)
            if r is None:
                a, b, k = w[0]
                r = self.mode(a, b, k, word(w[1:]))
                memo[w] = r
            return r

        out = v.zero() if hasattr(v, "zero") else None
        for w, c in op.terms.items():
            out = out + word(w).scale(self.field(c))
        return out

    def is_zero(self, v) -> bool:
        return v.is_zero()


class FiniteRep(Representation):
    """Invariant vector-valued polynomials with t^{ab}_{(k)} from the Dunkl operators."""

    name = "finite"

    def __init__(self, N: int, s: int, field, rational: bool = False):
        super().__init__(s, field)
        self.N = N
        self.rational = rational

    def mode(self, a, b, k, v):
        return fin.yangian_finite_mode(a, b, k, v, rational=self.rational)

    def basis(self, max_degree: int) -> list:
        return fin.invariant_basis(self.N, self.s, max_degree, self.field)

    def H(self, n: int, v):
        return fin.hamiltonian_Hn_apply(n, v)

    def p0(self, v):
        return v.scale(self.N)


class FockRep(Representation):
    """The Fock space with T^{ab}_k from the limit Dunkl operator."""

    name = "fock"

    def __init__(self, s: int, field, nu: tuple | None = None, corrected: bool = False):
        super().__init__(s, field)
        self.nu = tuple(nu) if nu is not None else (0,) * s
        self.corrected = corrected

    def mode(self, a, b, k, v):
        return fock.T_ab_k(a, b, k, v)

    def basis(self, max_grade: int) -> list:
        return [x for g in range(max_grade + 1) for x in fock.graded_basis(g, self.s, self.field, self.nu)]

    def H(self, n: int, v):
        """H_1 and H_2 = (H_2 - beta H_1) + beta H_1 from the displayed Fock Hamiltonians."""
        if n == 1:
            return fock.hamiltonian_H1_apply(v)
        if n == 2:
            return (fock.hamiltonian_H_apply(v, corrected=self.corrected)
                    + fock.hamiltonian_H1_apply(v).scale(self.field.beta))
        raise ValueError("only the first two Fock Hamiltonians are displayed")

    def p0(self, v):
        return fock._total_p0_mul(v, lambda p: p)


# ---------------------------------------------------------------------------
# generating series


def mode_series(a: int, b: int, order: int, shift=0) -> dict:
    """T^{ab}(u - shift) as ``{n: coefficient of u^{-n}}`` for n <= order.

    (u - c)^{-m} = sum_l C(m+l-1, l) c^l u^{-m-l}.
    """
    out = {0: OpPoly.identity(1 if a == b else 0)}
    c = Fraction(shift)
    for k in range(0, order):
        m = k + 1
        for l in range(0, order - m + 1):
            coef = comb(m + l - 1, l) * c ** l
            if coef:
                out[m + l] = out.get(m + l, OpPoly()) + T(a, b, k).scale(coef)
    return out


def series_mul(x: dict, y: dict, order: int) -> dict:
    out: dict = {}
    for i, p in x.items():
        for j, q in y.items():
            if i + j <= order:
                out[i + j] = out.get(i + j, OpPoly()) + p * q
    return out


def _perm_sign(p: tuple) -> int:
    sign, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, L = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            L += 1
        if L % 2 == 0:
            sign = -sign
    return sign


def qdet_series(s: int, order: int) -> dict:
    """sum_sigma sgn(sigma) T^{sigma(1),1}(u) T^{sigma(2),2}(u-1) ... up to u^{-order}."""
    total: dict = {}
    for p in permutations(range(s)):
        sgn = _perm_sign(p)
        prod = {0: OpPoly.identity()}
        for j in range(s):
            prod = series_mul(prod, mode_series(p[j] + 1, j + 1, order, shift=j), order)
        for n, c in prod.items():
            total[n] = total.get(n, OpPoly()) + c.scale(sgn)
    return total


def qdet_delta_direct(i: int, s: int) -> OpPoly:
    """Delta_i as the coefficient of u^{-i-1} of the q-determinant."""
    return qdet_series(s, i + 1).get(i + 1, OpPoly())


def _tr0(s):
    return _sum(T(a, a, 0) for a in range(1, s + 1))


def _trk(s, k):
    return _sum(T(a, a, k) for a in range(1, s + 1))


def _quad(s, k1, k2):
    """sum_{a,b} T^{ab}_{k1} T^{ba}_{k2}."""
    return _sum(T(a, b, k1) * T(b, a, k2) for a in range(1, s + 1) for b in range(1, s + 1))


def _cubic(s):
    r = range(1, s + 1)
    return _sum(T(a, b, 0) * T(b, c, 0) * T(c, a, 0) for a in r for b in r for c in r)


def qdet_delta_displayed(i: int, s: int, corrected: bool = False) -> OpPoly:
    """The closed forms of Delta_0, Delta_1, Delta_2 in terms of the modes, as displayed.

    The displayed Delta_2 carries ``s * sum_{a>1} T^{aa}_1``; ``corrected=True``
    sums over all a instead, which is what the q-det expansion gives.
    """
    d0 = _tr0(s)
    if i == 0:
        return d0
    d1 = _trk(s, 1) - _quad(s, 0, 0).scale(Fraction(1, 2)) + (d0 * d0 + d0.scale(s - 1)).scale(Fraction(1, 2))
    if i == 1:
        return d1
    if i == 2:
        upper = _sum(T(a, a, 1) for a in range(1 if corrected else 2, s + 1))
        return (_trk(s, 2) - _quad(s, 0, 1) + _cubic(s).scale(Fraction(1, 3)) + upper.scale(s)
                - _quad(s, 0, 0).scale(Fraction(2 * s, 3)) + d0 * d1 - d1
                - (d0 ** 3).scale(Fraction(1, 3)) + (d0 * d0).scale(Fraction(2, 3))
                + d0.scale(Fraction(s * s - 1, 3)))
    raise ValueError("only Delta_0, Delta_1, Delta_2 are available")


def delta_operator(i: int, s: int, form: str = "direct") -> OpPoly:
    """Delta_i from the q-det expansion (``'direct'``), the displayed closed form
    (``'displayed'``) or the displayed form with the summation range fixed (``'corrected'``)."""
    if form == "direct":
        return qdet_delta_direct(i, s)
    if form in ("displayed", "corrected"):
        return qdet_delta_displayed(i, s, corrected=form == "corrected")
    raise ValueError(f"unknown form {form!r}")


def qdet_delta(i: int, F, rep: Representation, form: str = "displayed"):
    """Apply Delta_i to a state."""
    return rep.apply(delta_operator(i, rep.s, form), F)


# ---------------------------------------------------------------------------
# Hamiltonians from the modes


def hamiltonians_from_delta(s: int, form: str = "direct") -> tuple:
    """(H_1/beta, H_2/beta^2) as polynomials in Delta_0, Delta_1, Delta_2."""
    d0, d1, d2 = (delta_operator(i, s, form) for i in range(3))
    h1 = -d1 + (d0 * d0).scale(Fraction(1, 2)) - d0.scale(Fraction(1, 2))
    h2 = (d2 - d0 * d1 + d1 + (d0 ** 3).scale(Fraction(1, 3)) - (d0 * d0).scale(Fraction(1, 2))
          + d0.scale(Fraction(1, 6)))
    return h1, h2


def hamiltonians_from_modes(s: int) -> tuple:
    """(H_1/beta, H_2/beta^2) written directly in the modes T^{ab}_k, as displayed."""
    h1 = -_trk(s, 1) + _quad(s, 0, 0).scale(Fraction(1, 2)) - _tr0(s).scale(Fraction(s, 2))
    d0 = _tr0(s)
    h2 = (_trk(s, 2) - _quad(s, 0, 1) + _trk(s, 1).scale(s) + _cubic(s).scale(Fraction(1, 3))
          - _quad(s, 0, 0).scale(Fraction(2 * s, 3)) + (d0 * d0).scale(Fraction(1, 6))
          + d0.scale(Fraction(2 * s * s - 1, 6)))
    return h1, h2


# ---------------------------------------------------------------------------
# checks


def _report(name: str, rep: Representation, params: dict, residual_terms: int, failures: list) -> dict:
    return {"check": name, "rep": rep.name, "params": params,
            "residual_terms": residual_terms, "failures": failures[:5],
            "status": "pass" if residual_terms == 0 else "fail"}


def rtt_series_residual(a: int, b: int, c: int, d: int, R: int) -> dict:
    """Coefficients of u^{-r-1} v^{-t-1}, r, t <= R, of
    (u - v)[T^{ab}(u), T^{cd}(v)] - T^{cb}(u) T^{ad}(v) + T^{cb}(v) T^{ad}(u).

    Bivariate series are dicts ``{(i, j): OpPoly}`` for u^{-i} v^{-j}; the
    products are formed term by term and multiplied by (u - v) by index shifts.
    """
    order = R + 2

    def series(x, y, var):
        """T^{xy} in u (var=0) or v (var=1) as a bivariate series."""
        one = mode_series(x, y, order)
        return {((n, 0) if var == 0 else (0, n)): p for n, p in one.items()}

    def mul(X, Y):
        out: dict = {}
        for (i1, j1), p in X.items():
            for (i2, j2), q in Y.items():
                k = (i1 + i2, j1 + j2)
                if k[0] <= order and k[1] <= order:
                    out[k] = out.get(k, OpPoly()) + p * q
        return out

    def sub(X, Y):
        out = dict(X)
        for k, q in Y.items():
            out[k] = out.get(k, OpPoly()) - q
        return out

    comm = sub(mul(series(a, b, 0), series(c, d, 1)), mul(series(c, d, 1), series(a, b, 0)))
    lhs: dict = {}
    for (i, j), p in comm.items():
        # u * u^{-i} v^{-j} = u^{-(i-1)} v^{-j};  v * ... = u^{-i} v^{-(j-1)}
        lhs[(i - 1, j)] = lhs.get((i - 1, j), OpPoly()) + p
        lhs[(i, j - 1)] = lhs.get((i, j - 1), OpPoly()) - p
    rhs = sub(mul(series(c, b, 0), series(a, d, 1)), mul(series(c, b, 1), series(a, d, 0)))
    res = {}
    for r in range(R + 1):
        for t in range(R + 1):
            k = (r + 1, t + 1)
            res[(r, t)] = lhs.get(k, OpPoly()) - rhs.get(k, OpPoly())
    return res


def rtt_check(rep: Representation, basis: list, R: int, spins: list | None = None) -> dict:
    s = rep.s
    quads = spins or [(a, b, c, d) for a in range(1, s + 1) for b in range(1, s + 1)
                      for c in range(1, s + 1) for d in range(1, s + 1)]
    bad, terms = [], 0
    for q in quads:
        for (r, t), op in rtt_series_residual(*q, R).items():
            if op.is_zero():
                continue
            for i, v in enumerate(basis):
                w = rep.apply(op, v)
                if not rep.is_zero(w):
                    terms += len(w.terms)
                    bad.append({"spins": list(q), "r": r, "t": t, "basis": i})
    return _report("rtt", rep, {"R": R, "basis_size": len(basis)}, terms, bad)


def centrality_check(rep: Representation, basis: list, imax: int = 2, form: str = "displayed") -> dict:
    s = rep.s
    bad, terms = [], 0
    for i in range(imax + 1):
        D = delta_operator(i, s, form)
        for a in range(1, s + 1):
            for b in range(1, s + 1):
                op = D.commutator(T(a, b, 0))
                for j, v in enumerate(basis):
                    w = rep.apply(op, v)
                    if not rep.is_zero(w):
                        terms += len(w.terms)
                        bad.append({"i": i, "a": a, "b": b, "basis": j})
    return _report(f"centrality[{form}]", rep, {"imax": imax, "basis_size": len(basis)}, terms, bad)


def delta_form_check(rep: Representation, basis: list, form: str = "displayed") -> dict:
    """Compare a closed form of Delta_i with the q-det expansion."""
    bad, terms = [], 0
    for i in range(3):
        op = qdet_delta_direct(i, rep.s) - delta_operator(i, rep.s, form)
        for j, v in enumerate(basis):
            w = rep.apply(op, v)
            if not rep.is_zero(w):
                terms += len(w.terms)
                bad.append({"i": i, "basis": j})
    return _report(f"delta_closed_forms[{form}]", rep, {"basis_size": len(basis)}, terms, bad)


def hamiltonian_identity_check(rep: Representation, basis: list, form: str = "displayed") -> dict:
    """H_1/beta and H_2/beta^2 against their expressions in the modes.

    ``form`` is ``'modes'`` for the T-mode forms, or a Delta form accepted by
    :func:`delta_operator` (``'direct'``, ``'displayed'``, ``'corrected'``).
    """
    if form == "modes":
        h1, h2 = hamiltonians_from_modes(rep.s)
    else:
        h1, h2 = hamiltonians_from_delta(rep.s, form)
    beta = rep.field.beta
    bad, terms = [], 0
    for j, v in enumerate(basis):
        for n, op in ((1, h1), (2, h2)):
            lhs = rep.H(n, v)
            rhs = rep.apply(op, v).scale(beta ** n)
            w = lhs - rhs
            if not rep.is_zero(w):
                terms += len(w.terms)
                bad.append({"H": n, "basis": j})
    return _report(f"hamiltonian_identity[{form}]", rep, {"basis_size": len(basis)}, terms, bad)
