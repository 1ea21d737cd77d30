"""The classical limit: Poisson algebra of modes, Hamiltonian, equations of motion, Lax pair.

Observables are polynomials in the mode symbols alpha_{n,a} (generator
``(n, a)``).  Every term has a *level*: the total weight sum n*e over its
positive modes.  The fields phi^+, the vertex functions and the Hamiltonian are
infinite sums, but finitely many terms have level <= M, and since all levels
are nonnegative the terms of level > M form an ideal.  We work exactly in the
quotient by that ideal.

The bracket with the Hamiltonian never lowers the level of a term (the
Hamiltonian has grade 0, so a factor alpha_{-n} in it comes with level >= n).
Hence ``{c, H}`` modulo level > M depends only on ``c`` modulo level > M,
provided H itself is kept up to level M + (largest negative mode in c).
"""
from __future__ import annotations

from functools import lru_cache

from .errors import DimensionMismatch
from .scalars import SYMBOLIC, ScalarField
from .sparse import SparsePoly, mono_drop, mono_exp, mono_mul
from .windows import LaurentWindow


UNBOUNDED = 10**9


def level(m: tuple) -> int:
    return sum(n * e for (n, _), e in m if n > 0)


def neg_weight(m: tuple) -> int:
    return sum(-n * e for (n, _), e in m if n < 0)


class ClassicalObservable(SparsePoly):
    """Polynomial in alpha_{n,a} modulo terms of level above ``cutoff``."""

    __slots__ = ("cutoff",)

    def __init__(self, terms: dict | None = None, field: ScalarField = SYMBOLIC, cutoff: int = 4):
        super().__init__({m: c for m, c in (terms or {}).items() if level(m) <= cutoff}, field)
        self.cutoff = cutoff

    @classmethod
    def _raw(cls, terms: dict, field: ScalarField) -> "ClassicalObservable":
        # constants and specializations built by the base class carry no cutoff of their own
        x = cls.__new__(cls)
        x.terms = terms
        x.field = field
        x.cutoff = UNBOUNDED
        return x

    def _like(self, terms: dict) -> "ClassicalObservable":
        x = ClassicalObservable.__new__(ClassicalObservable)
        x.terms = terms
        x.field = self.field
        x.cutoff = self.cutoff
        return x

    def _lift(self, other):
        if isinstance(other, SparsePoly):
            return other
        c = self.field(other)
        return self._like({} if c.is_zero() else {(): c})

    @classmethod
    def alpha(cls, n: int, a: int, field: ScalarField = SYMBOLIC, cutoff: int = 4) -> "ClassicalObservable":
        return cls({(((n, a), 1),): 1}, field, cutoff)

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        cut = min(self.cutoff, getattr(other, "cutoff", self.cutoff))
        out: dict = {}
        lv2 = [(m2, c2, level(m2)) for m2, c2 in other.terms.items()]
        for m1, c1 in self.terms.items():
            l1 = level(m1)
            if l1 > cut:
                continue
            for m2, c2, l2 in lv2:
                if l1 + l2 > cut:
                    continue
                m = mono_mul(m1, m2)
                v = c1 * c2
                w = out.get(m)
                out[m] = v if w is None else w + v
        x = self._like({m: c for m, c in out.items() if not c.is_zero()})
        x.cutoff = cut
        return x

    def with_cutoff(self, cutoff: int) -> "ClassicalObservable":
        x = self._like({m: c for m, c in self.terms.items() if level(m) <= cutoff})
        x.cutoff = cutoff
        return x

    def max_negative_mode(self) -> int:
        return max((-n for m in self.terms for (n, _), _ in m if n < 0), default=0)

    def grades(self) -> set:
        return {sum(n * e for (n, _), e in m) for m in self.terms}

    def gen_text(self, g) -> str:
        return f"alpha[{g[0]},{g[1]}]"


def poisson_bracket(f: ClassicalObservable, g: ClassicalObservable, cutoff: int | None = None) -> ClassicalObservable:
    """{f, g} = sum_{n != 0} n (df/d alpha_{n,a}) (dg/d alpha_{-n,a}), reduced modulo level > cutoff.

    The caller is responsible for ``f`` and ``g`` being known to the levels the
    result needs (see the module docstring).
    """
    cut = min(f.cutoff, g.cutoff) if cutoff is None else cutoff
    out = f._like({})
    out.cutoff = cut
    for (n, a) in sorted(f.gens()):
        if n == 0:
            continue
        dg = g.derivative((-n, a))
        if dg.is_zero():
            continue
        df = f.derivative((n, a))
        out = out + (df.with_cutoff(cut) * dg.with_cutoff(cut)).scale(n)
    return out


# ---------------------------------------------------------------------------
# fields


class ClassicalSystem:
    """Fields and the Hamiltonian for s colours, exact modulo level > M.

    ``nmax`` truncates the negative fields phi^-; products keep certified
    exactness windows, and reading outside them raises.
    """

    def __init__(self, s: int, M: int, field: ScalarField = SYMBOLIC, nmax: int | None = None):
        if s < 1 or M < 1:
            raise DimensionMismatch("s and M must be positive")
        self.s = s
        self.M = M
        self.field = field
        self.nmax = nmax if nmax is not None else 3 * M + 6
        self._ham: dict = {}

    # -- observables ----------------------------------------------------
    def obs(self, terms: dict | None = None, cutoff: int | None = None) -> ClassicalObservable:
        return ClassicalObservable(terms, self.field, self.M if cutoff is None else cutoff)

    def alpha(self, n: int, a: int, cutoff: int | None = None) -> ClassicalObservable:
        return ClassicalObservable.alpha(n, a, self.field, self.M if cutoff is None else cutoff)

    def _series(self, var: str, coeffs: dict, elo=None, ehi=None) -> LaurentWindow:
        return LaurentWindow(var, coeffs, self.obs(), elo, ehi)

    def phi_plus(self, a: int, var: str = "x") -> LaurentWindow:
        """sum_{n>=1} alpha_{n,a} var^n (exact: higher terms have level > M)."""
        return self._series(var, {n: self.alpha(n, a) for n in range(1, self.M + 1)})

    def phi_minus(self, a: int, var: str = "x") -> LaurentWindow:
        """sum_{n>=0} alpha_{-n,a} var^{-n}, truncated at n <= nmax."""
        return self._series(var, {-n: self.alpha(-n, a) for n in range(0, self.nmax + 1)}, elo=-self.nmax)

    def vertex(self, a: int, var: str = "x", inverse: bool = False) -> LaurentWindow:
        """exp(+-sum_{n>=1} alpha_{n,a} var^n / n), without zero modes."""
        return self._exp_series(((a, -1 if inverse else 1),), var)

    def vertex_ratio(self, a: int, b: int, var: str = "x", inverse: bool = False) -> LaurentWindow:
        """V_ab = V_a V_b^{-1} (or its inverse)."""
        sg = -1 if inverse else 1
        return self._exp_series(((a, sg), (b, -sg)), var)

    def _exp_series(self, signs: tuple, var: str) -> LaurentWindow:
        return self._series(var, dict(_exp_coeffs(signs, self.M, self.field, self.M)))

    def field_series(self, a: int, kind: str, var: str = "x") -> LaurentWindow:
        if kind in ("+", "phi+"):
            return self.phi_plus(a, var)
        if kind in ("-", "phi-"):
            return self.phi_minus(a, var)
        if kind in ("V", "vertex"):
            return self.vertex(a, var)
        if kind in ("V-1", "vertex-inverse"):
            return self.vertex(a, var, inverse=True)
        raise ValueError(f"unknown field kind {kind!r}")

    # -- Hamiltonian ----------------------------------------------------
    def hamiltonian(self, lev: int | None = None) -> ClassicalObservable:
        """The four displayed terms, kept up to level ``lev`` (default M)."""
        lev = self.M if lev is None else lev
        h = self._ham.get(lev)
        if h is None:
            h = _hamiltonian(self.s, lev, self.field)
            self._ham[lev] = h
        return h

    def hamiltonian_by_terms(self, lev: int | None = None) -> list:
        lev = self.M if lev is None else lev
        return _hamiltonian_terms(self.s, lev, self.field)

    def flow(self, c: ClassicalObservable) -> ClassicalObservable:
        """{c, H} modulo level > M."""
        h = self.hamiltonian(self.M + c.max_negative_mode())
        return poisson_bracket(c, h, self.M)

    def time_derivative(self, f: LaurentWindow) -> LaurentWindow:
        """Replace every coefficient by its bracket with H (window unchanged)."""
        return LaurentWindow(f.var, {e: self.flow(c) for e, c in f.coeffs.items()}, f.zero, f.elo, f.ehi)

    # -- equations of motion -------------------------------------------
    def eom_bracket(self, a: int, sign: str, var: str = "x", depth: int | None = None) -> LaurentWindow:
        """{phi_a^sign(var), H} by the bracket machinery.

        For phi^- only the coefficients down to var^{-depth} (default M) are
        computed, and the window says so.
        """
        if sign == "+":
            return self.time_derivative(self.phi_plus(a, var))
        depth = self.M if depth is None else depth
        src = self._series(var, {-n: self.alpha(-n, a) for n in range(depth + 1)}, elo=-depth)
        return self.time_derivative(src)

    def eom_displayed(self, a: int, sign: str, form: int = 1, var: str = "x") -> LaurentWindow:
        """The displayed right-hand sides; ``form`` picks the first or second expression for phi^+."""
        E = _euler
        s = self.s
        pp = {b: self.phi_plus(b, var) for b in range(1, s + 1)}
        pm = {b: self.phi_minus(b, var) for b in range(1, s + 1)}
        if sign == "+":
            out = E(pp[a] * pp[a]) + E(E(pp[a]))
            if form == 1:
                for b in range(1, s + 1):
                    out = out + E((pm[b] * pp[a]).plus_part()) + E((pm[b] * pp[b]).plus_part())
                for b in range(1, s + 1):
                    if b == a:
                        continue
                    W = pm[b] * self.vertex_ratio(a, b, var)
                    inner = E(W.plus_part() - W.minus_part())
                    out = out + E((self.vertex_ratio(a, b, var, inverse=True) * inner).plus_part())
                return out
            if form == 2:
                for b in range(1, s + 1):
                    out = out + E((pm[b] * pp[b]).plus_part()).scale(2)
                for b in range(1, s + 1):
                    if b == a:
                        continue
                    W = (pm[b] * self.vertex_ratio(a, b, var)).plus_part()
                    out = out + E(self.vertex_ratio(a, b, var, inverse=True) * E(W)).scale(2)
                return out
            raise ValueError("form must be 1 or 2")
        out = E((pm[a] * pp[a]).minus_part()).scale(2) - E(E(pm[a]))
        for b in range(1, s + 1):
            out = out + E(pm[b] * pm[a])
        for b in range(1, s + 1):
            if b == a:
                continue
            W = pm[b] * self.vertex_ratio(a, b, var)
            out = out + (pm[a] * self.vertex_ratio(a, b, var, inverse=True)
                         * E(W.plus_part() - W.minus_part())).minus_part()
            U = pm[a] * self.vertex_ratio(a, b, var, inverse=True)
            out = out - (pm[b] * self.vertex_ratio(a, b, var) * E(U.plus_part() - U.minus_part())).minus_part()
        return out

    # -- Lax pair -------------------------------------------------------
    def monomial(self, k: int, var: str = "z") -> LaurentWindow:
        return self._series(var, {k: self.obs({(): 1})})

    def lax_apply(self, kind: str, f: LaurentWindow) -> LaurentWindow:
        """L f = z f' + sum_a V_a (phi_a^- V_a^{-1} f)^+;
        M f = (z d)^2 f + 2 sum_b (phi_b^+ phi_b^-)^+ f + 2 sum_b V_b z d (phi_b^- V_b^{-1} f)^+."""
        var = f.var
        s = self.s
        if kind == "L":
            out = _euler(f)
            for a in range(1, s + 1):
                inner = (self.phi_minus(a, var) * self.vertex(a, var, inverse=True) * f).plus_part()
                out = out + self.vertex(a, var) * inner
            return out
        if kind == "M":
            out = _euler(_euler(f))
            for b in range(1, s + 1):
                pp = (self.phi_plus(b, var) * self.phi_minus(b, var)).plus_part()
                out = out + (pp * f).scale(2)
                inner = (self.phi_minus(b, var) * self.vertex(b, var, inverse=True) * f).plus_part()
                out = out + (self.vertex(b, var) * _euler(inner)).scale(2)
            return out
        raise ValueError(f"unknown Lax operator {kind!r}")

    def lax_series_apply(self, kind: str, g: LaurentWindow, upto: int) -> LaurentWindow:
        """Apply L or M to a series with observable coefficients (linear over observables)."""
        out = None
        for k, c in g.items():
            if k < 0 or k > upto:
                continue
            img = self.lax_apply(kind, self.monomial(k, g.var)).scale(c)
            out = img if out is None else out + img
        if out is None:
            out = self._series(g.var, {})
        # the output is complete only where the input was read completely
        lo, hi = g.exact_window()
        if hi is not None and hi < upto:
            raise ValueError("series window too short for the requested range")
        return out

    def lax_common(self, f: LaurentWindow) -> LaurentWindow:
        """The common expression that both sides of dL/dt = [M, L] are claimed to equal."""
        var = f.var
        s = self.s
        E = _euler
        out = self._series(var, {})
        V = {a: self.vertex(a, var) for a in range(1, s + 1)}
        Vi = {a: self.vertex(a, var, inverse=True) for a in range(1, s + 1)}
        pp = {a: self.phi_plus(a, var) for a in range(1, s + 1)}
        pm = {a: self.phi_minus(a, var) for a in range(1, s + 1)}
        for a in range(1, s + 1):
            A = (pm[a] * Vi[a] * f).plus_part()
            out = out + V[a] * pp[a] * pp[a] * A
            out = out + V[a] * E(pp[a]) * A
            out = out + (V[a] * (E((pm[a] * pp[a]).minus_part()) * Vi[a] * f).plus_part()).scale(2)
            out = out - V[a] * (E(E(pm[a])) * Vi[a] * f).plus_part()
            out = out - V[a] * (pp[a] * pp[a] * pm[a] * Vi[a] * f).plus_part()
            out = out - V[a] * (E(pp[a]) * pm[a] * Vi[a] * f).plus_part()
            out = out + V[a] * (E(pm[a] * pm[a]) * Vi[a] * f).plus_part()
            for b in range(1, s + 1):
                Bp = (pm[b] * pp[b]).plus_part()
                out = out + (V[a] * Bp * A).scale(2)
                out = out - (V[a] * (Bp * pm[a] * Vi[a] * f).plus_part()).scale(2)
        for a in range(1, s + 1):
            A = (pm[a] * Vi[a] * f).plus_part()
            for b in range(1, s + 1):
                if a == b:
                    continue
                out = out + (V[b] * (E(pm[b] * self.vertex_ratio(a, b, var)) * A).plus_part()).scale(2)
        return out

    def lax_sides(self, k: int) -> tuple:
        """(dL/dt z^k, [M, L] z^k, common expression) as series in z."""
        f = self.monomial(k)
        Lf = self.lax_apply("L", f)
        upto = self.M + k
        dL = self.time_derivative(_restrict(Lf, 0, upto))
        Mf = self.lax_apply("M", f)
        ML = self.lax_series_apply("M", _restrict(Lf, 0, upto), upto)
        LM = self.lax_series_apply("L", _restrict(Mf, 0, upto), upto)
        return dL, ML - LM, self.lax_common(f)


def _restrict(f: LaurentWindow, lo: int, hi: int) -> LaurentWindow:
    """The coefficients on [lo, hi] as an exact polynomial (they must all be certified)."""
    coeffs = {e: c for e, c in f.restrict(lo, hi).items()}
    # exponents outside [lo, hi] vanish modulo the level ideal for the series used here
    for e, c in f.coeffs.items():
        if (e < lo or e > hi) and not c.is_zero():
            raise ValueError(f"unexpected coefficient at exponent {e} outside [{lo}, {hi}]")
    return LaurentWindow(f.var, coeffs, f.zero)


def _euler(f: LaurentWindow) -> LaurentWindow:
    return f.euler()


@lru_cache(maxsize=None)
def _exp_coeffs_cached(signs: tuple, deg: int, field: ScalarField, cutoff: int) -> tuple:
    """Coefficients of exp(sum_{(a,sg)} sg sum_{n>=1} alpha_{n,a} x^n / n) up to x^deg."""
    zero = ClassicalObservable({}, field, cutoff)
    # power series exponential by the recursion k c_k = sum_{n=1}^k n t_n c_{k-n}
    t = {}
    for n in range(1, deg + 1):
        acc = zero
        for a, sg in signs:
            acc = acc + ClassicalObservable.alpha(n, a, field, cutoff).scale(field(sg) / n)
        t[n] = acc
    c = {0: ClassicalObservable({(): 1}, field, cutoff)}
    for k in range(1, deg + 1):
        acc = zero
        for n in range(1, k + 1):
            acc = acc + (t[n] * c[k - n]).scale(n)
        c[k] = acc.scale(field(1) / k)
    return tuple(sorted(c.items()))


def _exp_coeffs(signs: tuple, deg: int, field: ScalarField, cutoff: int) -> tuple:
    return _exp_coeffs_cached(tuple(signs), deg, field, cutoff)


def _hamiltonian_terms(s: int, lev: int, field: ScalarField) -> list:
    """The four displayed terms of the classical Hamiltonian up to level ``lev``."""
    O = lambda terms: ClassicalObservable(terms, field, lev)
    al = lambda n, a: ClassicalObservable.alpha(n, a, field, lev)
    t1 = O({})
    t2 = O({})
    t3 = O({})
    for a in range(1, s + 1):
        # [xi^0] phi_a^- (phi_a^+)^2
        for q in range(1, lev + 1):
            for r in range(1, lev + 1 - q):
                t1 = t1 + al(-(q + r), a) * al(q, a) * al(r, a)
        # [xi^0] phi_a^- (xi d/dxi phi_a^+)
        for n in range(1, lev + 1):
            t2 = t2 + (al(-n, a) * al(n, a)).scale(n)
        # sum_b [xi^0] phi_a^- phi_b^- phi_a^+
        for b in range(1, s + 1):
            for p in range(0, lev + 1):
                for q in range(0, lev + 1 - p):
                    if p + q >= 1:
                        t3 = t3 + al(-p, a) * al(-q, b) * al(p + q, a)
    t4 = O({})
    for a in range(1, s + 1):
        for b in range(1, a):
            # W(eta) = V_ab^{-1}(eta) = sum w_i eta^i ; V_ab(xi) = sum w'_j xi^j
            w = dict(_exp_coeffs(((b, 1), (a, -1)), lev, field, lev))
            wp = dict(_exp_coeffs(((a, 1), (b, -1)), lev, field, lev))
            for k in range(1, lev + 1):
                # k (xi/eta)^k half: sum alpha_{-m,a} alpha_{-(k+j),b} w_{m+k} w'_j
                for m in range(0, lev + 1 - k):
                    for j in range(0, lev + 1 - k - m):
                        t4 = t4 + (al(-m, a) * al(-(k + j), b) * w[m + k] * wp[j]).scale(k)
                # k (eta/xi)^k half: sum alpha_{-(k+i),a} alpha_{-n,b} w_i w'_{n+k}
                for i in range(0, lev + 1 - k):
                    for n in range(0, lev + 1 - k - i):
                        t4 = t4 + (al(-(k + i), a) * al(-n, b) * w[i] * wp[n + k]).scale(k)
    return [t1, t2, t3, t4]


def _hamiltonian(s: int, lev: int, field: ScalarField) -> ClassicalObservable:
    out = None
    for t in _hamiltonian_terms(s, lev, field):
        out = t if out is None else out + t
    return out


def plus_minus_part(f: LaurentWindow, sign: str) -> LaurentWindow:
    """f^+ keeps exponents >= 1, f^- keeps exponents <= 0."""
    return f.plus_part() if sign == "+" else f.minus_part()


def compare_series(x: LaurentWindow, y: LaurentWindow, lo: int, hi: int) -> list:
    """Exponents in [lo, hi] where the two series differ (both windows must cover them)."""
    bad = []
    for e in range(lo, hi + 1):
        if not (x.coeff(e) - y.coeff(e)).is_zero():
            bad.append(e)
    return bad


def eom_check(sys: ClassicalSystem, form: int = 1, krange: int | None = None) -> dict:
    """Both equations of motion, bracket route against displayed route, at x^e for |e| <= M."""
    K = sys.M if krange is None else krange
    out = {}
    for a in range(1, sys.s + 1):
        out[(a, "+")] = compare_series(sys.eom_bracket(a, "+"), sys.eom_displayed(a, "+", form), -K, K)
        out[(a, "-")] = compare_series(sys.eom_bracket(a, "-"), sys.eom_displayed(a, "-"), -K, K)
    return out


def lax_check(sys: ClassicalSystem, K: int) -> dict:
    """Three-way comparison for z^k, k <= K, at exponents 0..M+k."""
    out = {}
    for k in range(K + 1):
        dL, comm, common = sys.lax_sides(k)
        hi = sys.M + k
        out[k] = {"dL-vs-comm": compare_series(dL, comm, 0, hi),
                  "dL-vs-common": compare_series(dL, common, 0, hi),
                  "comm-vs-common": compare_series(comm, common, 0, hi)}
    return out
