"""Polysymmetric functions: the finite-N picture of the Fock space.

An element of the ring at weight ``mu`` (``mu_a`` particles of spin ``a``) is
stored as a free polynomial in the power sums p_{n,a}; the label of each
term *is* its weight, so the zero mode p_{0,a} evaluates to ``mu_a``.  Because
the power sums of finitely many variables satisfy relations, equality is
decided after expanding into explicit variables x_{a,i}.
"""
from __future__ import annotations

from itertools import permutations
from math import factorial

from .errors import DimensionMismatch, IndexOutOfRange
from .finite import TensorState, permutation_apply
from .fock import (FockElement, _check_beta, _dunkl_component, _dunkl_rat_component,
                   _eab_component, _require_exact)
from .modes import ModeSum
from .scalars import SYMBOLIC, Scalar, ScalarField
from .sparse import SparsePoly


class PolysymElement(ModeSum):
    """Polynomial in p_{n,a} living in the ring of weight ``label``."""

    __slots__ = ()

    def zero_mode(self, label: tuple, a: int) -> Scalar:
        return self.field(label[a - 1])

    @classmethod
    def from_poly(cls, weight, terms: dict, field: ScalarField = SYMBOLIC) -> "PolysymElement":
        """Build from ``{pmono: coeff}`` at one weight."""
        weight = tuple(weight)
        if any(w < 0 for w in weight):
            raise DimensionMismatch("weights are nonnegative")
        return cls(len(weight), field, {(weight, pm, ()): c for pm, c in terms.items()})

    @classmethod
    def one(cls, weight, field: ScalarField = SYMBOLIC) -> "PolysymElement":
        return cls.from_poly(weight, {(): 1}, field)

    @classmethod
    def p(cls, weight, n: int, a: int, field: ScalarField = SYMBOLIC) -> "PolysymElement":
        if n == 0:
            return cls.from_poly(weight, {(): weight[a - 1]}, field)
        return cls.from_poly(weight, {(((n, a), 1),): 1}, field)

    def weight(self) -> tuple:
        labs = self.labels()
        if len(labs) != 1:
            raise DimensionMismatch("element does not have a single weight")
        return next(iter(labs))

    def mul(self, other: "PolysymElement") -> "PolysymElement":
        """Ring product of two elements of the same weight (no aux variables)."""
        from .sparse import mono_mul
        out: dict = {}
        for (l1, m1, a1), c1 in self.terms.items():
            for (l2, m2, a2), c2 in other.terms.items():
                if l1 != l2:
                    raise DimensionMismatch("product of different weights")
                k = (l1, mono_mul(m1, m2), tuple(x + y for x, y in zip(a1, a2)))
                v = out.get(k)
                out[k] = c1 * c2 if v is None else v + c1 * c2
        return self._new({k: c for k, c in out.items() if not c.is_zero()})

    def label_text(self, lab: tuple) -> str:
        return ""


class ExplicitPoly(SparsePoly):
    """Polynomial in the variables x_{a,i} (generators ``(a, i)``) and aux ``(0, name)``."""

    __slots__ = ()

    @staticmethod
    def gen_text(g) -> str:
        if g[0] == 0:
            return str(g[1])
        return f"x[{g[0]},{g[1]}]"


def power_sum(weight: tuple, n: int, a: int, field: ScalarField = SYMBOLIC) -> ExplicitPoly:
    if n == 0:
        return ExplicitPoly.constant(weight[a - 1], field)
    return ExplicitPoly({(((a, i), n),): 1 for i in range(1, weight[a - 1] + 1)}, field)


def expand_powersums(F: ModeSum, weight: tuple | None = None) -> ExplicitPoly:
    """Substitute p_{n,a} by the explicit power sum of the term's weight and expand.

    Aux variables become generators ``(0, name)``.  When ``weight`` is given
    every term must carry it.
    """
    out = ExplicitPoly({}, F.field)
    cache: dict = {}
    for (lab, pm, ax), c in F.terms.items():
        if weight is not None and tuple(lab) != tuple(weight):
            raise DimensionMismatch(f"term of weight {lab} in an element of weight {weight}")
        if any(l < 0 for l in lab):
            continue
        term = ExplicitPoly.constant(c, F.field)
        for (n, a), e in pm:
            key = (lab, n, a)
            ps = cache.get(key)
            if ps is None:
                ps = cache[key] = power_sum(lab, n, a, F.field)
            term = term * ps ** e
        auxm = tuple(((0, v), e) for v, e in zip(F.aux, ax) if e)
        if auxm:
            term = term * ExplicitPoly({tuple(sorted(auxm)): 1}, F.field)
        out = out + term
    return out


def polysym_equal(F: ModeSum, G: ModeSum) -> bool:
    """Equality in the polysymmetric rings (weight by weight, after expansion)."""
    labs = F.labels() | G.labels()
    for lab in labs:
        f = F._new({k: c for k, c in F.terms.items() if k[0] == lab})
        g = G._new({k: c for k, c in G.terms.items() if k[0] == lab})
        if (expand_powersums(f) - expand_powersums(g)).terms:
            return False
    return True


# ---------------------------------------------------------------------------
# symmetrization maps to tensors


def _block_slots(weight: tuple) -> list:
    """Spin of each slot in the block tensor: spin 1 first, then spin 2, ..."""
    return [a for a in range(1, len(weight) + 1) for _ in range(weight[a - 1])]


def _check_vars(weight: tuple, mono: tuple) -> dict:
    d = {}
    for g, e in mono:
        if g[0] == 0:
            continue
        a, i = g
        if not (1 <= a <= len(weight) and 1 <= i <= weight[a - 1]):
            raise IndexOutOfRange(f"variable x[{a},{i}] outside weight {weight}")
        d[g] = e
    return d


def gamma_lambda(x: ExplicitPoly, weight) -> TensorState:
    """Total symmetrization of the block tensor of each monomial, divided by prod lambda_a!."""
    weight = tuple(weight)
    N, s = sum(weight), len(weight)
    spins = _block_slots(weight)
    norm = 1
    for w in weight:
        norm *= factorial(w)
    out: dict = {}
    perms = list(permutations(range(N)))
    for mono, c in x.terms.items():
        d = _check_vars(weight, mono)
        exps = [d.get((a, i), 0) for a in range(1, s + 1) for i in range(1, weight[a - 1] + 1)]
        cn = c / norm
        for perm in perms:
            key = (tuple(spins[p] for p in perm), tuple(exps[p] for p in perm))
            v = out.get(key)
            out[key] = cn if v is None else v + cn
    return TensorState(N, s, x.field, {k: c for k, c in out.items() if not c.is_zero()})


class VectorPolysym:
    """Column of s components; component c lives in the ring of weight lambda - e_c, with aux ``z``.

    Components with ``lambda_c = 0`` are absent and stored as ``None``.
    """

    __slots__ = ("weight", "comps", "field")

    def __init__(self, weight, comps, field: ScalarField = SYMBOLIC):
        self.weight = tuple(weight)
        self.field = field
        cs = []
        for c, comp in enumerate(comps, start=1):
            if self.weight[c - 1] == 0:
                if comp is not None and not comp.is_zero():
                    raise DimensionMismatch(f"component {c} must vanish at weight {self.weight}")
                cs.append(None)
            else:
                cs.append(comp.with_aux(("z",)) if comp is not None
                          else PolysymElement(len(self.weight), field, aux=("z",)))
        self.comps = tuple(cs)

    @property
    def s(self) -> int:
        return len(self.weight)

    def __getitem__(self, c: int):
        return self.comps[c - 1]

    def component_weight(self, c: int) -> tuple:
        w = list(self.weight)
        w[c - 1] -= 1
        return tuple(w)

    def __add__(self, other: "VectorPolysym") -> "VectorPolysym":
        if self.weight != other.weight:
            raise DimensionMismatch("weights differ")
        return VectorPolysym(self.weight, [None if a is None else a + b
                                           for a, b in zip(self.comps, other.comps)], self.field)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k) -> "VectorPolysym":
        return VectorPolysym(self.weight, [None if a is None else a.scale(k) for a in self.comps], self.field)

    def equal(self, other: "VectorPolysym") -> bool:
        if self.weight != other.weight:
            return False
        return all(a is None or polysym_equal(a, b) for a, b in zip(self.comps, other.comps))

    def __str__(self):
        return "(" + "; ".join("-" if c is None else str(c) for c in self.comps) + ")"

    __repr__ = __str__


def gamma_lambda_i(i: int, u: VectorPolysym) -> TensorState:
    """Symmetrize the first N-1 slots with the distinguished factor e_c z^d in slot N,
    divide by the stabilizer factorials, then move slot N to slot i."""
    weight = u.weight
    N, s = sum(weight), len(weight)
    if not 1 <= i <= N:
        raise IndexOutOfRange(f"slot {i} outside 1..{N}")
    out = TensorState(N, s, u.field)
    for c in range(1, s + 1):
        comp = u[c]
        if comp is None or comp.is_zero():
            continue
        w = u.component_weight(c)
        x = expand_powersums(comp, w)
        spins = _block_slots(w) + [c]
        norm = 1
        for m in w:
            norm *= factorial(m)
        perms = list(permutations(range(N - 1)))
        terms: dict = {}
        for mono, coeff in x.terms.items():
            d = _check_vars(w, mono)
            zd = dict(mono).get((0, "z"), 0)
            exps = [d.get((a, j), 0) for a in range(1, s + 1) for j in range(1, w[a - 1] + 1)] + [zd]
            cn = coeff / norm
            for perm in perms:
                p = list(perm) + [N - 1]
                key = (tuple(spins[q] for q in p), tuple(exps[q] for q in p))
                v = terms.get(key)
                terms[key] = cn if v is None else v + cn
        out = out + TensorState(N, s, u.field, {k: v for k, v in terms.items() if not v.is_zero()})
    if i != N:
        out = permutation_apply("sigma", i, N, out)
    return out


# ---------------------------------------------------------------------------
# embedding, Dunkl operator, averaging


def iota_lambda(F: PolysymElement) -> VectorPolysym:
    """Component c is the substitution p_{n,c} -> p_{n,c} + z^n, landing at weight lambda - e_c."""
    _require_exact(F)
    weight = F.weight() if F.terms else None
    if weight is None:
        raise DimensionMismatch("iota needs an element with a definite weight")
    return VectorPolysym(weight, [F.vertex(c, "z") if weight[c - 1] else None
                                  for c in range(1, F.s + 1)], F.field)


def _dunkl_fin_component(G: PolysymElement, weight: tuple, a: int) -> PolysymElement:
    """z d/dz G + beta sum_b z [xi^1] (phi_b^-(xi) - delta_ab)/(1 - z/xi) V'_b(xi) V_b(z) G(xi),
    with p_{0,b} = lambda_b of the ambient weight."""
    res = G.euler("z")
    H = G.rename("z", "xi")
    tot = None
    for b in range(1, G.s + 1):
        X = H.vertex(b, "z").vertex(b, "xi", inverse=True)
        X = X.mul_geometric("z", "xi", target=1)
        X = X.mul_phi_minus(b, "xi", target=1, zero=G.field(weight[b - 1] - (1 if a == b else 0)))
        X = X.coeff("xi", 1)
        tot = X if tot is None else tot + X
    return res + tot.mul_aux({"z": 1}).scale(G.field.beta)


def D_fin_apply(u: VectorPolysym) -> VectorPolysym:
    """The finite Dunkl operator on vector polysymmetric functions (diagonal in components)."""
    return VectorPolysym(u.weight, [None if c is None else _dunkl_fin_component(c, u.weight, a)
                                    for a, c in enumerate(u.comps, start=1)], u.field)


def rational_D_fin_apply(u: VectorPolysym) -> VectorPolysym:
    """Rational counterpart; the zero modes come from the component's own weight."""
    return VectorPolysym(u.weight, [None if c is None else _dunkl_rat_component(c)
                                    for c in u.comps], u.field)


def E_ab_fin_apply(a: int, b: int, u: VectorPolysym) -> PolysymElement:
    """[xi^0] phi_a^-(xi) V'_a(xi) F_b(xi), landing at weight lambda + e_a - e_b.

    The zero mode of phi_a^- is the particle count of the ring it multiplies
    into, i.e. of the target weight.
    """
    if not (1 <= a <= u.s and 1 <= b <= u.s):
        raise IndexOutOfRange("spin labels outside range")
    comp = u[b]
    if comp is None:
        return PolysymElement(u.s, u.field)
    return _eab_component(comp, a)


def t_ab_k_fin(a: int, b: int, k: int, F: PolysymElement, rational: bool = False) -> PolysymElement:
    """(-1)^k beta^{-k} E^{ab} D^k iota F."""
    if k < 0:
        raise ValueError("mode index must be nonnegative")
    _check_beta(F.field)
    u = iota_lambda(F)
    for _ in range(k):
        u = rational_D_fin_apply(u) if rational else D_fin_apply(u)
    out = E_ab_fin_apply(a, b, u)
    if k:
        out = out.scale((-F.field.beta) ** (-k))
    return out


def moment_fin(k: int, F: PolysymElement, rational: bool = False) -> PolysymElement:
    """sum_a E^{aa} D^k iota F, the image of sum_i D_i^k."""
    u = iota_lambda(F)
    for _ in range(k):
        u = rational_D_fin_apply(u) if rational else D_fin_apply(u)
    out = PolysymElement(F.s, F.field)
    for a in range(1, F.s + 1):
        out = out + E_ab_fin_apply(a, a, u)
    return out


# ---------------------------------------------------------------------------
# projections from the Fock space


def pi_lambda(weight, F: ModeSum) -> PolysymElement:
    """Send the sector nu to the ring of weight lambda + nu and specialize lam -> lambda.

    Sectors with a negative particle count are dropped.  Aux variables are kept.
    """
    weight = tuple(weight)
    if len(weight) != F.s:
        raise DimensionMismatch("weight length differs from the spin count")
    field = F.field
    out = {}
    for (nu, pm, ax), c in F.terms.items():
        lab = tuple(w + n for w, n in zip(weight, nu))
        if any(l < 0 for l in lab):
            continue
        if any(l == 0 and g[1] == a for a, l in enumerate(lab, start=1) for g, _ in pm):
            continue
        c2 = c.substitute_lam(weight)
        if c2.is_zero():
            continue
        key = (lab, pm, ax)
        v = out.get(key)
        out[key] = c2 if v is None else v + c2
    x = PolysymElement(F.s, field, aux=F.aux)
    x.terms = {k: c for k, c in out.items() if not c.is_zero()}
    x.window = F.window
    return x


def pi_lambda_vector(weight, u) -> VectorPolysym:
    """Apply pi_lambda componentwise to a vector Fock element (sector nu = 0)."""
    weight = tuple(weight)
    return VectorPolysym(weight, [None if weight[c - 1] == 0 else pi_lambda(weight, u[c])
                                  for c in range(1, len(weight) + 1)], u[1].field)


def tau_a(a: int, F: PolysymElement) -> PolysymElement:
    """Set the last variable of spin a to zero: weight mu -> mu - e_a, power sums kept."""
    if not 1 <= a <= F.s:
        raise IndexOutOfRange("spin label outside range")
    out = {}
    for (lab, pm, ax), c in F.terms.items():
        if lab[a - 1] <= 0:
            raise DimensionMismatch("no variable of that spin to evaluate at zero")
        lab2 = lab[:a - 1] + (lab[a - 1] - 1,) + lab[a:]
        out[(lab2, pm, ax)] = c
    return F._new(out)
