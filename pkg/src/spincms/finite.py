"""The finite-N spin model on vector-valued polynomials.

A :class:`TensorState` is a sparse sum of basis tensors
``e^{a_1} x^{k_1} (x) ... (x) e^{a_N} x^{k_N}`` keyed by ``(spins, exps)``.
Fractions ``x_i/(x_i - x_j) (1 - K_ij)`` are evaluated by the exact
divided-difference closed form on monomials.
"""
from __future__ import annotations

import random
from itertools import permutations, product

from .errors import BetaZero, DimensionMismatch, IndexOutOfRange, NotInvariant
from .scalars import SYMBOLIC, Scalar, ScalarField
from .sparse import format_terms


class TensorState:
    """Element of M_N: a map ``(spin word, exponent vector) -> Scalar``."""

    __slots__ = ("N", "s", "field", "terms")

    def __init__(self, N: int, s: int, field: ScalarField = SYMBOLIC, terms: dict | None = None):
        if N < 1 or s < 1:
            raise DimensionMismatch("N and s must be positive")
        self.N = N
        self.s = s
        self.field = field
        self.terms = {}
        if terms:
            for (a, k), c in terms.items():
                a, k = tuple(a), tuple(k)
                if len(a) != N or len(k) != N:
                    raise DimensionMismatch("spin word and exponent vector must have length N")
                if any(not 1 <= x <= s for x in a):
                    raise IndexOutOfRange(f"spin label outside 1..{s}")
                if any(x < 0 for x in k):
                    raise ValueError("negative exponent")
                c = field(c)
                if not c.is_zero():
                    self.terms[(a, k)] = c

    def _new(self, terms: dict) -> "TensorState":
        t = TensorState.__new__(TensorState)
        t.N, t.s, t.field, t.terms = self.N, self.s, self.field, terms
        return t

    @classmethod
    def basis(cls, spins, exps, N: int | None = None, s: int | None = None,
              field: ScalarField = SYMBOLIC, coeff=1) -> "TensorState":
        spins, exps = tuple(spins), tuple(exps)
        N = N or len(spins)
        s = s or max(spins)
        return cls(N, s, field, {(spins, exps): coeff})

    def zero(self) -> "TensorState":
        return self._new({})

    # -- algebra --------------------------------------------------------
    def _check(self, other: "TensorState") -> None:
        if (self.N, self.s) != (other.N, other.s):
            raise DimensionMismatch(f"(N, s) differ: {(self.N, self.s)} vs {(other.N, other.s)}")

    def __add__(self, other: "TensorState") -> "TensorState":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v.is_zero():
                    del out[k]
                else:
                    out[k] = v
        return self._new(out)

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorState":
        c = self.field(c)
        if c.is_zero():
            return self._new({})
        return self._new({k: v * c for k, v in self.terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, TensorState):
            return NotImplemented
        return (self.N, self.s) == (other.N, other.s) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        return max((sum(k) for _, k in self.terms), default=-1)

    def map_coeffs(self, fn) -> "TensorState":
        out = {}
        for k, c in self.terms.items():
            c2 = fn(c)
            if not c2.is_zero():
                out[k] = c2
        return self._new(out)

    def specialize(self, field: ScalarField) -> "TensorState":
        t = TensorState(self.N, self.s, field)
        t.terms = {k: c.specialize(field) for k, c in self.terms.items() if not c.specialize(field).is_zero()}
        return t

    # -- invariance -----------------------------------------------------
    def is_invariant(self) -> bool:
        """Fixed by every adjacent simultaneous swap sigma_{i,i+1}."""
        return all(permutation_apply("sigma", i, i + 1, self) == self for i in range(1, self.N))

    def check_invariant(self) -> None:
        if not self.is_invariant():
            raise NotInvariant("state is not symmetric under simultaneous swaps")

    # -- text -----------------------------------------------------------
    def sorted_items(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0], sum(kv[0][1]), kv[0][1]))

    def __str__(self):
        items = []
        for (a, k), c in self.sorted_items():
            mt = "e[" + ",".join(map(str, a)) + "]*x[" + ",".join(map(str, k)) + "]"
            items.append((mt, c))
        return format_terms(items)

    def __repr__(self):
        return f"TensorState(N={self.N}, s={self.s}, {self})"


def _acc(out: dict, key, c) -> None:
    v = out.get(key)
    out[key] = c if v is None else v + c


def _clean(out: dict) -> dict:
    return {k: c for k, c in out.items() if not c.is_zero()}


def _check_index(v: TensorState, *idx: int) -> None:
    for i in idx:
        if not 1 <= i <= v.N:
            raise IndexOutOfRange(f"particle index {i} outside 1..{v.N}")


def _swap(t: tuple, i: int, j: int) -> tuple:
    l = list(t)
    l[i], l[j] = l[j], l[i]
    return tuple(l)


def _linear(v: TensorState, fn) -> TensorState:
    """Extend ``fn(spins, exps) -> iterable of (key, coeff)`` linearly."""
    out: dict = {}
    for (a, k), c in v.terms.items():
        for key, w in fn(a, k):
            _acc(out, key, c * w)
    return v._new(_clean(out))


# ---------------------------------------------------------------------------
# permutations and gl_s


def permutation_apply(kind: str, i: int, j: int, v: TensorState) -> TensorState:
    """K swaps exponents, P swaps spins, sigma swaps both (slots i, j are 1-based)."""
    _check_index(v, i, j)
    if i == j:
        raise IndexOutOfRange("a transposition needs two distinct indices")
    i0, j0 = i - 1, j - 1
    out = {}
    for (a, k), c in v.terms.items():
        if kind == "K":
            key = (a, _swap(k, i0, j0))
        elif kind == "P":
            key = (_swap(a, i0, j0), k)
        elif kind in ("sigma", "σ", "S"):
            key = (_swap(a, i0, j0), _swap(k, i0, j0))
        else:
            raise ValueError(f"unknown permutation kind {kind!r}")
        out[key] = c
    return v._new(out)


def gl_action(a: int, b: int, i, v: TensorState) -> TensorState:
    """E_i^{ab}: spin b at slot i becomes a; ``i='global'`` sums over slots."""
    if not (1 <= a <= v.s and 1 <= b <= v.s):
        raise IndexOutOfRange(f"spin labels must lie in 1..{v.s}")
    if i in ("global", None):
        out = v.zero()
        for j in range(1, v.N + 1):
            out = out + gl_action(a, b, j, v)
        return out
    _check_index(v, i)
    i0 = i - 1
    out = {}
    for (sp, k), c in v.terms.items():
        if sp[i0] == b:
            out[(sp[:i0] + (a,) + sp[i0 + 1:], k)] = c
    return v._new(out)


# ---------------------------------------------------------------------------
# divided differences


def divided_difference_terms(m: int, n: int):
    """(x_i^m x_j^n - x_i^n x_j^m)/(x_i - x_j) as ``[(p, q, sign)]`` with x_i^p x_j^q."""
    if m == n:
        return []
    if m > n:
        return [(t, m + n - 1 - t, 1) for t in range(n, m)]
    return [(m + n - 1 - t, t, -1) for t in range(m, n)]


def divided_difference(i: int, j: int, v: TensorState, numerator: str | None = None) -> TensorState:
    """Apply ``num/(x_i - x_j) (1 - K_ij)`` with ``num`` in {None, 'i', 'j'} (None means 1)."""
    _check_index(v, i, j)
    i0, j0 = i - 1, j - 1
    bump_i = 1 if numerator == "i" else 0
    bump_j = 1 if numerator == "j" else 0

    def fn(a, k):
        for p, q, sg in divided_difference_terms(k[i0], k[j0]):
            l = list(k)
            l[i0] = p + bump_i
            l[j0] = q + bump_j
            yield (a, tuple(l)), sg
    return _linear(v, fn)


def euler(i: int, v: TensorState) -> TensorState:
    """x_i d/dx_i."""
    _check_index(v, i)
    i0 = i - 1
    out = {}
    for (a, k), c in v.terms.items():
        if k[i0]:
            out[(a, k)] = c * k[i0]
    return v._new(out)


def partial(i: int, v: TensorState) -> TensorState:
    """d/dx_i."""
    _check_index(v, i)
    i0 = i - 1
    out: dict = {}
    for (a, k), c in v.terms.items():
        if k[i0]:
            _acc(out, (a, k[:i0] + (k[i0] - 1,) + k[i0 + 1:]), c * k[i0])
    return v._new(out)


def mul_x(i: int, v: TensorState, power: int = 1) -> TensorState:
    _check_index(v, i)
    i0 = i - 1
    return v._new({(a, k[:i0] + (k[i0] + power,) + k[i0 + 1:]): c for (a, k), c in v.terms.items()})


# ---------------------------------------------------------------------------
# Dunkl operators


def heckman_dunkl_apply(i: int, v: TensorState) -> TensorState:
    """D_i = x_i d/dx_i + beta sum_{j != i} x_i/(x_i - x_j)(1 - K_ij)."""
    _check_index(v, i)
    out = euler(i, v)
    beta = v.field.beta
    for j in range(1, v.N + 1):
        if j != i:
            out = out + divided_difference(i, j, v, "i").scale(beta)
    return out


def dunkl_d_apply(i: int, v: TensorState, form: str = "direct") -> TensorState:
    """The commuting Dunkl operator d_i.

    ``form='direct'`` uses the formula with x_j/(x_i-x_j) for j<i, x_i/(x_i-x_j)
    for j>i and the constant beta(i-1); ``form='hecke'`` uses D_i + beta sum_{j<i} K_ij.
    """
    _check_index(v, i)
    beta = v.field.beta
    if form == "hecke":
        out = heckman_dunkl_apply(i, v)
        for j in range(1, i):
            out = out + permutation_apply("K", i, j, v).scale(beta)
        return out
    if form != "direct":
        raise ValueError(f"unknown form {form!r}")
    out = euler(i, v)
    for j in range(1, v.N + 1):
        if j < i:
            out = out + divided_difference(i, j, v, "j").scale(beta)
        elif j > i:
            out = out + divided_difference(i, j, v, "i").scale(beta)
    return out + v.scale(beta * (i - 1))


def rational_dunkl_apply(i: int, v: TensorState) -> TensorState:
    """D_i = d/dx_i + beta sum_{j != i} 1/(x_i - x_j)(1 - K_ij)."""
    _check_index(v, i)
    out = partial(i, v)
    beta = v.field.beta
    for j in range(1, v.N + 1):
        if j != i:
            out = out + divided_difference(i, j, v).scale(beta)
    return out


# ---------------------------------------------------------------------------
# Hamiltonians


def _pair_term(i: int, j: int, v: TensorState) -> TensorState:
    """[(x_i+x_j)(x_i d_i - x_j d_j) - 2 x_i x_j/(x_i-x_j) (1-K_ij)] / (x_i - x_j).

    Neither summand is polynomial on its own in the spin case; the combination is.
    Writing A = x_i d_i - x_j d_j and Delta = (1-K_ij)/(x_i-x_j), the combination
    equals A + x_j Delta(A - x_i Delta) + x_j A Delta, which only needs
    first-order divided differences.
    """
    A = euler(i, v) - euler(j, v)
    dv = divided_difference(i, j, v)
    W = A - mul_x(i, dv)
    Adv = euler(i, dv) - euler(j, dv)
    return A + mul_x(j, divided_difference(i, j, W)) + mul_x(j, Adv)


def hamiltonian_H_apply(v: TensorState) -> TensorState:
    """The conjugated Calogero-Sutherland Hamiltonian on an invariant state."""
    v.check_invariant()
    out = v.zero()
    for i in range(1, v.N + 1):
        out = out + euler(i, euler(i, v))
    beta = v.field.beta
    for i in range(1, v.N + 1):
        for j in range(i + 1, v.N + 1):
            out = out + _pair_term(i, j, v).scale(beta)
    return out


def hamiltonian_Hn_apply(n: int, v: TensorState) -> TensorState:
    """H_n = sum_i d_i^n on an invariant state."""
    if n < 1:
        raise ValueError("n must be at least 1")
    v.check_invariant()
    out = v.zero()
    for i in range(1, v.N + 1):
        w = v
        for _ in range(n):
            w = dunkl_d_apply(i, w)
        out = out + w
    return out


def yangian_finite_mode(a: int, b: int, k: int, v: TensorState, rational: bool = False) -> TensorState:
    """t^{ab}_{(k)} = (-1)^k beta^{-k} sum_i E_i^{ab} D_i^k on an invariant state."""
    if k < 0:
        raise ValueError("mode index must be nonnegative")
    bv = v.field.beta_value
    if bv is not None and bv == 0:
        raise BetaZero("Yangian modes need beta to be invertible")
    v.check_invariant()
    dunkl = rational_dunkl_apply if rational else heckman_dunkl_apply
    out = v.zero()
    for i in range(1, v.N + 1):
        w = v
        for _ in range(k):
            w = dunkl(i, w)
        out = out + gl_action(a, b, i, w)
    if k:
        out = out.scale((-v.field.beta) ** (-k))
    return out


# ---------------------------------------------------------------------------
# invariant states


def symmetrize(v: TensorState) -> TensorState:
    """sum over S_N of the simultaneous permutation action (explicit, never implicit)."""
    out: dict = {}
    for perm in permutations(range(v.N)):
        for (a, k), c in v.terms.items():
            _acc(out, (tuple(a[p] for p in perm), tuple(k[p] for p in perm)), c)
    return v._new(_clean(out))


def orbit_sum(spins, exps, s: int, field: ScalarField = SYMBOLIC) -> TensorState:
    """Sum of the distinct tensors in the S_N orbit of one basis tensor."""
    pairs = list(zip(spins, exps))
    seen = set()
    terms = {}
    for perm in permutations(range(len(pairs))):
        key = tuple(pairs[p] for p in perm)
        if key in seen:
            continue
        seen.add(key)
        terms[(tuple(x for x, _ in key), tuple(y for _, y in key))] = 1
    return TensorState(len(pairs), s, field, terms)


def invariant_basis(N: int, s: int, max_degree: int, field: ScalarField = SYMBOLIC,
                    degree: int | None = None) -> list:
    """Orbit sums spanning the invariants of degree <= max_degree (or exactly ``degree``)."""
    items = [(a, k) for a in range(1, s + 1) for k in range(max_degree + 1)]
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            deg = sum(k for _, k in acc)
            if deg <= max_degree and (degree is None or deg == degree):
                out.append(tuple(acc))
            return
        for idx in range(start, len(items)):
            acc.append(items[idx])
            if sum(k for _, k in acc) <= max_degree:
                rec(idx, remaining - 1, acc)
            acc.pop()

    rec(0, N, [])
    out.sort(key=lambda ms: (sum(k for _, k in ms), ms))
    return [orbit_sum([a for a, _ in ms], [k for _, k in ms], s, field) for ms in out]


def random_state(rng: random.Random, N: int, s: int, max_degree: int, nterms: int = 3,
                 field: ScalarField = SYMBOLIC, coeff_range: int = 3) -> TensorState:
    terms: dict = {}
    for _ in range(nterms):
        a = tuple(rng.randint(1, s) for _ in range(N))
        k = [0] * N
        for _ in range(rng.randint(0, max_degree)):
            k[rng.randrange(N)] += 1
        c = rng.randint(-coeff_range, coeff_range) or 1
        terms[(a, tuple(k))] = terms.get((a, tuple(k)), 0) + c
    return TensorState(N, s, field, terms)


def random_invariant(rng: random.Random, N: int, s: int, max_degree: int, nterms: int = 2,
                     field: ScalarField = SYMBOLIC) -> TensorState:
    basis = invariant_basis(N, s, max_degree, field)
    out = TensorState(N, s, field)
    for _ in range(nterms):
        c = rng.randint(-3, 3) or 1
        out = out + rng.choice(basis).scale(c)
    return out
