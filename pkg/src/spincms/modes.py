"""Polynomials in the modes p_{n,a} graded by an integer label, with Laurent aux variables.

This is the shared workhorse of the Fock-space and polysym layers.  A term
key is ``(label, pmono, auxexp)``:

* ``label`` is a tuple of ``s`` integers (a charge sector, or a weight),
* ``pmono`` is a monomial over generators ``(n, a)`` with ``n >= 1``,
* ``auxexp`` is a tuple of integer exponents aligned with ``self.aux``.

Zero modes p_{0,a} are never stored; multiplying by them uses
:meth:`ModeSum.zero_mode`, which subclasses define.  Truncated series
products carry a :class:`~spincms.windows.Window`.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb

from .errors import DimensionMismatch, IndexOutOfRange
from .scalars import SYMBOLIC, Scalar, ScalarField
from .sparse import format_terms, mono_drop, mono_exp, mono_mul
from .windows import INF, Window, full_extent_fn, product_window


@lru_cache(maxsize=None)
def _shift_expansion(part: tuple, sign: int) -> tuple:
    """Expand prod_n (p_n + sign*w^n)^{e_n} for a single colour.

    ``part`` is a tuple of ``(n, e)``.  Returns ``((new_part, w_exp, coeff), ...)``.
    """
    out = {((), 0): 1}
    for n, e in part:
        nxt: dict = {}
        for (pm, we), c in out.items():
            for j in range(e + 1):
                rest = e - j
                pm2 = pm + ((n, rest),) if rest else pm
                key = (pm2, we + n * j)
                nxt[key] = nxt.get(key, 0) + c * comb(e, j) * sign ** j
        out = nxt
    return tuple((pm, we, c) for (pm, we), c in out.items() if c)


def _split_colour(pmono: tuple, b: int):
    part, rest = [], []
    for (n, a), e in pmono:
        if a == b:
            part.append((n, e))
        else:
            rest.append(((n, a), e))
    return tuple(part), tuple(rest)


def _join(rest: tuple, part: tuple, b: int) -> tuple:
    if not part:
        return rest
    return tuple(sorted(rest + tuple(((n, b), e) for n, e in part)))


def pmono_grade(pmono: tuple) -> int:
    return sum(n * e for (n, _), e in pmono)


def pmono_text(pmono: tuple) -> str:
    parts = []
    for (n, a), e in pmono:
        t = f"p[{n},{a}]"
        parts.append(t if e == 1 else f"{t}^{e}")
    return "*".join(parts)


class ModeSum:
    """Sparse sum of ``coeff * q^label * p-monomial * aux-monomial`` terms."""

    __slots__ = ("terms", "aux", "window", "field", "s")

    def __init__(self, s: int, field: ScalarField = SYMBOLIC, terms: dict | None = None,
                 aux: tuple = (), window: Window | None = None):
        self.s = s
        self.field = field
        self.aux = tuple(aux)
        self.window = window if window is not None else Window()
        self.terms = {}
        if terms:
            for k, c in terms.items():
                c = field(c)
                if not c.is_zero():
                    self.terms[k] = c

    # -- construction ---------------------------------------------------
    def _new(self, terms: dict, aux: tuple | None = None, window: Window | None = None) -> "ModeSum":
        x = type(self).__new__(type(self))
        x.s = self.s
        x.field = self.field
        x.aux = self.aux if aux is None else aux
        x.window = self.window if window is None else window
        x.terms = terms
        self._copy_extra(x)
        return x

    def _copy_extra(self, other: "ModeSum") -> None:
        """Hook for subclasses carrying extra attributes."""

    def zero_mode(self, label: tuple, a: int) -> Scalar:
        raise NotImplementedError

    def zero(self) -> "ModeSum":
        return self._new({}, window=Window())

    def monomial(self, label: tuple, pmono: tuple = (), auxexp: tuple | None = None, coeff=1) -> "ModeSum":
        if auxexp is None:
            auxexp = (0,) * len(self.aux)
        c = self.field(coeff)
        return self._new({} if c.is_zero() else {(tuple(label), pmono, tuple(auxexp)): c}, window=Window())

    # -- basic algebra --------------------------------------------------
    def _compatible(self, other: "ModeSum") -> None:
        if other.s != self.s:
            raise DimensionMismatch(f"spin counts differ: {self.s} vs {other.s}")

    def _aligned(self, other: "ModeSum") -> tuple:
        """Bring two operands to a common aux tuple."""
        if self.aux == other.aux:
            return self, other
        aux = tuple(dict.fromkeys(self.aux + other.aux))
        return self.with_aux(aux), other.with_aux(aux)

    def __add__(self, other: "ModeSum") -> "ModeSum":
        self._compatible(other)
        a, b = self._aligned(other)
        out = dict(a.terms)
        for k, c in b.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v.is_zero():
                    del out[k]
                else:
                    out[k] = v
        return a._new(out, window=a.window.union(b.window))

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ModeSum":
        c = self.field(c)
        if c.is_zero():
            return self._new({})
        if c == 1:
            return self
        return self._new({k: v * c for k, v in self.terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ModeSum):
            return NotImplemented
        if self.s != other.s:
            return False
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __len__(self):
        return len(self.terms)

    def labels(self) -> set:
        return {k[0] for k in self.terms}

    def grades(self) -> set:
        return {pmono_grade(k[1]) for k in self.terms}

    def map_coeffs(self, fn) -> "ModeSum":
        out = {}
        for k, c in self.terms.items():
            c2 = fn(c)
            if not c2.is_zero():
                out[k] = c2
        return self._new(out)

    def relabel(self, fn) -> "ModeSum":
        """Replace every label by ``fn(label)``."""
        out: dict = {}
        for (lab, pm, ax), c in self.terms.items():
            _acc(out, (fn(lab), pm, ax), c)
        return self._new(_clean(out))

    # -- aux variables --------------------------------------------------
    def with_aux(self, aux: tuple) -> "ModeSum":
        aux = tuple(aux)
        if aux == self.aux:
            return self
        idx = [self.aux.index(v) if v in self.aux else None for v in aux]
        for i, v in enumerate(self.aux):
            if v not in aux and any(k[2][i] for k in self.terms):
                raise ValueError(f"cannot drop aux variable {v} with nonzero exponents")
        out = {}
        for (lab, pm, ax), c in self.terms.items():
            out[(lab, pm, tuple(0 if j is None else ax[j] for j in idx))] = c
        w = Window({v: c for v, c in self.window.lo.items() if v in aux},
                   {v: c for v, c in self.window.hi.items() if v in aux})
        return self._new(out, aux=aux, window=w)

    def rename(self, old: str, new: str) -> "ModeSum":
        if old not in self.aux:
            raise ValueError(f"no aux variable {old}")
        if new in self.aux:
            raise ValueError(f"aux variable {new} already present")
        aux = tuple(new if v == old else v for v in self.aux)
        return self._new(dict(self.terms), aux=aux, window=self.window.rename(old, new))

    def drop_aux(self, var: str) -> "ModeSum":
        return self.with_aux(tuple(v for v in self.aux if v != var))

    def extent(self, var: str) -> tuple:
        """Stored ``(min, max)`` exponent of ``var`` (``(INF, -INF)`` when empty)."""
        if not self.terms:
            return (INF, -INF)
        if var not in self.aux:
            return (0, 0)
        i = self.aux.index(var)
        es = [k[2][i] for k in self.terms]
        return (min(es), max(es))

    def max_exp(self, var: str) -> int:
        e = self.extent(var)[1]
        return 0 if e == -INF else e

    def min_exp(self, var: str) -> int:
        e = self.extent(var)[0]
        return 0 if e == INF else e

    def mul_aux(self, exps: dict, coeff=1) -> "ModeSum":
        """Multiply by ``coeff * prod v^exps[v]``."""
        x = self.with_aux(tuple(dict.fromkeys(self.aux + tuple(exps))))
        shift = tuple(exps.get(v, 0) for v in x.aux)
        c = x.field(coeff)
        out = {}
        for (lab, pm, ax), v in x.terms.items():
            out[(lab, pm, tuple(a + b for a, b in zip(ax, shift)))] = v * c
        return x._new(_clean(out), window=x.window.shift(exps))

    def coeff(self, var: str, e: int) -> "ModeSum":
        """The coefficient of ``var^e`` (the variable is removed from the aux tuple)."""
        if var not in self.aux:
            w = self.window.extract(var, e)
            return self._new(dict(self.terms) if e == 0 else {}, window=w)
        w = self.window.extract(var, e)
        i = self.aux.index(var)
        aux = self.aux[:i] + self.aux[i + 1:]
        out = {}
        for (lab, pm, ax), c in self.terms.items():
            if ax[i] == e:
                out[(lab, pm, ax[:i] + ax[i + 1:])] = c
        return self._new(out, aux=aux, window=w)

    def euler(self, var: str) -> "ModeSum":
        """Apply ``var d/dvar``."""
        if var not in self.aux:
            return self._new({})
        i = self.aux.index(var)
        out = {}
        for k, c in self.terms.items():
            e = k[2][i]
            if e:
                out[k] = c * e
        return self._new(out)

    def d_aux(self, var: str) -> "ModeSum":
        """Apply ``d/dvar``."""
        if var not in self.aux:
            return self._new({})
        i = self.aux.index(var)
        out = {}
        for (lab, pm, ax), c in self.terms.items():
            e = ax[i]
            if e:
                out[(lab, pm, ax[:i] + (e - 1,) + ax[i + 1:])] = c * e
        return self._new(out, window=self.window.shift({var: -1}))

    # -- mode operators -------------------------------------------------
    def _check_colour(self, a: int) -> None:
        if not 1 <= a <= self.s:
            raise IndexOutOfRange(f"colour {a} outside 1..{self.s}")

    def mul_p(self, n: int, a: int) -> "ModeSum":
        """Multiply by p_{n,a}; for ``n = 0`` this is the zero mode."""
        self._check_colour(a)
        if n == 0:
            return self.mul_zero_mode(a)
        g = ((n, a), 1)
        out = {}
        for (lab, pm, ax), c in self.terms.items():
            out[(lab, mono_mul(pm, (g,)), ax)] = c
        return self._new(out)

    def mul_zero_mode(self, a: int, shift: int = 0) -> "ModeSum":
        """Multiply by (zero mode of colour a) + shift, evaluated per label."""
        cache: dict = {}
        out = {}
        for k, c in self.terms.items():
            lab = k[0]
            z = cache.get(lab)
            if z is None:
                z = self.zero_mode(lab, a) + shift
                cache[lab] = z
            v = c * z
            if not v.is_zero():
                out[k] = v
        return self._new(out)

    def d_p(self, n: int, a: int) -> "ModeSum":
        """Apply the derivative with respect to p_{n,a} (``n >= 1``)."""
        self._check_colour(a)
        g = (n, a)
        out = {}
        for (lab, pm, ax), c in self.terms.items():
            e = mono_exp(pm, g)
            if e:
                out[(lab, mono_drop(pm, g), ax)] = c * e
        return self._new(out)

    def alpha(self, n: int, a: int) -> "ModeSum":
        """Heisenberg generator: p_{-n} for n<0, n d/dp_n for n>0, zero mode for n=0."""
        if n < 0:
            return self.mul_p(-n, a)
        if n == 0:
            return self.mul_zero_mode(a)
        return self.d_p(n, a).scale(n)

    def shift_label(self, a: int, delta: int) -> "ModeSum":
        self._check_colour(a)
        def fn(lab):
            return lab[:a - 1] + (lab[a - 1] + delta,) + lab[a:]
        return self.relabel(fn)

    def subst(self, b: int, var: str, sign: int, label_shift: int) -> "ModeSum":
        """The translation p_{n,b} -> p_{n,b} + sign*var^n (n >= 1), label_b += label_shift.

        With ``sign=+1, label_shift=-1`` this is the vertex operator V_b(var);
        with ``sign=-1, label_shift=+1`` it is its inverse.
        """
        self._check_colour(b)
        x = self if var in self.aux else self.with_aux(self.aux + (var,))
        i = x.aux.index(var)
        out: dict = {}
        for (lab, pm, ax), c in x.terms.items():
            lab2 = lab[:b - 1] + (lab[b - 1] + label_shift,) + lab[b:]
            part, rest = _split_colour(pm, b)
            if not part:
                _acc(out, (lab2, pm, ax), c)
                continue
            for part2, we, k in _shift_expansion(part, sign):
                ax2 = ax[:i] + (ax[i] + we,) + ax[i + 1:]
                _acc(out, (lab2, _join(rest, part2, b), ax2), c * k)
        return x._new(_clean(out), window=x.window.raise_in(var))

    def vertex(self, b: int, var: str, inverse: bool = False) -> "ModeSum":
        return self.subst(b, var, -1, 1) if inverse else self.subst(b, var, 1, -1)

    def phi_plus(self, b: int, var: str, power: int = 1) -> "ModeSum":
        """Apply sum_{n>=1} var^n n^power d/dp_{n,b}."""
        self._check_colour(b)
        x = self if var in self.aux else self.with_aux(self.aux + (var,))
        i = x.aux.index(var)
        out: dict = {}
        for (lab, pm, ax), c in x.terms.items():
            for (n, a), e in pm:
                if a != b:
                    continue
                ax2 = ax[:i] + (ax[i] + n,) + ax[i + 1:]
                _acc(out, (lab, mono_drop(pm, (n, a)), ax2), c * (e * n ** power))
        return x._new(_clean(out), window=x.window.raise_in(var))

    def mul_phi_minus(self, b: int, var: str, target: int | None = None, nmax: int | None = None,
                      zero: Scalar | None = None) -> "ModeSum":
        """Multiply by phi_b^-(var) = sum_{n>=0} p_{n,b} var^{-n}, truncated at ``n <= nmax``.

        When ``nmax`` is omitted it is chosen so that the coefficient of
        ``var^target`` is certified.  ``zero`` overrides the zero mode value.
        """
        self._check_colour(b)
        x = self if var in self.aux else self.with_aux(self.aux + (var,))
        if nmax is None:
            if target is None:
                raise ValueError("give a target exponent or an explicit truncation order")
            nmax = max(0, x.max_exp(var) - target)
        i = x.aux.index(var)
        out: dict = {}
        zcache: dict = {}
        for (lab, pm, ax), c in x.terms.items():
            z = zero
            if z is None:
                z = zcache.get(lab)
                if z is None:
                    z = x.zero_mode(lab, b)
                    zcache[lab] = z
            if not z.is_zero():
                _acc(out, (lab, pm, ax), c * z)
            for n in range(1, nmax + 1):
                ax2 = ax[:i] + (ax[i] - n,) + ax[i + 1:]
                _acc(out, (lab, mono_mul(pm, (((n, b), 1),)), ax2), c)
        tail = Window({var: -nmax})
        w = product_window(x.window, full_extent_fn(x.window, x.extent), tail,
                           lambda v: (-INF, 0) if v == var else (0, 0))
        return x._new(_clean(out), window=w)

    def mul_series(self, coeffs: dict, tail: Window, full_extent) -> "ModeSum":
        """Multiply by a truncated aux series ``sum coeffs[exps] * monomial``.

        ``coeffs`` maps tuples of ``(var, exp)`` pairs to rationals; ``tail``
        bounds the exponents of the dropped part and ``full_extent(v)`` gives the
        exponent range of the complete series.
        """
        vars_ = tuple(dict.fromkeys(self.aux + tuple(v for key in coeffs for v, _ in key)))
        x = self.with_aux(vars_)
        series = []
        for key, k in coeffs.items():
            d = dict(key)
            series.append((tuple(d.get(v, 0) for v in vars_), x.field(k)))
        out: dict = {}
        for (lab, pm, ax), c in x.terms.items():
            for sh, k in series:
                _acc(out, (lab, pm, tuple(a + b for a, b in zip(ax, sh))), c * k)
        w = product_window(x.window, full_extent_fn(x.window, x.extent), tail, full_extent)
        return x._new(_clean(out), aux=vars_, window=w)

    def mul_geometric(self, num: str, den: str, target: int, start: int = 0, weight: int = 0,
                      kmax: int | None = None) -> "ModeSum":
        """Multiply by ``sum_{k>=start} k^weight (num/den)^k``, certified for ``[den^target]``."""
        if kmax is None:
            top = self.max_exp(den) if den in self.aux else 0
            kmax = max(start, top - target)
        coeffs = {}
        for k in range(start, kmax + 1):
            c = k ** weight
            if c:
                coeffs[((num, k), (den, -k))] = c
        tail = Window({den: -kmax})
        def full(v):
            if v == den:
                return (-INF, -start)
            if v == num:
                return (start, INF)
            return (0, 0)
        return self.mul_series(coeffs, tail, full)

    # -- text -----------------------------------------------------------
    def aux_text(self, ax: tuple) -> str:
        parts = []
        for v, e in zip(self.aux, ax):
            if e:
                parts.append(v if e == 1 else f"{v}^{e}")
        return "*".join(parts)

    def label_text(self, lab: tuple) -> str:
        return "" if not any(lab) else "q[" + ",".join(str(v) for v in lab) + "]"

    def sort_key(self, k):
        lab, pm, ax = k
        return (pmono_grade(pm), pm, lab, ax)

    def sorted_items(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: self.sort_key(kv[0]))

    def __str__(self):
        items = []
        for (lab, pm, ax), c in self.sorted_items():
            mt = "*".join(t for t in (self.label_text(lab), pmono_text(pm), self.aux_text(ax)) if t)
            items.append((mt, c))
        return format_terms(items)

    def __repr__(self):
        return f"{type(self).__name__}({self})"


def _acc(out: dict, key, c) -> None:
    v = out.get(key)
    out[key] = c if v is None else v + c


def _clean(out: dict) -> dict:
    return {k: c for k, c in out.items() if not c.is_zero()}
