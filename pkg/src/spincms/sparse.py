"""Dict-based sparse polynomials with :class:`Scalar` coefficients.

A monomial is a sorted tuple of ``(generator, exponent)`` pairs with positive
exponents; generators are any hashable, orderable keys (for the power-sum
modes they are ``(n, a)`` tuples).  The empty tuple is the unit monomial.
"""
from __future__ import annotations

from typing import Callable, Iterable

from .scalars import SYMBOLIC, Scalar, ScalarField

ONE = ()


def mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for g, e in m2:
        d[g] = d.get(g, 0) + e
    return tuple(sorted(d.items()))


def mono_gen(g, e: int = 1) -> tuple:
    return ((g, e),) if e else ()


def mono_exp(m: tuple, g) -> int:
    for h, e in m:
        if h == g:
            return e
    return 0


def mono_drop(m: tuple, g, k: int = 1) -> tuple:
    """Lower the exponent of ``g`` by ``k`` (assumed present with exponent >= k)."""
    out = []
    for h, e in m:
        if h == g:
            if e > k:
                out.append((h, e - k))
        else:
            out.append((h, e))
    return tuple(out)


def mono_degree(m: tuple, weight: Callable | None = None) -> int:
    if weight is None:
        return sum(e for _, e in m)
    return sum(weight(g) * e for g, e in m)


class SparsePoly:
    """A polynomial as a mapping monomial -> nonzero Scalar.

    >>> from spincms.scalars import SYMBOLIC
    >>> x = SparsePoly.gen('x')
    >>> str((x + 1) * (x - 1))
    'x^2 - 1'
    """

    __slots__ = ("terms", "field")

    def __init__(self, terms: dict | None = None, field: ScalarField = SYMBOLIC):
        self.terms = {}
        self.field = field
        if terms:
            for m, c in terms.items():
                c = field(c)
                if not c.is_zero():
                    self.terms[m] = c

    @classmethod
    def _raw(cls, terms: dict, field: ScalarField) -> "SparsePoly":
        p = cls.__new__(cls)
        p.terms = terms
        p.field = field
        return p

    @classmethod
    def gen(cls, g, field: ScalarField = SYMBOLIC) -> "SparsePoly":
        return cls._raw({((g, 1),): field.one}, field)

    @classmethod
    def constant(cls, c, field: ScalarField = SYMBOLIC) -> "SparsePoly":
        c = field(c)
        return cls._raw({} if c.is_zero() else {ONE: c}, field)

    def _like(self, terms: dict) -> "SparsePoly":
        return type(self)._raw(terms, self.field)

    def copy(self) -> "SparsePoly":
        return self._like(dict(self.terms))

    # -- arithmetic -----------------------------------------------------
    def _lift(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return other
        return type(self).constant(other, self.field)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v.is_zero():
                    del out[m]
                else:
                    out[m] = v
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "SparsePoly":
        c = self.field(c) if not isinstance(c, Scalar) else c
        if c.is_zero():
            return self._like({})
        return self._like({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = c1 * c2
                w = out.get(m)
                out[m] = v if w is None else w + v
        return self._like({m: c for m, c in out.items() if not c.is_zero()})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = type(self).constant(1, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            try:
                other = self._lift(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def coeff(self, m: tuple) -> Scalar:
        return self.terms.get(m, self.field.zero)

    def gens(self) -> set:
        return {g for m in self.terms for g, _ in m}

    def degree(self, weight: Callable | None = None) -> int:
        return max((mono_degree(m, weight) for m in self.terms), default=-1)

    def sorted_terms(self, weight: Callable | None = None) -> list:
        """Terms in graded-lex order (by weighted degree, then monomial tuple)."""
        return sorted(self.terms.items(), key=lambda mc: (mono_degree(mc[0], weight), mc[0]))

    def map_terms(self, fn: Callable[[tuple, Scalar], Iterable]) -> "SparsePoly":
        """Linear map defined on monomials: ``fn(m, c)`` yields ``(m', c')`` pairs."""
        out: dict = {}
        for m, c in self.terms.items():
            for m2, c2 in fn(m, c):
                w = out.get(m2)
                out[m2] = c2 if w is None else w + c2
        return self._like({m: c for m, c in out.items() if not c.is_zero()})

    def derivative(self, g) -> "SparsePoly":
        def d(m, c):
            e = mono_exp(m, g)
            if e:
                yield mono_drop(m, g), c * e
        return self.map_terms(d)

    def substitute(self, values: dict) -> "SparsePoly":
        """Replace generators by polynomials (generators absent from ``values`` stay)."""
        out = self._like({})
        cache: dict = {}
        for m, c in self.terms.items():
            term = self._like({(): c})
            rest = []
            for g, e in m:
                if g in values:
                    key = (g, e)
                    if key not in cache:
                        cache[key] = self._lift(values[g]) ** e
                    term = term * cache[key]
                else:
                    rest.append((g, e))
            if rest:
                term = term * self._like({tuple(rest): self.field.one})
            out = out + term
        return out

    def truncate(self, keep: Callable[[tuple], bool]) -> "SparsePoly":
        return self._like({m: c for m, c in self.terms.items() if keep(m)})

    def specialize(self, field: ScalarField) -> "SparsePoly":
        out = {}
        for m, c in self.terms.items():
            c2 = c.specialize(field)
            if not c2.is_zero():
                out[m] = c2
        return type(self)._raw(out, field)

    def map_coeffs(self, fn: Callable[[Scalar], Scalar]) -> "SparsePoly":
        out = {}
        for m, c in self.terms.items():
            c2 = fn(c)
            if not c2.is_zero():
                out[m] = c2
        return self._like(out)

    # -- text -----------------------------------------------------------
    def gen_text(self, g) -> str:
        return str(g)

    def mono_text(self, m: tuple) -> str:
        parts = []
        for g, e in m:
            t = self.gen_text(g)
            parts.append(t if e == 1 else f"{t}^{e}")
        return "*".join(parts)

    def __str__(self):
        return format_terms([(self.mono_text(m), c) for m, c in reversed(self.sorted_terms())])

    def __repr__(self):
        return f"{type(self).__name__}({self})"


def format_terms(items: list) -> str:
    """Render ``(monomial_text, coefficient)`` pairs as a signed sum."""
    if not items:
        return "0"
    out = []
    for i, (mt, c) in enumerate(items):
        ct = str(c)
        neg = False
        if c.is_atomic_text() and ct.startswith("-"):
            neg, ct = True, ct[1:]
        if not mt:
            body = ct
        elif ct == "1":
            body = mt
        else:
            body = (ct if c.is_atomic_text() else f"({ct})") + "*" + mt
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
