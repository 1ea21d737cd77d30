"""Exact scalars in Q(beta, lam_1, ..., lam_L) and its specializations.

Symbolic scalars are reduced fractions of ``fmpq_mpoly`` polynomials with a
monic denominator; fully specialized scalars are plain ``fmpq`` rationals.
Every scalar carries the :class:`ScalarField` it lives in, and arithmetic
between scalars of different fields raises :class:`MixedScalarMode`.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

import flint

from .errors import DivisionByZero, MixedScalarMode

LAM_MAX = 12
_NAMES = ("beta",) + tuple(f"lam{a}" for a in range(1, LAM_MAX + 1))
_CTX = flint.fmpq_mpoly_ctx.get(_NAMES, "deglex")
_GENS = _CTX.gens()
_LAM_RE = re.compile(r"lam(\d+)")


def _to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    if isinstance(x, Rational):
        return flint.fmpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        f = Fraction(x)
        return flint.fmpq(f.numerator, f.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


class ScalarField:
    """A coefficient field: the symbols beta and lam_a, each possibly fixed to a rational.

    Use :meth:`get` to obtain the canonical instance; fields are compared by identity.

    Parameters
    ----------
    beta : rational or None
        Value of the coupling, or ``None`` to keep it symbolic.
    lam : sequence of rationals or None
        Values of lam_1, lam_2, ...; ``None`` keeps all of them symbolic.
    """

    _cache: dict = {}

    def __init__(self, beta, lam):
        self.beta_value = beta
        self.lam_values = lam
        self.rational = beta is not None and lam is not None
        if self.rational:
            self._zero = Scalar(flint.fmpq(0), None, self)
            self._one = Scalar(flint.fmpq(1), None, self)
        else:
            self._zero = Scalar(_CTX.from_dict({}), None, self)
            self._one = Scalar(_CTX.constant(1), None, self)
        self._subs = {}
        if beta is not None:
            self._subs["beta"] = beta
        if lam is not None:
            for a, v in enumerate(lam, start=1):
                self._subs[f"lam{a}"] = v

    @classmethod
    def get(cls, beta=None, lam=None) -> "ScalarField":
        b = None if beta is None else _to_fmpq(beta)
        l = None if lam is None else tuple(_to_fmpq(v) for v in lam)
        key = (None if b is None else (int(b.p), int(b.q)),
               None if l is None else tuple((int(v.p), int(v.q)) for v in l))
        fld = cls._cache.get(key)
        if fld is None:
            fld = cls(b, l)
            cls._cache[key] = fld
        return fld

    @property
    def symbolic_beta(self) -> bool:
        return self.beta_value is None

    @property
    def symbolic_lam(self) -> bool:
        return self.lam_values is None

    @property
    def zero(self) -> "Scalar":
        return self._zero

    @property
    def one(self) -> "Scalar":
        return self._one

    def __call__(self, x) -> "Scalar":
        """Coerce an int, Fraction, fmpq or same-field scalar into this field."""
        if isinstance(x, Scalar):
            if x.field is not self:
                raise MixedScalarMode("scalar belongs to a different field")
            return x
        q = _to_fmpq(x)
        if self.rational:
            return Scalar(q, None, self)
        return Scalar(_CTX.constant(q), None, self)

    @property
    def beta(self) -> "Scalar":
        if self.beta_value is not None:
            return self(self.beta_value)
        return Scalar(_GENS[0], None, self)

    def lam(self, a: int) -> "Scalar":
        """The constant lam_a (1-based)."""
        if not 1 <= a <= LAM_MAX:
            raise ValueError(f"lam index {a} outside 1..{LAM_MAX}")
        if self.lam_values is not None:
            if a > len(self.lam_values):
                raise ValueError(f"lam_{a} has no specialized value in this field")
            return self(self.lam_values[a - 1])
        return Scalar(_GENS[a], None, self)

    def _from_mpoly(self, num, den) -> "Scalar":
        """Reduce num/den and store in this field (substituting fixed symbols)."""
        if self._subs:
            num = num.subs(self._subs)
            if den is not None:
                den = den.subs(self._subs)
        if self.rational:
            n = _constant_value(num)
            if den is None:
                return Scalar(n, None, self)
            d = _constant_value(den)
            if d == 0:
                raise DivisionByZero("denominator vanishes under specialization")
            return Scalar(n / d, None, self)
        return Scalar(*_reduce(num, den), self)

    def describe(self) -> str:
        b = "sym" if self.beta_value is None else str(self.beta_value)
        l = "sym" if self.lam_values is None else ",".join(str(v) for v in self.lam_values)
        return f"beta={b} lam={l}"

    def __repr__(self) -> str:
        return f"ScalarField({self.describe()})"


def _constant_value(poly) -> flint.fmpq:
    if poly.is_zero():
        return flint.fmpq(0)
    if not poly.is_constant():
        raise ValueError(f"{poly} still depends on a symbol")
    return poly.coefficient(0)


def _reduce(num, den):
    if den is None:
        return num, None
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    if num.is_zero():
        return num, None
    if not den.is_constant():
        g = num.gcd(den)
        if not g.is_constant():
            num = num / g
            den = den / g
    lc = den.leading_coefficient()
    if lc != 1:
        num = num / lc
        den = den / lc
    if den.is_one():
        den = None
    return num, den


class Scalar:
    """An element of a :class:`ScalarField`. Immutable."""

    __slots__ = ("num", "den", "field")

    def __init__(self, num, den, field):
        self.num = num
        self.den = den
        self.field = field

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise MixedScalarMode(
                    f"cannot combine {self.field.describe()} with {other.field.describe()}")
            return other
        return self.field(other)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        try:
            o = self._coerce(other)
        except MixedScalarMode:
            raise
        except TypeError:
            return NotImplemented
        f = self.field
        if f.rational:
            return Scalar(self.num + o.num, None, f)
        if self.den is None and o.den is None:
            return Scalar(self.num + o.num, None, f)
        if self.den is None:
            return Scalar(*_reduce(self.num * o.den + o.num, o.den), f)
        if o.den is None:
            return Scalar(*_reduce(self.num + o.num * self.den, self.den), f)
        if self.den == o.den:
            return Scalar(*_reduce(self.num + o.num, self.den), f)
        return Scalar(*_reduce(self.num * o.den + o.num * self.den, self.den * o.den), f)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.num, self.den, self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return Scalar(self.num * other, self.den, self.field) if other else self.field.zero
        o = self._coerce(other)
        f = self.field
        if f.rational or (self.den is None and o.den is None):
            return Scalar(self.num * o.num, None, f)
        n = self.num * o.num
        d = self.den if o.den is None else (o.den if self.den is None else self.den * o.den)
        return Scalar(*_reduce(n, d), f)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZero("inverse of zero scalar")
        f = self.field
        if f.rational:
            return Scalar(1 / self.num, None, f)
        den = self.den if self.den is not None else _CTX.constant(1)
        return Scalar(*_reduce(den, self.num), f)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        f = self.field
        if f.rational:
            return Scalar(self.num ** k, None, f)
        return Scalar(self.num ** k, None if self.den is None else self.den ** k, f)

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return self.num == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field:
                return False
            return self.num == other.num and self.den == other.den
        try:
            o = self.field(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def is_rational(self) -> bool:
        """True when no symbol remains."""
        if self.field.rational:
            return True
        return self.num.is_constant() and self.den is None

    def to_fraction(self) -> Fraction:
        if self.field.rational:
            return Fraction(int(self.num.p), int(self.num.q))
        if not self.is_rational():
            raise ValueError(f"scalar {self} is not a rational number")
        q = _constant_value(self.num)
        return Fraction(int(q.p), int(q.q))

    # -- specialization -------------------------------------------------
    def specialize(self, field: ScalarField) -> "Scalar":
        """Map into ``field``, substituting whatever that field fixes.

        Only symbolic-to-more-special moves are allowed; the source field must
        not fix a symbol to a value different from the target.
        """
        src = self.field
        if src is field:
            return self
        for name, v in src._subs.items():
            if field._subs.get(name) != v:
                raise MixedScalarMode(f"cannot move {name}={v} into {field.describe()}")
        if src.rational:
            return field(self.num)
        return field._from_mpoly(self.num, self.den)

    def substitute_lam(self, values) -> "Scalar":
        """Replace lam_1..lam_k by the given rationals, staying in the same field."""
        f = self.field
        if f.rational or not values:
            return self
        sub = {f"lam{a}": _to_fmpq(v) for a, v in enumerate(values, start=1)}
        num = self.num.subs(sub)
        den = None if self.den is None else self.den.subs(sub)
        return Scalar(*_reduce(num, den), f)

    def free_symbols(self) -> set:
        if self.field.rational:
            return set()
        out = set()
        for poly in (self.num, self.den):
            if poly is None:
                continue
            for i, d in enumerate(poly.degrees()):
                if d:
                    out.add(_NAMES[i])
        return out

    # -- text -----------------------------------------------------------
    def __str__(self):
        if self.field.rational:
            return str(self.num)
        n = _LAM_RE.sub(r"lam[\1]", str(self.num))
        if self.den is None:
            return n
        d = _LAM_RE.sub(r"lam[\1]", str(self.den))
        return f"({n})/({d})"

    def __repr__(self):
        return f"Scalar({self})"

    def is_atomic_text(self) -> bool:
        """Whether ``str(self)`` can be used as a factor without parentheses."""
        t = str(self)
        if self.den is not None:
            return True
        body = t[1:] if t.startswith("-") else t
        return not any(c in body for c in "+-")


SYMBOLIC = ScalarField.get()


def as_scalar(x, field: ScalarField = SYMBOLIC) -> Scalar:
    return x if isinstance(x, Scalar) else field(x)
