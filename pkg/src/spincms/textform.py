"""Reading and writing expressions in the plain-text grammar.

Grammar (whitespace is ignored)::

    expr   := ["-"] term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*        # "/" only by a scalar
    factor := atom ["^" INT]
    atom   := INT ["/" INT] | "beta" | "lam[" INT "]"
            | "p[" INT "," INT "]" | "q[" INTS "]"
            | "x[" INTS "]" | "e[" INTS "]" | "alpha[" INT "," INT "]"
            | "(" expr ")"

``p``/``q`` build Fock elements (``q[nu]`` is the sector), ``x``/``e`` build
finite tensor states (exponents and spin word), ``alpha`` builds classical
observables.  Printing is ``str`` of the object, which uses the same tokens
with a deterministic term order, so ``parse(str(v)) == v``.
"""
from __future__ import annotations

import re

from .classical import ClassicalObservable
from .errors import ParseError
from .finite import TensorState
from .fock import FockElement
from .scalars import SYMBOLIC, Scalar, ScalarField
from .sparse import mono_mul

_TOKEN = re.compile(r"\s*(?:(\d+)|(beta|lam|alpha|p|q|x|e)\s*\[([^\]]*)\]|(beta)|([-+*/^()]))")

# raw key: (q label | None, p monomial, x exponents | None, spin word | None, alpha monomial)
_UNIT = (None, (), None, None, ())


def _tokens(text: str) -> list:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at position {pos}: {text[pos:pos + 12]!r}")
        num, name, args, bare_beta, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            if name == "beta":
                raise ParseError("beta takes no index")
            try:
                ints = tuple(int(t) for t in args.split(",")) if args.strip() else ()
            except ValueError:
                raise ParseError(f"bad index list in {m.group(0).strip()!r}") from None
            out.append(("sym", name, ints))
        elif bare_beta is not None:
            out.append(("beta",))
        else:
            out.append(("op", op))
        pos = m.end()
    return out


def _add_vec(u, v, what):
    if u is None:
        return v
    if v is None:
        return u
    if len(u) != len(v):
        raise ParseError(f"{what} vectors of different lengths")
    return tuple(a + b for a, b in zip(u, v))


def _key_mul(k1, k2):
    q1, p1, x1, e1, a1 = k1
    q2, p2, x2, e2, a2 = k2
    if e1 is not None and e2 is not None:
        raise ParseError("a term may carry only one spin word e[...]")
    return (_add_vec(q1, q2, "sector"), mono_mul(p1, p2), _add_vec(x1, x2, "exponent"),
            e1 if e1 is not None else e2, mono_mul(a1, a2))


class _Raw:
    """Sum of raw keys with scalar coefficients."""

    def __init__(self, terms, field):
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}
        self.field = field

    def __add__(self, o):
        t = dict(self.terms)
        for k, c in o.terms.items():
            t[k] = t[k] + c if k in t else c
        return _Raw(t, self.field)

    def __neg__(self):
        return _Raw({k: -c for k, c in self.terms.items()}, self.field)

    def __mul__(self, o):
        t: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                k = _key_mul(k1, k2)
                t[k] = t[k] + c1 * c2 if k in t else c1 * c2
        return _Raw(t, self.field)

    def scalar(self) -> Scalar | None:
        if all(k == _UNIT for k in self.terms):
            return self.terms.get(_UNIT, self.field.zero)
        return None


class _Parser:
    def __init__(self, text: str, field: ScalarField):
        self.toks = _tokens(text)
        self.i = 0
        self.field = field
        if not self.toks:
            raise ParseError("empty expression")

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take_op(self, *ops):
        t = self.peek()
        if t and t[0] == "op" and t[1] in ops:
            self.i += 1
            return t[1]
        return None

    def const(self, c) -> _Raw:
        return _Raw({_UNIT: self.field(c) if not isinstance(c, Scalar) else c}, self.field)

    def parse(self) -> _Raw:
        v = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input near token {self.i}")
        return v

    def expr(self) -> _Raw:
        neg = self.take_op("-")
        v = self.term()
        if neg:
            v = -v
        while True:
            op = self.take_op("+", "-")
            if op is None:
                return v
            t = self.term()
            v = v + (t if op == "+" else -t)

    def term(self) -> _Raw:
        v = self.factor()
        while True:
            op = self.take_op("*", "/")
            if op is None:
                return v
            f = self.factor()
            if op == "*":
                v = v * f
            else:
                d = f.scalar()
                if d is None:
                    raise ParseError("division is only by scalars")
                if d.is_zero():
                    raise ParseError("division by zero")
                v = v * self.const(d.inverse())

    def factor(self) -> _Raw:
        v = self.atom()
        if self.take_op("^"):
            t = self.peek()
            if not t or t[0] != "num":
                raise ParseError("exponent must be a nonnegative integer")
            self.i += 1
            out = self.const(1)
            for _ in range(t[1]):
                out = out * v
            v = out
        return v

    def atom(self) -> _Raw:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of expression")
        self.i += 1
        if t[0] == "num":
            return self.const(t[1])
        if t[0] == "beta":
            return self.const(self.field.beta)
        if t[0] == "op":
            if t[1] == "(":
                v = self.expr()
                if not self.take_op(")"):
                    raise ParseError("missing closing parenthesis")
                return v
            if t[1] == "-":
                return -self.factor()
            raise ParseError(f"unexpected operator {t[1]!r}")
        _, name, ints = t
        if name == "lam":
            if len(ints) != 1 or ints[0] < 1:
                raise ParseError("lam takes one positive index")
            try:
                return self.const(self.field.lam(ints[0]))
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        if name in ("p", "alpha"):
            if len(ints) != 2:
                raise ParseError(f"{name}[n,a] needs exactly two indices")
            n, a = ints
            if a < 1:
                raise ParseError("colour index must be positive")
            if name == "p":
                if n < 1:
                    raise ParseError("power-sum index must be positive")
                return _Raw({(None, (((n, a), 1),), None, None, ()): self.field.one}, self.field)
            return _Raw({(None, (), None, None, (((n, a), 1),)): self.field.one}, self.field)
        if not ints:
            raise ParseError(f"{name}[...] needs at least one index")
        if name == "q":
            return _Raw({(ints, (), None, None, ()): self.field.one}, self.field)
        if name == "x":
            if any(k < 0 for k in ints):
                raise ParseError("exponents must be nonnegative")
            return _Raw({(None, (), ints, None, ()): self.field.one}, self.field)
        if any(a < 1 for a in ints):
            raise ParseError("spin labels must be positive")
        return _Raw({(None, (), None, ints, ()): self.field.one}, self.field)


def parse_expression(text: str, field: ScalarField = SYMBOLIC, s: int | None = None,
                     N: int | None = None, kind: str | None = None):
    """Parse ``text`` into a FockElement, TensorState or ClassicalObservable.

    ``kind`` ("fock", "finite", "classical") forces the target; otherwise it is
    inferred from the tokens present (pure scalars become Fock constants).
    ``s`` and ``N`` fill in sizes that the text does not determine.
    """
    raw = _Parser(text, field).parse()
    has_fin = any(k[2] is not None or k[3] is not None for k in raw.terms)
    has_fock = any(k[0] is not None or k[1] for k in raw.terms)
    has_cls = any(k[4] for k in raw.terms)
    if sum((has_fin, has_fock, has_cls)) > 1:
        raise ParseError("expression mixes tokens of different spaces")
    if kind is None:
        kind = "finite" if has_fin else "classical" if has_cls else "fock"
    if kind == "finite":
        return _to_tensor(raw, field, s, N)
    if kind == "classical":
        if has_fin or has_fock:
            raise ParseError("classical observables use alpha[n,a] only")
        from .classical import UNBOUNDED
        return ClassicalObservable({k[4]: c for k, c in raw.terms.items()}, field, UNBOUNDED)
    if kind == "fock":
        if has_fin or has_cls:
            raise ParseError("Fock elements use p[n,a] and q[...] only")
        return _to_fock(raw, field, s)
    raise ParseError(f"unknown expression kind {kind!r}")


def _to_fock(raw: _Raw, field: ScalarField, s: int | None) -> FockElement:
    lens = {len(k[0]) for k in raw.terms if k[0] is not None}
    if len(lens) > 1:
        raise ParseError("sector labels of different lengths")
    cols = [a for k in raw.terms for (_, a), _ in k[1]]
    if s is None:
        s = lens.pop() if lens else max(cols, default=1)
    elif lens and lens != {s}:
        raise ParseError(f"sector labels must have length s={s}")
    if cols and max(cols) > s:
        raise ParseError(f"colour index exceeds s={s}")
    terms = {}
    for (q, pm, _, _, _), c in raw.terms.items():
        key = (q if q is not None else (0,) * s, pm, ())
        terms[key] = terms[key] + c if key in terms else c
    return FockElement(s, field, terms)


def _to_tensor(raw: _Raw, field: ScalarField, s: int | None, N: int | None) -> TensorState:
    lens = {len(v) for k in raw.terms for v in (k[2], k[3]) if v is not None}
    if N is None:
        if len(lens) != 1:
            raise ParseError("cannot determine the number of particles")
        N = lens.pop()
    elif lens and lens != {N}:
        raise ParseError(f"x[...] and e[...] must have length N={N}")
    spins = [a for k in raw.terms if k[3] is not None for a in k[3]]
    if s is None:
        s = max(spins, default=1)
    terms = {}
    for (_, _, x, e, _), c in raw.terms.items():
        if e is None:
            if s != 1:
                raise ParseError("a spin word e[...] is required when s > 1")
            e = (1,) * N
        key = (e, x if x is not None else (0,) * N)
        terms[key] = terms[key] + c if key in terms else c
    try:
        return TensorState(N, s, field, terms)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_expression(obj) -> str:
    return str(obj)
