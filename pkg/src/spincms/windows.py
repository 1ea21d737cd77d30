"""Truncated Laurent data with certified exactness windows.

Truncating an infinite series leaves a set of exponents where the stored
coefficients may be incomplete.  We bound that set by a union of half-spaces
``{e_v < lo[v]}`` and ``{e_v > hi[v]}`` and propagate the bound through sums,
products, substitutions and coefficient extraction.  Reading a coefficient
inside one of the half-spaces raises :class:`OutsideExactWindow`.
"""
from __future__ import annotations

from typing import Any, Callable

from .errors import EmptyExactWindow, OutsideExactWindow

INF = float("inf")


class Window:
    """Half-space bound on the possibly-incomplete exponents of a multi-variable object.

    ``lo[v] = c`` means missing terms may have ``e_v < c``; ``hi[v] = c`` means
    they may have ``e_v > c``.  A value of ``+inf`` in ``lo`` (or ``-inf`` in
    ``hi``) poisons the variable completely.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: dict | None = None, hi: dict | None = None):
        self.lo = dict(lo or {})
        self.hi = dict(hi or {})

    @property
    def exact(self) -> bool:
        return not self.lo and not self.hi

    def copy(self) -> "Window":
        return Window(self.lo, self.hi)

    def __repr__(self):
        return f"Window(lo={self.lo}, hi={self.hi})"

    def __eq__(self, other):
        return isinstance(other, Window) and self.lo == other.lo and self.hi == other.hi

    def union(self, other: "Window") -> "Window":
        lo = dict(self.lo)
        for v, c in other.lo.items():
            lo[v] = max(lo.get(v, -INF), c)
        hi = dict(self.hi)
        for v, c in other.hi.items():
            hi[v] = min(hi.get(v, INF), c)
        return Window(lo, hi)

    def full_extent(self, v, known: tuple) -> tuple:
        """Range of ``v``-exponents of the complete object, given the stored range ``known``."""
        others = any(u != v for u in self.lo) or any(u != v for u in self.hi)
        if others:
            return (-INF, INF)
        kmin, kmax = known
        emin, emax = kmin, kmax
        if v in self.lo:
            emin = -INF
            emax = max(emax, self.lo[v] - 1)
        if v in self.hi:
            emax = INF
            emin = min(emin, self.hi[v] + 1)
        return (emin, emax)

    def shift(self, offsets: dict) -> "Window":
        """Window after multiplying by a monomial with the given exponents."""
        lo = {v: c + offsets.get(v, 0) for v, c in self.lo.items()}
        hi = {v: c + offsets.get(v, 0) for v, c in self.hi.items()}
        return Window(lo, hi)

    def raise_in(self, v) -> "Window":
        """Window after an operation that may raise ``v``-exponents by any amount."""
        w = self.copy()
        if v in w.lo:
            w.lo[v] = INF
        return w

    def lower_in(self, v) -> "Window":
        """Window after an operation that may lower ``v``-exponents by any amount."""
        w = self.copy()
        if v in w.hi:
            w.hi[v] = -INF
        return w

    def check(self, v, e: int) -> None:
        if v in self.lo and e < self.lo[v]:
            raise OutsideExactWindow(f"[{v}^{e}] lies below the exactness window (needs >= {self.lo[v]})")
        if v in self.hi and e > self.hi[v]:
            raise OutsideExactWindow(f"[{v}^{e}] lies above the exactness window (needs <= {self.hi[v]})")

    def extract(self, v, e: int) -> "Window":
        self.check(v, e)
        return Window({u: c for u, c in self.lo.items() if u != v},
                      {u: c for u, c in self.hi.items() if u != v})

    def rename(self, old, new) -> "Window":
        return Window({(new if u == old else u): c for u, c in self.lo.items()},
                      {(new if u == old else u): c for u, c in self.hi.items()})


def full_extent_fn(window: Window, known: Callable) -> Callable:
    """Full-extent function of an object from its window and stored extents."""
    def fn(v):
        kmin, kmax = known(v)
        if kmin > kmax and window.exact:
            return None
        return window.full_extent(v, (kmin, kmax))
    return fn


def product_window(wa: Window, full_a: Callable, wb: Window, full_b: Callable) -> Window:
    """Exactness bound of a product.

    ``full_x(v)`` gives the ``(min, max)`` exponent of ``v`` over the complete
    operand (stored terms plus whatever was truncated away), or ``None`` when
    the operand is exactly zero.  Each half-space of one operand shifts by the
    extreme exponent of the other.
    """
    out = Window()
    for wx, full_y in ((wa, full_b), (wb, full_a)):
        for v, c in wx.lo.items():
            ext = full_y(v)
            if ext is None:
                continue
            out.lo[v] = max(out.lo.get(v, -INF), c + ext[1])
        for v, c in wx.hi.items():
            ext = full_y(v)
            if ext is None:
                continue
            out.hi[v] = min(out.hi.get(v, INF), c + ext[0])
    return out


class LaurentWindow:
    """Truncated Laurent series in one variable with payload coefficients.

    Parameters
    ----------
    var : str
        Name of the formal variable.
    coeffs : dict
        Exponent -> payload.  Payloads need ``+``, ``-`` and ``*``.
    zero :
        Payload used for absent exponents.
    elo, ehi : int or None
        Exactness window.  Coefficients are complete for ``elo <= e <= ehi``;
        ``None`` means unbounded on that side.
    """

    __slots__ = ("var", "coeffs", "zero", "elo", "ehi")

    def __init__(self, var: str, coeffs: dict, zero: Any, elo: int | None = None, ehi: int | None = None):
        self.var = var
        self.zero = zero
        self.coeffs = {e: c for e, c in coeffs.items() if not _is_zero(c)}
        self.elo = elo
        self.ehi = ehi
        if elo is not None and ehi is not None and elo > ehi:
            raise EmptyExactWindow(f"exactness window [{elo}, {ehi}] is empty")

    @classmethod
    def geometric(cls, var: str, ratio_payload: Callable[[int], Any], step: int, kmax: int, zero: Any,
                  start: int = 0) -> "LaurentWindow":
        """``sum_{k>=start} c_k var^(step*k)`` truncated at ``k <= kmax``.

        The dropped tail sits beyond ``step*kmax`` so the window is cut there.
        """
        coeffs = {step * k: ratio_payload(k) for k in range(start, kmax + 1)}
        if step < 0:
            return cls(var, coeffs, zero, elo=step * kmax, ehi=None)
        return cls(var, coeffs, zero, elo=None, ehi=step * kmax)

    # -- window helpers -------------------------------------------------
    @property
    def lo(self):
        return min(self.coeffs, default=None)

    @property
    def hi(self):
        return max(self.coeffs, default=None)

    def exact_window(self) -> tuple:
        return (self.elo, self.ehi)

    def _window(self) -> Window:
        w = Window()
        if self.elo is not None:
            w.lo[self.var] = self.elo
        if self.ehi is not None:
            w.hi[self.var] = self.ehi
        return w

    def _ext(self, _v):
        if not self.coeffs:
            return (INF, -INF)
        return (self.lo, self.hi)

    def _from_window(self, coeffs: dict, w: Window) -> "LaurentWindow":
        elo = w.lo.get(self.var)
        ehi = w.hi.get(self.var)
        elo = None if elo is None or elo == -INF else elo
        ehi = None if ehi is None or ehi == INF else ehi
        if elo == INF or ehi == -INF:
            raise EmptyExactWindow("exactness window was poisoned")
        return LaurentWindow(self.var, coeffs, self.zero, elo, ehi)

    # -- access ---------------------------------------------------------
    def coeff(self, e: int):
        if self.elo is not None and e < self.elo or self.ehi is not None and e > self.ehi:
            raise OutsideExactWindow(f"[{self.var}^{e}] outside exactness window [{self.elo}, {self.ehi}]")
        return self.coeffs.get(e, self.zero)

    def __getitem__(self, e: int):
        return self.coeff(e)

    def items(self):
        return sorted(self.coeffs.items())

    # -- arithmetic -----------------------------------------------------
    def _check_var(self, other: "LaurentWindow"):
        if other.var != self.var:
            raise ValueError(f"variables differ: {self.var} vs {other.var}")

    def __add__(self, other: "LaurentWindow") -> "LaurentWindow":
        self._check_var(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return self._from_window(out, self._window().union(other._window()))

    def __neg__(self):
        return LaurentWindow(self.var, {e: -c for e, c in self.coeffs.items()}, self.zero, self.elo, self.ehi)

    def __sub__(self, other: "LaurentWindow") -> "LaurentWindow":
        return self + (-other)

    def scale(self, c) -> "LaurentWindow":
        """Multiply every coefficient by a payload-compatible constant."""
        return LaurentWindow(self.var, {e: v * c for e, v in self.coeffs.items()}, self.zero, self.elo, self.ehi)

    def __mul__(self, other):
        if not isinstance(other, LaurentWindow):
            return self.scale(other)
        self._check_var(other)
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                v = c1 * c2
                e = e1 + e2
                out[e] = out[e] + v if e in out else v
        wa, wb = self._window(), other._window()
        w = product_window(wa, full_extent_fn(wa, self._ext), wb, full_extent_fn(wb, other._ext))
        return self._from_window(out, w)

    def shift(self, k: int) -> "LaurentWindow":
        """Multiply by ``var^k``."""
        return LaurentWindow(self.var, {e + k: c for e, c in self.coeffs.items()}, self.zero,
                             None if self.elo is None else self.elo + k,
                             None if self.ehi is None else self.ehi + k)

    def euler(self) -> "LaurentWindow":
        """Apply ``var d/dvar``."""
        return LaurentWindow(self.var, {e: c * e for e, c in self.coeffs.items() if e}, self.zero,
                             self.elo, self.ehi)

    def plus_part(self) -> "LaurentWindow":
        """Strictly positive powers; needs the window to reach down to exponent 1."""
        if self.elo is not None and self.elo > 1:
            raise OutsideExactWindow(f"positive part needs exactness from exponent 1, window starts at {self.elo}")
        return LaurentWindow(self.var, {e: c for e, c in self.coeffs.items() if e > 0}, self.zero, None, self.ehi)

    def minus_part(self) -> "LaurentWindow":
        """Non-positive powers; needs the window to reach up to exponent 0."""
        if self.ehi is not None and self.ehi < 0:
            raise OutsideExactWindow(f"non-positive part needs exactness up to exponent 0, window ends at {self.ehi}")
        return LaurentWindow(self.var, {e: c for e, c in self.coeffs.items() if e <= 0}, self.zero, self.elo, None)

    def map(self, fn: Callable) -> "LaurentWindow":
        """Apply a linear map to every coefficient (window unchanged)."""
        return LaurentWindow(self.var, {e: fn(c) for e, c in self.coeffs.items()}, self.zero, self.elo, self.ehi)

    def restrict(self, lo: int, hi: int) -> dict:
        """Coefficients on ``[lo, hi]``, all of which must be inside the window."""
        return {e: self.coeff(e) for e in range(lo, hi + 1)}

    def __repr__(self):
        return f"LaurentWindow({self.var}, terms={len(self.coeffs)}, exact=[{self.elo}, {self.ehi}])"


def _is_zero(c) -> bool:
    z = getattr(c, "is_zero", None)
    if z is not None:
        return z()
    return c == 0
