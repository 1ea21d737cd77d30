from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from spincms.errors import DivisionByZero, MixedScalarMode
from spincms.scalars import SYMBOLIC, ScalarField
from spincms.sparse import SparsePoly

from .strategies import small_frac, sparse_poly, symbolic_scalar


@given(symbolic_scalar(), symbolic_scalar(), symbolic_scalar())
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == SYMBOLIC.zero


@given(symbolic_scalar())
def test_inverse(x):
    if x.is_zero():
        with pytest.raises(DivisionByZero):
            x.inverse()
    else:
        assert x * x.inverse() == SYMBOLIC.one


@given(small_frac, small_frac)
def test_rational_field_matches_fraction(a, b):
    f = ScalarField.get(2, [1, 3])
    assert (f(a) * f(b) + f(a)).to_fraction() == a * b + a


def test_fields_are_canonical():
    assert ScalarField.get(Fraction(1, 2)) is ScalarField.get("1/2")
    assert ScalarField.get() is SYMBOLIC


def test_mixed_fields_rejected():
    with pytest.raises(MixedScalarMode):
        SYMBOLIC.beta + ScalarField.get(1).one


def test_specialize_and_substitute():
    f = SYMBOLIC
    x = (f.beta * f.lam(1) + 1) / (f.beta + 1)
    g = ScalarField.get(1, [3])
    assert x.specialize(g).to_fraction() == Fraction(2)
    y = x.substitute_lam([3])
    assert y == (f.beta * 3 + 1) / (f.beta + 1)


@pytest.mark.parametrize("expr,text", [
    (lambda f: f.beta * f.beta / 2 + 3 * f.lam(1) - 1, "1/2*beta^2 + 3*lam[1] - 1"),
    (lambda f: f(Fraction(-3, 4)), "-3/4"),
    (lambda f: f.one / f.beta, "(1)/(beta)"),
])
def test_scalar_text(expr, text):
    assert str(expr(SYMBOLIC)) == text


@given(sparse_poly(), sparse_poly(), sparse_poly())
def test_sparse_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p - p).is_zero()


@given(sparse_poly(), sparse_poly())
def test_derivative_leibniz(p, q):
    assert (p * q).derivative("x") == p.derivative("x") * q + p * q.derivative("x")


@given(sparse_poly())
def test_substitution_is_a_homomorphism(p):
    x = SparsePoly.gen("x")
    sub = {"x": x + 1}
    assert (p * p).substitute(sub) == p.substitute(sub) * p.substitute(sub)
