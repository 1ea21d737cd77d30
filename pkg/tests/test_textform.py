import pytest
from hypothesis import given, strategies as st

from spincms import fock
from spincms.classical import ClassicalObservable, UNBOUNDED
from spincms.errors import ParseError
from spincms.finite import TensorState
from spincms.scalars import SYMBOLIC, ScalarField
from spincms.textform import parse_expression

from .strategies import fock_element, symbolic_scalar, tensor_state


@given(fock_element(2, nu=(1, -1)), symbolic_scalar())
def test_fock_round_trip(F, c):
    F = F.scale(c)
    assert parse_expression(str(F), s=2) == F


@given(tensor_state(3, 2), symbolic_scalar())
def test_finite_round_trip(v, c):
    v = v.scale(c)
    assert parse_expression(str(v), N=3, s=2, kind="finite") == v


@given(st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(1, 2)), st.integers(1, 2), min_size=1, max_size=3),
       st.integers(-5, 5))
def test_classical_round_trip(mono, c):
    obs = ClassicalObservable({tuple(sorted(mono.items())): c}, SYMBOLIC, UNBOUNDED)
    assert parse_expression(str(obs), kind="classical") == obs


@pytest.mark.parametrize("text,expect", [
    ("p[1,1]^2 - 2*p[2,1]", lambda: fock.FockElement.vacuum(1).mul_p(1, 1).mul_p(1, 1)
     - fock.FockElement.vacuum(1).mul_p(2, 1).scale(2)),
    ("(1 - beta)/2*p[1,1]", lambda: fock.FockElement.vacuum(1).mul_p(1, 1).scale((1 - SYMBOLIC.beta) / 2)),
    ("lam[1]*q[1]", lambda: fock.FockElement.vacuum(1, nu=(1,)).scale(SYMBOLIC.lam(1))),
    ("3/4", lambda: fock.FockElement.vacuum(1).scale(SYMBOLIC(3) / 4)),
])
def test_parse_fock(text, expect):
    assert parse_expression(text, s=1) == expect()


def test_parse_finite_defaults_to_single_spin():
    v = parse_expression("x[1,0] + 2*x[0,1]", kind="finite")
    assert v == TensorState(2, 1, SYMBOLIC, {((1, 1), (1, 0)): 1, ((1, 1), (0, 1)): 2})


def test_parse_into_rational_field():
    f = ScalarField.get(2, [3])
    F = parse_expression("beta*lam[1]*p[1,1]", f, s=1)
    assert F == fock.FockElement.vacuum(1, f).mul_p(1, 1).scale(6)


@pytest.mark.parametrize("text", [
    "p[0]", "p[0,1]", "p[1]", "x[1,0]*e[1,1]*e[1,1]", "p[1,1] / p[1,1]", "p[1,1] +", "foo",
    "x[1,0] + x[1]", "p[1,1]*x[1]", "(p[1,1]", "1/0", "p[1,1]^-1", "lam[0]",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_expression(text)


def test_spin_word_required_for_several_spins():
    with pytest.raises(ParseError):
        parse_expression("x[1,0]", s=2, kind="finite")
