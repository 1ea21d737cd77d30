"""Hypothesis strategies for small exact objects."""
from fractions import Fraction

from hypothesis import strategies as st

from spincms.finite import TensorState
from spincms.fock import FockElement
from spincms.scalars import SYMBOLIC
from spincms.sparse import SparsePoly

small_int = st.integers(min_value=-4, max_value=4)
small_frac = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def symbolic_scalar(draw):
    """A low-degree rational function of beta and lam_1, lam_2."""
    f = SYMBOLIC
    gens = [f.beta, f.lam(1), f.lam(2)]

    def poly():
        out = f(draw(small_frac))
        for g in gens:
            out = out + g * f(draw(small_int))
        return out

    num = poly()
    den = poly() if draw(st.booleans()) else f.one
    if den.is_zero():
        den = f.one
    return num / den


@st.composite
def sparse_poly(draw, gens=("x", "y", "z"), max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        m = {}
        for g in gens:
            e = draw(st.integers(0, 2))
            if e:
                m[g] = e
        terms[tuple(sorted(m.items()))] = draw(small_int)
    return SparsePoly(terms)


@st.composite
def tensor_state(draw, N, s, max_degree=2, max_terms=3):
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        spins = tuple(draw(st.integers(1, s)) for _ in range(N))
        exps = tuple(draw(st.integers(0, max_degree)) for _ in range(N))
        terms[(spins, exps)] = draw(small_int)
    return TensorState(N, s, SYMBOLIC, terms)


@st.composite
def fock_element(draw, s, max_grade=3, max_terms=3, nu=None):
    from spincms.fock import colored_partitions
    nu = nu if nu is not None else (0,) * s
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        g = draw(st.integers(0, max_grade))
        parts = colored_partitions(g, s)
        pm = parts[draw(st.integers(0, len(parts) - 1))]
        terms[(tuple(nu), pm, ())] = draw(small_int)
    return FockElement(s, SYMBOLIC, terms)
