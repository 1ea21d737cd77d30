import pytest
from hypothesis import given, strategies as st

from spincms import classical as cl
from spincms.errors import DimensionMismatch
from spincms.scalars import SYMBOLIC

PB = cl.poisson_bracket


@st.composite
def observable(draw, s=2, nmodes=2):
    terms = {}
    for _ in range(draw(st.integers(1, 3))):
        mono = {}
        for _ in range(draw(st.integers(1, 3))):
            g = (draw(st.integers(-nmodes, nmodes)), draw(st.integers(1, s)))
            mono[g] = mono.get(g, 0) + 1
        terms[tuple(sorted(mono.items()))] = draw(st.integers(-3, 3))
    return cl.ClassicalObservable(terms, SYMBOLIC, cl.UNBOUNDED)


def alpha(n, a):
    return cl.ClassicalObservable.alpha(n, a, SYMBOLIC, cl.UNBOUNDED)


@given(observable(), observable())
def test_antisymmetry(f, g):
    assert (PB(f, g) + PB(g, f)).is_zero()


@given(observable(), observable(), observable())
def test_leibniz_and_jacobi(f, g, h):
    assert PB(f, g * h) == PB(f, g) * h + g * PB(f, h)
    assert (PB(f, PB(g, h)) + PB(g, PB(h, f)) + PB(h, PB(f, g))).is_zero()


@pytest.mark.parametrize("n,m,a,b", [(1, -1, 1, 1), (2, -2, 2, 2), (1, -1, 1, 2), (2, 1, 1, 1), (0, 0, 1, 1)])
def test_mode_brackets(n, m, a, b):
    want = n if (a == b and n + m == 0) else 0
    assert PB(alpha(n, a), alpha(m, b)) == want


def test_level_truncation():
    x = cl.ClassicalObservable({(((3, 1), 1),): 1, (((1, 1), 1),): 1}, SYMBOLIC, cutoff=2)
    assert x.terms == {(((1, 1), 1),): SYMBOLIC.one}
    assert cl.level((((2, 1), 2), ((-1, 1), 1))) == 4


@pytest.mark.parametrize("s,M", [(1, 2), (1, 3), (2, 2)])
def test_equations_of_motion_two_routes(s, M):
    sysm = cl.ClassicalSystem(s, M)
    res = cl.eom_check(sysm, 1)
    assert all(not v for v in res.values()), res
    res2 = cl.eom_check(sysm, 2)
    assert all(not v for k, v in res2.items() if k[1] == "+"), res2


@pytest.mark.parametrize("s,M", [(1, 2), (2, 2)])
def test_lax_three_way(s, M):
    sysm = cl.ClassicalSystem(s, M)
    for k, parts in cl.lax_check(sysm, 2).items():
        assert all(not v for v in parts.values()), (k, parts)


def test_lax_zero_mode_example():
    # at alpha = 0 except alpha_{0,a}: L z^2 = (2 + sum) z^2, M z = (1 + 2 sum) z
    sysm = cl.ClassicalSystem(2, 3)
    vals = {(0, 1): 7, (0, 2): 5}

    def at(c):
        return c.substitute({g: vals.get(g, 0) for g in c.gens()})

    Lf = sysm.lax_apply("L", sysm.monomial(2))
    Mf = sysm.lax_apply("M", sysm.monomial(1))
    assert at(Lf.coeff(2)) == 14 and at(Lf.coeff(1)).is_zero()
    assert at(Mf.coeff(1)) == 25 and at(Mf.coeff(2)).is_zero()


def test_dropping_kernel_term_breaks_lax(monkeypatch):
    def partial(s, lev, f):
        terms = cl._hamiltonian_terms(s, lev, f)
        return sum(terms[1:3], terms[0])

    monkeypatch.setattr(cl, "_hamiltonian", partial)
    sysm = cl.ClassicalSystem(2, 2)
    assert any(v for parts in cl.lax_check(sysm, 1).values() for v in parts.values())


def test_conservation():
    sysm = cl.ClassicalSystem(2, 3)
    c = sysm.obs({})
    for a in (1, 2):
        for n in range(1, 4):
            c = c + sysm.alpha(-n, a) * sysm.alpha(n, a)
    assert sysm.flow(c).is_zero()
    assert sysm.flow(sysm.hamiltonian()).is_zero()


def test_outside_window_raises():
    from spincms.errors import OutsideExactWindow
    sysm = cl.ClassicalSystem(1, 2)
    with pytest.raises(OutsideExactWindow):
        sysm.phi_minus(1).coeff(-sysm.nmax - 1)


def test_bad_system():
    with pytest.raises(DimensionMismatch):
        cl.ClassicalSystem(0, 2)
