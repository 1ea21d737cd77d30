import pytest
from hypothesis import given, strategies as st

from spincms.errors import EmptyExactWindow, OutsideExactWindow
from spincms.windows import LaurentWindow


def series(coeffs, elo=None, ehi=None):
    return LaurentWindow("x", coeffs, 0, elo, ehi)


def test_coefficient_outside_window_raises():
    g = LaurentWindow.geometric("x", lambda k: 1, 1, 3, 0)
    assert g.coeff(3) == 1
    with pytest.raises(OutsideExactWindow):
        g.coeff(4)


def test_empty_window_rejected():
    with pytest.raises(EmptyExactWindow):
        series({}, elo=2, ehi=1)


@given(st.integers(1, 6), st.integers(1, 6))
def test_truncated_geometric_product(m, n):
    # (sum_{k<=m} x^k)(sum_{k<=n} x^k) is exact up to x^min(m,n), where it is k+1.
    a = LaurentWindow.geometric("x", lambda k: 1, 1, m, 0)
    b = LaurentWindow.geometric("x", lambda k: 1, 1, n, 0)
    c = a * b
    hi = min(m, n)
    assert c.exact_window()[1] == hi
    for k in range(hi + 1):
        assert c.coeff(k) == k + 1


def test_polynomial_times_series_window():
    # A Laurent polynomial x^{-1} + x^2 times a series exact to x^4: exact to x^3.
    p = series({-1: 1, 2: 1})
    g = LaurentWindow.geometric("x", lambda k: 1, 1, 4, 0)
    assert (p * g).exact_window()[1] == 3
