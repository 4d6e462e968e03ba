from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from conftest import coeffs, frac, linear_invertible, nonzero_coeffs, series
from segrejet import linalg
from segrejet.coeff import I, ONE, Coeff
from segrejet.errors import DomainError, SingularJacobian, StructuralError
from segrejet.series import MultiSeries, SeriesVec, invert_map, series_matrix_det, solve_ift, vars_vec

X = sp.symbols("x0:4")


def to_sympy(s):
    return sum(
        (sp.Rational(frac(c.re)) + sp.I * sp.Rational(frac(c.im))) * sp.Mul(*[X[i] ** e for i, e in enumerate(k)])
        for k, c in s
    ) + sp.Integer(0)


def sympy_jet(expr, arity, K):
    poly = sp.Poly(sp.expand(expr), *X[:arity])
    out = {}
    for k, c in poly.terms():
        if sum(k) <= K:
            re, im = sp.re(c), sp.im(c)
            out[k] = Coeff(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    return MultiSeries(arity, K, out)


# coefficients -------------------------------------------------------------


@given(coeffs, coeffs, coeffs)
def test_coeff_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == ONE


@given(coeffs, coeffs)
def test_coeff_conjugation_is_a_ring_map(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a.conjugate().conjugate() == a
    assert (a * a.conjugate()).is_real()


def test_coeff_rejects_floats():
    with pytest.raises(TypeError):
        Coeff.of(0.5)
    assert Coeff.of(3 + 2j) == Coeff(3, 2)
    assert I * I == Coeff(-1)


def test_coeff_strings():
    assert Coeff(Fraction(1, 2), -3).as_strings() == ("1/2", "-3/1")


# ring structure -----------------------------------------------------------


@given(series(), series(), series())
def test_series_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == MultiSeries.zero(2, 4)


@given(series(), series())
def test_product_matches_sympy(f, g):
    assert f * g == sympy_jet(to_sympy(f) * to_sympy(g), 2, 4)


@given(series(), series())
def test_conjugation_respects_products(f, g):
    assert (f * g).conjugate() == f.conjugate() * g.conjugate()
    assert f.conjugate().conjugate() == f


@given(series(), coeffs)
def test_reciprocal(f, c):
    f = f - f.constant_term() + (c if c else ONE)
    r = f.reciprocal()
    assert f * r == MultiSeries.constant(1, 2, 4)


def test_reciprocal_needs_unit():
    z = MultiSeries.variable(0, 1, 3)
    with pytest.raises(Exception):
        z.reciprocal()


@given(series(), st.integers(0, 1))
def test_diff_is_a_derivation(f, v):
    g = f * f
    assert g.diff(v) == (f.diff(v) * f.truncate(3)).scale(2)


# composition -------------------------------------------------------------


@given(series(arity=2, trunc=4), linear_invertible(k=2, trunc=4), linear_invertible(k=2, trunc=4))
def test_compose_associative(f, g, h):
    assert f.compose(g).compose(h) == f.compose([gi.compose(h) for gi in g])


@given(series(arity=2, trunc=3), series(arity=2, trunc=3, constant=False), series(arity=2, trunc=3, constant=False))
def test_compose_matches_sympy(f, g1, g2):
    expr = to_sympy(f).subs({X[0]: to_sympy(g1), X[1]: to_sympy(g2)}, simultaneous=True)
    assert f.compose([g1, g2]) == sympy_jet(expr, 2, 3)


def test_compose_rejects_constants():
    z = MultiSeries.variable(0, 1, 3)
    with pytest.raises(DomainError):
        z.compose([z + 1])
    assert (z * z).substitute([z + 1]) == z * z + z.scale(2) + 1


def test_compose_arity_mismatch():
    z = MultiSeries.variable(0, 2, 3)
    with pytest.raises(StructuralError):
        z.compose([MultiSeries.variable(0, 1, 3)])


@given(series(arity=2, trunc=4))
def test_identity_composition(f):
    assert f.compose(vars_vec(2, 4)) == f


# implicit functions -------------------------------------------------------


@given(linear_invertible(k=2, trunc=5))
def test_inverse_round_trip(g):
    inv = invert_map(g)
    ident = SeriesVec.identity(2, 5)
    assert SeriesVec(g).compose(list(inv)) == ident
    assert inv.compose(g) == ident


@given(series(arity=2, trunc=5, constant=False), nonzero_coeffs)
def test_ift_solution_satisfies_equation(f, c):
    # F(x, y) = c*y + f(x, y) - f_y(0)*y, solvable for y
    y = MultiSeries.variable(1, 2, 5)
    lin = f.coefficient((0, 1))
    F = f + y.scale(c - lin)
    sol = solve_ift([F], [0], [1])
    x = MultiSeries.variable(0, 1, 5)
    assert F.compose([x, sol[0]]).is_zero()


def test_ift_singular():
    x, y = vars_vec(2, 3)
    with pytest.raises(SingularJacobian):
        solve_ift([x + y * y], [0], [1])


def test_ift_known_solution():
    # y = x / (1 - y)  => y = (1 - sqrt(1 - 4x)) / 2, Catalan numbers
    x, y = vars_vec(2, 7)
    sol = solve_ift([y - y * y - x], [0], [1])[0]
    assert [sol.coefficient((j,)) for j in range(1, 8)] == [Coeff(c) for c in (1, 1, 2, 5, 14, 42, 132)]


def test_series_matrix_det_matches_linalg():
    pts = [[Coeff(2), Coeff(1, 1), Coeff(0)], [Coeff(-1), Coeff(3), Coeff(0, 2)], [Coeff(1), Coeff(1), Coeff(1)]]
    mat = [[MultiSeries.constant(c, 1, 2) for c in row] for row in pts]
    assert series_matrix_det(mat).constant_term() == linalg.det(pts)


def test_linalg_rank_and_consistency():
    a = [[Coeff(1), Coeff(2)], [Coeff(2), Coeff(4)]]
    assert linalg.rank(a) == 1
    assert linalg.is_consistent(a, [Coeff(1), Coeff(2)])
    assert not linalg.is_consistent(a, [Coeff(1), Coeff(3)])


@given(st.lists(st.lists(coeffs, min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_matches_sympy(rows):
    m = sp.Matrix([[sp.Rational(frac(c.re)) + sp.I * sp.Rational(frac(c.im)) for c in r] for r in rows])
    d = sp.expand(m.det())
    ours = linalg.det(rows)
    assert sp.Rational(frac(ours.re)) + sp.I * sp.Rational(frac(ours.im)) == d
    assert (linalg.rank(rows) == 3) == (d != 0)
