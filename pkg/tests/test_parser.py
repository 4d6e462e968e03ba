import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import series
from segrejet import models
from segrejet.coeff import I, Coeff
from segrejet.errors import DomainError, ParseError
from segrejet.parser import (
    format_coeff,
    format_manifold,
    format_map,
    parse_constants,
    parse_manifold,
    parse_map,
    tokenize,
)
from segrejet.series import MultiSeries, SeriesVec

K = 6


def test_heisenberg_forms_agree():
    Q = models.heisenberg(K).graph.Q
    for text in ("Im(w) - abs2(z)", "Im(w) = z*conj(z)", "w = conj(w) + 2*i*z*conj(z)", "(w - conj(w))/(2*i) - abs2(z)"):
        assert parse_manifold(text, K).graph.Q == Q


def test_anti_real_input_is_rescaled():
    assert parse_manifold("w - conj(w) - 2*i*abs2(z)", K).graph.Q == models.heisenberg(K).graph.Q


def test_infinite_type_example():
    assert parse_manifold("Im(w) - Re(w)*abs2(z)", K).graph.Q == models.example_infinite_type(K).graph.Q


def test_hyperplane_and_dimension_flags():
    M = parse_manifold("Im(w)", K, n=2)
    assert (M.n, M.d) == (2, 1)
    assert M.graph.Q == models.hyperplane(K, 2).graph.Q


def test_codim_two():
    text = "Im(w1) - abs2(z1)\nIm(w2) - abs2(z2)"
    assert parse_manifold(text, K).graph.Q == models.heisenberg_product(K).graph.Q
    assert parse_manifold(text.replace("\n", "; "), K).graph.Q == models.heisenberg_product(K).graph.Q


def test_q_form_pushed():
    M = parse_manifold("w = conj(w) + z^2 - conj(z)^2 + 2*i*z*conj(z)", K)
    assert M.graph.Q == models.pushed_heisenberg(K).graph.Q


@pytest.mark.parametrize(
    "text, where",
    [
        ("Im(w) - abs2(z", "1:15"),
        ("Im(w) -- ", "1:10"),
        ("Im(w) - abs2(q)", "1:14"),
        ("Im(w) - abs2(z)/z", "1:16"),
        ("Im(w) - 2^z", "1:11"),
        ("Im(w)\nIm(w2) - abs2(z)", "1:4"),
    ],
)
def test_parse_errors_carry_position(text, where):
    with pytest.raises(ParseError) as exc:
        parse_manifold(text, K)
    assert where in str(exc.value)


def test_non_real_rejected():
    with pytest.raises(DomainError):
        parse_manifold("Im(w) - z*abs2(z)", K)


def test_q_form_may_not_use_w():
    with pytest.raises(ParseError):
        parse_manifold("w = w + 2*i*z*conj(z)", K)


def test_parse_map_and_constants():
    F = parse_map("z + 1/2*w^2; i*z*w", 1, 1, K)
    z, w = MultiSeries.variable(0, 2, K), MultiSeries.variable(1, 2, K)
    assert F == SeriesVec([z + (w * w).scale(Coeff(1) / 2), (z * w).scale(I)])
    with pytest.raises(ParseError):
        parse_map("conj(z)", 1, 1, K)
    assert parse_constants("0, 1/2 + i, -3*i") == [Coeff(0), Coeff("1/2", 1), Coeff(0, -3)]


def test_tokenize_positions():
    toks = tokenize("z +\n w")
    assert [(t.text, t.line, t.col) for t in toks if t.kind != "end"][-1] == ("w", 2, 2)


def test_format_coeff():
    assert format_coeff(Coeff(3)) == "3"
    assert format_coeff(Coeff(0, -1) / 4) == "-1/4*i"
    assert format_coeff(Coeff(1, -1)) == "(1 - i)"
    assert format_coeff(Coeff(0, -1)) == "-i"
    assert format_coeff(Coeff(2, "3/2")) == "(2 + 3/2*i)"


@given(series(arity=2, trunc=5), series(arity=2, trunc=5))
def test_map_round_trip(f, g):
    F = SeriesVec([f, g])
    assert parse_map(format_map(F, 1, 1), 1, 1, 5) == F


@given(series(arity=3, trunc=4), series(arity=3, trunc=4))
def test_map_round_trip_two_variables(f, g):
    F = SeriesVec([f, g])
    assert parse_map(format_map(F, 2, 1), 2, 1, 4) == F


@pytest.mark.parametrize(
    "make",
    [models.heisenberg, models.pushed_heisenberg, models.example_infinite_type, models.heisenberg_product,
     lambda K: models.heisenberg_power(2, K)],
)
def test_manifold_round_trip(make):
    M = make(K)
    text = format_manifold(M)
    assert parse_manifold(text, K, n=M.n, d=M.d).graph.Q == M.graph.Q


@given(st.sampled_from(["Im(w) - abs2(z)", "Im(w) - Re(w)*abs2(z)", "Im(w) - abs2(z) - Re(z^2*conj(z))"]))
def test_rho_form_round_trip(text):
    M = parse_manifold(text, K)
    again = parse_manifold(format_manifold(M), K)
    assert again.rho == M.rho and again.graph.Q == M.graph.Q
