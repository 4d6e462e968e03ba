import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import coeffs, heisenberg_rho, pushed_rho
from segrejet import models
from segrejet.coeff import I, Coeff
from segrejet.errors import BetaDegenerate
from segrejet.manifold import graph_reality_residual, manifold_from_rho, normality_residual
from segrejet.normal import compute_involution, involution_residual, normalize, segre_constancy_residual
from segrejet.reconstruction import HoloMapGerm, verify_map
from segrejet.series import MultiSeries, SeriesVec

K = 6


def push(phi_w, K=K):
    """Heisenberg pushed by (z, w) -> (z, phi_w(z, w))."""
    z = MultiSeries.variable(0, 2, K)
    return manifold_from_rho([pushed_rho(heisenberg_rho(K), 2, [z, phi_w])], 2)


def assert_normal_form(M, r):
    assert normality_residual(r.Qnormal).is_zero()
    assert graph_reality_residual(r.Qnormal).is_zero()
    assert involution_residual(r.iota).is_zero()
    assert segre_constancy_residual(M, r).is_zero()
    # the chart really maps M onto the normalized manifold
    n = M.n
    H = HoloMapGerm(SeriesVec(r.chart[:n]), SeriesVec(r.chart[n:]))
    assert verify_map(M, r.Qnormal, H)


def test_normal_models_unchanged():
    for M in (models.heisenberg(K), models.heisenberg_product(K), models.example_infinite_type(K)):
        r = normalize(M)
        assert r.Qnormal.Q == M.graph.Q
        assert r.chart == SeriesVec.identity(M.N, K)


def test_pushed_heisenberg():
    M = models.pushed_heisenberg(K)
    r = normalize(M)
    assert r.Qnormal.Q == models.heisenberg(K).graph.Q
    z, w = MultiSeries.variable(0, 2, K), MultiSeries.variable(1, 2, K)
    assert r.wtilde[0] == w - z * z
    assert r.iota == SeriesVec.identity(1, K)
    assert_normal_form(M, r)


def test_nontrivial_involution():
    w = MultiSeries.variable(1, 2, K)
    M = push(w + (w * w).scale(I))
    a = compute_involution(M)
    assert a != SeriesVec.identity(1, K)
    assert involution_residual(a).is_zero()
    r = normalize(M)
    assert r.Qnormal.Q == models.heisenberg(K).graph.Q
    assert_normal_form(M, r)


def test_real_push_keeps_identity_involution():
    w = MultiSeries.variable(1, 2, K)
    M = push(w + w * w)
    assert compute_involution(M) == SeriesVec.identity(1, K)


def test_real_reparam_freedom():
    M = models.pushed_heisenberg(K)
    s = MultiSeries.variable(0, 1, K)
    r = normalize(M, real_reparam=[s.scale(2) + s * s])
    assert_normal_form(M, r)
    with pytest.raises(Exception):
        normalize(M, real_reparam=[s.scale(I)])


def test_alpha_freedom():
    M = models.heisenberg(K)
    z = MultiSeries.variable(0, 1, K)
    r = normalize(M, alpha=[z.scale(I) + z * z])
    assert_normal_form(M, r)


def test_beta_degenerate():
    # a(s) = -s makes (s + abar(s)) / 2 vanish identically
    w = MultiSeries.variable(1, 2, K)
    M = push(w.scale(I))
    with pytest.raises(BetaDegenerate):
        normalize(M)


@st.composite
def holomorphic_push(draw):
    w = MultiSeries.variable(1, 2, 5)
    terms = draw(st.dictionaries(st.sampled_from([(2, 0), (1, 1), (0, 2), (3, 0), (1, 2)]), coeffs, max_size=3))
    lin = draw(st.sampled_from([Coeff(1), Coeff(2), Coeff(1, 1), Coeff(0, 1)]))
    return w.scale(lin) + MultiSeries(2, 5, terms)


@given(holomorphic_push())
def test_normalize_random_pushes(phi):
    M = push(phi, K=5)
    try:
        r = normalize(M)
    except BetaDegenerate:
        return
    assert_normal_form(M, r)
