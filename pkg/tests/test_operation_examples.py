"""Worked examples for individual operations, one small case each."""

import pytest

from conftest import heisenberg_rho
from segrejet import models
from segrejet.coeff import I, Coeff
from segrejet.errors import RestrictionDegenerate, SingularJacobian
from segrejet.manifold import check_generic, check_reality, manifold_from_rho, segre_parametrization
from segrejet.normal import compute_gamma, compute_involution, normalize
from segrejet.parser import parse_manifold
from segrejet.reconstruction import equivalence_criterion, jet_determination
from segrejet.segre import build_frame, build_U, iterated_segre
from segrejet.series import MultiSeries, SeriesVec, invert_map, solve_ift


def v(i, arity, K):
    return MultiSeries.variable(i, arity, K)


# series --------------------------------------------------------------------


def test_products_and_truncation():
    z2 = v(0, 1, 2)
    assert (1 + z2) * (1 - z2) == 1 - z2 * z2
    z1 = v(0, 1, 1)
    assert (1 + z1) * (1 - z1) == MultiSeries.constant(1, 1, 1)
    z, chi, tau = (v(i, 3, 3) for i in range(3))
    assert tau * (1 + (z * chi).scale(2 * I)) == tau + (z * chi * tau).scale(2 * I)


def test_composition_examples():
    x, y = v(0, 2, 4), v(1, 2, 4)
    z = v(0, 1, 4)
    assert (x + y * y).compose([z * z, z]) == (z * z).scale(2)
    t1, t2 = v(0, 2, 3), v(1, 2, 3)
    Q = models.heisenberg(3).graph.Q[0]
    assert Q.compose([t2, t1, MultiSeries.zero(2, 3)]) == (t1 * t2).scale(2 * I)


def test_conjugation_and_derivatives():
    z, chi, tau = (v(i, 3, 4) for i in range(3))
    Q = tau + (z * chi).scale(2 * I)
    assert Q.conjugate() == tau - (z * chi).scale(2 * I)
    assert Q.diff(1) == z.truncate(3).scale(2 * I)
    w = v(1, 2, 4)
    zz = v(0, 2, 4)
    assert (zz * zz * w).diff(1) == (zz * zz).truncate(3)


def test_solver_examples():
    x, y = v(0, 2, 6), v(1, 2, 6)
    sol = solve_ift([y - x - x * y], [0], [1])[0]
    assert all(sol.coefficient((j,)) == 1 for j in range(1, 7))
    z, chi, tau, w = (v(i, 4, 5) for i in range(4))
    Q = solve_ift([w - tau - (z * chi).scale(2 * I)], [0, 1, 2], [3])
    assert Q == models.heisenberg(5).graph.Q
    g = invert_map([v(0, 1, 5) + v(0, 1, 5) ** 2])[0]
    assert [g.coefficient((j,)) for j in range(1, 6)] == [Coeff(c) for c in (1, -1, 2, -5, 14)]


def test_shift_examples():
    z = v(0, 1, 2)
    assert (z * z).shift([1]) == 1 + z.scale(2) + z * z
    e2 = v(1, 2, 3).scale(4 * I)
    assert e2.shift([0, 1]) == MultiSeries.constant(4 * I, 2, 3) + e2


# manifolds -----------------------------------------------------------------


def test_reality_and_generic_examples():
    z, w, zeta, om = (v(i, 4, 4) for i in range(4))
    assert check_reality([heisenberg_rho(4)], 2)
    assert not check_reality([w - om - z * zeta], 2)
    assert check_generic([heisenberg_rho(4)], 2)
    assert not check_generic([z * zeta], 2)
    x = [v(i, 6, 3) for i in range(6)]
    assert check_generic([x[1] + x[4], (x[2] - x[5]).scale(I)], 3)


def test_graph_of_infinite_type_model():
    q = models.example_infinite_type(5).graph.Q[0]
    z, chi, tau = (v(i, 3, 5) for i in range(3))
    x = (z * chi).scale(I)
    assert q == tau + (x * tau).scale(2) + (x * x * tau).scale(2)


def test_segre_variety_through_point():
    G = models.heisenberg(4).graph
    t = v(0, 1, 4)
    assert segre_parametrization(G, [1, I], check_on_M=True) == SeriesVec([t, t.scale(2 * I) - I])


# normal coordinates ---------------------------------------------------------


def test_gamma_examples():
    t, chi, tau = (v(i, 3, 5) for i in range(3))
    assert compute_gamma(models.heisenberg(5)) == SeriesVec([t, tau + (t * chi).scale(2 * I)])
    assert compute_gamma(models.hyperplane(5)) == SeriesVec([t, tau])
    with pytest.raises(SingularJacobian):
        compute_gamma(models.heisenberg(5), [v(1, 2, 5)])


def test_involution_examples():
    ident = SeriesVec.identity(1, 5)
    assert compute_involution(models.heisenberg(5)) == ident
    assert compute_involution(models.hyperplane(5)) == ident


def test_custom_submersion_accepted():
    z, w = v(0, 2, 5), v(1, 2, 5)
    r = normalize(models.heisenberg(5), ztilde=[z + w * w])
    assert r.Qnormal.normal


def test_hyperplane_normal_form():
    r = normalize(models.hyperplane(5))
    assert r.Qnormal.Q == models.hyperplane(5).graph.Q


# Segre chain and frame -----------------------------------------------------


def test_U_on_the_diagonal():
    chain = iterated_segre(models.heisenberg(5))
    U, lay = build_U(chain)
    e1, e2, z = (v(i, 3, 5) for i in range(3))
    diag = chain.u[3][0].compose([e1, e2, e1, z])
    assert U[0].drop_variables(lay.sigma_vars) == diag
    Uh, _ = build_U(iterated_segre(models.hyperplane(5)))
    assert Uh.is_zero()


def test_heisenberg_frame_slots():
    M = models.heisenberg(5)
    f = build_frame(M, M, base=[0, 1])
    L = f.layout
    K = f.Theta.trunc
    d1, d2 = (v(i, L.arity, K) for i in L.eta_vars)
    theta = f.Theta[0]
    chain = f.chain
    t1, t2, t3 = d1 + theta, 1 + d2, d1 - theta
    assert tuple(f.T[:3]) == (t1, t2, t3)
    assert f.B[0] == SeriesVec([t1, MultiSeries.zero(L.arity, K)])
    assert f.A[0] == chain.v[1].substitute(list(f.T))
    assert f.B[1] == chain.v[2].conjugate().substitute(list(f.T))


def test_hyperplane_target_has_zero_psi():
    f = build_frame(models.heisenberg(5), models.hyperplane(5), base=[0, 1])
    assert f.Psi.is_zero()


# jet determination and equivalence ----------------------------------------


def test_hat_family_along_vertical_line():
    M = models.heisenberg(15)
    jr = jet_determination(M, M, [v(0, 2, 15).scale(I)], 1, direction=[0, 1])
    assert (jr.e, jr.l) == (1, 1)
    z, w, lam = (v(i, 3, jr.hhat[0][0].trunc) for i in range(3))
    expected = (w * (2 - z).reciprocal()).scale(1 / (2 * I))
    assert jr.hhat[0][0] == expected
    assert jr.hhat[0][1].is_zero()
    assert jr.Gjet == SeriesVec([v(1, 2, 1)])


def test_jet_determination_into_hyperplane():
    M = models.heisenberg(15)
    z, w = v(0, 2, 15), v(1, 2, 15)
    for F in (z, z + w * w):
        jr = jet_determination(M, models.hyperplane(15), [F], 2, direction=[0, 1])
        assert jr.Gjet.is_zero()


def test_equivalence_degenerate_restriction():
    M = models.heisenberg(5)
    z, w = v(0, 2, 5), v(1, 2, 5)
    with pytest.raises(RestrictionDegenerate):
        equivalence_criterion(M, M, [w * z])


def test_parser_hyperplane_form():
    assert parse_manifold("w - conj(w)", 5).graph.Q == models.hyperplane(5).graph.Q
    rho = manifold_from_rho([heisenberg_rho(5)], 2)
    assert parse_manifold("Im(w) - abs2(z)", 5).graph.Q == rho.graph.Q
