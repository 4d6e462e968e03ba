"""Normal coordinates from an admissible submersion onto the Segre variety at 0.

Given ``ztilde`` whose zero fibre ``W`` is transversal to the Segre variety
at 0, the construction is:

1. ``gamma(t, zeta)`` solves ``rho(Z, zeta) = 0, ztilde(Z) = t``;
2. ``W`` is parametrized by ``d`` of the ``Z`` coordinates, and the
   involution ``iota(p) = gamma(0, conj p)`` on ``W`` is written as
   ``iota(s) = a(conj s)`` with ``a`` holomorphic;
3. ``Gamma(t, s) = gamma(t, conj-param of W at s)`` is inverted and
   ``wtilde := a(s-part of Gamma^{-1})``;
4. ``beta(s) = (s + abar(s)) / 2`` sends the fixed set of ``iota`` into
   ``R^d``; in the coordinates ``(alpha(ztilde), beta(wtilde))`` the
   manifold is in normal form.

All neighbourhood bookkeeping is dropped: everything is a K-jet at 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from . import linalg
from .errors import BetaDegenerate, DomainError, SingularJacobian
from .manifold import GraphForm, ManifoldGerm, as_graph
from .series import MultiSeries, SeriesVec, invert_map, solve_ift


@dataclass(frozen=True)
class NormalizationResult:
    ztilde: SeriesVec
    gamma: SeriesVec  # N comps in (t, zeta)
    W_param: SeriesVec  # N comps in s, parametrizes W
    W_coords: tuple  # the Z coordinates used as s
    iota: SeriesVec  # a(s), iota(s) = a(conj s)
    Gamma: SeriesVec  # N comps in (t, s)
    wtilde: SeriesVec  # d comps in Z
    alpha: SeriesVec
    beta: SeriesVec
    chart: SeriesVec  # H = (alpha(ztilde), beta(wtilde)), N comps in Z
    chart_inverse: SeriesVec
    Qnormal: GraphForm


def _germ(M) -> ManifoldGerm:
    if isinstance(M, ManifoldGerm):
        return M
    raise TypeError("expected a ManifoldGerm")


def default_submersion(M: ManifoldGerm) -> SeriesVec:
    """Projection onto the graph ``z`` coordinates, expressed in the ``Z`` coordinates."""
    M = _germ(M)
    G = as_graph(M)
    K = M.trunc
    return SeriesVec(MultiSeries.variable(G.perm[i], M.N, K) for i in range(M.n))


def compute_gamma(M: ManifoldGerm, ztilde: Optional[Sequence[MultiSeries]] = None) -> SeriesVec:
    """``Z = gamma(t, zeta)`` with ``rho(gamma, zeta) = 0`` and ``ztilde(gamma) = t``."""
    M = _germ(M)
    N, n = M.N, M.n
    ztilde = default_submersion(M) if ztilde is None else SeriesVec(ztilde)
    if len(ztilde) != n or ztilde.arity != N:
        raise DomainError(f"ztilde must have {n} components in {N} variables")
    if any(ztilde.constant_terms()):
        raise DomainError("ztilde(0) must vanish")
    A = n + 2 * N
    # variables: t (0..n-1), zeta (n..n+N-1), Z (n+N..n+2N-1)
    rho_pos = [n + N + i for i in range(N)] + [n + i for i in range(N)]
    eqs = [r.embed(A, rho_pos) for r in M.rho]
    zpos = [n + N + i for i in range(N)]
    K = min(M.trunc, ztilde.trunc)
    for j, zt in enumerate(ztilde):
        eqs.append(zt.embed(A, zpos) - MultiSeries.variable(j, A, zt.trunc))
    eqs = [e.truncate(K) for e in eqs]
    try:
        return solve_ift(eqs, list(range(n + N)), zpos)
    except SingularJacobian:
        raise SingularJacobian("ztilde^{-1}(0) is not transversal to the Segre variety at 0") from None


def parametrize_fibre(ztilde: SeriesVec, d: int) -> tuple[SeriesVec, tuple]:
    """``s -> Z`` with ``ztilde(Z) = 0`` and ``Z_S = s`` for the first admissible ``S``."""
    N = ztilde.arity
    K = ztilde.trunc
    jac = ztilde.jacobian_at_zero()
    for S in itertools.combinations(range(N), d):
        rows = jac + [[1 if c == s else 0 for c in range(N)] for s in S]
        if linalg.rank(rows) == N:
            break
    else:
        raise SingularJacobian("ztilde is not a submersion")
    A = d + N
    zpos = [d + i for i in range(N)]
    eqs = [zt.embed(A, zpos) for zt in ztilde]
    for k, s in enumerate(S):
        eqs.append(MultiSeries.variable(d + s, A, K) - MultiSeries.variable(k, A, K))
    return solve_ift(eqs, list(range(d)), zpos), tuple(S)


def _fibre_data(M: ManifoldGerm, ztilde: SeriesVec):
    gamma = compute_gamma(M, ztilde)
    W, S = parametrize_fibre(ztilde, M.d)
    Wbar = W.conjugate()
    n, d = M.n, M.d
    K = gamma.trunc
    zero_t = [MultiSeries.zero(d, K) for _ in range(n)]
    at_zero = gamma.compose(zero_t + list(Wbar.truncate(K)))
    a = SeriesVec(at_zero[s] for s in S)
    return gamma, W, S, a


def compute_involution(M: ManifoldGerm, ztilde: Optional[Sequence[MultiSeries]] = None) -> SeriesVec:
    """Holomorphic ``a`` in W-coordinates with ``iota(s) = a(conj s)``."""
    M = _germ(M)
    ztilde = default_submersion(M) if ztilde is None else SeriesVec(ztilde)
    return _fibre_data(M, ztilde)[3]


def involution_residual(a: SeriesVec) -> SeriesVec:
    """``a(abar(s)) - s``; zero iff ``iota`` is an involution to K-jets."""
    d = len(a)
    ident = SeriesVec.identity(d, a.trunc)
    return a.compose(list(a.conjugate())) - ident


def _check_real(series: SeriesVec, what: str) -> None:
    for c in series:
        if any(v.im for v in c.terms.values()):
            raise DomainError(f"{what} must have real coefficients")


def normalize(
    M: ManifoldGerm,
    ztilde: Optional[Sequence[MultiSeries]] = None,
    alpha: Optional[Sequence[MultiSeries]] = None,
    real_reparam: Optional[Sequence[MultiSeries]] = None,
) -> NormalizationResult:
    """Normal coordinates ``(alpha(ztilde), beta(wtilde))`` for ``M``.

    ``alpha`` (a chart on the Segre variety at 0, default identity) and
    ``real_reparam`` (a real-coefficient germ of ``(C^d, 0)`` applied after
    ``beta``, default identity) are the two freedoms left by the construction.
    """
    M = _germ(M)
    N, n, d = M.N, M.n, M.d
    ztilde = default_submersion(M) if ztilde is None else SeriesVec(ztilde)
    gamma, W, S, a = _fibre_data(M, ztilde)
    K = gamma.trunc

    # Gamma(t, s) = gamma(t, Wbar(s)) in variables (t, s)
    Wbar = W.conjugate().embed(N, [n + k for k in range(d)]).truncate(K)
    ts = [MultiSeries.variable(i, N, K) for i in range(n)]
    Gamma = gamma.compose(ts + list(Wbar))
    Ginv = invert_map(list(Gamma))
    s_of_Z = list(Ginv[n:])
    wtilde = a.compose(s_of_Z)

    abar = a.conjugate()
    beta = SeriesVec((MultiSeries.variable(k, d, K) + abar[k]).scale("1/2") for k in range(d))
    if linalg.rank(beta.jacobian_at_zero()) < d:
        raise BetaDegenerate("(I + d abar(0)) / 2 is singular")
    if real_reparam is not None:
        real_reparam = SeriesVec(real_reparam)
        _check_real(real_reparam, "real_reparam")
        beta = real_reparam.compose(list(beta))
        if linalg.rank(beta.jacobian_at_zero()) < d:
            raise BetaDegenerate("real_reparam has singular linear part")
    if alpha is None:
        alpha = SeriesVec.identity(n, K)
    else:
        alpha = SeriesVec(alpha)
        if linalg.rank(alpha.jacobian_at_zero()) < n:
            raise SingularJacobian("alpha must be a local biholomorphism")

    chart = SeriesVec(list(alpha.compose(list(ztilde.truncate(K)))) + list(beta.compose(list(wtilde))))
    if linalg.rank(chart.jacobian_at_zero()) < N:
        raise SingularJacobian("(ztilde, wtilde) is not a biholomorphism")
    chart_inv = invert_map(list(chart))

    # rho in new coordinates, then solve for w
    A = 2 * N
    inv_lo = chart_inv.embed(A, list(range(N)))
    inv_hi = chart_inv.conjugate().embed(A, list(range(N, 2 * N)))
    rho_new = [r.compose(list(inv_lo) + list(inv_hi)) for r in M.rho]
    x_vars = list(range(n)) + list(range(N, N + n)) + list(range(N + n, 2 * N))
    Q = solve_ift(rho_new, x_vars, list(range(n, N)))
    Qn = GraphForm.from_Q(Q, n, d)
    return NormalizationResult(
        ztilde=ztilde,
        gamma=gamma,
        W_param=W,
        W_coords=S,
        iota=a,
        Gamma=Gamma,
        wtilde=wtilde,
        alpha=alpha,
        beta=beta,
        chart=chart,
        chart_inverse=chart_inv,
        Qnormal=Qn,
    )


def segre_constancy_residual(M: ManifoldGerm, result: NormalizationResult) -> SeriesVec:
    """``wtilde(gamma(t, Wbar(s))) - a(s)`` in variables ``(t, s)``; zero iff wtilde is constant on Segre varieties."""
    n, d, N = M.n, M.d, M.N
    lhs = result.wtilde.compose(list(result.Gamma))
    rhs = result.iota.embed(N, [n + k for k in range(d)])
    return lhs - rhs
