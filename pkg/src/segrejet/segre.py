"""Iterated Segre mappings and the reconstruction frame built on them.

For a manifold in normal coordinates the chain is

    v^1(t^1) = (t^1, 0),   v^{j+1} = (t^{j+1}, Q(t^{j+1}, vbar^j(t^1..t^j))),

where ``vbar`` conjugates coefficients only.  With ``m = d + 1`` the last map
``v^{2m}`` is rewritten in the variables ``t^j = eta^j + sigma^j``,
``t^{2m-j} = eta^j - sigma^j`` (``j < m``), ``t^m = eta^m``, ``t^{2m} = z``;
its ``w`` part is ``U(eta, z, sigma)``.

The equation ``w = U`` is singular at ``eta = 0``.  Rather than a weighted
implicit function theorem we expand around an exact base point ``eta_0``
with ``Delta(eta_0) != 0`` and use the regular one.  Expansions around a
nonzero base read the stored jets as polynomials, so they are exact when
``Q``, the target ``Q`` and the map are polynomials of degree at most K.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from . import linalg
from .coeff import Coeff
from .errors import DomainError, NotFiniteTypeAtOrderK, SingularJacobian
from .manifold import GraphForm, as_graph
from .series import MultiSeries, SeriesVec, series_matrix_det, solve_ift

DEFAULT_RETRIES = 16


# ---------------------------------------------------------------------------
# chains


@dataclass(frozen=True)
class SegreChain:
    graph: GraphForm
    count: int
    v: tuple  # v[j-1] is v^j: N comps in count*n variables

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def d(self) -> int:
        return self.graph.d

    @property
    def m(self) -> int:
        return self.graph.d + 1

    @property
    def u(self) -> list[SeriesVec]:
        return [SeriesVec(vj[self.n:]) for vj in self.v]

    @property
    def arity(self) -> int:
        return self.count * self.n

    def t_vars(self, j: int) -> list[int]:
        """Variable indices of the block ``t^j`` (1-based)."""
        return list(range((j - 1) * self.n, j * self.n))


def iterated_segre(G, count: Optional[int] = None) -> SegreChain:
    """``v^1, ..., v^count`` (default ``count = 2(d+1)``)."""
    G = as_graph(G)
    if not G.normal:
        raise DomainError("iterated Segre maps need Q in normal coordinates")
    n, d, K = G.n, G.d, G.trunc
    count = 2 * (d + 1) if count is None else count
    if count < 1:
        raise DomainError("count must be positive")
    A = count * n
    t = [MultiSeries.variable(i, A, K) for i in range(A)]
    v = [SeriesVec(t[:n] + [MultiSeries.zero(A, K) for _ in range(d)])]
    for j in range(1, count):
        tj = t[j * n:(j + 1) * n]
        u = G.Q.compose(tj + list(v[-1].conjugate()))
        v.append(SeriesVec(tj + list(u)))
    return SegreChain(G, count, tuple(v))


def restriction_residual(chain: SegreChain, j: int) -> SeriesVec:
    """``u^{j+1}(t^{j+1} = 0) - ubar^j``; vanishes for normal ``Q``."""
    uj1 = SeriesVec(c.set_zero(chain.t_vars(j + 1)) for c in chain.u[j])
    return uj1 - chain.u[j - 1].conjugate()


def recursion_residual(chain: SegreChain, j: int) -> SeriesVec:
    """``u^{j+1} - Q(t^{j+1}, t^j, ubar^j)``."""
    t = [MultiSeries.variable(i, chain.arity, chain.graph.trunc) for i in chain.t_vars(j + 1)]
    tj = [MultiSeries.variable(i, chain.arity, chain.graph.trunc) for i in chain.t_vars(j)]
    rhs = chain.graph.Q.compose(t + tj + list(chain.u[j - 1].conjugate()))
    return chain.u[j] - rhs


def _gauss_rational(rng: random.Random) -> Coeff:
    return Coeff.of(Fraction(rng.randint(-4, 4), rng.randint(1, 3))) + Coeff.of(
        Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    ) * Coeff.of(1j)


@dataclass(frozen=True)
class RankCheck:
    full: bool
    rank: int
    expected: int
    samples: tuple  # (point, rank) pairs tried

    def __bool__(self) -> bool:
        return self.full


def rank_check(chain: SegreChain, seed: int = 0, retries: int = DEFAULT_RETRIES) -> RankCheck:
    """Generic rank of ``t -> (v^{2m}, vbar^{2m-1})`` into the complexification.

    The map is evaluated through its stored jet at sampled Gaussian-rational
    points; full rank is ``2N - d``.
    """
    m = chain.m
    if chain.count < 2 * m:
        raise DomainError(f"rank check needs a chain of length {2 * m}")
    N, d = chain.graph.N, chain.d
    vec = SeriesVec(list(chain.v[2 * m - 1]) + list(chain.v[2 * m - 2].conjugate()))
    expected = 2 * N - d
    rng = random.Random(seed)
    log = []
    best = 0
    for _ in range(retries):
        pt = [_gauss_rational(rng) for _ in range(chain.arity)]
        r = linalg.rank(vec.jacobian_at(pt))
        log.append((tuple(pt), r))
        best = max(best, r)
        if r == expected:
            return RankCheck(True, r, expected, tuple(log))
    return RankCheck(False, best, expected, tuple(log))


# ---------------------------------------------------------------------------
# U and Delta


@dataclass(frozen=True)
class ULayout:
    """Variable order ``(eta^1..eta^m, z, sigma^1..sigma^{m-1})`` of ``U``."""

    n: int
    d: int

    @property
    def m(self) -> int:
        return self.d + 1

    @property
    def arity(self) -> int:
        return 2 * self.m * self.n

    def eta(self, j: int) -> list[int]:
        return list(range((j - 1) * self.n, j * self.n))

    @property
    def eta_vars(self) -> list[int]:
        return list(range(self.m * self.n))

    @property
    def z_vars(self) -> list[int]:
        s = self.m * self.n
        return list(range(s, s + self.n))

    def sigma(self, j: int) -> list[int]:
        s = (self.m + 1) * self.n + (j - 1) * self.n
        return list(range(s, s + self.n))

    @property
    def sigma_vars(self) -> list[int]:
        return list(range((self.m + 1) * self.n, self.arity))


def chain_substitution(layout: ULayout, trunc: int) -> list[MultiSeries]:
    """The ``t`` blocks of ``v^{2m}`` as linear series in the ``U`` variables."""
    n, m, A = layout.n, layout.m, layout.arity
    x = [MultiSeries.variable(i, A, trunc) for i in range(A)]
    out: List[MultiSeries] = []
    for j in range(1, 2 * m + 1):
        for i in range(n):
            if j < m:
                out.append(x[layout.eta(j)[i]] + x[layout.sigma(j)[i]])
            elif j == m:
                out.append(x[layout.eta(m)[i]])
            elif j < 2 * m:
                k = 2 * m - j
                out.append(x[layout.eta(k)[i]] - x[layout.sigma(k)[i]])
            else:
                out.append(x[layout.z_vars[i]])
    return out


def build_U(chain: SegreChain) -> tuple[SeriesVec, ULayout]:
    m = chain.m
    if chain.count < 2 * m:
        raise DomainError(f"U needs a chain of length {2 * m}")
    layout = ULayout(chain.n, chain.d)
    inner = chain_substitution(layout, chain.graph.trunc)
    U = chain.u[2 * m - 1].compose(inner)
    at0 = SeriesVec(c.set_zero(layout.z_vars + layout.sigma_vars) for c in U)
    if not at0.is_zero():
        raise DomainError("U(eta, 0, 0) does not vanish; Q is not normal")
    return U, layout


def delta_for(U: SeriesVec, layout: ULayout, sigma_prime: Sequence[int]) -> MultiSeries:
    """``det dU/dsigma'`` at ``z = sigma = 0``, a series in ``eta``."""
    drop = layout.z_vars + layout.sigma_vars
    svars = layout.sigma_vars
    mat = [[c.diff(svars[s]).drop_variables(drop) for s in sigma_prime] for c in U]
    return series_matrix_det(mat)


def select_sigma_prime(U: SeriesVec, layout: ULayout) -> tuple[tuple, tuple, MultiSeries]:
    """``(sigma', sigma'', Delta)`` with ``Delta`` of least order; ties go lexicographically.

    Indices are positions within the ``sigma`` block.
    """
    d = layout.d
    nsig = len(layout.sigma_vars)
    drop = layout.z_vars + layout.sigma_vars
    svars = layout.sigma_vars
    cols = [[c.diff(svars[s]).drop_variables(drop) for s in range(nsig)] for c in U]
    best = None
    for S in itertools.combinations(range(nsig), d):
        det = series_matrix_det([[row[s] for s in S] for row in cols])
        o = det.order()
        if o is None:
            continue
        if best is None or o < best[0]:
            best = (o, S, det)
    if best is None:
        raise NotFiniteTypeAtOrderK(
            f"Delta vanishes to order {U.trunc - 1} for every choice of sigma'"
        )
    _, S, det = best
    rest = tuple(s for s in range(nsig) if s not in S)
    return tuple(S), rest, det


def delta_closed_form(G) -> MultiSeries:
    """``2 Qbar_w(eta^1, eta^2, Q(eta^2, eta^1, 0)) Q_chi(eta^2, eta^1, 0)`` for ``n = d = 1``."""
    G = as_graph(G)
    if G.n != 1 or G.d != 1:
        raise DomainError("closed form is for n = d = 1")
    K = G.trunc
    e1 = MultiSeries.variable(0, 2, K)
    e2 = MultiSeries.variable(1, 2, K)
    zero = MultiSeries.zero(2, K)
    q21 = G.Q[0].compose([e2, e1, zero])
    qbar_w = G.Qbar[0].diff(2).compose([e1, e2, q21])
    q_chi = G.Q[0].diff(1).compose([e2, e1, zero])
    return (qbar_w * q_chi).scale(2)


def sample_base_points(
    Delta: MultiSeries, count: int = 1, seed: int = 0, retries: int = DEFAULT_RETRIES
) -> list[list[Coeff]]:
    """Distinct Gaussian-rational ``eta_0`` with ``Delta(eta_0) != 0``."""
    rng = random.Random(seed)
    found: list[list[Coeff]] = []
    for _ in range(retries * count):
        pt = [_gauss_rational(rng) for _ in range(Delta.arity)]
        if Delta.evaluate(pt) and pt not in found:
            found.append(pt)
            if len(found) == count:
                return found
    raise NotFiniteTypeAtOrderK(f"no base point with Delta != 0 after {retries * count} draws")


# ---------------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class FrameLayout:
    """Variable order ``(Z, delta_eta, sigma'')`` of everything expanded at the base point."""

    N: int
    n_eta: int
    n_sigma2: int

    @property
    def arity(self) -> int:
        return self.N + self.n_eta + self.n_sigma2

    @property
    def Z_vars(self) -> list[int]:
        return list(range(self.N))

    @property
    def eta_vars(self) -> list[int]:
        return list(range(self.N, self.N + self.n_eta))

    @property
    def sigma2_vars(self) -> list[int]:
        return list(range(self.N + self.n_eta, self.arity))

    @property
    def xi_vars(self) -> list[int]:
        return list(range(self.N, self.arity))


def _frame_inner(U_layout: ULayout, eta0, sigma_prime, sigma_dprime, arity: int, N: int, K: int,
                 sp_series: Sequence[MultiSeries]) -> list[MultiSeries]:
    """Series for each ``U`` variable in a frame-shaped variable set."""
    n = U_layout.n
    n_eta = len(U_layout.eta_vars)
    inner: List[Optional[MultiSeries]] = [None] * U_layout.arity
    for i, v in enumerate(U_layout.eta_vars):
        inner[v] = MultiSeries.variable(N + i, arity, K) + eta0[i]
    for i, v in enumerate(U_layout.z_vars):
        inner[v] = MultiSeries.variable(i, arity, K)
    svars = U_layout.sigma_vars
    for k, s in enumerate(sigma_prime):
        inner[svars[s]] = sp_series[k]
    for k, s in enumerate(sigma_dprime):
        inner[svars[s]] = MultiSeries.variable(N + n_eta + k, arity, K)
    assert n == len(U_layout.z_vars)
    return inner


def solve_theta(U: SeriesVec, layout: ULayout, sigma_prime, sigma_dprime, eta0) -> SeriesVec:
    """``sigma' = Theta(Z, delta_eta, sigma'')`` solving ``w = U(eta_0 + delta_eta, z, sigma)``."""
    n, d = layout.n, layout.d
    N = n + d
    K = U.trunc
    n_eta = len(layout.eta_vars)
    n2 = len(sigma_dprime)
    A = N + n_eta + n2 + d
    sp = [MultiSeries.variable(N + n_eta + n2 + k, A, K) for k in range(d)]
    inner = _frame_inner(layout, eta0, sigma_prime, sigma_dprime, A, N, K, sp)
    eqs = []
    for a, c in enumerate(U):
        eqs.append(c.substitute(inner) - MultiSeries.variable(n + a, A, K))
    if any(e.constant_term() for e in eqs):
        raise DomainError("U(eta_0, 0, 0) != 0")
    try:
        return solve_ift(eqs, list(range(N + n_eta + n2)), list(range(N + n_eta + n2, A)))
    except SingularJacobian:
        raise SingularJacobian("Delta vanishes at the base point") from None


@dataclass(frozen=True)
class ReconstructionFrame:
    chain: SegreChain
    U_layout: ULayout
    U: SeriesVec
    sigma_prime: tuple
    sigma_dprime: tuple
    Delta: MultiSeries
    base: tuple  # eta_0; sigma''_0 is 0
    layout: FrameLayout
    Theta: SeriesVec
    T: tuple  # the t^j as series in frame variables, 2m blocks of n
    A: tuple  # A_1..A_d
    B: tuple  # B_1..B_{d+1}
    target: GraphForm
    target_chain: SegreChain
    Psi: SeriesVec
    Phi: SeriesVec
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def m(self) -> int:
        return self.chain.m

    def slot_args(self) -> list[tuple[bool, SeriesVec]]:
        """``(conjugate, argument)`` per slot of ``Psi``; the last is the identity on ``Z``."""
        out = []
        m = self.m
        for k in range(1, 2 * m):
            if k % 2:
                out.append((True, self.B[(k - 1) // 2]))
            else:
                out.append((False, self.A[k // 2 - 1]))
        L = self.layout
        out.append((False, SeriesVec(MultiSeries.variable(i, L.arity, self.Theta.trunc) for i in L.Z_vars)))
        return out


def theta_roundtrip_residual(frame: ReconstructionFrame) -> SeriesVec:
    """``Theta(z, U(eta_0 + delta_eta, z, sigma), delta_eta, sigma'') - sigma'``.

    Variables are ``(z, delta_eta, sigma'', sigma')``.
    """
    lay = frame.U_layout
    n, d = lay.n, lay.d
    N = n + d
    K = frame.Theta.trunc
    n_eta = len(lay.eta_vars)
    n2 = len(frame.sigma_dprime)
    A = n + n_eta + n2 + d
    # U expanded with z at 0..n-1 but in a frame-shaped set where w is absent:
    # build in an auxiliary arity that includes a dummy w block, then drop it.
    Aw = N + n_eta + n2 + d
    sp = [MultiSeries.variable(N + n_eta + n2 + k, Aw, K) for k in range(d)]
    inner = _frame_inner(lay, frame.base, frame.sigma_prime, frame.sigma_dprime, Aw, N, K, sp)
    Ushift = [c.substitute(inner) for c in frame.U]
    w_vars = list(range(n, N))
    Ushift = [c.drop_variables(w_vars) for c in Ushift]
    x = [MultiSeries.variable(i, A, K) for i in range(A)]
    theta_inner = x[:n] + Ushift + x[n:n + n_eta + n2]
    lhs = frame.Theta.compose(theta_inner)
    return lhs - SeriesVec(x[n + n_eta + n2:])


def frame_identity_residual(frame: ReconstructionFrame) -> SeriesVec:
    """``v^{2m}(T) - Z``; zero since ``Theta`` solves ``w = U``."""
    v2m = frame.chain.v[2 * frame.m - 1]
    L = frame.layout
    Z = SeriesVec(MultiSeries.variable(i, L.arity, frame.Theta.trunc) for i in L.Z_vars)
    return v2m.substitute(list(frame.T)) - Z


def theta_vanishing_residual(frame: ReconstructionFrame) -> SeriesVec:
    """``Theta(0, delta_eta, 0)``; zero means ``A_i(0, xi), B_j(0, xi) -> 0`` as ``xi -> 0``."""
    L = frame.layout
    return SeriesVec(c.set_zero(L.Z_vars + L.sigma2_vars) for c in frame.Theta)


def build_frame(M, M_target, base: Optional[Sequence] = None, seed: int = 0,
                retries: int = DEFAULT_RETRIES) -> ReconstructionFrame:
    """Everything needed to rebuild ``G`` from ``F`` for maps ``M -> M_target``.

    Both manifolds must be in normal coordinates.
    """
    G = as_graph(M)
    Gt = as_graph(M_target)
    if not Gt.normal:
        raise DomainError("target must be in normal coordinates")
    chain = iterated_segre(G)
    U, ulay = build_U(chain)
    sp, sdp, Delta = select_sigma_prime(U, ulay)
    if base is None:
        eta0 = sample_base_points(Delta, 1, seed, retries)[0]
    else:
        eta0 = [Coeff.of(b) for b in base]
        if len(eta0) != Delta.arity:
            raise DomainError(f"base point needs {Delta.arity} coordinates")
        if not Delta.evaluate(eta0):
            raise SingularJacobian("Delta vanishes at the given base point")
    Theta = solve_theta(U, ulay, sp, sdp, eta0)
    K = Theta.trunc
    d = G.d
    flay = FrameLayout(G.N, len(ulay.eta_vars), len(sdp))
    inner = _frame_inner(ulay, eta0, sp, sdp, flay.arity, G.N, K, list(Theta))
    T = chain_substitution(ulay, K)
    T = [t.substitute(inner) for t in T]
    m = chain.m
    A = tuple(chain.v[2 * i - 1].substitute(T) for i in range(1, d + 1))
    B = tuple(chain.v[2 * i - 2].conjugate().substitute(T) for i in range(1, d + 2))
    tchain = iterated_segre(Gt, 2 * m)
    Phi = tchain.v[2 * m - 1]
    Psi = SeriesVec(Phi[Gt.n:])
    return ReconstructionFrame(
        chain=chain,
        U_layout=ulay,
        U=U,
        sigma_prime=sp,
        sigma_dprime=sdp,
        Delta=Delta,
        base=tuple(eta0),
        layout=flay,
        Theta=Theta,
        T=tuple(T),
        A=A,
        B=B,
        target=Gt,
        target_chain=tchain,
        Psi=Psi,
        Phi=Phi,
    )
