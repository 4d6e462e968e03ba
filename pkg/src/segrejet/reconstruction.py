"""Maps between generic submanifolds: verification, reconstruction of ``G`` from ``F``.

A germ ``H = (F, G)`` sends ``M`` into ``M'`` iff

    G(z, Q(z, chi, tau)) = Q'(F(z, Q), Fbar(chi, tau), Gbar(chi, tau))

as series in ``(z, chi, tau)``.  When both germs are in normal coordinates,
``G`` is recovered from ``F`` alone through the reconstruction frame of
:mod:`segrejet.segre`; the recovered expression is independent of the frame
parameters exactly when ``F`` extends to a map.

Maps are written in the graph coordinates ``(z, w)`` of source and target.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .coeff import Coeff, I
from .errors import (
    CriterionFailed,
    DomainError,
    MapVerificationFailed,
    NonInvertible,
    NotFiniteTypeAtOrderK,
    RestrictionDegenerate,
    SingularJacobian,
    TruncationExhausted,
)
from .manifold import GraphForm, as_graph
from .normal import NormalizationResult, normalize
from .segre import (
    DEFAULT_RETRIES,
    ReconstructionFrame,
    _gauss_rational,
    build_frame,
    build_U,
    chain_substitution,
    iterated_segre,
    select_sigma_prime,
)
from .series import MultiSeries, SeriesVec, series_matrix_det, solve_ift


@dataclass(frozen=True)
class HoloMapGerm:
    F: SeriesVec
    G: SeriesVec

    def __post_init__(self):
        F, G = SeriesVec(self.F), SeriesVec(self.G)
        if F.arity != G.arity:
            raise DomainError("F and G must share arity")
        if any(F.constant_terms()) or any(G.constant_terms()):
            raise DomainError("H(0) must vanish")
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "G", G)

    @property
    def H(self) -> SeriesVec:
        return SeriesVec(list(self.F) + list(self.G))

    @property
    def N(self) -> int:
        return self.F.arity


def _lowest_term(vec: SeriesVec):
    best = None
    for c, s in enumerate(vec):
        for k, v in s.sorted_terms():
            if best is None or sum(k) < sum(best[1]):
                best = (c, k, v)
            break
    return best


@dataclass(frozen=True)
class CriterionReport:
    residual: SeriesVec
    verdict: str  # "pass" or "fail"
    witness: object = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def from_residual(cls, residual: SeriesVec) -> "CriterionReport":
        if residual.is_zero():
            return cls(residual, "pass", None)
        return cls(residual, "fail", _lowest_term(residual))


# ---------------------------------------------------------------------------
# verification


def map_residual(M, M_target, H: HoloMapGerm) -> SeriesVec:
    """``G(z, Q) - Q'(F(z, Q), Fbar(chi, tau), Gbar(chi, tau))`` in ``(z, chi, tau)``."""
    G, Gt = as_graph(M), as_graph(M_target)
    if H.N != G.N or len(H.F) != Gt.n or len(H.G) != Gt.d:
        raise DomainError("map dimensions do not match source and target")
    n, d = G.n, G.d
    A = 2 * n + d
    K = min(G.trunc, Gt.trunc, H.F.trunc, H.G.trunc)
    x = [MultiSeries.variable(i, A, K) for i in range(A)]
    Zin = x[:n] + [q.truncate(K) for q in G.Q]
    zeta = x[n:]
    FZ = H.F.compose(Zin)
    GZ = H.G.compose(Zin)
    Fb = H.F.conjugate().compose(zeta)
    Gb = H.G.conjugate().compose(zeta)
    rhs = Gt.Q.compose(list(FZ) + list(Fb) + list(Gb))
    return GZ - rhs


def verify_map(M, M_target, H: HoloMapGerm) -> bool:
    return map_residual(M, M_target, H).is_zero()


def map_witness(M, M_target, H: HoloMapGerm):
    """Lowest nonzero residual term ``(component, exponent, coefficient)`` or ``None``."""
    return _lowest_term(map_residual(M, M_target, H))


# ---------------------------------------------------------------------------
# reconstruction from a frame


def composite(frame: ReconstructionFrame, F: Sequence[MultiSeries]) -> SeriesVec:
    """``Psi(Fbar o B_1, F o A_1, ..., F(Z))`` in the frame variables ``(Z, xi)``."""
    F = SeriesVec(F)
    L = frame.layout
    if F.arity != L.N or len(F) != frame.target.n:
        raise DomainError("F has the wrong shape for this frame")
    if any(F.constant_terms()):
        raise DomainError("F(0) must vanish")
    K = min(frame.Theta.trunc, F.trunc, frame.Psi.trunc)
    Fb = F.conjugate()
    slots: list[MultiSeries] = []
    for conj, arg in frame.slot_args():
        f = Fb if conj else F
        slots.extend(f.truncate(K).substitute([a.truncate(K) for a in arg]))
    return frame.Psi.truncate(K).substitute(slots)


def reconstruct_G(frame: ReconstructionFrame, F: Sequence[MultiSeries]) -> SeriesVec:
    C = composite(frame, F)
    return SeriesVec(c.drop_variables(frame.layout.xi_vars) for c in C)


def independence_residual(frame: ReconstructionFrame, F: Sequence[MultiSeries]) -> CriterionReport:
    """First derivatives of the composite in every frame parameter."""
    C = composite(frame, F)
    res = [c.diff(v) for v in frame.layout.xi_vars for c in C]
    return CriterionReport.from_residual(SeriesVec(res))


@dataclass(frozen=True)
class MapFrame:
    """A frame together with the normalizing charts of non-normal source/target."""

    frame: ReconstructionFrame
    source: GraphForm
    target: GraphForm
    source_chart: Optional[NormalizationResult] = None
    target_chart: Optional[NormalizationResult] = None


def prepare_frame(M, M_target, base: Optional[Sequence] = None, seed: int = 0,
                  retries: int = DEFAULT_RETRIES, target_ztilde=None) -> MapFrame:
    """Normalize source and target when necessary and build the frame.

    ``target_ztilde`` is the submersion through which ``F = ztilde o H`` is
    read; the default is the target's graph ``z`` projection.
    """
    G, Gt = as_graph(M), as_graph(M_target)
    src_chart = None
    if not G.normal:
        src_chart = normalize(_germ_of(M))
        G = src_chart.Qnormal
    tgt_chart = None
    if not Gt.normal or target_ztilde is not None:
        tgt_chart = normalize(_germ_of(M_target), ztilde=target_ztilde)
        Gt = tgt_chart.Qnormal
    frame = build_frame(G, Gt, base=base, seed=seed, retries=retries)
    return MapFrame(frame, as_graph(M), as_graph(M_target), src_chart, tgt_chart)


def _germ_of(M):
    from .manifold import ManifoldGerm, manifold_from_Q

    if isinstance(M, ManifoldGerm):
        return M
    return manifold_from_Q(list(M.Q), M.n, M.d)


def _as_mapframe(frame) -> MapFrame:
    if isinstance(frame, MapFrame):
        return frame
    return MapFrame(frame, frame.chain.graph, frame.target)


def reconstruct_full_map(frame, F: Sequence[MultiSeries], check: bool = True) -> HoloMapGerm:
    """``H = (F, G)`` with ``G`` rebuilt from the frame, in the original coordinates."""
    mf = _as_mapframe(frame)
    F = SeriesVec(F)
    K = F.trunc
    Fn = F
    if mf.source_chart is not None:
        Fn = Fn.compose(list(mf.source_chart.chart_inverse.truncate(K)))
    if mf.target_chart is not None:
        Fn = mf.target_chart.alpha.compose(list(Fn))
    if check:
        rep = independence_residual(mf.frame, Fn)
        if not rep.passed:
            raise CriterionFailed(f"frame parameters do not cancel; lowest term {rep.witness}")
    Gn = reconstruct_G(mf.frame, Fn)
    Hn = SeriesVec(list(Fn.truncate(Gn.trunc)) + list(Gn))
    if mf.target_chart is not None:
        Hn = mf.target_chart.chart_inverse.compose(list(Hn))
    if mf.source_chart is not None:
        Hn = Hn.compose(list(mf.source_chart.chart.truncate(Hn.trunc)))
    nt = mf.target.n
    H = HoloMapGerm(SeriesVec(Hn[:nt]), SeriesVec(Hn[nt:]))
    if check and not verify_map(mf.source, mf.target, H):
        raise MapVerificationFailed(f"reconstructed map fails verification; lowest term {map_witness(mf.source, mf.target, H)}")
    return H


# ---------------------------------------------------------------------------
# equivalence


@dataclass(frozen=True)
class EquivalenceReport:
    verdict: str  # "equivalent"
    H: HoloMapGerm
    criterion: CriterionReport


def restriction_jacobian(F: Sequence[MultiSeries], n: int) -> list[list[Coeff]]:
    """Jacobian in ``z`` at 0 of ``F(z, 0)``."""
    F = SeriesVec(F)
    return F.jacobian_at_zero(list(range(n)))


def equivalence_criterion(M, M_target, F: Sequence[MultiSeries], base=None, seed: int = 0) -> EquivalenceReport:
    """Check a candidate ``F`` for a biholomorphic equivalence ``M -> M_target``."""
    G, Gt = as_graph(M), as_graph(M_target)
    if G.d != Gt.d or G.N != Gt.N:
        raise DomainError("equivalence needs equal dimension and codimension")
    F = SeriesVec(F)
    mf = prepare_frame(M, M_target, base=base, seed=seed)
    Fn = F
    if mf.source_chart is not None:
        Fn = Fn.compose(list(mf.source_chart.chart_inverse.truncate(F.trunc)))
    if mf.target_chart is not None:
        Fn = mf.target_chart.alpha.compose(list(Fn))
    jac = restriction_jacobian(Fn, G.n)
    if linalg.rank(jac) < G.n:
        raise RestrictionDegenerate("F restricted to the Segre variety at 0 is not a local biholomorphism")
    rep = independence_residual(mf.frame, Fn)
    if not rep.passed:
        raise CriterionFailed(f"frame parameters do not cancel; lowest term {rep.witness}")
    H = reconstruct_full_map(mf, F, check=True)
    if linalg.rank(H.H.jacobian_at_zero()) < G.N:
        raise NonInvertible("the reconstructed map is not invertible at 0")
    return EquivalenceReport("equivalent", H, rep)


# ---------------------------------------------------------------------------
# independent oracle: coefficient matching


def _affine_in_tau(Gt: GraphForm) -> bool:
    tv = Gt.tau_vars()
    return all(sum(k[v] for v in tv) <= 1 for q in Gt.Q for k in q.terms)


def extension_exists(M, M_target, F: Sequence[MultiSeries], K: Optional[int] = None) -> bool:
    """Whether some ``G`` with ``G(0) = 0`` makes ``(F, G)`` a map to order ``K``.

    Decided by exact rank of the real linear system obtained from the
    coefficients of :func:`map_residual`; needs a target affine in ``tau``.
    """
    G, Gt = as_graph(M), as_graph(M_target)
    if not _affine_in_tau(Gt):
        raise DomainError("coefficient matching needs a target Q affine in tau")
    F = SeriesVec(F)
    K = min(G.trunc, Gt.trunc, F.trunc) if K is None else K
    N = G.N
    F = F.truncate(K)
    d2 = Gt.d

    def resid(Gs: list[MultiSeries]) -> SeriesVec:
        return map_residual(G, Gt, HoloMapGerm(F, SeriesVec(Gs)))

    zero = [MultiSeries.zero(N, K) for _ in range(d2)]
    r0 = resid(zero)
    monos = []
    for deg in range(1, K + 1):
        monos.extend(_exponents(N, deg))
    cols = []
    for c in range(d2):
        for e in monos:
            for unit in (Coeff.of(1), I):
                Gs = list(zero)
                Gs[c] = MultiSeries.monomial(e, unit, K)
                cols.append(resid(Gs) - r0)
    keys = sorted({(c, k) for vec in [r0] + cols for c, s in enumerate(vec) for k in s.terms})
    rows = []
    rhs = []
    for c, k in keys:
        re_row, im_row = [], []
        for col in cols:
            v = col[c].coefficient(k)
            re_row.append(v.re)
            im_row.append(v.im)
        v0 = r0[c].coefficient(k)
        rows.append(re_row)
        rhs.append(-v0.re)
        rows.append(im_row)
        rhs.append(-v0.im)
    if not rows:
        return True
    return linalg.is_consistent(rows, rhs)


def _exponents(nvars: int, deg: int):
    if nvars == 1:
        yield (deg,)
        return
    for a in range(deg, -1, -1):
        for rest in _exponents(nvars - 1, deg - a):
            yield (a,) + rest


# ---------------------------------------------------------------------------
# hyperquadric model


def ball_model_G(F: Sequence[MultiSeries], n: int, n_target: int, base: Optional[Sequence] = None,
                 seed: int = 0) -> tuple[SeriesVec, CriterionReport]:
    """``G`` for maps between hyperquadrics ``Im w = |z|^2`` from ``F`` alone.

    Parameters ``(t^2, t^1_*)`` (``2n - 1`` of them) are expanded about an
    exact base with ``t^2_1 != 0``; the report says whether ``G`` depends on
    them.  Variables of the expansion: ``(z, w, delta t^2, delta t^1_*)``.
    """
    F = SeriesVec(F)
    N = n + 1
    if F.arity != N or len(F) != n_target:
        raise DomainError("F must have n' components in n + 1 variables")
    K = F.trunc
    P = N + n + (n - 1)
    if base is None:
        rng = random.Random(seed)
        base = [_gauss_rational(rng) for _ in range(2 * n - 1)]
        while not base[0]:
            base[0] = _gauss_rational(rng)
    base = [Coeff.of(b) for b in base]
    if len(base) != 2 * n - 1:
        raise DomainError(f"base needs {2 * n - 1} coordinates")
    if not base[0]:
        raise SingularJacobian("t^2_1 must be nonzero at the base")
    x = [MultiSeries.variable(i, P, K) for i in range(P)]
    z, w = x[:n], x[n]
    t2 = [x[N + j] + base[j] for j in range(n)]
    t1s = [x[2 * n + 1 + j] + base[n + j] for j in range(n - 1)]
    zt2 = sum((a * b for a, b in zip(z, t2)), MultiSeries.zero(P, K))
    t1t2 = sum((a * b for a, b in zip(t1s, t2[1:])), MultiSeries.zero(P, K))
    arg1 = (zt2 - t1t2 + w.scale(I / 2)) * t2[0].reciprocal()
    shifted = F.substitute([arg1] + t1s + [MultiSeries.zero(P, K)])
    FZ = F.embed(P, list(range(N)))
    Fb = F.conjugate().substitute(t2 + [w - zt2.scale(2 * I)])
    G = MultiSeries.zero(P, K)
    for a, b, c in zip(FZ, shifted, Fb):
        G = G + (a - b) * c
    G = G.scale(2 * I)
    res = [G.diff(v) for v in range(N, P)]
    return SeriesVec([G.drop_variables(range(N, P))]), CriterionReport.from_residual(SeriesVec(res))


# ---------------------------------------------------------------------------
# jet determination along a curve


@dataclass(frozen=True)
class JetReport:
    k0: int
    l: int
    k: int
    e: int  # order of Delta along the curve
    D: tuple  # direction of the line D(lambda) = lambda * D
    ghat: tuple  # A-families in (Z'', lambda), Z = lambda^l Z''
    hhat: tuple  # B-families in (Z'', lambda)
    Gjet: SeriesVec
    coefficients: dict  # (component, alpha, j) -> a^alpha_j (nonzero only)
    lambda_residual: dict  # the entries with j != 0

    @property
    def lambda_consistent(self) -> bool:
        return not self.lambda_residual


def _lift(G: GraphForm, T: int, polynomial: bool) -> GraphForm:
    if G.trunc >= T:
        return GraphForm.from_Q([q.truncate(T) for q in G.Q], G.n, G.d, G.perm)
    if not polynomial:
        err = TruncationExhausted(f"jet determination needs Q to order {T}")
        err.required = T
        raise err
    return GraphForm.from_Q([q.with_trunc(T) for q in G.Q], G.n, G.d, G.perm)


def _adjugate(mat: list[list[MultiSeries]]) -> list[list[MultiSeries]]:
    d = len(mat)
    if d == 1:
        return [[MultiSeries.constant(1, mat[0][0].arity, mat[0][0].trunc)]]
    adj = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            minor = [row[:i] + row[i + 1:] for r, row in enumerate(mat) if r != j]
            c = series_matrix_det(minor)
            adj[i][j] = -c if (i + j) % 2 else c
    return adj


def _divide_by_var_power(s: MultiSeries, var: int, p: int) -> MultiSeries:
    out = {}
    for k, c in s.terms.items():
        if k[var] < p:
            raise DomainError("expected divisibility by a power of lambda")
        out[k[:var] + (k[var] - p,) + k[var + 1:]] = c
    return MultiSeries(s.arity, s.trunc - p, out)


def _hat_families(G: GraphForm, direction, e: int, T: int):
    """A- and B-families along ``eta = lambda * direction`` in ``(Z', lambda)``, ``Z = lambda^{2e} Z'``."""
    n, d = G.n, G.d
    N = n + d
    Tq = T + 2 * e + 1
    chain = iterated_segre(G)
    U, lay = build_U(chain)
    sp, sdp, _ = select_sigma_prime(U, lay)
    # variables of the equation: (z', w', lambda, s)
    A = N + 1 + d
    lam_i = N
    x = [MultiSeries.variable(i, A, Tq) for i in range(A)]
    lam = x[lam_i]
    inner = [None] * lay.arity
    for i, v in enumerate(lay.eta_vars):
        inner[v] = lam.scale(direction[i])
    lam2e = lam ** (2 * e)
    lame = lam ** e
    for i, v in enumerate(lay.z_vars):
        inner[v] = lam2e * x[i]
    for k, s in enumerate(sp):
        inner[lay.sigma_vars[s]] = lame * x[N + 1 + k]
    for s in sdp:
        inner[lay.sigma_vars[s]] = MultiSeries.zero(A, Tq)
    E = [c.compose(inner) - lam2e * x[n + a] for a, c in enumerate(U)]
    # L(lambda * direction): dU/dsigma' at z = sigma = 0
    drop = lay.z_vars + lay.sigma_vars
    eta_in = [lam.scale(direction[i]) for i in range(len(lay.eta_vars))]
    Lmat = [[c.diff(lay.sigma_vars[s]).drop_variables(drop).compose(eta_in) for s in sp] for c in U]
    adj = _adjugate(Lmat)
    Ereg = []
    for i in range(d):
        acc = MultiSeries.zero(A, min(a.trunc for a in adj[i]))
        for j in range(d):
            acc = acc + adj[i][j] * E[j].truncate(adj[i][j].trunc)
        Ereg.append(_divide_by_var_power(acc, lam_i, 2 * e).truncate(T))
    s_hat = solve_ift(Ereg, list(range(N + 1)), list(range(N + 1, A)))
    # t-blocks in (Z', lambda)
    B_ar = N + 1
    y = [MultiSeries.variable(i, B_ar, T) for i in range(B_ar)]
    lamy = y[N]
    sub = [None] * lay.arity
    for i, v in enumerate(lay.eta_vars):
        sub[v] = lamy.scale(direction[i])
    for i, v in enumerate(lay.z_vars):
        sub[v] = (lamy ** (2 * e)) * y[i]
    for k, s in enumerate(sp):
        sub[lay.sigma_vars[s]] = (lamy ** e) * s_hat[k]
    for s in sdp:
        sub[lay.sigma_vars[s]] = MultiSeries.zero(B_ar, T)
    Tt = [t.compose(sub) for t in chain_substitution(lay, Tq)]
    A_fam = tuple(chain.v[2 * i - 1].compose(Tt) for i in range(1, d + 1))
    B_fam = tuple(chain.v[2 * i - 2].conjugate().compose(Tt) for i in range(1, d + 2))
    return A_fam, B_fam


def _scaling_l(families, N: int, e: int) -> int:
    l = 0
    for fam in families:
        for c in fam:
            for k in c.terms:
                b = sum(k[:N])
                if b:
                    l = max(l, math.ceil(Fraction(2 * e * b - k[N], b)))
    return l


def _rescale(s: MultiSeries, N: int, shift: int, k: int) -> MultiSeries:
    """``Z' -> Z'' lambda^{-shift}``: exponent of lambda drops by ``shift |beta|``."""
    out = {}
    for key, c in s.terms.items():
        b = sum(key[:N])
        p = key[N] - shift * b
        if p < 0:
            raise DomainError("family is not regular after rescaling")
        if b + p <= k:
            out[key[:N] + (p,)] = c
    return MultiSeries(s.arity, k, out)


def jet_determination(M, M_target, Fjet: Sequence[MultiSeries], k0: int, direction: Optional[Sequence] = None,
                      seed: int = 0, retries: int = DEFAULT_RETRIES, polynomial: bool = False) -> JetReport:
    """Jet of ``G`` to order ``k0`` from the ``k0 (l + 1)``-jet of ``F``.

    Along ``eta = lambda * direction`` the families become regular in
    ``(Z / lambda^l, lambda)``; the ``lambda^0`` part of the composite gives
    ``G``.  ``polynomial`` lets Q-data of order below the required one be
    read as exact polynomials.
    """
    G, Gt = as_graph(M), as_graph(M_target)
    if not G.normal or not Gt.normal:
        raise DomainError("jet determination works in normal coordinates")
    Fjet = SeriesVec(Fjet)
    N, d = G.N, G.d
    m = d + 1
    chain = iterated_segre(G)
    U, lay = build_U(chain)
    _, _, Delta = select_sigma_prime(U, lay)
    lam1 = [MultiSeries.variable(0, 1, Delta.trunc)]
    if direction is None:
        rng = random.Random(seed)
        cands = [[_gauss_rational(rng) for _ in range(Delta.arity)] for _ in range(retries)]
    else:
        cands = [[Coeff.of(c) for c in direction]]
    e = None
    for cand in cands:
        o = Delta.compose([lam1[0].scale(c) for c in cand]).order()
        if o is not None:
            e, direction = o, cand
            break
    if e is None:
        raise NotFiniteTypeAtOrderK("Delta vanishes identically along every sampled line")

    l = 0
    while True:
        k = k0 * (l + 1)
        T = k * (1 + 2 * e)
        Gl = _lift(G, T + 2 * e + 1, polynomial)
        A_fam, B_fam = _hat_families(Gl, direction, e, T)
        l_new = _scaling_l(A_fam + B_fam, N, e)
        if l_new <= l:
            break
        l = l_new
    k = k0 * (l + 1)
    shift = 2 * e - l
    ghat = tuple(SeriesVec(_rescale(c, N, shift, k) for c in fam) for fam in A_fam)
    hhat = tuple(SeriesVec(_rescale(c, N, shift, k) for c in fam) for fam in B_fam)

    if Fjet.trunc < k:
        err = TruncationExhausted(f"need the {k}-jet of F")
        err.required = k
        raise err
    F = Fjet.truncate(k)
    Fb = F.conjugate()
    Gtl = _lift(Gt, k, polynomial)
    Psi = SeriesVec(iterated_segre(Gtl, 2 * m).v[2 * m - 1][Gt.n:])
    y = [MultiSeries.variable(i, N + 1, k) for i in range(N + 1)]
    lam_l = y[N] ** l
    Zs = [lam_l * y[i] for i in range(N)]
    slots: list[MultiSeries] = []
    for j in range(1, 2 * m + 1):
        if j == 2 * m:
            slots.extend(F.compose(Zs))
        elif j % 2:
            slots.extend(Fb.compose(list(hhat[(j - 1) // 2])))
        else:
            slots.extend(F.compose(list(ghat[j // 2 - 1])))
    C = Psi.compose(slots)
    coeffs = {}
    lam_res = {}
    gterms = [dict() for _ in range(len(C))]
    for c, s in enumerate(C):
        for key, v in s.terms.items():
            alpha = key[:N]
            j = key[N] - l * sum(alpha)
            coeffs[(c, alpha, j)] = v
            if j != 0:
                lam_res[(c, alpha, j)] = v
            elif sum(alpha) <= k0:
                gterms[c][alpha] = v
    Gjet = SeriesVec(MultiSeries(N, k0, t) for t in gterms)
    return JetReport(k0, l, k, e, tuple(direction), ghat, hhat, Gjet, coeffs, lam_res)
