"""Generic submanifolds: defining equations, graph form, Segre varieties, finite type.

Variable conventions
--------------------
* ``rho`` lives in ``2N`` variables ``(Z, zeta)``; ``Z = (z, w)`` for germs
  built from graph data.
* ``Q`` lives in ``2n + d`` variables ``(z, chi, tau)``.
* ``Qbar`` is ``Q`` with conjugated coefficients; its slots are read as
  ``(chi, z, w)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import linalg
from .coeff import Coeff, Number
from .errors import DomainError, SingularJacobian, TruncationExhausted
from .series import MultiSeries, SeriesVec, solve_ift


@dataclass(frozen=True)
class GraphForm:
    """``w = Q(z, zbar, wbar)`` with cached conjugate series.

    ``perm`` lists, for each graph coordinate ``(z..., w...)``, the index of
    the original ``Z`` coordinate it came from.
    """

    n: int
    d: int
    Q: SeriesVec
    Qbar: SeriesVec = field(repr=False)
    normal: bool = False
    perm: tuple = ()

    @classmethod
    def from_Q(cls, Q: Sequence[MultiSeries], n: int, d: int, perm: Optional[Sequence[int]] = None) -> "GraphForm":
        Q = SeriesVec(Q)
        if len(Q) != d or Q.arity != 2 * n + d:
            raise DomainError(f"Q must have {d} components in {2 * n + d} variables")
        if any(Q.constant_terms()):
            raise DomainError("Q(0) must vanish")
        perm = tuple(perm) if perm is not None else tuple(range(n + d))
        g = cls(n, d, Q, Q.conjugate(), False, perm)
        if normality_residual(g).is_zero():
            g = cls(n, d, Q, g.Qbar, True, perm)
        return g

    @property
    def N(self) -> int:
        return self.n + self.d

    @property
    def trunc(self) -> int:
        return self.Q.trunc

    # variable index helpers in (z, chi, tau)
    def z_vars(self) -> list[int]:
        return list(range(self.n))

    def chi_vars(self) -> list[int]:
        return list(range(self.n, 2 * self.n))

    def tau_vars(self) -> list[int]:
        return list(range(2 * self.n, 2 * self.n + self.d))


@dataclass(frozen=True)
class ManifoldGerm:
    """Germ at 0 of a generic submanifold ``rho(Z, Zbar) = 0`` of ``C^N``."""

    N: int
    d: int
    rho: SeriesVec
    graph: Optional[GraphForm] = None
    kind: str = "rho"

    @property
    def n(self) -> int:
        return self.N - self.d

    @property
    def trunc(self) -> int:
        return self.rho.trunc


@dataclass(frozen=True)
class FiniteTypeReport:
    verdict: str  # "yes" or "no-up-to-order-K"
    witness: object
    order: Optional[int]
    method: str
    trunc: int

    @property
    def finite(self) -> bool:
        return self.verdict == "yes"


# ---------------------------------------------------------------------------
# reality and genericity


def swap_conjugate(rho: MultiSeries, N: int) -> MultiSeries:
    """``conj(rho(conj zeta, conj Z))``: swap the Z and zeta blocks, conjugate coefficients."""
    positions = [(i + N) % (2 * N) for i in range(2 * N)]
    return rho.embed(2 * N, positions).conjugate()


def reality_violations(rho: Sequence[MultiSeries], N: int) -> list[tuple[int, tuple, Coeff, Coeff]]:
    """Offending ``(component, multi-index, coefficient, swapped-conjugate coefficient)``."""
    out = []
    for j, r in enumerate(rho):
        s = swap_conjugate(r, N)
        for key in sorted(set(r.terms) | set(s.terms)):
            a, b = r.coefficient(key), s.coefficient(key)
            if a != b:
                out.append((j, key, a, b))
    return out


def check_reality(rho: Sequence[MultiSeries], N: Optional[int] = None) -> bool:
    """``rho(Z, zeta) == conj(rho(conj zeta, conj Z))`` as K-jets."""
    rho = list(rho)
    if N is None:
        N = rho[0].arity // 2
    return all(r == swap_conjugate(r, N) for r in rho)


def check_generic(rho: Sequence[MultiSeries], N: Optional[int] = None) -> bool:
    """Rank of ``d rho / d Z`` at 0 equals the number of equations."""
    rho = SeriesVec(rho)
    if N is None:
        N = rho.arity // 2
    if any(rho.constant_terms()):
        return False
    return linalg.rank(rho.jacobian_at_zero(range(N))) == len(rho)


def manifold_from_Q(Q: Sequence[MultiSeries], n: int, d: int) -> ManifoldGerm:
    """Germ with ``rho := w - Q(z, chi, tau)``; the graph reality identity is checked instead of reality."""
    g = GraphForm.from_Q(Q, n, d)
    N = n + d
    res = graph_reality_residual(g)
    if not res.is_zero():
        raise DomainError("Q does not satisfy Q(z, chi, Qbar(chi, z, w)) = w")
    positions = list(range(n)) + list(range(N, N + n)) + list(range(N + n, 2 * N))
    rho = []
    for k, q in enumerate(g.Q):
        rho.append(MultiSeries.variable(n + k, 2 * N, q.trunc) - q.embed(2 * N, positions))
    return ManifoldGerm(N, d, SeriesVec(rho), g, kind="Q")


def manifold_from_rho(rho: Sequence[MultiSeries], N: int, d: Optional[int] = None, kind: str = "rho") -> ManifoldGerm:
    rho = SeriesVec(rho)
    d = len(rho) if d is None else d
    if rho.arity != 2 * N or len(rho) != d:
        raise DomainError("rho must have d components in 2N variables")
    if any(rho.constant_terms()):
        raise DomainError("rho(0) must vanish")
    if not check_reality(rho, N):
        raise DomainError("rho violates the reality condition")
    if not check_generic(rho, N):
        raise DomainError("rho is not generic at 0")
    M = ManifoldGerm(N, d, rho, None, kind)
    return ManifoldGerm(N, d, rho, to_graph_form(M), kind)


def manifold_from_real_form(phi: Sequence[MultiSeries], n: int, d: int) -> ManifoldGerm:
    """``Im w = phi(z, zbar, Re w)`` with ``phi`` given in variables ``(z, chi, s)``.

    ``rho = (w - tau)/(2i) - phi(z, chi, (w + tau)/2)``.
    """
    phi = SeriesVec(phi)
    if len(phi) != d or phi.arity != 2 * n + d:
        raise DomainError(f"phi must have {d} components in {2 * n + d} variables")
    N = n + d
    K = phi.trunc
    x = [MultiSeries.variable(i, 2 * N, K) for i in range(2 * N)]
    z, w, chi, tau = x[:n], x[n:N], x[N:N + n], x[N + n:]
    s = [(a + b).scale("1/2") for a, b in zip(w, tau)]
    inner = z + chi + s
    half_i = 1 / Coeff.of(2j)
    rho = [(w[k] - tau[k]).scale(half_i) - phi[k].compose(inner) for k in range(d)]
    return manifold_from_rho(rho, N, d, kind="real")


# ---------------------------------------------------------------------------
# graph form


def to_graph_form(M: ManifoldGerm) -> GraphForm:
    """Solve ``rho = 0`` for ``w``.

    The ``w`` block is the lexicographically first ``d``-subset of the ``Z``
    coordinates with invertible Jacobian block; the choice is recorded in
    ``perm``.
    """
    N, d = M.N, M.d
    n = N - d
    jac = M.rho.jacobian_at_zero(range(N))
    chosen = None
    for S in itertools.combinations(range(N), d):
        block = [[row[c] for c in S] for row in jac]
        if linalg.rank(block) == d:
            chosen = S
            break
    if chosen is None:
        raise SingularJacobian("no coordinate split with invertible w-block (rho not generic)")
    rest = [i for i in range(N) if i not in chosen]
    perm = tuple(rest) + tuple(chosen)
    # relabel: original Z_perm[k] -> graph slot k, same for zeta
    positions = [0] * (2 * N)
    for k, orig in enumerate(perm):
        positions[orig] = k
        positions[N + orig] = N + k
    rho_g = [r.embed(2 * N, positions) for r in M.rho]
    x_vars = list(range(n)) + list(range(N, N + n)) + list(range(N + n, 2 * N))
    y_vars = list(range(n, N))
    Q = solve_ift(rho_g, x_vars, y_vars)
    return GraphForm.from_Q(Q, n, d, perm)


def graph_reality_residual(G: GraphForm) -> SeriesVec:
    """``Q(z, chi, Qbar(chi, z, w)) - w`` in variables ``(z, chi, w)``."""
    n, d = G.n, G.d
    A = 2 * n + d
    K = G.trunc
    zs = [MultiSeries.variable(i, A, K) for i in range(n)]
    chis = [MultiSeries.variable(n + i, A, K) for i in range(n)]
    ws = [MultiSeries.variable(2 * n + k, A, K) for k in range(d)]
    inner_bar = chis + zs + ws
    qb = [qb.compose(inner_bar) for qb in G.Qbar]
    return SeriesVec(q.compose(zs + chis + qb) - w for q, w in zip(G.Q, ws))


def normality_residual(G: GraphForm) -> SeriesVec:
    """Both halves ``Q(z,0,tau) - tau`` and ``Q(0,chi,tau) - tau`` stacked."""
    out = []
    n, d = G.n, G.d
    A = 2 * n + d
    for k, q in enumerate(G.Q):
        tau = MultiSeries.variable(2 * n + k, A, q.trunc)
        out.append(q.set_zero(range(n, 2 * n)) - tau)
    for k, q in enumerate(G.Q):
        tau = MultiSeries.variable(2 * n + k, A, q.trunc)
        out.append(q.set_zero(range(n)) - tau)
    return SeriesVec(out)


# ---------------------------------------------------------------------------
# points and Segre varieties


def _conj_point(p: Sequence[Number]) -> list[Coeff]:
    return [Coeff.of(x).conjugate() for x in p]


def segre_parametrization(G: GraphForm, p: Optional[Sequence[Number]] = None, check_on_M: bool = False) -> SeriesVec:
    """``t -> (t, Q(t, conj p_z, conj p_w))`` parametrizing the Segre variety at ``p``.

    With ``check_on_M`` the point is first required to satisfy the defining
    equation exactly.
    """
    n = G.n
    K = G.trunc
    if p is None:
        p = [0] * G.N
    if len(p) != G.N:
        raise DomainError("point has wrong dimension")
    if check_on_M and not on_manifold(G, p):
        raise DomainError("point is not on M")
    pc = _conj_point(p)
    ts = [MultiSeries.variable(i, n, K) for i in range(n)]
    inner = ts + [MultiSeries.constant(c, n, K) for c in pc]
    return SeriesVec(ts + [q.substitute(inner) for q in G.Q])


def segre_residual(G: GraphForm, q: Sequence[Number], p: Sequence[Number]) -> list[Coeff]:
    """``q_w - Q(q_z, conj p_z, conj p_w)``; zero iff ``q`` lies on the Segre variety of ``p``."""
    n = G.n
    pc = _conj_point(p)
    arg = [Coeff.of(x) for x in q[:n]] + pc
    return [Coeff.of(qw) - Qk.evaluate(arg) for qw, Qk in zip(q[n:], G.Q)]


def in_segre(G: GraphForm, q: Sequence[Number], p: Sequence[Number]) -> bool:
    return not any(segre_residual(G, q, p))


def on_manifold(G: GraphForm, p: Sequence[Number]) -> bool:
    """``p`` in M iff ``p`` lies on its own Segre variety."""
    return in_segre(G, p, p)


# ---------------------------------------------------------------------------
# finite type


def as_graph(obj) -> GraphForm:
    if isinstance(obj, GraphForm):
        return obj
    if isinstance(obj, ManifoldGerm):
        return obj.graph if obj.graph is not None else to_graph_form(obj)
    raise TypeError(f"expected GraphForm or ManifoldGerm, got {type(obj).__name__}")


def finite_type_hypersurface(G: GraphForm) -> FiniteTypeReport:
    """Finite type of a hypersurface in normal coordinates: ``Q(z, chi, 0)`` not zero."""
    G = as_graph(G)
    if G.d != 1:
        raise DomainError("hypersurface test needs d = 1")
    if not G.normal:
        raise DomainError("hypersurface test needs normal coordinates")
    q0 = G.Q[0].drop_variables(G.tau_vars())
    if q0.is_zero():
        return FiniteTypeReport("no-up-to-order-K", None, None, "hypersurface", G.trunc)
    return FiniteTypeReport("yes", q0.homogeneous(q0.order()), q0.order(), "hypersurface", G.trunc)


def cr_vector_fields(G: GraphForm) -> tuple[list[list[MultiSeries]], list[list[MultiSeries]]]:
    """Tangent (1,0) and (0,1) fields on the complexification, coordinates ``(z, chi, tau)``.

    ``L_j = d/dz_j`` and ``Lbar_j = d/dchi_j + sum_k c_jk d/dtau_k`` with
    ``c_jk = (dQbar_k/dchi_j)(chi, z, Q(z, chi, tau))``; all coefficients are
    jets of order ``K - 1``.
    """
    n, d = G.n, G.d
    A = 2 * n + d
    K = G.trunc
    if K < 1:
        raise TruncationExhausted("need at least a 1-jet of Q")
    zs = [MultiSeries.variable(i, A, K) for i in range(n)]
    chis = [MultiSeries.variable(n + i, A, K) for i in range(n)]
    inner = chis + zs + list(G.Q)
    zero = MultiSeries.zero(A, K - 1)
    one = MultiSeries.constant(1, A, K - 1)
    L = []
    for j in range(n):
        L.append([one if i == j else zero for i in range(A)])
    Lbar = []
    for j in range(n):
        vec = [zero] * A
        vec[n + j] = one
        for k, qb in enumerate(G.Qbar):
            vec[2 * n + k] = qb.diff(j).compose(inner)
        Lbar.append(vec)
    return L, Lbar


def lie_bracket(X: Sequence[MultiSeries], Y: Sequence[MultiSeries]) -> list[MultiSeries]:
    t = min(c.trunc for c in list(X) + list(Y))
    if t < 1:
        raise TruncationExhausted("bracket needs 1-jets of the fields")
    X = [c.truncate(t) for c in X]
    Y = [c.truncate(t) for c in Y]
    Xl = [c.truncate(t - 1) for c in X]
    Yl = [c.truncate(t - 1) for c in Y]
    out = []
    for i in range(len(X)):
        acc = MultiSeries.zero(X[0].arity, t - 1)
        for k in range(len(X)):
            if not Xl[k].is_zero():
                acc = acc + Xl[k] * Y[i].diff(k)
            if not Yl[k].is_zero():
                acc = acc - Yl[k] * X[i].diff(k)
        out.append(acc)
    return out


def finite_type_lie(G: GraphForm, maxlen: Optional[int] = None) -> FiniteTypeReport:
    """Iterated brackets of the CR fields evaluated at 0.

    Right-normed brackets of length ``<= maxlen`` are generated; the verdict is
    ``yes`` as soon as their values span the ``2n + d`` dimensional
    complexified tangent space.  Lengths beyond ``K`` cannot be evaluated from
    K-jets and raise :class:`TruncationExhausted`.
    """
    G = as_graph(G)
    K = G.trunc
    if maxlen is None:
        maxlen = max(K - 1, 1)
    if maxlen > K:
        raise TruncationExhausted(f"bracket length {maxlen} needs jets of order > {K}")
    n, d = G.n, G.d
    A = 2 * n + d
    L, Lbar = cr_vector_fields(G)
    gens = [(f"L{j + 1}", v) for j, v in enumerate(L)] + [(f"Lbar{j + 1}", v) for j, v in enumerate(Lbar)]
    values: list[list[Coeff]] = []
    words: list[str] = []

    def add(word: str, vec: Sequence[MultiSeries]) -> bool:
        val = [c.constant_term() for c in vec]
        if not any(val):
            return False
        if linalg.rank(values + [val]) > len(values):
            values.append(val)
            words.append(word)
            return True
        return False

    layer = []
    for word, vec in gens:
        add(word, vec)
        layer.append((word, vec))
    if len(values) == A:
        return FiniteTypeReport("yes", words, 1, "lie", K)
    for length in range(2, maxlen + 1):
        nxt = []
        for gw, gv in gens:
            for bw, bv in layer:
                br = lie_bracket(gv, bv)
                word = f"[{gw},{bw}]"
                add(word, br)
                nxt.append((word, br))
                if len(values) == A:
                    return FiniteTypeReport("yes", words, length, "lie", K)
        layer = nxt
    return FiniteTypeReport("no-up-to-order-K", words, None, "lie", K)
