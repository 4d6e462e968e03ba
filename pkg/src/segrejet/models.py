"""Standard model manifolds used throughout the tests and demos.

All are given directly by ``Q(z, chi, tau)``; every one except the pushed
Heisenberg hypersurface is in normal coordinates.
"""

from __future__ import annotations

from .coeff import I
from .manifold import GraphForm, ManifoldGerm, manifold_from_Q
from .series import MultiSeries


def _vars(n: int, d: int, K: int):
    A = 2 * n + d
    z = [MultiSeries.variable(i, A, K) for i in range(n)]
    chi = [MultiSeries.variable(n + i, A, K) for i in range(n)]
    tau = [MultiSeries.variable(2 * n + k, A, K) for k in range(d)]
    return z, chi, tau


def heisenberg(K: int = 6, n: int = 1) -> ManifoldGerm:
    """``Im w = |z|^2``, i.e. ``Q = tau + 2i <z, chi>``."""
    z, chi, tau = _vars(n, 1, K)
    q = tau[0]
    for a, b in zip(z, chi):
        q = q + (a * b).scale(2 * I)
    return manifold_from_Q([q], n, 1)


def heisenberg_power(a: int, K: int = 6) -> ManifoldGerm:
    """``Q = tau + 2i z^a chi^a`` (finite type of order ``2a``)."""
    z, chi, tau = _vars(1, 1, K)
    return manifold_from_Q([tau[0] + (z[0] ** a * chi[0] ** a).scale(2 * I)], 1, 1)


def hyperplane(K: int = 6, n: int = 1) -> ManifoldGerm:
    """``Im w = 0`` (Levi flat, nowhere of finite type)."""
    _, _, tau = _vars(n, 1, K)
    return manifold_from_Q([tau[0]], n, 1)


def example_infinite_type(K: int = 6) -> ManifoldGerm:
    """``Im w = (Re w)|z|^2``: ``Q = tau (1 + i z chi) / (1 - i z chi)``."""
    z, chi, tau = _vars(1, 1, K)
    x = (z[0] * chi[0]).scale(I)
    return manifold_from_Q([tau[0] * (1 + x) * (1 - x).reciprocal()], 1, 1)


def pushed_heisenberg(K: int = 6) -> ManifoldGerm:
    """Image of the Heisenberg hypersurface under ``(z, w) -> (z, w + z^2)``; not normal."""
    z, chi, tau = _vars(1, 1, K)
    return manifold_from_Q([tau[0] + z[0] * z[0] - chi[0] * chi[0] + (z[0] * chi[0]).scale(2 * I)], 1, 1)


def heisenberg_product(K: int = 6) -> ManifoldGerm:
    """Codimension two product ``Im w_k = |z_k|^2`` in ``C^4``."""
    z, chi, tau = _vars(2, 2, K)
    q1 = tau[0] + (z[0] * chi[0]).scale(2 * I)
    q2 = tau[1] + (z[1] * chi[1]).scale(2 * I)
    return manifold_from_Q([q1, q2], 2, 2)


def graph(M: ManifoldGerm) -> GraphForm:
    return M.graph
