"""Normal coordinates for two pushed copies of the Heisenberg hypersurface."""

from segrejet import models
from segrejet.coeff import I
from segrejet.manifold import manifold_from_rho, normality_residual
from segrejet.normal import involution_residual, normalize, segre_constancy_residual
from segrejet.parser import format_manifold, format_series
from segrejet.series import MultiSeries, invert_map

K = 6

# The image of Im w = |z|^2 under (z, w) -> (z, w + z^2) is not normal:
# Q(z, 0, tau) picks up a z^2 term.
M = models.pushed_heisenberg(K)
print("input:      ", format_manifold(M))
print("normal?     ", M.graph.normal)

r = normalize(M)
print("normalized:  w =", format_series(r.Qnormal.Q[0], ["z", "conj(z)", "conj(w)"]))
print("wtilde:     ", format_series(r.wtilde[0], ["z", "w"]))
print("residuals zero:",
      normality_residual(r.Qnormal).is_zero(),
      involution_residual(r.iota).is_zero(),
      segre_constancy_residual(M, r).is_zero())

# Pushing by w -> w + i w^2 instead gives a non-trivial involution a(s):
# iota is no longer the identity in the chosen fibre coordinates, but it is
# still an involution.
z, w = MultiSeries.variable(0, 2, K), MultiSeries.variable(1, 2, K)
inv = invert_map([z, w + (w * w).scale(I)])
Zw, Zb = list(inv.embed(4, [0, 1])), list(inv.conjugate().embed(4, [2, 3]))
zz, ww, zeta, om = (MultiSeries.variable(i, 4, K) for i in range(4))
rho = (ww - om).scale(-I / 2) - zz * zeta
M2 = manifold_from_rho([rho.compose(Zw + Zb)], 2)

r2 = normalize(M2)
print()
print("a(s) =", format_series(r2.iota[0], ["s"]))
print("a(conj a(s)) - s zero:", involution_residual(r2.iota).is_zero())
print("Q after normalizing:", format_series(r2.Qnormal.Q[0], ["z", "conj(z)", "conj(w)"]))
