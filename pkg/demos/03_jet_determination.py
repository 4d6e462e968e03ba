"""Finite jet determination along a line, and what goes wrong without finite type."""

from segrejet import models
from segrejet.coeff import I, Coeff
from segrejet.errors import NotFiniteTypeAtOrderK
from segrejet.manifold import finite_type_hypersurface, finite_type_lie
from segrejet.parser import format_series
from segrejet.reconstruction import HoloMapGerm, jet_determination, verify_map
from segrejet.segre import build_U, iterated_segre, select_sigma_prime
from segrejet.series import MultiSeries, SeriesVec

# Along eta = lambda * (0, 1) the determinant Delta vanishes to order e = 1,
# the families become regular after Z = lambda^l Z'' with l = 1, and the
# 2-jet of G is fixed by the k = k0 (l + 1) = 4 jet of F.  The order-15 Q
# is needed because the lambda expansion eats degrees.
K = 15
H = models.heisenberg(K)
z, w = MultiSeries.variable(0, 2, K), MultiSeries.variable(1, 2, K)

a = Coeff(1, -1)
delta = 1 - z.scale(2 * I * a.conjugate()) - w.scale(I * a.norm2())
F = (z + w.scale(a)) * delta.reciprocal()
G = w * delta.reciprocal()
print("(F, G) is an automorphism:", verify_map(H, H, HoloMapGerm(SeriesVec([F]), SeriesVec([G]))))

jr = jet_determination(H, H, [F.truncate(4).with_trunc(K)], 2, direction=[0, 1])
print(f"e = {jr.e}, l = {jr.l}, k = {jr.k}, lambda-consistent: {jr.lambda_consistent}")
print("G from the 4-jet of F:", format_series(jr.Gjet[0], ["z", "w"]))
print("true 2-jet of G:       ", format_series(G.truncate(2), ["z", "w"]))

# Changing F above order 4 changes nothing.
bumped = F.truncate(4).with_trunc(K) + z ** 5 - w ** 7
print("after a degree 5 change:", format_series(jet_determination(H, H, [bumped], 2, direction=[0, 1]).Gjet[0], ["z", "w"]))

# Im w = (Re w)|z|^2 is not of finite type at 0.  Delta vanishes to every
# computed order and the maps (z, t w) with t real all preserve M, so no
# finite jet of F can pin down G.
K = 6
M = models.example_infinite_type(K)
print()
print("finite type:", finite_type_hypersurface(M.graph).verdict, "/", finite_type_lie(M.graph).verdict)
try:
    select_sigma_prime(*build_U(iterated_segre(M.graph)))
except NotFiniteTypeAtOrderK as e:
    print("Delta:", e)
z, w = MultiSeries.variable(0, 2, K), MultiSeries.variable(1, 2, K)
for t in (2, -3, Coeff(1, 2)):
    ok = verify_map(M, M, HoloMapGerm(SeriesVec([z]), SeriesVec([w.scale(t)])))
    print(f"(z, {t}*w) maps M into itself: {ok}")
