"""Rebuilding the transversal part G of a map from its CR part F."""

from segrejet import models
from segrejet.coeff import I
from segrejet.parser import format_series
from segrejet.reconstruction import (
    ball_model_G,
    extension_exists,
    independence_residual,
    prepare_frame,
    reconstruct_full_map,
    reconstruct_G,
)
from segrejet.segre import build_frame
from segrejet.series import MultiSeries

K = 6
H = models.heisenberg(K)
z, w = MultiSeries.variable(0, 2, K), MultiSeries.variable(1, 2, K)
names = ["z", "w"]

# A frame fixes a base point eta_0 with Delta(eta_0) != 0 and solves for the
# sigma' variables there; everything after that is substitution.
frame = build_frame(H, H, base=[0, 1])
print("Delta =", format_series(frame.Delta, ["eta1", "eta2"]), " base =", [str(c) for c in frame.base])

for F in (z, z.scale(2), z.scale(I), z + w, z * z):
    rep = independence_residual(frame, [F])
    line = f"F = {format_series(F, names):10s} criterion {rep.verdict:4s}"
    if rep.passed:
        line += "  G = " + format_series(reconstruct_G(frame, [F])[0], names)
    else:
        line += f"  (coefficient matching agrees: {not extension_exists(H, H, [F])})"
    print(line)

# Same numbers from the closed formula for hyperquadrics.
print()
for F in (z, z.scale(2)):
    G, rep = ball_model_G([F], 1, 1)
    print(f"ball model, F = {format_series(F, names)}: G = {format_series(G[0], names)}, parameters cancel: {rep.passed}")

# A target that is not in normal coordinates is normalized first; the
# answer comes back in the original coordinates.
mf = prepare_frame(H, models.pushed_heisenberg(K))
Hmap = reconstruct_full_map(mf, [z])
print()
print("into the pushed copy: G =", format_series(Hmap.G[0], names))
