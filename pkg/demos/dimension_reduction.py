# # Reducing the dimension of hyperbolic points
#
# The recipe: keep each height z, and push the x-parts through a random
# linear map that never shrinks a pairwise Euclidean distance and stretches
# none by more than a factor 1 + eps. Because distance is increasing in
# |x1 - x2| with the heights fixed, hyperbolic distances can only grow, and
# by a relative amount that fades as the distance gets large.

import numpy as np

from hyperjl import distortion, gen_random, pairwise_distances, reduce

points = gen_random(128, 2048, seed=7)
eps = 0.5

result = reduce(points, eps, seed=7)
print("input dim", points.dim, "-> output dim", result.reduced.dim, "after", result.attempts, "attempt(s)")

# Every pair carries a certificate: delta_in <= delta_out <= (1 + 3 eps / (1 + delta_in)) delta_in.

din = np.array([r.delta_in for r in result.certificate])
dout = np.array([r.delta_out for r in result.certificate])
print("smallest ratio d_out/d_in:", (dout / din).min())
print("largest ratio d_out/d_in :", (dout / din).max())
print("largest used fraction of the additive budget 3 eps D / (1 + D):",
      ((dout - din) / (3 * eps * din / (1 + din))).max())

# Long distances barely move: bin the pairs by input distance.

edges = np.quantile(din, [0, 0.25, 0.5, 0.75, 1.0])
for lo, hi in zip(edges, edges[1:]):
    sel = (din >= lo) & (din <= hi)
    print(f"D in [{lo:5.2f}, {hi:5.2f}]  mean relative stretch {np.mean(dout[sel] / din[sel] - 1):.4f}")

report = distortion(pairwise_distances(points), pairwise_distances(result.reduced))
print("overall distortion:", report.distortion)
