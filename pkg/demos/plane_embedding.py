# # Squeezing well-separated points into the hyperbolic plane
#
# Keep the heights, embed the x-parts on a line with a non-contracting map of
# Lipschitz constant L, and the hyperbolic distances grow by at most an
# additive 2 ln L + ln 2. For a set whose points are all far apart, an additive
# error is a small relative one.

from hyperjl import embed_plane, gen_random, separated_instance

eps = 0.5

# Generic random points are not separated, so there is no certificate, but the
# embedding is still non-contracting with a bounded additive error.

loose = gen_random(16, 6, seed=1)
res = embed_plane(loose, eps)
print("random set: min separation %.2f, distortion %.3f, certified %s"
      % (res.min_separation, res.measured_distortion, res.certified))
print("  additive bound 2 ln L + ln 2 =", res.additive_bound)

# A separated instance is generated so that its minimum distance clears the
# threshold computed from the measured line Lipschitz constant.

for n in (8, 32, 64):
    points, delta = separated_instance(n, 8, eps, seed=n, jitter=0.3)
    res = embed_plane(points, eps)
    print(f"n={n:3d}  min sep {res.min_separation:7.2f}  needed {res.conservative_separation:7.2f}  "
          f"L {res.line.lipschitz:.2f}  distortion {res.measured_distortion:.4f}  certified {res.certified}")
