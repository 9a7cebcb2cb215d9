# # Distances in the half-space model
#
# A point of the half-space model is a height z > 0 together with a vector x.
# The distance between two points only needs one square root and one
# logarithm, once we write it through the "cosh gap"
#
#     cosh(d) - 1 = (|x1 - x2|^2 + (z1 - z2)^2) / (2 z1 z2).

import math

import numpy as np

from hyperjl import HalfSpacePoint, cosh_gap, distance, stable_acosh1p

p = HalfSpacePoint(1.0, [0.0, 0.0])
q = HalfSpacePoint(1.0, [2.0, 0.0])
print("d(p, q)          =", distance(p, q))
print("arccosh(3)       =", math.acosh(3.0))
print("cosh(d) - 1      =", math.cosh(distance(p, q)) - 1, "vs gap", cosh_gap(p, q))

# Points stacked on the same vertical line are |ln(z1/z2)| apart.

r = HalfSpacePoint(math.e ** 2, [0.0, 0.0])
print("vertical d(p, r) =", distance(p, r))

# Scaling every coordinate by the same positive factor is an isometry.

lam = 37.5
ps = HalfSpacePoint(lam * p.z, lam * p.x)
qs = HalfSpacePoint(lam * q.z, lam * q.x)
print("scaled d         =", distance(ps, qs))

# Why stable_acosh1p? For nearby points the gap u is tiny and 1 + u rounds
# away most of its digits before arccosh ever sees it.

for u in (1e-6, 1e-9, 1e-12, 1e-14):
    naive = math.acosh(1 + u)
    stable = stable_acosh1p(u)
    exact = 2 * math.asinh(math.sqrt(u / 2))
    print(f"u={u:<6g} naive rel err={abs(naive - exact) / exact:.1e}  stable rel err={abs(stable - exact) / exact:.1e}")

# A small random check of the triangle inequality.

rng = np.random.default_rng(0)
worst = -np.inf
for _ in range(2000):
    a, b, c = (HalfSpacePoint(math.exp(rng.uniform(-2, 2)), rng.normal(size=3)) for _ in range(3))
    worst = max(worst, distance(a, b) - distance(a, c) - distance(c, b))
print("max d(a,b) - d(a,c) - d(c,b) over 2000 triples:", worst)
