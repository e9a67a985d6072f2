"""
Convex bodies and collision distance
====================================

Discs, polytopes and ellipsoids are all described by their support mapping,
so one GJK routine measures the distance between any pair. The free-space
distance of a set subtracts the robot radius from its distance to the
nearest obstacle or workspace wall.
"""

import numpy as np

from timegov.environment import make_environment, point_free_distance, set_free_distance
from timegov.geometry import Disc, Ellipsoid, Polytope, gjk_distance, support_point

# %%
# Support points pick the extreme point of a body in a direction.
disc = Disc([1.0, 1.0], 2.0)
tri = Polytope([[0, 0], [2, 0], [0, 2]])
ell = Ellipsoid([0, 0], np.diag([4.0, 1.0]), 1.0)
for body in (disc, tri, ell):
    print(type(body).__name__, "support toward +x:", support_point(body, [1.0, 0.0]))

# %%
# GJK distances between mixed pairs.
print("disc to disc      ", gjk_distance(Disc([0, 0], 1), Disc([3, 0], 1)))
print("triangle to point ", gjk_distance(tri, Polytope([[4, 0]])))
print("ellipse to square ", gjk_distance(ell, Polytope([[3, -1], [4, -1], [4, 1], [3, 1]])))
print("overlapping       ", gjk_distance(disc, tri))

# %%
# A 10 m square room with a 2 m pillar, for a robot of radius 0.5 m.
env = make_environment([[0, 0], [10, 0], [10, 10], [0, 10]],
                       [Polytope([[4, 4], [6, 4], [6, 6], [4, 6]])], 0.5, 0.5)
for p in ([2, 5], [4.5, 5], [0.4, 5]):
    print(f"d_F({p}) = {point_free_distance(env, p):.3f}")

# a set is only as safe as its worst point
print("d_F(disc of radius 0.3 at (2,5)) =", round(set_free_distance(env, Disc([2, 5], 0.3)), 3))
